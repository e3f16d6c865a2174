#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <map>
#include <string>

namespace emoface {

// Minimal tensor archive ("TEN1"): a flat, little-endian container of named
// tensors plus one optional JSON metadata string. Entries are written sorted
// by name so identical contents produce identical bytes.
//
// Layout: magic "TEN1" | u32 entry_count | u32 meta_len | meta bytes |
//   per entry: u16 name_len | name | u8 dtype | u8 ndim | i64 dims[ndim] |
//              u64 payload_bytes | payload
// dtype: 0=u8, 1=f32, 2=f64, 3=i64
struct TensorArchive {
  std::map<std::string, torch::Tensor> tensors;
  std::string meta;  // free-form, typically JSON

  void save(const std::filesystem::path& path) const;
  static TensorArchive load(const std::filesystem::path& path);

  const torch::Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors.count(name) > 0; }
};

// Convenience wrappers for single-tensor files.
void save_tensor(const std::filesystem::path& path, const torch::Tensor& t);
torch::Tensor load_tensor(const std::filesystem::path& path);

}  // namespace emoface
