#include "emoface/tensor_file.hpp"

#include <cstring>
#include <fstream>

#include "emoface/common.hpp"

namespace emoface {
namespace {

constexpr char kMagic[4] = {'T', 'E', 'N', '1'};

uint8_t dtype_code(torch::ScalarType t) {
  switch (t) {
    case torch::kUInt8: return 0;
    case torch::kFloat32: return 1;
    case torch::kFloat64: return 2;
    case torch::kInt64: return 3;
    default: throw DataError("TensorArchive: unsupported dtype " + std::string(toString(t)));
  }
}

torch::ScalarType dtype_from_code(uint8_t c) {
  switch (c) {
    case 0: return torch::kUInt8;
    case 1: return torch::kFloat32;
    case 2: return torch::kFloat64;
    case 3: return torch::kInt64;
    default: throw DataError("TensorArchive: bad dtype code " + std::to_string(c));
  }
}

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError("TensorArchive: truncated file");
  return v;
}

}  // namespace

void TensorArchive::save(const std::filesystem::path& path) const {
  static_assert(std::endian::native == std::endian::little, "TEN1 assumes little-endian");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for write: " + path.string());
  os.write(kMagic, 4);
  write_pod<uint32_t>(os, static_cast<uint32_t>(tensors.size()));
  write_pod<uint32_t>(os, static_cast<uint32_t>(meta.size()));
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  for (const auto& [name, tensor] : tensors) {  // std::map iterates sorted
    auto t = tensor.contiguous().cpu();
    write_pod<uint16_t>(os, static_cast<uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<uint8_t>(os, dtype_code(t.scalar_type()));
    write_pod<uint8_t>(os, static_cast<uint8_t>(t.dim()));
    for (int64_t d : t.sizes()) write_pod<int64_t>(os, d);
    uint64_t nbytes = static_cast<uint64_t>(t.numel()) * t.element_size();
    write_pod<uint64_t>(os, nbytes);
    os.write(static_cast<const char*>(t.const_data_ptr()), static_cast<std::streamsize>(nbytes));
  }
  if (!os) throw DataError("write failed: " + path.string());
}

TensorArchive TensorArchive::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("not a TEN1 archive: " + path.string());
  TensorArchive ar;
  auto count = read_pod<uint32_t>(is);
  auto meta_len = read_pod<uint32_t>(is);
  ar.meta.resize(meta_len);
  is.read(ar.meta.data(), meta_len);
  for (uint32_t i = 0; i < count; ++i) {
    auto name_len = read_pod<uint16_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    auto dtype = dtype_from_code(read_pod<uint8_t>(is));
    auto ndim = read_pod<uint8_t>(is);
    std::vector<int64_t> dims(ndim);
    for (auto& d : dims) d = read_pod<int64_t>(is);
    auto nbytes = read_pod<uint64_t>(is);
    auto t = torch::empty(dims, torch::TensorOptions().dtype(dtype));
    if (static_cast<uint64_t>(t.numel()) * t.element_size() != nbytes)
      throw DataError("TensorArchive: size mismatch for entry " + name);
    is.read(static_cast<char*>(t.data_ptr()), static_cast<std::streamsize>(nbytes));
    if (!is) throw DataError("TensorArchive: truncated payload for " + name);
    ar.tensors.emplace(std::move(name), std::move(t));
  }
  return ar;
}

const torch::Tensor& TensorArchive::at(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw DataError("TensorArchive: missing entry " + name);
  return it->second;
}

void save_tensor(const std::filesystem::path& path, const torch::Tensor& t) {
  TensorArchive ar;
  ar.tensors.emplace("data", t);
  ar.save(path);
}

torch::Tensor load_tensor(const std::filesystem::path& path) {
  return TensorArchive::load(path).at("data");
}

}  // namespace emoface
