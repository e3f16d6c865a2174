#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <string>

#include "emoface/tensor_file.hpp"

namespace emoface {

// One-file checkpoint: a TEN1 archive whose meta JSON carries the stage tag,
// iteration counter, seed and config snapshots, and whose tensor entries hold
// module parameters ("<prefix>/<param name>") and Adam state
// ("opt/<prefix>/<param index>/{exp_avg,exp_avg_sq,step}").
struct CheckpointData {
  std::string kind;  // "trainer" or "emoclf"
  std::string stage; // "init" | "gan" | "classifier"
  int64_t iteration = 0;
  uint64_t seed = 0;
  std::string model_config_json;
  std::string train_config_json;
  int format_version = 1;
  TensorArchive archive;
};

void save_checkpoint_file(const std::filesystem::path& path, const CheckpointData& data);
CheckpointData load_checkpoint_file(const std::filesystem::path& path);

// Strict parameter (de)serialization. Loading refuses on any missing,
// unexpected, or shape-mismatched entry and reports the full diff.
void append_module_params(TensorArchive& ar, const std::string& prefix,
                          const torch::nn::Module& module);
void load_module_params(const TensorArchive& ar, const std::string& prefix,
                        torch::nn::Module& module);

void append_adam_state(TensorArchive& ar, const std::string& prefix, torch::optim::Adam& opt,
                       const std::vector<torch::Tensor>& params);
void load_adam_state(const TensorArchive& ar, const std::string& prefix,
                     torch::optim::Adam& opt, const std::vector<torch::Tensor>& params);

}  // namespace emoface
