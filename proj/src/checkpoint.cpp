#include "emoface/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include "emoface/common.hpp"

namespace emoface {

using nlohmann::json;

void save_checkpoint_file(const std::filesystem::path& path, const CheckpointData& data) {
  TensorArchive ar = data.archive;
  ar.meta = json{{"kind", data.kind},
                 {"stage", data.stage},
                 {"iteration", data.iteration},
                 {"seed", data.seed},
                 {"model_config", data.model_config_json},
                 {"train_config", data.train_config_json},
                 {"format_version", data.format_version}}
                .dump(2);
  ar.save(path);
}

CheckpointData load_checkpoint_file(const std::filesystem::path& path) {
  CheckpointData data;
  data.archive = TensorArchive::load(path);
  json meta = json::parse(data.archive.meta);
  data.kind = meta.at("kind").get<std::string>();
  data.stage = meta.at("stage").get<std::string>();
  data.iteration = meta.at("iteration").get<int64_t>();
  data.seed = meta.at("seed").get<uint64_t>();
  data.model_config_json = meta.at("model_config").get<std::string>();
  data.train_config_json = meta.at("train_config").get<std::string>();
  data.format_version = meta.at("format_version").get<int>();
  if (data.format_version != 1)
    throw ConfigError("unsupported checkpoint format version " +
                      std::to_string(data.format_version));
  return data;
}

void append_module_params(TensorArchive& ar, const std::string& prefix,
                          const torch::nn::Module& module) {
  for (const auto& p : module.named_parameters())
    ar.tensors[prefix + "/" + p.key()] = p.value().detach().clone();
  for (const auto& b : module.named_buffers())
    ar.tensors[prefix + "/" + b.key()] = b.value().detach().clone();
}

void load_module_params(const TensorArchive& ar, const std::string& prefix,
                        torch::nn::Module& module) {
  std::vector<std::string> problems;
  std::set<std::string> consumed;
  auto visit = [&](const std::string& name, torch::Tensor& dst) {
    const std::string key = prefix + "/" + name;
    auto it = ar.tensors.find(key);
    if (it == ar.tensors.end()) {
      problems.push_back("missing: " + key);
      return;
    }
    consumed.insert(key);
    if (it->second.sizes() != dst.sizes()) {
      std::ostringstream os;
      os << "shape mismatch: " << key << " checkpoint " << it->second.sizes() << " vs model "
         << dst.sizes();
      problems.push_back(os.str());
      return;
    }
    torch::NoGradGuard g;
    dst.copy_(it->second.to(dst.scalar_type()));
  };
  for (auto p : module.named_parameters()) visit(p.key(), p.value());
  for (auto b : module.named_buffers()) visit(b.key(), b.value());
  for (const auto& [key, _] : ar.tensors) {
    if (key.starts_with(prefix + "/") && !consumed.count(key))
      problems.push_back("unexpected: " + key);
  }
  if (!problems.empty()) {
    std::string msg = "checkpoint topology mismatch for '" + prefix + "':";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

void append_adam_state(TensorArchive& ar, const std::string& prefix, torch::optim::Adam& opt,
                       const std::vector<torch::Tensor>& params) {
  auto& state = opt.state();
  for (size_t i = 0; i < params.size(); ++i) {
    auto it = state.find(params[i].unsafeGetTensorImpl());
    if (it == state.end()) continue;  // param never stepped yet
    auto& s = static_cast<torch::optim::AdamParamState&>(*it->second);
    const std::string base = "opt/" + prefix + "/" + std::to_string(i) + "/";
    ar.tensors[base + "exp_avg"] = s.exp_avg().detach().clone();
    ar.tensors[base + "exp_avg_sq"] = s.exp_avg_sq().detach().clone();
    ar.tensors[base + "step"] = torch::tensor(s.step(), torch::kInt64);
    if (s.max_exp_avg_sq().defined())
      ar.tensors[base + "max_exp_avg_sq"] = s.max_exp_avg_sq().detach().clone();
  }
}

void load_adam_state(const TensorArchive& ar, const std::string& prefix,
                     torch::optim::Adam& opt, const std::vector<torch::Tensor>& params) {
  for (size_t i = 0; i < params.size(); ++i) {
    const std::string base = "opt/" + prefix + "/" + std::to_string(i) + "/";
    auto it = ar.tensors.find(base + "exp_avg");
    if (it == ar.tensors.end()) continue;
    auto state = std::make_unique<torch::optim::AdamParamState>();
    TORCH_CHECK(it->second.sizes() == params[i].sizes(),
                "adam state shape mismatch at ", base);
    state->exp_avg(it->second.clone());
    state->exp_avg_sq(ar.at(base + "exp_avg_sq").clone());
    state->step(ar.at(base + "step").item<int64_t>());
    if (ar.contains(base + "max_exp_avg_sq"))
      state->max_exp_avg_sq(ar.at(base + "max_exp_avg_sq").clone());
    opt.state()[params[i].unsafeGetTensorImpl()] = std::move(state);
  }
}

}  // namespace emoface
