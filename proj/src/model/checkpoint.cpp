/* Copyright 2026 The Lighthouse Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "lighthouse/model/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"

namespace lighthouse {

namespace {

std::vector<float> as_floats(const torch::Tensor& t) {
  auto c = t.detach().to(torch::kCPU, torch::kFloat32).contiguous();
  const auto* p = c.data_ptr<float>();
  return std::vector<float>(p, p + c.numel());
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void append_le_floats(std::string& out, const std::vector<float>& values) {
  for (float f : values) {
    uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
}

std::map<std::string, torch::Tensor> tensor_map(const Checkpoint& ckpt) {
  return {ckpt.tensors.begin(), ckpt.tensors.end()};
}

const torch::Tensor& find_tensor(const std::map<std::string, torch::Tensor>& m,
                                 const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) throw FormatError("checkpoint is missing tensor '" + name + "'");
  return it->second;
}

}  // namespace

std::string model_parameter_hash(MomentDetr& model) {
  std::string bytes;
  for (const auto& p : model->named_parameters()) {
    bytes += p.key();
    append_le_floats(bytes, as_floats(p.value()));
  }
  return hex64(fnv1a64(bytes));
}

void save_checkpoint(const std::filesystem::path& path, MomentDetr& model,
                     const CheckpointMeta& meta, AdamW* optimizer) {
  std::vector<std::pair<std::string, torch::Tensor>> entries;
  const auto params = model->named_parameters();
  for (const auto& p : params) entries.emplace_back("param/" + p.key(), p.value());
  if (optimizer != nullptr) {
    if (optimizer->exp_avg().size() != params.size()) {
      throw StateError("optimizer does not track the model's parameters");
    }
    std::size_t i = 0;
    for (const auto& p : params) {
      entries.emplace_back("exp_avg/" + p.key(), optimizer->exp_avg()[i]);
      entries.emplace_back("exp_avg_sq/" + p.key(), optimizer->exp_avg_sq()[i]);
      ++i;
    }
  }

  nlohmann::ordered_json header;
  header["format"] = "LHCKPT1";
  header["model_config"] = to_json(model->config());
  header["epoch"] = meta.epoch;
  header["seed"] = meta.seed;
  header["config_hash"] = meta.config_hash;
  header["model_hash"] = model_parameter_hash(model);
  header["extra"] = meta.extra;
  if (optimizer != nullptr) {
    header["optimizer"] = {{"step", optimizer->step_count()}, {"lr", optimizer->lr()}};
  } else {
    header["optimizer"] = nullptr;
  }
  std::string payload;
  auto table = nlohmann::ordered_json::array();
  for (const auto& [name, t] : entries) {
    std::vector<int64_t> shape(t.sizes().begin(), t.sizes().end());
    table.push_back({{"name", name}, {"shape", shape}, {"offset", payload.size()}});
    append_le_floats(payload, as_floats(t));
  }
  header["tensors"] = table;
  const std::string header_text = header.dump();

  std::string blob(kCheckpointMagic);
  const uint64_t n = header_text.size();
  for (int b = 0; b < 8; ++b) blob.push_back(static_cast<char>((n >> (8 * b)) & 0xff));
  blob += header_text;
  blob += payload;

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string blob = ss.str();
  const std::size_t magic_len = std::strlen(kCheckpointMagic);
  if (blob.size() < magic_len || blob.compare(0, magic_len, kCheckpointMagic) != 0) {
    throw FormatError(path.string() + " is not a checkpoint (bad magic)");
  }
  if (blob.size() < magic_len + 8) throw LengthError("checkpoint header length is truncated");
  uint64_t header_len = 0;
  for (int b = 0; b < 8; ++b) {
    header_len |= static_cast<uint64_t>(static_cast<unsigned char>(blob[magic_len + b])) << (8 * b);
  }
  const std::size_t header_start = magic_len + 8;
  if (blob.size() - header_start < header_len) {
    throw LengthError("checkpoint header claims " + std::to_string(header_len) +
                      " bytes, file has " + std::to_string(blob.size() - header_start));
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(blob.substr(header_start, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  const std::size_t payload_start = header_start + header_len;
  const std::size_t payload_len = blob.size() - payload_start;

  Checkpoint ckpt;
  try {
    ckpt.config = model_config_from_json(header.at("model_config"));
    ckpt.meta.epoch = header.at("epoch").get<int64_t>();
    ckpt.meta.seed = header.at("seed").get<uint64_t>();
    ckpt.meta.config_hash = header.at("config_hash").get<std::string>();
    if (header.contains("extra")) ckpt.meta.extra = header.at("extra");
    if (!header.at("optimizer").is_null()) {
      ckpt.has_optimizer = true;
      ckpt.optimizer_step = header["optimizer"].at("step").get<int64_t>();
      ckpt.optimizer_lr = header["optimizer"].at("lr").get<double>();
    }
    std::size_t expected = 0;
    for (const auto& entry : header.at("tensors")) {
      auto shape = entry.at("shape").get<std::vector<int64_t>>();
      const auto offset = entry.at("offset").get<std::size_t>();
      int64_t numel = 1;
      for (auto s : shape) numel *= s;
      const std::size_t bytes = static_cast<std::size_t>(numel) * 4;
      if (offset != expected || offset + bytes > payload_len) {
        throw LengthError("tensor '" + entry.at("name").get<std::string>() +
                          "' lies outside the payload of " + std::to_string(payload_len) +
                          " bytes");
      }
      auto t = torch::empty(shape, torch::kFloat32);
      const auto* src = reinterpret_cast<const unsigned char*>(blob.data() + payload_start + offset);
      auto* dst = t.data_ptr<float>();
      for (int64_t i = 0; i < numel; ++i) {
        const uint32_t bits = static_cast<uint32_t>(src[4 * i]) |
                              (static_cast<uint32_t>(src[4 * i + 1]) << 8) |
                              (static_cast<uint32_t>(src[4 * i + 2]) << 16) |
                              (static_cast<uint32_t>(src[4 * i + 3]) << 24);
        std::memcpy(dst + i, &bits, 4);
      }
      ckpt.tensors.emplace_back(entry.at("name").get<std::string>(), t);
      expected = offset + bytes;
    }
    if (expected != payload_len) {
      throw LengthError("checkpoint payload: expected " + std::to_string(expected) +
                        " bytes, got " + std::to_string(payload_len) + " bytes");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad checkpoint header: ") + e.what());
  }
  return ckpt;
}

void load_parameters(const Checkpoint& ckpt, MomentDetr& model) {
  const auto m = tensor_map(ckpt);
  torch::NoGradGuard guard;
  for (auto& p : model->named_parameters()) {
    const auto& src = find_tensor(m, "param/" + p.key());
    if (src.sizes() != p.value().sizes()) {
      throw ShapeError("checkpoint tensor '" + p.key() + "' has a different shape");
    }
    p.value().copy_(src);
  }
}

MomentDetr restore_model(const Checkpoint& ckpt) {
  MomentDetr model(ckpt.config);
  load_parameters(ckpt, model);
  return model;
}

void restore_optimizer(const Checkpoint& ckpt, MomentDetr& model, AdamW& optimizer) {
  if (!ckpt.has_optimizer) throw StateError("checkpoint has no optimizer state");
  const auto m = tensor_map(ckpt);
  torch::NoGradGuard guard;
  std::size_t i = 0;
  for (const auto& p : model->named_parameters()) {
    optimizer.exp_avg().at(i).copy_(find_tensor(m, "exp_avg/" + p.key()));
    optimizer.exp_avg_sq().at(i).copy_(find_tensor(m, "exp_avg_sq/" + p.key()));
    ++i;
  }
  optimizer.set_step_count(ckpt.optimizer_step);
  optimizer.set_lr(ckpt.optimizer_lr);
}

}  // namespace lighthouse
