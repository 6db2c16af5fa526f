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

#include "lighthouse/features/feature_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lighthouse/errors.hpp"

namespace lighthouse {
namespace {

static_assert(sizeof(float) == 4);

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

}  // namespace

std::string encode_features(const FeatureMatrix& m) {
  std::string out;
  out.reserve(kFeatureHeaderBytes + static_cast<std::size_t>(m.size()) * 4);
  out.append(kFeatureMagic);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u32(out, 0);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    put_u32(out, std::bit_cast<std::uint32_t>(m.data()[i]));
  }
  return out;
}

FeatureMatrix decode_features(std::string_view bytes) {
  if (bytes.size() < kFeatureHeaderBytes) {
    throw FormatError("feature file shorter than its 16-byte header");
  }
  if (bytes.substr(0, 4) != kFeatureMagic) {
    throw FormatError("bad feature file magic '" + std::string(bytes.substr(0, 4)) +
                      "' (expected LHF1)");
  }
  const std::uint32_t rows = get_u32(bytes, 4);
  const std::uint32_t cols = get_u32(bytes, 8);
  const std::uint64_t expected = std::uint64_t{rows} * cols * 4;
  const std::uint64_t actual = bytes.size() - kFeatureHeaderBytes;
  if (expected != actual) {
    throw LengthError("feature payload length mismatch: expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(actual) + " bytes");
  }
  FeatureMatrix m(rows, cols);
  for (std::uint64_t i = 0; i < std::uint64_t{rows} * cols; ++i) {
    m.data()[i] = std::bit_cast<float>(get_u32(bytes, kFeatureHeaderBytes + 4 * i));
  }
  return m;
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return decode_features(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const LengthError& e) {
    throw LengthError(path.string() + ": " + e.what());
  }
}

void save_features(const FeatureMatrix& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write feature file " + path.string());
  const std::string bytes = encode_features(m);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

}  // namespace lighthouse
