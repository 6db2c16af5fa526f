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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "lighthouse/features/matrix.hpp"

namespace lighthouse {

// ".lhf" feature file layout (all integers little-endian):
//   bytes  0..3   magic "LHF1"
//   bytes  4..7   rows  (u32)
//   bytes  8..11  cols  (u32)
//   bytes 12..15  reserved, zero
//   then rows*cols float32, row-major.
inline constexpr std::string_view kFeatureMagic = "LHF1";
inline constexpr std::size_t kFeatureHeaderBytes = 16;

std::string encode_features(const FeatureMatrix& m);
FeatureMatrix decode_features(std::string_view bytes);

FeatureMatrix load_features(const std::filesystem::path& path);
void save_features(const FeatureMatrix& m, const std::filesystem::path& path);

// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace lighthouse
