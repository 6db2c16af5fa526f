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
#include <vector>

namespace lighthouse {

// Interleaved 8-bit RGB.
struct RgbFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  static RgbFrame filled(int width, int height, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b);
};

// Binary PPM (P6, maxval 255).
RgbFrame read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbFrame& frame, const std::filesystem::path& path);

// A decoded video: clips[i] holds the frames sampled inside clip i.
struct ClipFrames {
  std::vector<std::vector<RgbFrame>> clips;
  std::size_t total_frames() const;
};

// Frame-directory contract: one subdirectory per clip (sorted by name), each
// holding sequentially numbered .ppm frames. Throws IoError when the
// directory is missing or holds no clip subdirectories.
ClipFrames load_frame_dir(const std::filesystem::path& dir);

// Writes `video` into the frame-directory layout (clip_0000/frame_0000.ppm ...).
void write_frame_dir(const ClipFrames& video, const std::filesystem::path& dir);

// Runs the external decoder named by LIGHTHOUSE_DECODER on `video_file`,
// then regroups its flat frame output into `out_dir` as a frame directory
// with `frames_per_clip` frames per clip. The command template may use
// {input}, {output} and {fps}; it must write numbered .ppm files into
// {output}. Throws IoError when no decoder is configured or it fails.
void decode_video_to_frame_dir(const std::filesystem::path& video_file,
                               const std::filesystem::path& out_dir, double fps,
                               std::size_t frames_per_clip);

}  // namespace lighthouse
