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

#include "lighthouse/features/frames.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "lighthouse/errors.hpp"

namespace lighthouse {
namespace fs = std::filesystem;
namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (directories ? entry.is_directory()
                    : (entry.is_regular_file() && entry.path().extension() == ".ppm")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos;
       pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q.push_back(c);
    }
  }
  return q + "'";
}

}  // namespace

RgbFrame RgbFrame::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                          std::uint8_t b) {
  RgbFrame f;
  f.width = width;
  f.height = height;
  f.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
    f.pixels[i] = r;
    f.pixels[i + 1] = g;
    f.pixels[i + 2] = b;
  }
  return f;
}

RgbFrame read_ppm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open frame " + path.string());
  if (header_token(in) != "P6") throw FormatError(path.string() + ": not a binary PPM (P6)");
  RgbFrame f;
  try {
    f.width = std::stoi(header_token(in));
    f.height = std::stoi(header_token(in));
    if (std::stoi(header_token(in)) != 255) {
      throw FormatError(path.string() + ": only maxval 255 is supported");
    }
  } catch (const std::logic_error&) {
    throw FormatError(path.string() + ": malformed PPM header");
  }
  if (f.width <= 0 || f.height <= 0) throw FormatError(path.string() + ": empty image");
  f.pixels.resize(static_cast<std::size_t>(f.width) * f.height * 3);
  in.read(reinterpret_cast<char*>(f.pixels.data()),
          static_cast<std::streamsize>(f.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(f.pixels.size())) {
    throw LengthError(path.string() + ": truncated pixel data");
  }
  return f;
}

void write_ppm(const RgbFrame& frame, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write frame " + path.string());
  out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::size_t ClipFrames::total_frames() const {
  std::size_t n = 0;
  for (const auto& c : clips) n += c.size();
  return n;
}

ClipFrames load_frame_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("frame directory not found: " + dir.string());
  ClipFrames video;
  for (const auto& clip_dir : sorted_entries(dir, /*directories=*/true)) {
    std::vector<RgbFrame> frames;
    for (const auto& frame : sorted_entries(clip_dir, /*directories=*/false)) {
      frames.push_back(read_ppm(frame));
    }
    video.clips.push_back(std::move(frames));
  }
  if (video.clips.empty()) {
    throw IoError("frame directory " + dir.string() + " holds no clip subdirectories");
  }
  return video;
}

void write_frame_dir(const ClipFrames& video, const fs::path& dir) {
  fs::create_directories(dir);
  char name[32];
  for (std::size_t c = 0; c < video.clips.size(); ++c) {
    std::snprintf(name, sizeof(name), "clip_%04zu", c);
    const fs::path clip_dir = dir / name;
    fs::create_directories(clip_dir);
    for (std::size_t f = 0; f < video.clips[c].size(); ++f) {
      std::snprintf(name, sizeof(name), "frame_%04zu.ppm", f);
      write_ppm(video.clips[c][f], clip_dir / name);
    }
  }
}

void decode_video_to_frame_dir(const fs::path& video_file, const fs::path& out_dir,
                               double fps, std::size_t frames_per_clip) {
  const char* tmpl = std::getenv("LIGHTHOUSE_DECODER");
  if (tmpl == nullptr || *tmpl == '\0') {
    throw IoError("no video decoder configured (set LIGHTHOUSE_DECODER); "
                  "pass a frame directory instead of " + video_file.string());
  }
  if (!fs::is_regular_file(video_file)) {
    throw IoError("video file not found: " + video_file.string());
  }
  if (frames_per_clip == 0) throw ArgumentError("frames_per_clip must be positive");

  const fs::path flat = out_dir / "_decoded";
  fs::create_directories(flat);
  std::string cmd = tmpl;
  replace_all(cmd, "{input}", shell_quote(video_file.string()));
  replace_all(cmd, "{output}", shell_quote(flat.string()));
  replace_all(cmd, "{fps}", std::to_string(fps));
  if (std::system(cmd.c_str()) != 0) {
    throw IoError("video decoder failed on " + video_file.string());
  }

  const auto frames = sorted_entries(flat, /*directories=*/false);
  if (frames.empty()) throw IoError("decoder produced no frames for " + video_file.string());
  char name[32];
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "clip_%04zu", i / frames_per_clip);
    const fs::path clip_dir = out_dir / name;
    fs::create_directories(clip_dir);
    std::snprintf(name, sizeof(name), "frame_%04zu.ppm", i % frames_per_clip);
    fs::rename(frames[i], clip_dir / name);
  }
  fs::remove_all(flat);
}

}  // namespace lighthouse
