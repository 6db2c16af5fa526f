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

#include <stdexcept>
#include <string>

namespace lighthouse {

// Base of every error raised by the library. `kind()` is a stable,
// machine-parseable tag used by the CLI and the HTTP layer.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LIGHTHOUSE_DEFINE_ERROR(Name, tag)                     \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& message) : Error(tag, message) {} \
  }

LIGHTHOUSE_DEFINE_ERROR(ParseError, "parse");
LIGHTHOUSE_DEFINE_ERROR(ValidationError, "validation");
LIGHTHOUSE_DEFINE_ERROR(ArgumentError, "argument");
LIGHTHOUSE_DEFINE_ERROR(FormatError, "format");
LIGHTHOUSE_DEFINE_ERROR(LengthError, "length");
LIGHTHOUSE_DEFINE_ERROR(ShapeError, "shape");
LIGHTHOUSE_DEFINE_ERROR(StateError, "state");
LIGHTHOUSE_DEFINE_ERROR(IoError, "io");
LIGHTHOUSE_DEFINE_ERROR(ConfigError, "config");
LIGHTHOUSE_DEFINE_ERROR(NotFoundError, "not_found");
LIGHTHOUSE_DEFINE_ERROR(MismatchError, "mismatch");

#undef LIGHTHOUSE_DEFINE_ERROR

}  // namespace lighthouse
