// Copyright 2026 qlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>

namespace qlat {

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidAssignment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleEmbedding : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document; the message starts with the field path.
class DocumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedCell : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qlat
