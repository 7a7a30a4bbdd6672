//
// Copyright 2026 The MLDP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MLDP_ERRORS_HPP_
#define MLDP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mldp {

// Precondition violations use std::invalid_argument / std::out_of_range.
// The types below cover the remaining failure classes.

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a model file parses but its parameter shapes disagree with its
// declared kind or bin count.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mldp

#endif  // MLDP_ERRORS_HPP_
