// Copyright 2026 The CoUAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COUAV_ERROR_HPP_
#define COUAV_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace couav {

// Raised for violated preconditions and malformed inputs across the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable files and malformed file contents.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace couav

#endif  // COUAV_ERROR_HPP_
