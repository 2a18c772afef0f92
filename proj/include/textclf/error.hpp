/*
 * Copyright 2026 The textclf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TEXTCLF_ERROR_HPP_
#define TEXTCLF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace textclf {

// Base of every error raised by the library. The CLI maps these to exit
// code 2 (data/validation error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad configuration or an unreadable resource.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DecodingError : public Error {
 public:
  DecodingError(const std::string& what, std::size_t byte_offset)
      : Error(what + " at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Input data cannot support the requested computation (empty vocabulary,
// too few members per class, single-class labels, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace textclf

#endif  // TEXTCLF_ERROR_HPP_
