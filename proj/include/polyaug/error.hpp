// Copyright 2026 The polyaug Authors
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

#ifndef POLYAUG_ERROR_HPP
#define POLYAUG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyaug {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A label line that does not follow `<class> <x1> <y1> ... <xn> <yn>`.
class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line_no, const std::string& reason)
      : Error("malformed label line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no) {}

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

/// An input polygon with zero area; it cannot carry a retention ratio.
class DegenerateInstance : public Error {
 public:
  explicit DegenerateInstance(std::size_t instance_id)
      : Error("instance " + std::to_string(instance_id) + " has zero area"),
        instance_id_(instance_id) {}

  std::size_t instance_id() const noexcept { return instance_id_; }

 private:
  std::size_t instance_id_;
};

class InvalidCrop : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DirectoryNotFound : public Error {
 public:
  using Error::Error;
};

class ImageIoError : public Error {
 public:
  using Error::Error;
};

}  // namespace polyaug

#endif  // POLYAUG_ERROR_HPP
