/*
 * Copyright 2026 The rrf Authors.
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

#ifndef RRF_ERROR_HPP_
#define RRF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rrf {

enum class ErrorKind {
  kInvalidArgument,  // bad configuration or flag value
  kData,             // malformed or unusable input data
  kUnsupported,      // input outside an operation's domain (e.g. numeric for an oracle)
  kDomain,           // mathematical domain error (e.g. entropy of an empty histogram)
  kIo,
  kInternal,         // invariant violation
};

// All library failures are reported through this exception; the C API maps
// the kind onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace rrf

#endif  // RRF_ERROR_HPP_
