// Copyright 2026 The qtsvd Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qtsvd {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes, mode indices or slice indices do not fit together.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// A matrix that must be inverted is singular or numerically rank deficient.
class SingularMatrixError : public Error {
  public:
    using Error::Error;
};

/// Input that an algorithm cannot handle, e.g. a rank-deficient column in QR.
class DegenerateInputError : public Error {
  public:
    using Error::Error;
};

/// A decomposition failed or violated its postcondition.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Invalid run configuration (CLI level).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// File could not be read or written, or has a malformed layout.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace qtsvd
