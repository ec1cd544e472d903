// Copyright 2026 The unital-lab developers
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
#include <string>

namespace unital {

/// Base class for every failure raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shapes or index ranges do not line up.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A matrix expected to be Hermitian is not, beyond tolerance.
struct NonHermitian : Error {
  using Error::Error;
};

/// The eigensolver gave up before reaching its accuracy target.
struct NoConvergence : Error {
  using Error::Error;
};

/// A matrix expected to be unitary is not, beyond tolerance.
struct NotUnitary : Error {
  using Error::Error;
};

/// The combined scattering data violates the unitarity constraints.
struct ConstraintViolation : Error {
  using Error::Error;
};

/// No unitary completion of the requested scattering matrix exists.
struct NotCompletable : Error {
  using Error::Error;
};

/// A state object fails its defining invariants.
struct InvalidState : Error {
  using Error::Error;
};

/// User-supplied configuration is malformed or inconsistent.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace unital
