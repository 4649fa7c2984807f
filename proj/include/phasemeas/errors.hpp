// Copyright 2026 The phasemeas Authors
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

namespace phasemeas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The requested state or operation does not fit in the truncated Fock space.
class TruncationError : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// z1 <= 2|z2|: the quadratic Hamiltonian has no harmonic normal form.
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, bool degenerate)
        : Error(what), degenerate_(degenerate) {}

    /// True when z0 == 0 (marginal case), false when z0 would be imaginary.
    bool degenerate() const noexcept { return degenerate_; }

private:
    bool degenerate_;
};

class UnsupportedApparatus : public Error {
public:
    using Error::Error;
};

/// The phase-space grid is too coarse or too narrow for the requested transform.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class ZeroProbability : public Error {
public:
    using Error::Error;
};

class SamplingError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Positivity, trace or Hermiticity monitoring tripped during integration.
class NumericalAbort : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace phasemeas
