/**************************************************************************
 * error.hpp
 *
 * Copyright 2026 The muxstream Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#pragma once

#include <stdexcept>
#include <string>

namespace muxstream {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field order or reduction descriptor is not usable.
class FieldError : public Error {
public:
    using Error::Error;
};

/// The field has fewer elements than a construction requires.
class FieldTooSmall : public Error {
public:
    using Error::Error;
};

/// Inverting zero, or a linear system that should be solvable is not.
class SingularError : public Error {
public:
    using Error::Error;
};

/// Delay/burst parameters fall outside the regime an operation supports.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Vector or matrix lengths disagree with the code parameters.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// The erasure pattern is not a single burst of at most B slots.
class BeyondTolerance : public Error {
public:
    using Error::Error;
};

/// Malformed descriptor, trace or pattern text.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace muxstream
