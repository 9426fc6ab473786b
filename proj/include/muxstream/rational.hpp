/**************************************************************************
 * rational.hpp
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

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace muxstream {

using Rational = boost::rational<std::int64_t>;

/// "p/q" in lowest terms, denominator always printed.
std::string to_string(const Rational& r);

/// Accepts "p/q", "p" and finite decimals such as "0.6" (read exactly).
/// Throws FormatError on anything else.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

} // namespace muxstream
