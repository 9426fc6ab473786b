/**************************************************************************
 * rational.cpp
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

#include "muxstream/rational.hpp"

#include <charconv>

#include "muxstream/error.hpp"

namespace muxstream {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole)
{
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw FormatError("not a rational number: '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

std::string to_string(const Rational& r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text)
{
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = parse_int(text.substr(0, slash), text);
        const auto den = parse_int(text.substr(slash + 1), text);
        if (den == 0) {
            throw FormatError("zero denominator in '" + std::string(text) + "'");
        }
        return {num, den};
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 12 || frac.front() == '-' || frac.front() == '+') {
            throw FormatError("not a rational number: '" + std::string(text) + "'");
        }
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            scale *= 10;
        }
        const bool negative = !whole.empty() && whole.front() == '-';
        const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole, text);
        const std::int64_t f = parse_int(frac, text);
        const std::int64_t magnitude = (w < 0 ? -w : w) * scale + f;
        return {negative ? -magnitude : magnitude, scale};
    }
    return Rational(parse_int(text, text));
}

double to_double(const Rational& r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

} // namespace muxstream
