/**************************************************************************
 * channel.cpp
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

#include "muxstream/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string/split.hpp>
#include <boost/algorithm/string/trim.hpp>

#include "muxstream/error.hpp"

namespace muxstream::channel {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what)
{
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw FormatError("bad number '" + std::string(text) + "' in " + std::string(what));
    }
    return value;
}

std::vector<std::string_view> split_args(std::string_view args)
{
    std::vector<std::string_view> out;
    std::size_t from = 0;
    while (true) {
        const auto comma = args.find(',', from);
        out.push_back(args.substr(from, comma == std::string_view::npos ? args.npos : comma - from));
        if (comma == std::string_view::npos) {
            return out;
        }
        from = comma + 1;
    }
}

} // namespace

ErasurePattern ErasurePattern::burst(std::int64_t start, std::int64_t length)
{
    if (start < 0 || length < 0) {
        throw FormatError("burst start and length must be non-negative");
    }
    ErasurePattern e;
    e.kind_ = Kind::burst;
    e.a_ = start;
    e.b_ = length;
    return e;
}

ErasurePattern ErasurePattern::periodic(std::int64_t delta, std::int64_t tu, std::int64_t b)
{
    if (tu < 0 || b < 0 || tu + b < 1 || delta < 0 || delta >= tu + b) {
        throw FormatError("periodic pattern needs tu + b >= 1 and 0 <= delta < tu + b");
    }
    ErasurePattern e;
    e.kind_ = Kind::periodic;
    e.a_ = delta;
    e.b_ = b;
    e.period_ = tu + b;
    return e;
}

ErasurePattern ErasurePattern::explicit_bits(std::vector<bool> bits)
{
    ErasurePattern e;
    e.kind_ = Kind::explicit_bits;
    e.bits_ = std::move(bits);
    return e;
}

bool ErasurePattern::erased(std::int64_t slot) const
{
    if (slot < 0) {
        return false;
    }
    switch (kind_) {
    case Kind::burst:
        return slot >= a_ && slot < a_ + b_;
    case Kind::periodic:
        return floor_mod(slot - a_, period_) < b_;
    case Kind::explicit_bits:
        return static_cast<std::size_t>(slot) < bits_.size() && bits_[slot];
    }
    return false;
}

std::vector<std::int64_t> ErasurePattern::erased_slots(std::int64_t begin, std::int64_t end) const
{
    std::vector<std::int64_t> out;
    for (std::int64_t i = std::max<std::int64_t>(begin, 0); i < end; ++i) {
        if (erased(i)) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<bool> ErasurePattern::materialize(std::int64_t length) const
{
    std::vector<bool> out(std::max<std::int64_t>(length, 0));
    for (std::int64_t i = 0; i < length; ++i) {
        out[i] = erased(i);
    }
    return out;
}

bool ErasurePattern::single_burst_within(std::int64_t b) const
{
    switch (kind_) {
    case Kind::burst:
        return b_ <= b;
    case Kind::periodic:
        return b_ == 0;
    case Kind::explicit_bits: {
        const auto first = std::find(bits_.begin(), bits_.end(), true);
        if (first == bits_.end()) {
            return true;
        }
        const auto gap = std::find(first, bits_.end(), false);
        return std::find(gap, bits_.end(), true) == bits_.end() && gap - first <= b;
    }
    }
    return false;
}

std::string ErasurePattern::describe() const
{
    switch (kind_) {
    case Kind::burst:
        return "burst:" + std::to_string(a_) + "," + std::to_string(b_);
    case Kind::periodic:
        return "periodic:" + std::to_string(a_) + "," + std::to_string(period_ - b_) + "," + std::to_string(b_);
    case Kind::explicit_bits: {
        std::string s = "bits:";
        for (bool bit : bits_) {
            s += bit ? '1' : '0';
        }
        return s;
    }
    }
    return {};
}

std::vector<ErasurePattern> enumerate_bursts(std::int64_t n, std::int64_t b)
{
    if (b < 0 || n < b) {
        throw FormatError("enumerate_bursts needs n >= b >= 0");
    }
    std::vector<ErasurePattern> out;
    if (b == 0) {
        out.push_back(ErasurePattern::burst(0, 0));
        return out;
    }
    for (std::int64_t s = 0; s + b <= n; ++s) {
        out.push_back(ErasurePattern::burst(s, b));
    }
    return out;
}

GilbertElliott::GilbertElliott(double p_good_to_bad, double p_bad_to_good, std::uint64_t seed)
    : p_(p_good_to_bad), q_(p_bad_to_good), seed_(seed), rng_(seed)
{
    if (!(p_ >= 0 && p_ <= 1 && q_ >= 0 && q_ <= 1)) {
        throw FormatError("Gilbert-Elliott probabilities must lie in [0, 1]");
    }
    to_bad_ = std::bernoulli_distribution(p_);
    to_good_ = std::bernoulli_distribution(q_);
}

bool GilbertElliott::next()
{
    const bool out = bad_;
    bad_ = bad_ ? !to_good_(rng_) : to_bad_(rng_);
    return out;
}

PatternSpec::Stream::Stream(const PatternSpec& spec)
{
    if (const auto* p = std::get_if<ErasurePattern>(&spec.source)) {
        pattern_ = *p;
    } else {
        const auto& ge = std::get<GeParams>(spec.source);
        ge_.emplace(ge.p, ge.q, ge.seed);
    }
}

bool PatternSpec::Stream::next()
{
    if (ge_) {
        return ge_->next();
    }
    return pattern_->erased(slot_++);
}

PatternSpec parse_pattern(std::string_view spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw FormatError("pattern '" + std::string(spec) + "' needs the form kind:args");
    }
    const auto kind = spec.substr(0, colon);
    const auto rest = spec.substr(colon + 1);
    PatternSpec out{std::string(spec), ErasurePattern::burst(0, 0)};

    if (kind == "trace") {
        out.source = ErasurePattern::explicit_bits(read_trace(std::string(rest)));
        return out;
    }
    const auto args = split_args(rest);
    auto need = [&](std::size_t count) {
        if (args.size() != count) {
            throw FormatError("pattern '" + std::string(spec) + "' needs " + std::to_string(count) + " arguments");
        }
    };
    if (kind == "burst") {
        need(2);
        out.source =
            ErasurePattern::burst(parse_number<std::int64_t>(args[0], spec), parse_number<std::int64_t>(args[1], spec));
    } else if (kind == "periodic") {
        need(3);
        out.source = ErasurePattern::periodic(parse_number<std::int64_t>(args[0], spec),
                                              parse_number<std::int64_t>(args[1], spec),
                                              parse_number<std::int64_t>(args[2], spec));
    } else if (kind == "ge") {
        need(3);
        PatternSpec::GeParams ge{parse_number<double>(args[0], spec), parse_number<double>(args[1], spec),
                                 parse_number<std::uint64_t>(args[2], spec)};
        GilbertElliott check(ge.p, ge.q, ge.seed);
        out.source = ge;
    } else {
        throw FormatError("unknown pattern kind '" + std::string(kind) + "'");
    }
    return out;
}

std::vector<bool> parse_trace(std::string_view text)
{
    std::vector<bool> bits;
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(c == '1');
        } else if (c != '\n' && c != '\r') {
            throw FormatError(std::string("trace contains '") + c + "'; expected 0, 1 or newlines");
        }
    }
    return bits;
}

std::vector<bool> read_trace(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read trace file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_trace(text.str());
}

std::string format_packet(std::optional<std::span<const gf::Element>> packet, std::uint32_t order)
{
    if (!packet) {
        return "*";
    }
    const int digits = order <= 256 ? 2 : 4;
    std::string out;
    char buf[8];
    for (std::size_t i = 0; i < packet->size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        std::snprintf(buf, sizeof buf, "%0*x", digits, static_cast<unsigned>((*packet)[i]));
        out += buf;
    }
    return out;
}

std::optional<std::vector<gf::Element>> parse_packet(std::string_view line, std::size_t n, std::uint32_t order)
{
    std::string text(line);
    boost::algorithm::trim(text);
    if (text == "*") {
        return std::nullopt;
    }
    std::vector<std::string> tokens;
    boost::algorithm::split(tokens, text, [](char c) { return c == ' ' || c == '\t'; },
                            boost::algorithm::token_compress_on);
    if (text.empty()) {
        tokens.clear();
    }
    if (tokens.size() != n) {
        throw FormatError("packet line has " + std::to_string(tokens.size()) + " symbols, expected "
                          + std::to_string(n));
    }
    std::vector<gf::Element> out;
    for (const auto& tok : tokens) {
        gf::Element value = 0;
        const auto* end = tok.data() + tok.size();
        auto [ptr, ec] = std::from_chars(tok.data(), end, value, 16);
        if (ec != std::errc{} || ptr != end || value >= order) {
            throw FormatError("bad symbol '" + tok + "' in packet line");
        }
        out.push_back(value);
    }
    return out;
}

} // namespace muxstream::channel
