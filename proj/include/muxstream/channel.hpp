/**************************************************************************
 * channel.hpp
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
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "muxstream/gf.hpp"

namespace muxstream::channel {

/// The erasure channel: the value passes when e = 0 and is lost when e = 1.
template <typename T>
std::optional<T> apply(T x, bool e)
{
    if (e) {
        return std::nullopt;
    }
    return x;
}

/// Deterministic erasure sequence over unbounded slot indices.
class ErasurePattern {
public:
    enum class Kind { burst, periodic, explicit_bits };

    /// Slots [start, start + length) erased.
    static ErasurePattern burst(std::int64_t start, std::int64_t length);
    /// e_i = 1 iff (i - delta) mod (tu + b) < b. Requires 0 <= delta < tu + b.
    static ErasurePattern periodic(std::int64_t delta, std::int64_t tu, std::int64_t b);
    /// Slot i erased iff bits[i]; slots past the end are clear.
    static ErasurePattern explicit_bits(std::vector<bool> bits);

    Kind kind() const noexcept { return kind_; }
    bool erased(std::int64_t slot) const;

    /// Erased slots in [begin, end).
    std::vector<std::int64_t> erased_slots(std::int64_t begin, std::int64_t end) const;
    std::vector<bool> materialize(std::int64_t length) const;

    /// True when at most one burst of at most b slots is erased in total.
    bool single_burst_within(std::int64_t b) const;

    /// burst:s,len / periodic:d,tu,b / bits:0110...
    std::string describe() const;

private:
    ErasurePattern() = default;

    Kind kind_ = Kind::burst;
    std::int64_t a_ = 0; // start or delta
    std::int64_t b_ = 0; // length or burst
    std::int64_t period_ = 1;
    std::vector<bool> bits_;
};

/// All length-n erasure vectors holding one burst of exactly b slots, in
/// start order (n - b + 1 of them; one all-clear pattern when b = 0).
std::vector<ErasurePattern> enumerate_bursts(std::int64_t n, std::int64_t b);

/// Two-state Markov erasure process. Starts in the good state; each call to
/// next() reports the current state (bad = erased) and then transitions.
/// Uses std::mt19937_64 seeded with `seed`.
class GilbertElliott {
public:
    GilbertElliott(double p_good_to_bad, double p_bad_to_good, std::uint64_t seed);

    bool next();

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    std::uint64_t seed() const noexcept { return seed_; }

    static constexpr std::string_view kGenerator = "mt19937_64";

private:
    double p_;
    double q_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::bernoulli_distribution to_bad_;
    std::bernoulli_distribution to_good_;
    bool bad_ = false;
};

/// A parsed CLI pattern specification.
struct PatternSpec {
    struct GeParams {
        double p = 0;
        double q = 0;
        std::uint64_t seed = 0;
    };

    std::string text;
    std::variant<ErasurePattern, GeParams> source;

    /// Sequential erasure stream for this spec.
    class Stream {
    public:
        explicit Stream(const PatternSpec& spec);
        bool next();

    private:
        std::optional<ErasurePattern> pattern_;
        std::optional<GilbertElliott> ge_;
        std::int64_t slot_ = 0;
    };

    Stream stream() const { return Stream(*this); }
};

/// Parses burst:<start>,<len>, periodic:<delta>,<tu>,<b>, trace:<path>
/// or ge:<p>,<q>,<seed>. Throws FormatError.
PatternSpec parse_pattern(std::string_view spec);

/// Reads a trace file: one ASCII '0'/'1' per slot, newlines ignored.
std::vector<bool> read_trace(const std::filesystem::path& path);
std::vector<bool> parse_trace(std::string_view text);

/// One slot per line: symbols as space-separated hex, "*" for an erased slot.
std::string format_packet(std::optional<std::span<const gf::Element>> packet, std::uint32_t order);

/// Parses a packet line. Returns nullopt for "*". Checks the symbol count
/// and that each symbol lies in the field; throws FormatError.
std::optional<std::vector<gf::Element>> parse_packet(std::string_view line, std::size_t n, std::uint32_t order);

} // namespace muxstream::channel
