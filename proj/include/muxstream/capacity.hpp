/**************************************************************************
 * capacity.hpp
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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muxstream/rational.hpp"

namespace muxstream::capacity {

/// T / (T + B): the largest rate of a delay-T code correcting bursts of B.
Rational c_single(int t, int b);

struct RatePair {
    Rational rv;
    Rational ru;

    friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// a * Rv + b * Ru <= c
struct Constraint {
    Rational a;
    Rational b;
    Rational c;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

enum class CaseTag {
    interior_case,     ///< Tu < Tv <= Tu + B
    main_case,         ///< Tv > Tu + B
    degenerate_single, ///< B = 0, Tu < B or Tu = Tv
};

std::string_view to_string(CaseTag tag);

struct CapacityRegion {
    int tv = 0;
    int tu = 0;
    int b = 0;
    CaseTag tag = CaseTag::main_case;
    /// For degenerate_single: "noiseless", "tu_below_b" or "tu_equals_tv".
    std::string degenerate;
    /// Rv >= 0 and Ru >= 0 are implied.
    std::vector<Constraint> constraints;
    /// Counter-clockwise from the origin.
    std::vector<RatePair> vertices;
};

/// Capacity region for delays (Tv, Tu) and burst length B. Requires
/// Tv >= Tu >= 0 and B >= 0; throws RegimeError when Tv < B.
CapacityRegion region(int tv, int tu, int b);

struct Containment {
    bool contained = false;
    bool nonnegative = true;
    /// c - (a Rv + b Ru) per constraint; boundary points have zero slack.
    std::vector<Rational> slack;
    /// First violated constraint, if any.
    std::optional<std::size_t> violated;

    explicit operator bool() const noexcept { return contained; }
};

Containment contains(const CapacityRegion& region, const RatePair& p);

/// ((Tv - Tu)/(Tv + B), Tu/(Tv + B)). Requires Tv > Tu + B and Tu >= B >= 1.
RatePair corner(int tv, int tu, int b);

/// "Rv + (3/2)*Ru <= 1"
std::string describe(const Constraint& c);

/// {"tv", "tu", "b", "case_tag", ["degenerate"], "constraints", "vertices"}
/// with every number an exact "p/q" string.
std::string region_json(const CapacityRegion& region);

/// Header plus one row per vertex: numerators, denominators and decimals.
std::string region_csv(const CapacityRegion& region);

} // namespace muxstream::capacity
