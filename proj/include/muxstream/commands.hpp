/**************************************************************************
 * commands.hpp
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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muxstream/capacity.hpp"
#include "muxstream/streaming.hpp"

namespace muxstream::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Largest block length a designed time share may reach.
inline constexpr std::int64_t kMaxDesignLength = std::int64_t{1} << 20;

struct Design {
    stream::StreamingCode code;
    std::string construction;
};

/**
 * Code for (tv, tu, b) with Tv > Tu + B >= 2B. Without a target this is the
 * corner-point code. With a target inside the region it is the corner code
 * midpointed against one axis code (the Tv-code below the corner's urgent
 * rate, the urgent Tu-code above it) with the smallest dyadic weight whose
 * rate pair dominates the target. Throws RegimeError naming the violated
 * constraint or the degenerate case.
 */
Design design_code(int tv, int tu, int b, const gf::Field& field,
                   const std::optional<capacity::RatePair>& target = std::nullopt);

/// "ORDER:POLY", each decimal or 0x-prefixed hex.
gf::Field parse_field(std::string_view text);
/// "P/Q", an integer or a decimal fraction, converted exactly.
Rational parse_rate(std::string_view text);

struct DesignOptions {
    int tv = 0;
    int tu = 0;
    int b = 0;
    std::optional<std::string> field;
    std::optional<std::string> target_rv;
    std::optional<std::string> target_ru;
};

struct VerifyOptions {
    std::filesystem::path code;
    int burst = 0;
    std::optional<std::int64_t> horizon;
    unsigned workers = 0;
};

struct RegionOptions {
    int tv = 0;
    int tu = 0;
    int b = 0;
    std::string format = "json";
};

struct SimulateOptions {
    std::filesystem::path code;
    std::string pattern;
    std::int64_t slots = 0;
    std::uint64_t seed = 0;
};

/// Every command writes its canonical output to `out`, a human summary or
/// error to `err`, and returns an exit code. `argv` is embedded in reports.
int cmd_design(const DesignOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);
int cmd_region(const RegionOptions& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv, std::ostream& out,
                 std::ostream& err);

/// Source lines (kv + ku hex symbols, v first) in, packet lines out.
int cmd_encode(const std::filesystem::path& code, std::istream& in, std::ostream& out, std::ostream& err);

/// Packet lines ("*" = erased) in; per slot "<slot> v <slot|-> ... u <slot|-> ..."
/// out, with "?" for unrecovered symbols.
int cmd_decode(const std::filesystem::path& code, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace muxstream::cli
