/**************************************************************************
 * verify.hpp
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
#include <optional>
#include <string>

#include <json.hpp>

#include "muxstream/channel.hpp"
#include "muxstream/streaming.hpp"

namespace muxstream::verify {

using stream::StreamingCode;

/// Seed of the random message stream used by burst sweeps.
inline constexpr std::uint64_t kSweepSeed = 1;

struct VerificationReport {
    codes::CodeParams params;
    std::string code_hash;
    std::uint64_t seed = kSweepSeed;
    stream::SweepResult sweep;
    double wall_seconds = 0;

    bool passed() const noexcept { return sweep.passed(); }
};

/// Streaming burst sweep of `code` for bursts of length b over starts
/// [0, horizon] (default_horizon when not given).
VerificationReport verify_code(const StreamingCode& code, int b, std::optional<std::int64_t> horizon = std::nullopt,
                               unsigned workers = 0);

nlohmann::ordered_json to_json(const VerificationReport& report);
std::string summary(const VerificationReport& report);

/// Per-stream outcome counts. Every emitted estimate lands in exactly one
/// bucket: recovered by its deadline, recoverable only later from the full
/// diagonal (deadline_miss), never recoverable (unrecovered) or wrong.
struct StreamCounts {
    std::uint64_t estimates = 0;
    std::uint64_t recovered = 0;
    std::uint64_t deadline_miss = 0;
    std::uint64_t unrecovered = 0;
    std::uint64_t wrong = 0;
};

struct SimulationReport {
    std::string pattern;
    std::int64_t slots = 0;
    std::uint64_t message_seed = 0;
    std::int64_t erased_slots = 0;
    /// The realized erasures form one burst of at most B slots.
    bool within_contract = true;
    std::string note;
    std::optional<channel::PatternSpec::GeParams> gilbert_elliott;
    StreamCounts v;
    StreamCounts u;
};

/**
 * Runs encoder -> channel -> decoder for `slots` slots of random messages
 * (std::mt19937_64 seeded with `message_seed`), then Tv further slots so
 * every message slot gets its estimates. Deterministic in the seeds.
 */
SimulationReport simulate(const StreamingCode& code, const channel::PatternSpec& pattern, std::int64_t slots,
                          std::uint64_t message_seed);

nlohmann::ordered_json to_json(const SimulationReport& report);
std::string summary(const SimulationReport& report);

} // namespace muxstream::verify
