/**************************************************************************
 * block_code.hpp
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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "muxstream/gf.hpp"
#include "muxstream/rational.hpp"

namespace muxstream::codes {

using gf::Element;
using gf::Field;
using gf::Matrix;

/// Delay and size parameters of a two-stream code.
///
/// tv/tu are the decoding delays of the less-urgent and urgent streams,
/// b the burst length the code is designed for, kv/ku the number of
/// source symbols per block (or per slot once interleaved) and n the
/// block length.
struct CodeParams {
    int tv = 0;
    int tu = 0;
    int b = 0;
    int n = 0;
    int kv = 0;
    int ku = 0;

    int k() const noexcept { return kv + ku; }
    Rational rate_v() const { return {kv, n}; }
    Rational rate_u() const { return {ku, n}; }

    friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

enum class CodeKind {
    single_stream, ///< [I_B 0 I_B; 0 I_{T-B} P]
    multiplexed,   ///< superposition of two single-stream codes
    generic,       ///< arbitrary causal generator, decoded by prefix elimination
};

std::string_view to_string(CodeKind kind);
CodeKind parse_code_kind(std::string_view text);

/// Block lengths are capped so erasure masks fit in 64 bits.
inline constexpr int kMaxBlockLength = 64;

/// Bit i set <=> position i erased.
using ErasureMask = std::uint64_t;

/// Last-permitted recovery position for every source symbol of a block.
struct DecodeSchedule {
    std::vector<int> v_deadline; ///< min(i + tv, n - 1)
    std::vector<int> u_deadline; ///< min(kv + i + tu, n - 1)
};

/**
 * Block code: generator matrix over a field plus delays.
 *
 * Source symbol v[i] is generated at block position i and u[i] at position
 * kv + i; the generator must be causal with respect to these positions
 * (column c only mixes symbols generated at or before c) so that the code
 * can be diagonally interleaved.
 */
class BlockCode {
public:
    /// Generic code from an explicit generator. Validates dimensions,
    /// full row rank, causality and element ranges.
    BlockCode(CodeParams params, Field field, Matrix generator);

    const CodeParams& params() const noexcept { return params_; }
    const Field& field() const noexcept { return field_; }
    const Matrix& generator() const noexcept { return generator_; }
    CodeKind kind() const noexcept { return kind_; }

    /// Parity blocks of the structured kinds (empty for generic codes).
    /// single_stream: P; multiplexed: V (less urgent) and U (urgent).
    const Matrix& parity_v() const noexcept { return parity_v_; }
    const Matrix& parity_u() const noexcept { return parity_u_; }

    DecodeSchedule schedule() const;

    /// Deadline of source symbol s, with v symbols first (s < kv).
    int deadline(int s) const;

    friend BlockCode build_single_stream(int t, int b, const Field& field, bool urgent);
    friend BlockCode build_multiplexed(int tv, int tu, int b, const Field& field);
    friend BlockCode restore_block_code(CodeKind kind, CodeParams params, Field field, Matrix generator);

private:
    BlockCode(CodeParams params, Field field, Matrix generator, CodeKind kind, Matrix pv, Matrix pu);

    CodeParams params_;
    Field field_;
    Matrix generator_;
    CodeKind kind_ = CodeKind::generic;
    Matrix parity_v_;
    Matrix parity_u_;
};

/// Single-stream burst code with delay t: k = t, n = t + b, rate t/(t+b).
/// By default the symbols form the less-urgent stream (kv = t, ku = 0);
/// with `urgent` they form the urgent stream (kv = 0, ku = t, tu = tv = t).
BlockCode build_single_stream(int t, int b, const Field& field, bool urgent = false);

/// Superposition code with n = tv + b, kv = tv - tu, ku = tu.
/// Requires tv > tu + b, tu >= b >= 1.
BlockCode build_multiplexed(int tv, int tu, int b, const Field& field);

/// Rebuilds a code of the given kind from a stored generator, checking
/// that the generator has the structure the kind promises.
BlockCode restore_block_code(CodeKind kind, CodeParams params, Field field, Matrix generator);

/// x = [v u] G.
std::vector<Element> encode_block(const BlockCode& code, std::span<const Element> v, std::span<const Element> u);

using ReceivedWord = std::vector<std::optional<Element>>;

/// One term of a linear recovery rule: coefficient times received symbol.
struct Term {
    int position = 0;
    Element coeff = 0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// How one source symbol is rebuilt from received positions.
struct Recovery {
    bool recovered = false;
    /// Largest received position the rule consumes (-1 if none).
    int time = -1;
    std::vector<Term> terms;
};

/// Value-independent decoding rule for one erasure pattern.
struct DecodePlan {
    std::vector<Recovery> symbols; ///< kv + ku entries, v first

    Element apply(const Field& f, int symbol, std::span<const Element> word) const;
};

/// Mask of a single burst [start, start + length) clipped to n positions.
ErasureMask burst_mask(int start, int length, int n);

/// Staged decoder of the structured kinds. Positions >= prefix are treated
/// as received but not yet seen; recoveries that would need them are left
/// unrecovered. Throws BeyondTolerance unless the erased positions below
/// the prefix form one burst of at most b positions, and FormatError for
/// generic codes.
DecodePlan plan_structured(const BlockCode& code, ErasureMask erased, int prefix);

/// Prefix elimination: symbol s is recovered at the first position t such
/// that it is a linear function of the unerased positions <= t. Handles
/// any erasure pattern and any code.
DecodePlan plan_generic(const BlockCode& code, ErasureMask erased, int prefix);

/// plan_structured where the pattern allows it, plan_generic otherwise.
DecodePlan plan_best_effort(const BlockCode& code, ErasureMask erased, int prefix);

struct DecodedBlock {
    std::vector<std::optional<Element>> v;
    std::vector<std::optional<Element>> u;
    std::vector<int> v_time;
    std::vector<int> u_time;
};

/// Decodes a received word whose erasures form one burst of at most b.
/// Throws BeyondTolerance otherwise.
DecodedBlock decode_block(const BlockCode& code, const ReceivedWord& y);

/// A symbol that missed its deadline (or was decoded wrongly) under a pattern.
struct BlockFailure {
    int burst_start = 0;
    int burst_length = 0;
    char stream = 'v';
    int symbol = 0;
    int deadline = 0;
    std::optional<int> recovered_at; ///< nullopt: unrecovered
    bool wrong_value = false;
};

struct BlockWitness {
    int burst_start = 0;
    char stream = 'v';
    int symbol = 0;
    int deadline = 0;
};

struct BlockVerification {
    int burst = 0;
    int patterns_checked = 0;
    int basis_messages = 0;
    std::vector<BlockFailure> failures;
    std::vector<BlockWitness> tight;

    bool passed() const noexcept { return failures.empty(); }
};

/// Exhaustive check over every length-b burst placement and every unit
/// message: each symbol must come back correct by its deadline.
BlockVerification verify_block(const BlockCode& code, int b);

} // namespace muxstream::codes
