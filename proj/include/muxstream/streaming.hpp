/**************************************************************************
 * streaming.hpp
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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "muxstream/block_code.hpp"

namespace muxstream::stream {

using codes::BlockCode;
using codes::CodeParams;
using gf::Element;
using gf::Field;

/**
 * A streaming code: a diagonally interleaved block code, or a composition
 * of streaming codes. Composites keep their composition tree so rates can
 * be accounted exactly and descriptors round-trip losslessly.
 *
 * Slot packets of a composite are the concatenation of its parts' packets,
 * and its source packets concatenate the parts' source packets in the same
 * order.
 */
class StreamingCode {
public:
    enum class Kind { block, concatenation, time_share };

    Kind kind() const noexcept;
    const CodeParams& params() const noexcept;
    const Field& field() const noexcept;

    /// kind() == block
    const BlockCode& block() const;
    /// kind() == concatenation
    int copies() const;
    const StreamingCode& base() const;
    /// kind() == time_share
    const StreamingCode& first() const;
    const StreamingCode& second() const;

    /// One interleaved block code inside the flattened composite.
    struct Leaf {
        const BlockCode* code = nullptr;
        int packet_offset = 0;
        int v_offset = 0;
        int u_offset = 0;
    };

    /// Leaves in packet order. Pointers stay valid while this object lives.
    std::vector<Leaf> leaves() const;

    friend StreamingCode to_streaming(BlockCode inner);
    friend StreamingCode concatenate(const StreamingCode& code, int q);
    friend StreamingCode time_share(const StreamingCode& a, const StreamingCode& b);

private:
    struct Node;
    static std::shared_ptr<Node> make_node(Kind kind, const CodeParams& params, const Field& field);
    explicit StreamingCode(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Diagonal interleaving: codeword symbol l of the diagonal starting at slot
/// j is sent in slot j + l. The diagonal's source vector holds v_{j+r}[r]
/// and u_{j+kv+r}[r]; sources before slot 0 are zero.
StreamingCode to_streaming(BlockCode inner);

/// q independent instances side by side. Rates are unchanged.
StreamingCode concatenate(const StreamingCode& code, int q);

/// n_b copies of a next to n_a copies of b: n = 2 n_a n_b and the rate
/// pair is the midpoint of the two rate pairs. The parts must agree on B,
/// on Tv if both carry less-urgent symbols and on Tu if both carry urgent
/// ones; throws RegimeError otherwise.
StreamingCode time_share(const StreamingCode& a, const StreamingCode& b);

struct SourcePair {
    std::vector<Element> v;
    std::vector<Element> u;
};

/// Slot-by-slot encoder. Single caller, slots in order.
class StreamEncoder {
public:
    explicit StreamEncoder(StreamingCode code);

    /// Consumes the sources of the current slot and returns its packet.
    std::vector<Element> push(const SourcePair& pair);

    std::int64_t clock() const noexcept { return clock_; }
    const StreamingCode& code() const noexcept { return code_; }

private:
    StreamingCode code_;
    std::vector<StreamingCode::Leaf> leaves_;
    int window_ = 1;
    // Ring of the last `window_` slots' source vectors (kv + ku each).
    std::vector<std::vector<Element>> history_;
    std::int64_t clock_ = 0;
};

/// Shared memo of decoding plans, keyed by (leaf code, prefix, erasures).
/// Not thread-safe; use one per worker.
class PlanCache {
public:
    const codes::DecodePlan& get(const BlockCode& code, int prefix, codes::ErasureMask erased);
    std::size_t size() const noexcept;

private:
    struct Entry;
    std::vector<std::shared_ptr<Entry>> entries_;
};

/// Estimates emitted at one slot. Missing values are explicit unrecovered
/// marks; nothing is ever guessed.
struct Emission {
    std::int64_t slot = 0;
    /// Source slot the v estimates belong to (slot - Tv), if any.
    std::optional<std::int64_t> v_slot;
    std::vector<std::optional<Element>> v;
    /// Slot at which each v symbol became decodable.
    std::vector<std::int64_t> v_recovered_at;
    std::optional<std::int64_t> u_slot;
    std::vector<std::optional<Element>> u;
    std::vector<std::int64_t> u_recovered_at;
};

/// Slot-by-slot decoder. At slot i it emits v estimates of slot i - Tv and
/// u estimates of slot i - Tu, each from the diagonal prefix received so far.
class StreamDecoder {
public:
    explicit StreamDecoder(StreamingCode code, std::shared_ptr<PlanCache> cache = nullptr);

    /// `packet` is nullopt for an erased slot.
    Emission push(std::optional<std::span<const Element>> packet);

    std::int64_t clock() const noexcept { return clock_; }

private:
    StreamingCode code_;
    std::vector<StreamingCode::Leaf> leaves_;
    std::shared_ptr<PlanCache> cache_;
    int window_ = 1;
    std::vector<std::vector<Element>> packets_;
    std::vector<bool> erased_;
    std::int64_t clock_ = 0;
};

/// One streaming failure: an emitted estimate that is missing or wrong.
struct StreamFailure {
    std::int64_t burst_start = 0;
    int burst_length = 0;
    char stream = 'v';
    std::int64_t source_slot = 0;
    int symbol = 0;
    std::int64_t deadline_slot = 0;
    bool wrong_value = false;
};

/// A symbol recovered exactly at its deadline slot.
struct StreamWitness {
    std::int64_t burst_start = 0;
    char stream = 'v';
    std::int64_t source_slot = 0;
    int symbol = 0;
    std::int64_t deadline_slot = 0;
};

struct SweepResult {
    int burst = 0;
    std::int64_t horizon = 0;
    int patterns_checked = 0;
    int basis_messages = 0;
    std::uint64_t estimates_checked = 0;
    std::uint64_t failure_count = 0;
    /// First failures in (burst start, slot, stream, symbol) order.
    std::vector<StreamFailure> failures;
    std::vector<StreamWitness> witnesses;

    bool passed() const noexcept { return failure_count == 0; }
};

inline constexpr std::size_t kMaxReportedFailures = 64;
inline constexpr std::size_t kMaxReportedWitnesses = 16;

/// 2n + Tv for block codes; for composites the largest 2n + Tv over the
/// distinct leaf codes.
std::int64_t default_horizon(const StreamingCode& code);

/**
 * Streaming burst sweep: for every burst of length b starting in
 * [0, horizon], runs encoder, channel and decoder on kv + ku basis streams
 * (coordinate r is 1 in every slot, all others 0) and one seeded random
 * stream, and checks every emitted estimate of the slots the burst can
 * reach. b = 0 runs a single clean pattern.
 *
 * Composites are swept per distinct leaf code: leaves share nothing but the
 * slot erasures. Counts are scaled by leaf multiplicity and reported symbol
 * indices refer to the first copy of each leaf.
 */
SweepResult sweep_bursts(const StreamingCode& code, int b, std::int64_t horizon, std::uint64_t seed = 1,
                         unsigned workers = 0);

} // namespace muxstream::stream
