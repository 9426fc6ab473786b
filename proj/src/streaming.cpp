/**************************************************************************
 * streaming.cpp
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

#include "muxstream/streaming.hpp"

#include <algorithm>
#include <random>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "muxstream/error.hpp"

namespace muxstream::stream {

struct StreamingCode::Node {
    Kind kind = Kind::block;
    CodeParams params;
    Field field;
    std::optional<BlockCode> block;
    int copies = 1;
    std::vector<StreamingCode> parts;
};

StreamingCode::Kind StreamingCode::kind() const noexcept { return node_->kind; }
const CodeParams& StreamingCode::params() const noexcept { return node_->params; }
const Field& StreamingCode::field() const noexcept { return node_->field; }

const BlockCode& StreamingCode::block() const
{
    if (node_->kind != Kind::block) {
        throw FormatError("composite streaming code has no single block code");
    }
    return *node_->block;
}

int StreamingCode::copies() const
{
    if (node_->kind != Kind::concatenation) {
        throw FormatError("not a concatenation");
    }
    return node_->copies;
}

const StreamingCode& StreamingCode::base() const
{
    if (node_->kind != Kind::concatenation) {
        throw FormatError("not a concatenation");
    }
    return node_->parts[0];
}

const StreamingCode& StreamingCode::first() const
{
    if (node_->kind != Kind::time_share) {
        throw FormatError("not a time_share");
    }
    return node_->parts[0];
}

const StreamingCode& StreamingCode::second() const
{
    if (node_->kind != Kind::time_share) {
        throw FormatError("not a time_share");
    }
    return node_->parts[1];
}

namespace {

using Leaf = StreamingCode::Leaf;

void flatten(const StreamingCode& code, Leaf at, std::vector<Leaf>& out)
{
    switch (code.kind()) {
    case StreamingCode::Kind::block:
        at.code = &code.block();
        out.push_back(at);
        return;
    case StreamingCode::Kind::concatenation: {
        const auto& p = code.base().params();
        for (int c = 0; c < code.copies(); ++c) {
            flatten(code.base(), {nullptr, at.packet_offset + c * p.n, at.v_offset + c * p.kv, at.u_offset + c * p.ku},
                    out);
        }
        return;
    }
    case StreamingCode::Kind::time_share: {
        const auto& pa = code.first().params();
        const auto& pb = code.second().params();
        for (int c = 0; c < pb.n; ++c) {
            flatten(code.first(), at, out);
            at.packet_offset += pa.n;
            at.v_offset += pa.kv;
            at.u_offset += pa.ku;
        }
        for (int c = 0; c < pa.n; ++c) {
            flatten(code.second(), at, out);
            at.packet_offset += pb.n;
            at.v_offset += pb.kv;
            at.u_offset += pb.ku;
        }
        return;
    }
    }
}

// Oldest slot (relative to the current one) any emission reads.
int decoder_window(const std::vector<Leaf>& leaves)
{
    int w = 1;
    for (const Leaf& l : leaves) {
        const auto& p = l.code->params();
        w = std::max(w, p.n);
        if (p.kv > 0) {
            w = std::max(w, p.tv + p.kv);
        }
        if (p.ku > 0) {
            w = std::max(w, p.tu + p.kv + p.ku);
        }
    }
    return w;
}

std::size_t ring(std::int64_t slot, int window)
{
    return static_cast<std::size_t>(slot % window);
}

} // namespace

std::shared_ptr<StreamingCode::Node> StreamingCode::make_node(Kind kind, const CodeParams& params, const Field& field)
{
    return std::make_shared<Node>(Node{kind, params, field, std::nullopt, 1, {}});
}

std::vector<Leaf> StreamingCode::leaves() const
{
    std::vector<Leaf> out;
    flatten(*this, {}, out);
    return out;
}

StreamingCode to_streaming(BlockCode inner)
{
    auto node = StreamingCode::make_node(StreamingCode::Kind::block, inner.params(), inner.field());
    node->block = std::move(inner);
    return StreamingCode(std::move(node));
}

StreamingCode concatenate(const StreamingCode& code, int q)
{
    if (q < 1) {
        throw RegimeError("concatenation needs at least one copy, got " + std::to_string(q));
    }
    if (q == 1) {
        return code;
    }
    CodeParams p = code.params();
    p.n *= q;
    p.kv *= q;
    p.ku *= q;
    auto node = StreamingCode::make_node(StreamingCode::Kind::concatenation, p, code.field());
    node->copies = q;
    node->parts = {code};
    return StreamingCode(std::move(node));
}

StreamingCode time_share(const StreamingCode& a, const StreamingCode& b)
{
    const auto& pa = a.params();
    const auto& pb = b.params();
    if (!(a.field() == b.field())) {
        throw RegimeError("time sharing needs codes over the same field");
    }
    if (pa.b != pb.b) {
        throw RegimeError("time sharing needs equal burst lengths, got " + std::to_string(pa.b) + " and "
                          + std::to_string(pb.b));
    }
    if (pa.kv > 0 && pb.kv > 0 && pa.tv != pb.tv) {
        throw RegimeError("time sharing needs equal Tv, got " + std::to_string(pa.tv) + " and "
                          + std::to_string(pb.tv));
    }
    if (pa.ku > 0 && pb.ku > 0 && pa.tu != pb.tu) {
        throw RegimeError("time sharing needs equal Tu, got " + std::to_string(pa.tu) + " and "
                          + std::to_string(pb.tu));
    }
    CodeParams p;
    p.tv = pa.kv > 0 || pb.kv == 0 ? pa.tv : pb.tv;
    p.tu = pa.ku > 0 || pb.ku == 0 ? pa.tu : pb.tu;
    p.b = pa.b;
    p.n = 2 * pa.n * pb.n;
    p.kv = pb.n * pa.kv + pa.n * pb.kv;
    p.ku = pb.n * pa.ku + pa.n * pb.ku;
    auto node = StreamingCode::make_node(StreamingCode::Kind::time_share, p, a.field());
    node->parts = {a, b};
    return StreamingCode(std::move(node));
}

StreamEncoder::StreamEncoder(StreamingCode code) : code_(std::move(code)), leaves_(code_.leaves())
{
    for (const Leaf& l : leaves_) {
        window_ = std::max(window_, l.code->params().n);
    }
    history_.assign(window_, std::vector<Element>(code_.params().k(), 0));
}

std::vector<Element> StreamEncoder::push(const SourcePair& pair)
{
    const auto& p = code_.params();
    if (pair.v.size() != static_cast<std::size_t>(p.kv) || pair.u.size() != static_cast<std::size_t>(p.ku)) {
        throw LengthMismatch("source pair needs " + std::to_string(p.kv) + " + " + std::to_string(p.ku)
                             + " symbols, got " + std::to_string(pair.v.size()) + " + "
                             + std::to_string(pair.u.size()));
    }
    auto& now = history_[ring(clock_, window_)];
    std::copy(pair.v.begin(), pair.v.end(), now.begin());
    std::copy(pair.u.begin(), pair.u.end(), now.begin() + p.kv);
    for (Element e : now) {
        if (!code_.field().contains(e)) {
            throw FormatError("source symbol outside the field");
        }
    }

    const Field& f = code_.field();
    std::vector<Element> packet(p.n, 0);
    for (const Leaf& leaf : leaves_) {
        const auto& lp = leaf.code->params();
        const auto& g = leaf.code->generator();
        for (int l = 0; l < lp.n; ++l) {
            // Diagonal i - l; its symbol s was sourced in slot i - l + s.
            Element acc = 0;
            for (int s = 0; s <= l && s < lp.k(); ++s) {
                const Element coeff = g.at(s, l);
                const std::int64_t slot = clock_ - l + s;
                if (coeff == 0 || slot < 0) {
                    continue;
                }
                const auto& src = history_[ring(slot, window_)];
                const Element sym = s < lp.kv ? src[leaf.v_offset + s] : src[p.kv + leaf.u_offset + (s - lp.kv)];
                acc = f.add(acc, f.mul(coeff, sym));
            }
            packet[leaf.packet_offset + l] = acc;
        }
    }
    ++clock_;
    return packet;
}

struct PlanCache::Entry {
    const BlockCode* code = nullptr;
    std::vector<std::unordered_map<codes::ErasureMask, codes::DecodePlan>> by_prefix;
};

const codes::DecodePlan& PlanCache::get(const BlockCode& code, int prefix, codes::ErasureMask erased)
{
    Entry* entry = nullptr;
    for (const auto& e : entries_) {
        if (e->code == &code) {
            entry = e.get();
            break;
        }
    }
    if (entry == nullptr) {
        auto e = std::make_shared<Entry>();
        e->code = &code;
        e->by_prefix.resize(code.params().n + 1);
        entries_.push_back(e);
        entry = e.get();
    }
    auto& slot = entry->by_prefix[prefix];
    auto it = slot.find(erased);
    if (it == slot.end()) {
        it = slot.emplace(erased, codes::plan_best_effort(code, erased, prefix)).first;
    }
    return it->second;
}

std::size_t PlanCache::size() const noexcept
{
    std::size_t total = 0;
    for (const auto& e : entries_) {
        for (const auto& m : e->by_prefix) {
            total += m.size();
        }
    }
    return total;
}

StreamDecoder::StreamDecoder(StreamingCode code, std::shared_ptr<PlanCache> cache)
    : code_(std::move(code))
    , leaves_(code_.leaves())
    , cache_(cache ? std::move(cache) : std::make_shared<PlanCache>())
    , window_(decoder_window(leaves_))
    , packets_(window_, std::vector<Element>(code_.params().n, 0))
    , erased_(window_, false)
{
}

Emission StreamDecoder::push(std::optional<std::span<const Element>> packet)
{
    const auto& p = code_.params();
    const std::size_t at = ring(clock_, window_);
    if (packet) {
        if (packet->size() != static_cast<std::size_t>(p.n)) {
            throw LengthMismatch("packet has " + std::to_string(packet->size()) + " symbols, code needs "
                                 + std::to_string(p.n));
        }
        std::copy(packet->begin(), packet->end(), packets_[at].begin());
        erased_[at] = false;
    } else {
        erased_[at] = true;
    }

    const std::int64_t i = clock_;
    Emission out;
    out.slot = i;
    if (p.kv > 0 && i >= p.tv) {
        out.v_slot = i - p.tv;
        out.v.assign(p.kv, std::nullopt);
        out.v_recovered_at.assign(p.kv, -1);
    }
    if (p.ku > 0 && i >= p.tu) {
        out.u_slot = i - p.tu;
        out.u.assign(p.ku, std::nullopt);
        out.u_recovered_at.assign(p.ku, -1);
    }

    std::vector<Element> word;
    for (const Leaf& leaf : leaves_) {
        const BlockCode& code = *leaf.code;
        const auto& lp = code.params();
        word.assign(lp.n, 0);

        auto estimate = [&](int s, std::int64_t j, std::optional<Element>& value, std::int64_t& recovered_at) {
            const int prefix = static_cast<int>(std::min<std::int64_t>(i - j + 1, lp.n));
            codes::ErasureMask mask = 0;
            for (int l = 0; l < prefix; ++l) {
                const std::int64_t slot = j + l;
                if (slot < 0) {
                    word[l] = 0;
                    continue;
                }
                const std::size_t r = ring(slot, window_);
                if (erased_[r]) {
                    mask |= codes::ErasureMask{1} << l;
                    word[l] = 0;
                } else {
                    word[l] = packets_[r][leaf.packet_offset + l];
                }
            }
            const codes::DecodePlan& plan = cache_->get(code, prefix, mask);
            const codes::Recovery& rec = plan.symbols[s];
            if (rec.recovered) {
                value = plan.apply(code.field(), s, word);
                recovered_at = j + rec.time;
            }
        };

        if (out.v_slot) {
            for (int r = 0; r < lp.kv; ++r) {
                estimate(r, *out.v_slot - r, out.v[leaf.v_offset + r], out.v_recovered_at[leaf.v_offset + r]);
            }
        }
        if (out.u_slot) {
            for (int r = 0; r < lp.ku; ++r) {
                estimate(lp.kv + r, *out.u_slot - lp.kv - r, out.u[leaf.u_offset + r],
                         out.u_recovered_at[leaf.u_offset + r]);
            }
        }
    }
    ++clock_;
    return out;
}

namespace {

struct DistinctLeaf {
    Leaf first;
    std::uint64_t count = 0;
};

bool same_code(const BlockCode& a, const BlockCode& b)
{
    return &a == &b
           || (a.kind() == b.kind() && a.params() == b.params() && a.field() == b.field()
               && a.generator() == b.generator());
}

std::vector<DistinctLeaf> distinct_leaves(const StreamingCode& code)
{
    std::vector<DistinctLeaf> out;
    for (const Leaf& leaf : code.leaves()) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const DistinctLeaf& d) { return same_code(*d.first.code, *leaf.code); });
        if (it == out.end()) {
            out.push_back({leaf, 1});
        } else {
            ++it->count;
        }
    }
    return out;
}

} // namespace

std::int64_t default_horizon(const StreamingCode& code)
{
    if (code.kind() == StreamingCode::Kind::block) {
        return 2 * static_cast<std::int64_t>(code.params().n) + code.params().tv;
    }
    std::int64_t h = 0;
    for (const auto& d : distinct_leaves(code)) {
        h = std::max(h, 2 * static_cast<std::int64_t>(d.first.code->params().n) + code.params().tv);
    }
    return h;
}

namespace {

struct PatternOutcome {
    std::uint64_t checked = 0;
    std::uint64_t failure_count = 0;
    std::vector<StreamFailure> failures;
    std::vector<StreamWitness> witnesses;
};

PatternOutcome run_pattern(const StreamingCode& code, const std::vector<Leaf>& leaves, int b, std::int64_t start,
                           std::uint64_t seed, const std::shared_ptr<PlanCache>& cache)
{
    const auto& p = code.params();
    const int k = p.k();
    const int reach = decoder_window(leaves) + std::max(p.tv, p.tu);
    const std::int64_t length = start + b + reach + 1;
    const Element top = code.field().order() - 1;

    PatternOutcome out;
    for (int m = 0; m <= k; ++m) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(start)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<Element> pick(0, top);

        StreamEncoder enc(code);
        StreamDecoder dec(code, cache);
        std::vector<SourcePair> sent;
        sent.reserve(length);
        for (std::int64_t slot = 0; slot < length; ++slot) {
            SourcePair src{std::vector<Element>(p.kv, 0), std::vector<Element>(p.ku, 0)};
            if (m == k) {
                for (auto& e : src.v) {
                    e = pick(rng);
                }
                for (auto& e : src.u) {
                    e = pick(rng);
                }
            } else if (m < p.kv) {
                src.v[m] = 1;
            } else {
                src.u[m - p.kv] = 1;
            }
            const auto packet = enc.push(src);
            sent.push_back(std::move(src));
            const bool erased = b > 0 && slot >= start && slot < start + b;
            const Emission e = erased ? dec.push(std::nullopt) : dec.push(std::span<const Element>(packet));

            auto check = [&](char stream, std::int64_t src_slot, const std::vector<std::optional<Element>>& got,
                             const std::vector<std::int64_t>& at, const std::vector<Element>& truth) {
                for (std::size_t r = 0; r < got.size(); ++r) {
                    ++out.checked;
                    const bool wrong = got[r] && *got[r] != truth[r];
                    if (!got[r] || wrong) {
                        ++out.failure_count;
                        if (out.failures.size() < kMaxReportedFailures) {
                            out.failures.push_back({start, b, stream, src_slot, static_cast<int>(r), slot, wrong});
                        }
                    } else if (m == k && at[r] == slot && b > 0 && out.witnesses.size() < kMaxReportedWitnesses) {
                        out.witnesses.push_back({start, stream, src_slot, static_cast<int>(r), slot});
                    }
                }
            };
            if (e.v_slot) {
                check('v', *e.v_slot, e.v, e.v_recovered_at, sent[*e.v_slot].v);
            }
            if (e.u_slot) {
                check('u', *e.u_slot, e.u, e.u_recovered_at, sent[*e.u_slot].u);
            }
        }
    }
    return out;
}

void order_reports(SweepResult& result)
{
    auto key = [](const auto& x) { return std::tuple(x.burst_start, x.deadline_slot, x.stream, x.symbol); };
    std::stable_sort(result.failures.begin(), result.failures.end(),
                     [&](const auto& x, const auto& y) { return key(x) < key(y); });
    std::stable_sort(result.witnesses.begin(), result.witnesses.end(),
                     [&](const auto& x, const auto& y) { return key(x) < key(y); });
    if (result.failures.size() > kMaxReportedFailures) {
        result.failures.resize(kMaxReportedFailures);
    }
    if (result.witnesses.size() > kMaxReportedWitnesses) {
        result.witnesses.resize(kMaxReportedWitnesses);
    }
}

} // namespace

SweepResult sweep_bursts(const StreamingCode& code, int b, std::int64_t horizon, std::uint64_t seed,
                         unsigned workers)
{
    if (b < 0 || horizon < 0) {
        throw RegimeError("burst length and horizon must be non-negative");
    }
    SweepResult result;
    result.burst = b;
    result.horizon = horizon;

    if (code.kind() != StreamingCode::Kind::block) {
        // Leaves run independently and see the same slot erasures, so the
        // composite is swept one distinct leaf code at a time.
        for (const auto& d : distinct_leaves(code)) {
            const SweepResult r = sweep_bursts(to_streaming(*d.first.code), b, horizon, seed, workers);
            result.patterns_checked = std::max(result.patterns_checked, r.patterns_checked);
            result.basis_messages += r.basis_messages;
            result.estimates_checked += r.estimates_checked * d.count;
            result.failure_count += r.failure_count * d.count;
            for (StreamFailure f : r.failures) {
                f.symbol += f.stream == 'v' ? d.first.v_offset : d.first.u_offset;
                result.failures.push_back(f);
            }
            for (StreamWitness w : r.witnesses) {
                w.symbol += w.stream == 'v' ? d.first.v_offset : d.first.u_offset;
                result.witnesses.push_back(w);
            }
        }
        order_reports(result);
        return result;
    }
    result.basis_messages = code.params().k();

    std::vector<std::int64_t> starts;
    if (b == 0) {
        starts.push_back(0);
    } else {
        for (std::int64_t s = 0; s <= horizon; ++s) {
            starts.push_back(s);
        }
    }
    result.patterns_checked = static_cast<int>(starts.size());

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(starts.size()));

    const auto leaves = code.leaves();
    std::vector<PatternOutcome> outcomes(starts.size());
    auto work = [&](unsigned w) {
        auto cache = std::make_shared<PlanCache>();
        for (std::size_t t = w; t < starts.size(); t += workers) {
            outcomes[t] = run_pattern(code, leaves, b, starts[t], seed, cache);
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }

    for (auto& o : outcomes) {
        result.estimates_checked += o.checked;
        result.failure_count += o.failure_count;
        result.failures.insert(result.failures.end(), o.failures.begin(), o.failures.end());
        result.witnesses.insert(result.witnesses.end(), o.witnesses.begin(), o.witnesses.end());
    }
    order_reports(result);
    return result;
}

} // namespace muxstream::stream
