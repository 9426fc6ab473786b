/**************************************************************************
 * verify.cpp
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

#include "muxstream/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "muxstream/descriptor.hpp"
#include "muxstream/error.hpp"

namespace muxstream::verify {

namespace {

using gf::Element;
using nlohmann::ordered_json;
using stream::Emission;
using stream::SourcePair;

ordered_json params_json(const codes::CodeParams& p)
{
    return {{"tv", p.tv}, {"tu", p.tu}, {"b", p.b}, {"n", p.n}, {"kv", p.kv}, {"ku", p.ku}};
}

std::string burst_text(std::int64_t start, int length)
{
    return "burst:" + std::to_string(start) + "," + std::to_string(length);
}

std::string symbol_text(char stream, std::int64_t slot, int symbol)
{
    return std::string(1, stream) + "_" + std::to_string(slot) + "[" + std::to_string(symbol) + "]";
}

ordered_json counts_json(const StreamCounts& c)
{
    return {{"estimates", c.estimates},
            {"recovered", c.recovered},
            {"deadline_miss", c.deadline_miss},
            {"unrecovered", c.unrecovered},
            {"wrong", c.wrong}};
}

// Which leaf, and which symbol of it, carries a composite source index.
struct Owner {
    std::size_t leaf = 0;
    int symbol = 0;
};

} // namespace

VerificationReport verify_code(const StreamingCode& code, int b, std::optional<std::int64_t> horizon, unsigned workers)
{
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    r.params = code.params();
    r.code_hash = descriptor::code_hash(code);
    r.sweep = stream::sweep_bursts(code, b, horizon.value_or(stream::default_horizon(code)), r.seed, workers);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

ordered_json to_json(const VerificationReport& r)
{
    ordered_json j;
    j["verdict"] = r.passed() ? "pass" : "fail";
    j["params"] = params_json(r.params);
    j["code_hash"] = r.code_hash;
    j["burst"] = r.sweep.burst;
    j["horizon"] = r.sweep.horizon;
    j["seed"] = r.seed;
    j["patterns_checked"] = r.sweep.patterns_checked;
    j["basis_messages"] = r.sweep.basis_messages;
    j["estimates_checked"] = r.sweep.estimates_checked;
    j["failure_count"] = r.sweep.failure_count;
    j["failures"] = ordered_json::array();
    for (const auto& f : r.sweep.failures) {
        j["failures"].push_back({{"pattern", burst_text(f.burst_start, f.burst_length)},
                                 {"stream", std::string(1, f.stream)},
                                 {"source_slot", f.source_slot},
                                 {"symbol", f.symbol},
                                 {"deadline_slot", f.deadline_slot},
                                 {"actual", f.wrong_value ? "wrong" : "unrecovered"}});
    }
    j["deadline_witnesses"] = ordered_json::array();
    for (const auto& w : r.sweep.witnesses) {
        j["deadline_witnesses"].push_back({{"pattern", burst_text(w.burst_start, r.sweep.burst)},
                                           {"stream", std::string(1, w.stream)},
                                           {"source_slot", w.source_slot},
                                           {"symbol", w.symbol},
                                           {"recovered_at", w.deadline_slot}});
    }
    j["wall_time_s"] = r.wall_seconds;
    return j;
}

std::string summary(const VerificationReport& r)
{
    char head[160];
    std::snprintf(head, sizeof head, "verify: %s  B=%d  burst starts 0..%lld (%d patterns)  %llu estimates  %.3f s\n",
                  r.passed() ? "PASS" : "FAIL", r.sweep.burst, static_cast<long long>(r.sweep.horizon),
                  r.sweep.patterns_checked, static_cast<unsigned long long>(r.sweep.estimates_checked),
                  r.wall_seconds);
    std::string out = head;
    if (!r.sweep.failures.empty()) {
        const auto& f = r.sweep.failures.front();
        out += "  counterexample: " + burst_text(f.burst_start, f.burst_length) + " leaves "
               + symbol_text(f.stream, f.source_slot, f.symbol) + (f.wrong_value ? " wrong" : " unrecovered")
               + " at its deadline slot " + std::to_string(f.deadline_slot) + " ("
               + std::to_string(r.sweep.failure_count) + " failing estimates in total)\n";
    }
    return out;
}

SimulationReport simulate(const StreamingCode& code, const channel::PatternSpec& pattern, std::int64_t slots,
                          std::uint64_t message_seed)
{
    if (slots < 0) {
        throw RegimeError("slot count must be non-negative");
    }
    const auto& p = code.params();
    const auto leaves = code.leaves();
    int longest = 1;
    std::vector<Owner> v_owner(p.kv);
    std::vector<Owner> u_owner(p.ku);
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        const auto& lp = leaves[l].code->params();
        longest = std::max(longest, lp.n);
        for (int r = 0; r < lp.kv; ++r) {
            v_owner[leaves[l].v_offset + r] = {l, r};
        }
        for (int r = 0; r < lp.ku; ++r) {
            u_owner[leaves[l].u_offset + r] = {l, lp.kv + r};
        }
    }
    const std::int64_t run = slots + std::max(p.tv, p.tu);

    // Erasures for the run plus enough slots to complete every diagonal.
    std::vector<bool> erased;
    auto channel_stream = pattern.stream();
    for (std::int64_t t = 0; t < run + longest; ++t) {
        erased.push_back(channel_stream.next());
    }

    SimulationReport rep;
    rep.pattern = pattern.text;
    rep.slots = slots;
    rep.message_seed = message_seed;
    if (const auto* ge = std::get_if<channel::PatternSpec::GeParams>(&pattern.source)) {
        rep.gilbert_elliott = *ge;
    }
    const std::vector<bool> window(erased.begin(), erased.begin() + run);
    rep.erased_slots = std::count(window.begin(), window.end(), true);
    rep.within_contract = channel::ErasurePattern::explicit_bits(window).single_burst_within(p.b);
    if (!rep.within_contract) {
        rep.note = "pattern exceeds the single-burst contract (one burst of at most B=" + std::to_string(p.b)
                   + " slots); counts are reported without a correctness claim";
    }

    std::mt19937_64 rng(message_seed);
    std::uniform_int_distribution<Element> pick(0, code.field().order() - 1);
    stream::StreamEncoder enc(code);
    stream::StreamDecoder dec(code);
    stream::PlanCache full;
    std::vector<SourcePair> sent;

    // Value-independent check: is the symbol a function of its whole diagonal?
    auto later = [&](const Owner& o, std::int64_t diagonal) {
        const auto& leaf = *leaves[o.leaf].code;
        codes::ErasureMask mask = 0;
        for (int l = 0; l < leaf.params().n; ++l) {
            if (diagonal + l >= 0 && erased[diagonal + l]) {
                mask |= codes::ErasureMask{1} << l;
            }
        }
        return full.get(leaf, leaf.params().n, mask).symbols[o.symbol].recovered;
    };
    auto tally = [&](StreamCounts& c, const std::vector<std::optional<Element>>& got, const std::vector<Element>& truth,
                     const std::vector<Owner>& owner, std::int64_t src_slot) {
        for (std::size_t r = 0; r < got.size(); ++r) {
            ++c.estimates;
            if (got[r]) {
                ++(*got[r] == truth[r] ? c.recovered : c.wrong);
            } else {
                // Leaf symbol s of slot t lives on the diagonal starting at t - s.
                ++(later(owner[r], src_slot - owner[r].symbol) ? c.deadline_miss : c.unrecovered);
            }
        }
    };

    for (std::int64_t t = 0; t < run; ++t) {
        SourcePair src{std::vector<Element>(p.kv, 0), std::vector<Element>(p.ku, 0)};
        if (t < slots) {
            for (auto& e : src.v) {
                e = pick(rng);
            }
            for (auto& e : src.u) {
                e = pick(rng);
            }
        }
        const auto packet = enc.push(src);
        sent.push_back(std::move(src));
        const Emission e = erased[t] ? dec.push(std::nullopt) : dec.push(std::span<const Element>(packet));
        if (e.v_slot && *e.v_slot < slots) {
            tally(rep.v, e.v, sent[*e.v_slot].v, v_owner, *e.v_slot);
        }
        if (e.u_slot && *e.u_slot < slots) {
            tally(rep.u, e.u, sent[*e.u_slot].u, u_owner, *e.u_slot);
        }
    }
    return rep;
}

ordered_json to_json(const SimulationReport& r)
{
    ordered_json j;
    ordered_json pat;
    pat["spec"] = r.pattern;
    pat["within_contract"] = r.within_contract;
    if (!r.note.empty()) {
        pat["note"] = r.note;
    }
    if (r.gilbert_elliott) {
        pat["generator"] = {{"name", channel::GilbertElliott::kGenerator},
                            {"p", r.gilbert_elliott->p},
                            {"q", r.gilbert_elliott->q},
                            {"seed", r.gilbert_elliott->seed}};
    }
    j["pattern"] = std::move(pat);
    j["slots"] = r.slots;
    j["erased_slots"] = r.erased_slots;
    j["messages"] = {{"generator", "mt19937_64"}, {"seed", r.message_seed}};
    j["streams"] = {{"v", counts_json(r.v)}, {"u", counts_json(r.u)}};
    return j;
}

std::string summary(const SimulationReport& r)
{
    auto line = [](char name, const StreamCounts& c) {
        return std::string("  ") + name + ": " + std::to_string(c.recovered) + "/" + std::to_string(c.estimates)
               + " recovered, " + std::to_string(c.deadline_miss) + " deadline misses, "
               + std::to_string(c.unrecovered) + " unrecovered"
               + (c.wrong > 0 ? ", " + std::to_string(c.wrong) + " WRONG" : "") + "\n";
    };
    std::string out = "simulate: " + r.pattern + ", " + std::to_string(r.slots) + " slots, "
                      + std::to_string(r.erased_slots) + " erased\n";
    out += line('v', r.v) + line('u', r.u);
    if (!r.note.empty()) {
        out += "  note: " + r.note + "\n";
    }
    return out;
}

} // namespace muxstream::verify
