/**************************************************************************
 * test_streaming.cpp
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>
#include <tuple>

#include "muxstream/error.hpp"
#include "muxstream/streaming.hpp"

using namespace muxstream;
using namespace muxstream::stream;
using codes::CodeParams;
using gf::Matrix;

namespace {

const Field gf2 = Field::make(2, 2);

StreamingCode binary_reference()
{
    Matrix g(3, 5);
    for (auto [r, c] : {std::pair{0, 0}, {0, 3}, {1, 1}, {1, 4}, {2, 2}, {2, 3}, {2, 4}}) {
        g.at(r, c) = 1;
    }
    return to_streaming(BlockCode({3, 2, 2, 5, 2, 1}, gf2, g));
}

// (stream, slot, index) of one source symbol.
using Source = std::tuple<char, std::int64_t, int>;

SourcePair zero_pair(const CodeParams& p)
{
    return {std::vector<Element>(p.kv, 0), std::vector<Element>(p.ku, 0)};
}

// Packets produced by a single unit source symbol.
std::vector<std::vector<Element>> impulse_response(const StreamingCode& code, Source src, std::int64_t slots)
{
    StreamEncoder enc(code);
    std::vector<std::vector<Element>> out;
    for (std::int64_t t = 0; t < slots; ++t) {
        SourcePair pair = zero_pair(code.params());
        auto [stream, slot, index] = src;
        if (slot == t) {
            (stream == 'v' ? pair.v : pair.u)[index] = 1;
        }
        out.push_back(enc.push(pair));
    }
    return out;
}

std::vector<SourcePair> random_sources(const CodeParams& p, std::int64_t slots, const Field& f, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<SourcePair> out;
    for (std::int64_t t = 0; t < slots; ++t) {
        SourcePair s = zero_pair(p);
        for (auto& e : s.v) {
            e = static_cast<Element>(rng() % f.order());
        }
        for (auto& e : s.u) {
            e = static_cast<Element>(rng() % f.order());
        }
        out.push_back(s);
    }
    return out;
}

std::vector<std::vector<Element>> encode_all(const StreamingCode& code, const std::vector<SourcePair>& src)
{
    StreamEncoder enc(code);
    std::vector<std::vector<Element>> out;
    for (const auto& s : src) {
        out.push_back(enc.push(s));
    }
    return out;
}

} // namespace

TEST_CASE("interleaving the binary reference code gives the expected symbol table")
{
    const StreamingCode code = binary_reference();
    // Table rows: x_m[0] = v_m[0], x_m[1] = v_m[1], x_m[2] = u_m[0],
    // x_m[3] = v_{m-3}[0] + u_{m-1}[0], x_m[4] = v_{m-3}[1] + u_{m-2}[0].
    auto table = [](std::int64_t m, int l) {
        std::set<Source> s;
        auto add = [&](char stream, std::int64_t slot, int index) {
            if (slot >= 0) {
                s.insert({stream, slot, index});
            }
        };
        switch (l) {
        case 0: add('v', m, 0); break;
        case 1: add('v', m, 1); break;
        case 2: add('u', m, 0); break;
        case 3: add('v', m - 3, 0); add('u', m - 1, 0); break;
        default: add('v', m - 3, 1); add('u', m - 2, 0); break;
        }
        return s;
    };

    const std::int64_t slots = 16;
    std::map<std::pair<std::int64_t, int>, std::set<Source>> observed;
    std::vector<Source> sources;
    for (std::int64_t t = 0; t < slots; ++t) {
        sources.push_back({'v', t, 0});
        sources.push_back({'v', t, 1});
        sources.push_back({'u', t, 0});
    }
    for (const Source& src : sources) {
        const auto packets = impulse_response(code, src, slots);
        for (std::int64_t m = 0; m < slots; ++m) {
            REQUIRE(packets[m].size() == 5);
            for (int l = 0; l < 5; ++l) {
                if (packets[m][l] != 0) {
                    CHECK(packets[m][l] == 1);
                    observed[{m, l}].insert(src);
                }
            }
        }
    }
    for (std::int64_t m = 0; m < slots; ++m) {
        for (int l = 0; l < 5; ++l) {
            INFO("m=" << m << " l=" << l);
            CHECK(observed[{m, l}] == table(m, l));
        }
    }
}

TEST_CASE("binary reference code meets its delays under length-2 bursts")
{
    const StreamingCode code = binary_reference();
    const SweepResult r = sweep_bursts(code, 2, default_horizon(code));
    CHECK(r.passed());
    CHECK(r.patterns_checked == 2 * 5 + 3 + 1);

    // Burst on slots i, i+1: v_i is decodable by slot i + 3, u_i by i + 2.
    const std::int64_t slots = 30;
    const auto src = random_sources(code.params(), slots, gf2, 3);
    const auto packets = encode_all(code, src);
    for (std::int64_t i = 0; i + 2 < 20; ++i) {
        StreamDecoder dec(code);
        for (std::int64_t t = 0; t < slots; ++t) {
            const bool erased = t == i || t == i + 1;
            const Emission e = erased ? dec.push(std::nullopt) : dec.push(std::span<const Element>(packets[t]));
            if (e.v_slot && *e.v_slot == i) {
                for (int r = 0; r < 2; ++r) {
                    REQUIRE(e.v[r] == src[i].v[r]);
                    CHECK(e.v_recovered_at[r] <= i + 3);
                }
            }
            if (e.u_slot && *e.u_slot == i) {
                REQUIRE(e.u[0] == src[i].u[0]);
                CHECK(e.u_recovered_at[0] <= i + 2);
            }
        }
    }
}

TEST_CASE("stream_encode basics")
{
    const StreamingCode corner = to_streaming(codes::build_multiplexed(4, 2, 1, Field::gf256()));
    StreamEncoder enc(corner);
    for (int t = 0; t < 20; ++t) {
        const auto x = enc.push(zero_pair(corner.params()));
        CHECK(x.size() == 5);
        CHECK(x == std::vector<Element>(5, 0));
    }
    CHECK(enc.clock() == 20);

    // First packet: only the l = 0 diagonal has a nonzero source.
    const StreamingCode e1 = binary_reference();
    StreamEncoder first(e1);
    CHECK(first.push({{1, 1}, {1}}) == std::vector<Element>{1, 1, 1, 0, 0});

    CHECK_THROWS_AS(enc.push({{1}, {1, 1}}), LengthMismatch);
}

TEST_CASE("causality and time invariance")
{
    const Field f = Field::gf256();
    for (const StreamingCode& code : {binary_reference(), to_streaming(codes::build_multiplexed(7, 3, 2, f)),
                                      to_streaming(codes::build_single_stream(4, 2, f))}) {
        const auto& p = code.params();
        const Field& cf = code.field();
        const std::int64_t slots = 40;
        auto src = random_sources(p, slots, cf, 9);
        const auto base = encode_all(code, src);

        for (std::int64_t j = 0; j < slots; j += 7) {
            auto changed = src;
            if (p.kv > 0) {
                changed[j].v[0] = cf.add(changed[j].v[0], 1);
            } else {
                changed[j].u[0] = cf.add(changed[j].u[0], 1);
            }
            const auto out = encode_all(code, changed);
            for (std::int64_t t = 0; t < j; ++t) {
                REQUIRE(out[t] == base[t]);
            }
            CHECK(out[j] != base[j]);
        }

        // Shifting sources by one slot shifts packets by one slot after warm-up.
        std::vector<SourcePair> shifted{zero_pair(p)};
        shifted.insert(shifted.end(), src.begin(), src.end() - 1);
        const auto moved = encode_all(code, shifted);
        for (std::int64_t t = p.n - 1; t + 1 < slots; ++t) {
            REQUIRE(moved[t + 1] == base[t]);
        }
    }
}

TEST_CASE("decoder echoes sources without erasures")
{
    const StreamingCode code = to_streaming(codes::build_multiplexed(6, 2, 1, Field::gf256()));
    const auto& p = code.params();
    const std::int64_t slots = 40;
    const auto src = random_sources(p, slots, code.field(), 1);
    const auto packets = encode_all(code, src);
    StreamDecoder dec(code);
    int v_emitted = 0;
    int u_emitted = 0;
    for (std::int64_t t = 0; t < slots; ++t) {
        const Emission e = dec.push(std::span<const Element>(packets[t]));
        CHECK(e.slot == t);
        CHECK(e.v_slot.has_value() == (t >= p.tv));
        CHECK(e.u_slot.has_value() == (t >= p.tu));
        if (e.v_slot) {
            ++v_emitted;
            for (int r = 0; r < p.kv; ++r) {
                REQUIRE(e.v[r] == src[*e.v_slot].v[r]);
                // Systematic: v_j[r] arrives in slot j + r of its diagonal.
                CHECK(e.v_recovered_at[r] == *e.v_slot);
            }
        }
        if (e.u_slot) {
            ++u_emitted;
            for (int r = 0; r < p.ku; ++r) {
                REQUIRE(e.u[r] == src[*e.u_slot].u[r]);
            }
        }
    }
    CHECK(v_emitted == slots - p.tv);
    CHECK(u_emitted == slots - p.tu);
}

TEST_CASE("single-stream (2,1) code interleaves to a rate-2/3 delay-2 code")
{
    const StreamingCode code = to_streaming(codes::build_single_stream(2, 1, Field::gf256()));
    CHECK(code.params().rate_v() == Rational(2, 3));
    CHECK(code.params().tv == 2);
    CHECK(sweep_bursts(code, 1, default_horizon(code)).passed());
    CHECK(sweep_bursts(code, 0, 0).passed());
}

TEST_CASE("verified block codes stay verified once interleaved")
{
    const Field f = Field::gf256();
    std::vector<BlockCode> codes{codes::build_multiplexed(5, 2, 2, f), codes::build_multiplexed(8, 3, 2, f),
                                 codes::build_multiplexed(9, 3, 3, f), codes::build_single_stream(5, 3, f),
                                 codes::build_single_stream(4, 2, f, true)};
    for (const BlockCode& c : codes) {
        REQUIRE(codes::verify_block(c, c.params().b).passed());
        const StreamingCode s = to_streaming(c);
        const SweepResult r = sweep_bursts(s, c.params().b, default_horizon(s));
        CHECK(r.passed());
        CHECK(r.patterns_checked == default_horizon(s) + 1);
        CHECK(r.basis_messages == c.params().k());
        CHECK(r.estimates_checked > 0);
        // Shorter bursts are corrected as well.
        CHECK(sweep_bursts(s, c.params().b - 1, default_horizon(s)).passed());
    }
}

TEST_CASE("bursts longer than B produce unrecovered marks, never wrong values")
{
    const Field f = Field::gf256();
    const StreamingCode corner = to_streaming(codes::build_multiplexed(4, 2, 1, f));
    const SweepResult r = sweep_bursts(corner, 2, default_horizon(corner));
    CHECK_FALSE(r.passed());
    REQUIRE_FALSE(r.failures.empty());
    for (const StreamFailure& fail : r.failures) {
        CHECK_FALSE(fail.wrong_value);
        CHECK(fail.burst_length == 2);
    }

    // Exhaustive witness search over burst starts on one random stream.
    const std::int64_t slots = 40;
    const auto src = random_sources(corner.params(), slots, f, 2);
    const auto packets = encode_all(corner, src);
    int witnesses = 0;
    for (std::int64_t s = 0; s < 20; ++s) {
        StreamDecoder dec(corner);
        bool unrecovered = false;
        for (std::int64_t t = 0; t < slots; ++t) {
            const bool erased = t >= s && t < s + 2;
            const Emission e = erased ? dec.push(std::nullopt) : dec.push(std::span<const Element>(packets[t]));
            for (std::size_t r = 0; r < e.v.size(); ++r) {
                if (!e.v[r]) {
                    unrecovered = true;
                } else {
                    REQUIRE(*e.v[r] == src[*e.v_slot].v[r]);
                }
            }
            for (std::size_t r = 0; r < e.u.size(); ++r) {
                if (!e.u[r]) {
                    unrecovered = true;
                } else {
                    REQUIRE(*e.u[r] == src[*e.u_slot].u[r]);
                }
            }
        }
        witnesses += unrecovered ? 1 : 0;
    }
    CHECK(witnesses > 0);
}

TEST_CASE("concatenate")
{
    const Field f = Field::gf256();
    const StreamingCode base = to_streaming(codes::build_multiplexed(7, 2, 2, f));
    CHECK(concatenate(base, 1).kind() == StreamingCode::Kind::block);
    CHECK(concatenate(base, 1).params() == base.params());
    const StreamingCode c3 = concatenate(base, 3);
    CHECK(c3.kind() == StreamingCode::Kind::concatenation);
    CHECK(c3.copies() == 3);
    CHECK(c3.params().n == 27);
    CHECK(c3.params().kv == 15);
    CHECK(c3.params().ku == 6);
    CHECK(c3.params().rate_v() == base.params().rate_v());
    CHECK(c3.params().rate_u() == base.params().rate_u());
    CHECK(c3.leaves().size() == 3);
    CHECK(sweep_bursts(c3, 2, default_horizon(base)).passed());
    CHECK_THROWS_AS(concatenate(base, 0), RegimeError);

    // Each copy runs independently: packets are the base packets side by side.
    const auto src = random_sources(base.params(), 10, f, 4);
    std::vector<SourcePair> wide;
    for (const auto& s : src) {
        SourcePair w;
        for (int c = 0; c < 3; ++c) {
            w.v.insert(w.v.end(), s.v.begin(), s.v.end());
            w.u.insert(w.u.end(), s.u.begin(), s.u.end());
        }
        wide.push_back(w);
    }
    const auto narrow = encode_all(base, src);
    const auto big = encode_all(c3, wide);
    for (std::size_t t = 0; t < narrow.size(); ++t) {
        for (int c = 0; c < 3; ++c) {
            CHECK(std::equal(narrow[t].begin(), narrow[t].end(), big[t].begin() + c * 9));
        }
    }
}

TEST_CASE("time_share")
{
    const Field f = Field::gf256();
    const StreamingCode corner = to_streaming(codes::build_multiplexed(4, 2, 1, f));
    const StreamingCode axis = to_streaming(codes::build_single_stream(4, 1, f));
    const StreamingCode mix = time_share(corner, axis);
    CHECK(mix.kind() == StreamingCode::Kind::time_share);
    CHECK(mix.params().n == 50);
    CHECK(mix.params().kv == 30);
    CHECK(mix.params().ku == 10);
    CHECK(mix.params().tv == 4);
    CHECK(mix.params().tu == 2);
    CHECK(mix.params().rate_v() == Rational(3, 5));
    CHECK(mix.params().rate_u() == Rational(1, 5));
    CHECK(mix.leaves().size() == 10);
    CHECK(sweep_bursts(mix, 1, default_horizon(mix)).passed());

    const StreamingCode same = time_share(corner, corner);
    CHECK(same.params().rate_v() == corner.params().rate_v());
    CHECK(same.params().rate_u() == corner.params().rate_u());

    const StreamingCode urgent_axis = to_streaming(codes::build_single_stream(2, 1, f, true));
    const StreamingCode mix2 = time_share(corner, urgent_axis);
    CHECK(mix2.params().rate_v() == Rational(1, 5));
    CHECK(mix2.params().rate_u() == Rational(1, 5) + Rational(1, 3));
    CHECK(sweep_bursts(mix2, 1, 20).passed());

    CHECK_THROWS_AS(time_share(corner, to_streaming(codes::build_single_stream(5, 1, f))), RegimeError);
    CHECK_THROWS_AS(time_share(corner, to_streaming(codes::build_single_stream(4, 2, f))), RegimeError);
    CHECK_THROWS_AS(time_share(corner, to_streaming(codes::build_single_stream(3, 1, f, true))), RegimeError);
    CHECK_THROWS_AS(time_share(corner, to_streaming(codes::build_single_stream(4, 1, gf2))), RegimeError);
}

TEST_CASE("composite sweeps agree with whole-code simulation")
{
    const Field f = Field::gf256();
    const StreamingCode corner = to_streaming(codes::build_multiplexed(4, 2, 1, f));
    const StreamingCode mix = time_share(corner, to_streaming(codes::build_single_stream(4, 1, f)));
    const std::int64_t horizon = 2 * mix.params().n + mix.params().tv;

    for (int b : {1, 2}) {
        // (burst start, deadline slot, stream, source slot, symbol) of every
        // missing or wrong estimate of the whole 50-symbol code.
        std::set<std::tuple<std::int64_t, std::int64_t, char, std::int64_t, int>> direct;
        for (std::int64_t s = 0; s <= horizon; ++s) {
            const std::int64_t slots = s + b + 20;
            const auto src = random_sources(mix.params(), slots, f, 100 + s);
            const auto packets = encode_all(mix, src);
            StreamDecoder dec(mix);
            for (std::int64_t t = 0; t < slots; ++t) {
                const bool erased = t >= s && t < s + b;
                const Emission e = erased ? dec.push(std::nullopt) : dec.push(std::span<const Element>(packets[t]));
                for (std::size_t r = 0; r < e.v.size(); ++r) {
                    if (!e.v[r] || *e.v[r] != src[*e.v_slot].v[r]) {
                        direct.insert({s, t, 'v', *e.v_slot, static_cast<int>(r)});
                    }
                }
                for (std::size_t r = 0; r < e.u.size(); ++r) {
                    if (!e.u[r] || *e.u[r] != src[*e.u_slot].u[r]) {
                        direct.insert({s, t, 'u', *e.u_slot, static_cast<int>(r)});
                    }
                }
            }
        }
        const SweepResult r = sweep_bursts(mix, b, horizon);
        CHECK(direct.empty() == (b == 1));
        CHECK(r.passed() == direct.empty());
        for (const StreamFailure& fail : r.failures) {
            CHECK(direct.count({fail.burst_start, fail.deadline_slot, fail.stream, fail.source_slot, fail.symbol}) == 1);
        }
        if (!direct.empty()) {
            REQUIRE_FALSE(r.failures.empty());
            CHECK(std::get<0>(*direct.begin()) == r.failures.front().burst_start);
        }
    }
    CHECK(default_horizon(mix) == 14);
    CHECK(default_horizon(corner) == 14);
}

TEST_CASE("plan cache memoizes per pattern")
{
    const StreamingCode code = to_streaming(codes::build_multiplexed(5, 2, 1, Field::gf256()));
    auto cache = std::make_shared<PlanCache>();
    const auto r1 = sweep_bursts(code, 1, 12, 1, 1);
    StreamDecoder dec(code, cache);
    for (int t = 0; t < 30; ++t) {
        dec.push(std::span<const Element>(std::vector<Element>(6, 0)));
    }
    const std::size_t size = cache->size();
    CHECK(size > 0);
    for (int t = 0; t < 30; ++t) {
        dec.push(std::span<const Element>(std::vector<Element>(6, 0)));
    }
    CHECK(cache->size() == size);
    CHECK(r1.passed());
    // Worker count does not change the merged report.
    const auto r2 = sweep_bursts(code, 2, 12, 1, 3);
    const auto r3 = sweep_bursts(code, 2, 12, 1, 1);
    CHECK(r2.failure_count == r3.failure_count);
    REQUIRE(r2.failures.size() == r3.failures.size());
    for (std::size_t i = 0; i < r2.failures.size(); ++i) {
        CHECK(r2.failures[i].burst_start == r3.failures[i].burst_start);
        CHECK(r2.failures[i].source_slot == r3.failures[i].source_slot);
    }
}
