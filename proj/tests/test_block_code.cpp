/**************************************************************************
 * test_block_code.cpp
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

#include <random>

#include "muxstream/block_code.hpp"
#include "muxstream/error.hpp"

using namespace muxstream;
using namespace muxstream::codes;

namespace {

const Field gf2 = Field::make(2, 2);

Matrix from_rows(std::initializer_list<std::initializer_list<Element>> rows)
{
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (Element e : row) {
            m.at(r, c++) = e;
        }
        ++r;
    }
    return m;
}

BlockCode binary_reference()
{
    return BlockCode({3, 2, 2, 5, 2, 1}, gf2, from_rows({{1, 0, 0, 1, 0}, {0, 1, 0, 0, 1}, {0, 0, 1, 1, 1}}));
}

ReceivedWord erase(const std::vector<Element>& x, ErasureMask mask)
{
    ReceivedWord y;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if ((mask >> i) & 1u) {
            y.push_back(std::nullopt);
        } else {
            y.push_back(x[i]);
        }
    }
    return y;
}

// Brute-force oracle over GF(2): symbol s is known at time t iff every
// message whose codeword agrees with the unerased positions <= t has the
// same value at s. Returns the first such t (or -1).
std::vector<int> brute_force_times(const BlockCode& code, ErasureMask mask)
{
    const int k = code.params().k();
    const int n = code.params().n;
    REQUIRE(code.field().order() == 2);
    REQUIRE(k <= 16);
    std::vector<std::vector<Element>> words;
    for (std::uint32_t m = 0; m < (1u << k); ++m) {
        std::vector<Element> msg(k);
        for (int i = 0; i < k; ++i) {
            msg[i] = (m >> i) & 1u;
        }
        words.push_back(gf::row_times(code.field(), msg, code.generator()));
    }
    // By linearity it suffices to look at messages whose visible prefix
    // is all zero: s is known iff all of them have m_s = 0.
    std::vector<int> times(k, -1);
    for (int t = 0; t < n; ++t) {
        std::vector<bool> ambiguous(k, false);
        for (std::uint32_t m = 0; m < (1u << k); ++m) {
            bool zero = true;
            for (int p = 0; p <= t && zero; ++p) {
                if (!((mask >> p) & 1u) && words[m][p] != 0) {
                    zero = false;
                }
            }
            if (!zero) {
                continue;
            }
            for (int s = 0; s < k; ++s) {
                if ((m >> s) & 1u) {
                    ambiguous[s] = true;
                }
            }
        }
        for (int s = 0; s < k; ++s) {
            if (times[s] < 0 && !ambiguous[s]) {
                times[s] = t;
            }
        }
    }
    return times;
}

std::vector<Element> random_message(std::mt19937_64& rng, const Field& f, int len)
{
    std::vector<Element> out(len);
    for (auto& e : out) {
        e = static_cast<Element>(rng() % f.order());
    }
    return out;
}

} // namespace

TEST_CASE("build_single_stream examples")
{
    const BlockCode c = build_single_stream(2, 1, gf2);
    CHECK(c.generator() == from_rows({{1, 0, 1}, {0, 1, 1}}));
    CHECK(c.kind() == CodeKind::single_stream);
    CHECK(c.params() == CodeParams{2, 0, 1, 3, 2, 0});

    const BlockCode rep = build_single_stream(3, 3, Field::gf256());
    CHECK(rep.generator() == from_rows({{1, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 1, 0}, {0, 0, 1, 0, 0, 1}}));

    const BlockCode c32 = build_single_stream(3, 2, Field::gf256());
    CHECK(c32.generator().rows() == 3);
    CHECK(c32.generator().cols() == 5);
    CHECK(c32.params().rate_v() == Rational(3, 5));

    const BlockCode urgent = build_single_stream(3, 1, gf2, true);
    CHECK(urgent.params() == CodeParams{3, 3, 1, 4, 0, 3});
    CHECK(urgent.params().rate_u() == Rational(3, 4));

    CHECK_THROWS_AS(build_single_stream(1, 2, gf2), RegimeError);
    CHECK_THROWS_AS(build_single_stream(3, 0, gf2), RegimeError);
    CHECK_THROWS_AS(build_single_stream(4, 2, gf2), FieldTooSmall);
}

TEST_CASE("build_multiplexed examples")
{
    const BlockCode c = build_multiplexed(4, 2, 1, gf2);
    CHECK(c.generator()
          == from_rows({{1, 0, 1, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 1, 0, 1}, {0, 0, 0, 1, 1}}));
    CHECK(c.params() == CodeParams{4, 2, 1, 5, 2, 2});

    const BlockCode c531 = build_multiplexed(5, 3, 1, Field::gf256());
    CHECK(c531.params().rate_v() == Rational(2, 6));
    CHECK(c531.params().rate_u() == Rational(3, 6));

    CHECK_THROWS_AS(build_multiplexed(4, 2, 2, gf2), RegimeError);
    CHECK_THROWS_AS(build_multiplexed(5, 1, 2, gf2), RegimeError);
    CHECK_THROWS_AS(build_multiplexed(9, 4, 2, gf2), FieldTooSmall);
}

TEST_CASE("rate identities over the sweep")
{
    const Field f = Field::gf256();
    for (int t = 1; t <= 12; ++t) {
        for (int b = 1; b <= t; ++b) {
            CHECK(build_single_stream(t, b, f).params().rate_v() == Rational(t, t + b));
        }
    }
    for (int tv = 1; tv <= 12; ++tv) {
        for (int tu = 1; tu < tv; ++tu) {
            for (int b = 1; b <= tu && tu + b < tv; ++b) {
                const auto p = build_multiplexed(tv, tu, b, f).params();
                CHECK(p.rate_v() == Rational(tv - tu, tv + b));
                CHECK(p.rate_u() == Rational(tu, tv + b));
            }
        }
    }
}

TEST_CASE("encode_block examples")
{
    const BlockCode c = build_multiplexed(4, 2, 1, gf2);
    const std::vector<Element> v{1, 0}, u{1, 1};
    CHECK(encode_block(c, v, u) == std::vector<Element>{1, 0, 0, 1, 0});
    CHECK(encode_block(c, std::vector<Element>{0, 0}, std::vector<Element>{0, 0})
          == std::vector<Element>(5, 0));

    // Hand product with the binary reference generator: [v0, v1, u0, v0+u0, v1+u0].
    CHECK(encode_block(binary_reference(), std::vector<Element>{1, 0}, std::vector<Element>{1})
          == std::vector<Element>{1, 0, 1, 0, 1});

    CHECK_THROWS_AS(encode_block(c, std::vector<Element>{1}, u), LengthMismatch);
    CHECK_THROWS_AS(encode_block(c, v, std::vector<Element>{1, 1, 1}), LengthMismatch);
}

TEST_CASE("decode_block examples")
{
    const BlockCode c = build_multiplexed(4, 2, 1, gf2);
    const std::vector<Element> x{1, 0, 0, 1, 0};

    const DecodedBlock d0 = decode_block(c, erase(x, 0b00001));
    CHECK(d0.v == std::vector<std::optional<Element>>{1, 0});
    CHECK(d0.u == std::vector<std::optional<Element>>{1, 1});
    CHECK(d0.v_time[0] == 4);
    CHECK(d0.u_time[0] == 4);

    const DecodedBlock clean = decode_block(c, erase(x, 0));
    CHECK(clean.v == std::vector<std::optional<Element>>{1, 0});
    CHECK(clean.u == std::vector<std::optional<Element>>{1, 1});
    CHECK(clean.v_time == std::vector<int>{0, 1});
    CHECK(clean.u_time == std::vector<int>{2, 3});

    const DecodedBlock d2 = decode_block(c, erase(x, 0b00100));
    CHECK(d2.v == std::vector<std::optional<Element>>{1, 0});
    CHECK(d2.v_time == std::vector<int>{0, 1});
    CHECK(d2.u == std::vector<std::optional<Element>>{1, 1});
    CHECK(d2.u_time[0] == 4);
    CHECK(d2.u_time[0] <= c.deadline(2));

    CHECK_THROWS_AS(decode_block(c, erase(x, 0b00011)), BeyondTolerance);
    CHECK_THROWS_AS(decode_block(c, erase(x, 0b10001)), BeyondTolerance);
    CHECK_THROWS_AS(decode_block(c, ReceivedWord(4)), LengthMismatch);
}

TEST_CASE("schedule follows the generation positions")
{
    const BlockCode c = build_multiplexed(7, 3, 2, Field::gf256());
    const DecodeSchedule s = c.schedule();
    CHECK(s.v_deadline == std::vector<int>{7, 8, 8, 8});
    // u[i] is generated at kv + i = 4 + i; deadline i + Tv.
    CHECK(s.u_deadline == std::vector<int>{7, 8, 8});

    const DecodeSchedule e = binary_reference().schedule();
    CHECK(e.v_deadline == std::vector<int>{3, 4});
    CHECK(e.u_deadline == std::vector<int>{4});
}

TEST_CASE("verify_block examples")
{
    const BlockVerification ok = verify_block(build_multiplexed(4, 2, 1, gf2), 1);
    CHECK(ok.passed());
    CHECK(ok.patterns_checked == 5);
    CHECK(ok.basis_messages == 4);

    CHECK(verify_block(build_single_stream(3, 2, Field::gf256()), 2).passed());
    CHECK(verify_block(binary_reference(), 2).passed());

    const BlockVerification bad = verify_block(build_multiplexed(4, 2, 1, gf2), 2);
    CHECK_FALSE(bad.passed());
    REQUIRE_FALSE(bad.failures.empty());
    const BlockFailure& f = bad.failures.front();
    CHECK(f.burst_length == 2);
    CHECK(f.burst_start >= 0);
    CHECK(f.burst_start <= 3);

    CHECK(verify_block(build_multiplexed(4, 2, 1, gf2), 0).passed());
}

TEST_CASE("structured decoder matches the brute-force oracle over GF(2)")
{
    // B = 1 keeps every parity block all-ones, so the whole family lives in GF(2).
    std::vector<BlockCode> codes;
    for (int tv = 3; tv <= 9; ++tv) {
        for (int tu = 1; tu + 1 < tv; ++tu) {
            codes.push_back(build_multiplexed(tv, tu, 1, gf2));
        }
    }
    for (int t = 1; t <= 8; ++t) {
        codes.push_back(build_single_stream(t, 1, gf2));
        codes.push_back(build_single_stream(t, 1, gf2, true));
    }
    codes.push_back(build_single_stream(3, 3, gf2));
    codes.push_back(build_multiplexed(6, 2, 2, Field::make(4, 0b111)));
    codes.push_back(build_multiplexed(7, 3, 2, Field::make(4, 0b111)));

    for (const BlockCode& code : codes) {
        const auto& p = code.params();
        for (int start = 0; start + p.b <= p.n; ++start) {
            for (int len = 0; len <= p.b; ++len) {
                const ErasureMask mask = burst_mask(start, len, p.n);
                const DecodePlan s = plan_structured(code, mask, p.n);
                const DecodePlan g = plan_generic(code, mask, p.n);
                std::vector<int> oracle;
                if (code.field().order() == 2) {
                    oracle = brute_force_times(code, mask);
                }
                for (int sym = 0; sym < p.k(); ++sym) {
                    INFO("code tv=" << p.tv << " tu=" << p.tu << " b=" << p.b << " start=" << start
                                    << " len=" << len << " sym=" << sym);
                    REQUIRE(s.symbols[sym].recovered);
                    REQUIRE(g.symbols[sym].recovered);
                    CHECK(s.symbols[sym].time <= code.deadline(sym));
                    CHECK(g.symbols[sym].time <= s.symbols[sym].time);
                    if (!oracle.empty()) {
                        CHECK(g.symbols[sym].time == oracle[sym]);
                    }
                }
            }
        }
    }
}

TEST_CASE("linearity: random messages decode like the unit basis")
{
    std::mt19937_64 rng(11);
    const Field f = Field::gf256();
    for (const BlockCode& code :
         {build_multiplexed(8, 3, 2, f), build_multiplexed(12, 4, 3, f), build_single_stream(7, 3, f)}) {
        const auto& p = code.params();
        for (int start = 0; start + p.b <= p.n; ++start) {
            const ErasureMask mask = burst_mask(start, p.b, p.n);
            for (int trial = 0; trial < 100; ++trial) {
                const auto v = random_message(rng, f, p.kv);
                const auto u = random_message(rng, f, p.ku);
                const auto x = encode_block(code, v, u);
                const DecodedBlock d = decode_block(code, erase(x, mask));
                for (int i = 0; i < p.kv; ++i) {
                    REQUIRE(d.v[i] == v[i]);
                    REQUIRE(d.v_time[i] <= code.deadline(i));
                }
                for (int i = 0; i < p.ku; ++i) {
                    REQUIRE(d.u[i] == u[i]);
                    REQUIRE(d.u_time[i] <= code.deadline(p.kv + i));
                }
            }
        }
    }
}

TEST_CASE("superposition identity")
{
    std::mt19937_64 rng(5);
    const Field f = Field::gf256();
    for (int tv = 3; tv <= 12; ++tv) {
        for (int tu = 1; tu < tv; ++tu) {
            for (int b = 1; b <= tu && tu + b < tv; ++b) {
                const BlockCode code = build_multiplexed(tv, tu, b, f);
                const int kv = tv - tu;
                const BlockCode cv = build_single_stream(kv, b, f);
                const BlockCode cu = build_single_stream(tu, b, f);
                const auto v = random_message(rng, f, kv);
                const auto u = random_message(rng, f, tu);
                const auto x = encode_block(code, v, u);
                const auto xv = encode_block(cv, v, {});
                const auto xu = encode_block(cu, u, {});
                for (int i = 0; i < kv; ++i) {
                    REQUIRE(x[i] == xv[i]);
                }
                for (int j = 0; j < b; ++j) {
                    REQUIRE(x[kv + j] == f.add(xv[kv + j], xu[j]));
                }
                for (int j = b; j < tu + b; ++j) {
                    REQUIRE(x[kv + j] == xu[j]);
                }
            }
        }
    }
}

TEST_CASE("every multiplexed code has a tight v deadline witness")
{
    const Field f = Field::gf256();
    for (int tv = 3; tv <= 10; ++tv) {
        for (int tu = 1; tu < tv; ++tu) {
            for (int b = 1; b <= tu && tu + b < tv; ++b) {
                const BlockVerification r = verify_block(build_multiplexed(tv, tu, b, f), b);
                REQUIRE(r.passed());
                const bool v_tight = std::any_of(r.tight.begin(), r.tight.end(),
                                                 [](const BlockWitness& w) { return w.stream == 'v'; });
                CHECK(v_tight);
            }
        }
    }
}

TEST_CASE("generic codes")
{
    CHECK_THROWS_AS(BlockCode({2, 0, 1, 3, 2, 0}, gf2, from_rows({{0, 1, 1}, {1, 0, 1}})), FormatError);
    CHECK_THROWS_AS(BlockCode({2, 0, 1, 3, 2, 0}, gf2, from_rows({{1, 0, 1}, {0, 0, 0}})), SingularError);
    CHECK_THROWS_AS(BlockCode({2, 0, 1, 3, 2, 0}, gf2, from_rows({{1, 0, 2}, {0, 1, 1}})), FormatError);
    CHECK_THROWS_AS(BlockCode({2, 0, 1, 4, 2, 0}, gf2, from_rows({{1, 0, 1}, {0, 1, 1}})), LengthMismatch);
    CHECK_THROWS_AS(plan_structured(binary_reference(), 0, 5), FormatError);

    const DecodedBlock d = decode_block(binary_reference(), erase({1, 0, 1, 0, 1}, 0b00011));
    CHECK(d.v == std::vector<std::optional<Element>>{1, 0});
    CHECK(d.u == std::vector<std::optional<Element>>{1});
    CHECK(d.v_time == std::vector<int>{3, 4});
}

TEST_CASE("restore_block_code")
{
    const Field f = Field::gf256();
    const BlockCode m = build_multiplexed(9, 4, 2, f);
    const BlockCode back = restore_block_code(CodeKind::multiplexed, m.params(), f, m.generator());
    CHECK(back.parity_v() == m.parity_v());
    CHECK(back.parity_u() == m.parity_u());

    const BlockCode s = build_single_stream(5, 2, f);
    CHECK(restore_block_code(CodeKind::single_stream, s.params(), f, s.generator()).parity_v() == s.parity_v());

    Matrix tampered = m.generator();
    tampered.at(0, 9) = 1;
    CHECK_THROWS_AS(restore_block_code(CodeKind::multiplexed, m.params(), f, tampered), FormatError);

    Matrix zero_parity = m.generator();
    for (int j = 0; j < 2; ++j) {
        zero_parity.at(2, 5 + j) = 0;
    }
    CHECK_THROWS_AS(restore_block_code(CodeKind::multiplexed, m.params(), f, zero_parity), FormatError);

    auto wrong = m.params();
    wrong.kv += 1;
    CHECK_THROWS_AS(restore_block_code(CodeKind::multiplexed, wrong, f, m.generator()), FormatError);

    CHECK(parse_code_kind("multiplexed") == CodeKind::multiplexed);
    CHECK(to_string(CodeKind::single_stream) == "single_stream");
    CHECK_THROWS_AS(parse_code_kind("turbo"), FormatError);
}

TEST_CASE("prefix decoding drops rules that need unseen positions")
{
    const BlockCode c = build_multiplexed(4, 2, 1, gf2);
    const DecodePlan early = plan_structured(c, 0b00001, 4);
    CHECK_FALSE(early.symbols[0].recovered);
    CHECK(early.symbols[1].recovered);
    const DecodePlan g = plan_generic(c, 0b00001, 4);
    CHECK_FALSE(g.symbols[0].recovered);
    CHECK(plan_generic(c, 0, 0).symbols[0].recovered == false);
}
