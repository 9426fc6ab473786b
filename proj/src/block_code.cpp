/**************************************************************************
 * block_code.cpp
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

#include "muxstream/block_code.hpp"

#include <algorithm>
#include <bit>

#include "muxstream/error.hpp"

namespace muxstream::codes {

namespace {

std::string params_text(const CodeParams& p)
{
    return "(tv=" + std::to_string(p.tv) + ", tu=" + std::to_string(p.tu) + ", b=" + std::to_string(p.b)
           + ", n=" + std::to_string(p.n) + ", kv=" + std::to_string(p.kv) + ", ku=" + std::to_string(p.ku) + ")";
}

// [I_B 0 I_B; 0 I_{T-B} P]
Matrix single_stream_generator(int t, int b, const Matrix& p)
{
    Matrix g(t, t + b);
    for (int i = 0; i < b; ++i) {
        g.at(i, i) = 1;
        g.at(i, t + i) = 1;
    }
    for (int i = b; i < t; ++i) {
        g.at(i, i) = 1;
        for (int j = 0; j < b; ++j) {
            g.at(i, t + j) = p.at(i - b, j);
        }
    }
    return g;
}

// Less-urgent rows carry [I_kv | [I_B; V] | 0]; urgent rows carry the
// single-stream code of delay tu shifted to start at column kv.
Matrix multiplexed_generator(int kv, int tu, int b, const Matrix& v, const Matrix& u)
{
    const int n = kv + tu + b;
    Matrix g(kv + tu, n);
    for (int i = 0; i < kv; ++i) {
        g.at(i, i) = 1;
        for (int j = 0; j < b; ++j) {
            g.at(i, kv + j) = i < b ? (i == j ? 1 : 0) : v.at(i - b, j);
        }
    }
    const Matrix urgent = single_stream_generator(tu, b, u);
    for (int r = 0; r < tu; ++r) {
        for (int c = 0; c < tu + b; ++c) {
            g.at(kv + r, kv + c) = urgent.at(r, c);
        }
    }
    return g;
}

Matrix block(const Matrix& g, int r0, int c0, int rows, int cols)
{
    Matrix out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out.at(r, c) = g.at(r0 + r, c0 + c);
        }
    }
    return out;
}

} // namespace

std::string_view to_string(CodeKind kind)
{
    switch (kind) {
    case CodeKind::single_stream:
        return "single_stream";
    case CodeKind::multiplexed:
        return "multiplexed";
    case CodeKind::generic:
        return "generic";
    }
    return "generic";
}

CodeKind parse_code_kind(std::string_view text)
{
    if (text == "single_stream") {
        return CodeKind::single_stream;
    }
    if (text == "multiplexed") {
        return CodeKind::multiplexed;
    }
    if (text == "generic") {
        return CodeKind::generic;
    }
    throw FormatError("unknown block code kind '" + std::string(text) + "'");
}

BlockCode::BlockCode(CodeParams params, Field field, Matrix generator)
    : BlockCode(params, std::move(field), std::move(generator), CodeKind::generic, {}, {})
{
}

BlockCode::BlockCode(CodeParams params, Field field, Matrix generator, CodeKind kind, Matrix pv, Matrix pu)
    : params_(params)
    , field_(std::move(field))
    , generator_(std::move(generator))
    , kind_(kind)
    , parity_v_(std::move(pv))
    , parity_u_(std::move(pu))
{
    const auto& p = params_;
    if (p.n < 1 || p.n > kMaxBlockLength || p.kv < 0 || p.ku < 0 || p.b < 0 || p.tv < 0 || p.tu < 0) {
        throw RegimeError("block code parameters out of range " + params_text(p));
    }
    if (generator_.rows() != static_cast<std::size_t>(p.k()) || generator_.cols() != static_cast<std::size_t>(p.n)) {
        throw LengthMismatch("generator is " + std::to_string(generator_.rows()) + "x"
                             + std::to_string(generator_.cols()) + ", parameters need " + std::to_string(p.k()) + "x"
                             + std::to_string(p.n));
    }
    for (int r = 0; r < p.k(); ++r) {
        for (int c = 0; c < p.n; ++c) {
            const Element e = generator_.at(r, c);
            if (!field_.contains(e)) {
                throw FormatError("generator entry outside the field");
            }
            if (e != 0 && c < r) {
                throw FormatError("generator is not causal: symbol " + std::to_string(r) + " feeds position "
                                  + std::to_string(c) + " before it is generated");
            }
        }
    }
    if (gf::rank(field_, generator_) != static_cast<std::size_t>(p.k())) {
        throw SingularError("generator does not have full row rank");
    }
}

DecodeSchedule BlockCode::schedule() const
{
    DecodeSchedule s;
    for (int i = 0; i < params_.kv; ++i) {
        s.v_deadline.push_back(deadline(i));
    }
    for (int i = 0; i < params_.ku; ++i) {
        s.u_deadline.push_back(deadline(params_.kv + i));
    }
    return s;
}

int BlockCode::deadline(int s) const
{
    const int delay = s < params_.kv ? params_.tv : params_.tu;
    return std::min(s + delay, params_.n - 1);
}

BlockCode build_single_stream(int t, int b, const Field& field, bool urgent)
{
    if (b < 1 || t < b) {
        throw RegimeError("single-stream code needs T >= B >= 1, got T=" + std::to_string(t) + ", B="
                          + std::to_string(b));
    }
    Matrix p = gf::mds_parity(field, t - b, b);
    Matrix g = single_stream_generator(t, b, p);
    CodeParams params{t, urgent ? t : 0, b, t + b, urgent ? 0 : t, urgent ? t : 0};
    return BlockCode(params, field, std::move(g), CodeKind::single_stream, std::move(p), {});
}

BlockCode build_multiplexed(int tv, int tu, int b, const Field& field)
{
    if (b < 1 || tu < b) {
        throw RegimeError("multiplexed code needs Tu >= B >= 1, got Tu=" + std::to_string(tu) + ", B="
                          + std::to_string(b));
    }
    if (tv <= tu + b) {
        throw RegimeError("multiplexed code needs Tv > Tu + B, got Tv=" + std::to_string(tv) + ", Tu+B="
                          + std::to_string(tu + b));
    }
    const int kv = tv - tu;
    Matrix v = gf::mds_parity(field, kv - b, b);
    Matrix u = gf::mds_parity(field, tu - b, b);
    Matrix g = multiplexed_generator(kv, tu, b, v, u);
    CodeParams params{tv, tu, b, tv + b, kv, tu};
    return BlockCode(params, field, std::move(g), CodeKind::multiplexed, std::move(v), std::move(u));
}

BlockCode restore_block_code(CodeKind kind, CodeParams params, Field field, Matrix generator)
{
    if (kind == CodeKind::generic) {
        return BlockCode(params, std::move(field), std::move(generator));
    }
    const int b = params.b;
    if (generator.rows() != static_cast<std::size_t>(params.k())
        || generator.cols() != static_cast<std::size_t>(params.n)) {
        throw FormatError("generator dimensions disagree with " + params_text(params));
    }
    if (kind == CodeKind::single_stream) {
        const int t = params.k();
        const bool urgent = params.kv == 0;
        const CodeParams expect{t, urgent ? t : 0, b, t + b, urgent ? 0 : t, urgent ? t : 0};
        if (b < 1 || t < b || params != expect) {
            throw FormatError("single_stream parameters inconsistent: " + params_text(params));
        }
        Matrix p = block(generator, b, t, t - b, b);
        if (single_stream_generator(t, b, p) != generator || !gf::check_mds(field, p)) {
            throw FormatError("generator does not have the single_stream structure");
        }
        return BlockCode(params, std::move(field), std::move(generator), kind, std::move(p), {});
    }
    const int kv = params.tv - params.tu;
    const CodeParams expect{params.tv, params.tu, b, params.tv + b, kv, params.tu};
    if (b < 1 || params.tu < b || params.tv <= params.tu + b || params != expect) {
        throw FormatError("multiplexed parameters inconsistent: " + params_text(params));
    }
    Matrix v = block(generator, b, kv, kv - b, b);
    Matrix u = block(generator, kv + b, kv + params.tu, params.tu - b, b);
    if (multiplexed_generator(kv, params.tu, b, v, u) != generator || !gf::check_mds(field, v)
        || !gf::check_mds(field, u)) {
        throw FormatError("generator does not have the multiplexed structure");
    }
    return BlockCode(params, std::move(field), std::move(generator), kind, std::move(v), std::move(u));
}

std::vector<Element> encode_block(const BlockCode& code, std::span<const Element> v, std::span<const Element> u)
{
    const auto& p = code.params();
    if (v.size() != static_cast<std::size_t>(p.kv) || u.size() != static_cast<std::size_t>(p.ku)) {
        throw LengthMismatch("encode_block expects " + std::to_string(p.kv) + " + " + std::to_string(p.ku)
                             + " symbols, got " + std::to_string(v.size()) + " + " + std::to_string(u.size()));
    }
    std::vector<Element> m(v.begin(), v.end());
    m.insert(m.end(), u.begin(), u.end());
    for (Element e : m) {
        if (!code.field().contains(e)) {
            throw FormatError("source symbol outside the field");
        }
    }
    return gf::row_times(code.field(), m, code.generator());
}

Element DecodePlan::apply(const Field& f, int symbol, std::span<const Element> word) const
{
    Element acc = 0;
    for (const Term& t : symbols[symbol].terms) {
        acc = f.add(acc, f.mul(t.coeff, word[t.position]));
    }
    return acc;
}

ErasureMask burst_mask(int start, int length, int n)
{
    ErasureMask m = 0;
    for (int i = std::max(start, 0); i < std::min(start + length, n); ++i) {
        m |= ErasureMask{1} << i;
    }
    return m;
}

DecodePlan plan_best_effort(const BlockCode& code, ErasureMask erased, int prefix)
{
    if (code.kind() == CodeKind::generic) {
        return plan_generic(code, erased, prefix);
    }
    try {
        return plan_structured(code, erased, prefix);
    } catch (const BeyondTolerance&) {
        return plan_generic(code, erased, prefix);
    }
}

namespace {

bool single_short_burst(ErasureMask m, int b)
{
    if (m == 0) {
        return true;
    }
    const ErasureMask run = m >> std::countr_zero(m);
    return (run & (run + 1)) == 0 && std::popcount(run) <= b;
}

} // namespace

DecodedBlock decode_block(const BlockCode& code, const ReceivedWord& y)
{
    const auto& p = code.params();
    if (y.size() != static_cast<std::size_t>(p.n)) {
        throw LengthMismatch("received word has " + std::to_string(y.size()) + " symbols, code length is "
                             + std::to_string(p.n));
    }
    ErasureMask erased = 0;
    std::vector<Element> word(p.n, 0);
    for (int i = 0; i < p.n; ++i) {
        if (y[i]) {
            word[i] = *y[i];
        } else {
            erased |= ErasureMask{1} << i;
        }
    }
    if (!single_short_burst(erased, p.b)) {
        throw BeyondTolerance("erasure pattern is beyond design tolerance: not a single burst of length <= "
                              + std::to_string(p.b));
    }
    const DecodePlan plan =
        code.kind() == CodeKind::generic ? plan_generic(code, erased, p.n) : plan_structured(code, erased, p.n);

    DecodedBlock out;
    for (int s = 0; s < p.k(); ++s) {
        const Recovery& r = plan.symbols[s];
        std::optional<Element> value;
        if (r.recovered) {
            value = plan.apply(code.field(), s, word);
        }
        if (s < p.kv) {
            out.v.push_back(value);
            out.v_time.push_back(r.time);
        } else {
            out.u.push_back(value);
            out.u_time.push_back(r.time);
        }
    }
    return out;
}

BlockVerification verify_block(const BlockCode& code, int b)
{
    const auto& p = code.params();
    const int k = p.k();
    BlockVerification report;
    report.burst = b;
    report.basis_messages = k;

    std::vector<int> starts;
    if (b <= 0) {
        starts.push_back(0);
    } else if (b >= p.n) {
        starts.push_back(0);
    } else {
        for (int s = 0; s + b <= p.n; ++s) {
            starts.push_back(s);
        }
    }

    // Codewords of the unit messages are the rows of G.
    for (int start : starts) {
        const ErasureMask mask = b <= 0 ? 0 : burst_mask(start, b, p.n);
        const DecodePlan plan = plan_best_effort(code, mask, p.n);
        ++report.patterns_checked;
        for (int s = 0; s < k; ++s) {
            const Recovery& rec = plan.symbols[s];
            const char stream = s < p.kv ? 'v' : 'u';
            const int index = s < p.kv ? s : s - p.kv;
            const int deadline = code.deadline(s);
            bool wrong = false;
            if (rec.recovered) {
                for (int m = 0; m < k; ++m) {
                    const auto word = code.generator().row(m);
                    const Element expect = m == s ? 1 : 0;
                    if (plan.apply(code.field(), s, word) != expect) {
                        wrong = true;
                    }
                }
            }
            if (!rec.recovered || rec.time > deadline || wrong) {
                BlockFailure f{start, b, stream, index, deadline, std::nullopt, wrong};
                if (rec.recovered) {
                    f.recovered_at = rec.time;
                }
                report.failures.push_back(f);
            } else if (rec.time == deadline && b > 0) {
                report.tight.push_back({start, stream, index, deadline});
            }
        }
    }
    return report;
}

} // namespace muxstream::codes
