/**************************************************************************
 * burst_decoder.cpp
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

// Decoding rules are computed over linear forms in the received positions
// rather than over symbol values, so one plan serves every message sent
// under the same erasure pattern.

#include <algorithm>
#include <bit>

#include "muxstream/block_code.hpp"
#include "muxstream/error.hpp"

namespace muxstream::codes {

namespace {

/// sum_p c[p] * y[p]; time is the latest position consumed on the way.
struct Form {
    std::vector<Element> c;
    int time = -1;
};

using MaybeForm = std::optional<Form>;

Form received(int n, int position)
{
    Form f{std::vector<Element>(n, 0), position};
    f.c[position] = 1;
    return f;
}

/// acc += a * x
void axpy(const Field& f, Form& acc, Element a, const Form& x)
{
    if (a == 0) {
        return;
    }
    for (std::size_t p = 0; p < acc.c.size(); ++p) {
        acc.c[p] = f.add(acc.c[p], f.mul(a, x.c[p]));
    }
    acc.time = std::max(acc.time, x.time);
}

Form minus(const Field& f, Form a, const Form& b)
{
    axpy(f, a, f.neg(1), b);
    return a;
}

/**
 * Decoder of the single-stream code [I_B 0 I_B; 0 I_{T-B} P] from whatever
 * coordinates are known. Coordinates 0..T-1 are the systematic symbols m,
 * T..T+B-1 carry m[j] + (m[B..T-1] P)[j].
 *
 * Erased m[B..T-1] are solved from the earliest recoverable parities
 * p[j] = x[T+j] - m[j]; erased m[j], j < B, are then peeled from x[T+j].
 */
std::vector<MaybeForm> solve_single_stream(const Field& f, int t, int b, const Matrix& parity,
                                           const std::vector<MaybeForm>& coords)
{
    const int l = t - b;
    std::vector<MaybeForm> m(t);
    for (int i = 0; i < t; ++i) {
        m[i] = coords[i];
    }

    std::vector<MaybeForm> p(b);
    for (int j = 0; j < b; ++j) {
        if (coords[t + j] && coords[j]) {
            p[j] = minus(f, *coords[t + j], *coords[j]);
        }
    }

    std::vector<int> erased_info;
    for (int k = 0; k < l; ++k) {
        if (!m[b + k]) {
            erased_info.push_back(k);
        }
    }

    if (!erased_info.empty()) {
        std::vector<int> rows;
        for (int j = 0; j < b && rows.size() < erased_info.size(); ++j) {
            if (p[j]) {
                rows.push_back(j);
            }
        }
        if (rows.size() == erased_info.size()) {
            const std::size_t e = erased_info.size();
            Matrix a(e, e);
            std::vector<Form> rhs;
            for (std::size_t r = 0; r < e; ++r) {
                const int j = rows[r];
                for (std::size_t c = 0; c < e; ++c) {
                    a.at(r, c) = parity.at(erased_info[c], j);
                }
                Form eq = *p[j];
                for (int k = 0; k < l; ++k) {
                    if (m[b + k]) {
                        axpy(f, eq, f.neg(parity.at(k, j)), *m[b + k]);
                    }
                }
                rhs.push_back(std::move(eq));
            }
            // Gauss-Jordan with form-valued right-hand sides.
            for (std::size_t c = 0; c < e; ++c) {
                std::size_t pivot = c;
                while (pivot < e && a.at(pivot, c) == 0) {
                    ++pivot;
                }
                if (pivot == e) {
                    throw SingularError("MDS sub-system is singular; parity matrix is not MDS");
                }
                if (pivot != c) {
                    for (std::size_t k = 0; k < e; ++k) {
                        std::swap(a.at(pivot, k), a.at(c, k));
                    }
                    std::swap(rhs[pivot], rhs[c]);
                }
                const Element s = f.inv(a.at(c, c));
                for (std::size_t k = 0; k < e; ++k) {
                    a.at(c, k) = f.mul(a.at(c, k), s);
                }
                for (auto& x : rhs[c].c) {
                    x = f.mul(x, s);
                }
                for (std::size_t r = 0; r < e; ++r) {
                    const Element factor = a.at(r, c);
                    if (r == c || factor == 0) {
                        continue;
                    }
                    for (std::size_t k = 0; k < e; ++k) {
                        a.at(r, k) = f.sub(a.at(r, k), f.mul(factor, a.at(c, k)));
                    }
                    axpy(f, rhs[r], f.neg(factor), rhs[c]);
                }
            }
            // Every solution consumed every equation.
            int latest = -1;
            for (const Form& r : rhs) {
                latest = std::max(latest, r.time);
            }
            for (std::size_t c = 0; c < e; ++c) {
                rhs[c].time = latest;
                m[b + erased_info[c]] = std::move(rhs[c]);
            }
        }
    }

    const bool info_known = std::all_of(m.begin() + b, m.end(), [](const MaybeForm& x) { return x.has_value(); });
    for (int j = 0; j < b; ++j) {
        if (m[j] || !coords[t + j] || !info_known) {
            continue;
        }
        Form r = *coords[t + j];
        for (int k = 0; k < l; ++k) {
            axpy(f, r, f.neg(parity.at(k, j)), *m[b + k]);
        }
        m[j] = std::move(r);
    }
    return m;
}

/// Re-encodes the parity tail x[T..T+B-1] of a single-stream codeword.
std::vector<Form> single_stream_tail(const Field& f, int t, int b, const Matrix& parity,
                                     const std::vector<MaybeForm>& m, int n)
{
    std::vector<Form> tail;
    for (int j = 0; j < b; ++j) {
        Form x{std::vector<Element>(n, 0), -1};
        axpy(f, x, 1, *m[j]);
        for (int k = 0; k < t - b; ++k) {
            axpy(f, x, parity.at(k, j), *m[b + k]);
        }
        tail.push_back(std::move(x));
    }
    return tail;
}

bool all_known(const std::vector<MaybeForm>& xs)
{
    return std::all_of(xs.begin(), xs.end(), [](const MaybeForm& x) { return x.has_value(); });
}

std::vector<MaybeForm> decode_multiplexed(const BlockCode& code, const std::vector<MaybeForm>& y)
{
    const Field& f = code.field();
    const auto& p = code.params();
    const int kv = p.kv;
    const int tu = p.tu;
    const int b = p.b;
    const int n = p.n;

    // Codeword layout: x[0..kv-1] = xv head, x[kv..kv+B-1] = xv tail + xu
    // head (the overlap), x[kv+B..n-1] = xu[B..tu+B-1].
    const bool clean_head = std::all_of(y.begin(), y.begin() + kv, [](const MaybeForm& x) { return x.has_value(); });

    std::vector<MaybeForm> cu(tu + b);
    std::vector<MaybeForm> v;
    std::vector<MaybeForm> u;
    for (int j = b; j < tu + b; ++j) {
        cu[j] = y[kv + j];
    }

    if (clean_head) {
        // The less-urgent symbols arrive in the clear; strip their tail
        // from the overlap and decode the urgent codeword.
        v.assign(y.begin(), y.begin() + kv);
        const auto tail = single_stream_tail(f, kv, b, code.parity_v(), v, n);
        for (int j = 0; j < b; ++j) {
            if (y[kv + j]) {
                cu[j] = minus(f, *y[kv + j], tail[j]);
            }
        }
        u = solve_single_stream(f, tu, b, code.parity_u(), cu);
    } else {
        // The burst started inside the head, so it ends before the urgent
        // codeword's clean part: decode the urgent stream first from
        // xu[B..], then strip it from the overlap.
        u = solve_single_stream(f, tu, b, code.parity_u(), cu);
        if (!all_known(std::vector<MaybeForm>(u.begin(), u.begin() + b))) {
            throw SingularError("urgent stream not recoverable although the burst is within tolerance");
        }
        std::vector<MaybeForm> cv(kv + b);
        for (int i = 0; i < kv; ++i) {
            cv[i] = y[i];
        }
        for (int j = 0; j < b; ++j) {
            if (y[kv + j]) {
                cv[kv + j] = minus(f, *y[kv + j], *u[j]);
            }
        }
        v = solve_single_stream(f, kv, b, code.parity_v(), cv);
    }

    std::vector<MaybeForm> out(v.begin(), v.end());
    out.insert(out.end(), u.begin(), u.end());
    return out;
}

} // namespace

DecodePlan plan_structured(const BlockCode& code, ErasureMask erased, int prefix)
{
    const auto& p = code.params();
    const int n = p.n;
    prefix = std::clamp(prefix, 0, n);
    if (code.kind() == CodeKind::generic) {
        throw FormatError("generic codes have no structured decoder");
    }
    const ErasureMask seen = prefix >= 64 ? ~ErasureMask{0} : (ErasureMask{1} << prefix) - 1;
    const ErasureMask visible = erased & seen & (n >= 64 ? ~ErasureMask{0} : (ErasureMask{1} << n) - 1);
    if (visible != 0) {
        const ErasureMask run = visible >> std::countr_zero(visible);
        if ((run & (run + 1)) != 0 || std::popcount(run) > p.b) {
            throw BeyondTolerance("erasure pattern is beyond design tolerance: not a single burst of length <= "
                                  + std::to_string(p.b));
        }
    }

    // Unseen positions are modelled as received; any rule that touches
    // them has time >= prefix and is discarded below.
    std::vector<MaybeForm> y(n);
    for (int i = 0; i < n; ++i) {
        if (!((visible >> i) & 1u)) {
            y[i] = received(n, i);
        }
    }

    std::vector<MaybeForm> forms;
    if (code.kind() == CodeKind::single_stream) {
        forms = solve_single_stream(code.field(), p.k(), p.b, code.parity_v(), y);
    } else {
        forms = decode_multiplexed(code, y);
    }

    DecodePlan plan;
    plan.symbols.resize(p.k());
    for (int s = 0; s < p.k(); ++s) {
        if (!forms[s] || forms[s]->time >= prefix) {
            continue;
        }
        Recovery& r = plan.symbols[s];
        r.recovered = true;
        r.time = forms[s]->time;
        for (int i = 0; i < n; ++i) {
            if (forms[s]->c[i] != 0) {
                if ((visible >> i) & 1u) {
                    throw SingularError("decoding rule reads an erased position");
                }
                r.terms.push_back({i, forms[s]->c[i]});
            }
        }
    }
    return plan;
}

DecodePlan plan_generic(const BlockCode& code, ErasureMask erased, int prefix)
{
    const Field& f = code.field();
    const auto& p = code.params();
    const int k = p.k();
    const int n = p.n;
    prefix = std::clamp(prefix, 0, n);

    struct Basis {
        std::vector<Element> vec;   // k entries, RREF, 1 at pivot
        std::vector<Element> combo; // n entries over received positions
        int pivot;
    };
    std::vector<Basis> basis;

    DecodePlan plan;
    plan.symbols.resize(k);
    int pending = k;

    for (int t = 0; t < prefix && pending > 0; ++t) {
        if ((erased >> t) & 1u) {
            continue;
        }
        Basis col{std::vector<Element>(k), std::vector<Element>(n, 0), -1};
        for (int r = 0; r < k; ++r) {
            col.vec[r] = code.generator().at(r, t);
        }
        col.combo[t] = 1;
        for (const Basis& b : basis) {
            const Element a = col.vec[b.pivot];
            if (a == 0) {
                continue;
            }
            for (int r = 0; r < k; ++r) {
                col.vec[r] = f.sub(col.vec[r], f.mul(a, b.vec[r]));
            }
            for (int i = 0; i < n; ++i) {
                col.combo[i] = f.sub(col.combo[i], f.mul(a, b.combo[i]));
            }
        }
        const auto nz = std::find_if(col.vec.begin(), col.vec.end(), [](Element e) { return e != 0; });
        if (nz == col.vec.end()) {
            continue;
        }
        col.pivot = static_cast<int>(nz - col.vec.begin());
        const Element s = f.inv(col.vec[col.pivot]);
        for (auto& e : col.vec) {
            e = f.mul(e, s);
        }
        for (auto& e : col.combo) {
            e = f.mul(e, s);
        }
        for (Basis& b : basis) {
            const Element a = b.vec[col.pivot];
            if (a == 0) {
                continue;
            }
            for (int r = 0; r < k; ++r) {
                b.vec[r] = f.sub(b.vec[r], f.mul(a, col.vec[r]));
            }
            for (int i = 0; i < n; ++i) {
                b.combo[i] = f.sub(b.combo[i], f.mul(a, col.combo[i]));
            }
        }
        basis.push_back(std::move(col));

        // e_s lies in the span iff its reduction vanishes; in RREF that
        // means every nonzero of e_s is a pivot with a unit basis vector.
        for (int sym = 0; sym < k; ++sym) {
            if (plan.symbols[sym].recovered) {
                continue;
            }
            std::vector<Element> residual(k, 0);
            residual[sym] = 1;
            std::vector<Element> combo(n, 0);
            for (const Basis& b : basis) {
                const Element a = residual[b.pivot];
                if (a == 0) {
                    continue;
                }
                for (int r = 0; r < k; ++r) {
                    residual[r] = f.sub(residual[r], f.mul(a, b.vec[r]));
                }
                for (int i = 0; i < n; ++i) {
                    combo[i] = f.add(combo[i], f.mul(a, b.combo[i]));
                }
            }
            if (std::any_of(residual.begin(), residual.end(), [](Element e) { return e != 0; })) {
                continue;
            }
            Recovery& rec = plan.symbols[sym];
            rec.recovered = true;
            rec.time = t;
            for (int i = 0; i < n; ++i) {
                if (combo[i] != 0) {
                    rec.terms.push_back({i, combo[i]});
                }
            }
            --pending;
        }
    }
    return plan;
}

} // namespace muxstream::codes
