/**************************************************************************
 * gf.cpp
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

#include "muxstream/gf.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "muxstream/error.hpp"

namespace muxstream::gf {

namespace {

bool is_prime(std::uint32_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

int degree(std::uint32_t poly) { return poly == 0 ? -1 : 31 - std::countl_zero(poly); }

// Remainder of a modulo b over GF(2)[x].
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b)
{
    const int db = degree(b);
    for (int da = degree(a); da >= db; da = degree(a)) {
        a ^= b << (da - db);
    }
    return a;
}

bool irreducible_gf2(std::uint32_t poly)
{
    const int d = degree(poly);
    for (std::uint32_t q = 2; degree(q) <= d / 2; ++q) {
        if (poly_mod(poly, q) == 0) {
            return false;
        }
    }
    return true;
}

// Carry-less product reduced modulo poly; only used while building tables.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t poly)
{
    const int m = degree(poly);
    std::uint32_t r = 0;
    while (b != 0) {
        if (b & 1u) {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> m) {
            a ^= poly;
        }
    }
    return r;
}

} // namespace

Field Field::make(std::uint32_t order, std::uint32_t reduction)
{
    if (order < 2 || order > kMaxOrder) {
        throw FieldError("field order " + std::to_string(order) + " outside [2, 65536]");
    }

    Field f;
    f.order_ = order;
    f.reduction_ = reduction;

    if (is_prime(order)) {
        if (reduction != order) {
            throw FieldError("prime field GF(" + std::to_string(order) + ") expects the prime itself as reduction, got "
                             + std::to_string(reduction));
        }
        if (order != 2) {
            return f;
        }
        // GF(2): reduction 2 doubles as the polynomial x.
    } else if (std::has_single_bit(order)) {
        const int m = std::countr_zero(order);
        if (degree(reduction) != m) {
            throw FieldError("reduction polynomial " + std::to_string(reduction) + " does not have degree "
                             + std::to_string(m));
        }
        if (!irreducible_gf2(reduction)) {
            throw FieldError("reduction polynomial " + std::to_string(reduction) + " is reducible over GF(2)");
        }
    } else {
        std::uint32_t p = 2;
        while (order % p != 0) {
            ++p;
        }
        std::uint32_t rest = order;
        while (rest % p == 0) {
            rest /= p;
        }
        if (rest != 1) {
            throw FieldError(std::to_string(order) + " is not a prime power");
        }
        throw FieldError("odd prime-power order " + std::to_string(order) + " is not supported");
    }

    f.binary_ = true;
    const std::uint32_t group = order - 1;

    // Any generator of the multiplicative group works; the reduction
    // polynomial need not be primitive.
    std::uint32_t generator = 0;
    std::vector<std::uint32_t> primes;
    for (std::uint32_t d = 2, r = group; r > 1; ++d) {
        if (r % d == 0) {
            primes.push_back(d);
            while (r % d == 0) {
                r /= d;
            }
        }
    }
    auto power = [&](std::uint32_t a, std::uint32_t e) {
        std::uint32_t r = 1;
        while (e != 0) {
            if (e & 1u) {
                r = slow_mul(r, a, reduction);
            }
            a = slow_mul(a, a, reduction);
            e >>= 1;
        }
        return r;
    };
    for (std::uint32_t g = (order == 2 ? 1 : 2); g < order; ++g) {
        if (std::all_of(primes.begin(), primes.end(), [&](std::uint32_t q) { return power(g, group / q) != 1; })) {
            generator = g;
            break;
        }
    }

    auto exp = std::make_shared<std::vector<std::uint32_t>>(2 * std::size_t{group}, 0);
    auto log = std::make_shared<std::vector<std::uint32_t>>(order, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
        (*exp)[i] = x;
        (*exp)[i + group] = x;
        (*log)[x] = i;
        x = slow_mul(x, generator, reduction);
    }
    f.exp_ = exp->data();
    f.log_ = log->data();
    f.exp_holder_ = std::move(exp);
    f.log_holder_ = std::move(log);
    return f;
}

Field Field::gf256()
{
    static const Field f = make(256, kDefaultPoly);
    return f;
}

Element Field::inv(Element a) const
{
    if (a == 0) {
        throw SingularError("inverse of zero (singular system)");
    }
    if (binary_) {
        const std::uint32_t group = order_ - 1;
        return exp_[(group - log_[a]) % group];
    }
    // Extended Euclid over the integers.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = order_, new_r = a;
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) {
        t += order_;
    }
    return static_cast<Element>(t);
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1;
    }
    return m;
}

std::size_t rank(const Field& f, Matrix m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t pivot = r;
        while (pivot < m.rows() && m.at(pivot, c) == 0) {
            ++pivot;
        }
        if (pivot == m.rows()) {
            continue;
        }
        for (std::size_t k = 0; k < m.cols(); ++k) {
            std::swap(m.at(r, k), m.at(pivot, k));
        }
        const Element scale = f.inv(m.at(r, c));
        for (std::size_t k = c; k < m.cols(); ++k) {
            m.at(r, k) = f.mul(m.at(r, k), scale);
        }
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            const Element factor = m.at(i, c);
            if (factor == 0) {
                continue;
            }
            for (std::size_t k = c; k < m.cols(); ++k) {
                m.at(i, k) = f.sub(m.at(i, k), f.mul(factor, m.at(r, k)));
            }
        }
        ++r;
    }
    return r;
}

bool invertible(const Field& f, const Matrix& m)
{
    return m.rows() == m.cols() && rank(f, m) == m.rows();
}

std::vector<Element> row_times(const Field& f, std::span<const Element> x, const Matrix& m)
{
    if (x.size() != m.rows()) {
        throw LengthMismatch("vector of length " + std::to_string(x.size()) + " times matrix with "
                             + std::to_string(m.rows()) + " rows");
    }
    std::vector<Element> out(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (x[r] == 0) {
            continue;
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[c] = f.add(out[c], f.mul(x[r], m.at(r, c)));
        }
    }
    return out;
}

Matrix mds_parity(const Field& f, std::size_t l, std::size_t b)
{
    Matrix v(l, b);
    if (l == 0 || b == 0) {
        return v;
    }
    if (f.order() < l + b) {
        if (l == 1 || b == 1) {
            // Repetition / single-parity code: MDS over every field.
            for (std::size_t i = 0; i < l; ++i) {
                for (std::size_t j = 0; j < b; ++j) {
                    v.at(i, j) = 1;
                }
            }
            return v;
        }
        throw FieldTooSmall("field size insufficient: systematic MDS (" + std::to_string(l + b) + ", "
                            + std::to_string(l) + ") parity needs |F| >= L+B = " + std::to_string(l + b)
                            + ", field order is " + std::to_string(f.order()));
    }
    // Cauchy entries 1/(x_i - y_j) with x_i = i, y_j = l + j.
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            v.at(i, j) = f.inv(f.sub(static_cast<Element>(i), static_cast<Element>(l + j)));
        }
    }
    // Column then row scaling keeps every square minor nonzero.
    for (std::size_t j = 0; j < b; ++j) {
        const Element s = f.inv(v.at(0, j));
        for (std::size_t i = 0; i < l; ++i) {
            v.at(i, j) = f.mul(v.at(i, j), s);
        }
    }
    for (std::size_t i = 1; i < l; ++i) {
        const Element s = f.inv(v.at(i, 0));
        for (std::size_t j = 0; j < b; ++j) {
            v.at(i, j) = f.mul(v.at(i, j), s);
        }
    }
    return v;
}

namespace {

bool selection_invertible(const Field& f, const Matrix& v, std::span<const std::size_t> cols)
{
    const std::size_t l = v.rows();
    Matrix sub(l, l);
    for (std::size_t k = 0; k < l; ++k) {
        const std::size_t c = cols[k];
        for (std::size_t r = 0; r < l; ++r) {
            sub.at(r, k) = c < l ? (r == c ? 1 : 0) : v.at(r, c - l);
        }
    }
    return invertible(f, sub);
}

} // namespace

MdsCheck check_mds(const Field& f, const Matrix& v)
{
    MdsCheck out;
    const std::size_t l = v.rows();
    const std::size_t total = l + v.cols();
    if (l == 0 || v.cols() == 0) {
        out.selections = 1;
        return out;
    }

    std::vector<std::size_t> cols(l);
    if (total <= kExhaustiveMdsLimit) {
        std::iota(cols.begin(), cols.end(), 0);
        while (true) {
            ++out.selections;
            if (!selection_invertible(f, v, cols)) {
                out.mds = false;
                return out;
            }
            // Next l-combination of [0, total) in lexicographic order.
            std::size_t i = l;
            while (i > 0 && cols[i - 1] == total - l + (i - 1)) {
                --i;
            }
            if (i == 0) {
                break;
            }
            ++cols[i - 1];
            for (std::size_t k = i; k < l; ++k) {
                cols[k] = cols[k - 1] + 1;
            }
        }
        return out;
    }

    out.exhaustive = false;
    std::mt19937_64 rng(0x6d64735f636865ull);
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), 0);
    for (std::uint64_t s = 0; s < kMdsSamples; ++s) {
        std::shuffle(all.begin(), all.end(), rng);
        std::copy_n(all.begin(), l, cols.begin());
        std::sort(cols.begin(), cols.end());
        ++out.selections;
        if (!selection_invertible(f, v, cols)) {
            out.mds = false;
            return out;
        }
    }
    return out;
}

} // namespace muxstream::gf
