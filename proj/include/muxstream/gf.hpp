/**************************************************************************
 * gf.hpp
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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace muxstream::gf {

/// A field symbol. Valid values lie in [0, order).
using Element = std::uint32_t;

/// Largest supported field order.
inline constexpr std::uint32_t kMaxOrder = 1u << 16;

/// Reduction polynomial x^8 + x^4 + x^3 + x^2 + 1.
inline constexpr std::uint32_t kDefaultPoly = 0x11D;

/**
 * Finite field GF(p) or GF(2^m), m <= 16.
 *
 * A field is described by its order and a reduction descriptor: the prime
 * itself for prime fields, or the bitmask of an irreducible polynomial of
 * degree m for binary extension fields. Binary fields multiply through
 * log/antilog tables. Instances are immutable and cheap to copy; copies
 * share the tables.
 */
class Field {
public:
    /// Validates (order, reduction) and builds the arithmetic tables.
    /// Throws FieldError for composite non-prime-power orders, odd prime
    /// powers, reducible or mis-sized polynomials.
    static Field make(std::uint32_t order, std::uint32_t reduction);

    /// GF(2^8) with reduction 0x11D.
    static Field gf256();

    std::uint32_t order() const noexcept { return order_; }
    std::uint32_t reduction() const noexcept { return reduction_; }
    bool binary() const noexcept { return binary_; }

    bool contains(Element a) const noexcept { return a < order_; }

    Element add(Element a, Element b) const noexcept
    {
        if (binary_) {
            return a ^ b;
        }
        const Element s = a + b;
        return s >= order_ ? s - order_ : s;
    }

    Element sub(Element a, Element b) const noexcept
    {
        if (binary_) {
            return a ^ b;
        }
        return a >= b ? a - b : a + order_ - b;
    }

    Element neg(Element a) const noexcept { return sub(0, a); }

    Element mul(Element a, Element b) const noexcept
    {
        if (a == 0 || b == 0) {
            return 0;
        }
        if (binary_) {
            return exp_[log_[a] + log_[b]];
        }
        return static_cast<Element>((std::uint64_t{a} * b) % order_);
    }

    /// Multiplicative inverse; throws SingularError for zero.
    Element inv(Element a) const;

    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    friend bool operator==(const Field& x, const Field& y) noexcept
    {
        return x.order_ == y.order_ && x.reduction_ == y.reduction_;
    }

private:
    Field() = default;

    std::uint32_t order_ = 0;
    std::uint32_t reduction_ = 0;
    bool binary_ = false;
    // Shared, immutable tables. exp_ has 2*(order-1) entries so that
    // log[a] + log[b] never needs a modular reduction.
    std::shared_ptr<const std::vector<std::uint32_t>> exp_holder_;
    std::shared_ptr<const std::vector<std::uint32_t>> log_holder_;
    const std::uint32_t* exp_ = nullptr;
    const std::uint32_t* log_ = nullptr;
};

/// Dense row-major matrix of field elements.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Element& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Element at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const Element> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Element> data_;
};

/// Rank by Gaussian elimination.
std::size_t rank(const Field& f, Matrix m);

/// True iff m is square and nonsingular.
bool invertible(const Field& f, const Matrix& m);

/// x * M for a row vector x of length m.rows().
std::vector<Element> row_times(const Field& f, std::span<const Element> x, const Matrix& m);

/**
 * Parity matrix V (l x b) of a systematic MDS (l+b, l) code: any l columns
 * of [I_l | V] are independent.
 *
 * Built from a Cauchy matrix normalized so that its first row and first
 * column are all ones. Needs order >= l + b; when the field is smaller the
 * all-ones matrix is still MDS for l <= 1 or b <= 1 and is returned.
 * Otherwise throws FieldTooSmall. l == 0 or b == 0 yields an empty matrix.
 */
Matrix mds_parity(const Field& f, std::size_t l, std::size_t b);

struct MdsCheck {
    bool mds = true;
    bool exhaustive = true;
    /// Number of l-column selections examined.
    std::uint64_t selections = 0;

    explicit operator bool() const noexcept { return mds; }
};

/// Selections above this many columns are sampled instead of enumerated.
inline constexpr std::size_t kExhaustiveMdsLimit = 20;
inline constexpr std::uint64_t kMdsSamples = 20000;

/// Checks the MDS property of [I_l | v]: exhaustively when l + b <= 20,
/// otherwise over kMdsSamples seeded random selections.
MdsCheck check_mds(const Field& f, const Matrix& v);

} // namespace muxstream::gf
