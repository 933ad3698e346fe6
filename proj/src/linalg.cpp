/*
 * Copyright 2026 The kstab Authors
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
 */

#include "kstab/linalg.hpp"

#include <utility>

namespace kstab::linalg {

Rref rref(RatMat m)
{
    Rref out;
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = r; i < rows; ++i) {
            if (m(i, c) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != r) m.row(piv).swap(m.row(r));
        const Rational inv = 1 / m(r, c);
        for (Eigen::Index j = c; j < cols; ++j) m(r, j) *= inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Rational f = m(i, c);
            for (Eigen::Index j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

Eigen::Index rank(const RatMat& m)
{
    return static_cast<Eigen::Index>(rref(m).pivots.size());
}

Rational determinant(RatMat m)
{
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw Error(ErrorCode::InvalidInput, "determinant of non-square matrix");
    Rational det = 1;
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = c; i < n; ++i) {
            if (m(i, c) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) return 0;
        if (piv != c) {
            m.row(piv).swap(m.row(c));
            det = -det;
        }
        det *= m(c, c);
        for (Eigen::Index i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            const Rational f = m(i, c) / m(c, c);
            for (Eigen::Index j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

RatMat rows_of(const std::vector<RatVec>& vs, Eigen::Index dim)
{
    RatMat m(static_cast<Eigen::Index>(vs.size()), dim);
    for (std::size_t i = 0; i < vs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
    return m;
}

std::vector<RatVec> nullspace(const RatMat& m)
{
    const Rref r = rref(m);
    const Eigen::Index cols = m.cols();
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (auto p : r.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<RatVec> basis;
    for (Eigen::Index free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        RatVec v = RatVec::Zero(cols);
        v(free) = 1;
        for (std::size_t k = 0; k < r.pivots.size(); ++k)
            v(r.pivots[k]) = -r.reduced(static_cast<Eigen::Index>(k), free);
        basis.push_back(primitive(v));
    }
    return basis;
}

std::optional<RatVec> solve(const RatMat& a, const RatVec& b)
{
    RatMat aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    const Rref r = rref(aug);
    RatVec x = RatVec::Zero(a.cols());
    for (std::size_t k = 0; k < r.pivots.size(); ++k) {
        if (r.pivots[k] == a.cols()) return std::nullopt;
        x(r.pivots[k]) = r.reduced(static_cast<Eigen::Index>(k), a.cols());
    }
    return x;
}

std::vector<RatVec> row_basis(const std::vector<RatVec>& vs, Eigen::Index dim)
{
    std::vector<RatVec> out;
    if (vs.empty()) return out;
    const Rref r = rref(rows_of(vs, dim));
    for (std::size_t k = 0; k < r.pivots.size(); ++k)
        out.push_back(primitive(r.reduced.row(static_cast<Eigen::Index>(k)).transpose()));
    return out;
}

namespace {

// Column operations on an integer matrix, mirrored on a unimodular
// accumulator, until every row has at most one nonzero entry among the
// columns that are not yet pivots.
std::vector<std::vector<BigInt>> integer_kernel(const std::vector<std::vector<BigInt>>& a,
                                                std::size_t n)
{
    auto m = a;
    std::vector<std::vector<BigInt>> u(n, std::vector<BigInt>(n, BigInt(0)));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

    auto col_axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {
        for (auto& row : m) row[dst] -= q * row[src];
        for (auto& row : u) row[dst] -= q * row[src];
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (auto& row : m) std::swap(row[x], row[y]);
        for (auto& row : u) std::swap(row[x], row[y]);
    };

    std::size_t piv = 0;
    for (std::size_t r = 0; r < m.size() && piv < n; ++r) {
        for (std::size_t c = piv + 1; c < n; ++c) {
            while (m[r][c] != 0) {
                const BigInt q = m[r][piv] / m[r][c];
                col_axpy(piv, c, q);
                col_swap(piv, c);
            }
        }
        if (m[r][piv] != 0) ++piv;
    }
    std::vector<std::vector<BigInt>> kernel;
    for (std::size_t c = piv; c < n; ++c) {
        std::vector<BigInt> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = u[i][c];
        kernel.push_back(std::move(col));
    }
    return kernel;
}

}  // namespace

RatMat lattice_basis(const std::vector<RatVec>& vs, Eigen::Index dim)
{
    const auto span = row_basis(vs, dim);
    if (span.empty()) return RatMat(dim, 0);
    // Integer equations cutting out the span, then the integer kernel.
    const auto perp = nullspace(rows_of(span, dim));
    const auto n = static_cast<std::size_t>(dim);
    std::vector<std::vector<BigInt>> eqs;
    for (const auto& p : perp) {
        std::vector<BigInt> row(n);
        for (std::size_t j = 0; j < n; ++j)
            row[j] = boost::multiprecision::numerator(p(static_cast<Eigen::Index>(j)));
        eqs.push_back(std::move(row));
    }
    const auto kernel = integer_kernel(eqs, n);
    RatMat basis(dim, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t c = 0; c < kernel.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = Rational(kernel[c][i]);
    return basis;
}

RatVec project_out(const RatVec& v, const std::vector<RatVec>& basis)
{
    if (basis.empty()) return v;
    const Eigen::Index dim = v.size();
    const auto k = static_cast<Eigen::Index>(basis.size());
    RatMat b(dim, k);
    for (Eigen::Index j = 0; j < k; ++j) b.col(j) = basis[static_cast<std::size_t>(j)];
    const RatMat gram = b.transpose() * b;
    const auto coeff = solve(gram, RatVec(b.transpose() * v));
    if (!coeff) throw Error(ErrorCode::InternalInconsistency, "singular Gram matrix");
    return v - b * (*coeff);
}

}  // namespace kstab::linalg
