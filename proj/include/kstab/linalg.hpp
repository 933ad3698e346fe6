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

#pragma once

#include "kstab/types.hpp"

#include <optional>
#include <vector>

// Exact linear algebra over the rationals. Eigen's decompositions pivot on
// magnitudes and are fine for doubles; for rationals we want explicit
// reduced row echelon forms with a deterministic pivot choice.
namespace kstab::linalg {

struct Rref {
    RatMat reduced;
    std::vector<Eigen::Index> pivots;  // pivot column of each nonzero row
};

Rref rref(RatMat m);
Eigen::Index rank(const RatMat& m);
Rational determinant(RatMat m);

/// Stacks vectors as the rows of a matrix of width `dim`.
RatMat rows_of(const std::vector<RatVec>& vs, Eigen::Index dim);

/// Basis of {x : m x = 0}, one vector per free column, each primitive.
std::vector<RatVec> nullspace(const RatMat& m);

/// A solution of a x = b with all free variables set to zero, or nullopt
/// when the system is inconsistent.
std::optional<RatVec> solve(const RatMat& a, const RatVec& b);

/// Primitive integer rows spanning the same space as `vs` (canonical RREF).
std::vector<RatVec> row_basis(const std::vector<RatVec>& vs, Eigen::Index dim);

/// Columns form a Z-basis of span(vs) ∩ Z^dim.
RatMat lattice_basis(const std::vector<RatVec>& vs, Eigen::Index dim);

/// Orthogonal projection of v onto the complement of span(basis).
RatVec project_out(const RatVec& v, const std::vector<RatVec>& basis);

}  // namespace kstab::linalg
