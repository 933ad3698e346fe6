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

#include "kstab/geom.hpp"
#include "kstab/quad.hpp"

#include <string>
#include <vector>

/**
 * Root systems of types A_n, B_n, C_n, D_n (rank ≤ 8) and G2.
 *
 * Weights are written in the basis of fundamental weights ω_i, so the
 * pairing ⟨λ, α_i^∨⟩ is just the i-th coordinate of λ. Roots are also kept
 * in simple-root coordinates, and coroots in simple-coroot coordinates.
 */
namespace kstab::rootsys {

enum class CartanType { A, B, C, D, G };

class RootSystem {
public:
    /// Throws Error{InvalidInput} on unsupported type/rank combinations.
    RootSystem(CartanType type, int rank);
    /// Parses names such as "A2", "b3", "G2".
    static RootSystem parse(const std::string& name);

    CartanType type() const { return type_; }
    int rank() const { return rank_; }
    std::string name() const;

    /// A_ij = ⟨α_i, α_j^∨⟩; row i is α_i in fundamental-weight coordinates.
    const RatMat& cartan_matrix() const { return cartan_; }
    /// Symmetric Gram matrix (α_i, α_j) with the conventional normalization.
    const RatMat& gram_matrix() const { return gram_; }

    RatVec simple_root(int i) const;
    RatVec fundamental_weight(int i) const;

    /// Positive roots in simple-root coordinates, ordered by height then lex.
    const std::vector<RatVec>& positive_roots() const { return roots_; }
    /// The same roots in fundamental-weight coordinates.
    const std::vector<RatVec>& positive_root_weights() const { return root_weights_; }
    /// Matching coroots in simple-coroot coordinates.
    const std::vector<RatVec>& positive_coroots() const { return coroots_; }

    /// ρ = Σ ω_i.
    RatVec rho() const;
    /// 2ρ in simple-root coordinates.
    RatVec two_rho_root_coords() const;

    /// ⟨λ, β^∨⟩ for the positive root with the given index.
    Rational pair_coroot(const RatVec& lambda, std::size_t root) const;

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    RatVec root_to_weight(const RatVec& c) const;
    /// Inverse of root_to_weight.
    RatVec weight_to_root(const RatVec& lambda) const;

    BigInt weyl_group_order() const;

private:
    CartanType type_;
    int rank_;
    RatMat gram_;
    RatMat cartan_;
    std::vector<RatVec> roots_;
    std::vector<RatVec> root_weights_;
    std::vector<RatVec> coroots_;
};

/// ∏_{β>0} ⟨λ+ρ, β^∨⟩ / ⟨ρ, β^∨⟩.
Rational weyl_dim(const RootSystem& rs, const RatVec& lambda);

/// Closure of {λ} under the simple reflections, in lexicographic order.
/// Throws Error{OrbitTooLarge} beyond `limit` elements.
std::vector<RatVec> weyl_orbit(const RootSystem& rs, const RatVec& lambda, std::size_t limit = 1000000);

/// One factor x ↦ ⟨embed·x + χ, β^∨⟩ per active root (indices into
/// positive_roots), normalized by ∏⟨ρ, β^∨⟩; squared doubles every
/// multiplicity. `embed` maps lattice coordinates to weight coordinates.
/// Throws Error{ZeroFactor} if some factor does not depend on x.
quad::DHDensity dh_density(const RootSystem& rs, const std::vector<std::size_t>& active_roots,
                           const RatVec& chi, const RatMat& embed, bool squared);

/// Δ⁺ = conv(W·(2ρ + Σα_i)) ∩ C⁺ in simple-root coordinates, via the
/// H-representation {x ∈ C⁺ : x_i ≤ (2ρ)_i + 1}.
geom::VPolytope wonderful_moment_polytope(const RootSystem& rs);

/// The same polytope built from the Weyl orbit and the dominant chamber.
geom::VPolytope wonderful_moment_polytope_from_orbit(const RootSystem& rs);

}  // namespace kstab::rootsys
