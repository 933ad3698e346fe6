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
#include "kstab/rootsys.hpp"

#include <optional>
#include <string>
#include <vector>

/**
 * Combinatorial model of a polarized spherical variety (X, L).
 *
 * Coordinates: M is the weight lattice of B-eigenfunctions, N its dual; both
 * are Z^rank. Divisor images ρ(D), fan generators and the valuation cone
 * live in N; polytopes live in M.
 *
 * SphericalData is the raw record as parsed; SphericalInput validates it once
 * and caches every derived object (polytopes, piecewise-linear functions,
 * candidate rays, density).
 */
namespace kstab::spherical {

/// A B-stable prime divisor with its image ρ(D) ∈ N and coefficient n_D.
struct DivisorRecord {
    std::string name;
    RatVec rho;
    Rational coeff;
    bool is_color = false;
};

/// Colored cone with explicit incidence: the G-stable divisors containing
/// the closed orbit, and the colors.
struct ColoredConeData {
    std::vector<RatVec> generators;
    std::vector<std::string> divisors;
    std::vector<std::string> colors;
};

/// Root data synthesizing the Duistermaat–Heckman density and the isotypic
/// dimensions. `embed` maps M-coordinates to fundamental-weight coordinates.
struct RootBlock {
    std::string type;
    std::vector<std::size_t> active_roots;
    RatVec chi;
    RatMat embed;
    bool squared = false;
};

struct SphericalData {
    std::string name;
    Eigen::Index rank = 0;
    int dim_X = 0;
    std::vector<DivisorRecord> divisors;
    std::vector<DivisorRecord> anticanonical_divisors;
    std::vector<ColoredConeData> fan;
    std::vector<RatVec> valuation_cone;
    bool complete = false;
    std::optional<RatMat> projection;
    std::optional<quad::DHDensity> dh;
    std::optional<RootBlock> root_system;
};

/// Restriction of a piecewise-linear function to one cone: v ↦ ⟨m, v⟩.
struct PLPiece {
    geom::Cone cone;
    RatVec m;
};

class PLFunction {
public:
    explicit PLFunction(std::vector<PLPiece> pieces) : pieces_(std::move(pieces)) {}

    const std::vector<PLPiece>& pieces() const { return pieces_; }
    /// Throws Error{OutsideSupport} if no cone contains v.
    Rational operator()(const RatVec& v) const;
    bool in_support(const RatVec& v) const;
    /// Index of the first cone containing v, or -1.
    int piece_index(const RatVec& v) const;

private:
    std::vector<PLPiece> pieces_;
};

/// {m : ⟨ρ(D), m⟩ + n_D ≥ 0 for every D}. Throws Error{Empty} / Error{Unbounded}.
geom::HPolytope section_polytope(const std::vector<DivisorRecord>& divisors, Eigen::Index rank);

/// Per-cone solution of ⟨ρ(D), m_Y⟩ = n_D over the incident divisors, free
/// directions set to zero, continuity checked across shared faces.
/// Throws Error{NotQCartier}.
PLFunction build_pl_function(const std::vector<DivisorRecord>& divisors,
                             const std::vector<ColoredConeData>& fan, Eigen::Index rank);

/// Primitive ray generators of every C_Y ∩ V, lex-sorted and deduplicated,
/// followed by ± the lineality basis of V when V contains a line.
/// Throws Error{EmptyCandidateSet}.
std::vector<RatVec> candidate_set_E(const std::vector<geom::Cone>& fan, const geom::Cone& valuation_cone);

/// Integer points of kP in lexicographic order. Throws Error{TooManyPoints}.
std::vector<RatVec> lattice_points(const geom::HPolytope& p, long k, std::size_t limit = 10000000);

class SphericalInput {
public:
    /// Validates the data; errors carry the JSON pointer of the offending field.
    explicit SphericalInput(SphericalData data);

    const SphericalData& data() const { return data_; }
    const std::string& name() const { return data_.name; }
    Eigen::Index rank() const { return data_.rank; }
    int dim_X() const { return data_.dim_X; }

    const geom::Cone& valuation_cone() const { return valuation_cone_; }
    /// The valuation cone is all of N ⊗ Q.
    bool is_horospherical() const { return valuation_cone_.is_full_space(); }
    const std::vector<geom::Cone>& fan_cones() const { return fan_cones_; }

    /// Δ for the section s of L.
    const geom::HPolytope& polytope() const { return polytope_; }
    const geom::VPolytope& polytope_v() const { return polytope_v_; }
    const std::vector<geom::Simplex>& triangulation() const { return triangulation_; }

    bool has_anticanonical() const { return h_.has_value(); }
    /// The section divisor list coincides with the anticanonical one.
    bool is_anticanonical() const { return anticanonical_; }

    const PLFunction& l_s() const { return l_s_; }
    /// Log discrepancy function h_C; throws Error{NotAnticanonical} if absent.
    const PLFunction& h() const;

    const quad::DHDensity& dh() const { return dh_; }
    const std::optional<rootsys::RootSystem>& root_system() const { return root_system_; }
    /// Translation t with Δ⁺ = Δ + t, when a root block fixes χ.
    std::optional<RatVec> moment_shift() const;

    const RatMat& projection() const { return projection_; }
    const std::vector<RatVec>& candidates() const { return candidates_; }

private:
    SphericalData data_;
    geom::Cone valuation_cone_;
    std::vector<geom::Cone> fan_cones_;
    geom::HPolytope polytope_;
    geom::VPolytope polytope_v_;
    std::vector<geom::Simplex> triangulation_;
    PLFunction l_s_;
    std::optional<PLFunction> h_;
    bool anticanonical_ = false;
    quad::DHDensity dh_;
    std::optional<rootsys::RootSystem> root_system_;
    RatMat projection_;
    std::vector<RatVec> candidates_;
};

struct LevelSum {
    Number S;
    BigInt d;
    Rational T;
};

/// Discrete level-k sums over M ∩ kΔ weighted by isotypic dimensions:
/// S_k = Σ dim·g(m̄/k)·t_m^p / Σ dim·g(m̄/k) with t_m = (⟨m,v⟩ + k·l_s(v))/k,
/// d_k = Σ dim, T_k = max t_m. Without a root block, dimensions are 1 and the
/// density must be constant.
LevelSum level_sum(const SphericalInput& in, const RatVec& v, long k, double p,
                   const std::optional<quad::WeightFn>& g = std::nullopt);

}  // namespace kstab::spherical
