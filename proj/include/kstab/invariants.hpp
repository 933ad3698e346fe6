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

#include "kstab/spherical.hpp"

#include <optional>
#include <string>
#include <vector>

/**
 * Valuative invariants of a polarized spherical variety, evaluated on the
 * finite candidate set E of primitive rays of the cones C_Y ∩ V:
 *
 *   S^(p)(v) = ∫ P(x) (⟨x,v⟩ + l_s(v))^p dx / ∫ P,
 *   T(v)     = max_{x ∈ Δ} ⟨x,v⟩ + l_s(v),
 *   δ^(p)    = min_v A(v) / S^(p)(v)^{1/p},   α = min_v A(v) / T(v),
 *
 * with A = h_C the log discrepancy on V. The weighted variants replace P by
 * g(x̄)P(x) and use the weighted barycenter.
 */
namespace kstab::invariants {

using quad::QuadOptions;
using quad::WeightFn;
using spherical::PLFunction;
using spherical::SphericalInput;

struct RayEvaluation {
    RatVec ray;
    Rational A;
    Number S;
    Rational T;
    /// A / S^{1/p}; +inf when S ≤ 0.
    Number ratio_delta;
    /// A / T; empty when T ≤ 0 (the ratio is +inf).
    std::optional<Rational> ratio_alpha;
    bool anomaly = false;
};

enum class Invariant { Delta, Alpha, DeltaG };

struct InvariantReport {
    Invariant kind = Invariant::Delta;
    double p = 1.0;
    Number value;
    /// Every ray attaining the minimum, in E order.
    std::vector<RatVec> minimizers;
    std::vector<RayEvaluation> table;
    std::optional<NumVec> barycenter;
    std::vector<std::string> anomalies;
};

/// S^(p)(v) for the piecewise-linear function l. Exact for integer p.
/// Throws Error{NegativeValues} if ⟨x,v⟩ + l(v) < 0 at a vertex of Δ.
Number S_p(const SphericalInput& in, const RatVec& v, double p, const PLFunction& l,
           const QuadOptions& opts = {});

/// Maximum of ⟨x,v⟩ + l(v) over the vertices of Δ.
Rational T_max(const SphericalInput& in, const RatVec& v, const PLFunction& l);

/// Throws Error{NotAnticanonical} without log discrepancy data and
/// Error{KltViolation} if A ≤ 0 on some candidate ray.
InvariantReport delta_p(const SphericalInput& in, double p, const QuadOptions& opts = {});
InvariantReport alpha(const SphericalInput& in);

/// ∫ g(x̄) P(x) x dx / ∫ g(x̄) P(x) dx.
NumVec barycenter_g(const SphericalInput& in, const WeightFn& g, const QuadOptions& opts = {});

/// min_v A(v) / (A(v) + ⟨bar^g, v⟩). Requires an anticanonical section.
/// Rays with a nonpositive denominator are flagged as anomalies.
InvariantReport delta_g(const SphericalInput& in, const WeightFn& g, const QuadOptions& opts = {});

/// β^g(v) = A(v) − S^g(v), by direct integration and by −⟨bar^g, v⟩.
struct BetaValue {
    Number value;
    Number by_integration;
    Number by_barycenter;
};

/// Throws Error{InternalInconsistency} if the two routes disagree beyond
/// their error bounds.
BetaValue beta_g(const SphericalInput& in, const RatVec& v, const WeightFn& g, const QuadOptions& opts = {});

enum class DingStatus { Polystable, Semistable, Unstable, Indeterminate };

std::string_view to_string(DingStatus s);

struct DingVerdict {
    NumVec barycenter;
    /// Dual of −V: {m : ⟨m, u⟩ ≤ 0 for every u ∈ V}.
    geom::Cone dual_cone;
    DingStatus status = DingStatus::Indeterminate;
    /// First facet or equation normal of the dual cone that is violated
    /// (unstable), vanishes (strictly semistable), or cannot be decided.
    std::optional<RatVec> witness;
    std::optional<Number> witness_value;

    bool semistable() const { return status == DingStatus::Polystable || status == DingStatus::Semistable; }
    bool polystable() const { return status == DingStatus::Polystable; }
};

/// Decided from exact arithmetic, or from error enclosures that keep the
/// barycenter strictly off every facet; Indeterminate otherwise.
DingVerdict ding_check(const SphericalInput& in, const WeightFn& g, const QuadOptions& opts = {});

}  // namespace kstab::invariants
