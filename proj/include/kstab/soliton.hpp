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

#include "kstab/invariants.hpp"

#include <vector>

/**
 * Reeb vector of the Calabi–Yau cone over a horospherical Fano variety: the
 * unique minimizer over Int(Δ*) of the strictly convex functional
 *
 *   F(ξ) = ∫_Δ (⟨ξ,x⟩ + 1)^{−m−1} P(x) dx,
 *
 * whose stationarity condition is ∫_Δ (⟨ξ,x⟩ + 1)^{−m−2} x P(x) dx = 0.
 */
namespace kstab::soliton {

struct ReebProblem {
    geom::VPolytope delta;
    quad::DHDensity dh;
    /// Complex dimension of X.
    int m = 1;
    geom::DualPolytope dual;
    std::vector<geom::Simplex> triangulation;
};

/// Throws Error{InvalidInput} unless m ≥ 1 and P matches the dimension of Δ.
ReebProblem make_problem(geom::VPolytope delta, quad::DHDensity dh, int m);
/// Throws Error{NotHorospherical} unless the valuation cone is all of N ⊗ Q.
ReebProblem make_problem(const spherical::SphericalInput& in);

struct FunctionalValue {
    double value = 0;
    VecX gradient;
    MatX hessian;
    /// Largest cubature error bound over all components.
    double error = 0;
};

/// Throws Error{InfeasiblePoint} if ⟨ξ,v⟩ + 1 ≤ 0 at some vertex v of Δ.
FunctionalValue reeb_functional(const ReebProblem& prob, const VecX& xi, double quad_tol = 1e-12);
/// Value only.
double reeb_value(const ReebProblem& prob, const VecX& xi, double quad_tol = 1e-12);

struct ReebIterate {
    int iteration = 0;
    double value = 0;
    double gradient_norm = 0;
    double hessian_min_eigval = 0;
    double step = 0;
    double quad_tol = 0;
};

struct ReebSolution {
    VecX xi;
    double functional_value = 0;
    double gradient_norm = 0;
    double hessian_min_eigval = 0;
    int iterations = 0;
    bool converged = false;
    /// ‖H⁻¹ ∇F‖ at the returned point, the distance estimate to the minimizer.
    double xi_error_bound = 0;
    std::vector<ReebIterate> trace;
};

/// Damped Newton from ξ = 0 with fraction-to-boundary 0.05 and Armijo
/// backtracking. Throws Error{MaxIterations} after 200 iterations and
/// Error{NonConvexDetected} if a Hessian is not positive definite.
ReebSolution solve_reeb(const ReebProblem& prob, double tol = 1e-10);

/// Ding verdict of the wonderful compactification of PGL2 with g ≡ 1.
invariants::DingVerdict pgl2_wonderful_check();

}  // namespace kstab::soliton
