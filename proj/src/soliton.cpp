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

#include "kstab/soliton.hpp"

#include "kstab/fixtures.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace kstab::soliton {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kBoundaryFraction = 0.05;
constexpr double kArmijo = 1e-4;
constexpr double kQuadTolMax = 1e-8;
constexpr double kQuadTolFloor = 1e-12;

MatX vertex_matrix(const ReebProblem& prob)
{
    const auto& verts = prob.delta.vertices();
    MatX v(static_cast<Eigen::Index>(verts.size()), prob.delta.dim());
    for (std::size_t i = 0; i < verts.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = to_double(verts[i]).transpose();
    return v;
}

/// ⟨ξ, v⟩ + 1 at every vertex of Δ.
VecX slacks(const ReebProblem& prob, const VecX& xi)
{
    return (vertex_matrix(prob) * xi).array() + 1.0;
}

void check_feasible(const ReebProblem& prob, const VecX& xi)
{
    if (xi.size() != prob.delta.dim()) throw Error(ErrorCode::InvalidInput, "Reeb vector has the wrong dimension");
    if (slacks(prob, xi).minCoeff() <= 0)
        throw Error(ErrorCode::InfeasiblePoint, "Reeb vector is not in the interior of the dual polytope");
}

quad::Quadrature integrate(const ReebProblem& prob, const quad::Integrand& f, Eigen::Index out_dim, double tol)
{
    quad::QuadOptions opts;
    opts.tol = tol;
    auto q = quad::integrate_numeric(prob.triangulation, f, out_dim, opts);
    if (!q.converged) throw Error(ErrorCode::ToleranceNotReached, "cubature did not reach the requested tolerance");
    return q;
}

}  // namespace

ReebProblem make_problem(geom::VPolytope delta, quad::DHDensity dh, int m)
{
    if (m < 1) throw Error(ErrorCode::InvalidInput, "dimension m must be positive");
    if (dh.dim != delta.dim()) throw Error(ErrorCode::InvalidInput, "density dimension mismatch");
    if (!delta.is_full_dimensional()) throw Error(ErrorCode::DegenerateInput, "polytope is not full-dimensional");
    dh.check_nonnegative(delta);
    auto dual = geom::dual_polytope(delta);
    auto tri = geom::triangulate(delta);
    return ReebProblem{std::move(delta), std::move(dh), m, std::move(dual), std::move(tri)};
}

ReebProblem make_problem(const spherical::SphericalInput& in)
{
    if (!in.is_horospherical())
        throw Error(ErrorCode::NotHorospherical, "the Reeb solver requires a horospherical input");
    return make_problem(in.polytope_v(), in.dh(), in.dim_X());
}

FunctionalValue reeb_functional(const ReebProblem& prob, const VecX& xi, double quad_tol)
{
    check_feasible(prob, xi);
    const Eigen::Index n = xi.size();
    const double m = prob.m;
    const quad::DHDensity& dh = prob.dh;
    // Components: value, n gradient entries, n(n+1)/2 Hessian entries.
    const Eigen::Index out = 1 + n + n * (n + 1) / 2;
    const quad::Integrand f = [&](const VecX& x) {
        VecX r(out);
        const double l = xi.dot(x) + 1.0;
        const double p = dh.eval(x);
        const double a = std::pow(l, -m - 1) * p;
        const double b = a / l;
        const double c = b / l;
        r(0) = a;
        r.segment(1, n) = b * x;
        Eigen::Index k = 1 + n;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) r(k++) = c * x(i) * x(j);
        return r;
    };
    const auto q = integrate(prob, f, out, quad_tol);
    FunctionalValue fv;
    fv.value = q.value(0);
    fv.gradient = -(m + 1) * q.value.segment(1, n);
    fv.hessian.resize(n, n);
    Eigen::Index k = 1 + n;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            fv.hessian(i, j) = (m + 1) * (m + 2) * q.value(k++);
            fv.hessian(j, i) = fv.hessian(i, j);
        }
    fv.error = (m + 1) * (m + 2) * q.error_bound.maxCoeff();
    return fv;
}

double reeb_value(const ReebProblem& prob, const VecX& xi, double quad_tol)
{
    check_feasible(prob, xi);
    const double m = prob.m;
    const quad::DHDensity& dh = prob.dh;
    const quad::Integrand f = [&](const VecX& x) {
        VecX r(1);
        r(0) = std::pow(xi.dot(x) + 1.0, -m - 1) * dh.eval(x);
        return r;
    };
    return integrate(prob, f, 1, quad_tol).value(0);
}

ReebSolution solve_reeb(const ReebProblem& prob, double tol)
{
    if (!(tol > 0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
    const Eigen::Index n = prob.delta.dim();
    const MatX verts = vertex_matrix(prob);
    ReebSolution sol;
    sol.xi = VecX::Zero(n);
    double quad_tol = kQuadTolMax;

    for (int it = 0; it <= kMaxIterations; ++it) {
        FunctionalValue fv = reeb_functional(prob, sol.xi, quad_tol);
        double gn = fv.gradient.norm();
        // Tighten the cubature until its error is small against the gradient.
        const double wanted = std::max(kQuadTolFloor, std::min(kQuadTolMax, 0.01 * gn * gn));
        if (wanted < quad_tol) {
            quad_tol = wanted;
            fv = reeb_functional(prob, sol.xi, quad_tol);
            gn = fv.gradient.norm();
        }

        const Eigen::SelfAdjointEigenSolver<MatX> eig(fv.hessian, Eigen::EigenvaluesOnly);
        const double min_eig = eig.eigenvalues().minCoeff();
        if (!(min_eig > 0)) throw Error(ErrorCode::NonConvexDetected, "Hessian is not positive definite");
        const VecX d = -fv.hessian.ldlt().solve(fv.gradient);

        sol.functional_value = fv.value;
        sol.gradient_norm = gn;
        sol.hessian_min_eigval = min_eig;
        sol.iterations = it;
        sol.xi_error_bound = d.norm();
        ReebIterate rec{it, fv.value, gn, min_eig, 0.0, quad_tol};

        if (gn <= tol) {
            sol.converged = true;
            sol.trace.push_back(rec);
            return sol;
        }
        if (it == kMaxIterations) break;

        // Fraction to the boundary: every slack keeps 5% of its value.
        const VecX s = (verts * sol.xi).array() + 1.0;
        const VecX ds = verts * d;
        double t = 1.0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (ds(i) < 0) t = std::min(t, (1.0 - kBoundaryFraction) * s(i) / -ds(i));

        const double slope = fv.gradient.dot(d);
        const double noise = 4 * quad_tol;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            const VecX trial = sol.xi + t * d;
            const double ft = reeb_value(prob, trial, quad_tol);
            if (ft <= fv.value + kArmijo * t * slope + noise) {
                sol.xi = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) throw Error(ErrorCode::NonConvexDetected, "line search failed to find descent");
        rec.step = t;
        sol.trace.push_back(rec);
    }
    throw Error(ErrorCode::MaxIterations, "Newton iteration did not converge");
}

invariants::DingVerdict pgl2_wonderful_check()
{
    return invariants::ding_check(spherical::SphericalInput(fixtures::pgl2()), quad::WeightFn::constant(1));
}

}  // namespace kstab::soliton
