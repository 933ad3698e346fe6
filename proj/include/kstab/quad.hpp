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
#include "kstab/polynomial.hpp"

#include <functional>
#include <variant>
#include <vector>

/**
 * Integration over polytopes. Polynomials are integrated exactly through a
 * barycentric substitution on each simplex of a triangulation; everything
 * else goes through adaptive Grundmann–Möller cubature.
 *
 * All measures are the lattice-normalized Lebesgue measure of the affine
 * hull, so lower-dimensional polytopes integrate in their own lattice.
 */
namespace kstab::quad {

using geom::Simplex;
using geom::VPolytope;

/// ∫_s x^exponent over the simplex.
Rational integrate_monomial_simplex(const Simplex& s, const std::vector<int>& exponent);

Rational integrate_poly(const Simplex& s, const RatPoly& f);
Rational integrate_poly(const std::vector<Simplex>& tri, const RatPoly& f);
Rational integrate_poly(const VPolytope& p, const RatPoly& f);

/// ∫ ∏ f_i(x) dx for affine forms f_i, repeated factors allowed. Each factor
/// is pulled back to a linear form in barycentric coordinates, so the cost
/// grows with the degree only.
Rational integrate_product(const Simplex& s, const std::vector<geom::AffineForm>& factors);
Rational integrate_product(const std::vector<Simplex>& tri, const std::vector<geom::AffineForm>& factors);

struct QuadOptions {
    /// Absolute tolerance on every output component.
    double tol = 1e-10;
    std::size_t max_subdivisions = 100000;
};

/// Vector-valued cubature result. Refinement targets the truncation
/// estimate; `converged` is false when the subdivision budget ran out before
/// it met the tolerance. `error_bound` adds the floating-point roundoff
/// bound, which subdivision cannot reduce, and may therefore exceed tol.
struct Quadrature {
    VecX value;
    VecX error_bound;
    std::size_t subdivisions = 0;
    bool converged = true;
};

/// Integrand f(x) for x in ambient coordinates; writes `out_dim` values.
using Integrand = std::function<VecX(const VecX&)>;

/// Throws Error{SingularIntegrand} if f is non-finite at a node.
Quadrature integrate_numeric(const std::vector<Simplex>& tri, const Integrand& f,
                             Eigen::Index out_dim, const QuadOptions& opts = {});
Quadrature integrate_numeric(const VPolytope& p, const Integrand& f, Eigen::Index out_dim,
                             const QuadOptions& opts = {});

/// Nodes (barycentric, columns) and weights of the Grundmann–Möller rule of
/// degree 2s+1 on the n-simplex, normalized so the weights sum to 1.
struct CubatureRule {
    MatX barycentric;
    VecX weights;
};
CubatureRule grundmann_moeller(int n, int s);

/// P(x) = normalization · ∏ factor_i(x)^multiplicity_i.
struct DHDensity {
    Eigen::Index dim = 0;
    std::vector<geom::AffineForm> factors;
    std::vector<int> multiplicities;
    Rational normalization = 1;

    static DHDensity constant(Eigen::Index dim, const Rational& c = 1);

    bool is_constant() const { return factors.empty(); }
    int degree() const;
    RatPoly polynomial() const;
    /// The factors repeated by multiplicity, without the normalization.
    std::vector<geom::AffineForm> linear_factors() const;
    Rational operator()(const RatVec& x) const;
    double eval(const VecX& x) const;

    /// Throws Error{NegativeValues} if some factor is negative at a vertex.
    void check_nonnegative(const VPolytope& p) const;
};

/// Weight function g(x̄) acting on projected coordinates x̄ = proj · x.
class WeightFn {
public:
    struct Constant {
        Rational value;
    };
    struct Poly {
        RatPoly poly;
    };
    /// (⟨xi, x̄⟩ + a)^exponent.
    struct AffinePower {
        RatVec xi;
        Rational a;
        double exponent;
    };

    static WeightFn constant(const Rational& c);
    static WeightFn polynomial(RatPoly p);
    static WeightFn affine_power(RatVec xi, Rational a, double exponent);

    const std::variant<Constant, Poly, AffinePower>& variant() const { return v_; }

    /// True when g is a polynomial with rational coefficients (constants,
    /// polynomials, affine forms raised to a nonnegative integer power, and
    /// constant bases raised to any integer power).
    bool is_exact() const;
    /// Requires is_exact().
    RatPoly polynomial(Eigen::Index dim) const;
    /// Writes g ∘ proj as scale · ∏ factors when it has that shape.
    bool as_product(const RatMat& proj, Rational& scale, std::vector<geom::AffineForm>& factors) const;
    double eval(const VecX& xbar) const;

    /// Positivity on the polytope with the given (projected) vertices.
    /// Affine powers are checked exactly at every vertex; polynomials at the
    /// vertices and their centroid. Throws Error{NegativeValues}.
    void check_positive(const std::vector<RatVec>& projected_vertices) const;

    std::string describe() const;

private:
    explicit WeightFn(std::variant<Constant, Poly, AffinePower> v) : v_(std::move(v)) {}
    std::variant<Constant, Poly, AffinePower> v_;
};

/// Returns true and sets `out` when e is an integer in [-64, 64].
bool small_integer(double e, int& out);

/// g ∘ proj as a polynomial in the ambient coordinates. Requires g.is_exact().
RatPoly pullback(const WeightFn& g, const RatMat& proj);

struct Moments {
    Number mass;
    NumVec first_moment;
};

/// mass = ∫ g(x̄) P(x) dx, first_moment = ∫ g(x̄) P(x) x dx with x̄ = proj · x.
Moments dh_moments(const VPolytope& p, const DHDensity& dh, const WeightFn& g, const RatMat& proj,
                   const QuadOptions& opts = {});

}  // namespace kstab::quad
