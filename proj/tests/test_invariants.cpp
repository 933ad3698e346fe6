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

#include "doctest.h"

#include "kstab/fixtures.hpp"
#include "kstab/invariants.hpp"

#include <cmath>
#include <random>

using namespace kstab;
using namespace kstab::invariants;
using spherical::SphericalInput;

namespace {

RatVec v1(long a) { return make_vec({a}); }

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InternalInconsistency;
}

// PGL2: ∫_{-1}^{1} (1-x)^p (1+x)^2 dx = 2^{p+3} B(p+1, 3), divided by ∫(1+x)^2 = 8/3.
double pgl2_S(double p)
{
    const double beta = std::tgamma(p + 1) * 2.0 / std::tgamma(p + 4);
    return std::pow(2.0, p + 3) * beta / (8.0 / 3.0);
}

double pgl2_delta(double p)
{
    return 0.5 * std::pow((p + 1) * (p + 2) * (p + 3) / 6.0, 1.0 / p);
}

std::vector<SphericalInput> property_corpus()
{
    std::vector<SphericalInput> out;
    for (const auto& name : fixtures::builtin_names()) out.emplace_back(fixtures::builtin(name));
    out.emplace_back(fixtures::toric_p1xp1());
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 50; ++i) out.emplace_back(fixtures::random_synthetic(rng));
    return out;
}

double val(const Number& x)
{
    return x.is_exact() ? to_double(*x.exact) : x.value;
}

}  // namespace

TEST_CASE("S_p and T on PGL2")
{
    const SphericalInput in(fixtures::pgl2());
    CHECK(*S_p(in, v1(-1), 1, in.l_s()).exact == Rational(1, 2));
    CHECK(*S_p(in, v1(-1), 2, in.l_s()).exact == Rational(2, 5));
    CHECK(*S_p(in, v1(0), 1, in.l_s()).exact == 0);
    for (double p : {1.0, 2.0, 3.0, 4.0}) CHECK(to_double(*S_p(in, v1(-1), p, in.l_s()).exact) == doctest::Approx(pgl2_S(p)));
    for (double p : {0.5, 1.5, 2.7}) {
        const Number s = S_p(in, v1(-1), p, in.l_s());
        REQUIRE_FALSE(s.is_exact());
        CHECK(std::abs(s.value - pgl2_S(p)) <= std::max(s.error, 1e-12) + 1e-12);
    }
    CHECK(T_max(in, v1(-1), in.l_s()) == 2);
    CHECK(T_max(in, v1(0), in.l_s()) == 0);
    CHECK(T_max(in, v1(-2), in.l_s()) == 4);
    CHECK(code_of([&] { S_p(in, v1(-1), 0, in.l_s()); }) == ErrorCode::InvalidInput);
}

TEST_CASE("delta and alpha on PGL2")
{
    const SphericalInput in(fixtures::pgl2());
    const auto d1 = delta_p(in, 1);
    REQUIRE(d1.value.is_exact());
    CHECK(*d1.value.exact == 2);
    REQUIRE(d1.minimizers.size() == 1);
    CHECK(equal(d1.minimizers[0], v1(-1)));
    for (double p : {2.0, 3.0, 1.5}) {
        const auto d = delta_p(in, p);
        CHECK_FALSE(d.value.is_exact());
        CHECK(std::abs(d.value.value - pgl2_delta(p)) <= std::max(1e-12, 2 * d.value.error));
    }
    const auto a = alpha(in);
    REQUIRE(a.value.is_exact());
    CHECK(*a.value.exact == Rational(1, 2));
    CHECK(*a.table[0].ratio_alpha == Rational(1, 2));
}

TEST_CASE("wonderful alpha matches min 1/(1 + <2rho, v_i>)")
{
    for (const auto& type : {"A1", "A2", "B2", "G2", "A3"}) {
        CAPTURE(type);
        const SphericalInput in(fixtures::wonderful(type));
        const auto rs = rootsys::RootSystem::parse(type);
        const RatVec two_rho = rs.two_rho_root_coords();
        Rational expect = 1;
        for (Eigen::Index i = 0; i < two_rho.size(); ++i) expect = std::min(expect, Rational(1) / (1 + two_rho(i)));
        const auto a = alpha(in);
        REQUIRE(a.value.is_exact());
        CHECK(*a.value.exact == expect);
    }
    CHECK(*alpha(SphericalInput(fixtures::wonderful("A2"))).value.exact == Rational(1, 3));
}

TEST_CASE("toric P1")
{
    const SphericalInput in(fixtures::toric_p1());
    CHECK(*delta_p(in, 1).value.exact == 1);
    CHECK(*alpha(in).value.exact == Rational(1, 2));
    CHECK(delta_p(in, 1).minimizers.size() == 2);
    CHECK(equal(*barycenter_g(in, WeightFn::constant(1)).exact, v1(0)));
}

TEST_CASE("barycenters")
{
    const SphericalInput in(fixtures::pgl2());
    CHECK(equal(*barycenter_g(in, WeightFn::constant(1)).exact, make_vec({Rational(1, 2)})));
    CHECK(equal(*barycenter_g(in, WeightFn::constant(5)).exact, make_vec({Rational(1, 2)})));

    // Numeric weight against a Simpson-rule oracle of ∫ (x/4+1)^{1/2} 4(x+1)^2 x / ∫ ... on [-1,1].
    const auto g = WeightFn::affine_power(make_vec({Rational(1, 4)}), 1, 0.5);
    const NumVec b = barycenter_g(in, g);
    REQUIRE_FALSE(b.is_exact());
    const int n = 20000;
    double m0 = 0, m1 = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = -1 + 2.0 * i / n;
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        const double f = std::sqrt(x / 4 + 1) * 4 * (x + 1) * (x + 1);
        m0 += w * f;
        m1 += w * f * x;
    }
    CHECK(std::abs(b.value(0) - m1 / m0) <= b.error(0) + 1e-12);

    const SphericalInput sq(fixtures::toric_p1xp1());
    CHECK(kstab::is_zero(*barycenter_g(sq, WeightFn::constant(1)).exact));
}

TEST_CASE("Fano shift: bar(Delta) = bar(Delta+) - 2 rho")
{
    for (const auto& type : {"A1", "A2", "B2", "G2", "A3", "C3"}) {
        CAPTURE(type);
        const SphericalInput in(fixtures::wonderful(type));
        const auto rs = rootsys::RootSystem::parse(type);
        // Independent density on Δ⁺ in root coordinates: ∏ ⟨Aᵀy, β^∨⟩².
        quad::DHDensity plus;
        plus.dim = rs.rank();
        for (const auto& k : rs.positive_coroots()) {
            plus.factors.push_back(geom::AffineForm{RatVec(rs.cartan_matrix() * k), 0});
            plus.multiplicities.push_back(2);
        }
        const auto poly = rootsys::wonderful_moment_polytope_from_orbit(rs);
        const RatMat id = RatMat::Identity(rs.rank(), rs.rank());
        const auto m = quad::dh_moments(poly, plus, WeightFn::constant(1), id);
        const RatVec bar_plus = *m.first_moment.exact / *m.mass.exact;
        const RatVec bar = *barycenter_g(in, WeightFn::constant(1)).exact;
        CHECK(equal(bar, RatVec(bar_plus - rs.two_rho_root_coords())));
    }
}

TEST_CASE("weighted delta")
{
    for (const auto& name : fixtures::builtin_names()) {
        CAPTURE(name);
        const SphericalInput in(fixtures::builtin(name));
        const auto d1 = delta_p(in, 1);
        const auto dg = delta_g(in, WeightFn::constant(1));
        REQUIRE(dg.value.is_exact());
        CHECK(*dg.value.exact == *d1.value.exact);
        const auto dc = delta_g(in, WeightFn::affine_power(RatVec::Zero(in.rank()), 1, -(in.dim_X() + 2)));
        CHECK(*dc.value.exact == *d1.value.exact);
        CHECK(dg.anomalies.empty());
    }
    CHECK(*delta_g(SphericalInput(fixtures::pgl2()), WeightFn::constant(1)).value.exact == 2);

    // Δ = [-1,1], P ≡ 1, g = (x + 5/4)^3 pushes the barycenter far right so that
    // A + <bar, -1> < 0 is impossible here but the weighted value drops below δ.
    const SphericalInput p1(fixtures::toric_p1());
    const auto shifted = delta_g(p1, WeightFn::affine_power(v1(1), Rational(5, 4), 3));
    CHECK(*shifted.value.exact < 1);
    REQUIRE(shifted.minimizers.size() == 1);
    CHECK(equal(shifted.minimizers[0], v1(1)));
}

TEST_CASE("beta")
{
    const SphericalInput in(fixtures::pgl2());
    const auto one = WeightFn::constant(1);
    CHECK(*beta_g(in, v1(-1), one).value.exact == Rational(1, 2));
    CHECK(*beta_g(in, v1(0), one).value.exact == 0);
    CHECK(*beta_g(in, v1(-2), one).value.exact == 1);
    CHECK(code_of([&] { beta_g(in, v1(1), one); }) == ErrorCode::InvalidInput);

    const auto g = WeightFn::affine_power(make_vec({Rational(1, 3)}), 1, -2.5);
    const auto b = beta_g(in, v1(-1), g);
    CHECK_FALSE(b.value.is_exact());
    CHECK(std::abs(b.by_integration.value - b.by_barycenter.value) <= b.by_integration.error + b.by_barycenter.error + 1e-9);

    const SphericalInput synth(fixtures::synthetic_interval());
    CHECK(code_of([&] { delta_p(synth, 1); }) == ErrorCode::KltViolation);
}

TEST_CASE("Ding verdicts")
{
    const auto one = WeightFn::constant(1);
    const auto v = ding_check(SphericalInput(fixtures::pgl2()), one);
    CHECK(v.status == DingStatus::Polystable);
    CHECK(v.polystable());
    CHECK(v.semistable());
    CHECK(ding_check(SphericalInput(fixtures::pgl2()), WeightFn::constant(5)).status == DingStatus::Polystable);

    const auto r = ding_check(SphericalInput(fixtures::pgl2_reflected()), one);
    CHECK(r.status == DingStatus::Unstable);
    REQUIRE(r.witness);
    CHECK(*r.witness_value->exact < 0);
    CHECK(equal(*r.barycenter.exact, make_vec({Rational(-1, 2)})));

    const auto s = ding_check(SphericalInput(fixtures::synthetic_interval()), one);
    CHECK(s.status == DingStatus::Unstable);
    CHECK(equal(*s.barycenter.exact, make_vec({Rational(3, 2)})));

    CHECK(ding_check(SphericalInput(fixtures::toric_p1()), one).status == DingStatus::Polystable);
    CHECK(ding_check(SphericalInput(fixtures::toric_p1xp1()), one).status == DingStatus::Polystable);
    const auto bl = ding_check(SphericalInput(fixtures::toric_bl1p2()), one);
    CHECK(bl.status == DingStatus::Unstable);
    CHECK_FALSE(kstab::is_zero(*bl.barycenter.exact));

    // Numeric barycenters: zero can never be certified, a clear sign can.
    const auto g = WeightFn::affine_power(v1(0), 2, 0.5);
    CHECK(ding_check(SphericalInput(fixtures::toric_p1()), g).status == DingStatus::Indeterminate);
    CHECK(ding_check(SphericalInput(fixtures::pgl2()), g).status == DingStatus::Polystable);
    const auto near = WeightFn::affine_power(v1(1), 1000, 0.5);
    CHECK(ding_check(SphericalInput(fixtures::toric_p1()), near).status != DingStatus::Polystable);
}

TEST_CASE("level sums approach S")
{
    const SphericalInput in(fixtures::pgl2());
    CHECK(spherical::level_sum(in, v1(-1), 1, 1.0).d == 35);
    for (long k : {8, 16, 32, 64}) {
        const auto s = spherical::level_sum(in, v1(-1), k, 1.0);
        CHECK(std::abs(to_double(*s.S.exact) - 0.5) <= 2.0 / k);
    }
}

TEST_CASE("properties over builtins and random inputs")
{
    const auto corpus = property_corpus();
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(0, 6);
    for (const auto& in : corpus) {
        CAPTURE(in.name());
        const auto a = alpha(in);
        const auto d1 = delta_p(in, 1);
        CHECK(*a.value.exact <= *d1.value.exact);

        double prev = -1;
        for (double p : {1.0, 2.0, 3.0, 4.0}) {
            const auto d = delta_p(in, p);
            if (prev >= 0) CHECK(val(d.value) <= prev * (1 + 1e-12));
            prev = val(d.value);
        }
        for (const auto& v : in.candidates()) {
            double last = 0;
            for (double p : {1.0, 2.0, 3.0, 4.0}) {
                const double root = std::pow(val(S_p(in, v, p, in.l_s())), 1.0 / p);
                CHECK(root >= last * (1 - 1e-12));
                last = root;
            }
        }

        // Ratios are invariant under v -> c v.
        for (const auto& v : in.candidates()) {
            const Rational A = in.h()(v);
            const Rational S = *S_p(in, v, 1, in.l_s()).exact;
            const Rational T = T_max(in, v, in.l_s());
            for (const Rational c : {Rational(2), Rational(7), Rational(1, 3)}) {
                const RatVec w = c * v;
                CHECK(in.h()(w) / *S_p(in, w, 1, in.l_s()).exact == A / S);
                CHECK(in.h()(w) / T_max(in, w, in.l_s()) == A / T);
                const double r2 = to_double(A) / std::sqrt(val(S_p(in, v, 2, in.l_s())));
                const double w2 = to_double(in.h()(w)) / std::sqrt(val(S_p(in, w, 2, in.l_s())));
                CHECK(w2 == doctest::Approx(r2).epsilon(1e-12));
            }
        }

        // Minkowski within one cone of the fan intersected with V.
        for (const auto& cone : in.fan_cones()) {
            const auto piece = geom::intersect_cones(cone, in.valuation_cone());
            const auto gens = piece.generators();
            if (gens.empty()) continue;
            for (int t = 0; t < 5; ++t) {
                RatVec x = RatVec::Zero(in.rank()), y = RatVec::Zero(in.rank());
                for (const auto& g : gens) {
                    x += Rational(coef(rng)) * g;
                    y += Rational(coef(rng)) * g;
                }
                for (double p : {1.0, 2.0, 3.0}) {
                    const double lhs = std::pow(val(S_p(in, RatVec(x + y), p, in.l_s())), 1.0 / p);
                    const double rhs = std::pow(val(S_p(in, x, p, in.l_s())), 1.0 / p)
                                       + std::pow(val(S_p(in, y, p, in.l_s())), 1.0 / p);
                    CHECK(lhs <= rhs * (1 + 1e-12) + 1e-15);
                }
            }
        }

        // β two routes agree and are linear along rays.
        if (in.is_anticanonical()) {
            const auto one = WeightFn::constant(1);
            for (const auto& v : in.candidates()) {
                const auto b = beta_g(in, v, one);
                CHECK(*b.by_integration.exact == *b.by_barycenter.exact);
                CHECK(*beta_g(in, RatVec(2 * v), one).value.exact == 2 * *b.value.exact);
            }
        }
    }
}
