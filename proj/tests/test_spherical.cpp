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
#include "kstab/spherical.hpp"

#include <random>

using namespace kstab;
using namespace kstab::spherical;

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

std::string path_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.path();
    }
    return "";
}

}  // namespace

TEST_CASE("section polytopes")
{
    const auto d = fixtures::pgl2();
    const auto p = section_polytope(d.divisors, 1);
    REQUIRE(p.vertices().size() == 2);
    CHECK(equal(p.vertices()[0], v1(-1)));
    CHECK(equal(p.vertices()[1], v1(1)));
    CHECK(code_of([] { section_polytope({DivisorRecord{"D", v1(1), 0, false}}, 1); }) == ErrorCode::Unbounded);

    // Shifting n_D by ⟨ρ(D), t⟩ translates Δ by -t.
    const auto bl = fixtures::toric_bl1p2();
    const RatVec t = make_vec({Rational(1, 3), -2});
    auto shifted = bl.divisors;
    for (auto& rec : shifted) rec.coeff += rec.rho.dot(t);
    const auto a = section_polytope(bl.divisors, 2);
    const auto b = section_polytope(shifted, 2);
    REQUIRE(a.vertices().size() == b.vertices().size());
    for (std::size_t i = 0; i < a.vertices().size(); ++i)
        CHECK(equal(RatVec(a.vertices()[i] - t), b.vertices()[i]));
    REQUIRE(a.vertices().size() == 4);
    CHECK(equal(a.vertices()[0], make_vec({-1, 0})));
    CHECK(equal(a.vertices()[1], make_vec({-1, 2})));
    CHECK(equal(a.vertices()[2], make_vec({0, -1})));
    CHECK(equal(a.vertices()[3], make_vec({2, -1})));
}

TEST_CASE("piecewise-linear functions")
{
    const SphericalInput pgl2(fixtures::pgl2());
    CHECK(equal(pgl2.h().pieces()[0].m, v1(-1)));
    CHECK(pgl2.h()(v1(-1)) == 1);
    CHECK(pgl2.is_anticanonical());

    const SphericalInput p1(fixtures::toric_p1());
    for (long x : {-3, -1, 0, 2, 5}) CHECK(p1.l_s()(v1(x)) == Rational(std::abs(x)));

    std::vector<DivisorRecord> bad = {DivisorRecord{"A", v1(1), 0, false}, DivisorRecord{"B", v1(2), 1, false}};
    std::vector<ColoredConeData> fan = {ColoredConeData{{v1(1)}, {"A", "B"}, {}}};
    CHECK(code_of([&] { build_pl_function(bad, fan, 1); }) == ErrorCode::NotQCartier);

    CHECK_THROWS_AS(pgl2.h()(v1(1)), Error);
}

TEST_CASE("PL continuity on shared faces")
{
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> coef(0, 50);
    for (const auto& data : {fixtures::toric_bl1p2(), fixtures::toric_p1xp1()}) {
        const SphericalInput in(data);
        const auto& pieces = in.h().pieces();
        for (std::size_t i = 0; i < pieces.size(); ++i)
            for (std::size_t j = i + 1; j < pieces.size(); ++j) {
                const auto face = geom::intersect_cones(pieces[i].cone, pieces[j].cone);
                const auto gens = face.generators();
                for (int s = 0; s < 100; ++s) {
                    RatVec x = RatVec::Zero(2);
                    for (const auto& g : gens) x += Rational(coef(rng), 7) * g;
                    CHECK(pieces[i].m.dot(x) == pieces[j].m.dot(x));
                }
            }
    }
}

TEST_CASE("candidate sets")
{
    const SphericalInput pgl2(fixtures::pgl2());
    REQUIRE(pgl2.candidates().size() == 1);
    CHECK(equal(pgl2.candidates()[0], v1(-1)));

    const SphericalInput a2(fixtures::wonderful("A2"));
    REQUIRE(a2.candidates().size() == 2);
    CHECK(equal(a2.candidates()[0], make_vec({-1, 0})));
    CHECK(equal(a2.candidates()[1], make_vec({0, -1})));

    const SphericalInput p1(fixtures::toric_p1());
    REQUIRE(p1.candidates().size() == 2);
    CHECK(equal(p1.candidates()[0], v1(-1)));
    CHECK(equal(p1.candidates()[1], v1(1)));
    CHECK(p1.is_horospherical());
    CHECK_FALSE(pgl2.is_horospherical());

    for (const auto& name : fixtures::builtin_names()) {
        const SphericalInput in(fixtures::builtin(name));
        for (const auto& e : in.candidates()) {
            CHECK(in.valuation_cone().contains(e));
            CHECK(in.h()(e) > 0);
        }
    }
}

TEST_CASE("lattice points")
{
    const SphericalInput pgl2(fixtures::pgl2());
    CHECK(lattice_points(pgl2.polytope(), 1).size() == 3);
    CHECK(lattice_points(pgl2.polytope(), 3).size() == 7);
    const geom::HPolytope point(1, {geom::AffineForm{v1(1), 0}, geom::AffineForm{v1(-1), 0}});
    for (long k : {1, 2, 5}) {
        const auto pts = lattice_points(point, k);
        REQUIRE(pts.size() == 1);
        CHECK(equal(pts[0], v1(0)));
    }
    const SphericalInput bl(fixtures::toric_bl1p2());
    const auto pts = lattice_points(bl.polytope(), 1);
    CHECK(pts.size() == 9);
    CHECK(std::is_sorted(pts.begin(), pts.end(), lex_less));
    CHECK(code_of([&] { lattice_points(bl.polytope(), 100000, 1000); }) == ErrorCode::TooManyPoints);
}

TEST_CASE("level sums")
{
    const SphericalInput pgl2(fixtures::pgl2());
    const auto s = level_sum(pgl2, v1(-1), 1, 1.0);
    CHECK(s.d == 35);
    CHECK(*s.S.exact == Rational(11, 35));
    CHECK(s.T == 2);
    const auto z = level_sum(pgl2, v1(0), 3, 1.0);
    CHECK(*z.S.exact == 0);
    CHECK(z.T == 0);
    BigInt prev = 0;
    for (long k = 1; k <= 4; ++k) {
        const auto lk = level_sum(pgl2, v1(-1), k, 1.0);
        CHECK(lk.d > prev);
        prev = lk.d;
    }
    const SphericalInput refl(fixtures::pgl2_reflected());
    CHECK_THROWS_AS(level_sum(refl, v1(-1), 1, 1.0), Error);
}

TEST_CASE("moment polytope is the anticanonical polytope shifted by chi")
{
    for (const auto& type : {"A1", "A2", "B2", "G2"}) {
        CAPTURE(type);
        const SphericalInput in(fixtures::wonderful(type));
        const auto shift = in.moment_shift();
        REQUIRE(shift);
        const auto rs = rootsys::RootSystem::parse(type);
        CHECK(equal(*shift, rs.two_rho_root_coords()));
        const auto plus = rootsys::wonderful_moment_polytope_from_orbit(rs);
        std::vector<RatVec> moved;
        for (const auto& v : in.polytope_v().vertices()) moved.push_back(v + *shift);
        sort_unique(moved);
        REQUIRE(moved.size() == plus.vertices().size());
        for (std::size_t i = 0; i < moved.size(); ++i) CHECK(equal(moved[i], plus.vertices()[i]));
        CHECK(in.dim_X() == rs.rank() + 2 * static_cast<int>(rs.positive_roots().size()));
    }
}

TEST_CASE("validation")
{
    auto incomplete = fixtures::toric_p1();
    incomplete.fan.pop_back();
    CHECK(path_of([&] { SphericalInput in(incomplete); }) == "/variety/complete");

    auto bad_color = fixtures::pgl2();
    bad_color.fan[0].colors = {"D"};
    CHECK(path_of([&] { SphericalInput in(bad_color); }) == "/variety/fan/0/colors/0");

    auto line = fixtures::toric_p1();
    line.fan[0].generators = {v1(1), v1(-1)};
    line.fan[0].divisors = {"D0", "D1"};
    CHECK(path_of([&] { SphericalInput in(line); }) == "/variety/fan/0/generators");

    auto miss = fixtures::pgl2();
    miss.fan[0].generators = {v1(1)};
    CHECK(path_of([&] { SphericalInput in(miss); }) == "/variety/fan/0/generators");

    auto dup = fixtures::pgl2();
    dup.divisors[1].name = "D";
    CHECK(path_of([&] { SphericalInput in(dup); }) == "/variety/divisors/1/name");

    auto neg = fixtures::pgl2();
    neg.root_system.reset();
    neg.dh = quad::DHDensity{1, {geom::AffineForm{v1(1), 0}}, {1}, 1};
    CHECK(code_of([&] { SphericalInput in(neg); }) == ErrorCode::NegativeValues);
}

TEST_CASE("random synthetic inputs validate")
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        const SphericalInput in(fixtures::random_synthetic(rng));
        CHECK(in.is_anticanonical());
        for (const auto& e : in.candidates()) CHECK(in.h()(e) > 0);
    }
}
