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

#include "kstab/fixtures.hpp"

#include "kstab/linalg.hpp"

#include <algorithm>

namespace kstab::fixtures {

using spherical::ColoredConeData;
using spherical::DivisorRecord;
using spherical::RootBlock;

namespace {

RatVec unit(Eigen::Index n, Eigen::Index i, long s = 1)
{
    RatVec e = RatVec::Zero(n);
    e(i) = s;
    return e;
}

SphericalData toric(const std::string& name, const std::vector<RatVec>& rays,
                    const std::vector<std::pair<std::size_t, std::size_t>>& cones)
{
    SphericalData d;
    d.name = name;
    d.rank = rays.front().size();
    d.dim_X = static_cast<int>(d.rank);
    for (std::size_t i = 0; i < rays.size(); ++i)
        d.divisors.push_back(DivisorRecord{"D" + std::to_string(i), rays[i], 1, false});
    d.anticanonical_divisors = d.divisors;
    for (const auto& [a, b] : cones) {
        ColoredConeData c;
        c.generators = {rays[a]};
        c.divisors = {"D" + std::to_string(a)};
        if (b != a) {
            c.generators.push_back(rays[b]);
            c.divisors.push_back("D" + std::to_string(b));
        }
        d.fan.push_back(c);
    }
    for (Eigen::Index i = 0; i < d.rank; ++i) {
        d.valuation_cone.push_back(unit(d.rank, i));
        d.valuation_cone.push_back(unit(d.rank, i, -1));
    }
    d.complete = true;
    return d;
}

}  // namespace

SphericalData wonderful(const std::string& type)
{
    const auto rs = rootsys::RootSystem::parse(type);
    const int r = rs.rank();
    const RatMat& a = rs.cartan_matrix();

    SphericalData d;
    d.name = "wonderful-" + rs.name();
    d.rank = r;
    d.dim_X = r + 2 * static_cast<int>(rs.positive_roots().size());
    for (int i = 0; i < r; ++i)
        d.divisors.push_back(DivisorRecord{"D" + std::to_string(i + 1), unit(r, i, -1), 1, false});
    // Colors restrict the simple coroots to the root lattice.
    for (int j = 0; j < r; ++j)
        d.divisors.push_back(DivisorRecord{"C" + std::to_string(j + 1), RatVec(a.col(j)), 2, true});
    d.anticanonical_divisors = d.divisors;

    ColoredConeData cone;
    for (int i = 0; i < r; ++i) {
        cone.generators.push_back(unit(r, i, -1));
        cone.divisors.push_back("D" + std::to_string(i + 1));
        d.valuation_cone.push_back(unit(r, i, -1));
    }
    d.fan.push_back(cone);
    d.complete = true;

    RootBlock rb;
    rb.type = rs.name();
    for (std::size_t k = 0; k < rs.positive_roots().size(); ++k) rb.active_roots.push_back(k);
    rb.chi = RatVec::Constant(r, Rational(2));
    rb.embed = a.transpose();
    rb.squared = true;
    d.root_system = rb;
    return d;
}

SphericalData pgl2()
{
    SphericalData d = wonderful("A1");
    d.name = "pgl2";
    d.divisors[0].name = "D";
    d.divisors[1].name = "D_color";
    d.anticanonical_divisors = d.divisors;
    d.fan[0].divisors = {"D"};
    return d;
}

SphericalData toric_p1()
{
    return toric("toric-p1", {make_vec({1}), make_vec({-1})}, {{0, 0}, {1, 1}});
}

SphericalData toric_bl1p2()
{
    return toric("toric-bl1p2", {make_vec({1, 0}), make_vec({1, 1}), make_vec({0, 1}), make_vec({-1, -1})},
                 {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

SphericalData toric_p1xp1()
{
    return toric("toric-p1xp1", {make_vec({1, 0}), make_vec({0, 1}), make_vec({-1, 0}), make_vec({0, -1})},
                 {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

SphericalData pgl2_reflected()
{
    SphericalData d = pgl2();
    d.name = "pgl2-reflected";
    d.root_system.reset();
    quad::DHDensity dh;
    dh.dim = 1;
    dh.factors = {geom::AffineForm{make_vec({-2}), 2}};
    dh.multiplicities = {2};
    d.dh = dh;
    return d;
}

SphericalData synthetic_interval()
{
    SphericalData d;
    d.name = "synthetic-interval";
    d.rank = 1;
    d.dim_X = 1;
    d.divisors = {DivisorRecord{"D1", make_vec({1}), -1, false}, DivisorRecord{"D2", make_vec({-1}), 2, true}};
    d.anticanonical_divisors = d.divisors;
    ColoredConeData c;
    c.generators = {make_vec({1})};
    c.divisors = {"D1"};
    d.fan = {c};
    d.valuation_cone = {make_vec({1})};
    d.complete = true;
    return d;
}

const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names = {"pgl2", "wonderful-a1", "wonderful-a2", "toric-p1",
                                                   "toric-bl1p2"};
    return names;
}

SphericalData builtin(const std::string& name)
{
    if (name == "pgl2") return pgl2();
    if (name == "wonderful-a1") {
        auto d = wonderful("A1");
        d.name = name;
        return d;
    }
    if (name == "wonderful-a2") {
        auto d = wonderful("A2");
        d.name = name;
        return d;
    }
    if (name == "toric-p1") return toric_p1();
    if (name == "toric-bl1p2") return toric_bl1p2();
    throw Error(ErrorCode::InvalidInput, "unknown builtin fixture '" + name + "'");
}

SphericalData random_synthetic(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coord(-2, 2);
    std::uniform_int_distribution<int> small(1, 3);
    std::bernoulli_distribution coin(0.5);
    const Eigen::Index r = coin(rng) ? 1 : 2;

    SphericalData d;
    d.name = "random";
    d.rank = r;
    d.dim_X = static_cast<int>(r) + small(rng);

    std::vector<RatVec> v;
    while (true) {
        v.clear();
        for (Eigen::Index i = 0; i < r; ++i) {
            RatVec x(r);
            for (Eigen::Index j = 0; j < r; ++j) x(j) = coord(rng);
            v.push_back(primitive(x));
        }
        if (linalg::determinant(linalg::rows_of(v, r)) != 0) break;
    }
    for (Eigen::Index i = 0; i < r; ++i)
        d.divisors.push_back(DivisorRecord{"V" + std::to_string(i), v[static_cast<std::size_t>(i)], 1, false});
    d.valuation_cone = v;

    const bool subdivide = r == 2 && coin(rng);
    if (subdivide) {
        const RatVec w = primitive(RatVec(v[0] + v[1]));
        d.divisors.push_back(DivisorRecord{"W", w, 1, false});
        d.fan.push_back(ColoredConeData{{v[0], w}, {"V0", "W"}, {}});
        d.fan.push_back(ColoredConeData{{w, v[1]}, {"W", "V1"}, {}});
    } else {
        ColoredConeData c;
        c.generators = v;
        for (Eigen::Index i = 0; i < r; ++i) c.divisors.push_back("V" + std::to_string(i));
        d.fan.push_back(c);
    }

    RatVec sum = RatVec::Zero(r);
    for (const auto& x : v) sum += x;
    d.divisors.push_back(DivisorRecord{"C0", primitive(RatVec(-sum)), small(rng), true});
    if (coin(rng)) {
        RatVec c(r);
        do {
            for (Eigen::Index j = 0; j < r; ++j) c(j) = coord(rng);
        } while (kstab::is_zero(c));
        d.divisors.push_back(DivisorRecord{"C1", c, small(rng), true});
    }
    d.anticanonical_divisors = d.divisors;
    d.complete = true;

    const auto delta = spherical::section_polytope(d.divisors, r);
    quad::DHDensity dh;
    dh.dim = r;
    std::uniform_int_distribution<int> nfactors(0, 2);
    const int nf = nfactors(rng);
    const Rational offsets[] = {Rational(1, 2), Rational(1), Rational(2)};
    std::uniform_int_distribution<int> pick(0, 2);
    for (int f = 0; f < nf; ++f) {
        RatVec a(r);
        for (Eigen::Index j = 0; j < r; ++j) a(j) = coord(rng);
        Rational lo = a.dot(delta.vertices().front());
        for (const auto& x : delta.vertices()) lo = std::min(lo, a.dot(x));
        dh.factors.push_back(geom::AffineForm{a, -lo + offsets[pick(rng)]});
        dh.multiplicities.push_back(1 + static_cast<int>(coin(rng)));
    }
    d.dh = dh;
    return d;
}

}  // namespace kstab::fixtures
