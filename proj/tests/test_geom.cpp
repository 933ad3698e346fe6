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

#include "kstab/geom.hpp"

#include <algorithm>
#include <random>

using namespace kstab;
using namespace kstab::geom;

namespace {

RatVec v2(long a, long b) { return make_vec({a, b}); }
RatVec v3(long a, long b, long c) { return make_vec({a, b, c}); }

std::vector<RatVec> random_points(std::mt19937& rng, int dim, int count, int range)
{
    std::uniform_int_distribution<int> coord(-range, range);
    std::vector<RatVec> pts;
    for (int i = 0; i < count; ++i) {
        RatVec p(dim);
        for (int j = 0; j < dim; ++j) p(j) = coord(rng);
        pts.push_back(p);
    }
    return pts;
}

Rational cross(const RatVec& o, const RatVec& a, const RatVec& b)
{
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

// Andrew's monotone chain, independent of the double description code.
std::vector<RatVec> hull_2d(std::vector<RatVec> pts)
{
    sort_unique(pts);
    if (pts.size() < 3) return pts;
    std::vector<RatVec> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

Rational shoelace(const std::vector<RatVec>& h)
{
    Rational a = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& p = h[i];
        const auto& q = h[(i + 1) % h.size()];
        a += p(0) * q(1) - p(1) * q(0);
    }
    return boost::multiprecision::abs(a) / 2;
}

RatVec cross3(const RatVec& a, const RatVec& b)
{
    return v3(0, 0, 0) + make_vec({a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                                   a(0) * b(1) - a(1) * b(0)});
}

// Brute-force 3D hull volume: every supporting plane through three points,
// summed as cones from the centroid over the facet polygons.
Rational brute_volume_3d(const std::vector<RatVec>& pts)
{
    RatVec c = RatVec::Zero(3);
    for (const auto& p : pts) c += p;
    c /= Rational(static_cast<long>(pts.size()));
    std::vector<std::pair<RatVec, Rational>> planes;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                RatVec nrm = cross3(RatVec(pts[j] - pts[i]), RatVec(pts[k] - pts[i]));
                if (is_zero(nrm)) continue;
                Rational off = -nrm.dot(pts[i]);
                bool pos = false, neg = false;
                for (const auto& p : pts) {
                    const Rational s = nrm.dot(p) + off;
                    if (s > 0) pos = true;
                    if (s < 0) neg = true;
                }
                if (pos && neg) continue;
                if (neg) {
                    nrm = -nrm;
                    off = -off;
                }
                nrm = primitive(nrm);
                off = -nrm.dot(pts[i]);
                bool seen = false;
                for (const auto& pl : planes)
                    if (equal(pl.first, nrm)) seen = true;
                if (!seen) planes.emplace_back(nrm, off);
            }
    Rational vol = 0;
    for (const auto& [nrm, off] : planes) {
        std::vector<RatVec> face;
        for (const auto& p : pts)
            if (nrm.dot(p) + off == 0) face.push_back(p);
        sort_unique(face);
        // Area vector of the planar convex polygon via its 2D projection.
        int drop = 0;
        for (int a = 1; a < 3; ++a)
            if (boost::multiprecision::abs(nrm(a)) > boost::multiprecision::abs(nrm(drop))) drop = a;
        std::vector<RatVec> proj;
        for (const auto& p : face) {
            RatVec q(2);
            int t = 0;
            for (int a = 0; a < 3; ++a)
                if (a != drop) q(t++) = p(a);
            proj.push_back(q);
        }
        const Rational projected = shoelace(hull_2d(proj));
        // Facet area times distance: projected area scales by |n_drop| / |n|.
        const Rational height_times_area = (nrm.dot(c) + off) * projected / boost::multiprecision::abs(nrm(drop));
        vol += height_times_area / 3;
    }
    return vol;
}

}  // namespace

TEST_CASE("cube from inequalities")
{
    std::vector<AffineForm> forms;
    for (int i = 0; i < 3; ++i) {
        RatVec e = RatVec::Zero(3);
        e(i) = 1;
        forms.push_back({e, 1});
        forms.push_back({RatVec(-e), 1});
    }
    HPolytope cube(3, forms);
    CHECK(cube.vertices().size() == 8);
    CHECK(equal(cube.vertices().front(), v3(-1, -1, -1)));
    CHECK(volume(vertex_enum(cube)) == 8);
}

TEST_CASE("empty and unbounded polytopes")
{
    CHECK_THROWS_AS(HPolytope(1, {{make_vec({1}), -2}, {make_vec({-1}), 1}}), Error);
    try {
        HPolytope(1, {{make_vec({1}), -2}, {make_vec({-1}), 1}});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Empty);
    }
    try {
        HPolytope(2, {{v2(1, 0), 0}, {v2(0, 1), 0}});
        FAIL("expected unbounded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unbounded);
    }
    try {
        HPolytope(2, {{v2(1, 0), 1}, {v2(-1, 0), 1}});
        FAIL("expected unbounded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unbounded);
    }
}

TEST_CASE("cone with lineality")
{
    Cone c(2, {v2(1, 0), v2(-1, 0), v2(0, 1)});
    REQUIRE(c.lineality().size() == 1);
    CHECK(equal(c.lineality()[0], v2(1, 0)));
    REQUIRE(c.rays().size() == 1);
    CHECK(equal(c.rays()[0], v2(0, 1)));
    REQUIRE(c.facets().size() == 1);
    CHECK(equal(c.facets()[0], v2(0, 1)));
    CHECK(c.equations().empty());
    CHECK(c.in_relative_interior(v2(-5, 1)));
    CHECK_FALSE(c.in_relative_interior(v2(-5, 0)));
    CHECK(c.contains(v2(-5, 0)));
}

TEST_CASE("degenerate cones")
{
    Cone zero(2, {});
    CHECK(zero.is_zero());
    CHECK(zero.in_relative_interior(v2(0, 0)));
    CHECK(zero.equations().size() == 2);
    Cone full(2, {v2(1, 0), v2(0, 1), v2(-1, -1)});
    CHECK(full.is_full_space());
    CHECK(full.facets().empty());
    CHECK(full.in_relative_interior(v2(3, -7)));
    Cone ray(2, {v2(2, 4)});
    CHECK(ray.span_dim() == 1);
    CHECK(equal(ray.rays()[0], v2(1, 2)));
    CHECK(ray.in_relative_interior(v2(3, 6)));
    CHECK_FALSE(ray.in_relative_interior(v2(0, 0)));
    CHECK(cone_dual(ray).facets().size() == 1);
}

TEST_CASE("redundant generators are dropped")
{
    Cone c(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1), v3(1, 1, 1), v3(2, 1, 0)});
    CHECK(c.rays().size() == 3);
    CHECK(c.facets().size() == 3);
}

TEST_CASE("duality is an involution on random cones")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 2 + trial % 3;
        const auto gens = random_points(rng, dim, 3 + trial % 5, 3);
        Cone c(dim, gens);
        Cone dd = cone_dual(cone_dual(c));
        CHECK(same_cone(c, dd));
        for (const auto& g : gens) CHECK(c.contains(g));
        for (const auto& f : c.facets())
            for (const auto& g : gens) CHECK(f.dot(g) >= 0);
        // Each facet is tight on at least span_dim - 1 independent rays.
        if (c.is_pointed() && c.span_dim() == dim) {
            for (const auto& f : c.facets()) {
                int tight = 0;
                for (const auto& r : c.rays())
                    if (f.dot(r) == 0) ++tight;
                CHECK(tight >= dim - 1);
            }
        }
        CHECK(c.in_relative_interior(c.interior_point()) == (c.rays().size() + c.lineality().size() > 0 || c.is_zero()));
    }
}

TEST_CASE("random planar polytopes match the monotone chain oracle")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        auto pts = random_points(rng, 2, 4 + trial % 12, 6);
        const auto hull = hull_2d(pts);
        if (hull.size() < 3) continue;
        VPolytope p(pts);
        auto expected = hull;
        sort_unique(expected);
        REQUIRE(p.vertices().size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) CHECK(equal(p.vertices()[i], expected[i]));
        CHECK(volume(p) == shoelace(hull));
        const auto h = hrep_of(p);
        CHECK(h.vertices().size() == expected.size());
    }
}

TEST_CASE("random 3D polytopes match the brute-force hull oracle")
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const auto pts = random_points(rng, 3, 5 + trial % 8, 4);
        VPolytope p(pts);
        if (!p.is_full_dimensional()) continue;
        CHECK(volume(p) == brute_volume_3d(pts));
        Rational sum = 0;
        for (const auto& s : triangulate(p)) {
            CHECK(s.simplex_dim() == 3);
            for (const auto& v : s.vertices) CHECK(std::any_of(p.vertices().begin(), p.vertices().end(),
                                                               [&](const RatVec& w) { return equal(v, w); }));
            sum += s.volume();
        }
        CHECK(sum == volume(p));
    }
}

TEST_CASE("lower-dimensional polytopes use the lattice of their affine hull")
{
    VPolytope seg({v2(0, 0), v2(2, 2), v2(1, 1)});
    CHECK(seg.affine_dim() == 1);
    CHECK(seg.vertices().size() == 2);
    CHECK(volume(seg) == 2);

    VPolytope tri({v3(0, 0, 5), v3(2, 0, 5), v3(0, 2, 5)});
    CHECK(tri.affine_dim() == 2);
    CHECK(volume(tri) == 2);

    VPolytope slanted({v3(0, 0, 0), v3(1, 1, 0), v3(0, 0, 1)});
    CHECK(volume(slanted) == Rational(1, 2));

    VPolytope point({v2(3, 4)});
    CHECK(point.affine_dim() == 0);
    CHECK(volume(point) == 1);
}

TEST_CASE("standard simplex")
{
    VPolytope s({v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
    const auto tri = triangulate(s);
    REQUIRE(tri.size() == 1);
    CHECK(tri[0].volume_factor == 1);
    CHECK(tri[0].volume() == Rational(1, 6));
}

TEST_CASE("dual of a square is the cross polytope")
{
    VPolytope sq({v2(-1, -1), v2(1, -1), v2(-1, 1), v2(1, 1)});
    const auto d = dual_polytope(sq);
    CHECK(d.bounded);
    CHECK(d.forms.size() == 4);
    const auto p = d.polytope();
    REQUIRE(p.vertices().size() == 4);
    CHECK(equal(p.vertices()[0], v2(-1, 0)));
    CHECK(equal(p.vertices()[3], v2(1, 0)));
    CHECK(volume(vertex_enum(p)) == 2);

    VPolytope off({v2(0, 0), v2(1, 0), v2(0, 1)});
    CHECK_FALSE(dual_polytope(off).bounded);
    CHECK_THROWS_AS(dual_polytope(off).polytope(), Error);
}

TEST_CASE("intersection of cones")
{
    Cone a(2, {v2(1, 0), v2(0, 1)});
    Cone b(2, {v2(1, 1), v2(-1, 1)});
    Cone c = intersect_cones(a, b);
    REQUIRE(c.rays().size() == 2);
    CHECK(equal(c.rays()[0], v2(0, 1)));
    CHECK(equal(c.rays()[1], v2(1, 1)));
}
