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

#include "kstab/geom.hpp"

#include "kstab/linalg.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>

namespace kstab::geom {

double AffineForm::eval(const VecX& x) const
{
    double s = to_double(offset);
    for (Eigen::Index i = 0; i < normal.size(); ++i) s += to_double(normal(i)) * x(i);
    return s;
}

AffineForm AffineForm::translated(const RatVec& t) const
{
    return AffineForm{normal, offset - normal.dot(t)};
}

namespace {

struct DdRay {
    RatVec v;
    boost::dynamic_bitset<> tight;
};

RatVec unit(Eigen::Index dim, Eigen::Index i)
{
    RatVec e = RatVec::Zero(dim);
    e(i) = 1;
    return e;
}

}  // namespace

ConeGenerators double_description(Eigen::Index dim, const std::vector<RatVec>& ineqs,
                                  const std::vector<RatVec>& eqs)
{
    std::vector<RatVec> cons = ineqs;
    for (const auto& e : eqs) {
        cons.push_back(e);
        cons.push_back(-e);
    }
    const std::size_t m = cons.size();

    std::vector<RatVec> lin;
    for (Eigen::Index i = 0; i < dim; ++i) lin.push_back(unit(dim, i));
    std::vector<DdRay> rays;

    for (std::size_t k = 0; k < m; ++k) {
        const RatVec& a = cons[k];
        if (a.size() != dim) throw Error(ErrorCode::InvalidInput, "constraint dimension mismatch");

        auto lin_it = std::find_if(lin.begin(), lin.end(), [&](const RatVec& l) { return a.dot(l) != 0; });
        if (lin_it != lin.end()) {
            // The constraint cuts the lineality space: one lineality direction
            // becomes a ray, everything else is projected onto a = 0.
            RatVec l0 = *lin_it;
            Rational s0 = a.dot(l0);
            if (s0 < 0) {
                l0 = -l0;
                s0 = -s0;
            }
            std::vector<RatVec> next_lin;
            for (auto it = lin.begin(); it != lin.end(); ++it) {
                if (it == lin_it) continue;
                next_lin.push_back(primitive(RatVec(*it - (a.dot(*it) / s0) * l0)));
            }
            for (auto& r : rays) {
                r.v = primitive(RatVec(r.v - (a.dot(r.v) / s0) * l0));
                r.tight.set(k);
            }
            DdRay fresh{primitive(l0), boost::dynamic_bitset<>(m)};
            for (std::size_t j = 0; j < k; ++j) fresh.tight.set(j);
            rays.push_back(std::move(fresh));
            lin = std::move(next_lin);
            continue;
        }

        std::vector<Rational> s(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            s[i] = a.dot(rays[i].v);
            if (s[i] > 0) pos.push_back(i);
            else if (s[i] < 0) neg.push_back(i);
        }
        if (neg.empty()) {
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (s[i] == 0) rays[i].tight.set(k);
            continue;
        }

        std::vector<DdRay> next;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (s[i] > 0) next.push_back(rays[i]);
            else if (s[i] == 0) {
                next.push_back(rays[i]);
                next.back().tight.set(k);
            }
        }
        for (auto p : pos) {
            for (auto n : neg) {
                boost::dynamic_bitset<> z = rays[p].tight & rays[n].tight;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == n) continue;
                    if (z.is_subset_of(rays[r].tight)) adjacent = false;
                }
                if (!adjacent) continue;
                DdRay combo{primitive(RatVec(s[p] * rays[n].v - s[n] * rays[p].v)), z};
                combo.tight.set(k);
                next.push_back(std::move(combo));
            }
        }
        rays = std::move(next);
    }

    ConeGenerators out;
    out.lineality = linalg::row_basis(lin, dim);
    for (const auto& r : rays) {
        RatVec v = primitive(linalg::project_out(r.v, out.lineality));
        if (!is_zero(v)) out.rays.push_back(std::move(v));
    }
    sort_unique(out.rays);
    return out;
}

Cone::Cone(Eigen::Index dim, const std::vector<RatVec>& generators) : dim_(dim)
{
    std::vector<RatVec> gens;
    for (const auto& g : generators) {
        if (g.size() != dim) throw Error(ErrorCode::InvalidInput, "generator dimension mismatch");
        if (!kstab::is_zero(g)) gens.push_back(g);
    }
    const auto dual = double_description(dim, gens);
    facets_ = dual.rays;
    equations_ = dual.lineality;
    const auto self = double_description(dim, facets_, equations_);
    rays_ = self.rays;
    lineality_ = self.lineality;
}

Cone Cone::from_inequalities(Eigen::Index dim, const std::vector<RatVec>& ineqs,
                             const std::vector<RatVec>& eqs)
{
    Cone c;
    c.dim_ = dim;
    const auto self = double_description(dim, ineqs, eqs);
    c.rays_ = self.rays;
    c.lineality_ = self.lineality;
    const auto dual = double_description(dim, c.generators());
    c.facets_ = dual.rays;
    c.equations_ = dual.lineality;
    return c;
}

std::vector<RatVec> Cone::generators() const
{
    std::vector<RatVec> g = rays_;
    for (const auto& l : lineality_) {
        g.push_back(l);
        g.push_back(-l);
    }
    return g;
}

Eigen::Index Cone::span_dim() const
{
    return dim_ - static_cast<Eigen::Index>(equations_.size());
}

bool Cone::contains(const RatVec& x) const
{
    for (const auto& e : equations_)
        if (e.dot(x) != 0) return false;
    for (const auto& f : facets_)
        if (f.dot(x) < 0) return false;
    return true;
}

bool Cone::in_relative_interior(const RatVec& x) const
{
    for (const auto& e : equations_)
        if (e.dot(x) != 0) return false;
    for (const auto& f : facets_)
        if (f.dot(x) <= 0) return false;
    return true;
}

RatVec Cone::interior_point() const
{
    RatVec s = RatVec::Zero(dim_);
    for (const auto& r : rays_) s += r;
    return s;
}

Cone Cone::negated() const
{
    std::vector<RatVec> g;
    for (const auto& v : generators()) g.push_back(-v);
    return Cone(dim_, g);
}

std::vector<RatVec> extremal_rays(const Cone& c)
{
    return c.rays();
}

Cone cone_dual(const Cone& c)
{
    std::vector<RatVec> g = c.facets();
    for (const auto& e : c.equations()) {
        g.push_back(e);
        g.push_back(-e);
    }
    return Cone(c.dim(), g);
}

Cone intersect_cones(const Cone& a, const Cone& b)
{
    if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidInput, "cone dimension mismatch");
    std::vector<RatVec> ineqs = a.facets();
    ineqs.insert(ineqs.end(), b.facets().begin(), b.facets().end());
    std::vector<RatVec> eqs = a.equations();
    eqs.insert(eqs.end(), b.equations().begin(), b.equations().end());
    return Cone::from_inequalities(a.dim(), ineqs, eqs);
}

bool in_relative_interior(const RatVec& x, const Cone& c)
{
    return c.in_relative_interior(x);
}

bool same_cone(const Cone& a, const Cone& b)
{
    if (a.dim() != b.dim()) return false;
    for (const auto& g : a.generators())
        if (!b.contains(g)) return false;
    for (const auto& g : b.generators())
        if (!a.contains(g)) return false;
    return true;
}

namespace {

RatVec homogenize(const RatVec& x, const Rational& t)
{
    RatVec h(x.size() + 1);
    h.head(x.size()) = x;
    h(x.size()) = t;
    return h;
}

}  // namespace

HPolytope::HPolytope(Eigen::Index dim, std::vector<AffineForm> forms)
    : dim_(dim), forms_(std::move(forms))
{
    std::vector<RatVec> ineqs;
    for (const auto& f : forms_) {
        if (f.dim() != dim_) throw Error(ErrorCode::InvalidInput, "affine form dimension mismatch");
        ineqs.push_back(homogenize(f.normal, f.offset));
    }
    ineqs.push_back(homogenize(RatVec::Zero(dim_), 1));
    const auto gens = double_description(dim_ + 1, ineqs);

    bool recession = !gens.lineality.empty();
    for (const auto& r : gens.rays) {
        const Rational& t = r(dim_);
        if (t > 0) vertices_.push_back(RatVec(r.head(dim_) / t));
        else recession = true;
    }
    if (vertices_.empty()) throw Error(ErrorCode::Empty, "polytope is empty");
    if (recession) throw Error(ErrorCode::Unbounded, "polytope is unbounded");
    sort_unique(vertices_);
}

bool HPolytope::contains(const RatVec& x) const
{
    return std::all_of(forms_.begin(), forms_.end(), [&](const AffineForm& f) { return f(x) >= 0; });
}

VPolytope::VPolytope(const std::vector<RatVec>& points)
{
    if (points.empty()) throw Error(ErrorCode::Empty, "empty point set");
    dim_ = points.front().size();
    std::vector<RatVec> gens;
    for (const auto& p : points) {
        if (p.size() != dim_) throw Error(ErrorCode::InvalidInput, "point dimension mismatch");
        gens.push_back(homogenize(p, 1));
    }
    const Cone c(dim_ + 1, gens);
    for (const auto& r : c.rays()) vertices_.push_back(RatVec(r.head(dim_) / r(dim_)));
    sort_unique(vertices_);
    affine_dim_ = c.span_dim() - 1;
}

RatVec VPolytope::vertex_centroid() const
{
    RatVec s = RatVec::Zero(dim_);
    for (const auto& v : vertices_) s += v;
    return s / Rational(static_cast<long>(vertices_.size()));
}

VPolytope vertex_enum(const HPolytope& p)
{
    return VPolytope(p.vertices());
}

HPolytope hrep_of(const VPolytope& v)
{
    std::vector<RatVec> gens;
    for (const auto& p : v.vertices()) gens.push_back(homogenize(p, 1));
    const Cone c(v.dim() + 1, gens);
    std::vector<AffineForm> forms;
    const Eigen::Index d = v.dim();
    for (const auto& f : c.facets()) forms.push_back(AffineForm{f.head(d), f(d)});
    for (const auto& e : c.equations()) {
        forms.push_back(AffineForm{e.head(d), e(d)});
        forms.push_back(AffineForm{RatVec(-e.head(d)), -e(d)});
    }
    return HPolytope(d, std::move(forms));
}

HPolytope DualPolytope::polytope() const
{
    if (!bounded) throw Error(ErrorCode::Unbounded, "dual polytope is unbounded");
    return HPolytope(forms.front().dim(), forms);
}

DualPolytope dual_polytope(const VPolytope& v)
{
    const Eigen::Index d = v.dim();
    std::vector<RatVec> rows;
    for (const auto& p : v.vertices()) rows.push_back(homogenize(p, 1));
    rows.push_back(homogenize(RatVec::Zero(d), 1));
    const Cone c(d + 1, rows);

    DualPolytope out;
    for (const auto& r : c.rays()) {
        if (is_zero(RatVec(r.head(d)))) continue;
        out.forms.push_back(AffineForm{RatVec(r.head(d) / r(d)), Rational(1)});
    }
    // Bounded iff 0 is interior to the input.
    bool interior = v.is_full_dimensional();
    if (interior) {
        const auto h = hrep_of(v);
        const RatVec zero = RatVec::Zero(d);
        for (const auto& f : h.forms())
            if (f(zero) <= 0) interior = false;
    }
    out.bounded = interior;
    return out;
}

Rational Simplex::volume() const
{
    return volume_factor / Rational(factorial(static_cast<unsigned>(simplex_dim())));
}

namespace {

void pull(const std::vector<RatVec>& pts, const std::vector<std::size_t>& subset,
          std::vector<std::vector<std::size_t>>& out)
{
    const Eigen::Index dim = pts.front().size();
    std::vector<RatVec> gens;
    for (auto i : subset) gens.push_back(homogenize(pts[i], 1));
    const Cone c(dim + 1, gens);
    const Eigen::Index k = c.span_dim() - 1;
    if (static_cast<Eigen::Index>(subset.size()) == k + 1) {
        out.push_back(subset);
        return;
    }
    const std::size_t apex = subset.front();
    for (const auto& f : c.facets()) {
        std::vector<std::size_t> face;
        for (auto i : subset)
            if (f.dot(homogenize(pts[i], 1)) == 0) face.push_back(i);
        if (std::find(face.begin(), face.end(), apex) != face.end()) continue;
        std::vector<std::vector<std::size_t>> sub;
        pull(pts, face, sub);
        for (auto& s : sub) {
            s.insert(s.begin(), apex);
            out.push_back(std::move(s));
        }
    }
}

}  // namespace

std::vector<Simplex> triangulate(const VPolytope& v)
{
    const auto& pts = v.vertices();
    if (pts.empty()) throw Error(ErrorCode::DegenerateInput, "no vertices");
    const Eigen::Index dim = v.dim();
    const Eigen::Index k = v.affine_dim();

    std::vector<std::size_t> all(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) all[i] = i;
    std::vector<std::vector<std::size_t>> index_sets;
    pull(pts, all, index_sets);

    std::vector<RatVec> directions;
    for (std::size_t i = 1; i < pts.size(); ++i) directions.push_back(pts[i] - pts[0]);
    const RatMat basis = linalg::lattice_basis(directions, dim);

    std::vector<Simplex> out;
    for (const auto& idx : index_sets) {
        Simplex s;
        for (auto i : idx) s.vertices.push_back(pts[i]);
        if (k == 0) {
            s.volume_factor = 1;
        } else {
            RatMat coords(k, k);
            for (Eigen::Index j = 0; j < k; ++j) {
                const RatVec edge = s.vertices[static_cast<std::size_t>(j + 1)] - s.vertices[0];
                const auto c = linalg::solve(basis, edge);
                if (!c) throw Error(ErrorCode::InternalInconsistency, "edge outside affine hull");
                coords.col(j) = *c;
            }
            s.volume_factor = boost::multiprecision::abs(linalg::determinant(coords));
        }
        out.push_back(std::move(s));
    }
    return out;
}

Rational volume(const VPolytope& v)
{
    Rational total = 0;
    for (const auto& s : triangulate(v)) total += s.volume();
    return total;
}

}  // namespace kstab::geom
