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

#include "kstab/spherical.hpp"

#include "kstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace kstab::spherical {

namespace {

std::string at(const std::string& base, std::size_t i)
{
    return base + "/" + std::to_string(i);
}

Error invalid(const std::string& what, const std::string& path)
{
    return Error(ErrorCode::InvalidInput, what, path);
}

const DivisorRecord* find_divisor(const std::vector<DivisorRecord>& list, const std::string& name)
{
    for (const auto& d : list)
        if (d.name == name) return &d;
    return nullptr;
}

void check_divisor_list(const std::vector<DivisorRecord>& list, Eigen::Index rank, const std::string& base)
{
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& d = list[i];
        if (d.name.empty()) throw invalid("divisor name must be nonempty", at(base, i) + "/name");
        if (!names.insert(d.name).second) throw invalid("duplicate divisor name '" + d.name + "'", at(base, i) + "/name");
        if (d.rho.size() != rank) throw invalid("rho has the wrong length", at(base, i) + "/rho");
    }
}

void check_basic(const SphericalData& d)
{
    if (d.rank < 1) throw invalid("rank must be at least 1", "/variety/rank");
    if (d.dim_X < 1) throw invalid("dim_X must be at least 1", "/variety/dim_X");
    if (d.divisors.empty()) throw invalid("at least one divisor is required", "/variety/divisors");
    check_divisor_list(d.divisors, d.rank, "/variety/divisors");
    check_divisor_list(d.anticanonical_divisors, d.rank, "/variety/anticanonical_divisors");
    if (d.fan.empty()) throw invalid("the colored fan must have at least one cone", "/variety/fan");
    for (std::size_t i = 0; i < d.fan.size(); ++i) {
        const auto& c = d.fan[i];
        const std::string base = at("/variety/fan", i);
        for (std::size_t j = 0; j < c.generators.size(); ++j) {
            if (c.generators[j].size() != d.rank) throw invalid("generator has the wrong length", at(base + "/generators", j));
            if (kstab::is_zero(c.generators[j])) throw invalid("generators must be nonzero", at(base + "/generators", j));
        }
        for (std::size_t j = 0; j < c.divisors.size(); ++j) {
            const auto* rec = find_divisor(d.divisors, c.divisors[j]);
            if (!rec || rec->is_color)
                throw invalid("'" + c.divisors[j] + "' is not a G-stable divisor", at(base + "/divisors", j));
        }
        for (std::size_t j = 0; j < c.colors.size(); ++j) {
            const auto* rec = find_divisor(d.divisors, c.colors[j]);
            if (!rec || !rec->is_color) throw invalid("'" + c.colors[j] + "' is not a color", at(base + "/colors", j));
            if (kstab::is_zero(rec->rho)) throw invalid("a color in a colored cone must have rho ≠ 0", at(base + "/colors", j));
        }
    }
    for (std::size_t j = 0; j < d.valuation_cone.size(); ++j)
        if (d.valuation_cone[j].size() != d.rank) throw invalid("generator has the wrong length", at("/variety/valuation_cone", j));
    if (d.projection) {
        if (d.projection->cols() != d.rank) throw invalid("projection must have rank columns", "/variety/projection");
        for (Eigen::Index i = 0; i < d.projection->rows(); ++i)
            for (Eigen::Index j = 0; j < d.projection->cols(); ++j)
                if (!is_integer((*d.projection)(i, j))) throw invalid("projection must be an integer matrix", "/variety/projection");
    }
    if (d.dh && d.root_system) throw invalid("give either dh or root_system, not both", "/variety/dh");
    if (d.dh) {
        if (d.dh->dim != d.rank) throw invalid("density has the wrong dimension", "/variety/dh");
        if (d.dh->factors.size() != d.dh->multiplicities.size()) throw invalid("factor/multiplicity mismatch", "/variety/dh/factors");
        for (std::size_t i = 0; i < d.dh->factors.size(); ++i) {
            if (d.dh->factors[i].dim() != d.rank) throw invalid("factor has the wrong length", at("/variety/dh/factors", i) + "/normal");
            if (d.dh->multiplicities[i] < 1) throw invalid("multiplicity must be positive", at("/variety/dh/factors", i) + "/multiplicity");
        }
    }
}

geom::Cone make_valuation_cone(const SphericalData& d)
{
    check_basic(d);
    return geom::Cone(d.rank, d.valuation_cone);
}

std::vector<geom::Cone> make_fan(const SphericalData& d, const geom::Cone& v)
{
    std::vector<geom::Cone> out;
    for (std::size_t i = 0; i < d.fan.size(); ++i) {
        geom::Cone c(d.rank, d.fan[i].generators);
        const std::string base = at("/variety/fan", i);
        if (!c.is_pointed()) throw invalid("colored cone must be strictly convex", base + "/generators");
        const geom::Cone meet = geom::intersect_cones(c, v);
        if (!c.in_relative_interior(meet.interior_point()))
            throw invalid("relative interior of the cone does not meet the valuation cone", base + "/generators");
        out.push_back(std::move(c));
    }
    return out;
}

geom::HPolytope make_polytope(const SphericalData& d)
{
    return section_polytope(d.divisors, d.rank);
}

PLFunction make_l_s(const SphericalData& d)
{
    return build_pl_function(d.divisors, d.fan, d.rank);
}

bool same_records(std::vector<DivisorRecord> a, std::vector<DivisorRecord> b)
{
    if (a.size() != b.size()) return false;
    auto by_name = [](const DivisorRecord& x, const DivisorRecord& y) { return x.name < y.name; };
    std::sort(a.begin(), a.end(), by_name);
    std::sort(b.begin(), b.end(), by_name);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].coeff != b[i].coeff || a[i].is_color != b[i].is_color ||
            !equal(a[i].rho, b[i].rho))
            return false;
    }
    return true;
}

Rational box_volume_piece(const geom::Cone& c, Eigen::Index rank, Eigen::Index& affine_dim)
{
    std::vector<geom::AffineForm> forms;
    for (const auto& f : c.facets()) forms.push_back(geom::AffineForm{f, 0});
    for (const auto& e : c.equations()) {
        forms.push_back(geom::AffineForm{e, 0});
        forms.push_back(geom::AffineForm{RatVec(-e), 0});
    }
    for (Eigen::Index i = 0; i < rank; ++i) {
        RatVec e = RatVec::Zero(rank);
        e(i) = 1;
        forms.push_back(geom::AffineForm{e, 1});
        forms.push_back(geom::AffineForm{RatVec(-e), 1});
    }
    const auto v = geom::vertex_enum(geom::HPolytope(rank, forms));
    affine_dim = v.affine_dim();
    return geom::volume(v);
}

BigInt floor_q(const Rational& q)
{
    const BigInt n = boost::multiprecision::numerator(q);
    const BigInt d = boost::multiprecision::denominator(q);
    BigInt f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

}  // namespace

Rational PLFunction::operator()(const RatVec& v) const
{
    const int i = piece_index(v);
    if (i < 0) throw Error(ErrorCode::OutsideSupport, "point lies outside the support of the fan");
    return pieces_[static_cast<std::size_t>(i)].m.dot(v);
}

bool PLFunction::in_support(const RatVec& v) const
{
    return piece_index(v) >= 0;
}

int PLFunction::piece_index(const RatVec& v) const
{
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (pieces_[i].cone.contains(v)) return static_cast<int>(i);
    return -1;
}

geom::HPolytope section_polytope(const std::vector<DivisorRecord>& divisors, Eigen::Index rank)
{
    if (divisors.empty()) throw Error(ErrorCode::InvalidInput, "divisor list is empty");
    std::vector<geom::AffineForm> forms;
    for (const auto& d : divisors) {
        if (d.rho.size() != rank) throw Error(ErrorCode::InvalidInput, "rho has the wrong length");
        forms.push_back(geom::AffineForm{d.rho, d.coeff});
    }
    return geom::HPolytope(rank, std::move(forms));
}

PLFunction build_pl_function(const std::vector<DivisorRecord>& divisors,
                             const std::vector<ColoredConeData>& fan, Eigen::Index rank)
{
    std::vector<PLPiece> pieces;
    for (std::size_t i = 0; i < fan.size(); ++i) {
        const auto& cd = fan[i];
        const std::string base = at("/variety/fan", i);
        std::vector<RatVec> rows;
        RatVec rhs(static_cast<Eigen::Index>(cd.divisors.size() + cd.colors.size()));
        Eigen::Index r = 0;
        auto add = [&](const std::vector<std::string>& names, const std::string& field) {
            for (std::size_t j = 0; j < names.size(); ++j) {
                const auto* rec = find_divisor(divisors, names[j]);
                if (!rec) throw invalid("divisor '" + names[j] + "' is missing from the divisor list", at(base + field, j));
                rows.push_back(rec->rho);
                rhs(r++) = rec->coeff;
            }
        };
        add(cd.divisors, "/divisors");
        add(cd.colors, "/colors");

        geom::Cone cone(rank, cd.generators);
        RatVec m = RatVec::Zero(rank);
        if (!rows.empty()) {
            const RatMat a = linalg::rows_of(rows, rank);
            const auto sol = linalg::solve(a, rhs);
            if (!sol)
                throw Error(ErrorCode::NotQCartier, "no linear function matches the divisor coefficients on cone " +
                                                        std::to_string(i), base);
            m = *sol;
            // The values on the cone must be determined by the incident divisors.
            const auto span_rank = linalg::rank(a);
            for (const auto& g : cone.generators()) {
                std::vector<RatVec> ext = rows;
                ext.push_back(g);
                if (linalg::rank(linalg::rows_of(ext, rank)) != span_rank)
                    throw invalid("cone generators are not spanned by the incident divisors", base + "/generators");
            }
        } else if (!cone.is_zero()) {
            throw invalid("a nonzero cone needs incident divisors or colors", base);
        }
        pieces.push_back(PLPiece{std::move(cone), std::move(m)});
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            const geom::Cone face = geom::intersect_cones(pieces[i].cone, pieces[j].cone);
            for (const auto& g : face.generators())
                if (pieces[i].m.dot(g) != pieces[j].m.dot(g))
                    throw Error(ErrorCode::NotQCartier,
                                "piecewise-linear function is discontinuous between cones " + std::to_string(i) +
                                    " and " + std::to_string(j),
                                at("/variety/fan", j));
        }
    }
    return PLFunction(std::move(pieces));
}

std::vector<RatVec> candidate_set_E(const std::vector<geom::Cone>& fan, const geom::Cone& valuation_cone)
{
    std::vector<RatVec> out;
    for (const auto& c : fan) {
        const geom::Cone meet = geom::intersect_cones(c, valuation_cone);
        for (const auto& r : meet.rays()) out.push_back(r);
    }
    sort_unique(out);
    for (const auto& l : valuation_cone.lineality()) {
        out.push_back(l);
        out.push_back(-l);
    }
    sort_unique(out);
    if (out.empty()) throw Error(ErrorCode::EmptyCandidateSet, "every cone meets the valuation cone only at 0");
    return out;
}

std::vector<RatVec> lattice_points(const geom::HPolytope& p, long k, std::size_t limit)
{
    if (k < 1) throw Error(ErrorCode::InvalidInput, "dilation factor must be positive");
    const Eigen::Index n = p.dim();
    std::vector<BigInt> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Rational mn = p.vertices().front()(i), mx = mn;
        for (const auto& v : p.vertices()) {
            mn = std::min(mn, v(i));
            mx = std::max(mx, v(i));
        }
        lo[static_cast<std::size_t>(i)] = -floor_q(-mn * k);
        hi[static_cast<std::size_t>(i)] = floor_q(mx * k);
    }
    BigInt count = 1;
    for (Eigen::Index i = 0; i < n; ++i) count *= hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] + 1;
    if (count > BigInt(limit)) throw Error(ErrorCode::TooManyPoints, "bounding box of kΔ holds too many lattice points");

    std::vector<RatVec> out;
    RatVec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = Rational(lo[static_cast<std::size_t>(i)]);
    const Rational kk = k;
    while (true) {
        bool inside = true;
        for (const auto& f : p.forms())
            if (f.normal.dot(x) + kk * f.offset < 0) {
                inside = false;
                break;
            }
        if (inside) out.push_back(x);
        Eigen::Index i = n - 1;
        while (i >= 0) {
            x(i) += 1;
            if (x(i) <= Rational(hi[static_cast<std::size_t>(i)])) break;
            x(i) = Rational(lo[static_cast<std::size_t>(i)]);
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

SphericalInput::SphericalInput(SphericalData data)
    : data_(std::move(data)),
      valuation_cone_(make_valuation_cone(data_)),
      fan_cones_(make_fan(data_, valuation_cone_)),
      polytope_(make_polytope(data_)),
      polytope_v_(geom::vertex_enum(polytope_)),
      triangulation_(geom::triangulate(polytope_v_)),
      l_s_(make_l_s(data_))
{
    if (!data_.anticanonical_divisors.empty()) {
        for (const auto& cd : data_.fan) {
            for (const auto& name : cd.divisors)
                if (!find_divisor(data_.anticanonical_divisors, name))
                    throw invalid("G-stable divisor '" + name + "' is missing from the anticanonical list",
                                  "/variety/anticanonical_divisors");
        }
        h_ = build_pl_function(data_.anticanonical_divisors, data_.fan, data_.rank);
        anticanonical_ = same_records(data_.divisors, data_.anticanonical_divisors);
    }

    projection_ = data_.projection ? *data_.projection : RatMat(RatMat::Identity(data_.rank, data_.rank));

    if (data_.root_system) {
        const auto& rb = *data_.root_system;
        root_system_ = rootsys::RootSystem::parse(rb.type);
        if (rb.embed.rows() != root_system_->rank() || rb.embed.cols() != data_.rank)
            throw invalid("embed must be (root rank) x (lattice rank)", "/root_system/embed");
        if (rb.chi.size() != root_system_->rank()) throw invalid("chi has the wrong length", "/root_system/chi");
        for (std::size_t i = 0; i < rb.active_roots.size(); ++i)
            if (rb.active_roots[i] >= root_system_->positive_roots().size())
                throw invalid("active root index out of range", at("/root_system/active_roots", i));
        dh_ = rootsys::dh_density(*root_system_, rb.active_roots, rb.chi, rb.embed, rb.squared);
    } else if (data_.dh) {
        dh_ = *data_.dh;
    } else {
        dh_ = quad::DHDensity::constant(data_.rank);
    }
    dh_.check_nonnegative(polytope_v_);

    if (data_.complete) {
        Eigen::Index vdim = 0;
        const Rational total = box_volume_piece(valuation_cone_, data_.rank, vdim);
        Rational covered = 0;
        for (const auto& c : fan_cones_) {
            Eigen::Index d = 0;
            const Rational piece = box_volume_piece(geom::intersect_cones(c, valuation_cone_), data_.rank, d);
            if (d == vdim) covered += piece;
        }
        if (covered != total) throw invalid("the fan does not cover the valuation cone", "/variety/complete");
    }

    candidates_ = candidate_set_E(fan_cones_, valuation_cone_);
    for (const auto& e : candidates_)
        if (!valuation_cone_.contains(e))
            throw Error(ErrorCode::InternalInconsistency, "candidate ray outside the valuation cone");
}

const PLFunction& SphericalInput::h() const
{
    if (!h_) throw Error(ErrorCode::NotAnticanonical, "input has no anticanonical divisor list");
    return *h_;
}

std::optional<RatVec> SphericalInput::moment_shift() const
{
    if (!data_.root_system) return std::nullopt;
    return linalg::solve(data_.root_system->embed, data_.root_system->chi);
}

LevelSum level_sum(const SphericalInput& in, const RatVec& v, long k, double p,
                   const std::optional<quad::WeightFn>& g)
{
    if (v.size() != in.rank()) throw Error(ErrorCode::InvalidInput, "valuation has the wrong length");
    if (!in.root_system() && !in.dh().is_constant())
        throw Error(ErrorCode::InvalidInput, "isotypic dimensions need a root-system block");
    const auto points = lattice_points(in.polytope(), k);
    const Rational l = in.l_s()(v);
    const Rational kk = k;

    int p_int = 0;
    const bool exact_p = quad::small_integer(p, p_int) && p_int >= 0;
    const bool exact_g = !g || g->is_exact();
    std::optional<RatPoly> g_poly;
    if (g && exact_g) {
        g_poly = g->polynomial(in.projection().rows());
        g->check_positive({});
    }
    const MatX projd = to_double(in.projection());

    LevelSum out;
    out.d = 0;
    Rational num = 0, den = 0;
    double num_d = 0, den_d = 0, abs_d = 0;
    bool first = true;
    for (const auto& m : points) {
        Rational dim = 1;
        if (in.root_system()) {
            const auto& rb = *in.data().root_system;
            const RatVec lambda = kk * rb.chi + rb.embed * m;
            for (Eigen::Index i = 0; i < lambda.size(); ++i)
                if (lambda(i) < 0) throw Error(ErrorCode::InvalidInput, "lattice point gives a non-dominant weight");
            dim = rootsys::weyl_dim(*in.root_system(), lambda);
            if (rb.squared) dim *= dim;
        }
        out.d += boost::multiprecision::numerator(dim);
        const Rational t = (m.dot(v) + kk * l) / kk;
        if (first || t > out.T) out.T = t;
        first = false;

        const RatVec mbar = in.projection() * m / kk;
        if (exact_p && exact_g) {
            Rational w = dim;
            if (g_poly) w *= g_poly->eval<Rational>(mbar);
            Rational tp = 1;
            for (int e = 0; e < p_int; ++e) tp *= t;
            num += w * tp;
            den += w;
        } else {
            const double td = to_double(t);
            if (td < 0 && !exact_p) throw Error(ErrorCode::NegativeValues, "negative value raised to a real power");
            double w = to_double(dim);
            if (g) w *= g->eval(to_double(mbar));
            const double term = w * std::pow(td, p);
            num_d += term;
            den_d += w;
            abs_d += std::abs(term);
        }
    }
    if (exact_p && exact_g) {
        out.S = Number::from_exact(num / den);
    } else {
        const double s = num_d / den_d;
        const double eps = std::numeric_limits<double>::epsilon();
        const double n = static_cast<double>(points.size());
        out.S = Number::approx(s, 4.0 * (n + 2.0) * eps * (abs_d / den_d + std::abs(s)));
    }
    return out;
}

}  // namespace kstab::spherical
