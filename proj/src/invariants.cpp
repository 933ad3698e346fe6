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

#include "kstab/invariants.hpp"

#include "kstab/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kstab::invariants {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

Number infinite()
{
    return Number::approx(kInf, 0.0);
}

std::string format(const RatVec& v)
{
    std::ostringstream os;
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << kstab::to_string(v(i));
    os << ')';
    return os.str();
}

Rational power(const Rational& q, int n)
{
    Rational r = 1;
    for (int i = 0; i < n; ++i) r *= q;
    return r;
}

/// a / b with first-order error propagation; +inf when b is not bounded
/// away from zero.
Number divide(const Number& a, const Number& b)
{
    if (a.is_exact() && b.is_exact()) {
        if (*b.exact == 0) return infinite();
        return Number::from_exact(*a.exact / *b.exact);
    }
    const double bv = std::abs(b.value);
    if (bv <= b.error) return infinite();
    const double q = a.value / b.value;
    return Number::approx(q, (a.error + std::abs(q) * b.error) / (bv - b.error) + 4 * kEps * std::abs(q));
}

NumVec divide(const NumVec& f, const Number& m)
{
    if (f.is_exact() && m.is_exact()) return NumVec::from_exact(RatVec(*f.exact / *m.exact));
    const Eigen::Index n = f.size();
    VecX v(n), e(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Number q = divide(Number::approx(f.value(i), f.error(i)), m);
        v(i) = q.value;
        e(i) = q.error;
    }
    return NumVec::approx(v, e);
}

/// ⟨x, v⟩ + c for a possibly numeric vector x.
Number pair(const NumVec& x, const RatVec& v, const Rational& c)
{
    if (x.is_exact()) return Number::from_exact(x.exact->dot(v) + c);
    double val = to_double(c);
    double err = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double vi = to_double(v(i));
        val += vi * x.value(i);
        err += std::abs(vi) * x.error(i);
    }
    return Number::approx(val, err + 4 * kEps * (std::abs(val) + 1));
}

Number difference(const Rational& a, const Number& b)
{
    if (b.is_exact()) return Number::from_exact(a - *b.exact);
    return Number::approx(to_double(a) - b.value, b.error + 4 * kEps * std::abs(b.value));
}

/// A / S^{1/p}.
Number root_ratio(const Rational& A, const Number& S, double p)
{
    if (S.is_exact()) {
        if (*S.exact <= 0) return infinite();
        int ip = 0;
        if (quad::small_integer(p, ip) && ip >= 1) {
            if (auto r = exact_root(power(A, ip) / *S.exact, static_cast<unsigned>(ip))) return Number::from_exact(*r);
        }
        const long double s = static_cast<long double>(to_double(*S.exact));
        const long double v = static_cast<long double>(to_double(A)) / std::pow(s, 1.0L / p);
        return Number::approx(static_cast<double>(v), 8 * kEps * static_cast<double>(v));
    }
    if (S.value <= S.error) return infinite();
    const double v = to_double(A) / std::pow(S.value, 1.0 / p);
    return Number::approx(v, v * S.error / (p * (S.value - S.error)) + 8 * kEps * v);
}

bool exact_less(const Number& a, const Number& b)
{
    if (a.is_exact() && b.is_exact()) return *a.exact < *b.exact;
    return a.value < b.value;
}

bool ties(const Number& a, const Number& b)
{
    if (a.is_exact() && b.is_exact()) return *a.exact == *b.exact;
    if (std::isinf(a.value) || std::isinf(b.value)) return a.value == b.value;
    return std::abs(a.value - b.value) <= a.error + b.error + 1e-12 * std::max(1.0, std::abs(a.value));
}

void check_ray(const SphericalInput& in, const RatVec& v)
{
    if (v.size() != in.rank()) throw Error(ErrorCode::InvalidInput, "ray has the wrong dimension");
    if (!in.valuation_cone().contains(v)) throw Error(ErrorCode::InvalidInput, "ray " + format(v) + " is outside the valuation cone");
}

Rational log_discrepancy(const SphericalInput& in, const RatVec& v)
{
    const Rational A = in.h()(v);
    if (A <= 0) throw Error(ErrorCode::KltViolation, "log discrepancy is not positive on " + format(v));
    return A;
}

void finish(InvariantReport& r, bool use_alpha)
{
    std::vector<Number> key;
    for (const auto& row : r.table) {
        if (!use_alpha) key.push_back(row.ratio_delta);
        else key.push_back(row.ratio_alpha ? Number::from_exact(*row.ratio_alpha) : infinite());
    }
    if (key.empty()) throw Error(ErrorCode::EmptyCandidateSet, "no candidate rays");
    std::size_t best = 0;
    for (std::size_t i = 1; i < key.size(); ++i)
        if (exact_less(key[i], key[best])) best = i;
    r.value = key[best];
    for (std::size_t i = 0; i < key.size(); ++i)
        if (ties(key[i], key[best])) r.minimizers.push_back(r.table[i].ray);
}

std::optional<Rational> alpha_ratio(const Rational& A, const Rational& T)
{
    if (T <= 0) return std::nullopt;
    return A / T;
}

}  // namespace

std::string_view to_string(DingStatus s)
{
    switch (s) {
        case DingStatus::Polystable: return "polystable";
        case DingStatus::Semistable: return "semistable";
        case DingStatus::Unstable: return "unstable";
        case DingStatus::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

Number S_p(const SphericalInput& in, const RatVec& v, double p, const PLFunction& l, const QuadOptions& opts)
{
    if (!(p > 0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidInput, "p must be a positive real number");
    if (v.size() != in.rank()) throw Error(ErrorCode::InvalidInput, "ray has the wrong dimension");
    const Rational lv = l(v);
    for (const auto& x : in.polytope_v().vertices())
        if (x.dot(v) + lv < 0)
            throw Error(ErrorCode::NegativeValues, "⟨x, v⟩ + l(v) is negative on the polytope for v = " + format(v));

    const auto& tri = in.triangulation();
    auto factors = in.dh().linear_factors();
    const Rational mass = quad::integrate_product(tri, factors);
    int ip = 0;
    if (quad::small_integer(p, ip) && ip >= 1) {
        factors.insert(factors.end(), static_cast<std::size_t>(ip), geom::AffineForm{v, lv});
        return Number::from_exact(quad::integrate_product(tri, factors) / mass);
    }
    const VecX vd = to_double(v);
    const double lvd = to_double(lv);
    const quad::DHDensity& dh = in.dh();
    const quad::Integrand f = [&](const VecX& x) {
        VecX r(1);
        r(0) = dh.eval(x) * std::pow(std::max(0.0, vd.dot(x) + lvd), p);
        return r;
    };
    const auto q = quad::integrate_numeric(tri, f, 1, opts);
    if (!q.converged) throw Error(ErrorCode::ToleranceNotReached, "cubature did not reach the requested tolerance");
    const double m = to_double(mass * in.dh().normalization);
    return Number::approx(q.value(0) / m, q.error_bound(0) / m);
}

Rational T_max(const SphericalInput& in, const RatVec& v, const PLFunction& l)
{
    if (v.size() != in.rank()) throw Error(ErrorCode::InvalidInput, "ray has the wrong dimension");
    const Rational lv = l(v);
    const auto& verts = in.polytope_v().vertices();
    Rational best = verts.front().dot(v);
    for (const auto& x : verts) best = std::max(best, Rational(x.dot(v)));
    return best + lv;
}

InvariantReport delta_p(const SphericalInput& in, double p, const QuadOptions& opts)
{
    InvariantReport r;
    r.kind = Invariant::Delta;
    r.p = p;
    const auto& E = in.candidates();
    r.table = parallel_map(E.size(), [&](std::size_t i) {
        const RatVec& v = E[i];
        RayEvaluation row;
        row.ray = v;
        row.A = log_discrepancy(in, v);
        row.S = S_p(in, v, p, in.l_s(), opts);
        row.T = T_max(in, v, in.l_s());
        row.ratio_delta = root_ratio(row.A, row.S, p);
        row.ratio_alpha = alpha_ratio(row.A, row.T);
        return row;
    });
    finish(r, false);
    return r;
}

InvariantReport alpha(const SphericalInput& in)
{
    InvariantReport r;
    r.kind = Invariant::Alpha;
    const auto& E = in.candidates();
    r.table = parallel_map(E.size(), [&](std::size_t i) {
        const RatVec& v = E[i];
        RayEvaluation row;
        row.ray = v;
        row.A = log_discrepancy(in, v);
        row.S = S_p(in, v, 1.0, in.l_s());
        row.T = T_max(in, v, in.l_s());
        row.ratio_delta = root_ratio(row.A, row.S, 1.0);
        row.ratio_alpha = alpha_ratio(row.A, row.T);
        return row;
    });
    finish(r, true);
    return r;
}

NumVec barycenter_g(const SphericalInput& in, const WeightFn& g, const QuadOptions& opts)
{
    const auto m = quad::dh_moments(in.polytope_v(), in.dh(), g, in.projection(), opts);
    return divide(m.first_moment, m.mass);
}

InvariantReport delta_g(const SphericalInput& in, const WeightFn& g, const QuadOptions& opts)
{
    if (!in.is_anticanonical())
        throw Error(ErrorCode::NotAnticanonical, "weighted delta requires the anticanonical polarization");
    InvariantReport r;
    r.kind = Invariant::DeltaG;
    r.barycenter = barycenter_g(in, g, opts);
    const NumVec& bar = *r.barycenter;
    const auto& E = in.candidates();
    r.table = parallel_map(E.size(), [&](std::size_t i) {
        const RatVec& v = E[i];
        RayEvaluation row;
        row.ray = v;
        row.A = log_discrepancy(in, v);
        row.S = pair(bar, v, row.A);
        row.T = T_max(in, v, in.l_s());
        row.ratio_alpha = alpha_ratio(row.A, row.T);
        const bool nonpositive = row.S.is_exact() ? *row.S.exact <= 0 : row.S.value <= 0;
        if (nonpositive) {
            row.anomaly = true;
            row.ratio_delta = infinite();
        } else {
            row.ratio_delta = divide(Number::from_exact(row.A), row.S);
        }
        return row;
    });
    for (const auto& row : r.table)
        if (row.anomaly) r.anomalies.push_back("A(v) + <bar, v> is not positive for v = " + format(row.ray));
    finish(r, false);
    return r;
}

BetaValue beta_g(const SphericalInput& in, const RatVec& v, const WeightFn& g, const QuadOptions& opts)
{
    if (!in.is_anticanonical()) throw Error(ErrorCode::NotAnticanonical, "beta requires the anticanonical polarization");
    check_ray(in, v);
    const Rational A = in.h()(v);
    const NumVec bar = barycenter_g(in, g, opts);

    BetaValue out;
    out.by_barycenter = pair(bar, RatVec(-v), Rational(0));

    const auto& tri = in.triangulation();
    Rational scale;
    std::vector<geom::AffineForm> factors;
    if (g.as_product(in.projection(), scale, factors)) {
        const auto pf = in.dh().linear_factors();
        factors.insert(factors.end(), pf.begin(), pf.end());
        const Rational mass = quad::integrate_product(tri, factors);
        factors.push_back(geom::AffineForm{v, A});
        const Rational S = quad::integrate_product(tri, factors) / mass;
        out.by_integration = Number::from_exact(A - S);
    } else if (g.is_exact()) {
        const RatPoly w = quad::pullback(g, in.projection()) * in.dh().polynomial();
        const Rational mass = quad::integrate_poly(tri, w);
        const Rational S = quad::integrate_poly(tri, w * RatPoly::affine(v, A)) / mass;
        out.by_integration = Number::from_exact(A - S);
    } else {
        const MatX proj = to_double(in.projection());
        const VecX vd = to_double(v);
        const double Ad = to_double(A);
        const quad::DHDensity& dh = in.dh();
        const quad::Integrand f = [&](const VecX& x) {
            const double w = g.eval(proj * x) * dh.eval(x);
            VecX r(2);
            r(0) = w;
            r(1) = w * (vd.dot(x) + Ad);
            return r;
        };
        const auto q = quad::integrate_numeric(tri, f, 2, opts);
        if (!q.converged) throw Error(ErrorCode::ToleranceNotReached, "cubature did not reach the requested tolerance");
        const Number S = divide(Number::approx(q.value(1), q.error_bound(1)), Number::approx(q.value(0), q.error_bound(0)));
        out.by_integration = difference(A, S);
    }

    const Number& a = out.by_integration;
    const Number& b = out.by_barycenter;
    if (a.is_exact() && b.is_exact()) {
        if (*a.exact != *b.exact) throw Error(ErrorCode::InternalInconsistency, "beta routes disagree");
    } else if (std::abs(a.value - b.value) > a.error + b.error + 1e-9 * (1 + std::abs(a.value))) {
        throw Error(ErrorCode::InternalInconsistency, "beta routes disagree beyond their error bounds");
    }
    out.value = b.is_exact() ? b : a;
    return out;
}

DingVerdict ding_check(const SphericalInput& in, const WeightFn& g, const QuadOptions& opts)
{
    if (!in.is_anticanonical())
        throw Error(ErrorCode::NotAnticanonical, "Ding verdicts require the anticanonical polarization");
    DingVerdict d{barycenter_g(in, g, opts), geom::cone_dual(in.valuation_cone().negated()),
                  DingStatus::Indeterminate, std::nullopt, std::nullopt};
    const NumVec& bar = d.barycenter;

    struct Test {
        RatVec normal;
        bool equation;
    };
    std::vector<Test> tests;
    for (const auto& f : d.dual_cone.facets()) tests.push_back({f, false});
    for (const auto& e : d.dual_cone.equations()) tests.push_back({e, true});

    auto set = [&](DingStatus s, const Test& t, const Number& val) {
        d.status = s;
        d.witness = t.normal;
        d.witness_value = val;
    };

    if (bar.is_exact()) {
        for (const auto& t : tests) {
            const Rational val = t.normal.dot(*bar.exact);
            if (t.equation ? val != 0 : val < 0) {
                set(DingStatus::Unstable, t, Number::from_exact(val));
                return d;
            }
        }
        for (const auto& t : tests) {
            if (t.equation) continue;
            const Rational val = t.normal.dot(*bar.exact);
            if (val == 0) {
                set(DingStatus::Semistable, t, Number::from_exact(val));
                return d;
            }
        }
        d.status = DingStatus::Polystable;
        return d;
    }

    std::vector<Number> vals;
    for (const auto& t : tests) vals.push_back(pair(bar, t.normal, Rational(0)));
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const Number& val = vals[i];
        const bool violated = tests[i].equation ? std::abs(val.value) > val.error : val.value + val.error < 0;
        if (violated) {
            set(DingStatus::Unstable, tests[i], val);
            return d;
        }
    }
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const Number& val = vals[i];
        if (tests[i].equation || val.value - val.error <= 0) {
            set(DingStatus::Indeterminate, tests[i], val);
            return d;
        }
    }
    d.status = DingStatus::Polystable;
    return d;
}

}  // namespace kstab::invariants
