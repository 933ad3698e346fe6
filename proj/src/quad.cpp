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

#include "kstab/quad.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <sstream>

namespace kstab::quad {

Rational integrate_monomial_simplex(const Simplex& s, const std::vector<int>& exponent)
{
    const Eigen::Index dim = s.vertices.front().size();
    if (static_cast<Eigen::Index>(exponent.size()) != dim)
        throw Error(ErrorCode::InvalidInput, "exponent length does not match dimension");
    RatPoly::Exponent e(exponent.begin(), exponent.end());
    return integrate_poly(s, RatPoly::monomial(std::move(e), Rational(1)));
}

Rational integrate_poly(const Simplex& s, const RatPoly& f)
{
    if (f.is_zero()) return 0;
    const auto k1 = static_cast<Eigen::Index>(s.vertices.size());
    const Eigen::Index k = k1 - 1;
    const Eigen::Index dim = s.vertices.front().size();

    // x_j = Σ_i λ_i v_ij in barycentric coordinates λ_0..λ_k.
    std::vector<RatPoly> images;
    for (Eigen::Index j = 0; j < dim; ++j) {
        RatVec coeffs(k1);
        for (Eigen::Index i = 0; i < k1; ++i) coeffs(i) = s.vertices[static_cast<std::size_t>(i)](j);
        images.push_back(RatPoly::affine(coeffs, Rational(0)));
    }
    const RatPoly g = f.substitute(images);

    // ∫ λ^a = vf · ∏ a_i! / (k + |a|)! over the simplex.
    std::vector<BigInt> fact{1};
    auto factorial_of = [&](int n) -> const BigInt& {
        while (static_cast<int>(fact.size()) <= n) fact.push_back(fact.back() * BigInt(fact.size()));
        return fact[static_cast<std::size_t>(n)];
    };
    Rational sum = 0;
    for (const auto& [a, c] : g.terms()) {
        int total = 0;
        BigInt num = 1;
        for (int ai : a) {
            total += ai;
            num *= factorial_of(ai);
        }
        sum += c * Rational(num, factorial_of(static_cast<int>(k) + total));
    }
    return sum * s.volume_factor;
}

Rational integrate_poly(const std::vector<Simplex>& tri, const RatPoly& f)
{
    Rational sum = 0;
    for (const auto& s : tri) sum += integrate_poly(s, f);
    return sum;
}

Rational integrate_poly(const VPolytope& p, const RatPoly& f)
{
    return integrate_poly(geom::triangulate(p), f);
}

Rational integrate_product(const Simplex& s, const std::vector<geom::AffineForm>& factors)
{
    const std::size_t k1 = s.vertices.size();
    using Terms = std::map<std::vector<int>, Rational>;
    Terms terms{{std::vector<int>(k1, 0), Rational(1)}};
    std::vector<Rational> c(k1);
    for (const auto& f : factors) {
        for (std::size_t i = 0; i < k1; ++i) c[i] = f(s.vertices[i]);
        Terms next;
        for (const auto& [e, coeff] : terms) {
            for (std::size_t i = 0; i < k1; ++i) {
                if (c[i] == 0) continue;
                std::vector<int> ei = e;
                ++ei[i];
                auto [it, fresh] = next.try_emplace(std::move(ei), coeff * c[i]);
                if (!fresh) it->second += coeff * c[i];
            }
        }
        terms = std::move(next);
        if (terms.empty()) return 0;
    }
    const int k = static_cast<int>(k1) - 1;
    const int degree = static_cast<int>(factors.size());
    std::vector<BigInt> fact{1};
    for (int n = 1; n <= k + degree; ++n) fact.push_back(fact.back() * BigInt(n));
    Rational sum = 0;
    for (const auto& [e, coeff] : terms) {
        BigInt num = 1;
        for (int ai : e) num *= fact[static_cast<std::size_t>(ai)];
        sum += coeff * Rational(num);
    }
    return sum * s.volume_factor / Rational(fact[static_cast<std::size_t>(k + degree)]);
}

Rational integrate_product(const std::vector<Simplex>& tri, const std::vector<geom::AffineForm>& factors)
{
    Rational sum = 0;
    for (const auto& s : tri) sum += integrate_product(s, factors);
    return sum;
}

namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int x = total; x >= 0; --x) {
        cur.push_back(x);
        compositions(total - x, parts - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

CubatureRule grundmann_moeller(int n, int s)
{
    const int d = 2 * s + 1;
    std::vector<VecX> nodes;
    std::vector<double> weights;
    // Standard-simplex weights carry a factor 1/n!; rescale to unit mass.
    double n_fact = 1;
    for (int i = 2; i <= n; ++i) n_fact *= i;
    for (int i = 0; i <= s; ++i) {
        const double denom = d + n - 2 * i;
        double w = (i % 2 == 0 ? 1.0 : -1.0) * std::ldexp(1.0, -2 * s) * std::pow(denom, d);
        for (int t = 2; t <= i; ++t) w /= t;
        for (int t = 2; t <= d + n - i; ++t) w /= t;
        w *= n_fact;
        std::vector<std::vector<int>> betas;
        std::vector<int> cur;
        compositions(s - i, n + 1, cur, betas);
        for (const auto& beta : betas) {
            VecX lam(n + 1);
            for (int j = 0; j <= n; ++j) lam(j) = (2.0 * beta[static_cast<std::size_t>(j)] + 1.0) / denom;
            nodes.push_back(lam);
            weights.push_back(w);
        }
    }
    CubatureRule rule;
    rule.barycentric.resize(n + 1, static_cast<Eigen::Index>(nodes.size()));
    rule.weights.resize(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        rule.barycentric.col(static_cast<Eigen::Index>(q)) = nodes[q];
        rule.weights(static_cast<Eigen::Index>(q)) = weights[q];
    }
    return rule;
}

namespace {

struct NumSimplex {
    MatX vertices;  // columns
    double mass;    // lattice volume
    VecX value;
    VecX error;     // truncation estimate |Q9 - Q7|
    VecX roundoff;  // floating-point accumulation bound
    std::size_t id;
    bool alive = true;
};

struct RulePair {
    CubatureRule low;
    CubatureRule high;
};

const RulePair& rules_for(int n)
{
    static thread_local std::map<int, RulePair> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, RulePair{grundmann_moeller(n, 3), grundmann_moeller(n, 4)}).first;
    return it->second;
}

void evaluate(NumSimplex& s, const Integrand& f, Eigen::Index out_dim)
{
    const int n = static_cast<int>(s.vertices.cols()) - 1;
    if (n == 0) {
        s.value = f(s.vertices.col(0)) * s.mass;
        if (!s.value.allFinite()) throw Error(ErrorCode::SingularIntegrand, "integrand is not finite");
        s.error = VecX::Zero(out_dim);
        s.roundoff = VecX::Zero(out_dim);
        return;
    }
    const auto& rules = rules_for(n);
    auto apply = [&](const CubatureRule& rule, VecX& abs_sum) {
        VecX sum = VecX::Zero(out_dim);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            const VecX x = s.vertices * rule.barycentric.col(q);
            const VecX fx = f(x);
            if (fx.size() != out_dim) throw Error(ErrorCode::InvalidInput, "integrand output size mismatch");
            if (!fx.allFinite()) throw Error(ErrorCode::SingularIntegrand, "integrand is not finite at a node");
            sum += rule.weights(q) * fx;
            abs_sum += (rule.weights(q) * fx).cwiseAbs();
        }
        return VecX(sum * s.mass);
    };
    VecX abs_sum = VecX::Zero(out_dim);
    const VecX hi = apply(rules.high, abs_sum);
    VecX unused = VecX::Zero(out_dim);
    const VecX lo = apply(rules.low, unused);
    const double eps = std::numeric_limits<double>::epsilon();
    s.value = hi;
    s.error = (hi - lo).cwiseAbs();
    s.roundoff = 64.0 * eps * s.mass * abs_sum;
}

struct ByError {
    bool operator()(const NumSimplex* a, const NumSimplex* b) const
    {
        const double ea = a->error.size() ? a->error.maxCoeff() : 0.0;
        const double eb = b->error.size() ? b->error.maxCoeff() : 0.0;
        if (ea != eb) return ea < eb;
        return a->id > b->id;
    }
};

}  // namespace

Quadrature integrate_numeric(const std::vector<Simplex>& tri, const Integrand& f, Eigen::Index out_dim,
                             const QuadOptions& opts)
{
    std::vector<std::unique_ptr<NumSimplex>> pool;
    std::priority_queue<NumSimplex*, std::vector<NumSimplex*>, ByError> queue;

    auto push = [&](MatX verts, double mass) {
        auto s = std::make_unique<NumSimplex>();
        s->vertices = std::move(verts);
        s->mass = mass;
        s->id = pool.size();
        evaluate(*s, f, out_dim);
        queue.push(s.get());
        pool.push_back(std::move(s));
    };

    for (const auto& s : tri) {
        const auto k1 = static_cast<Eigen::Index>(s.vertices.size());
        MatX verts(s.vertices.front().size(), k1);
        for (Eigen::Index i = 0; i < k1; ++i) verts.col(i) = to_double(s.vertices[static_cast<std::size_t>(i)]);
        push(std::move(verts), to_double(s.volume()));
    }

    auto totals = [&](VecX& value, VecX& error) {
        value = VecX::Zero(out_dim);
        error = VecX::Zero(out_dim);
        for (const auto& s : pool) {
            if (!s->alive) continue;
            value += s->value;
            error += s->error;
        }
    };

    Quadrature out;
    VecX error = VecX::Zero(out_dim);
    for (const auto& s : pool) error += s->error;
    std::size_t since_refresh = 0;
    while (!queue.empty() && error.size() > 0 && error.maxCoeff() > opts.tol) {
        if (out.subdivisions >= opts.max_subdivisions) {
            out.converged = false;
            break;
        }
        NumSimplex* worst = queue.top();
        queue.pop();
        const Eigen::Index k1 = worst->vertices.cols();
        if (k1 < 2) break;
        Eigen::Index ea = 0, eb = 1;
        double longest = -1.0;
        for (Eigen::Index i = 0; i < k1; ++i)
            for (Eigen::Index j = i + 1; j < k1; ++j) {
                const double len = (worst->vertices.col(i) - worst->vertices.col(j)).squaredNorm();
                if (len > longest) {
                    longest = len;
                    ea = i;
                    eb = j;
                }
            }
        const VecX mid = 0.5 * (worst->vertices.col(ea) + worst->vertices.col(eb));
        MatX left = worst->vertices;
        MatX right = worst->vertices;
        left.col(eb) = mid;
        right.col(ea) = mid;
        worst->alive = false;
        error -= worst->error;
        const double half = 0.5 * worst->mass;
        push(std::move(left), half);
        error += pool.back()->error;
        push(std::move(right), half);
        error += pool.back()->error;
        ++out.subdivisions;
        if (++since_refresh == 1000) {
            VecX v;
            totals(v, error);
            since_refresh = 0;
        }
    }
    totals(out.value, out.error_bound);
    if (out.error_bound.size() > 0 && out.error_bound.maxCoeff() > opts.tol) out.converged = false;
    for (const auto& s : pool)
        if (s->alive) out.error_bound += s->roundoff;
    return out;
}

Quadrature integrate_numeric(const VPolytope& p, const Integrand& f, Eigen::Index out_dim,
                             const QuadOptions& opts)
{
    return integrate_numeric(geom::triangulate(p), f, out_dim, opts);
}

DHDensity DHDensity::constant(Eigen::Index dim, const Rational& c)
{
    DHDensity d;
    d.dim = dim;
    d.normalization = c;
    return d;
}

int DHDensity::degree() const
{
    int d = 0;
    for (int m : multiplicities) d += m;
    return d;
}

RatPoly DHDensity::polynomial() const
{
    RatPoly p = RatPoly::constant(dim, normalization);
    for (std::size_t i = 0; i < factors.size(); ++i)
        p *= RatPoly::affine(factors[i].normal, factors[i].offset).pow(static_cast<unsigned>(multiplicities[i]));
    return p;
}

std::vector<geom::AffineForm> DHDensity::linear_factors() const
{
    std::vector<geom::AffineForm> out;
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (int k = 0; k < multiplicities[i]; ++k) out.push_back(factors[i]);
    return out;
}

Rational DHDensity::operator()(const RatVec& x) const
{
    Rational v = normalization;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const Rational f = factors[i](x);
        for (int k = 0; k < multiplicities[i]; ++k) v *= f;
    }
    return v;
}

double DHDensity::eval(const VecX& x) const
{
    double v = to_double(normalization);
    for (std::size_t i = 0; i < factors.size(); ++i) v *= std::pow(factors[i].eval(x), multiplicities[i]);
    return v;
}

void DHDensity::check_nonnegative(const VPolytope& p) const
{
    for (const auto& f : factors)
        for (const auto& v : p.vertices())
            if (f(v) < 0)
                throw Error(ErrorCode::NegativeValues, "Duistermaat-Heckman factor is negative on the polytope");
    if (normalization <= 0) throw Error(ErrorCode::NegativeValues, "density normalization must be positive");
}

bool small_integer(double e, int& out)
{
    if (!std::isfinite(e) || std::floor(e) != e || std::abs(e) > 64) return false;
    out = static_cast<int>(e);
    return true;
}

WeightFn WeightFn::constant(const Rational& c)
{
    return WeightFn(Constant{c});
}

WeightFn WeightFn::polynomial(RatPoly p)
{
    return WeightFn(Poly{std::move(p)});
}

WeightFn WeightFn::affine_power(RatVec xi, Rational a, double exponent)
{
    return WeightFn(AffinePower{std::move(xi), std::move(a), exponent});
}

bool WeightFn::is_exact() const
{
    if (!std::holds_alternative<AffinePower>(v_)) return true;
    const auto& ap = std::get<AffinePower>(v_);
    int e = 0;
    if (!small_integer(ap.exponent, e)) return false;
    if (e >= 0) return true;
    return kstab::is_zero(ap.xi) && ap.a != 0;
}

RatPoly WeightFn::polynomial(Eigen::Index dim) const
{
    if (const auto* c = std::get_if<Constant>(&v_)) return RatPoly::constant(dim, c->value);
    if (const auto* p = std::get_if<Poly>(&v_)) {
        if (p->poly.dim() != dim) throw Error(ErrorCode::InvalidInput, "weight polynomial has the wrong dimension");
        return p->poly;
    }
    const auto& ap = std::get<AffinePower>(v_);
    if (ap.xi.size() != dim) throw Error(ErrorCode::InvalidInput, "weight affine form has the wrong dimension");
    int e = 0;
    if (!is_exact() || !small_integer(ap.exponent, e))
        throw Error(ErrorCode::InvalidInput, "weight is not a polynomial");
    if (e >= 0) return RatPoly::affine(ap.xi, ap.a).pow(static_cast<unsigned>(e));
    Rational c = 1;
    for (int k = 0; k < -e; ++k) c /= ap.a;
    return RatPoly::constant(dim, c);
}

double WeightFn::eval(const VecX& xbar) const
{
    if (const auto* c = std::get_if<Constant>(&v_)) return to_double(c->value);
    if (const auto* p = std::get_if<Poly>(&v_)) return p->poly.eval<double>(xbar);
    const auto& ap = std::get<AffinePower>(v_);
    double base = to_double(ap.a);
    for (Eigen::Index i = 0; i < ap.xi.size(); ++i) base += to_double(ap.xi(i)) * xbar(i);
    return std::pow(base, ap.exponent);
}

bool WeightFn::as_product(const RatMat& proj, Rational& scale, std::vector<geom::AffineForm>& factors) const
{
    factors.clear();
    if (const auto* c = std::get_if<Constant>(&v_)) {
        scale = c->value;
        return true;
    }
    if (const auto* p = std::get_if<Poly>(&v_)) {
        if (!p->poly.is_constant()) return false;
        scale = p->poly.constant_term();
        return true;
    }
    const auto& ap = std::get<AffinePower>(v_);
    int e = 0;
    if (!small_integer(ap.exponent, e)) return false;
    if (kstab::is_zero(ap.xi)) {
        if (ap.a == 0 && e < 0) return false;
        scale = 1;
        for (int i = 0; i < std::abs(e); ++i) scale *= ap.a;
        if (e < 0) scale = 1 / scale;
        return true;
    }
    if (e < 0) return false;
    if (ap.xi.size() != proj.rows()) throw Error(ErrorCode::InvalidInput, "weight affine form has the wrong dimension");
    scale = 1;
    const geom::AffineForm f{RatVec(proj.transpose() * ap.xi), ap.a};
    for (int i = 0; i < e; ++i) factors.push_back(f);
    return true;
}

void WeightFn::check_positive(const std::vector<RatVec>& projected_vertices) const
{
    auto fail = [] { return Error(ErrorCode::NegativeValues, "weight function is not positive on the polytope"); };
    if (const auto* c = std::get_if<Constant>(&v_)) {
        if (c->value <= 0) throw fail();
        return;
    }
    if (const auto* p = std::get_if<Poly>(&v_)) {
        if (projected_vertices.empty()) return;
        RatVec centroid = RatVec::Zero(projected_vertices.front().size());
        for (const auto& v : projected_vertices) {
            if (p->poly.eval<Rational>(v) <= 0) throw fail();
            centroid += v;
        }
        centroid /= Rational(static_cast<long>(projected_vertices.size()));
        if (p->poly.eval<Rational>(centroid) <= 0) throw fail();
        return;
    }
    const auto& ap = std::get<AffinePower>(v_);
    for (const auto& v : projected_vertices) {
        if (v.size() != ap.xi.size()) throw Error(ErrorCode::InvalidInput, "weight affine form has the wrong dimension");
        if (ap.xi.dot(v) + ap.a <= 0) throw fail();
    }
}

std::string WeightFn::describe() const
{
    std::ostringstream os;
    if (const auto* c = std::get_if<Constant>(&v_)) {
        os << "const:" << to_string(c->value);
    } else if (std::holds_alternative<Poly>(v_)) {
        os << "polynomial";
    } else {
        const auto& ap = std::get<AffinePower>(v_);
        os << "affine:";
        for (Eigen::Index i = 0; i < ap.xi.size(); ++i) os << (i ? "," : "") << to_string(ap.xi(i));
        os << ";" << to_string(ap.a) << ";" << ap.exponent;
    }
    return os.str();
}

RatPoly pullback(const WeightFn& g, const RatMat& proj)
{
    const Eigen::Index dim = proj.cols();
    RatPoly gx = g.polynomial(proj.rows());
    if (proj.rows() == 0) return RatPoly::constant(dim, gx.constant_term());
    std::vector<RatPoly> images;
    for (Eigen::Index r = 0; r < proj.rows(); ++r)
        images.push_back(RatPoly::affine(RatVec(proj.row(r).transpose()), Rational(0)));
    return gx.substitute(images);
}

Moments dh_moments(const VPolytope& p, const DHDensity& dh, const WeightFn& g, const RatMat& proj,
                   const QuadOptions& opts)
{
    const Eigen::Index dim = p.dim();
    if (proj.cols() != dim) throw Error(ErrorCode::InvalidInput, "projection has the wrong number of columns");
    if (dh.dim != dim) throw Error(ErrorCode::InvalidInput, "density dimension mismatch");
    std::vector<RatVec> projected;
    for (const auto& v : p.vertices()) projected.push_back(proj * v);
    g.check_positive(projected);

    const auto tri = geom::triangulate(p);
    Moments out;
    Rational scale;
    std::vector<geom::AffineForm> factors;
    if (g.as_product(proj, scale, factors)) {
        const auto pf = dh.linear_factors();
        factors.insert(factors.end(), pf.begin(), pf.end());
        scale *= dh.normalization;
        const Rational mass = scale * integrate_product(tri, factors);
        RatVec first(dim);
        factors.emplace_back();
        for (Eigen::Index j = 0; j < dim; ++j) {
            RatVec e = RatVec::Zero(dim);
            e(j) = 1;
            factors.back() = geom::AffineForm{e, 0};
            first(j) = scale * integrate_product(tri, factors);
        }
        out.mass = Number::from_exact(mass);
        out.first_moment = NumVec::from_exact(first);
        return out;
    }
    if (g.is_exact()) {
        const RatPoly base = pullback(g, proj) * dh.polynomial();
        const Rational mass = integrate_poly(tri, base);
        RatVec first(dim);
        for (Eigen::Index j = 0; j < dim; ++j) first(j) = integrate_poly(tri, base * RatPoly::variable(dim, j));
        out.mass = Number::from_exact(mass);
        out.first_moment = NumVec::from_exact(first);
        return out;
    }
    const MatX projd = to_double(proj);
    const Integrand f = [&](const VecX& x) {
        const double w = g.eval(projd * x) * dh.eval(x);
        VecX r(dim + 1);
        r(0) = w;
        r.tail(dim) = w * x;
        return r;
    };
    const Quadrature q = integrate_numeric(tri, f, dim + 1, opts);
    if (!q.converged) throw Error(ErrorCode::ToleranceNotReached, "cubature did not reach the requested tolerance");
    out.mass = Number::approx(q.value(0), q.error_bound(0));
    out.first_moment = NumVec::approx(q.value.tail(dim), q.error_bound.tail(dim));
    return out;
}

}  // namespace kstab::quad
