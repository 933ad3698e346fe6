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

#include "kstab/types.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace kstab {

/// Sparse multivariate polynomial with coefficients in S, stored as a map
/// from exponent vectors to nonzero coefficients.
template <typename S>
class Polynomial {
public:
    using Exponent = std::vector<int>;
    using Terms = std::map<Exponent, S>;

    explicit Polynomial(Eigen::Index dim = 0) : dim_(dim) {}

    static Polynomial constant(Eigen::Index dim, const S& c)
    {
        Polynomial p(dim);
        p.add_term(Exponent(static_cast<std::size_t>(dim), 0), c);
        return p;
    }

    static Polynomial variable(Eigen::Index dim, Eigen::Index i)
    {
        Exponent e(static_cast<std::size_t>(dim), 0);
        e[static_cast<std::size_t>(i)] = 1;
        return monomial(std::move(e), S(1));
    }

    static Polynomial monomial(Exponent e, const S& c)
    {
        Polynomial p(static_cast<Eigen::Index>(e.size()));
        p.add_term(std::move(e), c);
        return p;
    }

    /// x ↦ ⟨normal, x⟩ + offset.
    static Polynomial affine(const Vec<S>& normal, const S& offset)
    {
        const Eigen::Index dim = normal.size();
        Polynomial p = constant(dim, offset);
        for (Eigen::Index i = 0; i < dim; ++i)
            if (normal(i) != 0) p += variable(dim, i) * normal(i);
        return p;
    }

    Eigen::Index dim() const { return dim_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const
    {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int k : e) s += k;
            d = std::max(d, s);
        }
        return d;
    }

    bool is_constant() const { return degree() == 0; }

    S constant_term() const
    {
        auto it = terms_.find(Exponent(static_cast<std::size_t>(dim_), 0));
        return it == terms_.end() ? S(0) : it->second;
    }

    void add_term(Exponent e, const S& c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.dim_ != dim_ && !o.is_zero()) throw Error(ErrorCode::InvalidInput, "polynomial dimension mismatch");
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    Polynomial& operator*=(const S& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
    friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.dim_ != b.dim_) throw Error(ErrorCode::InvalidInput, "polynomial dimension mismatch");
        Polynomial out(a.dim_);
        Exponent e(static_cast<std::size_t>(out.dim_), 0);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial pow(unsigned k) const
    {
        Polynomial out = constant(dim_, S(1));
        Polynomial base = *this;
        while (k > 0) {
            if (k & 1U) out *= base;
            k >>= 1U;
            if (k > 0) base *= base;
        }
        return out;
    }

    /// Evaluation at a point whose scalar type T is constructible from S.
    template <typename T>
    T eval(const Vec<T>& x) const
    {
        T sum(0);
        for (const auto& [e, c] : terms_) {
            T term = static_cast<T>(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term *= x(static_cast<Eigen::Index>(i));
            sum += term;
        }
        return sum;
    }

    /// Composition x_j ↦ images[j]; every image shares one ambient dimension.
    Polynomial substitute(const std::vector<Polynomial>& images) const
    {
        const Eigen::Index out_dim = images.empty() ? 0 : images.front().dim();
        std::vector<std::vector<Polynomial>> powers(images.size());
        auto power = [&](std::size_t j, int k) -> const Polynomial& {
            auto& cache = powers[j];
            if (cache.empty()) cache.push_back(constant(out_dim, S(1)));
            while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[j]);
            return cache[static_cast<std::size_t>(k)];
        };
        Polynomial out(out_dim);
        for (const auto& [e, c] : terms_) {
            Polynomial term = constant(out_dim, c);
            for (std::size_t j = 0; j < e.size(); ++j)
                if (e[j] > 0) term *= power(j, e[j]);
            out += term;
        }
        return out;
    }

private:
    Eigen::Index dim_;
    Terms terms_;
};

using RatPoly = Polynomial<Rational>;

}  // namespace kstab
