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

#include "kstab/types.hpp"

#include <gmp.h>

#include <algorithm>
#include <cctype>

namespace kstab {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::Unbounded: return "Unbounded";
        case ErrorCode::Empty: return "Empty";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::NotQCartier: return "NotQCartier";
        case ErrorCode::KltViolation: return "KltViolation";
        case ErrorCode::NegativeValues: return "NegativeValues";
        case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
        case ErrorCode::TooManyPoints: return "TooManyPoints";
        case ErrorCode::OrbitTooLarge: return "OrbitTooLarge";
        case ErrorCode::ZeroFactor: return "ZeroFactor";
        case ErrorCode::SingularIntegrand: return "SingularIntegrand";
        case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
        case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
        case ErrorCode::MaxIterations: return "MaxIterations";
        case ErrorCode::NonConvexDetected: return "NonConvexDetected";
        case ErrorCode::NotHorospherical: return "NotHorospherical";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
        case ErrorCode::NotAnticanonical: return "NotAnticanonical";
        case ErrorCode::OutsideSupport: return "OutsideSupport";
    }
    return "Unknown";
}

Number Number::from_exact(const Rational& q)
{
    Number n;
    n.exact = q;
    n.value = to_double(q);
    n.error = 0.0;
    return n;
}

Number Number::approx(double v, double err)
{
    Number n;
    n.value = v;
    n.error = err;
    return n;
}

NumVec NumVec::from_exact(const RatVec& q)
{
    NumVec n;
    n.exact = q;
    n.value = to_double(q);
    n.error = VecX::Zero(q.size());
    return n;
}

NumVec NumVec::approx(VecX v, VecX err)
{
    NumVec n;
    n.value = std::move(v);
    n.error = std::move(err);
    return n;
}

std::string to_string(const Rational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" +
           boost::multiprecision::denominator(q).str();
}

Rational parse_rational(std::string_view text)
{
    auto bad = [&] {
        return Error(ErrorCode::InvalidInput,
                     "malformed rational '" + std::string(text) + "'");
    };
    auto valid_int = [](std::string_view s, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
    std::string num_s(num);
    if (!num_s.empty() && num_s[0] == '+') num_s.erase(0, 1);
    BigInt n(num_s);
    BigInt d{std::string(den)};
    if (d == 0) throw bad();
    return Rational(n, d);
}

double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

RatVec make_vec(std::initializer_list<Rational> xs)
{
    RatVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) v(i++) = x;
    return v;
}

VecX to_double(const RatVec& v)
{
    VecX out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
    return out;
}

MatX to_double(const RatMat& m)
{
    MatX out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

bool is_zero(const RatVec& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0) return false;
    return true;
}

bool is_integer(const Rational& q)
{
    return boost::multiprecision::denominator(q) == 1;
}

bool lex_less(const RatVec& a, const RatVec& b)
{
    const Eigen::Index n = std::min(a.size(), b.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a(i) < b(i)) return true;
        if (b(i) < a(i)) return false;
    }
    return a.size() < b.size();
}

bool equal(const RatVec& a, const RatVec& b)
{
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return false;
    return true;
}

RatVec primitive(const RatVec& v)
{
    if (is_zero(v)) return v;
    BigInt lcm_den = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(v(i)));
    BigInt g = 0;
    std::vector<BigInt> ints(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Rational scaled = v(i) * Rational(lcm_den);
        ints[static_cast<std::size_t>(i)] = boost::multiprecision::numerator(scaled);
        g = boost::multiprecision::gcd(g, ints[static_cast<std::size_t>(i)]);
    }
    g = boost::multiprecision::abs(g);
    RatVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out(i) = Rational(ints[static_cast<std::size_t>(i)] / g);
    return out;
}

void sort_unique(std::vector<RatVec>& vs)
{
    std::sort(vs.begin(), vs.end(), lex_less);
    vs.erase(std::unique(vs.begin(), vs.end(), equal), vs.end());
}

namespace {

std::optional<BigInt> exact_int_root(const BigInt& n, unsigned p)
{
    mpz_t root;
    mpz_init(root);
    const int exact = mpz_root(root, n.backend().data(), p);
    std::optional<BigInt> out;
    if (exact != 0) out = BigInt(root);
    mpz_clear(root);
    return out;
}

}  // namespace

std::optional<Rational> exact_root(const Rational& q, unsigned p)
{
    if (q < 0 || p == 0) return std::nullopt;
    if (p == 1) return q;
    auto num = exact_int_root(boost::multiprecision::numerator(q), p);
    auto den = exact_int_root(boost::multiprecision::denominator(q), p);
    if (!num || !den) return std::nullopt;
    return Rational(*num, *den);
}

BigInt factorial(unsigned n)
{
    BigInt out = 1;
    for (unsigned k = 2; k <= n; ++k) out *= k;
    return out;
}

}  // namespace kstab
