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

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kstab {

/// Arbitrary-precision integer and rational scalars. Expression templates are
/// disabled so that the types compose cleanly inside Eigen expressions.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RatVec = Vec<Rational>;
using RatMat = Mat<Rational>;
using VecX = Vec<double>;
using MatX = Mat<double>;

enum class ErrorCode {
    InvalidInput,
    Unbounded,
    Empty,
    DegenerateInput,
    NotQCartier,
    KltViolation,
    NegativeValues,
    EmptyCandidateSet,
    TooManyPoints,
    OrbitTooLarge,
    ZeroFactor,
    SingularIntegrand,
    ToleranceNotReached,
    InfeasiblePoint,
    MaxIterations,
    NonConvexDetected,
    NotHorospherical,
    InternalInconsistency,
    NotAnticanonical,
    OutsideSupport,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::string path = {})
        : std::runtime_error(what), code_(code), path_(std::move(path)) {}
    ErrorCode code() const noexcept { return code_; }
    /// JSON pointer to the offending input field, when known.
    const std::string& path() const noexcept { return path_; }

private:
    ErrorCode code_;
    std::string path_;
};

/// A scalar result that is either an exact rational or a floating-point
/// estimate with an absolute error bound.
struct Number {
    std::optional<Rational> exact;
    double value = 0.0;
    double error = 0.0;

    static Number from_exact(const Rational& q);
    static Number approx(double v, double err);

    bool is_exact() const { return exact.has_value(); }
};

/// Vector-valued counterpart of Number; `error` holds per-coordinate bounds.
struct NumVec {
    std::optional<RatVec> exact;
    VecX value;
    VecX error;

    static NumVec from_exact(const RatVec& q);
    static NumVec approx(VecX v, VecX err);

    bool is_exact() const { return exact.has_value(); }
    Eigen::Index size() const { return value.size(); }
};

// Rational helpers.

/// Formats q as "p/q" with an explicit denominator, e.g. "2/1".
std::string to_string(const Rational& q);
/// Accepts "p", "p/q", with optional sign. Throws InvalidInput otherwise.
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);

RatVec make_vec(std::initializer_list<Rational> xs);
VecX to_double(const RatVec& v);
MatX to_double(const RatMat& m);

bool is_zero(const RatVec& v);
bool is_integer(const Rational& q);

/// Lexicographic order on coordinates (shorter vectors first on ties).
bool lex_less(const RatVec& a, const RatVec& b);
bool equal(const RatVec& a, const RatVec& b);

/// Positive rescaling of v to a primitive integer vector (gcd of entries 1).
/// The zero vector is returned unchanged.
RatVec primitive(const RatVec& v);

/// Sorts lexicographically and removes duplicates.
void sort_unique(std::vector<RatVec>& vs);

/// Exact p-th root of a nonnegative rational when it exists.
std::optional<Rational> exact_root(const Rational& q, unsigned p);

BigInt factorial(unsigned n);

}  // namespace kstab
