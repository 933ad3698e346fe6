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

#include "kstab/rootsys.hpp"

#include "kstab/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

namespace kstab::rootsys {

namespace {

RatMat gram_for(CartanType type, int n)
{
    RatMat b = RatMat::Zero(n, n);
    for (int i = 0; i < n; ++i) b(i, i) = 2;
    auto link = [&](int i, int j, long v) {
        b(i, j) = v;
        b(j, i) = v;
    };
    switch (type) {
        case CartanType::A:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -1);
            break;
        case CartanType::B:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -1);
            b(n - 1, n - 1) = 1;
            break;
        case CartanType::C:
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
            link(n - 2, n - 1, -2);
            b(n - 1, n - 1) = 4;
            break;
        case CartanType::D:
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
            link(n - 3, n - 1, -1);
            break;
        case CartanType::G:
            b(1, 1) = 6;
            link(0, 1, -3);
            break;
    }
    return b;
}

struct Lex {
    bool operator()(const RatVec& a, const RatVec& b) const { return lex_less(a, b); }
};

}  // namespace

RootSystem::RootSystem(CartanType type, int rank) : type_(type), rank_(rank)
{
    const bool ok = [&] {
        switch (type) {
            case CartanType::A: return rank >= 1 && rank <= 8;
            case CartanType::B: return rank >= 2 && rank <= 8;
            case CartanType::C: return rank >= 2 && rank <= 8;
            case CartanType::D: return rank >= 4 && rank <= 8;
            case CartanType::G: return rank == 2;
        }
        return false;
    }();
    if (!ok) throw Error(ErrorCode::InvalidInput, "unsupported root system " + name());

    gram_ = gram_for(type, rank);
    cartan_.resize(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) cartan_(i, j) = 2 * gram_(i, j) / gram_(j, j);

    // Root strings: β + α_i is a root iff p > 0, where β − qα_i is the
    // bottom of the α_i-string through β and p = q − ⟨β, α_i^∨⟩.
    std::set<RatVec, Lex> known;
    std::vector<RatVec> layer;
    for (int i = 0; i < rank; ++i) {
        RatVec e = RatVec::Zero(rank);
        e(i) = 1;
        layer.push_back(e);
        known.insert(e);
    }
    while (!layer.empty()) {
        sort_unique(layer);
        roots_.insert(roots_.end(), layer.begin(), layer.end());
        std::vector<RatVec> next;
        for (const auto& beta : layer) {
            const RatVec w = cartan_.transpose() * beta;
            for (int i = 0; i < rank; ++i) {
                int q = 0;
                RatVec down = beta;
                while (true) {
                    down(i) -= 1;
                    if (!known.count(down)) break;
                    ++q;
                }
                const Rational p = Rational(q) - w(i);
                if (p > 0) {
                    RatVec up = beta;
                    up(i) += 1;
                    if (known.insert(up).second) next.push_back(up);
                }
            }
        }
        layer = std::move(next);
    }
    for (const auto& c : roots_) {
        root_weights_.push_back(cartan_.transpose() * c);
        const Rational len = c.dot(gram_ * c);
        RatVec k(rank);
        for (int i = 0; i < rank; ++i) k(i) = c(i) * gram_(i, i) / len;
        coroots_.push_back(k);
    }
}

RootSystem RootSystem::parse(const std::string& name)
{
    if (name.size() < 2) throw Error(ErrorCode::InvalidInput, "malformed root system name '" + name + "'");
    const char t = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    const std::string digits = name.substr(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })
        || digits.size() > 2)
        throw Error(ErrorCode::InvalidInput, "malformed root system name '" + name + "'");
    const int rank = std::stoi(digits);
    switch (t) {
        case 'A': return RootSystem(CartanType::A, rank);
        case 'B': return RootSystem(CartanType::B, rank);
        case 'C': return RootSystem(CartanType::C, rank);
        case 'D': return RootSystem(CartanType::D, rank);
        case 'G': return RootSystem(CartanType::G, rank);
        default: throw Error(ErrorCode::InvalidInput, "unsupported root system '" + name + "'");
    }
}

std::string RootSystem::name() const
{
    const char* letters = "ABCDG";
    return std::string(1, letters[static_cast<int>(type_)]) + std::to_string(rank_);
}

RatVec RootSystem::simple_root(int i) const
{
    return cartan_.row(i).transpose();
}

RatVec RootSystem::fundamental_weight(int i) const
{
    RatVec e = RatVec::Zero(rank_);
    e(i) = 1;
    return e;
}

RatVec RootSystem::rho() const
{
    return RatVec::Constant(rank_, Rational(1));
}

RatVec RootSystem::two_rho_root_coords() const
{
    RatVec s = RatVec::Zero(rank_);
    for (const auto& c : roots_) s += c;
    return s;
}

Rational RootSystem::pair_coroot(const RatVec& lambda, std::size_t root) const
{
    return lambda.dot(coroots_.at(root));
}

RatVec RootSystem::root_to_weight(const RatVec& c) const
{
    return cartan_.transpose() * c;
}

RatVec RootSystem::weight_to_root(const RatVec& lambda) const
{
    const auto c = linalg::solve(RatMat(cartan_.transpose()), lambda);
    if (!c) throw Error(ErrorCode::InternalInconsistency, "singular Cartan matrix");
    return *c;
}

BigInt RootSystem::weyl_group_order() const
{
    const auto n = static_cast<unsigned>(rank_);
    switch (type_) {
        case CartanType::A: return factorial(n + 1);
        case CartanType::B:
        case CartanType::C: return (BigInt(1) << n) * factorial(n);
        case CartanType::D: return (BigInt(1) << (n - 1)) * factorial(n);
        case CartanType::G: return 12;
    }
    return 0;
}

Rational weyl_dim(const RootSystem& rs, const RatVec& lambda)
{
    if (lambda.size() != rs.rank()) throw Error(ErrorCode::InvalidInput, "weight has the wrong rank");
    const RatVec shifted = lambda + rs.rho();
    Rational d = 1;
    for (std::size_t r = 0; r < rs.positive_roots().size(); ++r)
        d *= rs.pair_coroot(shifted, r) / rs.pair_coroot(rs.rho(), r);
    return d;
}

std::vector<RatVec> weyl_orbit(const RootSystem& rs, const RatVec& lambda, std::size_t limit)
{
    if (lambda.size() != rs.rank()) throw Error(ErrorCode::InvalidInput, "weight has the wrong rank");
    std::set<RatVec, Lex> seen{lambda};
    std::deque<RatVec> todo{lambda};
    while (!todo.empty()) {
        const RatVec mu = todo.front();
        todo.pop_front();
        for (int i = 0; i < rs.rank(); ++i) {
            if (mu(i) == 0) continue;
            RatVec nu = mu - mu(i) * rs.simple_root(i);
            if (seen.insert(nu).second) {
                if (seen.size() > limit) throw Error(ErrorCode::OrbitTooLarge, "Weyl orbit exceeds the size limit");
                todo.push_back(std::move(nu));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

quad::DHDensity dh_density(const RootSystem& rs, const std::vector<std::size_t>& active_roots,
                           const RatVec& chi, const RatMat& embed, bool squared)
{
    if (chi.size() != rs.rank() || embed.rows() != rs.rank())
        throw Error(ErrorCode::InvalidInput, "root block dimensions do not match the rank");
    if (linalg::rank(embed) != embed.cols())
        throw Error(ErrorCode::InvalidInput, "embedding matrix must have full column rank");
    quad::DHDensity dh;
    dh.dim = embed.cols();
    Rational norm = 1;
    const int mult = squared ? 2 : 1;
    for (auto r : active_roots) {
        if (r >= rs.positive_roots().size()) throw Error(ErrorCode::InvalidInput, "active root index out of range");
        const RatVec& k = rs.positive_coroots()[r];
        RatVec normal = embed.transpose() * k;
        if (kstab::is_zero(normal))
            throw Error(ErrorCode::ZeroFactor, "an active root is orthogonal to the lattice directions");
        dh.factors.push_back(geom::AffineForm{normal, chi.dot(k)});
        dh.multiplicities.push_back(mult);
        const Rational rp = rs.pair_coroot(rs.rho(), r);
        for (int m = 0; m < mult; ++m) norm *= rp;
    }
    dh.normalization = 1 / norm;
    return dh;
}

geom::VPolytope wonderful_moment_polytope(const RootSystem& rs)
{
    const int n = rs.rank();
    const RatVec bound = rs.two_rho_root_coords();
    std::vector<geom::AffineForm> forms;
    const RatMat at = rs.cartan_matrix().transpose();
    for (int i = 0; i < n; ++i) forms.push_back(geom::AffineForm{RatVec(at.row(i).transpose()), 0});
    for (int i = 0; i < n; ++i) {
        RatVec e = RatVec::Zero(n);
        e(i) = -1;
        forms.push_back(geom::AffineForm{e, bound(i) + 1});
    }
    return geom::vertex_enum(geom::HPolytope(n, forms));
}

geom::VPolytope wonderful_moment_polytope_from_orbit(const RootSystem& rs)
{
    const int n = rs.rank();
    RatVec top = rs.root_to_weight(rs.two_rho_root_coords());
    for (int i = 0; i < n; ++i) top += rs.simple_root(i);
    const geom::VPolytope q(weyl_orbit(rs, top));
    auto forms = geom::hrep_of(q).forms();
    for (int i = 0; i < n; ++i) forms.push_back(geom::AffineForm{rs.fundamental_weight(i), 0});
    const geom::HPolytope cut(n, forms);
    std::vector<RatVec> verts;
    for (const auto& v : cut.vertices()) verts.push_back(rs.weight_to_root(v));
    return geom::VPolytope(verts);
}

}  // namespace kstab::rootsys
