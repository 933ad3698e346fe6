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

#include <vector>

/**
 * Exact rational convex geometry: polyhedral cones, bounded polytopes in
 * H- and V-representation, and triangulations. Every operation here is exact;
 * nothing in this namespace touches floating point.
 *
 * Cones and polytopes are immutable once constructed. Both representations
 * are computed eagerly by the double description method, which is more than
 * fast enough for the dimensions we care about (dim <= 8, a few dozen facets).
 */
namespace kstab::geom {

/// x ↦ ⟨normal, x⟩ + offset.
struct AffineForm {
    RatVec normal;
    Rational offset;

    Eigen::Index dim() const { return normal.size(); }
    Rational operator()(const RatVec& x) const { return normal.dot(x) + offset; }
    double eval(const VecX& x) const;

    /// The form y ↦ f(y - t).
    AffineForm translated(const RatVec& t) const;
};

/// Generators of a cone: extreme rays plus a basis of the lineality space.
struct ConeGenerators {
    std::vector<RatVec> rays;
    std::vector<RatVec> lineality;
};

/// Double description: generators of {x : ⟨a, x⟩ ≥ 0 ∀ a ∈ ineqs, ⟨e, x⟩ = 0 ∀ e ∈ eqs}.
/// Rays are primitive, orthogonal to the lineality space, and sorted.
ConeGenerators double_description(Eigen::Index dim, const std::vector<RatVec>& ineqs,
                                  const std::vector<RatVec>& eqs = {});

class Cone {
public:
    /// Conic hull of the generators (the zero cone when empty).
    Cone(Eigen::Index dim, const std::vector<RatVec>& generators);
    static Cone from_inequalities(Eigen::Index dim, const std::vector<RatVec>& ineqs,
                                  const std::vector<RatVec>& eqs = {});

    Eigen::Index dim() const { return dim_; }
    const std::vector<RatVec>& rays() const { return rays_; }
    const std::vector<RatVec>& lineality() const { return lineality_; }
    /// Irredundant facet normals f (⟨f, x⟩ ≥ 0 on the cone), modulo equations.
    const std::vector<RatVec>& facets() const { return facets_; }
    /// Basis of the orthogonal complement of span(cone).
    const std::vector<RatVec>& equations() const { return equations_; }

    /// Rays followed by ± lineality vectors; a generating set.
    std::vector<RatVec> generators() const;

    Eigen::Index span_dim() const;
    bool is_pointed() const { return lineality_.empty(); }
    bool is_zero() const { return rays_.empty() && lineality_.empty(); }
    bool is_full_space() const { return static_cast<Eigen::Index>(lineality_.size()) == dim_; }

    bool contains(const RatVec& x) const;
    bool in_relative_interior(const RatVec& x) const;
    /// Some point of the relative interior (sum of the rays).
    RatVec interior_point() const;

    Cone negated() const;

private:
    Cone() = default;

    Eigen::Index dim_ = 0;
    std::vector<RatVec> rays_;
    std::vector<RatVec> lineality_;
    std::vector<RatVec> facets_;
    std::vector<RatVec> equations_;
};

std::vector<RatVec> extremal_rays(const Cone& c);
Cone cone_dual(const Cone& c);
Cone intersect_cones(const Cone& a, const Cone& b);
bool in_relative_interior(const RatVec& x, const Cone& c);
/// Mutual containment of generators.
bool same_cone(const Cone& a, const Cone& b);

class VPolytope;

/// Bounded nonempty polytope {x : f(x) ≥ 0 for every form}.
class HPolytope {
public:
    /// Throws Error{Empty} or Error{Unbounded}.
    HPolytope(Eigen::Index dim, std::vector<AffineForm> forms);

    Eigen::Index dim() const { return dim_; }
    const std::vector<AffineForm>& forms() const { return forms_; }
    /// Extreme points in lexicographic order.
    const std::vector<RatVec>& vertices() const { return vertices_; }
    bool contains(const RatVec& x) const;

private:
    Eigen::Index dim_;
    std::vector<AffineForm> forms_;
    std::vector<RatVec> vertices_;
};

/// Convex hull of finitely many points; stores only the extreme points.
class VPolytope {
public:
    /// Throws Error{Empty} on an empty point list.
    explicit VPolytope(const std::vector<RatVec>& points);

    Eigen::Index dim() const { return dim_; }
    const std::vector<RatVec>& vertices() const { return vertices_; }
    /// Dimension of the affine hull.
    Eigen::Index affine_dim() const { return affine_dim_; }
    bool is_full_dimensional() const { return affine_dim_ == dim_; }
    RatVec vertex_centroid() const;

private:
    Eigen::Index dim_ = 0;
    Eigen::Index affine_dim_ = 0;
    std::vector<RatVec> vertices_;
};

VPolytope vertex_enum(const HPolytope& p);
/// Facet forms plus, for lower-dimensional input, each affine equation as a
/// pair of opposite forms.
HPolytope hrep_of(const VPolytope& v);

/// {ξ : ⟨v_i, ξ⟩ + 1 ≥ 0} with redundant forms removed. The result is
/// unbounded exactly when 0 is not an interior point of the input.
struct DualPolytope {
    std::vector<AffineForm> forms;
    bool bounded = false;

    /// Throws Error{Unbounded} when not bounded.
    HPolytope polytope() const;
};
DualPolytope dual_polytope(const VPolytope& v);

/// Simplex in its affine hull. `volume_factor` is |det| of the edge matrix
/// written in a Z-basis of the lattice of the affine hull's direction space,
/// so the lattice-normalized volume is volume_factor / k!.
struct Simplex {
    std::vector<RatVec> vertices;
    Rational volume_factor;

    Eigen::Index simplex_dim() const { return static_cast<Eigen::Index>(vertices.size()) - 1; }
    Rational volume() const;
};

/// Pulling triangulation from the lexicographically smallest vertex.
/// Lower-dimensional polytopes are triangulated inside their affine hull.
/// Throws Error{DegenerateInput} on a polytope with no vertices.
std::vector<Simplex> triangulate(const VPolytope& v);

/// Lattice-normalized volume in the affine hull.
Rational volume(const VPolytope& v);

}  // namespace kstab::geom
