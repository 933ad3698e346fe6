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

#include "kstab/spherical.hpp"

#include <random>
#include <string>
#include <vector>

// Worked examples as raw spherical data.
namespace kstab::fixtures {

using spherical::SphericalData;

/// Wonderful compactification of PGL2 (the projective space P^3), anticanonical.
SphericalData pgl2();

/// Wonderful compactification of an adjoint group of the given type
/// ("A1", "A2", "B2", "G2", ...), anticanonical, in root-lattice coordinates.
SphericalData wonderful(const std::string& type);

/// P^1 as a toric variety, anticanonical.
SphericalData toric_p1();
/// Blow-up of P^2 at one torus-fixed point, anticanonical.
SphericalData toric_bl1p2();
/// P^1 x P^1, anticanonical.
SphericalData toric_p1xp1();

/// pgl2() with the density reflected: P(x) = (2 - 2x)^2.
SphericalData pgl2_reflected();
/// Δ = [1, 2], P ≡ 1, valuation cone generated by 1.
SphericalData synthetic_interval();

/// Names accepted by builtin().
const std::vector<std::string>& builtin_names();
/// Throws Error{InvalidInput} for unknown names.
SphericalData builtin(const std::string& name);

/// Random anticanonical input of rank 1 or 2: simplicial valuation cone,
/// optional subdivision, random colors and a random positive density.
SphericalData random_synthetic(std::mt19937_64& rng);

}  // namespace kstab::fixtures
