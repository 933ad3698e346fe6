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

#include "kstab/invariants.hpp"
#include "kstab/soliton.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>

/**
 * JSON input documents and report rendering.
 *
 * Rationals travel as "p/q" strings; vectors as arrays of rationals and
 * matrices as arrays of rows. Field order is fixed, so emitting the same
 * document twice gives identical bytes. Unknown fields are rejected with
 * Error{InvalidInput} carrying the JSON pointer of the field.
 */
namespace kstab::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1";

struct InputDocument {
    spherical::SphericalData variety;
    std::optional<quad::WeightFn> weight;
};

InputDocument parse_input(std::string_view text);
Json to_json(const InputDocument& doc);
/// Two-space indented JSON with a trailing newline.
std::string emit_input(const InputDocument& doc);

/// FNV-1a 64-bit hash as 16 lowercase hex digits.
std::string fnv1a64(std::string_view bytes);

/// Weight specs: "const:<q>" or "affine:<xi_1>,...,<xi_n>;<a>;<exponent>".
quad::WeightFn parse_weight(std::string_view spec);

Json to_json(const Rational& q);
Json to_json(const RatVec& v);
Json to_json(const Number& x);
Json to_json(const NumVec& x);

/// Report bodies; the caller adds the envelope (schema, hash, timing).
Json report(const invariants::InvariantReport& r);
Json report(const invariants::DingVerdict& d);
Json report(const soliton::ReebSolution& s);
Json report_barycenter(const NumVec& bar, const quad::WeightFn& g);
Json report_beta(const std::vector<RatVec>& rays, const std::vector<invariants::BetaValue>& values,
                 const quad::WeightFn& g);

enum class Format { Json, Csv, Text };

/// Renders a full report document. CSV follows RFC 4180 (CRLF line ends,
/// quoting where needed) and carries the main table of the report.
std::string render(const Json& doc, Format format);

/// Process exit code for an error: 2 validation, 3 mathematical
/// precondition, 4 scope refusal.
int exit_code(ErrorCode code);

}  // namespace kstab::io
