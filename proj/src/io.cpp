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

#include "kstab/io.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace kstab::io {

using spherical::ColoredConeData;
using spherical::DivisorRecord;
using spherical::RootBlock;
using spherical::SphericalData;

namespace {

Error invalid(const std::string& what, const std::string& path)
{
    return Error(ErrorCode::InvalidInput, what, path);
}

std::string at(const std::string& path, std::size_t i)
{
    return path + "/" + std::to_string(i);
}

std::string at(const std::string& path, const std::string& key)
{
    std::string k;
    for (char c : key) {
        if (c == '~') k += "~0";
        else if (c == '/') k += "~1";
        else k += c;
    }
    return path + "/" + k;
}

void only(const Json& obj, const std::string& path, std::initializer_list<const char*> keys)
{
    if (!obj.is_object()) throw invalid("expected an object", path);
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw invalid("unknown field '" + k + "'", at(path, k));
}

const Json& need(const Json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw invalid(std::string("missing field '") + key + "'", at(path, key));
    return *it;
}

const Json* maybe(const Json& obj, const char* key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string read_string(const Json& j, const std::string& path)
{
    if (!j.is_string()) throw invalid("expected a string", path);
    return j.get<std::string>();
}

bool read_bool(const Json& j, const std::string& path)
{
    if (!j.is_boolean()) throw invalid("expected a boolean", path);
    return j.get<bool>();
}

long long read_int(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) throw invalid("expected an integer", path);
    return j.get<long long>();
}

double read_double(const Json& j, const std::string& path)
{
    if (!j.is_number()) throw invalid("expected a number", path);
    return j.get<double>();
}

Rational read_rational(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (!j.is_string()) throw invalid("expected a rational string \"p/q\"", path);
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        throw invalid(e.what(), path);
    }
}

RatVec read_vector(const Json& j, const std::string& path, std::optional<Eigen::Index> size = std::nullopt)
{
    if (!j.is_array()) throw invalid("expected an array of rationals", path);
    if (size && static_cast<Eigen::Index>(j.size()) != *size)
        throw invalid("expected " + std::to_string(*size) + " entries", path);
    RatVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_rational(j[i], at(path, i));
    return v;
}

std::vector<RatVec> read_vectors(const Json& j, const std::string& path, Eigen::Index size)
{
    if (!j.is_array()) throw invalid("expected an array of vectors", path);
    std::vector<RatVec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vector(j[i], at(path, i), size));
    return out;
}

RatMat read_matrix(const Json& j, const std::string& path, std::optional<Eigen::Index> cols = std::nullopt)
{
    if (!j.is_array() || j.empty()) throw invalid("expected a nonempty array of rows", path);
    const Eigen::Index c = cols ? *cols : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
    RatMat m(static_cast<Eigen::Index>(j.size()), c);
    for (std::size_t i = 0; i < j.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = read_vector(j[i], at(path, i), c).transpose();
    return m;
}

std::vector<std::string> read_names(const Json& j, const std::string& path)
{
    if (!j.is_array()) throw invalid("expected an array of names", path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_string(j[i], at(path, i)));
    return out;
}

std::vector<DivisorRecord> read_divisors(const Json& j, const std::string& path, Eigen::Index rank)
{
    if (!j.is_array()) throw invalid("expected an array of divisors", path);
    std::vector<DivisorRecord> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = at(path, i);
        only(j[i], p, {"name", "rho", "coeff", "is_color"});
        DivisorRecord d;
        d.name = read_string(need(j[i], p, "name"), at(p, "name"));
        d.rho = read_vector(need(j[i], p, "rho"), at(p, "rho"), rank);
        d.coeff = read_rational(need(j[i], p, "coeff"), at(p, "coeff"));
        if (const Json* c = maybe(j[i], "is_color")) d.is_color = read_bool(*c, at(p, "is_color"));
        out.push_back(std::move(d));
    }
    return out;
}

quad::DHDensity read_dh(const Json& j, const std::string& path, Eigen::Index rank)
{
    only(j, path, {"factors", "multiplicities", "normalization"});
    quad::DHDensity dh;
    dh.dim = rank;
    const Json& f = need(j, path, "factors");
    if (!f.is_array()) throw invalid("expected an array of affine forms", at(path, "factors"));
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string p = at(at(path, "factors"), i);
        only(f[i], p, {"normal", "offset"});
        dh.factors.push_back(geom::AffineForm{read_vector(need(f[i], p, "normal"), at(p, "normal"), rank),
                                              read_rational(need(f[i], p, "offset"), at(p, "offset"))});
    }
    const Json& m = need(j, path, "multiplicities");
    const std::string mp = at(path, "multiplicities");
    if (!m.is_array() || m.size() != f.size()) throw invalid("expected one multiplicity per factor", mp);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const long long k = read_int(m[i], at(mp, i));
        if (k < 1 || k > 64) throw invalid("multiplicity must be in [1, 64]", at(mp, i));
        dh.multiplicities.push_back(static_cast<int>(k));
    }
    if (const Json* n = maybe(j, "normalization")) {
        dh.normalization = read_rational(*n, at(path, "normalization"));
        if (dh.normalization <= 0) throw invalid("normalization must be positive", at(path, "normalization"));
    }
    return dh;
}

RootBlock read_root_block(const Json& j, const std::string& path, Eigen::Index rank)
{
    only(j, path, {"type", "rank", "active_roots", "chi", "embed", "squared"});
    RootBlock rb;
    const std::string type = read_string(need(j, path, "type"), at(path, "type"));
    const long long r = read_int(need(j, path, "rank"), at(path, "rank"));
    if (type.size() != 1 || r < 1 || r > 99) throw invalid("expected a type letter and a rank", at(path, "type"));
    rb.type = type + std::to_string(r);
    try {
        (void)rootsys::RootSystem::parse(rb.type);
    } catch (const Error& e) {
        throw invalid(e.what(), at(path, "type"));
    }
    const Json& act = need(j, path, "active_roots");
    const std::string ap = at(path, "active_roots");
    if (!act.is_array()) throw invalid("expected an array of root indices", ap);
    for (std::size_t i = 0; i < act.size(); ++i) {
        const long long k = read_int(act[i], at(ap, i));
        if (k < 0) throw invalid("root index must be nonnegative", at(ap, i));
        rb.active_roots.push_back(static_cast<std::size_t>(k));
    }
    rb.chi = read_vector(need(j, path, "chi"), at(path, "chi"), r);
    rb.embed = read_matrix(need(j, path, "embed"), at(path, "embed"), rank);
    rb.squared = read_bool(need(j, path, "squared"), at(path, "squared"));
    return rb;
}

quad::WeightFn read_weight(const Json& j, const std::string& path)
{
    if (!j.is_object()) throw invalid("expected an object", path);
    const std::string kind = read_string(need(j, path, "kind"), at(path, "kind"));
    if (kind == "constant") {
        only(j, path, {"kind", "value"});
        const Rational c = read_rational(need(j, path, "value"), at(path, "value"));
        if (c <= 0) throw invalid("constant weight must be positive", at(path, "value"));
        return quad::WeightFn::constant(c);
    }
    if (kind == "affine_power") {
        only(j, path, {"kind", "xi", "a", "exponent"});
        const double e = read_double(need(j, path, "exponent"), at(path, "exponent"));
        if (!std::isfinite(e)) throw invalid("exponent must be finite", at(path, "exponent"));
        return quad::WeightFn::affine_power(read_vector(need(j, path, "xi"), at(path, "xi")),
                                            read_rational(need(j, path, "a"), at(path, "a")), e);
    }
    if (kind == "polynomial") {
        only(j, path, {"kind", "dim", "terms"});
        const long long dim = read_int(need(j, path, "dim"), at(path, "dim"));
        if (dim < 0 || dim > 8) throw invalid("dimension out of range", at(path, "dim"));
        RatPoly poly(static_cast<Eigen::Index>(dim));
        const Json& terms = need(j, path, "terms");
        const std::string tp = at(path, "terms");
        if (!terms.is_array()) throw invalid("expected an array of terms", tp);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string p = at(tp, i);
            only(terms[i], p, {"exponent", "coeff"});
            const Json& e = need(terms[i], p, "exponent");
            if (!e.is_array() || static_cast<long long>(e.size()) != dim)
                throw invalid("exponent length must equal dim", at(p, "exponent"));
            RatPoly::Exponent ex;
            for (std::size_t k = 0; k < e.size(); ++k) {
                const long long v = read_int(e[k], at(at(p, "exponent"), k));
                if (v < 0 || v > 64) throw invalid("exponent entries must be in [0, 64]", at(at(p, "exponent"), k));
                ex.push_back(static_cast<int>(v));
            }
            poly.add_term(ex, read_rational(need(terms[i], p, "coeff"), at(p, "coeff")));
        }
        return quad::WeightFn::polynomial(std::move(poly));
    }
    throw invalid("unknown weight kind '" + kind + "'", at(path, "kind"));
}

Json matrix_json(const RatMat& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(RatVec(m.row(i).transpose())));
    return rows;
}

Json vectors_json(const std::vector<RatVec>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs) out.push_back(to_json(v));
    return out;
}

Json divisors_json(const std::vector<DivisorRecord>& ds)
{
    Json out = Json::array();
    for (const auto& d : ds) {
        Json j;
        j["name"] = d.name;
        j["rho"] = to_json(d.rho);
        j["coeff"] = to_json(d.coeff);
        j["is_color"] = d.is_color;
        out.push_back(std::move(j));
    }
    return out;
}

Json exponent_json(double e)
{
    if (std::nearbyint(e) == e && std::abs(e) < 1e15) return Json(static_cast<long long>(e));
    return Json(e);
}

Json weight_json(const quad::WeightFn& g)
{
    Json j;
    const auto& v = g.variant();
    if (const auto* c = std::get_if<quad::WeightFn::Constant>(&v)) {
        j["kind"] = "constant";
        j["value"] = to_json(c->value);
    } else if (const auto* ap = std::get_if<quad::WeightFn::AffinePower>(&v)) {
        j["kind"] = "affine_power";
        j["xi"] = to_json(ap->xi);
        j["a"] = to_json(ap->a);
        j["exponent"] = exponent_json(ap->exponent);
    } else {
        const auto& p = std::get<quad::WeightFn::Poly>(v).poly;
        j["kind"] = "polynomial";
        j["dim"] = p.dim();
        Json terms = Json::array();
        for (const auto& [e, c] : p.terms()) {
            Json t;
            t["exponent"] = e;
            t["coeff"] = to_json(c);
            terms.push_back(std::move(t));
        }
        j["terms"] = std::move(terms);
    }
    return j;
}

Json ray_rows(const invariants::InvariantReport& r)
{
    Json rows = Json::array();
    for (const auto& row : r.table) {
        Json j;
        j["ray"] = to_json(row.ray);
        j["A"] = to_json(row.A);
        j["S"] = to_json(row.S);
        j["T"] = to_json(row.T);
        j["ratio_delta"] = to_json(row.ratio_delta);
        j["ratio_alpha"] = row.ratio_alpha ? to_json(Number::from_exact(*row.ratio_alpha))
                                           : to_json(Number::approx(std::numeric_limits<double>::infinity(), 0));
        j["anomaly"] = row.anomaly;
        rows.push_back(std::move(j));
    }
    return rows;
}

}  // namespace

InputDocument parse_input(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid(std::string("malformed JSON: ") + e.what(), "");
    }
    only(doc, "", {"schema_version", "variety", "root_system", "weight_fn"});
    const std::string version = read_string(need(doc, "", "schema_version"), "/schema_version");
    if (version != kSchemaVersion) throw invalid("unsupported schema_version '" + version + "'", "/schema_version");

    const Json& v = need(doc, "", "variety");
    const std::string vp = "/variety";
    only(v, vp, {"name", "rank", "dim_X", "divisors", "anticanonical_divisors", "fan", "valuation_cone", "complete",
                 "projection", "dh"});
    InputDocument out;
    SphericalData& d = out.variety;
    d.name = read_string(need(v, vp, "name"), at(vp, "name"));
    const long long rank = read_int(need(v, vp, "rank"), at(vp, "rank"));
    if (rank < 1 || rank > 8) throw invalid("rank must be in [1, 8]", at(vp, "rank"));
    d.rank = static_cast<Eigen::Index>(rank);
    const long long dim_x = read_int(need(v, vp, "dim_X"), at(vp, "dim_X"));
    if (dim_x < 1 || dim_x > 1000) throw invalid("dim_X must be a positive integer", at(vp, "dim_X"));
    d.dim_X = static_cast<int>(dim_x);
    d.divisors = read_divisors(need(v, vp, "divisors"), at(vp, "divisors"), d.rank);
    if (const Json* a = maybe(v, "anticanonical_divisors"))
        d.anticanonical_divisors = read_divisors(*a, at(vp, "anticanonical_divisors"), d.rank);

    const Json& fan = need(v, vp, "fan");
    const std::string fp = at(vp, "fan");
    if (!fan.is_array()) throw invalid("expected an array of colored cones", fp);
    for (std::size_t i = 0; i < fan.size(); ++i) {
        const std::string p = at(fp, i);
        only(fan[i], p, {"generators", "divisors", "colors"});
        ColoredConeData c;
        c.generators = read_vectors(need(fan[i], p, "generators"), at(p, "generators"), d.rank);
        if (const Json* n = maybe(fan[i], "divisors")) c.divisors = read_names(*n, at(p, "divisors"));
        if (const Json* n = maybe(fan[i], "colors")) c.colors = read_names(*n, at(p, "colors"));
        d.fan.push_back(std::move(c));
    }
    d.valuation_cone = read_vectors(need(v, vp, "valuation_cone"), at(vp, "valuation_cone"), d.rank);
    if (const Json* c = maybe(v, "complete")) d.complete = read_bool(*c, at(vp, "complete"));
    if (const Json* p = maybe(v, "projection")) d.projection = read_matrix(*p, at(vp, "projection"), d.rank);
    if (const Json* h = maybe(v, "dh")) d.dh = read_dh(*h, at(vp, "dh"), d.rank);
    if (const Json* r = maybe(doc, "root_system")) d.root_system = read_root_block(*r, "/root_system", d.rank);
    if (const Json* w = maybe(doc, "weight_fn")) out.weight = read_weight(*w, "/weight_fn");
    return out;
}

Json to_json(const InputDocument& doc)
{
    const SphericalData& d = doc.variety;
    Json v;
    v["name"] = d.name;
    v["rank"] = d.rank;
    v["dim_X"] = d.dim_X;
    v["divisors"] = divisors_json(d.divisors);
    if (!d.anticanonical_divisors.empty()) v["anticanonical_divisors"] = divisors_json(d.anticanonical_divisors);
    Json fan = Json::array();
    for (const auto& c : d.fan) {
        Json j;
        j["generators"] = vectors_json(c.generators);
        j["divisors"] = c.divisors;
        j["colors"] = c.colors;
        fan.push_back(std::move(j));
    }
    v["fan"] = std::move(fan);
    v["valuation_cone"] = vectors_json(d.valuation_cone);
    v["complete"] = d.complete;
    if (d.projection) v["projection"] = matrix_json(*d.projection);
    if (d.dh) {
        Json dh;
        Json factors = Json::array();
        for (const auto& f : d.dh->factors) {
            Json j;
            j["normal"] = to_json(f.normal);
            j["offset"] = to_json(f.offset);
            factors.push_back(std::move(j));
        }
        dh["factors"] = std::move(factors);
        dh["multiplicities"] = d.dh->multiplicities;
        dh["normalization"] = to_json(d.dh->normalization);
        v["dh"] = std::move(dh);
    }

    Json out;
    out["schema_version"] = std::string(kSchemaVersion);
    out["variety"] = std::move(v);
    if (d.root_system) {
        const auto& rb = *d.root_system;
        const auto rs = rootsys::RootSystem::parse(rb.type);
        Json r;
        r["type"] = rs.name().substr(0, 1);
        r["rank"] = rs.rank();
        r["active_roots"] = rb.active_roots;
        r["chi"] = to_json(rb.chi);
        r["embed"] = matrix_json(rb.embed);
        r["squared"] = rb.squared;
        out["root_system"] = std::move(r);
    }
    if (doc.weight) out["weight_fn"] = weight_json(*doc.weight);
    return out;
}

std::string emit_input(const InputDocument& doc)
{
    return to_json(doc).dump(2) + "\n";
}

std::string fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

quad::WeightFn parse_weight(std::string_view spec)
{
    const std::string s(spec);
    auto fail = [&] { return invalid("malformed weight spec '" + s + "'", "--g"); };
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw fail();
    const std::string kind = s.substr(0, colon);
    const std::string body = s.substr(colon + 1);
    try {
        if (kind == "const") {
            const Rational c = parse_rational(body);
            if (c <= 0) throw fail();
            return quad::WeightFn::constant(c);
        }
        if (kind == "affine") {
            std::vector<std::string> parts;
            std::stringstream ss(body);
            for (std::string item; std::getline(ss, item, ';');) parts.push_back(item);
            if (parts.size() != 3) throw fail();
            std::vector<Rational> xi;
            std::stringstream xs(parts[0]);
            for (std::string item; std::getline(xs, item, ',');) xi.push_back(parse_rational(item));
            if (xi.empty()) throw fail();
            RatVec v(static_cast<Eigen::Index>(xi.size()));
            for (std::size_t i = 0; i < xi.size(); ++i) v(static_cast<Eigen::Index>(i)) = xi[i];
            double e = 0;
            if (parts[2].find_first_of(".eE") == std::string::npos) {
                e = to_double(parse_rational(parts[2]));
            } else {
                std::size_t used = 0;
                e = std::stod(parts[2], &used);
                if (used != parts[2].size()) throw fail();
            }
            if (!std::isfinite(e)) throw fail();
            return quad::WeightFn::affine_power(v, parse_rational(parts[1]), e);
        }
    } catch (const Error&) {
        throw fail();
    } catch (const std::logic_error&) {
        throw fail();
    }
    throw fail();
}

Json to_json(const Rational& q)
{
    return kstab::to_string(q);
}

Json to_json(const RatVec& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(kstab::to_string(v(i)));
    return out;
}

Json to_json(const Number& x)
{
    Json j;
    if (x.is_exact()) {
        j["exact"] = true;
        j["value"] = kstab::to_string(*x.exact);
        j["decimal"] = to_double(*x.exact);
    } else if (std::isinf(x.value)) {
        j["exact"] = false;
        j["infinite"] = true;
    } else {
        j["exact"] = false;
        j["decimal"] = x.value;
        j["error_bound"] = x.error;
    }
    return j;
}

Json to_json(const NumVec& x)
{
    Json j;
    j["exact"] = x.is_exact();
    if (x.is_exact()) j["value"] = to_json(*x.exact);
    Json dec = Json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) dec.push_back(x.value(i));
    j["decimal"] = std::move(dec);
    if (!x.is_exact()) {
        Json err = Json::array();
        for (Eigen::Index i = 0; i < x.size(); ++i) err.push_back(x.error(i));
        j["error_bound"] = std::move(err);
    }
    return j;
}

Json report(const invariants::InvariantReport& r)
{
    Json j;
    switch (r.kind) {
        case invariants::Invariant::Delta:
            j["invariant"] = "delta";
            j["p"] = r.p;
            break;
        case invariants::Invariant::Alpha: j["invariant"] = "alpha"; break;
        case invariants::Invariant::DeltaG: j["invariant"] = "delta_g"; break;
    }
    j["value"] = to_json(r.value);
    j["minimizers"] = vectors_json(r.minimizers);
    if (r.barycenter) j["barycenter"] = to_json(*r.barycenter);
    j["anomalies"] = r.anomalies;
    j["table"] = ray_rows(r);
    return j;
}

Json report(const invariants::DingVerdict& d)
{
    Json j;
    j["status"] = std::string(invariants::to_string(d.status));
    if (d.status == invariants::DingStatus::Indeterminate) {
        j["semistable"] = nullptr;
        j["polystable"] = nullptr;
    } else {
        j["semistable"] = d.semistable();
        j["polystable"] = d.polystable();
    }
    j["barycenter"] = to_json(d.barycenter);
    Json cone;
    cone["rays"] = vectors_json(d.dual_cone.rays());
    cone["lineality"] = vectors_json(d.dual_cone.lineality());
    cone["facets"] = vectors_json(d.dual_cone.facets());
    cone["equations"] = vectors_json(d.dual_cone.equations());
    j["dual_cone"] = std::move(cone);
    if (d.witness) {
        Json w;
        w["normal"] = to_json(*d.witness);
        w["value"] = to_json(*d.witness_value);
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json report(const soliton::ReebSolution& s)
{
    Json j;
    Json xi;
    xi["exact"] = false;
    Json dec = Json::array(), err = Json::array();
    for (Eigen::Index i = 0; i < s.xi.size(); ++i) {
        dec.push_back(s.xi(i));
        err.push_back(s.xi_error_bound);
    }
    xi["decimal"] = std::move(dec);
    xi["error_bound"] = std::move(err);
    j["xi"] = std::move(xi);
    j["functional_value"] = s.functional_value;
    j["gradient_norm"] = s.gradient_norm;
    j["hessian_min_eigval"] = s.hessian_min_eigval;
    j["iterations"] = s.iterations;
    j["converged"] = s.converged;
    Json trace = Json::array();
    for (const auto& t : s.trace) {
        Json r;
        r["iteration"] = t.iteration;
        r["value"] = t.value;
        r["gradient_norm"] = t.gradient_norm;
        r["hessian_min_eigval"] = t.hessian_min_eigval;
        r["step"] = t.step;
        r["quad_tol"] = t.quad_tol;
        trace.push_back(std::move(r));
    }
    j["trace"] = std::move(trace);
    return j;
}

Json report_barycenter(const NumVec& bar, const quad::WeightFn& g)
{
    Json j;
    j["invariant"] = "barycenter";
    j["weight"] = g.describe();
    j["barycenter"] = to_json(bar);
    return j;
}

Json report_beta(const std::vector<RatVec>& rays, const std::vector<invariants::BetaValue>& values,
                 const quad::WeightFn& g)
{
    Json j;
    j["invariant"] = "beta";
    j["weight"] = g.describe();
    Json rows = Json::array();
    for (std::size_t i = 0; i < rays.size(); ++i) {
        Json r;
        r["ray"] = to_json(rays[i]);
        r["value"] = to_json(values[i].value);
        r["by_integration"] = to_json(values[i].by_integration);
        r["by_barycenter"] = to_json(values[i].by_barycenter);
        rows.push_back(std::move(r));
    }
    j["table"] = std::move(rows);
    return j;
}

namespace {

bool is_number_object(const Json& v)
{
    return v.is_object() && v.contains("exact");
}

std::string scalar_text(const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + scalar_text(v[i]);
        return out;
    }
    return v.dump();
}

/// Flattens a JSON value into (column, text) cells; exact/numeric objects
/// become a value column and an error column.
void flatten(const Json& v, const std::string& key, std::vector<std::pair<std::string, std::string>>& out)
{
    if (is_number_object(v)) {
        if (v.value("infinite", false)) {
            out.emplace_back(key, "inf");
            out.emplace_back(key + "_error", "0");
        } else if (v["exact"].get<bool>()) {
            out.emplace_back(key, scalar_text(v["value"]));
            out.emplace_back(key + "_error", "0");
        } else {
            out.emplace_back(key, scalar_text(v["decimal"]));
            out.emplace_back(key + "_error", scalar_text(v["error_bound"]));
        }
        return;
    }
    if (v.is_object()) {
        for (const auto& [k, sub] : v.items()) flatten(sub, key.empty() ? k : key + "." + k, out);
        return;
    }
    if (v.is_array() && !v.empty() && v[0].is_object()) {
        out.emplace_back(key, std::to_string(v.size()) + " rows");
        return;
    }
    out.emplace_back(key, scalar_text(v));
}

std::string csv_cell(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

const Json* main_table(const Json& doc)
{
    for (const char* key : {"table", "trace"}) {
        auto it = doc.find(key);
        if (it != doc.end() && it->is_array()) return &*it;
    }
    return nullptr;
}

std::vector<std::vector<std::pair<std::string, std::string>>> table_rows(const Json& table)
{
    std::vector<std::vector<std::pair<std::string, std::string>>> rows;
    for (const auto& r : table) {
        rows.emplace_back();
        flatten(r, "", rows.back());
    }
    return rows;
}

}  // namespace

std::string render(const Json& doc, Format format)
{
    if (format == Format::Json) return doc.dump(2) + "\n";

    const Json* table = main_table(doc);
    if (format == Format::Csv) {
        std::ostringstream os;
        if (table && !table->empty()) {
            const auto rows = table_rows(*table);
            for (std::size_t c = 0; c < rows[0].size(); ++c) os << (c ? "," : "") << csv_cell(rows[0][c].first);
            os << "\r\n";
            for (const auto& r : rows) {
                for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_cell(r[c].second);
                os << "\r\n";
            }
        } else {
            std::vector<std::pair<std::string, std::string>> cells;
            flatten(doc, "", cells);
            os << "field,value\r\n";
            for (const auto& [k, v] : cells) os << csv_cell(k) << "," << csv_cell(v) << "\r\n";
        }
        return os.str();
    }

    std::ostringstream os;
    std::vector<std::pair<std::string, std::string>> cells;
    for (const auto& [k, v] : doc.items()) {
        if (table && &v == table) continue;
        flatten(v, k, cells);
    }
    std::size_t width = 0;
    for (const auto& c : cells) width = std::max(width, c.first.size());
    for (const auto& [k, v] : cells) {
        std::string line = k;
        line.resize(width, ' ');
        line += "  " + v;
        os << line.substr(0, line.find_last_not_of(' ') + 1) << "\n";
    }
    if (table && !table->empty()) {
        const auto rows = table_rows(*table);
        std::vector<std::size_t> w(rows[0].size());
        for (std::size_t c = 0; c < w.size(); ++c) w[c] = rows[0][c].first.size();
        for (const auto& r : rows)
            for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].second.size());
        os << "\n";
        std::string head;
        for (std::size_t c = 0; c < w.size(); ++c) {
            std::string cell = rows[0][c].first;
            cell.resize(std::max(cell.size(), w[c]), ' ');
            head += (c ? "  " : "") + cell;
        }
        os << head.substr(0, head.find_last_not_of(' ') + 1) << "\n";
        for (const auto& r : rows) {
            std::string line;
            for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) {
                std::string cell = r[c].second;
                cell.resize(std::max(cell.size(), w[c]), ' ');
                line += (c ? "  " : "") + cell;
            }
            os << line.substr(0, line.find_last_not_of(' ') + 1) << "\n";
        }
    }
    return os.str();
}

int exit_code(ErrorCode code)
{
    switch (code) {
        case ErrorCode::InvalidInput:
        case ErrorCode::Unbounded:
        case ErrorCode::Empty:
        case ErrorCode::DegenerateInput:
        case ErrorCode::EmptyCandidateSet:
        case ErrorCode::ZeroFactor:
        case ErrorCode::OutsideSupport: return 2;
        case ErrorCode::NotHorospherical:
        case ErrorCode::TooManyPoints:
        case ErrorCode::OrbitTooLarge: return 4;
        default: return 3;
    }
}

}  // namespace kstab::io
