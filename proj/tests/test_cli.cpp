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

#include "doctest.h"

#include "kstab/fixtures.hpp"
#include "kstab/io.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kstab;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

fs::path work_dir()
{
    static const fs::path dir = [] {
        fs::path d = fs::path(KSTAB_TEST_DIR) / "cli_work";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    f << text;
}

Run run(const std::string& args, const std::string& env = {})
{
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + KSTAB_CLI + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    return Run{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

fs::path fixture_file(const std::string& name)
{
    const fs::path p = work_dir() / (name + ".json");
    const Run r = run("builtin " + name);
    REQUIRE(r.status == 0);
    spit(p, r.out);
    return p;
}

fs::path document_file(const std::string& name, const spherical::SphericalData& d)
{
    const fs::path p = work_dir() / (name + ".json");
    spit(p, io::emit_input(io::InputDocument{d, std::nullopt}));
    return p;
}

Json json_of(const Run& r)
{
    REQUIRE_MESSAGE(r.status == 0, r.err);
    return Json::parse(r.out);
}

std::string input(const fs::path& p)
{
    return "--input \"" + p.string() + "\"";
}

}  // namespace

TEST_CASE("compute delta and alpha on the PGL2 fixture")
{
    const auto pgl2 = fixture_file("pgl2");
    const Json d = json_of(run("compute " + input(pgl2) + " --invariant delta --p 1"));
    CHECK(d["schema_version"] == "1");
    CHECK(d["invariant"] == "delta");
    CHECK(d["value"]["exact"] == true);
    CHECK(d["value"]["value"] == "2/1");
    CHECK(d["minimizers"] == Json::parse(R"([["-1/1"]])"));
    CHECK(d["table"].size() == 1);
    CHECK_FALSE(d.contains("timing"));

    const Json a = json_of(run("compute " + input(pgl2) + " --invariant alpha"));
    CHECK(a["value"]["value"] == "1/2");

    const Json d2 = json_of(run("compute " + input(pgl2) + " --invariant delta --p 2"));
    CHECK(d2["value"]["exact"] == false);
    CHECK(d2["value"]["decimal"].get<double>() == doctest::Approx(std::sqrt(10.0) / 2).epsilon(1e-12));
    CHECK(d2["value"]["error_bound"].get<double>() <= 1e-12);

    const Json t = json_of(run("compute " + input(pgl2) + " --invariant alpha --timing"));
    CHECK(t["timing"]["seconds"].get<double>() >= 0);
}

TEST_CASE("compute barycenter and beta")
{
    const auto pgl2 = fixture_file("pgl2");
    const Json b = json_of(run("compute " + input(pgl2) + " --invariant barycenter"));
    CHECK(b["barycenter"]["value"] == Json::parse(R"(["1/2"])"));
    const Json beta = json_of(run("compute " + input(pgl2) + " --invariant beta --ray -1"));
    CHECK(beta["table"][0]["value"]["value"] == "1/2");
    const Json w = json_of(run("compute " + input(pgl2) + " --invariant barycenter --g \"affine:1;2;1/2\""));
    CHECK(w["barycenter"]["exact"] == false);
    CHECK(w["barycenter"]["error_bound"][0].get<double>() > 0);
}

TEST_CASE("exit codes")
{
    CHECK(run("compute --input \"" + (work_dir() / "missing.json").string() + "\" --invariant alpha").status == 1);
    CHECK(run("builtin no-such-fixture").status == 2);
    CHECK(run("reeb " + input(fixture_file("pgl2"))).status == 4);
    CHECK(run("compute " + input(document_file("synthetic", fixtures::synthetic_interval())) +
              " --invariant delta --p 1")
              .status == 3);
    CHECK(run("compute " + input(fixture_file("pgl2")) + " --invariant alpha --ray 1,2,3").status == 0);
    CHECK(run("compute " + input(fixture_file("toric-p1")) + " --invariant beta --ray 1,2").status == 2);
    CHECK(run("frobnicate").status == 2);

    Json doc = Json::parse(slurp(fixture_file("pgl2")));
    doc["variety"]["divisors"][1]["colour"] = true;
    const fs::path bad = work_dir() / "bad.json";
    spit(bad, doc.dump());
    const Run r = run("compute " + input(bad) + " --invariant alpha");
    CHECK(r.status == 2);
    CHECK(r.err.find("/variety/divisors/1/colour") != std::string::npos);

    doc = Json::parse(slurp(fixture_file("pgl2")));
    doc["variety"]["divisors"][0]["coeff"] = "1/0";
    spit(bad, doc.dump());
    const Run z = run("compute " + input(bad) + " --invariant alpha");
    CHECK(z.status == 2);
    CHECK(z.err.find("/variety/divisors/0/coeff") != std::string::npos);

    spit(bad, "{\"schema_version\": \"1\",");
    CHECK(run("compute " + input(bad) + " --invariant alpha").status == 2);
}

TEST_CASE("check verdicts")
{
    CHECK(json_of(run("check " + input(fixture_file("pgl2"))))["status"] == "polystable");
    CHECK(json_of(run("check " + input(fixture_file("toric-p1"))))["status"] == "polystable");
    const Json bl = json_of(run("check " + input(fixture_file("toric-bl1p2"))));
    CHECK(bl["status"] == "unstable");
    CHECK(bl["semistable"] == false);

    const Json r = json_of(run("check " + input(document_file("reflected", fixtures::pgl2_reflected()))));
    CHECK(r["status"] == "unstable");
    CHECK(r["barycenter"]["value"] == Json::parse(R"(["-1/2"])"));
    CHECK(r["witness"]["normal"] == Json::parse(R"(["1/1"])"));
}

TEST_CASE("reeb on symmetric fixtures")
{
    const Json p1 = json_of(run("reeb " + input(fixture_file("toric-p1"))));
    CHECK(p1["converged"] == true);
    CHECK(p1["xi"]["exact"] == false);
    CHECK(std::abs(p1["xi"]["decimal"][0].get<double>()) <= 1e-12);
    CHECK(p1["gradient_norm"].get<double>() <= 1e-10);

    const Json sq = json_of(run("reeb " + input(document_file("p1xp1", fixtures::toric_p1xp1()))));
    CHECK(sq["xi"]["decimal"].size() == 2);
    CHECK(std::abs(sq["xi"]["decimal"][0].get<double>()) <= 1e-12);
    CHECK(std::abs(sq["xi"]["decimal"][1].get<double>()) <= 1e-12);

    const Json bl = json_of(run("reeb " + input(fixture_file("toric-bl1p2"))));
    CHECK(bl["converged"] == true);
    CHECK(std::abs(bl["xi"]["decimal"][0].get<double>()) > 1e-3);
}

TEST_CASE("builtin documents round-trip byte-identically")
{
    for (const auto& name : fixtures::builtin_names()) {
        CAPTURE(name);
        const Run r = run("builtin " + name);
        REQUIRE(r.status == 0);
        const io::InputDocument doc = io::parse_input(r.out);
        CHECK(io::emit_input(doc) == r.out);
        CHECK(io::emit_input(io::InputDocument{fixtures::builtin(name), std::nullopt}) == r.out);
        const spherical::SphericalInput in(doc.variety);
        CHECK(in.name() == name);
    }

    const spherical::SphericalInput pgl2(io::parse_input(run("builtin pgl2").out).variety);
    const auto& forms = pgl2.polytope().forms();
    REQUIRE(forms.size() == 2);
    CHECK(forms[0].normal == make_vec({-1}));
    CHECK(forms[0].offset == 1);
    CHECK(forms[1].normal == make_vec({2}));
    CHECK(forms[1].offset == 2);
    CHECK(pgl2.valuation_cone().rays() == std::vector<RatVec>{make_vec({-1})});
    const auto& dh = pgl2.dh();
    for (long x = -3; x <= 3; ++x) CHECK(dh(make_vec({x})) == 4 * Rational((x + 1) * (x + 1)));

    const io::InputDocument a2 = io::parse_input(run("builtin wonderful-a2").out);
    REQUIRE(a2.variety.root_system);
    CHECK(a2.variety.root_system->type == "A2");
    REQUIRE(a2.variety.fan.size() == 1);
    CHECK(a2.variety.fan[0].colors.empty());
    CHECK(a2.variety.valuation_cone == std::vector<RatVec>{make_vec({-1, 0}), make_vec({0, -1})});

    const io::InputDocument p1 = io::parse_input(run("builtin toric-p1").out);
    CHECK(p1.variety.rank == 1);
    CHECK_FALSE(p1.variety.root_system);
    CHECK_FALSE(p1.variety.dh);
}

TEST_CASE("weight documents round-trip")
{
    RatPoly poly(2);
    poly.add_term({1, 0}, Rational(1, 3));
    poly.add_term({0, 0}, 2);
    for (const auto& g : {quad::WeightFn::constant(Rational(3, 2)),
                          quad::WeightFn::affine_power(make_vec({1, -1}), 3, -2.5),
                          quad::WeightFn::affine_power(make_vec({1, 0}), 2, 4), quad::WeightFn::polynomial(poly)}) {
        CAPTURE(g.describe());
        const io::InputDocument doc{fixtures::toric_bl1p2(), g};
        const std::string text = io::emit_input(doc);
        const io::InputDocument back = io::parse_input(text);
        REQUIRE(back.weight);
        CHECK(back.weight->describe() == g.describe());
        CHECK(io::emit_input(back) == text);
    }
}

TEST_CASE("reports are deterministic across runs and thread counts")
{
    const auto a2 = fixture_file("wonderful-a2");
    const std::string args = "compute " + input(a2) + " --invariant delta --p 2.5";
    const Run first = run(args);
    REQUIRE(first.status == 0);
    CHECK(run(args).out == first.out);
    CHECK(run(args, "KSTAB_THREADS=4").out == first.out);
    CHECK(run(args, "KSTAB_THREADS=0").out == first.out);
    CHECK(run(args, "KSTAB_THREADS=many").status == 2);

    const fs::path out = work_dir() / "report.json";
    REQUIRE(run(args + " --out \"" + out.string() + "\"").status == 0);
    CHECK(slurp(out) == first.out);
}

TEST_CASE("csv and text formats")
{
    const auto bl = fixture_file("toric-bl1p2");
    const Run csv = run("compute " + input(bl) + " --invariant delta --p 1 --format csv");
    REQUIRE(csv.status == 0);
    CHECK(csv.out.rfind("ray,A,S,S_error,T,", 0) == 0);
    std::size_t lines = 0;
    for (std::size_t i = 0; (i = csv.out.find("\r\n", i)) != std::string::npos; i += 2) ++lines;
    CHECK(lines == 1 + json_of(run("compute " + input(bl) + " --invariant delta --p 1"))["table"].size());

    const Run check = run("check " + input(bl) + " --format csv");
    CHECK(check.out.rfind("field,value\r\n", 0) == 0);
    CHECK(check.out.find("status,unstable\r\n") != std::string::npos);

    const Run text = run("check " + input(bl) + " --format text");
    CHECK(text.out.find("status") != std::string::npos);
    CHECK(text.out.find("unstable") != std::string::npos);
    CHECK(text.out.find(" \n") == std::string::npos);
}
