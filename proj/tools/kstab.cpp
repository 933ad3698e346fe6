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

#include "kstab/fixtures.hpp"
#include "kstab/io.hpp"
#include "kstab/parallel.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace kstab;
using io::Json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    if (f.bad()) throw IoError("cannot read '" + path + "'");
    return os.str();
}

void write_output(const std::string& text, const std::string& out)
{
    if (out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + out + "' for writing");
    f << text;
    if (!f) throw IoError("cannot write '" + out + "'");
}

RatVec parse_ray(const std::string& text, Eigen::Index rank)
{
    std::vector<Rational> xs;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) xs.push_back(parse_rational(item));
    if (static_cast<Eigen::Index>(xs.size()) != rank)
        throw Error(ErrorCode::InvalidInput, "ray must have " + std::to_string(rank) + " coordinates", "--ray");
    RatVec v(rank);
    for (Eigen::Index i = 0; i < rank; ++i) v(i) = xs[static_cast<std::size_t>(i)];
    return v;
}

io::Format parse_format(const std::string& f)
{
    if (f == "csv") return io::Format::Csv;
    if (f == "text") return io::Format::Text;
    return io::Format::Json;
}

struct Loaded {
    std::string hash;
    io::InputDocument doc;
};

Loaded load(const std::string& path)
{
    const std::string bytes = read_file(path);
    return Loaded{io::fnv1a64(bytes), io::parse_input(bytes)};
}

quad::WeightFn weight_of(const Loaded& l, const std::string& spec)
{
    if (!spec.empty()) return io::parse_weight(spec);
    if (l.doc.weight) return *l.doc.weight;
    return quad::WeightFn::constant(1);
}

Json envelope(const std::string& command, const Loaded& l, Json body, std::optional<double> seconds)
{
    Json j;
    j["schema_version"] = std::string(io::kSchemaVersion);
    j["command"] = command;
    j["input_hash"] = l.hash;
    j["variety"] = l.doc.variety.name;
    for (auto& [k, v] : body.items()) j[k] = std::move(v);
    if (seconds) j["timing"] = Json{{"seconds", *seconds}};
    return j;
}

struct Common {
    std::string input;
    std::string format = "json";
    std::string out;
    bool timing = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--input", c.input, "Input document (JSON)")->required();
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--out", c.out, "Write the report to this path instead of stdout");
    cmd->add_flag("--timing", c.timing, "Include wall-clock timing in the report");
}

template <typename F>
void run_report(const std::string& command, const Common& c, F&& body)
{
    const Loaded l = load(c.input);
    const spherical::SphericalInput in(l.doc.variety);
    const auto start = std::chrono::steady_clock::now();
    Json b = body(l, in);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Json doc = envelope(command, l, std::move(b), c.timing ? std::optional<double>(seconds) : std::nullopt);
    write_output(io::render(doc, parse_format(c.format)), c.out);
}

void configure_threads()
{
    if (const char* env = std::getenv("KSTAB_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 0 || n > 1024)
            throw Error(ErrorCode::InvalidInput, "KSTAB_THREADS must be an integer in [0, 1024]", "KSTAB_THREADS");
        set_thread_count(static_cast<unsigned>(n));
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stability thresholds and Reeb vectors of spherical Fano varieties."};
    app.require_subcommand(1);

    Common compute_opts;
    std::string invariant;
    double p = 1.0;
    std::string g_spec;
    std::string ray;
    auto* compute = app.add_subcommand("compute", "Compute delta, alpha, barycenter or beta");
    add_common(compute, compute_opts);
    compute->add_option("--invariant", invariant, "Invariant to compute")
        ->required()
        ->check(CLI::IsMember({"delta", "alpha", "barycenter", "beta"}));
    compute->add_option("--p", p, "Exponent of delta");
    compute->add_option("--g", g_spec, "Weight: const:<q> or affine:<xi,...>;<a>;<exponent>");
    compute->add_option("--ray", ray, "Comma-separated ray for beta (default: every candidate ray)");

    Common check_opts;
    std::string check_g;
    auto* check = app.add_subcommand("check", "Decide Ding semistability and polystability");
    add_common(check, check_opts);
    check->add_option("--g", check_g, "Weight: const:<q> or affine:<xi,...>;<a>;<exponent>");

    Common reeb_opts;
    double tol = 1e-10;
    auto* reeb = app.add_subcommand("reeb", "Solve for the Reeb vector of a horospherical input");
    add_common(reeb, reeb_opts);
    reeb->add_option("--tol", tol, "Gradient-norm tolerance")->check(CLI::PositiveNumber);

    std::string builtin_name;
    std::string builtin_out;
    auto* builtin = app.add_subcommand("builtin", "Print a builtin fixture document");
    builtin->add_option("name", builtin_name, "Fixture name")->required();
    builtin->add_option("--out", builtin_out, "Write the document to this path instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        configure_threads();
        if (*compute) {
            run_report("compute", compute_opts, [&](const Loaded& l, const spherical::SphericalInput& in) {
                if (invariant == "delta") {
                    if (!g_spec.empty() || l.doc.weight) return io::report(invariants::delta_g(in, weight_of(l, g_spec)));
                    return io::report(invariants::delta_p(in, p));
                }
                if (invariant == "alpha") return io::report(invariants::alpha(in));
                const quad::WeightFn g = weight_of(l, g_spec);
                if (invariant == "barycenter") return io::report_barycenter(invariants::barycenter_g(in, g), g);
                std::vector<RatVec> rays;
                if (ray.empty()) rays = in.candidates();
                else rays.push_back(parse_ray(ray, in.rank()));
                std::vector<invariants::BetaValue> values;
                for (const auto& v : rays) values.push_back(invariants::beta_g(in, v, g));
                return io::report_beta(rays, values, g);
            });
        } else if (*check) {
            run_report("check", check_opts, [&](const Loaded& l, const spherical::SphericalInput& in) {
                const quad::WeightFn g = weight_of(l, check_g);
                Json j = io::report(invariants::ding_check(in, g));
                j["weight"] = g.describe();
                return j;
            });
        } else if (*reeb) {
            run_report("reeb", reeb_opts, [&](const Loaded&, const spherical::SphericalInput& in) {
                return io::report(soliton::solve_reeb(soliton::make_problem(in), tol));
            });
        } else if (*builtin) {
            io::InputDocument doc{fixtures::builtin(builtin_name), std::nullopt};
            write_output(io::emit_input(doc), builtin_out);
        }
    } catch (const IoError& e) {
        std::cerr << "kstab: error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "kstab: " << kstab::to_string(e.code()) << ": " << e.what();
        if (!e.path().empty()) std::cerr << " at " << e.path();
        std::cerr << "\n";
        return io::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "kstab: internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
