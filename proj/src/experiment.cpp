#include "hyplab/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "hyplab/ball.hpp"
#include "hyplab/parallel.hpp"
#include "hyplab/radial.hpp"
#include "hyplab/submanifold.hpp"
#include "hyplab/upper_bound.hpp"

namespace hyplab {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

using KV = std::map<std::string, std::string>;

const std::vector<std::string>& command_keys(const std::string& command) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"upper-bound", {"n", "p", "s", "tolerance"}},
        {"ball-eig", {"n", "p", "kappa", "radius", "mesh", "tolerance"}},
        {"lee", {"n", "base", "samples", "seed", "tolerance"}},
        {"submanifold", {"kind", "dim", "ambient", "t", "check", "q", "tolerance"}},
        {"sweep", {"config"}},
    };
    const auto it = keys.find(command);
    if (it == keys.end()) throw UsageError("unknown command '" + command + "'");
    return it->second;
}

void check_keys(const std::string& command, const KV& kv) {
    const auto& allowed = command_keys(command);
    for (const auto& [k, v] : kv)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw UsageError("unknown key '" + k + "' for command '" + command + "'");
}

double num(const KV& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw UsageError("key '" + key + "': not a number: '" + it->second + "'");
    }
}

int integer(const KV& kv, const std::string& key, int fallback) {
    const double v = num(kv, key, fallback);
    if (v != std::floor(v)) throw UsageError("key '" + key + "': integer required");
    return static_cast<int>(v);
}

std::string text(const KV& kv, const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

void push(ResultRow& row, const std::string& key, const std::string& value) {
    row.params.emplace_back(key, value);
}
void push(ResultRow& row, const std::string& key, double value) {
    row.params.emplace_back(key, format_number(value));
}

double default_s(const KV& kv) {
    // midpoint of the admissible interval ((n-p)/p, n/p)
    const double n = integer(kv, "n", 2), p = num(kv, "p", 2.0);
    return (2.0 * n - p) / (2.0 * p);
}

ResultRow snapshot_upper_bound(const KV& kv) {
    ResultRow row;
    row.experiment = "upper-bound";
    push(row, "n", static_cast<double>(integer(kv, "n", 2)));
    push(row, "p", num(kv, "p", 2.0));
    push(row, "s", num(kv, "s", default_s(kv)));
    row.tolerance = num(kv, "tolerance", 1e-2);
    return row;
}

ResultRow row_upper_bound(const KV& kv) {
    ResultRow row = snapshot_upper_bound(kv);
    const int n = integer(kv, "n", 2);
    const double p = num(kv, "p", 2.0);
    const double s = num(kv, "s", default_s(kv));
    const RayleighParams rp(n, p, s);
    const IteratedLimitReport rep = iterated_limit(rp);
    row.value = rep.value;
    row.error = std::fabs(rep.value - closed_form_F(n, p, s));
    row.pass = row.error <= row.tolerance;
    return row;
}

ResultRow snapshot_ball_eig(const KV& kv) {
    ResultRow row;
    row.experiment = "ball-eig";
    push(row, "n", static_cast<double>(integer(kv, "n", 2)));
    push(row, "p", num(kv, "p", 2.0));
    push(row, "kappa", num(kv, "kappa", 1.0));
    push(row, "radius", num(kv, "radius", 1.0));
    push(row, "mesh", static_cast<double>(integer(kv, "mesh", 600)));
    row.tolerance = num(kv, "tolerance", 1e-8);
    return row;
}

ResultRow row_ball_eig(const KV& kv) {
    ResultRow row = snapshot_ball_eig(kv);
    const int n = integer(kv, "n", 2);
    const double p = num(kv, "p", 2.0);
    const double kappa = num(kv, "kappa", 1.0);
    const double radius = num(kv, "radius", 1.0);
    const int mesh = integer(kv, "mesh", 600);
    const RadialProblem prob(n, p, kappa, radius, mesh);
    const EigenResult res = ball_first_eigenvalue(prob);
    const double lower = sharp_upper_bound(n, p, kappa);
    const double upper = bessel_profile_quotient(prob);
    row.value = res.lambda;
    row.error = std::fmax(0.0, lower - res.lambda) + std::fmax(0.0, res.lambda - upper);
    row.pass = row.error <= row.tolerance;
    return row;
}

ResultRow snapshot_lee(const KV& kv, std::uint64_t seed) {
    ResultRow row;
    row.experiment = "lee";
    push(row, "n", static_cast<double>(integer(kv, "n", 2)));
    push(row, "base", num(kv, "base", 0.3));
    push(row, "samples", static_cast<double>(integer(kv, "samples", 1000)));
    push(row, "seed", static_cast<double>(seed));
    row.tolerance = num(kv, "tolerance", 1e-6);
    return row;
}

ResultRow row_lee(const KV& kv, std::uint64_t seed) {
    ResultRow row = snapshot_lee(kv, seed);
    const int n = integer(kv, "n", 2);
    const double base_r = num(kv, "base", 0.3);
    const int samples = integer(kv, "samples", 1000);
    Vec base(n + 1, 0.0);
    base[0] = base_r;
    const LeeEigenfunction u{BallPoint(base)};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vec y(n + 1);
        do {
            for (auto& c : y) c = 0.95 * unit(rng);
        } while (norm(y) >= 0.95);
        const BallPoint pt(y);
        const double uv = u.value(pt);
        double r = std::fabs(lee_residual(u, pt)) / uv;
        r = std::fmax(r, form_norm_gH(trace_free_hessian(u, pt), pt) / uv);
        r = std::fmax(r, u.gradient_ratio(pt) - 1.0);
        worst = std::fmax(worst, r);
    }
    row.value = worst;
    row.error = worst;
    row.pass = row.error <= row.tolerance;
    return row;
}

ResultRow snapshot_submanifold(const KV& kv) {
    const std::string check = text(kv, "check", "angles");
    const int dim = integer(kv, "dim", 2);
    ResultRow row;
    row.experiment = "submanifold";
    push(row, "kind", text(kv, "kind", "totally-geodesic"));
    push(row, "dim", static_cast<double>(dim));
    push(row, "ambient", static_cast<double>(integer(kv, "ambient", dim + 1)));
    push(row, "t", num(kv, "t", 0.0));
    push(row, "check", check);
    push(row, "q", num(kv, "q", dim + 2.0));
    double fallback = 1e-3;
    if (check == "2ff") fallback = 1e-6;
    if (check == "fu-tao") fallback = 1e-8;
    row.tolerance = num(kv, "tolerance", fallback);
    return row;
}

ResultRow row_submanifold(const KV& kv) {
    ResultRow row = snapshot_submanifold(kv);
    const std::string kind = text(kv, "kind", "totally-geodesic");
    const int dim = integer(kv, "dim", 2);
    const int ambient = integer(kv, "ambient", dim + 1);
    const double t = num(kv, "t", 0.0);
    const std::string check = text(kv, "check", "angles");

    std::ostringstream spec;
    spec << "kind=" << kind << " dim=" << dim << " ambient=" << ambient << " t=" << t;
    CatalogEntry entry;
    try {
        entry = parse_catalog_spec(spec.str());
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }

    Vec direction(dim, 0.0);
    direction[0] = 1.0;
    const double q_exponent = num(kv, "q", dim + 2.0);

    if (check == "angles") {
        const BoundaryAngleReport rep =
            boundary_angles(entry.immersion, catalog_boundary_path(entry, direction),
                            DefiningFunctionKind::r2);
        row.value = std::sqrt(std::clamp(rep.p_norm_sq_limit, 0.0, 1.0));
        row.error = std::fabs(row.value - std::fabs(entry.expected_cos_angle));
    } else if (check == "sectional") {
        if (dim < 2) throw UsageError("key 'check': sectional needs dim >= 2");
        Vec W(dim, 0.0), Z(dim, 0.0);
        W[0] = 1.0;
        Z[1] = 1.0;
        const SectionalReport rep =
            asymptotic_sectional(entry.immersion, catalog_boundary_path(entry, direction), W, Z);
        row.value = rep.limit;
        row.error = std::fabs(rep.limit - entry.expected_sectional);
    } else if (check == "2ff" || check == "fu-tao") {
        const bool horo = entry.kind == CatalogKind::horosphere;
        double worst = 0.0;
        for (const double radius : {horo ? 0.5 : 0.2, horo ? 1.0 : 0.4, horo ? 2.0 : 0.6}) {
            const SubmanifoldSample smp =
                sample_geometry(entry.immersion, (radius / norm(direction)) * direction);
            worst = std::fmax(worst, check == "2ff"
                                         ? conformal_2ff_residual(smp, DefiningFunctionKind::r2)
                                         : traceless_conformal_identity(
                                               smp, DefiningFunctionKind::r2, q_exponent));
        }
        row.value = worst;
        row.error = worst;
    } else {
        throw UsageError("key 'check': unknown check '" + check + "'");
    }
    row.pass = row.error <= row.tolerance;
    return row;
}

ResultRow snapshot_row(const std::string& command, const KV& kv, std::uint64_t seed) {
    if (command == "upper-bound") return snapshot_upper_bound(kv);
    if (command == "ball-eig") return snapshot_ball_eig(kv);
    if (command == "lee") return snapshot_lee(kv, seed);
    if (command == "submanifold") return snapshot_submanifold(kv);
    throw UsageError("unknown command '" + command + "'");
}

ResultRow compute_row(const std::string& command, const KV& kv, std::uint64_t seed, bool timing) {
    const auto start = std::chrono::steady_clock::now();
    ResultRow row;
    if (command == "upper-bound") row = row_upper_bound(kv);
    else if (command == "ball-eig") row = row_ball_eig(kv);
    else if (command == "lee") row = row_lee(kv, seed);
    else if (command == "submanifold") row = row_submanifold(kv);
    else throw UsageError("unknown command '" + command + "'");
    if (timing)
        row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return row;
}

// Pre-run domain validation so usage errors abort before any row computes.
void validate_case(const std::string& command, const KV& kv) {
    check_keys(command, kv);
    if (command == "upper-bound") {
        try {
            const RayleighParams rp(integer(kv, "n", 2), num(kv, "p", 2.0),
                                    num(kv, "s", default_s(kv)));
            (void)rp;
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    } else if (command == "ball-eig") {
        try {
            const RadialProblem prob(integer(kv, "n", 2), num(kv, "p", 2.0), num(kv, "kappa", 1.0),
                                     num(kv, "radius", 1.0), integer(kv, "mesh", 600));
            (void)prob;
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    } else if (command == "lee") {
        if (integer(kv, "samples", 1000) < 1) throw UsageError("key 'samples': positive count required");
        if (!(std::fabs(num(kv, "base", 0.3)) < 1.0)) throw UsageError("key 'base': |base| < 1 required");
        if (integer(kv, "n", 2) < 1) throw UsageError("key 'n': n >= 1 required");
    } else if (command == "submanifold") {
        std::ostringstream spec;
        spec << "kind=" << text(kv, "kind", "totally-geodesic") << " dim=" << integer(kv, "dim", 2)
             << " ambient=" << integer(kv, "ambient", integer(kv, "dim", 2) + 1)
             << " t=" << num(kv, "t", 0.0);
        try {
            parse_catalog_spec(spec.str());
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        const std::string check = text(kv, "check", "angles");
        if (check != "angles" && check != "sectional" && check != "2ff" && check != "fu-tao")
            throw UsageError("key 'check': unknown check '" + check + "'");
        if (check == "sectional" && integer(kv, "dim", 2) < 2)
            throw UsageError("key 'check': sectional needs dim >= 2");
    }
}

void emit_csv_header(const ResultRow& row, std::ostream& out) {
    out << "experiment";
    for (const auto& [k, v] : row.params) out << "," << k;
    out << ",value,error,tolerance,pass,millis\n";
}

void emit_csv_row(const ResultRow& row, std::ostream& out) {
    out << row.experiment;
    for (const auto& [k, v] : row.params) out << "," << v;
    out << "," << format_number(row.value) << "," << format_number(row.error) << ","
        << format_number(row.tolerance) << "," << (row.pass ? "true" : "false") << ","
        << row.millis << "\n";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

void emit_json_row(const ResultRow& row, std::ostream& out, const std::string& indent) {
    out << indent << "{\"experiment\": \"" << json_escape(row.experiment) << "\", \"params\": {";
    bool first = true;
    for (const auto& [k, v] : row.params) {
        out << (first ? "" : ", ") << "\"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
        first = false;
    }
    out << "}, \"value\": " << format_number(row.value) << ", \"error\": "
        << format_number(row.error) << ", \"tolerance\": " << format_number(row.tolerance)
        << ", \"pass\": " << (row.pass ? "true" : "false") << ", \"millis\": " << row.millis;
    if (!row.diagnostic.empty()) out << ", \"diagnostic\": \"" << json_escape(row.diagnostic) << "\"";
    out << "}";
}

int emit_rows(const std::vector<ResultRow>& rows, const std::string& format, bool sweep_summary,
              std::ostream& out) {
    std::size_t passed = 0;
    for (const ResultRow& r : rows) passed += r.pass ? 1 : 0;
    if (format == "json") {
        const char* indent = sweep_summary ? "    " : "  ";
        if (sweep_summary) out << "{\"rows\":\n";
        out << (sweep_summary ? "  [\n" : "[\n");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            emit_json_row(rows[i], out, indent);
            out << (i + 1 < rows.size() ? ",\n" : "\n");
        }
        out << (sweep_summary ? "  ],\n" : "]\n");
        if (sweep_summary)
            out << " \"summary\": {\"pass\": " << passed << ", \"total\": " << rows.size()
                << "}}\n";
    } else {
        emit_csv_header(rows.front(), out);
        for (const ResultRow& r : rows) emit_csv_row(r, out);
        if (sweep_summary)
            out << "# summary: " << passed << "/" << rows.size() << " pass\n";
    }
    return passed == rows.size() ? 0 : 2;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(value);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!value.empty() && value.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

ExperimentConfig parse_cli(const std::vector<std::string>& args) {
    if (args.empty()) throw UsageError("missing command (upper-bound | ball-eig | lee | submanifold | sweep)");
    ExperimentConfig cfg;
    cfg.command = args[0];
    command_keys(cfg.command);  // validates the name
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok == "--json") { cfg.output_format = "json"; continue; }
        if (tok == "--csv") { cfg.output_format = "csv"; continue; }
        if (tok == "--timing") { cfg.timing = true; continue; }
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (cfg.command == "sweep") {
                cfg.params.emplace_back("config", tok);
                continue;
            }
            throw UsageError("expected key=value, got '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (key == "seed") {
            try {
                cfg.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw UsageError("key 'seed': not an integer: '" + value + "'");
            }
            continue;
        }
        cfg.params.emplace_back(key, value);
    }
    return cfg;
}

int run_sweep_text(const std::string& config_text, const std::string& output_format, bool timing,
                   std::uint64_t seed, std::ostream& out, std::ostream& err) {
    try {
        std::string command;
        std::vector<std::pair<std::string, std::vector<std::string>>> axes;
        std::istringstream is(config_text);
        std::string line;
        std::uint64_t sweep_seed = seed;
        while (std::getline(is, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
            std::size_t start = 0;
            while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
            line.erase(0, start);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw UsageError("sweep config: expected key=value, got '" + line + "'");
            const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
            if (key == "command") {
                command = value;
                continue;
            }
            if (key == "seed") {
                try {
                    sweep_seed = std::stoull(value);
                } catch (const std::exception&) {
                    throw UsageError("sweep config: seed is not an integer");
                }
                continue;
            }
            axes.emplace_back(key, split_list(value));
        }
        if (command.empty()) throw UsageError("sweep config: missing command=...");
        if (command == "sweep") throw UsageError("sweep config: nested sweep not allowed");
        command_keys(command);

        std::size_t total = 1;
        for (const auto& [key, values] : axes) {
            if (values.empty() || (values.size() == 1 && values[0].empty()))
                throw UsageError("sweep config: empty grid for key '" + key + "'");
            total *= values.size();
        }
        if (axes.empty() || total == 0) throw UsageError("sweep config: empty grid");

        // first listed key varies slowest
        std::vector<KV> cases(total);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rem = idx;
            KV kv;
            for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
                const auto& [key, values] = *it;
                kv[key] = values[rem % values.size()];
                rem /= values.size();
            }
            cases[idx] = kv;
        }
        for (const KV& kv : cases) validate_case(command, kv);

        const std::vector<ResultRow> rows = parallel_map<ResultRow>(total, [&](std::size_t i) {
            try {
                return compute_row(command, cases[i], sweep_seed, timing);
            } catch (const std::exception& e) {
                ResultRow row = snapshot_row(command, cases[i], sweep_seed);
                row.value = std::numeric_limits<double>::quiet_NaN();
                row.error = std::numeric_limits<double>::quiet_NaN();
                row.pass = false;
                row.diagnostic = e.what();
                return row;
            }
        });
        for (const ResultRow& r : rows)
            if (!r.diagnostic.empty())
                err << "row failed: " << r.experiment << ": " << r.diagnostic << "\n";
        return emit_rows(rows, output_format, true, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }
}

int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.command == "sweep") {
            KV kv;
            for (const auto& [k, v] : config.params) kv[k] = v;
            check_keys("sweep", kv);
            const auto it = kv.find("config");
            if (it == kv.end()) throw UsageError("sweep: missing config file path");
            std::ifstream in(it->second);
            if (!in) throw UsageError("sweep: cannot open config file '" + it->second + "'");
            std::ostringstream text;
            text << in.rdbuf();
            return run_sweep_text(text.str(), config.output_format, config.timing, config.seed,
                                  out, err);
        }
        KV kv;
        for (const auto& [k, v] : config.params) {
            if (!kv.emplace(k, v).second) throw UsageError("duplicate key '" + k + "'");
        }
        validate_case(config.command, kv);
        ResultRow row;
        try {
            row = compute_row(config.command, kv, config.seed, config.timing);
        } catch (const std::exception& e) {
            row = snapshot_row(config.command, kv, config.seed);
            row.value = std::numeric_limits<double>::quiet_NaN();
            row.error = std::numeric_limits<double>::quiet_NaN();
            row.pass = false;
            row.diagnostic = e.what();
        }
        if (!row.diagnostic.empty())
            err << "row failed: " << row.experiment << ": " << row.diagnostic << "\n";
        return emit_rows({row}, config.output_format, false, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hyplab
