#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Batch driver shared by the command-line tool and the tests: key=value
// experiment configs, deterministic sweeps, CSV/JSON rows with 12 significant
// digits, exit codes 0 (all pass), 1 (usage), 2 (tolerance failure).
namespace hyplab {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string command;  // upper-bound | ball-eig | lee | submanifold | sweep
    std::vector<std::pair<std::string, std::string>> params;  // given order
    std::string output_format = "csv";  // csv | json
    std::uint64_t seed = 12345;         // randomized sampling (lee)
    bool timing = false;                // millis column stays 0 when off
};

struct ResultRow {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;  // canonical order, defaults filled
    double value = 0.0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    long long millis = 0;
    std::string diagnostic;  // nonempty when the computation failed
};

// %.12g
std::string format_number(double v);

// argv tail -> config; bare tokens are only accepted as the sweep file path.
ExperimentConfig parse_cli(const std::vector<std::string>& args);

// Executes one command (sweep reads the file in params["config"]).
int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// Sweep over the Cartesian grid in the config text (comma lists fan out).
// Exposed for byte-level determinism tests.
int run_sweep_text(const std::string& text, const std::string& output_format, bool timing,
                   std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace hyplab
