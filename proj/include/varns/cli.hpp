#pragma once

#include "varns/oscillator.hpp"
#include "varns/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace varns::cli {

struct GridSpec {
    int dim = 2;
    std::vector<double> extent;
    std::vector<int> nodes;
    std::vector<std::string> boundary;
    int time_nodes = 1;
    double dt = 0.0;

    GridSpec();
    Grid make() const;
};

/// Everything a run needs. Every field has an explicit default, printed by
/// `--print-config`.
struct RunConfig {
    std::string subcommand;
    GridSpec grid;
    double nu = 0.1;
    SolveConfig solver;
    /// taylor-green | zero | random:<seed> | random-difference:<seed> | file:<dir>
    std::string scenario = "taylor-green";
    std::uint64_t seed = 1;
    std::string output = "varns_out";
    OscillatorProblem oscillator{1.0, 20.0, 0.0, 1.0, 65};
    int refine = 3;
    /// trace (surface data copied from the state) | zero
    std::string surface = "trace";
    /// cavity | zero | scenario
    std::string boundary_data = "cavity";
    double lid_speed = 1.0;
    double perturbation = 0.1;
    double fd_step = 1e-5;
};

/// JSON document for a config (without the subcommand).
std::string to_json(const RunConfig& config);

/// Overlays a JSON document on `config`. Unknown keys and malformed JSON
/// raise ConfigError; parse errors carry line and column.
void apply_json(RunConfig& config, const std::string& text);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the scenario quartet on `grid`.
FieldQuartet make_scenario(const std::string& scenario, const Grid& grid, double nu);

/// Command-line entry point. Returns 0 on success, 1 on usage or
/// configuration errors, 2 when checks fail.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace varns::cli
