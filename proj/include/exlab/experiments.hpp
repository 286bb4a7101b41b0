#pragma once

#include <string>
#include <vector>

#include "exlab/geometry.hpp"
#include "exlab/holder.hpp"
#include "exlab/table.hpp"

namespace exlab {

/// Exit codes shared by the library entry point and the command line tool.
enum ExitCode { kOk = 0, kUsage = 1, kCheckFailed = 2, kCapacity = 3 };

/// Runs the named experiment with a fully resolved configuration, writing
/// <name>.csv and <name>.json under outdir. Returns kOk or kCheckFailed;
/// usage and capacity problems surface as exceptions.
int run_experiment(const std::string& name, const ExperimentConfig& cfg,
                   const std::string& outdir);

const std::vector<std::string>& experiment_names();

/// Built-in defaults for one subcommand; unknown names throw.
ExperimentConfig default_config(const std::string& name);

// -- parsing helpers shared with the CLI --------------------------------

std::vector<double> parse_number_list(const std::string& text);   // "0.25,1,4"
std::vector<int> parse_int_range(const std::string& text);        // "3..8" or "2,4,8"
Config parse_config(const std::string& text, int dim);            // "0,0;0,1"
std::vector<Config> parse_config_list(const std::string& text, int dim);  // '|' separated
ScalarField named_test_function(const std::string& name, int dim);  // constant|cosine|bump

}  // namespace exlab
