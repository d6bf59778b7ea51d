#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Experiment runner: JSON configs in, CSV/JSON artifacts out, one command
// per verifiable claim. Exit codes: 0 pass, 2 invariant failure,
// 3 numerical error, 4 config error.

namespace hyprel::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string parameters_json = "{}";  // raw parameter object
    std::string output_dir;              // empty = default per command
    long long seed = 0;                  // reserved; all algorithms are deterministic
};

/// Strict parse: top-level keys limited to command / parameters /
/// output_dir / seed; anything else is a ConfigError with the field path.
RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

const std::vector<std::string>& command_names();

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct CommandOutcome {
    std::string command;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;  // file names inside the output dir
    double wall_time_seconds = 0.0;

    bool pass() const;
};

/// Runs the command, writes result CSVs plus manifest.json and
/// summary.json into out_dir. Throws ConfigError on parameter problems;
/// numerical failures from the library propagate as their own exceptions.
CommandOutcome execute(const RunConfig& cfg, const std::string& out_dir, bool verbose);

/// 0 when every check passed, 2 otherwise.
int exit_code_for(const CommandOutcome& outcome);

}  // namespace hyprel::cli
