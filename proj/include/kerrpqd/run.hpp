#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerrpqd/negativity.hpp"
#include "kerrpqd/simulability.hpp"
#include "kerrpqd/state_description.hpp"

namespace kerrpqd {

enum class Command { Pqd, Negativity, Threshold, Simulability, Sweep, Verify, Estimate };

const char* command_name(Command c);
Command parse_command(const std::string& name);

/// One CLI invocation. Keys mirror the long flag names without the dashes.
struct RunConfig {
    Command command = Command::Verify;
    std::optional<StateDescription> state;
    std::optional<double> t;
    double t_min = -1.0;
    double t_max = 0.0;
    int t_points = 17;
    NoiseParams noise{};
    std::optional<double> tbar;
    std::optional<double> s;
    std::optional<double> r;
    int modes = 1;
    double eps = 0.1;
    double grid_r = 0.0;  ///< 0 selects the default window
    int grid_n = 201;
    double eps_neg = ThresholdOptions{}.eps_neg;
    double tol_t = ThresholdOptions{}.tol_t;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    int sweep_points = 21;
    int threads = 0;
    std::string out;

    /// Keys accepted by from_key_values (and by config files).
    static const std::vector<std::string>& keys();
    /// Builds a config from key=value pairs; unknown keys and out-of-range
    /// values throw InvalidArgument.
    static RunConfig from_key_values(const std::map<std::string, std::string>& kv);
    void validate() const;
    /// key=value lines that from_key_values maps back to this config.
    std::string echo() const;
};

/// Reads `key=value` lines; `#` starts a comment, blank lines are skipped.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

/// Executes the command. Reports go to `out`; failures print one
/// `error=<code> detail=<msg>` line to `err`. Returns 0, 2 (invalid input)
/// or 3 (numerical failure).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Same, starting from raw key=value pairs (validation errors included).
int run(const std::map<std::string, std::string>& kv, std::ostream& out, std::ostream& err);

struct Check {
    std::string name;
    double deviation;
    double tolerance;
    bool pass() const { return deviation <= tolerance; }
};

/// Oracle cross-checks and operator identities behind the `verify` command.
std::vector<Check> verification_suite();

}  // namespace kerrpqd
