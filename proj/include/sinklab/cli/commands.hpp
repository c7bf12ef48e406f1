#pragma once

#include "sinklab/cli/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sinklab::cli {

struct CommandOutcome {
    nlohmann::json summary;
    int exit_code = 0;
};

// Each command writes its files into `out` (created if missing) and returns
// the summary that was written to summary.json.
//   solve:   field.csv (t, x, P_analytic, ilt_discrepancy, ilt_flagged)
//   oracle:  field.csv (t, x, P_oracle, S, J)
//   compare: diff.csv (t, observable, analytic, cn, volterra, cn_minus_analytic,
//            volterra_minus_analytic)
//   sweep:   field.csv (one column per axis, then t, S, P0, status)
CommandOutcome cmd_solve(const RunConfig& config, const std::filesystem::path& out);
CommandOutcome cmd_oracle(const RunConfig& config, const std::filesystem::path& out);
CommandOutcome cmd_compare(const RunConfig& config, const std::filesystem::path& out);
CommandOutcome cmd_sweep(const RunConfig& config, const std::filesystem::path& out);
// Built-in checks of the inversion and closure machinery; exit code 3 when
// any check fails.
CommandOutcome cmd_selftest(const RunConfig& config, const std::optional<std::filesystem::path>& out);

// Literal-form diagnostics at s = 0.5, 1, 2 for the configured model.
nlohmann::json literal_report(const RunConfig& config);

// Loads the config, runs the command and maps failures to exit codes:
// 0 ok, 2 invalid configuration, 3 numerical failure. Failures are reported
// as a JSON document on `err` and in summary.json when `out` is usable.
int run_command(const std::string& command, const std::optional<std::filesystem::path>& config_path,
                const std::vector<std::string>& overrides,
                const std::optional<std::filesystem::path>& out, std::ostream& log,
                std::ostream& err);

} // namespace sinklab::cli
