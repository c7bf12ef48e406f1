#pragma once

#include "sinklab/closure.hpp"
#include "sinklab/ilt.hpp"
#include "sinklab/model.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sinklab::cli {

struct OracleSettings {
    double dx = 0.005;
    double dt = 1e-3;
    double half_length = 0.0; // 0: sized automatically
    double delta_width = 0.0; // 0: 2 dx
    double volterra_dt = 1e-3;
    std::int64_t mc_paths = 0; // 0 disables the Monte Carlo run
    double mc_dt = 1e-3;
    double mc_delta_width = 0.1;
    int mc_shards = 64;
    bool operator==(const OracleSettings&) const = default;
};

struct SweepAxis {
    std::string key; // "section.name" of a numeric setting
    std::vector<double> values;
    bool operator==(const SweepAxis&) const = default;
};

// Everything a run needs. Text form is an INI file:
//
//   [model]   D, omega, sigma, x0
//   [sink]    law = none|constant|linear|inverse|expdecay,
//             alpha0, alpha1, alpha, t_on (or auto), beta, alpha_decay
//   [output]  x, t (lists "a, b, c" or "linspace(a, b, n)"), dir
//   [ilt]     method, talbot_nodes, stehfest_terms, agreement_tol
//   [ode]     s_max_factor, tol, max_steps
//   [series]  depth_max, tail_tol, fixed_depth (or auto)
//   [oracle]  dx, dt, half_length, delta_width, volterra_dt,
//             mc_paths, mc_dt, mc_delta_width, mc_shards
//   [compare] tolerance
//   [run]     seed
//   [sweep]   route = analytic|cn, plus "section.name = list" axes
struct RunConfig {
    double D = 1.0;
    double omega = 1.0;
    int sigma = -1;
    double x0 = 0.5;

    std::string law = "none";
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double alpha = 0.0;
    std::optional<double> t_on;
    double beta = 0.0;
    double alpha_decay = 1.0;

    std::vector<double> x{0.0};
    std::vector<double> t{1.0};
    std::string out_dir;

    IltConfig ilt;
    ClosureOptions closure;
    OracleSettings oracle;
    double compare_tol = 1e-2;
    std::uint64_t seed = 1;

    std::string sweep_route = "analytic";
    std::vector<SweepAxis> sweep;

    bool operator==(const RunConfig&) const = default;
};

// Parses INI text, then applies "section.key=value" overrides in order.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

// Sets one key from its text form; throws ValidationError for unknown keys
// or malformed values.
void apply_setting(RunConfig& config, const std::string& section, const std::string& key,
                   const std::string& value);
void apply_override(RunConfig& config, const std::string& assignment);

std::string serialize(const RunConfig& config);

// Resolved view, defaults filled in (t_on in particular).
nlohmann::json to_json(const RunConfig& config);

ModelParams model_params(const RunConfig& config);
SinkSpec sink_spec(const RunConfig& config);

// Checks every constraint the solvers would check, up front.
void validate(const RunConfig& config);

std::vector<double> parse_list(const std::string& field, const std::string& text);
std::string format_double(double value);

} // namespace sinklab::cli
