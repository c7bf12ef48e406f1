#include "sinklab/cli/commands.hpp"

#include "sinklab/cli/output.hpp"
#include "sinklab/closure.hpp"
#include "sinklab/errors.hpp"
#include "sinklab/green.hpp"
#include "sinklab/ilt.hpp"
#include "sinklab/literal.hpp"
#include "sinklab/observables.hpp"
#include "sinklab/oracle.hpp"
#include "sinklab/parallel.hpp"
#include "sinklab/special.hpp"
#include "sinklab/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

namespace sinklab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

json complex_json(Complex z)
{
    return json{{"re", z.real()}, {"im", z.imag()}};
}

void prepare_dir(const fs::path& out)
{
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out))
        throw ValidationError("--out", "cannot create output directory " + out.string());
}

std::size_t step_index(double t, double dt, const std::string& step_field)
{
    const double n = std::round(t / dt);
    if (std::abs(n * dt - t) > 1e-9 * std::max(1.0, t))
        throw ValidationError("output.t", "t = " + format_double(t) + " is not a multiple of " +
                                              step_field);
    return static_cast<std::size_t>(n);
}

GridSpec oracle_grid(const RunConfig& c, const ModelParams& params, double t_max)
{
    GridSpec grid = make_grid(params, c.x0, t_max, c.oracle.dx, c.oracle.dt);
    if (c.oracle.half_length > 0.0) {
        const int cells = static_cast<int>(std::lround(c.oracle.half_length / c.oracle.dx));
        grid.half_length = cells * c.oracle.dx;
        grid.nx = 2 * cells + 1;
    }
    grid.delta_width = c.oracle.delta_width;
    return grid;
}

json grid_json(const GridSpec& grid, const TimeGridField& field, double x0)
{
    return json{{"half_length", grid.half_length},
                {"nx", grid.nx},
                {"dx", field.dx},
                {"dt", field.dt},
                {"t_max", grid.t_max},
                {"delta_width", field.delta_width},
                {"x0_requested", x0},
                {"x0_used", field.x0_used},
                {"x0_shift", field.x0_used - x0}};
}

struct DiffStats {
    double sup = 0.0;
    double l2 = 0.0;
};

DiffStats diff_stats(const std::vector<double>& a, const std::vector<double>& b)
{
    DiffStats d;
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double e = std::abs(a[i] - b[i]);
        d.sup = std::max(d.sup, e);
        sq += e * e;
    }
    d.l2 = a.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(a.size()));
    return d;
}

json base_summary(const std::string& command, const RunConfig& config)
{
    return json{{"command", command}, {"status", "ok"}, {"config", to_json(config)}};
}

bool absorbing_nonnegative(const ModelParams& params, const SinkSpec& sink)
{
    if (params.sign() != SinkSign::absorbing) return false;
    return std::visit(
        [](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, ConstantSink>) return law.alpha0 >= 0.0;
            else if constexpr (std::is_same_v<T, LinearSink>) return law.alpha1 >= 0.0;
            else if constexpr (std::is_same_v<T, InverseTimeSink>) return law.alpha >= 0.0;
            else if constexpr (std::is_same_v<T, ExpDecaySink>) return law.beta >= 0.0;
            else return true;
        },
        sink);
}

} // namespace

CommandOutcome cmd_solve(const RunConfig& c, const fs::path& out)
{
    validate(c);
    prepare_dir(out);
    const ModelParams params = model_params(c);
    const AnalyticSolution solution(params, sink_spec(c), c.x0, c.ilt, c.closure);

    CsvWriter csv(out / "field.csv", {"t", "x", "P_analytic", "ilt_discrepancy", "ilt_flagged"});
    std::size_t points = 0, flagged = 0, warnings = 0;
    double max_disc = 0.0;
    json survival = json::array();
    for (double t : c.t) {
        const auto values = solution.field(t, c.x);
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            const CheckedInversion& v = values[i];
            csv.row({t, c.x[i], v.value, v.discrepancy, v.flagged ? 1.0 : 0.0});
            ++points;
            flagged += v.flagged;
            warnings += v.cancellation_warning;
            max_disc = std::max(max_disc, v.discrepancy);
        }
        const CheckedInversion s = solution.survival(t);
        survival.push_back(
            {{"t", t}, {"S", s.value}, {"ilt_discrepancy", s.discrepancy}, {"ilt_flagged", s.flagged}});
    }

    json summary = base_summary("solve", c);
    summary["ilt"] = {{"method", to_string(c.ilt.method)},
                      {"points", points},
                      {"flagged", flagged},
                      {"all_clear", flagged == 0},
                      {"max_discrepancy", max_disc},
                      {"cancellation_warnings", warnings},
                      {"talbot_shift", solution.talbot_shift()}};
    summary["closure_residual_max"] = solution.max_closure_residual();
    summary["survival"] = survival;
    summary["files"] = {"field.csv", "summary.json"};
    write_json(out / "summary.json", summary);
    return {summary, 0};
}

CommandOutcome cmd_oracle(const RunConfig& c, const fs::path& out)
{
    validate(c);
    prepare_dir(out);
    const ModelParams params = model_params(c);
    const SinkSpec sink = sink_spec(c);

    std::vector<std::size_t> idx;
    for (double t : c.t) idx.push_back(step_index(t, c.oracle.dt, "oracle.dt"));
    const double t_max = static_cast<double>(*std::max_element(idx.begin(), idx.end())) * c.oracle.dt;
    GridSpec grid = oracle_grid(c, params, t_max);
    grid.t_max = t_max;
    grid.snapshot_times = c.t;
    const TimeGridField field = cn_solve(params, sink, c.x0, grid);

    CsvWriter csv(out / "field.csv", {"t", "x", "P_oracle", "S", "J"});
    for (std::size_t j = 0; j < c.t.size(); ++j) {
        for (double x : c.x) {
            double value = x < field.x.front() || x > field.x.back() ? 0.0 : field.value_at(j, x);
            csv.row({field.snapshot_times[j], x, value, field.survival[idx[j]], field.flux[idx[j]]});
        }
    }

    double dev = 0.0;
    for (double S : field.survival) dev = std::max(dev, std::abs(S - 1.0));
    bool monotone = true;
    for (std::size_t i = 1; i < field.survival.size(); ++i)
        if (field.survival[i] > field.survival[i - 1] + 1e-14) monotone = false;

    json summary = base_summary("oracle", c);
    summary["grid"] = grid_json(grid, field, c.x0);
    summary["conservation"] = {{"max_abs_survival_deviation", dev},
                               {"sink_active", !is_inert(sink)},
                               {"within_1e-4", dev < 1e-4}};
    summary["flux_identity_residual"] =
        flux_identity_residual(field.t, field.survival, field.flux, params.sigma());
    summary["min_value"] = field.min_value;
    if (absorbing_nonnegative(params, sink)) summary["survival_nonincreasing"] = monotone;

    if (c.oracle.mc_paths > 0) {
        McOptions mc;
        mc.paths = c.oracle.mc_paths;
        mc.dt = c.oracle.mc_dt;
        mc.delta_width = c.oracle.mc_delta_width;
        mc.shards = c.oracle.mc_shards;
        mc.seed = c.seed;
        std::vector<std::size_t> mc_idx;
        for (double t : c.t) mc_idx.push_back(step_index(t, mc.dt, "oracle.mc_dt"));
        mc.t_max = static_cast<double>(*std::max_element(mc_idx.begin(), mc_idx.end())) * mc.dt;
        mc.sample_times = c.t;
        const McEstimate est = mc_solve(params, sink, c.x0, mc);
        summary["monte_carlo"] = {{"paths", mc.paths},
                                  {"t", est.t},
                                  {"S", est.survival},
                                  {"S_stderr", est.survival_stderr},
                                  {"mean_abs_x", est.mean_abs_x}};
    }
    summary["files"] = {"field.csv", "summary.json"};
    write_json(out / "summary.json", summary);
    return {summary, 0};
}

json literal_report(const RunConfig& c)
{
    const ModelParams params = model_params(c);
    const SinkSpec sink = sink_spec(c);
    const std::vector<double> s_points{0.5, 1.0, 2.0};
    json blocks = json::array();

    auto block = [&](const std::string& name, const std::string& description, double parameter,
                     const std::function<std::pair<Complex, Complex>(Complex)>& eval) {
        json b{{"name", name}, {"description", description}, {"parameter", parameter}};
        json points = json::array();
        double worst = 0.0;
        try {
            for (double s : s_points) {
                const auto [literal, rederived] = eval(Complex(s, 0.0));
                const double diff = std::abs(literal - rederived);
                worst = std::max(worst, diff);
                points.push_back({{"s", s},
                                  {"literal", complex_json(literal)},
                                  {"rederived", complex_json(rederived)},
                                  {"abs_diff", diff},
                                  {"rel_diff", diff / std::max(std::abs(rederived), 1e-300)}});
            }
            b["status"] = "ok";
            b["points"] = points;
            b["max_abs_diff"] = worst;
        } catch (const std::exception& e) {
            b["status"] = "unavailable";
            b["message"] = e.what();
            b["points"] = points;
        }
        blocks.push_back(b);
    };

    block("origin_amplitude",
          "homogeneous amplitude a(s) from the single-exponential ansatz vs the closure", 0.0,
          [&](Complex s) {
              const OriginResponse o = solve_origin(s, params, sink, c.x0, c.closure);
              return std::pair{literal_origin_amplitude(s, params, o.sink_lap, c.x0), o.a_s};
          });

    const double alpha0 =
        c.law == "constant" && c.alpha0 > 0.0 ? c.alpha0 : 0.5;
    block("constant_sink_origin", "closed-form P(0,s) for k = alpha0", alpha0, [&](Complex s) {
        return std::pair{literal_p0_constant(s, params, alpha0, c.x0),
                         p0_constant(s, params, ConstantSink{alpha0}, c.x0).p0};
    });

    const double alpha1 = c.law == "linear" && c.alpha1 != 0.0 ? c.alpha1 : 0.5;
    block("linear_sink_phase", "integrating-factor exponent f(s) for k = alpha1 t", alpha1,
          [&](Complex s) {
              return std::pair{literal_linear_phase(s, params, alpha1),
                               rederived_linear_phase(s, params, alpha1)};
          });

    const double alpha = c.law == "inverse" && c.alpha > 0.0 ? c.alpha : 0.3;
    block("inverse_time_origin_relation",
          "printed origin relation for k = alpha / t evaluated on the closure solution", alpha,
          [&](Complex s) {
              const double t_on = c.t_on ? *c.t_on : default_activation_time(params);
              const OriginResponse o =
                  p0_inverse(s, params, InverseTimeSink{alpha, t_on}, c.x0, c.closure.ode);
              const Complex u = o.sink_lap / alpha;
              return std::pair{literal_inverse_origin_rhs(s, params, alpha, c.x0, u, o.p0), o.p0};
          });
    return json{{"s_points", s_points}, {"blocks", blocks}};
}

CommandOutcome cmd_compare(const RunConfig& c, const fs::path& out)
{
    validate(c);
    prepare_dir(out);
    const ModelParams params = model_params(c);
    const SinkSpec sink = sink_spec(c);
    const std::size_t nt = c.t.size();

    std::vector<std::size_t> cn_idx, vo_idx;
    for (double t : c.t) {
        cn_idx.push_back(step_index(t, c.oracle.dt, "oracle.dt"));
        vo_idx.push_back(step_index(t, c.oracle.volterra_dt, "oracle.volterra_dt"));
    }

    struct Route {
        bool ok = false;
        std::string error;
        std::vector<double> origin, survival;
    };
    Route analytic, cn, volterra;
    json routes;
    json ilt_block;

    auto run_route = [&](Route& r, const char* name, const std::function<void()>& body) {
        try {
            body();
            r.ok = true;
            routes[name] = {{"status", "ok"}};
        } catch (const NumericalError& e) {
            r.error = e.what();
            routes[name] = {{"status", "failed"}, {"message", r.error}};
        }
    };

    run_route(analytic, "analytic", [&] {
        const AnalyticSolution sol(params, sink, c.x0, c.ilt, c.closure);
        std::size_t flagged = 0;
        double max_disc = 0.0;
        for (double t : c.t) {
            const CheckedInversion o = sol.origin(t);
            const CheckedInversion s = sol.survival(t);
            analytic.origin.push_back(o.value);
            analytic.survival.push_back(s.value);
            flagged += o.flagged + s.flagged;
            max_disc = std::max({max_disc, o.discrepancy, s.discrepancy});
        }
        ilt_block = {{"flagged", flagged},
                     {"max_discrepancy", max_disc},
                     {"closure_residual_max", sol.max_closure_residual()}};
    });

    json grid_block;
    run_route(cn, "cn", [&] {
        const double t_max =
            static_cast<double>(*std::max_element(cn_idx.begin(), cn_idx.end())) * c.oracle.dt;
        GridSpec grid = oracle_grid(c, params, t_max);
        grid.t_max = t_max;
        const TimeGridField field = cn_solve(params, sink, c.x0, grid);
        for (std::size_t i : cn_idx) {
            cn.origin.push_back(field.origin[i]);
            cn.survival.push_back(field.survival[i]);
        }
        grid_block = grid_json(grid, field, c.x0);
        grid_block["flux_identity_residual"] =
            flux_identity_residual(field.t, field.survival, field.flux, params.sigma());
    });
    if (cn.ok) routes["cn"]["grid"] = grid_block;

    run_route(volterra, "volterra", [&] {
        const std::size_t steps = *std::max_element(vo_idx.begin(), vo_idx.end());
        const std::vector<double> grid =
            uniform_grid(static_cast<double>(steps) * c.oracle.volterra_dt, static_cast<int>(steps));
        const VolterraResult r = volterra_p0(params, sink, c.x0, grid, c.ilt.talbot_nodes);
        for (std::size_t i : vo_idx) volterra.origin.push_back(r.p0[i]);
    });

    CsvWriter csv(out / "diff.csv", {"t", "observable", "analytic", "cn", "volterra",
                                     "cn_minus_analytic", "volterra_minus_analytic"});
    auto at = [](const Route& r, const std::vector<double>& v, std::size_t i) {
        return r.ok && i < v.size() ? v[i] : nan_value;
    };
    for (std::size_t i = 0; i < nt; ++i) {
        const double a = at(analytic, analytic.origin, i);
        const double b = at(cn, cn.origin, i);
        const double v = at(volterra, volterra.origin, i);
        csv.row({c.t[i], std::string("origin"), a, b, v, b - a, v - a});
    }
    for (std::size_t i = 0; i < nt; ++i) {
        const double a = at(analytic, analytic.survival, i);
        const double b = at(cn, cn.survival, i);
        csv.row({c.t[i], std::string("survival"), a, b, nan_value, b - a, nan_value});
    }

    json diffs = json::array();
    bool all_pass = true;
    auto add_diff = [&](const char* observable, const char* pair, const Route& r1,
                        const std::vector<double>& v1, const Route& r2, const std::vector<double>& v2) {
        if (!r1.ok || !r2.ok) return;
        const DiffStats d = diff_stats(v1, v2);
        const bool pass = d.sup <= c.compare_tol;
        all_pass = all_pass && pass;
        diffs.push_back({{"observable", observable},
                         {"pair", pair},
                         {"sup", d.sup},
                         {"l2", d.l2},
                         {"tolerance", c.compare_tol},
                         {"pass", pass}});
    };
    add_diff("origin", "cn-analytic", cn, cn.origin, analytic, analytic.origin);
    add_diff("origin", "volterra-analytic", volterra, volterra.origin, analytic, analytic.origin);
    add_diff("origin", "cn-volterra", cn, cn.origin, volterra, volterra.origin);
    add_diff("survival", "cn-analytic", cn, cn.survival, analytic, analytic.survival);

    json summary = base_summary("compare", c);
    summary["routes"] = routes;
    if (analytic.ok) summary["ilt"] = ilt_block;
    summary["differences"] = diffs;
    summary["pass"] = all_pass && !diffs.empty();
    summary["literal_forms"] = literal_report(c);
    summary["files"] = {"diff.csv", "summary.json"};

    int code = 0;
    if (!analytic.ok && !cn.ok && !volterra.ok) {
        summary["status"] = "error";
        code = 3;
    } else if (!analytic.ok || !cn.ok || !volterra.ok) {
        summary["status"] = "partial";
    }
    write_json(out / "summary.json", summary);
    return {summary, code};
}

CommandOutcome cmd_sweep(const RunConfig& c, const fs::path& out)
{
    validate(c);
    prepare_dir(out);

    std::vector<std::string> header;
    for (const auto& axis : c.sweep) header.push_back(axis.key);
    for (const char* col : {"t", "S", "P0", "status"}) header.emplace_back(col);

    std::size_t cells = c.sweep.empty() ? 0 : 1;
    for (const auto& axis : c.sweep) cells *= axis.values.size();

    struct Cell {
        std::vector<double> key;
        std::vector<double> S, P0;
        std::string status = "ok";
    };
    std::vector<Cell> results(cells);

    parallel_for(cells, [&](std::size_t index) {
        Cell& cell = results[index];
        // First axis varies slowest.
        std::size_t rem = index;
        cell.key.resize(c.sweep.size());
        for (std::size_t a = c.sweep.size(); a-- > 0;) {
            const auto& values = c.sweep[a].values;
            cell.key[a] = values[rem % values.size()];
            rem /= values.size();
        }
        try {
            RunConfig local = c;
            local.sweep.clear();
            for (std::size_t a = 0; a < c.sweep.size(); ++a) {
                const std::string& key = c.sweep[a].key;
                const auto dot = key.find('.');
                apply_setting(local, key.substr(0, dot), key.substr(dot + 1),
                              format_double(cell.key[a]));
            }
            validate(local);
            const ModelParams params = model_params(local);
            const SinkSpec sink = sink_spec(local);
            if (local.sweep_route == "cn") {
                std::vector<std::size_t> idx;
                for (double t : local.t) idx.push_back(step_index(t, local.oracle.dt, "oracle.dt"));
                const double t_max =
                    static_cast<double>(*std::max_element(idx.begin(), idx.end())) * local.oracle.dt;
                GridSpec grid = oracle_grid(local, params, t_max);
                grid.t_max = t_max;
                const TimeGridField field = cn_solve(params, sink, local.x0, grid);
                for (std::size_t i : idx) {
                    cell.S.push_back(field.survival[i]);
                    cell.P0.push_back(field.origin[i]);
                }
            } else {
                const AnalyticSolution sol(params, sink, local.x0, local.ilt, local.closure);
                for (double t : local.t) {
                    cell.S.push_back(sol.survival(t).value);
                    cell.P0.push_back(sol.origin(t).value);
                }
            }
        } catch (const std::exception& e) {
            cell.status = std::string("error: ") + e.what();
            cell.S.assign(c.t.size(), nan_value);
            cell.P0.assign(c.t.size(), nan_value);
        }
    });

    CsvWriter csv(out / "field.csv", header);
    std::size_t failures = 0;
    for (const Cell& cell : results) {
        failures += cell.status != "ok";
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            std::vector<CsvCell> row(cell.key.begin(), cell.key.end());
            row.emplace_back(c.t[i]);
            row.emplace_back(cell.S[i]);
            row.emplace_back(cell.P0[i]);
            row.emplace_back(cell.status);
            csv.row(row);
        }
    }

    // Survival must not increase with the strength of an absorbing sink.
    json checks = json::array();
    bool sigma_swept = false;
    for (const auto& axis : c.sweep) sigma_swept = sigma_swept || axis.key == "model.sigma";
    if (c.sigma == -1 && !sigma_swept) {
        for (std::size_t a = 0; a < c.sweep.size(); ++a) {
            const std::string& key = c.sweep[a].key;
            if (key != "sink.alpha0" && key != "sink.alpha1" && key != "sink.alpha" &&
                key != "sink.beta")
                continue;
            std::size_t stride = 1;
            for (std::size_t b = a + 1; b < c.sweep.size(); ++b) stride *= c.sweep[b].values.size();
            const std::size_t n = c.sweep[a].values.size();
            std::size_t violations = 0, compared = 0;
            for (std::size_t i = 0; i < cells; ++i) {
                const std::size_t pos = (i / stride) % n;
                if (pos + 1 >= n) continue;
                const std::size_t j = i + stride;
                const double da = c.sweep[a].values[pos + 1] - c.sweep[a].values[pos];
                if (results[i].status != "ok" || results[j].status != "ok" || da == 0.0) continue;
                for (std::size_t k = 0; k < c.t.size(); ++k) {
                    ++compared;
                    const double dS = results[j].S[k] - results[i].S[k];
                    if (dS * da > 1e-9) ++violations;
                }
            }
            checks.push_back({{"axis", key},
                              {"property", "S nonincreasing in sink strength"},
                              {"comparisons", compared},
                              {"violations", violations},
                              {"pass", violations == 0}});
        }
    }

    json summary = base_summary("sweep", c);
    summary["cells"] = cells;
    summary["rows"] = csv.rows();
    summary["failures"] = failures;
    summary["checks"] = checks;
    summary["files"] = {"field.csv", "summary.json"};
    write_json(out / "summary.json", summary);
    return {summary, 0};
}

CommandOutcome cmd_selftest(const RunConfig& c, const std::optional<fs::path>& out)
{
    json checks = json::array();
    bool all = true;
    auto check = [&](const std::string& name, double value, double expected, double tol) {
        const double err = std::abs(value - expected);
        const bool pass = err <= tol;
        all = all && pass;
        checks.push_back({{"name", name},
                          {"value", value},
                          {"expected", expected},
                          {"error", err},
                          {"tolerance", tol},
                          {"pass", pass}});
    };
    auto guarded = [&](const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            all = false;
            checks.push_back({{"name", name}, {"pass", false}, {"message", e.what()}});
        }
    };

    guarded("talbot pairs", [&] {
        check("talbot 1/s at t=7", talbot([](Complex s) { return 1.0 / s; }, 7.0), 1.0, 1e-8);
        check("talbot 1/(s+2) at t=1", talbot([](Complex s) { return 1.0 / (s + 2.0); }, 1.0),
              std::exp(-2.0), 1e-8);
        check("talbot 1/s^2 at t=3", talbot([](Complex s) { return 1.0 / (s * s); }, 3.0), 3.0, 1e-8);
        check("talbot exp(-sqrt s) at t=1",
              talbot([](Complex s) { return std::exp(-std::sqrt(s)); }, 1.0),
              std::exp(-0.25) / std::sqrt(4.0 * std::numbers::pi), 1e-8);
    });
    guarded("stehfest pairs", [&] {
        check("stehfest 1/s at t=1", stehfest([](Complex s) { return 1.0 / s; }, 1.0), 1.0, 1e-6);
        check("stehfest 1/sqrt(s) at t=1",
              stehfest([](Complex s) { return 1.0 / std::sqrt(s); }, 1.0),
              1.0 / std::sqrt(std::numbers::pi), 1e-4);
        check("stehfest exp(-sqrt s) at t=1",
              stehfest([](Complex s) { return std::exp(-std::sqrt(s)); }, 1.0),
              std::exp(-0.25) / std::sqrt(4.0 * std::numbers::pi), 1e-4);
    });
    guarded("special functions", [&] {
        check("E1(1)", (scaled_exp_integral_e1(Complex(1.0, 0.0)) * std::exp(-1.0)).real(),
              0.21938393439552027, 1e-13);
    });
    guarded("sink-free propagator", [&] {
        const ModelParams p(1.0, 1.0);
        const Complex s(1.3, 0.7);
        auto G = [&](double x) { return exact_v_green(x, 0.5, s, p); };
        const double h = 1e-6;
        const Complex jump_x0 = (G(0.5 + h) - G(0.5)) / h - (G(0.5) - G(0.5 - h)) / h;
        check("derivative jump at the source is -1/D", jump_x0.real(), -1.0, 1e-4);
        const Complex cusp = (G(h) - G(0.0)) / h - (G(0.0) - G(-h)) / h + 2.0 * p.omega() * G(0.0);
        check("cusp condition G'(0+) - G'(0-) + 2 omega G(0) = 0", std::abs(cusp), 0.0, 1e-4);
        check("mode integral 2/(p+q) at D=1, omega=2, s=3",
              decaying_mode_integral(spectral(ModelParams(1.0, 2.0), Complex(3.0, 0.0))).real(),
              2.0 / 3.0, 1e-15);
    });
    guarded("degeneracy ladder", [&] {
        const ModelParams p(1.0, 1.0);
        const Complex s(1.3, 0.7);
        const Complex ref = p0_none(s, p, 0.5).p0;
        const SinkSpec laws[] = {ConstantSink{0.0}, LinearSink{0.0}, InverseTimeSink{0.0, 0.01},
                                 ExpDecaySink{0.0, 1.0}};
        for (const SinkSpec& law : laws)
            check("zero-strength " + law_name(law) + " equals no sink",
                  std::abs(solve_origin(s, p, law, 0.5).p0 - ref), 0.0, 1e-10);
    });
    guarded("closure residuals", [&] {
        const ModelParams p(1.0, 1.0);
        const SinkSpec laws[] = {ConstantSink{0.5}, LinearSink{0.5}, InverseTimeSink{0.3, 0.01},
                                 ExpDecaySink{0.5, 1.0}};
        for (const SinkSpec& law : laws)
            check("closure residual " + law_name(law),
                  solve_origin(Complex(1.0, 0.5), p, law, 0.5).closure_residual(), 0.0, 1e-8);
    });

    json summary = base_summary("selftest", c);
    summary["checks"] = checks;
    summary["pass"] = all;
    if (!all) summary["status"] = "failed";
    if (out) {
        prepare_dir(*out);
        write_json(*out / "summary.json", summary);
    }
    return {summary, all ? 0 : 3};
}

int run_command(const std::string& command, const std::optional<fs::path>& config_path,
                const std::vector<std::string>& overrides, const std::optional<fs::path>& out,
                std::ostream& log, std::ostream& err)
{
    std::optional<fs::path> out_dir = out;
    auto fail = [&](int code, const std::string& kind, const std::string& field,
                    const std::string& message) {
        json doc{{"command", command},
                 {"status", "error"},
                 {"exit_code", code},
                 {"error", {{"kind", kind}, {"message", message}}}};
        if (!field.empty()) doc["error"]["field"] = field;
        err << doc.dump() << "\n";
        if (out_dir) {
            std::error_code ec;
            fs::create_directories(*out_dir, ec);
            if (!ec) {
                try {
                    write_json(*out_dir / "summary.json", doc);
                } catch (const std::exception&) {
                }
            }
        }
        return code;
    };

    try {
        RunConfig config;
        if (config_path) config = load_config(*config_path, overrides);
        else if (command == "selftest") config = parse_config("", overrides);
        else throw ValidationError("--config", "a config file is required");
        if (!out_dir && !config.out_dir.empty()) out_dir = fs::path(config.out_dir);

        if (command == "selftest") {
            CommandOutcome r = cmd_selftest(config, out_dir);
            log << r.summary.dump(2) << "\n";
            return r.exit_code;
        }
        if (!out_dir) throw ValidationError("--out", "an output directory is required");

        CommandOutcome r;
        if (command == "solve") r = cmd_solve(config, *out_dir);
        else if (command == "oracle") r = cmd_oracle(config, *out_dir);
        else if (command == "compare") r = cmd_compare(config, *out_dir);
        else if (command == "sweep") r = cmd_sweep(config, *out_dir);
        else throw ValidationError("command", "unknown command '" + command + "'");
        log << command << ": " << r.summary.value("status", "ok") << " -> " << out_dir->string()
            << "\n";
        return r.exit_code;
    } catch (const ValidationError& e) {
        return fail(2, "validation", e.field(), e.what());
    } catch (const SeriesDivergenceError& e) {
        return fail(3, "series_divergence", "", e.what());
    } catch (const NumericalError& e) {
        return fail(3, "numerical", "", e.what());
    } catch (const std::exception& e) {
        return fail(3, "runtime", "", e.what());
    }
}

} // namespace sinklab::cli
