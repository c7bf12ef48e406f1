// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// --known-fail=1,4 turns the exit status into "the failing set is exactly {1,4}";
// the FAIL lines are printed either way.

#include "sinklab/cli/commands.hpp"
#include "sinklab/cli/config.hpp"
#include "sinklab/closure.hpp"
#include "sinklab/green.hpp"
#include "sinklab/ilt.hpp"
#include "sinklab/observables.hpp"
#include "sinklab/oracle.hpp"
#include "sinklab/volterra.hpp"

#include "json.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace sinklab;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::set<int> failed;
double worst_closure = 0.0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        ++failures;
        failed.insert(id);
    }
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void note_closure(const AnalyticSolution& a) { worst_closure = std::max(worst_closure, a.max_closure_residual()); }
void note_closure(const OriginResponse& r) { worst_closure = std::max(worst_closure, r.closure_residual()); }

const ModelParams reference(1.0, 1.0);
const double ref_x0 = 0.5;

std::vector<SinkSpec> reference_laws()
{
    return {ConstantSink{0.5}, LinearSink{0.5}, InverseTimeSink{0.3, 0.01}, ExpDecaySink{0.5, 1.0}};
}

void ilt_correctness()
{
    const double pi = std::numbers::pi;
    struct Pair {
        const char* name;
        LaplaceFn F;
        std::function<double(double)> f;
        bool smooth;
    };
    const std::vector<Pair> pairs = {
        {"1/s", [](Complex s) { return 1.0 / s; }, [](double) { return 1.0; }, true},
        {"1/s^2", [](Complex s) { return 1.0 / (s * s); }, [](double t) { return t; }, true},
        {"1/(s+2)", [](Complex s) { return 1.0 / (s + 2.0); }, [](double t) { return std::exp(-2.0 * t); }, true},
        {"1/sqrt(s)", [](Complex s) { return 1.0 / std::sqrt(s); }, [=](double t) { return 1.0 / std::sqrt(pi * t); }, false},
        {"exp(-sqrt(s))", [](Complex s) { return std::exp(-std::sqrt(s)); },
         [=](double t) { return std::exp(-0.25 / t) / std::sqrt(4.0 * pi * t * t * t); }, false},
    };
    double smooth = 0.0, branch = 0.0, st = 0.0;
    int flagged = 0;
    std::string st_where;
    for (const auto& p : pairs)
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
            const double e = std::abs(talbot(p.F, t) - p.f(t));
            (p.smooth ? smooth : branch) = std::max(p.smooth ? smooth : branch, e);
            const double es = std::abs(stehfest(p.F, t) - p.f(t));
            if (es > st) {
                st = es;
                st_where = std::string(p.name) + " at t=" + fmt("%g", t);
            }
            if (p.smooth && invert_checked(p.F, t, IltConfig{}).flagged) ++flagged;
        }
    report(1, "ILT correctness", smooth < 1e-8 && branch < 1e-4 && st < 1e-4 && flagged == 0,
           "talbot smooth " + fmt("%.2e", smooth) + " (<1e-8), branch " + fmt("%.2e", branch) +
               " (<1e-4), stehfest " + fmt("%.2e", st) + " (<1e-4, worst " + st_where + "), smooth flags set " +
               std::to_string(flagged));
}

void green_bridge()
{
    const auto cn = cn_solve(reference, SinkSpec{NoSink{}}, ref_x0, make_grid(reference, ref_x0, 40.0, 0.005, 1e-3));
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0})
        worst = std::max(worst, std::abs(numeric_laplace(cn.origin, cn.dt, s).value -
                                         exact_v_green(0.0, ref_x0, s, reference).real()));
    report(2, "Green's function bridge", worst < 1e-3, "max |L[P_cn] - G| over s in {0.5,1,2} = " + fmt("%.2e", worst));
}

void equilibrium()
{
    double worst_cn = 0.0, worst_ilt = 0.0;
    for (double omega : {1.0, 2.0}) {
        const ModelParams params(1.0, omega);
        const double t = 5.0 / (params.q() * params.q());
        GridSpec grid = make_grid(params, ref_x0, t, 0.005, 1e-2);
        grid.snapshot_times = {t};
        const auto cn = cn_solve(params, SinkSpec{NoSink{}}, ref_x0, grid);
        for (std::size_t i = 0; i < cn.x.size(); ++i)
            worst_cn = std::max(worst_cn, std::abs(cn.snapshots[0][i] - equilibrium_profile(params, cn.x[i])));
        AnalyticSolution a(params, NoSink{}, ref_x0);
        std::vector<double> xs;
        for (double x = -4.0; x <= 4.0 + 1e-12; x += 0.1) xs.push_back(x);
        const auto f = a.field(t, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            worst_ilt = std::max(worst_ilt, std::abs(f[i].value - equilibrium_profile(params, xs[i])));
        note_closure(a);
    }
    report(3, "Equilibrium", worst_cn < 1e-3 && worst_ilt < 1e-3,
           "sup error at t = 5/(D q^2), omega in {1,2}: cn " + fmt("%.2e", worst_cn) + ", ilt " +
               fmt("%.2e", worst_ilt));
}

void conservation_and_routes()
{
    const auto none = cn_solve(reference, SinkSpec{NoSink{}}, ref_x0, make_grid(reference, ref_x0, 5.0, 0.005, 1e-3));
    double dev = 0.0;
    for (double S : none.survival) dev = std::max(dev, std::abs(S - 1.0));

    double flux = 0.0;
    double route_worst = 0.0;
    std::string route_detail;
    const auto vgrid = uniform_grid(5.0, 5000);
    for (const auto& sink : reference_laws()) {
        const auto cn = cn_solve(reference, sink, ref_x0, make_grid(reference, ref_x0, 5.0, 0.005, 1e-3));
        flux = std::max(flux, flux_identity_residual(cn.t, cn.survival, cn.flux, reference.sigma()));

        const auto vo = volterra_p0(reference, sink, ref_x0, vgrid);
        AnalyticSolution a(reference, sink, ref_x0);
        double ia_cn = 0.0, ia_vo = 0.0, cn_vo = 0.0;
        for (std::size_t n = 100; n <= 5000; n += 20) {
            const double il = a.origin(vgrid[n]).value;
            ia_cn = std::max(ia_cn, std::abs(il - cn.origin[n]));
            ia_vo = std::max(ia_vo, std::abs(il - vo.p0[n]));
            cn_vo = std::max(cn_vo, std::abs(cn.origin[n] - vo.p0[n]));
        }
        note_closure(a);
        route_worst = std::max({route_worst, ia_cn, ia_vo, cn_vo});
        route_detail += law_name(sink) + " " + fmt("%.1e", std::max({ia_cn, ia_vo, cn_vo})) + "; ";
    }
    report(4, "Conservation and flux identity", dev < 1e-4 && flux < 1e-3,
           "max |S-1| without sink " + fmt("%.2e", dev) + " (<1e-4), worst flux residual " + fmt("%.2e", flux) +
               " (<1e-3)");
    report(5, "Four-law route agreement", route_worst < 1e-2,
           "pairwise sup on t in [0.1,5]: " + route_detail + "tolerance 1e-2");
}

void degeneracy()
{
    const std::vector<SinkSpec> zeros = {ConstantSink{0.0}, LinearSink{0.0}, InverseTimeSink{0.0, 0.01},
                                         ExpDecaySink{0.0, 1.0}};
    double ladder = 0.0, limit = 0.0;
    for (Complex s : testing::random_laplace_points(50, 101)) {
        const auto none = solve_origin(s, reference, NoSink{}, ref_x0);
        for (const auto& z : zeros) {
            const auto r = solve_origin(s, reference, z, ref_x0);
            note_closure(r);
            ladder = std::max(ladder, testing::rel_diff(r.p0, none.p0));
        }
        const ModelParams tiny(1.0, 1e-12), free(1.0, 0.0);
        for (double x : {-1.0, 0.0, 0.3, 2.0})
            limit = std::max(limit, testing::rel_diff(exact_v_green(x, ref_x0, s, tiny),
                                                      free_drift_green(x, ref_x0, s, free)));
    }
    report(6, "Degeneracy ladder", ladder < 1e-10 && limit < 1e-10,
           "zero-strength laws vs no sink " + fmt("%.2e", ladder) + ", omega -> 0 vs free " + fmt("%.2e", limit));
}

void exponential_series()
{
    SeriesState state;
    const ExpDecaySink sink{0.5, 1.0};
    const auto full = p0_expdecay(1.0, reference, sink, ref_x0, {}, &state);
    note_closure(full);
    bool geometric = state.terms.size() > 4;
    double max_ratio = 0.0;
    for (std::size_t n = 2; n + 1 < state.terms.size(); ++n) {
        const double r1 = std::abs(state.terms[n + 1] / state.terms[n]);
        const double r0 = std::abs(state.terms[n] / state.terms[n - 1]);
        max_ratio = std::max(max_ratio, r1);
        geometric = geometric && r1 < 1.0 && r1 <= r0 * (1.0 + 1e-12);
    }
    SeriesOptions a, b;
    a.fixed_depth = state.depth;
    b.fixed_depth = state.depth + 5;
    const double change = std::abs(p0_expdecay(1.0, reference, sink, ref_x0, a).p0 -
                                   p0_expdecay(1.0, reference, sink, ref_x0, b).p0);
    report(7, "Exponential-series behavior", geometric && change < 1e-8,
           "depth N = " + std::to_string(state.depth) + ", term ratios < 1 and shrinking past n = 2 (max " +
               fmt("%.3f", max_ratio) + "), |P(N+5) - P(N)| = " + fmt("%.2e", change));
}

void literal_report_check()
{
    cli::RunConfig c = cli::parse_config(
        "[model]\nD = 1\nomega = 1\nx0 = 0.5\n[sink]\nlaw = constant\nalpha0 = 0.5\n[output]\nt = 0.5, 1, 2\n");
    const fs::path out = fs::temp_directory_path() / ("sinklab_acceptance_" + std::to_string(::getpid()));
    const auto outcome = cli::cmd_compare(c, out);
    const auto& blocks = outcome.summary["literal_forms"]["blocks"];
    bool valid = blocks.is_array() && blocks.size() == 4;
    int nonzero = 0;
    for (const auto& b : blocks) {
        valid = valid && b.contains("name") && b.contains("status") && b.contains("points");
        if (b.value("status", "") == "ok") {
            valid = valid && b["points"].size() == 3 && b["max_abs_diff"].is_number();
            for (const auto& p : b["points"])
                valid = valid && p["literal"].contains("re") && p["rederived"].contains("im") &&
                        p["abs_diff"].is_number();
            if (b["max_abs_diff"].get<double>() > 0.0) ++nonzero;
        }
    }
    fs::remove_all(out);
    report(8, "Literal-form diagnostics", valid && nonzero > 0,
           std::to_string(blocks.size()) + " blocks, " + std::to_string(nonzero) +
               " with nonzero deviation at omega = 1, schema " + (valid ? "valid" : "invalid"));
}

void closure_residual()
{
    for (const auto& sink : reference_laws())
        for (Complex s : testing::random_laplace_points(20, 211)) note_closure(solve_origin(s, reference, sink, ref_x0));
    report(9, "Closure residual", worst_closure < 1e-8,
           "largest relative residual across every analytic solve " + fmt("%.2e", worst_closure) + " (<1e-8)");
}

} // namespace

std::set<int> parse_known(int argc, char** argv)
{
    std::set<int> known;
    const std::string key = "--known-fail=";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind(key, 0) != 0) continue;
        std::stringstream in(arg.substr(key.size()));
        for (std::string item; std::getline(in, item, ',');)
            if (!item.empty()) known.insert(std::stoi(item));
    }
    return known;
}

int main(int argc, char** argv)
{
    const std::set<int> known = parse_known(argc, argv);
    const auto start = std::chrono::steady_clock::now();
    ilt_correctness();
    green_bridge();
    equilibrium();
    conservation_and_routes();
    degeneracy();
    exponential_series();
    literal_report_check();
    closure_residual();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 9 criteria failed (%.1f s)\n", failures, secs);
    if (known.empty()) return failures == 0 ? 0 : 1;
    std::string list;
    for (int id : known) list += (list.empty() ? "" : ",") + std::to_string(id);
    const bool match = failed == known;
    std::printf("known failures {%s}: %s\n", list.c_str(), match ? "matched" : "MISMATCH");
    return match ? 0 : 1;
}
