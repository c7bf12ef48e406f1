#pragma once

#include "sinklab/model.hpp"
#include "sinklab/volterra.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sinklab {

// Finite-volume grid on [-L, L] with nx (odd) cell centres, one of them at 0.
struct GridSpec {
    double half_length = 0.0;
    int nx = 0;
    double dt = 1e-3;
    double t_max = 1.0;
    double delta_width = 0.0; // 0 selects 2 dx
    std::vector<double> snapshot_times;
    std::vector<double> probe_x; // positions recorded at every step

    double dx() const { return 2.0 * half_length / (nx - 1); }
};

// Grid with spacing close to dx whose half-length keeps the truncated mass
// negligible: exp(-omega L) < 1e-10 beyond the source, or L > 8 sqrt(D t_max)
// when omega = 0.
GridSpec make_grid(const ModelParams& params, double x0, double t_max, double dx, double dt);

void validate(const GridSpec& grid, const ModelParams& params, double x0);

struct TimeGridField {
    std::vector<double> x;
    std::vector<double> t; // every step, starting at 0
    std::vector<double> survival;
    std::vector<double> origin;    // P at the x = 0 node
    std::vector<double> sink_mean; // int delta_h(x) P(x) dx
    std::vector<double> flux;      // 2 k(t) sink_mean
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> snapshots;
    std::vector<double> probe_x;
    std::vector<std::vector<double>> probes; // probes[k][step], linear interpolation
    double dx = 0.0;
    double dt = 0.0;
    double delta_width = 0.0;
    double x0_used = 0.0;  // source position after snapping to a node
    double min_value = 0.0; // smallest P seen during the run

    // Linear interpolation of snapshot k at x.
    double value_at(std::size_t snapshot, double x) const;
};

// Crank-Nicolson in flux form with zero-flux outer faces, so the discrete
// mass sum P dx changes only through the sink. The delta is a hat of
// half-width delta_width centred on the origin node. The first step is
// replaced by two backward-Euler half steps to damp the delta initial data.
TimeGridField cn_solve(const ModelParams& params, const SinkSpec& sink, double x0,
                       const GridSpec& grid);
TimeGridField cn_solve(const ModelParams& params, const RateFn& rate, double x0,
                       const GridSpec& grid);

struct McOptions {
    std::int64_t paths = 100000;
    double dt = 1e-3;
    double t_max = 1.0;
    std::uint64_t seed = 1;
    double delta_width = 0.1; // half-width of the hat sink
    std::vector<double> sample_times;
    int shards = 64;
};

struct McEstimate {
    std::vector<double> t;
    std::vector<double> survival;
    std::vector<double> survival_stderr;
    std::vector<double> mean_abs_x; // over surviving paths
};

// Euler-Maruyama paths in the V potential, killed with probability
// 1 - exp(-dt * rate) per step using the trapezoid average of
// 2 k(t) delta_h(X) over the step. Absorbing sign only. The result depends
// on the seed and shard count, not on the thread count.
McEstimate mc_solve(const ModelParams& params, const SinkSpec& sink, double x0,
                    const McOptions& options);

struct NumericLaplace {
    double value;
    double remainder_bound; // max |P| over the last tenth of the series * exp(-s t_max) / s
    bool tail_applied;
};

// int_0^{t_max} exp(-s t) P(t) dt for a series sampled at uniform spacing dt
// starting at t = 0 (Simpson, with a 3/8 panel for odd interval counts).
// Requires s t_max >= 20 unless apply_tail adds P(t_max) exp(-s t_max) / s.
NumericLaplace numeric_laplace(std::span<const double> series, double dt, double s,
                               bool apply_tail = false);

} // namespace sinklab
