#include "sinklab/oracle.hpp"

#include "sinklab/errors.hpp"
#include "sinklab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace sinklab {

namespace {

int step_count(double t_max, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max", "must be positive");
    double n = std::round(t_max / dt);
    if (n < 1.0 || std::abs(n * dt - t_max) > 1e-9 * t_max)
        throw ValidationError("t_max", "must be an integer multiple of dt");
    return static_cast<int>(n);
}

std::vector<int> snap_times(const std::vector<double>& times, double dt, int steps)
{
    std::vector<int> idx;
    idx.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0) || t > steps * dt * (1.0 + 1e-12))
            throw ValidationError("snapshot_times", "time outside [0, t_max]");
        idx.push_back(static_cast<int>(std::lround(t / dt)));
    }
    return idx;
}

// Hat of half-width h sampled at nodes, rescaled so that sum w dx = 1.
std::vector<double> hat_weights(const std::vector<double>& x, double h, double dx)
{
    std::vector<double> w(x.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w[i] = std::max(0.0, 1.0 - std::abs(x[i]) / h) / h;
        total += w[i] * dx;
    }
    for (double& v : w) v /= total;
    return w;
}

// Thomas algorithm; a = sub, b = diag, c = super. Overwrites d with the solution.
void solve_tridiagonal(const std::vector<double>& a, std::vector<double> b,
                       const std::vector<double>& c, std::vector<double>& d)
{
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (b[i - 1] == 0.0) throw NumericalError("tridiagonal solve hit a zero pivot");
        double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    if (b[n - 1] == 0.0) throw NumericalError("tridiagonal solve hit a zero pivot");
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

struct Transport {
    std::vector<double> lower, diag, upper;
};

Transport build_transport(const ModelParams& params, const std::vector<double>& x, double dx)
{
    const double D = params.diffusion();
    const double w = params.omega();
    const std::size_t n = x.size();
    const std::size_t c = (n - 1) / 2;
    Transport op{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                 std::vector<double>(n, 0.0)};
    auto face_sign = [&](std::size_t left) { return left < c ? -1.0 : 1.0; };
    const double diff = D / (dx * dx);
    const double adv = D * w / (2.0 * dx);
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) {
            // face i+1/2: F = D (P_{i+1} - P_i)/dx + D omega sgn (P_i + P_{i+1})/2
            double s = face_sign(i);
            op.upper[i] += diff + adv * s;
            op.diag[i] += -diff + adv * s;
        }
        if (i > 0) {
            double s = face_sign(i - 1);
            op.lower[i] += diff - adv * s;
            op.diag[i] += -diff - adv * s;
        }
    }
    return op;
}

} // namespace

GridSpec make_grid(const ModelParams& params, double x0, double t_max, double dx, double dt)
{
    validate_source(x0);
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ValidationError("dx", "must be positive");
    double reach = params.omega() > 0.0 ? 23.1 / params.omega()
                                        : 8.0 * std::sqrt(params.diffusion() * t_max) * 1.01;
    double half = std::abs(x0) + reach;
    int cells = static_cast<int>(std::ceil(half / dx));
    GridSpec grid;
    grid.half_length = cells * dx;
    grid.nx = 2 * cells + 1;
    grid.dt = dt;
    grid.t_max = t_max;
    return grid;
}

void validate(const GridSpec& grid, const ModelParams& params, double x0)
{
    validate_source(x0);
    if (!(grid.half_length > 0.0) || !std::isfinite(grid.half_length))
        throw ValidationError("half_length", "must be positive");
    if (grid.nx < 5 || grid.nx % 2 == 0)
        throw ValidationError("nx", "must be odd and at least 5");
    step_count(grid.t_max, grid.dt);
    const double L = grid.half_length;
    if (params.omega() > 0.0) {
        if (std::exp(-params.omega() * (L - std::abs(x0))) >= 1e-10)
            throw ValidationError("half_length", "domain too short: exp(-omega (L - |x0|)) >= 1e-10");
    } else if (L - std::abs(x0) <= 8.0 * std::sqrt(params.diffusion() * grid.t_max)) {
        throw ValidationError("half_length", "domain too short: need L - |x0| > 8 sqrt(D t_max)");
    }
    const double dx = grid.dx();
    if (params.omega() * dx >= 2.0)
        throw ValidationError("nx", "cell Peclet number omega dx must stay below 2");
    if (grid.delta_width != 0.0 && !(grid.delta_width >= dx))
        throw ValidationError("delta_width", "must be at least dx");
}

double TimeGridField::value_at(std::size_t snapshot, double xq) const
{
    if (snapshot >= snapshots.size()) throw ValidationError("snapshot", "index out of range");
    if (xq < x.front() || xq > x.back()) throw ValidationError("x", "outside the grid");
    const auto& P = snapshots[snapshot];
    double pos = (xq - x.front()) / dx;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= x.size()) return P.back();
    double f = pos - static_cast<double>(i);
    return (1.0 - f) * P[i] + f * P[i + 1];
}

TimeGridField cn_solve(const ModelParams& params, const SinkSpec& sink, double x0,
                       const GridSpec& grid)
{
    validate(sink);
    return cn_solve(params, RateFn([sink](double t) { return sink_strength(sink, t); }), x0, grid);
}

TimeGridField cn_solve(const ModelParams& params, const RateFn& rate, double x0,
                       const GridSpec& grid)
{
    validate(grid, params, x0);
    const int steps = step_count(grid.t_max, grid.dt);
    const std::size_t n = static_cast<std::size_t>(grid.nx);
    const std::size_t centre = (n - 1) / 2;
    const double dx = grid.dx();
    const double dt = grid.dt;
    const double sigma = params.sigma();

    TimeGridField out;
    out.dx = dx;
    out.dt = dt;
    out.delta_width = grid.delta_width == 0.0 ? 2.0 * dx : grid.delta_width;
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.x[i] = (static_cast<double>(i) - static_cast<double>(centre)) * dx;

    const auto offset = static_cast<long>(std::lround(x0 / dx));
    const std::size_t source = static_cast<std::size_t>(static_cast<long>(centre) + offset);
    out.x0_used = out.x[source];

    const std::vector<double> hat = hat_weights(out.x, out.delta_width, dx);
    const Transport op = build_transport(params, out.x, dx);

    std::vector<double> P(n, 0.0);
    P[source] = 1.0 / dx;

    const std::vector<int> snap_idx = snap_times(grid.snapshot_times, dt, steps);
    out.snapshot_times.resize(snap_idx.size());
    out.snapshots.resize(snap_idx.size());

    struct Probe {
        std::size_t i;
        double f;
    };
    std::vector<Probe> probes;
    for (double xp : grid.probe_x) {
        if (!(xp >= out.x.front() && xp <= out.x.back()))
            throw ValidationError("probe_x", "probe outside the grid");
        double pos = (xp - out.x.front()) / dx;
        auto i = std::min(static_cast<std::size_t>(std::floor(pos)), n - 2);
        probes.push_back({i, pos - static_cast<double>(i)});
    }
    out.probe_x = grid.probe_x;
    out.probes.resize(probes.size());

    auto k_at = [&](double t) {
        double k = rate(t);
        if (!std::isfinite(k))
            throw NumericalError("sink rate is not finite at t = " + std::to_string(t));
        return k;
    };

    auto record = [&](int step, double t, double k) {
        double S = 0.0, sm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            S += P[i] * dx;
            sm += hat[i] * P[i] * dx;
            out.min_value = std::min(out.min_value, P[i]);
        }
        out.t.push_back(t);
        out.survival.push_back(S);
        out.origin.push_back(P[centre]);
        out.sink_mean.push_back(sm);
        out.flux.push_back(2.0 * k * sm);
        for (std::size_t j = 0; j < probes.size(); ++j)
            out.probes[j].push_back((1.0 - probes[j].f) * P[probes[j].i] +
                                    probes[j].f * P[probes[j].i + 1]);
        for (std::size_t j = 0; j < snap_idx.size(); ++j) {
            if (snap_idx[j] == step) {
                out.snapshot_times[j] = t;
                out.snapshots[j] = P;
            }
        }
    };

    out.t.reserve(static_cast<std::size_t>(steps) + 1);
    record(0, 0.0, k_at(0.0));

    std::vector<double> a(n), b(n), c(n), rhs(n);

    // (I - theta h A(t_new)) P_new = (I + (1 - theta) h A(t_old)) P_old
    auto advance = [&](double h, double theta, double k_old, double k_new) {
        for (std::size_t i = 0; i < n; ++i) {
            double explicit_diag = op.diag[i] + 2.0 * sigma * k_old * hat[i];
            double r = P[i];
            if (theta < 1.0) {
                double lam = (1.0 - theta) * h;
                r += lam * explicit_diag * P[i];
                if (i > 0) r += lam * op.lower[i] * P[i - 1];
                if (i + 1 < n) r += lam * op.upper[i] * P[i + 1];
            }
            rhs[i] = r;
            a[i] = -theta * h * op.lower[i];
            c[i] = -theta * h * op.upper[i];
            b[i] = 1.0 - theta * h * (op.diag[i] + 2.0 * sigma * k_new * hat[i]);
        }
        solve_tridiagonal(a, b, c, rhs);
        P.swap(rhs);
    };

    for (int step = 1; step <= steps; ++step) {
        const double t_old = (step - 1) * dt;
        const double t_new = step * dt;
        if (step == 1) {
            advance(0.5 * dt, 1.0, 0.0, k_at(0.5 * dt));
            advance(0.5 * dt, 1.0, 0.0, k_at(t_new));
        } else {
            advance(dt, 0.5, k_at(t_old), k_at(t_new));
        }
        record(step, t_new, k_at(t_new));
    }
    return out;
}

McEstimate mc_solve(const ModelParams& params, const SinkSpec& sink, double x0,
                    const McOptions& options)
{
    validate(sink);
    validate_source(x0);
    if (params.sign() != SinkSign::absorbing)
        throw ValidationError("sigma", "Monte Carlo paths need an absorbing sink (sigma = -1)");
    if (options.paths < 1) throw ValidationError("n_paths", "must be positive");
    if (options.shards < 1) throw ValidationError("shards", "must be positive");
    if (!(options.delta_width > 0.0)) throw ValidationError("delta_width", "must be positive");
    const int steps = step_count(options.t_max, options.dt);
    const double dt = options.dt;
    const double h = options.delta_width;

    std::vector<double> k(static_cast<std::size_t>(steps) + 1);
    double k_max = 0.0;
    for (int i = 0; i <= steps; ++i) {
        k[i] = sink_strength(sink, i * dt);
        if (!std::isfinite(k[i])) throw NumericalError("sink rate is not finite on the path grid");
        k_max = std::max(k_max, k[i]);
    }
    if (dt * 2.0 * k_max / h >= 0.1)
        throw ValidationError("dt", "dt * max(2 k delta_h) must stay below 0.1");

    std::vector<double> sample_times = options.sample_times;
    if (sample_times.empty()) sample_times.push_back(options.t_max);
    const std::vector<int> sample_idx = snap_times(sample_times, dt, steps);

    const std::size_t ns = sample_idx.size();
    const auto shards = static_cast<std::size_t>(options.shards);
    std::vector<std::vector<double>> alive(shards, std::vector<double>(ns, 0.0));
    std::vector<std::vector<double>> abs_sum(shards, std::vector<double>(ns, 0.0));

    const double D = params.diffusion();
    const double drift = D * params.omega() * dt;
    const double noise = std::sqrt(2.0 * D * dt);
    auto hat = [h](double x) { return std::max(0.0, 1.0 - std::abs(x) / h) / h; };

    parallel_for(shards, [&](std::size_t shard) {
        std::int64_t count = options.paths / options.shards +
                             (static_cast<std::int64_t>(shard) < options.paths % options.shards ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                          static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(shard)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        auto& live = alive[shard];
        auto& dist = abs_sum[shard];
        for (std::int64_t p = 0; p < count; ++p) {
            double x = x0;
            bool killed = false;
            std::size_t next = 0;
            for (std::size_t j = 0; j < ns && sample_idx[j] == 0; ++j, ++next) {
                live[j] += 1.0;
                dist[j] += std::abs(x);
            }
            for (int i = 1; i <= steps && next < ns; ++i) {
                double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
                double x_new = x - drift * sgn + noise * normal(rng);
                if (k_max > 0.0) {
                    double rate = k[i - 1] * hat(x) + k[i] * hat(x_new); // trapezoid of 2 k delta_h
                    if (rate > 0.0 && uniform(rng) < -std::expm1(-dt * rate)) killed = true;
                }
                x = x_new;
                if (killed) break;
                while (next < ns && sample_idx[next] == i) {
                    live[next] += 1.0;
                    dist[next] += std::abs(x);
                    ++next;
                }
            }
        }
    });

    McEstimate est;
    est.t = sample_times;
    const double total = static_cast<double>(options.paths);
    for (std::size_t j = 0; j < ns; ++j) {
        double a = 0.0, d = 0.0;
        for (std::size_t s = 0; s < shards; ++s) {
            a += alive[s][j];
            d += abs_sum[s][j];
        }
        double S = a / total;
        est.t[j] = sample_idx[j] * dt;
        est.survival.push_back(S);
        est.survival_stderr.push_back(std::sqrt(S * (1.0 - S) / total));
        est.mean_abs_x.push_back(a > 0.0 ? d / a : 0.0);
    }
    return est;
}

NumericLaplace numeric_laplace(std::span<const double> series, double dt, double s, bool apply_tail)
{
    if (series.size() < 2) throw ValidationError("series", "need at least two samples");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("s", "must be positive and finite");
    const std::size_t intervals = series.size() - 1;
    const double t_max = static_cast<double>(intervals) * dt;
    if (s * t_max < 20.0 && !apply_tail)
        throw ValidationError("t_max", "s * t_max < 20; series too short for the requested s");

    auto f = [&](std::size_t i) { return std::exp(-s * static_cast<double>(i) * dt) * series[i]; };

    double value = 0.0;
    std::size_t simpson_end = intervals;
    if (intervals == 1) {
        value = 0.5 * dt * (f(0) + f(1));
        simpson_end = 0;
    } else if (intervals % 2 == 1) {
        simpson_end = intervals - 3;
        const std::size_t i = simpson_end;
        value += 3.0 * dt / 8.0 * (f(i) + 3.0 * f(i + 1) + 3.0 * f(i + 2) + f(i + 3));
    }
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
        value += dt / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));

    double tail_max = 0.0;
    for (std::size_t i = series.size() - 1 - intervals / 10; i < series.size(); ++i)
        tail_max = std::max(tail_max, std::abs(series[i]));
    const double decay = std::exp(-s * t_max) / s;

    NumericLaplace out{value, tail_max * decay, apply_tail};
    if (apply_tail) out.value += series.back() * decay;
    return out;
}

} // namespace sinklab
