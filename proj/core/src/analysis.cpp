#include <diffagg/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace diffagg {

HistogramResult density_histogram(std::span<const double> positions, const Grid& grid,
                                  std::size_t n_particles, std::size_t n_replicas) {
    grid.validate();
    if (n_particles < 1 || n_replicas < 1)
        throw config_error("density_histogram: n_particles and n_replicas must be >= 1");
    if (positions.size() != n_particles * n_replicas)
        throw std::invalid_argument(
            "density_histogram: expected n_particles * n_replicas = " +
            std::to_string(n_particles * n_replicas) + " positions, got " +
            std::to_string(positions.size()));

    std::vector<std::uint64_t> counts(grid.n_cells, 0);
    std::size_t dropped = 0;
    const double inv_dx = 1.0 / grid.dx;
    for (double x : positions) {
        const double rel = (x - grid.x_min) * inv_dx;
        if (rel < 0.0 || rel >= static_cast<double>(grid.n_cells)) {
            ++dropped;
            continue;
        }
        const auto idx = static_cast<std::size_t>(rel);
        if (idx >= grid.n_cells) { // guard the rel == n_cells rounding edge
            ++dropped;
            continue;
        }
        ++counts[idx];
    }

    HistogramResult res;
    res.density.grid = grid;
    res.density.values.resize(grid.n_cells);
    const double denom = static_cast<double>(n_particles * n_replicas) * grid.dx;
    for (std::size_t i = 0; i < grid.n_cells; ++i)
        res.density.values[i] = static_cast<double>(counts[i]) / denom;
    res.dropped = dropped;
    return res;
}

std::vector<HistogramResult> estimate_series(const ParticleTrajectory& traj,
                                             const Grid& grid) {
    std::vector<HistogramResult> out;
    if (traj.replicas.empty()) return out;
    const std::size_t m = traj.replicas.size();
    out.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<double> pooled;
        std::size_t n = traj.replicas[0][k].positions.size();
        pooled.reserve(n * m);
        for (const auto& rep : traj.replicas) {
            if (rep.size() != traj.times.size())
                throw std::invalid_argument("estimate_series: ragged trajectory");
            pooled.insert(pooled.end(), rep[k].positions.begin(), rep[k].positions.end());
        }
        auto h = density_histogram(pooled, grid, n, m);
        h.density.time = traj.times[k];
        out.push_back(std::move(h));
    }
    return out;
}

namespace {

// Binning-friendly equality for snapshot times.
bool near(double s, double t) { return std::abs(s - t) <= 1e-9 * std::max(1.0, std::abs(t)); }

} // namespace

double error_norm(const std::vector<GridDensity>& u, const std::vector<GridDensity>& v,
                  double p) {
    if (u.size() != v.size() || u.empty())
        throw std::invalid_argument("error_norm: series sizes differ or are empty");
    if (!(p >= 1.0)) // NaN rejected too
        throw std::domain_error("error_norm: p must be >= 1 (or infinity)");
    const bool is_inf = std::isinf(p);
    double worst = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k].validate();
        v[k].validate();
        if (!u[k].grid.same_as(v[k].grid))
            throw std::invalid_argument("error_norm: snapshot grids differ");
        if (!near(u[k].time, v[k].time))
            throw std::invalid_argument("error_norm: snapshot times differ");
        const double dx = u[k].grid.dx;
        double acc = 0.0;
        for (std::size_t i = 0; i < u[k].values.size(); ++i) {
            const double e = std::abs(u[k].values[i] - v[k].values[i]);
            if (is_inf)
                acc = std::max(acc, e);
            else if (p == 1.0)
                acc += e;
            else if (p == 2.0)
                acc += e * e;
            else
                acc += std::pow(e, p);
        }
        double norm;
        if (is_inf)
            norm = acc;
        else if (p == 1.0)
            norm = dx * acc;
        else if (p == 2.0)
            norm = std::sqrt(dx * acc);
        else
            norm = std::pow(dx * acc, 1.0 / p);
        worst = std::max(worst, norm);
    }
    return worst;
}

std::vector<double> eoc(std::span<const double> errors) {
    if (errors.size() < 2)
        throw std::invalid_argument("eoc: need at least two errors");
    for (double e : errors)
        if (!(e > 0.0))
            throw std::domain_error("eoc: errors must be > 0");
    std::vector<double> out;
    out.reserve(errors.size() - 1);
    for (std::size_t k = 0; k + 1 < errors.size(); ++k)
        out.push_back(std::log2(errors[k] / errors[k + 1]));
    return out;
}

std::vector<double> running_supremum(const std::vector<GridDensity>& series) {
    if (series.empty())
        throw std::invalid_argument("running_supremum: empty series");
    std::vector<double> out;
    out.reserve(series.size());
    double run = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        s.validate();
        for (double v : s.values) run = std::max(run, v);
        out.push_back(run);
    }
    return out;
}

GridDensity restrict_to(const GridDensity& fine, const Grid& coarse) {
    fine.validate();
    coarse.validate();
    const double ratio_d = coarse.dx / fine.grid.dx;
    const auto ratio = static_cast<std::size_t>(std::llround(ratio_d));
    if (ratio < 1 || std::abs(ratio_d - static_cast<double>(ratio)) > 1e-9)
        throw std::invalid_argument("restrict_to: coarse dx must be an integer multiple "
                                    "of fine dx");
    if (std::abs(fine.grid.x_min - coarse.x_min) > 1e-9 * std::max(1.0, std::abs(coarse.x_min)))
        throw std::invalid_argument("restrict_to: grids must share x_min");
    if (fine.grid.n_cells != ratio * coarse.n_cells)
        throw std::invalid_argument("restrict_to: fine grid must tile the coarse grid");

    GridDensity out{coarse, std::vector<double>(coarse.n_cells), fine.time};
    for (std::size_t i = 0; i < coarse.n_cells; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < ratio; ++k) s += fine.values[i * ratio + k];
        out.values[i] = s / static_cast<double>(ratio);
    }
    return out;
}

double mass(const GridDensity& u) {
    u.validate();
    double s = 0.0;
    for (double v : u.values) s += v;
    return u.grid.dx * s;
}

} // namespace diffagg
