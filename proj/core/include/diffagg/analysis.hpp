#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <diffagg/grid.hpp>
#include <diffagg/particle.hpp>

namespace diffagg {

// Histogram density estimate from particle positions pooled over replicas:
//   u_i = count_i / (n_replicas * n_particles * dx),
// where count_i counts samples in [x_i - dx/2, x_i + dx/2).  Samples outside
// the grid are excluded from the bins and reported in `dropped`.
struct HistogramResult {
    GridDensity density;
    std::size_t dropped = 0;
};

HistogramResult density_histogram(std::span<const double> positions, const Grid& grid,
                                  std::size_t n_particles, std::size_t n_replicas);

// Histogram estimates for every recorded time of a trajectory.
std::vector<HistogramResult> estimate_series(const ParticleTrajectory& traj,
                                             const Grid& grid);

// max over snapshot pairs (times must agree) of the discrete p-norm of u - v:
// p = inf gives max_i |e_i|, finite p >= 1 gives (dx * sum |e_i|^p)^(1/p).
double error_norm(const std::vector<GridDensity>& u, const std::vector<GridDensity>& v,
                  double p);

// Experimental orders of convergence log2(e_k / e_{k+1}); errors must be > 0.
std::vector<double> eoc(std::span<const double> errors);

// Cumulative max over the series of per-snapshot suprema.
std::vector<double> running_supremum(const std::vector<GridDensity>& series);

// Conservative restriction of a fine grid function to an aligned coarser grid
// whose spacing is an integer multiple of the fine spacing (block averages).
GridDensity restrict_to(const GridDensity& fine, const Grid& coarse);

// dx * sum of cell values.
double mass(const GridDensity& u);

// One refinement study: per level the step parameter (dx or N), the three
// error norms against the reference, and the orders between adjacent levels
// (eoc vectors have one entry fewer than the level vectors).
struct ErrorReport {
    std::vector<double> levels;
    std::vector<double> err_inf, err_l1, err_l2;
    std::vector<double> eoc_inf, eoc_l1, eoc_l2;
};

} // namespace diffagg
