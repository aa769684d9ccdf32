#pragma once

#include <span>
#include <string>
#include <vector>

#include <diffagg/analysis.hpp>
#include <diffagg/grid.hpp>
#include <diffagg/particle.hpp>

namespace diffagg {

// All files start with a schema comment "# diffagg-csv v1 <kind>" followed by
// a header row; numbers are written with %.17g so they parse back bit-exact.

std::string format_double(double v);

// kind "density": time,x_center,u — one row per (snapshot, cell).
void write_density_csv(const std::string& path, const std::vector<GridDensity>& frames);

// kind "running_sup": time,sup.
void write_running_sup_csv(const std::string& path, std::span<const double> times,
                           std::span<const double> sup);

// kind "trajectory": replica,time,particle_index,position.
void write_trajectory_csv(const std::string& path, const ParticleTrajectory& traj);

// kind "errors": level,err_inf,eoc_inf,err_l1,eoc_l1,err_l2,eoc_l2 (eoc cells
// are empty in the first row).
void write_errors_csv(const std::string& path, const ErrorReport& report);

} // namespace diffagg
