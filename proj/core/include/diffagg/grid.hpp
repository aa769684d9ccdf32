#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <diffagg/errors.hpp>

namespace diffagg {

// Uniform cell-centered grid: cell i covers [x_min + i*dx, x_min + (i+1)*dx),
// center at x_min + (i + 1/2)*dx.  Values outside the grid are treated as zero
// (ghost cells) by every stencil.
struct Grid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n_cells = 0;

    void validate() const {
        if (!(dx > 0.0))
            throw config_error("grid: dx must be > 0");
        if (n_cells < 3)
            throw config_error("grid: need at least 3 cells");
    }

    double center(std::size_t i) const {
        return x_min + (static_cast<double>(i) + 0.5) * dx;
    }
    double x_max() const { return x_min + dx * static_cast<double>(n_cells); }

    bool same_as(const Grid& other, double tol = 1e-12) const {
        return n_cells == other.n_cells &&
               std::abs(x_min - other.x_min) <= tol &&
               std::abs(dx - other.dx) <= tol;
    }
};

struct GridDensity {
    Grid grid;
    std::vector<double> values; // size grid.n_cells
    double time = 0.0;

    void validate() const {
        grid.validate();
        if (values.size() != grid.n_cells)
            throw config_error("grid density: values size does not match cell count");
    }
};

} // namespace diffagg
