#include <diffagg/macro_solver.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace diffagg {

namespace {

// Ghost-padded access: zero outside the grid.
inline double at(const std::vector<double>& u, std::ptrdiff_t k) {
    return (k < 0 || k >= static_cast<std::ptrdiff_t>(u.size())) ? 0.0 : u[k];
}

// Centered difference D0(u)_k = (u_{k+1} - u_{k-1}) / (2 dx), k = -1 .. n.
inline double d0_at(const std::vector<double>& u, std::ptrdiff_t k, double dx) {
    return (at(u, k + 1) - at(u, k - 1)) / (2.0 * dx);
}

inline double face_slope(const std::vector<double>& u, std::ptrdiff_t i, double dx) {
    return (d0_at(u, i, dx) + d0_at(u, i + 1, dx)) / 2.0;
}

double max_slope(const std::vector<double>& u, double dx) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    double m = 0.0;
    for (std::ptrdiff_t i = -1; i < n; ++i)
        m = std::max(m, std::abs(face_slope(u, i, dx)));
    return m;
}

void advection_sweep(const std::vector<double>& u, double dx, double b, double dt,
                     std::vector<double>& flux, std::vector<double>& out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    flux.resize(n + 1); // flux[i + 1] is the flux through face i + 1/2, i = -1 .. n-1
    for (std::ptrdiff_t i = -1; i < n; ++i) {
        const double d = face_slope(u, i, dx);
        const double up = d >= 0.0 ? at(u, i) : at(u, i + 1);
        flux[i + 1] = 2.0 * b * d * up;
    }
    out.resize(n);
    const double r = dt / dx;
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = u[i] - r * (flux[i + 1] - flux[i]);
}

void heat_sweep(const std::vector<double>& u, double dx, double a, double dt,
                std::vector<double>& out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    out.resize(n);
    const double adt = a * dt;
    const double dx2 = dx * dx;
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = u[i] + adt * ((at(u, i + 1) - 2.0 * u[i]) + at(u, i - 1)) / dx2;
}

double grid_mass(const GridDensity& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return u.grid.dx * s;
}

void check_dt_positive(double dt, const char* who) {
    if (!(dt > 0.0))
        throw step_size_error(std::string(who) + ": dt must be > 0, got " +
                              std::to_string(dt));
}

constexpr double slack = 1.0 + 1e-12; // forgive last-bit rounding in dt checks

} // namespace

void MacroConfig::validate() const {
    if (!(a >= 0.0)) throw config_error("macro: diffusion coefficient a must be >= 0");
    if (!(b >= 0.0)) throw config_error("macro: aggregation coefficient b must be >= 0");
    if (!(horizon > 0.0)) throw config_error("macro: horizon must be > 0");
    if (!(safety > 0.0 && safety <= 1.0))
        throw config_error("macro: safety factor must lie in (0, 1], got " +
                           std::to_string(safety));
    for (std::size_t k = 0; k < output_times.size(); ++k) {
        const double t = output_times[k];
        if (!(t >= 0.0 && t <= horizon * slack))
            throw config_error("macro: output time " + std::to_string(t) +
                               " outside [0, horizon]");
        if (k > 0 && !(t > output_times[k - 1]))
            throw config_error("macro: output times must be strictly increasing");
    }
}

GridDensity heat_step(const GridDensity& u, double a, double dt) {
    u.validate();
    if (!(a >= 0.0)) throw config_error("heat_step: a must be >= 0");
    check_dt_positive(dt, "heat_step");
    const double dx = u.grid.dx;
    if (a * dt / (dx * dx) > 0.5 * slack)
        throw step_size_error("heat_step: a dt / dx^2 = " +
                              std::to_string(a * dt / (dx * dx)) +
                              " violates the stability bound 1/2");
    GridDensity out{u.grid, {}, u.time};
    heat_sweep(u.values, dx, a, dt, out.values);
    return out;
}

double face_derivative(const GridDensity& u, std::ptrdiff_t i) {
    u.validate();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.grid.n_cells);
    if (i < -1 || i >= n)
        throw std::out_of_range("face_derivative: face index " + std::to_string(i) +
                                " outside [-1, " + std::to_string(n - 1) + "]");
    return face_slope(u.values, i, u.grid.dx);
}

double numerical_flux(const GridDensity& u, std::ptrdiff_t i, double b) {
    u.validate();
    if (!(b >= 0.0)) throw config_error("numerical_flux: b must be >= 0");
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.grid.n_cells);
    if (i < -1 || i >= n)
        throw std::out_of_range("numerical_flux: face index " + std::to_string(i) +
                                " outside [-1, " + std::to_string(n - 1) + "]");
    const double d = face_slope(u.values, i, u.grid.dx);
    const double up = d >= 0.0 ? at(u.values, i) : at(u.values, i + 1);
    return 2.0 * b * d * up;
}

GridDensity advection_step(const GridDensity& u, double b, double dt) {
    u.validate();
    if (!(b >= 0.0)) throw config_error("advection_step: b must be >= 0");
    check_dt_positive(dt, "advection_step");
    const double dx = u.grid.dx;
    const double md = max_slope(u.values, dx);
    if (b > 0.0 && md > 0.0 && dt > dx / (4.0 * b * md) * slack)
        throw step_size_error("advection_step: dt = " + std::to_string(dt) +
                              " exceeds dx / (4 b max|d|) = " +
                              std::to_string(dx / (4.0 * b * md)));
    GridDensity out{u.grid, {}, u.time};
    std::vector<double> flux;
    advection_sweep(u.values, dx, b, dt, flux, out.values);
    return out;
}

double max_face_slope(const GridDensity& u) {
    u.validate();
    return max_slope(u.values, u.grid.dx);
}

double cfl_dt(const GridDensity& u, double a, double b, double safety, double cap) {
    u.validate();
    if (!(a >= 0.0)) throw config_error("cfl_dt: a must be >= 0");
    if (!(b >= 0.0)) throw config_error("cfl_dt: b must be >= 0");
    if (!(safety > 0.0 && safety <= 1.0))
        throw config_error("cfl_dt: safety factor must lie in (0, 1]");
    const double inf = std::numeric_limits<double>::infinity();
    const double dx = u.grid.dx;
    double stab = inf;
    if (a > 0.0) stab = dx * dx / (2.0 * a);
    if (b > 0.0) {
        const double md = max_slope(u.values, dx);
        if (md > 0.0) stab = std::min(stab, dx / (4.0 * b * md));
    }
    const double dt = std::min(safety * stab, cap);
    if (!std::isfinite(dt))
        throw config_error("cfl_dt: no step restriction applies (a = 0 and no slope); "
                           "provide a finite cap");
    if (!(dt > 0.0))
        throw config_error("cfl_dt: cap must be > 0");
    return dt;
}

GridDensity composite_step(const GridDensity& u, const MacroConfig& config, double dt) {
    u.validate();
    config.validate();
    check_dt_positive(dt, "composite_step");
    const double dx = u.grid.dx;
    if (config.a > 0.0 && config.a * dt / (dx * dx) > 0.5 * slack)
        throw step_size_error("composite_step: dt violates the diffusion bound dx^2/(2a)");
    const double md = max_slope(u.values, dx);
    if (config.b > 0.0 && md > 0.0 && dt > dx / (4.0 * config.b * md) * slack)
        throw step_size_error("composite_step: dt violates the aggregation bound "
                              "dx / (4 b max|d|)");
    GridDensity out{u.grid, {}, u.time + dt};
    std::vector<double> flux, mid;
    advection_sweep(u.values, dx, config.b, dt, flux, mid);
    heat_sweep(mid, dx, config.a, dt, out.values);
    return out;
}

MacroRun solve(const GridDensity& u0, const MacroConfig& config) {
    u0.validate();
    config.validate();
    for (double v : u0.values)
        if (!(v >= 0.0))
            throw config_error("solve: initial data must be nonnegative and finite");

    const double eps_t = 1e-9 * std::max(1.0, config.horizon);
    const double dx = u0.grid.dx;
    const auto& out_times = config.output_times;

    MacroRun run;
    run.mass_initial = grid_mass(u0);

    GridDensity u = u0;
    u.time = 0.0;

    double peak = u.values.empty() ? 0.0 : *std::max_element(u.values.begin(), u.values.end());
    double runsup = peak;
    run.sup_times.push_back(0.0);
    run.running_sup.push_back(runsup);

    std::size_t next_out = 0;
    while (next_out < out_times.size() && out_times[next_out] <= eps_t) {
        GridDensity snap = u;
        snap.time = out_times[next_out];
        run.snapshots.push_back(std::move(snap));
        ++next_out;
    }

    const double inf = std::numeric_limits<double>::infinity();
    const double blow_threshold = config.b > 0.0 ? config.a / (2.0 * config.b) : inf;
    // Growth is measured from the level where the run enters the unstable
    // regime.  The adaptive step shrinks with the collapse time scale, so a
    // per-step-count window alone never sees a 10x jump during real blow-up.
    const double blow_reference = std::max(blow_threshold, peak);
    std::deque<double> peak_window{peak}; // peaks of the last <= 101 states

    std::vector<double> flux, mid, next;
    constexpr long max_steps = 50'000'000;

    while (u.time < config.horizon - eps_t) {
        if (run.total_steps >= max_steps)
            throw std::runtime_error("solve: step limit exceeded");
        const double target =
            next_out < out_times.size() ? out_times[next_out] : config.horizon;
        const double dt = cfl_dt(u, config.a, config.b, config.safety, target - u.time);

        advection_sweep(u.values, dx, config.b, dt, flux, mid);
        heat_sweep(mid, dx, config.a, dt, next);
        u.values.swap(next);
        u.time += dt;
        ++run.total_steps;
        if (std::abs(u.time - target) <= eps_t) u.time = target;

        peak = *std::max_element(u.values.begin(), u.values.end());
        runsup = std::max(runsup, peak);
        run.sup_times.push_back(u.time);
        run.running_sup.push_back(runsup);

        peak_window.push_back(peak);
        if (peak_window.size() > 101) peak_window.pop_front();
        if (peak > 10.0 * blow_reference ||
            (peak > blow_threshold && peak_window.size() == 101 &&
             peak > 10.0 * peak_window.front())) {
            run.blew_up = true;
            run.blow_up_time = u.time;
            break;
        }

        while (next_out < out_times.size() && u.time >= out_times[next_out] - eps_t) {
            GridDensity snap = u;
            snap.time = out_times[next_out];
            run.snapshots.push_back(std::move(snap));
            ++next_out;
        }
    }

    run.mass_final = grid_mass(u);
    return run;
}

} // namespace diffagg
