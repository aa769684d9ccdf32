#include <diffagg/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <diffagg/errors.hpp>

namespace diffagg {

namespace {

constexpr double sqrt3 = 1.7320508075688772935;

void check_T(double T) {
    if (!(T > 0.0))
        throw config_error("barenblatt: shape parameter T must be > 0, got " +
                           std::to_string(T));
}

} // namespace

double barenblatt_support_radius(double T) {
    check_T(T);
    return std::sqrt(12.0 * std::cbrt(T * T));
}

double barenblatt_pdf(double x, double T, double x0) {
    check_T(T);
    const double t23 = std::cbrt(T * T);
    const double dx = x - x0;
    const double bump = t23 - dx * dx / 12.0;
    if (bump <= 0.0) return 0.0;
    return (sqrt3 / 8.0) * bump / T;
}

double barenblatt_cdf(double z, double T) {
    check_T(T);
    const double r = barenblatt_support_radius(T);
    if (z <= -r) return 0.0;
    if (z >= r) return 1.0;
    const double f = (sqrt3 / 8.0) * (z / std::cbrt(T) - z * z * z / (36.0 * T)) + 0.5;
    return std::clamp(f, 0.0, 1.0);
}

double barenblatt_inv_cdf(double v, double T) {
    check_T(T);
    if (!(v >= 0.0 && v <= 1.0))
        throw std::domain_error("barenblatt_inv_cdf: v must lie in [0, 1], got " +
                                std::to_string(v));
    const double r = barenblatt_support_radius(T);
    if (v == 0.0) return -r;
    if (v == 1.0) return r;
    const double t23 = std::cbrt(T * T);
    const double p = -36.0 * t23;
    const double q = (v - 0.5) * 96.0 * sqrt3 * T;
    double arg = -(q / 2.0) * std::sqrt(-27.0 / (p * p * p));
    arg = std::clamp(arg, -1.0, 1.0);
    return -std::sqrt(-4.0 * p / 3.0) *
           std::cos(std::acos(arg) / 3.0 + std::numbers::pi / 3.0);
}

void InitialDensity::validate() const {
    if (components.empty())
        throw config_error("initial density: needs at least one component");
    double alpha_sum = 0.0;
    for (std::size_t l = 0; l < components.size(); ++l) {
        const auto& c = components[l];
        const std::string where = "initial density component " + std::to_string(l);
        if (!(c.T > 0.0))
            throw config_error(where + ": T must be > 0, got " + std::to_string(c.T));
        if (!(c.beta > 0.0))
            throw config_error(where + ": beta must be > 0, got " + std::to_string(c.beta));
        if (!(c.alpha >= 0.0 && c.alpha <= 1.0))
            throw config_error(where + ": alpha must lie in [0, 1], got " +
                               std::to_string(c.alpha));
        alpha_sum += c.alpha;
    }
    if (std::abs(alpha_sum - 1.0) > 1e-12)
        throw config_error("initial density: mixture weights must satisfy sum alpha = 1 "
                           "(tolerance 1e-12), got sum = " + std::to_string(alpha_sum));
}

double InitialDensity::pdf(double x) const {
    validate();
    double u = 0.0;
    for (const auto& c : components)
        u += c.alpha * c.beta * barenblatt_pdf(c.beta * (x - c.x0), c.T, 0.0);
    return u;
}

std::pair<double, double> InitialDensity::support() const {
    validate();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : components) {
        const double half = barenblatt_support_radius(c.T) / c.beta;
        lo = std::min(lo, c.x0 - half);
        hi = std::max(hi, c.x0 + half);
    }
    return {lo, hi};
}

double InitialDensity::sup_norm() const {
    validate();
    // Peak of one component: alpha * beta * (sqrt(3)/8) * T^(-1/3) at x0.
    double best = 0.0;
    for (const auto& c : components)
        best = std::max(best, c.alpha * c.beta * (sqrt3 / 8.0) / std::cbrt(c.T));

    // With pairwise disjoint supports the superposition maximum is the largest
    // component peak; otherwise refine by dense grid search over the hull.
    std::vector<std::pair<double, double>> iv;
    for (const auto& c : components) {
        const double half = barenblatt_support_radius(c.T) / c.beta;
        iv.emplace_back(c.x0 - half, c.x0 + half);
    }
    std::sort(iv.begin(), iv.end());
    bool overlap = false;
    for (std::size_t l = 1; l < iv.size(); ++l)
        if (iv[l].first < iv[l - 1].second - 1e-12) overlap = true;
    if (!overlap) return best;

    const auto [lo, hi] = support();
    const std::size_t n = 200001;
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        best = std::max(best, pdf(lo + static_cast<double>(i) * h));
    for (const auto& c : components)
        best = std::max(best, pdf(c.x0));
    return best;
}

std::vector<double> sample_initial(const InitialDensity& initial, std::size_t n,
                                   RngStream& rng) {
    initial.validate();
    std::vector<double> cum;
    cum.reserve(initial.components.size());
    double acc = 0.0;
    for (const auto& c : initial.components) {
        acc += c.alpha;
        cum.push_back(acc);
    }
    cum.back() = 1.0; // guard the 1e-12 slack in sum alpha

    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double uc = rng.next_uniform();
        std::size_t l = 0;
        while (l + 1 < cum.size() && uc > cum[l]) ++l;
        const auto& c = initial.components[l];
        const double v = rng.next_uniform();
        out.push_back(barenblatt_inv_cdf(v, c.T) / c.beta + c.x0);
    }
    return out;
}

} // namespace diffagg
