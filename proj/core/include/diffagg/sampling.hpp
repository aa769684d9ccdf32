#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <diffagg/rng.hpp>

namespace diffagg {

// Compactly supported self-similar bump
//   B(x) = (sqrt(3)/8) * (T^(2/3) - (x-x0)^2/12)_+ ,
// supported on |x - x0| <= sqrt(12 T^(2/3)).  B integrates to T, so the
// probability density used throughout is B/T; its CDF on the support is
//   F(z) = (sqrt(3)/8) * (z/T^(1/3) - z^3/(36 T)) + 1/2   (x0 = 0),
// which indeed runs from 0 to 1.

double barenblatt_support_radius(double T); // sqrt(12 T^(2/3))

// Normalized profile B(x)/T; zero outside the support.
double barenblatt_pdf(double x, double T, double x0);

// CDF of the centered (x0 = 0) profile; clamped to [0, 1].
double barenblatt_cdf(double z, double T);

// Inverse CDF via the trigonometric real root of the depressed cubic
//   z^3 + p z + q = 0,  p = -36 T^(2/3),  q = (v - 1/2) * 96 sqrt(3) T:
//   z = -sqrt(-4p/3) * cos( (1/3) arccos(-(q/2) sqrt(-27/p^3)) + pi/3 ).
// v = 0 and v = 1 map to the exact support endpoints.
double barenblatt_inv_cdf(double v, double T);

// One bump of a mixture: density beta * barenblatt_pdf(beta*(x-x0), T, 0),
// i.e. centered at x0 with half-width barenblatt_support_radius(T)/beta,
// selected with probability alpha.
struct BarenblattComponent {
    double T = 1.0;      // shape parameter (> 0)
    double x0 = 0.0;     // center
    double beta = 1.0;   // width scaling (> 0)
    double alpha = 1.0;  // mixture weight (in [0, 1])
};

struct InitialDensity {
    std::vector<BarenblattComponent> components;

    void validate() const; // nonempty, T > 0, beta > 0, alpha in [0,1], sum alpha = 1 (1e-12)

    double pdf(double x) const;                      // mixture density, integrates to 1
    double sup_norm() const;                         // max of pdf (see source for method)
    std::pair<double, double> support() const;       // hull of component supports
};

// n independent samples from the mixture: for each sample draw first the
// component index (one uniform against the cumulative weights), then the
// position via the inverse CDF (one uniform).  Exactly two uniforms per
// sample, in that order.
std::vector<double> sample_initial(const InitialDensity& initial, std::size_t n,
                                   RngStream& rng);

} // namespace diffagg
