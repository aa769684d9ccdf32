#pragma once

#include <cmath>

#include <diffagg/errors.hpp>

namespace diffagg {

// Gaussian interaction kernel V(y) = b/sqrt(2*pi) * exp(-y^2/2), mollified as
// V_eps(x) = eps^-dim * V(x/eps).  Note the one-dimensional kernel integrates
// to b (see kernel_mass); callers wanting a kernel of mass 2b must double b.
struct KernelSpec {
    double b = 1.0;        // interaction strength (>= 0; 0 disables interaction)
    double epsilon = 1.0;  // mollifier width (> 0)
    int dim = 1;           // spatial dimension d (>= 1; dynamics implemented for d = 1)

    void validate() const;
};

// V_eps(x) (scalar argument: displacement along the line for dim-dimensional scaling).
double kernel_value(double x, const KernelSpec& spec);

// d/dx V_eps(x) = eps^-(dim+1) * V'(x/eps); odd, so kernel_grad(-x) == -kernel_grad(x).
double kernel_grad(double x, const KernelSpec& spec);

// sup |V''| of the unscaled kernel = b/sqrt(2*pi), attained at 0.  Mollifier
// scalings of eps enter error estimates explicitly, not through this value.
double second_derivative_sup(const KernelSpec& spec);

// integral of V_eps over the line (dim == 1): exactly b.  Exposed so users who
// want a kernel of total mass 2b can scale b accordingly.
double kernel_mass(const KernelSpec& spec);

// Precomputed evaluator for hot loops (no validation, no pow per call).  The
// factored form eps^-d * V(x/eps) is kept literally so scaling by eps commutes
// with evaluation at the unit width to the last bit.
class KernelEval {
  public:
    explicit KernelEval(const KernelSpec& spec);
    double value(double x) const {
        const double y = x / eps_;
        return pow_d_ * (bc_ * std::exp(-0.5 * y * y));
    }
    double grad(double x) const {
        const double y = x / eps_;
        return pow_d1_ * (-y * (bc_ * std::exp(-0.5 * y * y)));
    }

  private:
    double eps_;
    double pow_d_;   // eps^-dim
    double pow_d1_;  // eps^-(dim+1)
    double bc_;      // b/sqrt(2*pi)
};

} // namespace diffagg
