#include <diffagg/kernel.hpp>

#include <string>

namespace diffagg {

namespace {
constexpr double inv_sqrt_2pi = 0.3989422804014326779; // 1/sqrt(2*pi)
}

void KernelSpec::validate() const {
    if (!(b >= 0.0))
        throw config_error("kernel: interaction strength b must be >= 0, got " +
                           std::to_string(b));
    if (!(epsilon > 0.0))
        throw config_error("kernel: mollifier width epsilon must be > 0, got " +
                           std::to_string(epsilon));
    if (dim < 1)
        throw config_error("kernel: dimension must be >= 1, got " + std::to_string(dim));
}

double kernel_value(double x, const KernelSpec& spec) {
    spec.validate();
    return KernelEval(spec).value(x);
}

double kernel_grad(double x, const KernelSpec& spec) {
    spec.validate();
    return KernelEval(spec).grad(x);
}

double second_derivative_sup(const KernelSpec& spec) {
    spec.validate();
    // V''(y) = b/sqrt(2 pi) (y^2 - 1) exp(-y^2/2); |V''| peaks at y = 0.
    return spec.b * inv_sqrt_2pi;
}

double kernel_mass(const KernelSpec& spec) {
    spec.validate();
    if (spec.dim != 1)
        throw config_error("kernel_mass: only defined for dim == 1");
    return spec.b;
}

KernelEval::KernelEval(const KernelSpec& spec)
    : eps_(spec.epsilon),
      pow_d_(std::pow(spec.epsilon, -spec.dim)),
      pow_d1_(std::pow(spec.epsilon, -(spec.dim + 1))),
      bc_(spec.b * inv_sqrt_2pi) {}

} // namespace diffagg
