#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <diffagg/kernel.hpp>
#include <diffagg/rng.hpp>
#include <diffagg/sampling.hpp>

namespace diffagg {

// Interacting particle system
//   dX_i = sqrt(2a) dB_i + (1/N) sum_{j != i} V_eps'(X_i - X_j) dt
// integrated with Euler-Maruyama over M independent replicas.

struct ParticleEnsemble {
    std::vector<double> positions;
    double time = 0.0;
    std::uint64_t step_index = 0; // number of EM steps applied so far
};

struct ParticleConfig {
    std::size_t count = 2;            // N, particles per replica (>= 1)
    double a = 0.0;                   // diffusion coefficient (>= 0)
    KernelSpec kernel;                // interaction kernel (b = 0 disables drift)
    double horizon = 1.0;             // T (> 0)
    double dt = 0.01;                 // nominal step; the last step before an
                                      // output time is truncated to land on it
    std::uint64_t seed = 0;
    std::size_t replicas = 1;         // M (>= 1)
    std::vector<double> output_times; // recording times, strictly increasing in [0, T]

    void validate() const;
};

// Canonical drift on particle i: (1/N) * sum over j != i in ascending order of
// kernel_grad(positions[i] - positions[j]).
double drift(std::span<const double> positions, std::size_t i, const KernelSpec& kernel);

// Drift of every particle.  Accumulates each unordered pair once (the reaction
// term is the exact negation), which matches the canonical per-particle sum up
// to reordering of the additions.
void drift_all(std::span<const double> positions, const KernelSpec& kernel,
               std::span<double> out);

// One Euler-Maruyama step of size dt: positions[i] += sqrt(2a) * increments[i]
// + dt * drift_i, all drifts evaluated at the pre-step positions.  increments
// are Brownian increments over dt, i.e. Normal(0, dt) draws.
ParticleEnsemble em_step(const ParticleEnsemble& ensemble, const ParticleConfig& config,
                         std::span<const double> increments, double dt);
ParticleEnsemble em_step(const ParticleEnsemble& ensemble, const ParticleConfig& config,
                         std::span<const double> increments); // dt = config.dt

struct ParticleTrajectory {
    std::vector<double> times;                      // = config.output_times
    std::vector<std::vector<ParticleEnsemble>> replicas; // [replica][time index]
};

// Run all replicas.  Replica m draws its initial positions from substream
// (m, 0) of the seed (two uniforms per sample) and its Brownian increments
// from substream (m, 1) (one normal per (step, particle), particle-major), so
// results are bitwise independent of `workers`.
ParticleTrajectory simulate(const ParticleConfig& config, const InitialDensity& initial,
                            unsigned workers = 1);

// Right-hand side of the mean-field error estimate divided by the unknown
// constant: (t/N) * ( (sqrt(pi)/2) * eps^(d+2) / sup|V''| *
// exp(t^2 sup|V''|^2 eps^(-2d-4)) + t ).  The width eps is passed explicitly;
// the kernel supplies sup|V''| and d.
double mean_field_bound(double epsilon, double t, const KernelSpec& kernel, std::size_t N);

// Smallest N with mean_field_bound(eps, t, kernel, N) <= threshold, i.e.
// ceil(mean_field_bound at N = 1 / threshold), at least 1.
std::size_t min_particle_count(double epsilon, double t, const KernelSpec& kernel,
                               double threshold);

} // namespace diffagg
