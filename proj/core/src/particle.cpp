#include <diffagg/particle.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include <diffagg/errors.hpp>

namespace diffagg {

void ParticleConfig::validate() const {
    if (count < 1) throw config_error("particle: count must be >= 1");
    if (!(a >= 0.0)) throw config_error("particle: diffusion coefficient a must be >= 0");
    kernel.validate();
    if (!(horizon > 0.0)) throw config_error("particle: horizon must be > 0");
    if (!(dt > 0.0)) throw config_error("particle: dt must be > 0");
    if (replicas < 1) throw config_error("particle: replicas must be >= 1");
    const double slack = 1.0 + 1e-12;
    for (std::size_t k = 0; k < output_times.size(); ++k) {
        const double t = output_times[k];
        if (!(t >= 0.0 && t <= horizon * slack))
            throw config_error("particle: output time " + std::to_string(t) +
                               " outside [0, horizon]");
        if (k > 0 && !(t > output_times[k - 1]))
            throw config_error("particle: output times must be strictly increasing");
    }
}

double drift(std::span<const double> positions, std::size_t i, const KernelSpec& kernel) {
    kernel.validate();
    const std::size_t n = positions.size();
    if (i >= n)
        throw std::out_of_range("drift: particle index " + std::to_string(i) +
                                " out of range");
    if (kernel.b == 0.0) return 0.0;
    const KernelEval k(kernel);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        s += k.grad(positions[i] - positions[j]);
    }
    return s / static_cast<double>(n);
}

void drift_all(std::span<const double> positions, const KernelSpec& kernel,
               std::span<double> out) {
    kernel.validate();
    const std::size_t n = positions.size();
    if (out.size() != n)
        throw std::invalid_argument("drift_all: output span size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    if (kernel.b == 0.0 || n < 2) return;
    const KernelEval k(kernel);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = positions[i];
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double g = k.grad(xi - positions[j]);
            acc += g;
            out[j] -= g;
        }
        out[i] += acc;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= static_cast<double>(n);
}

ParticleEnsemble em_step(const ParticleEnsemble& ensemble, const ParticleConfig& config,
                         std::span<const double> increments, double dt) {
    config.validate();
    const std::size_t n = ensemble.positions.size();
    if (increments.size() != n)
        throw std::invalid_argument("em_step: increments size mismatch");
    if (!(dt > 0.0)) throw step_size_error("em_step: dt must be > 0");
    const double noise_scale = std::sqrt(2.0 * config.a);
    std::vector<double> dr(n);
    drift_all(ensemble.positions, config.kernel, dr);
    ParticleEnsemble out;
    out.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.positions[i] =
            ensemble.positions[i] + noise_scale * increments[i] + dt * dr[i];
    out.time = ensemble.time + dt;
    out.step_index = ensemble.step_index + 1;
    return out;
}

ParticleEnsemble em_step(const ParticleEnsemble& ensemble, const ParticleConfig& config,
                         std::span<const double> increments) {
    return em_step(ensemble, config, increments, config.dt);
}

namespace {

// March one replica from t = 0 to the horizon.  Between consecutive anchor
// times (output times and the horizon) steps have length config.dt with the
// final step truncated to land exactly on the anchor.
void run_replica(const ParticleConfig& config, const InitialDensity& initial,
                 std::uint64_t replica, std::vector<ParticleEnsemble>& out) {
    const double eps_t = 1e-9 * std::max(1.0, config.horizon);
    const std::size_t n = config.count;

    RngStream base = RngStream::from_seed(config.seed).substream(replica);
    RngStream init_rng = base.substream(0);
    RngStream noise = base.substream(1);

    std::vector<double> pos = sample_initial(initial, n, init_rng);
    double t = 0.0;
    std::uint64_t step = 0;

    std::vector<double> anchors;
    for (double ot : config.output_times)
        if (ot > eps_t && ot < config.horizon - eps_t) anchors.push_back(ot);
    anchors.push_back(config.horizon);

    out.clear();
    std::size_t next_rec = 0;
    auto record = [&](double time_value) {
        if (next_rec < config.output_times.size() &&
            std::abs(config.output_times[next_rec] - time_value) <= eps_t) {
            out.push_back(ParticleEnsemble{pos, config.output_times[next_rec], step});
            ++next_rec;
        }
    };
    record(0.0);

    const double noise_scale = std::sqrt(2.0 * config.a);
    std::vector<double> dr(n), z(n);
    for (double anchor : anchors) {
        while (t < anchor - eps_t) {
            const double dt = std::min(config.dt, anchor - t);
            const double sdt = std::sqrt(dt);
            for (std::size_t i = 0; i < n; ++i) z[i] = noise.next_normal();
            drift_all(pos, config.kernel, dr);
            for (std::size_t i = 0; i < n; ++i)
                pos[i] += noise_scale * (sdt * z[i]) + dt * dr[i];
            t += dt;
            ++step;
        }
        t = anchor;
        record(anchor);
    }
}

} // namespace

ParticleTrajectory simulate(const ParticleConfig& config, const InitialDensity& initial,
                            unsigned workers) {
    config.validate();
    initial.validate();

    ParticleTrajectory traj;
    traj.times = config.output_times;
    traj.replicas.resize(config.replicas);

    const unsigned w = std::max(1u, std::min<unsigned>(
        workers, static_cast<unsigned>(config.replicas)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t m = next.fetch_add(1);
            if (m >= config.replicas) return;
            try {
                run_replica(config, initial, m, traj.replicas[m]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned k = 1; k < w; ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return traj;
}

double mean_field_bound(double epsilon, double t, const KernelSpec& kernel, std::size_t N) {
    kernel.validate();
    if (!(epsilon > 0.0)) throw config_error("mean_field_bound: epsilon must be > 0");
    if (!(t >= 0.0)) throw config_error("mean_field_bound: t must be >= 0");
    if (N < 1) throw config_error("mean_field_bound: N must be >= 1");
    if (t == 0.0) return 0.0;
    const double vpp = second_derivative_sup(kernel);
    const int d = kernel.dim;
    const double bracket =
        (std::sqrt(std::numbers::pi) / 2.0) * std::pow(epsilon, d + 2) / vpp *
            std::exp(t * t * vpp * vpp * std::pow(epsilon, -2 * d - 4)) +
        t;
    return t / static_cast<double>(N) * bracket;
}

std::size_t min_particle_count(double epsilon, double t, const KernelSpec& kernel,
                               double threshold) {
    if (!(threshold > 0.0))
        throw config_error("min_particle_count: threshold must be > 0");
    const double at_one = mean_field_bound(epsilon, t, kernel, 1);
    if (!std::isfinite(at_one))
        throw config_error("min_particle_count: bound is not finite (b = 0 kernel?)");
    const double n = std::ceil(at_one / threshold);
    if (n >= 9e18) throw config_error("min_particle_count: bound requires impractical N");
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

} // namespace diffagg
