#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace diffagg {

// Counter-based random numbers: every value is a pure function of (key, counter),
// so parallel replicas and repeated runs produce identical streams regardless of
// scheduling or call interleaving.  The mixing function is splitmix64's finalizer,
// which passes standard statistical batteries when driven by distinct counters.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// A stateless stream identified by a key; substreams derive new keys by hashing
// tags into the parent key.  next_* calls advance a local counter only.
class RngStream {
  public:
    RngStream() = default;

    static RngStream from_seed(std::uint64_t seed) {
        RngStream s;
        s.key_ = splitmix64(seed);
        return s;
    }

    // Independent stream for a tagged sub-task (replica index, purpose id, ...).
    RngStream substream(std::uint64_t tag) const {
        RngStream s;
        s.key_ = splitmix64(key_ ^ splitmix64(tag + 0x632be59bd9b4e019ull));
        return s;
    }

    std::uint64_t next_u64() { return splitmix64(key_ ^ counter_++); }

    // Uniform on (0, 1]: 53-bit mantissa, never exactly 0 so logs are safe.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
    }

    // Standard normal via Box-Muller; one value per call, no caching, so the
    // draw count stays a pure function of the call count.
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace diffagg
