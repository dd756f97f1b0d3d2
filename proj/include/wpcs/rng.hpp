#ifndef WPCS_RNG_HPP
#define WPCS_RNG_HPP

#include <cstdint>

namespace wpcs {

// splitmix64 finalizer (Stafford variant 13); also used as a hash.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

inline double to_unit_double(std::uint64_t x) {
    // top 53 bits -> [0,1)
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Small deterministic generator (splitmix64 sequence). One instance per
/// (replication, subsystem) stream; never shared across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }

    double uniform() { return to_unit_double(next_u64()); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // rejection-free multiply-shift; bias negligible for simulation n
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

namespace stream {
enum : std::uint64_t {
    layout = 1,
    spawn = 2,
    mobility = 3,
    deploy = 4,
    blockage = 5,
};
}

/// Seed for a per-(replication, subsystem) stream. Counter-based so adding
/// subsystems does not perturb existing streams.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replication,
                                 std::uint64_t subsystem) {
    return hash_combine(hash_combine(master, replication + 1), subsystem);
}

/// Stateless per-link uniform draw, keyed by (seed, step, beacon, device).
/// Order- and thread-independent by construction.
inline double link_uniform(std::uint64_t seed, std::uint64_t step,
                           std::uint64_t beacon_id, std::uint64_t device_id) {
    std::uint64_t k = hash_combine(seed, step);
    k = hash_combine(k, (beacon_id << 32) ^ device_id);
    return to_unit_double(k);
}

} // namespace wpcs

#endif
