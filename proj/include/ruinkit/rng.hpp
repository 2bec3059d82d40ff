#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ruinkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Random stream with the handful of draws the simulator needs. Exponential
/// sampling is by inversion and normal sampling by Box-Muller, so a given
/// seed reproduces the same path on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Stream for path `index` derived deterministically from a master seed.
    static Rng for_path(std::uint64_t seed, std::uint64_t index) {
        return Rng(splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
    }

    /// Uniform on (0, 1) (never exactly 0 or 1).
    double uniform() {
        const std::uint64_t r = gen_();
        return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace ruinkit
