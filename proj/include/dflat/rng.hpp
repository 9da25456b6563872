#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dflat {

// Counter-based deterministic sampling: every draw is a pure function of
// (seed, sample index, channel), so parallel and serial runs see identical
// streams and any sample can be regenerated in isolation.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // splitmix64 finalizer over the mixed key
    double uniform01(std::uint64_t index, std::uint64_t channel) const {
        std::uint64_t z = seed_;
        z += 0x9E3779B97F4A7C15ull * (index + 1);
        z += 0xBF58476D1CE4E5B9ull * (channel + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z = z ^ (z >> 31);
        return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
    }

    // uniform in (-1, 1)
    double symmetric(std::uint64_t index, std::uint64_t channel) const {
        return 2.0 * uniform01(index, channel) - 1.0;
    }

    double normal(std::uint64_t index, std::uint64_t channel) const {
        double u1 = uniform01(index, 2 * channel);
        double u2 = uniform01(index, 2 * channel + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::vector<double> unit_sphere(std::uint64_t index, int n,
                                    std::uint64_t channel_base = 0) const {
        std::vector<double> v(n);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = normal(index, channel_base + 100 + i);
            norm2 += v[i] * v[i];
        }
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        return v;
    }

    // uniform in the ball of given radius
    std::vector<double> ball(std::uint64_t index, int n, double radius,
                             std::uint64_t channel_base = 0) const {
        std::vector<double> v = unit_sphere(index, n, channel_base + 50);
        double r = radius * std::pow(uniform01(index, channel_base + 7), 1.0 / n);
        for (auto& c : v) c *= r;
        return v;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

} // namespace dflat
