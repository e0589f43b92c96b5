#pragma once

#include <cmath>
#include <cstdint>

namespace fbmou {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based Gaussian stream: each draw is addressed by
/// (seed, stream, step, index), so parallel and serial consumption agree
/// bitwise and draw counts in one step never shift later steps.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Hoisted per-(stream, step) state; draws differ only in the index.
    class Stream {
    public:
        Stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t step)
            : base_(detail::mix64(step ^ detail::mix64(stream ^ detail::mix64(seed)))) {}

        double uniform(std::uint64_t idx) const {
            const std::uint64_t h = detail::mix64(idx ^ base_);
            // (0, 1]: Box-Muller needs a strictly positive uniform.
            return double((h >> 11) + 1) * 0x1.0p-53;
        }

        double normal(std::uint64_t idx) const {
            const double u1 = uniform(2 * idx);
            const double u2 = uniform(2 * idx + 1);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        }

        /// Both Box-Muller outputs of the draw pair at `idx`.
        void normal_pair(std::uint64_t idx, double& z1, double& z2) const {
            const double u1 = uniform(2 * idx);
            const double u2 = uniform(2 * idx + 1);
            const double radius = std::sqrt(-2.0 * std::log(u1));
            z1 = radius * std::cos(2.0 * M_PI * u2);
            z2 = radius * std::sin(2.0 * M_PI * u2);
        }

    private:
        std::uint64_t base_;
    };

    Stream at(std::uint64_t stream, std::uint64_t step) const {
        return Stream(seed_, stream, step);
    }

    double uniform(std::uint64_t stream, std::uint64_t step, std::uint64_t idx) const {
        return at(stream, step).uniform(idx);
    }

    double normal(std::uint64_t stream, std::uint64_t step, std::uint64_t idx) const {
        return at(stream, step).normal(idx);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace fbmou
