#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace planarprob {

// splitmix64 finalizer; the fixed stream-splitting function.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// A deterministic random stream. Gaussians come from an explicit Box-Muller
// transform so that sample streams are fully specified by the seed, not by
// library internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Independent stream derived from (master seed, stream index).
    static RngStream derive(std::uint64_t master, std::uint64_t index) {
        return RngStream(mix64(master ^ mix64(index + 1)));
    }

    double uniform() {
        // 53-bit mantissa in [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // Complex Gaussian with E|z|^2 = var (independent real/imaginary parts).
    std::complex<double> cgaussian(double var) {
        const double s = std::sqrt(var / 2.0);
        return {s * gaussian(), s * gaussian()};
    }

private:
    std::mt19937_64 gen_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace planarprob
