#pragma once

// Seeded parameter sampling. std::mt19937_64 is fully specified by the
// standard; the mapping to doubles is done by hand because the standard
// distributions are implementation-defined.

#include "cgr/linalg.hpp"
#include "cgr/rmatrix.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace cgr {

class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

    /// Nonzero complex spectral parameter with modulus in [0.5, 2] and a
    /// phase in [-0.5, 0.5] rad, away from the regular point u = 1.
    Complex spectral_parameter()
    {
        for (;;) {
            const double r = uniform(0.5, 2.0);
            const double phi = uniform(-0.5, 0.5);
            const Complex u = std::polar(r, phi);
            if (std::abs(u - 1.0) > 1e-2 && std::abs(u + 1.0) > 1e-2)
                return u;
        }
    }

    ComplexMatrix matrix(int n)
    {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
        return m;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// q, p in [0.5, 2], nu in [-1, 1].
inline std::vector<ModelParameters> random_grid(std::uint64_t seed, int count)
{
    Rng rng(seed);
    std::vector<ModelParameters> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double q = rng.uniform(0.5, 2.0);
        const double p = rng.uniform(0.5, 2.0);
        const double nu = rng.uniform(-1.0, 1.0);
        out.emplace_back(q, p, nu);
    }
    return out;
}

} // namespace cgr
