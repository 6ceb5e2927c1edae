#pragma once

#include <random>

#include "openbethe/types.hpp"

namespace obtest {

/// Deterministic complex draws for the property-style tests.
struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed = 20260808) : rng(seed) {}

    openbethe::Cplx c(double radius = 1.5) {
        std::uniform_real_distribution<double> u(-radius, radius);
        const double re = u(rng), im = u(rng);
        return {re, im};
    }

    /// A point kept away from the listed singular locations.
    template <typename Guard>
    openbethe::Cplx c_safe(Guard&& ok, double radius = 1.5) {
        for (int tries = 0; tries < 200; ++tries) {
            const openbethe::Cplx z = c(radius);
            if (ok(z)) return z;
        }
        throw std::runtime_error("c_safe: could not draw an admissible point");
    }
};

}  // namespace obtest
