#include "pentao/rng.hpp"

#include <cmath>
#include <numbers>

#include "pentao/errors.hpp"

namespace pentao {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Seed derive_seed(Seed base, std::uint64_t k) noexcept { return splitmix64(base ^ k); }

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw InputError("Rng::below: bound must be positive");
    }
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double Rng::normal(double mean, double stddev) {
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return mean + stddev * z;
    }
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    return mean + stddev * radius * std::cos(angle);
}

std::uint64_t Rng::poisson(double lambda) {
    if (!(lambda > 0.0) || lambda > 500.0) {
        throw InputError("Rng::poisson: lambda must be in (0, 500]");
    }
    // Knuth's product method, fine for the small means used by the
    // benchmark families.
    const double threshold = std::exp(-lambda);
    std::uint64_t k = 0;
    double product = uniform();
    while (product > threshold) {
        ++k;
        product *= uniform();
    }
    return k;
}

} // namespace pentao
