#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace pentao {

using Seed = std::uint64_t;

/// Identifier of the generator stack below. Written into instance labels so
/// replicas can be regenerated exactly.
inline constexpr const char *kRngVersion = "mt19937_64/v1";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replica `k` of a batch: splitmix64(base ^ k).
Seed derive_seed(Seed base, std::uint64_t k) noexcept;

/// mt19937_64 with distribution transforms written out by hand. The standard
/// distributions are implementation-defined, which would make replicas
/// differ between standard libraries.
class Rng {
  public:
    explicit Rng(Seed seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    bool coin() { return (engine_() >> 63) != 0; }
    double normal(double mean, double stddev);
    std::uint64_t poisson(double lambda);

  private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

} // namespace pentao
