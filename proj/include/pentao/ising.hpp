#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pentao/errors.hpp"

namespace pentao {

/// Largest qubit count for which a full diagonal (2^n energies) is built.
inline constexpr int kDefaultQubitCap = 26;

struct Coupling {
    int i;
    int j;
    double w;

    friend bool operator==(const Coupling &, const Coupling &) = default;
};

struct Field {
    int i;
    double w;

    friend bool operator==(const Field &, const Field &) = default;
};

/// Generic Ising/QUBO cost Hamiltonian
///
///     H = sum_{i<j} w_ij Z_i Z_j + sum_i w_ii Z_i
///
/// Indices are 0-based. Couplings given as (j, i) with j > i are stored as
/// (i, j). Self-couplings and repeated pairs are rejected.
class IsingInstance {
  public:
    IsingInstance() = default;
    IsingInstance(int n, std::vector<Coupling> couplings,
                  std::vector<Field> fields = {}, std::string label = {});

    int n() const noexcept { return n_; }
    const std::vector<Coupling> &couplings() const noexcept { return couplings_; }
    const std::vector<Field> &fields() const noexcept { return fields_; }
    const std::string &label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    /// True iff some w_ii is nonzero. Selects the 5-probe Penta-O mode.
    bool has_fields() const noexcept;
    bool has_negative_coupling() const noexcept;

    friend bool operator==(const IsingInstance &, const IsingInstance &) = default;

  private:
    int n_ = 0;
    std::vector<Coupling> couplings_;
    std::vector<Field> fields_;
    std::string label_;
};

/// Computational basis state. Bit i of `bits` is x_i, spin z_i = 1 - 2 x_i.
/// String form is most-significant (qubit n-1) first.
class SpinConfig {
  public:
    SpinConfig(int n, std::uint64_t bits);
    static SpinConfig from_string(std::string_view text);

    int size() const noexcept { return n_; }
    std::uint64_t bits() const noexcept { return bits_; }
    int bit(int i) const noexcept { return static_cast<int>((bits_ >> i) & 1U); }
    int spin(int i) const noexcept { return 1 - 2 * bit(i); }
    SpinConfig complement() const;
    std::string to_string() const;

    friend bool operator==(const SpinConfig &, const SpinConfig &) = default;

  private:
    int n_;
    std::uint64_t bits_;
};

double energy(const IsingInstance &inst, const SpinConfig &s);

/// Energy of basis index `k` without building a SpinConfig.
double energy_of_index(const IsingInstance &inst, std::uint64_t k);

/// Diagonal of H_C over all 2^n basis states.
template <typename Scalar = double> struct Spectrum {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    int n = 0;
    Vector energies;
    Scalar e_min = 0;
    Scalar e_max = 0;

    std::size_t dimension() const { return static_cast<std::size_t>(energies.size()); }
};

namespace detail {
void check_qubit_cap(int n, int cap);
}

template <typename Scalar = double>
Spectrum<Scalar> diagonal(const IsingInstance &inst, int cap = kDefaultQubitCap) {
    detail::check_qubit_cap(inst.n(), cap);
    const std::uint64_t dim = std::uint64_t{1} << inst.n();
    Spectrum<Scalar> spec;
    spec.n = inst.n();
    spec.energies.setZero(static_cast<Eigen::Index>(dim));
    auto *e = spec.energies.data();
    // Each entry accumulates terms in instance order, so the result does not
    // depend on how the index range is split.
    for (const auto &c : inst.couplings()) {
        const auto w = static_cast<Scalar>(c.w);
        for (std::uint64_t k = 0; k < dim; ++k) {
            const auto parity = ((k >> c.i) ^ (k >> c.j)) & 1U;
            e[k] += parity ? -w : w;
        }
    }
    for (const auto &f : inst.fields()) {
        const auto w = static_cast<Scalar>(f.w);
        for (std::uint64_t k = 0; k < dim; ++k) {
            e[k] += ((k >> f.i) & 1U) ? -w : w;
        }
    }
    spec.e_min = spec.energies.minCoeff();
    spec.e_max = spec.energies.maxCoeff();
    return spec;
}

struct GroundState {
    double e_min;
    std::vector<SpinConfig> argmins; // ascending by integer value
};

GroundState ground_state(const IsingInstance &inst, int cap = kDefaultQubitCap);

/// Indices attaining e_min exactly.
template <typename Scalar>
std::vector<std::uint64_t> ground_indices(const Spectrum<Scalar> &spec) {
    std::vector<std::uint64_t> out;
    for (Eigen::Index k = 0; k < spec.energies.size(); ++k) {
        if (spec.energies[k] == spec.e_min) {
            out.push_back(static_cast<std::uint64_t>(k));
        }
    }
    return out;
}

/// Divide every weight by max_{i<j} |w_ij|.
IsingInstance normalize(const IsingInstance &inst);

/// Min-max normalization of an energy into [0, 1].
template <typename Scalar>
Scalar normalized_energy(const Spectrum<Scalar> &spec, Scalar e) {
    if (!(spec.e_max > spec.e_min)) {
        throw InputError("normalized_energy: degenerate spectrum (e_max == e_min)");
    }
    return (e - spec.e_min) / (spec.e_max - spec.e_min);
}

} // namespace pentao
