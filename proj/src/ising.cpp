#include "pentao/ising.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pentao {

IsingInstance::IsingInstance(int n, std::vector<Coupling> couplings,
                             std::vector<Field> fields, std::string label)
    : n_(n), couplings_(std::move(couplings)), fields_(std::move(fields)),
      label_(std::move(label)) {
    if (n_ < 1) {
        throw InputError("IsingInstance: n must be >= 1");
    }
    auto check_index = [this](int i) {
        if (i < 0 || i >= n_) {
            std::ostringstream msg;
            msg << "IsingInstance: index " << i << " outside [0, " << n_ << ")";
            throw InputError(msg.str());
        }
    };
    std::set<std::pair<int, int>> seen;
    for (auto &c : couplings_) {
        check_index(c.i);
        check_index(c.j);
        if (c.i == c.j) {
            throw InputError("IsingInstance: coupling with i == j (use a field)");
        }
        if (c.i > c.j) {
            std::swap(c.i, c.j);
        }
        if (!std::isfinite(c.w)) {
            throw InputError("IsingInstance: non-finite coupling weight");
        }
        if (!seen.emplace(c.i, c.j).second) {
            std::ostringstream msg;
            msg << "IsingInstance: duplicate coupling (" << c.i << ", " << c.j << ")";
            throw InputError(msg.str());
        }
    }
    std::set<int> seen_fields;
    for (const auto &f : fields_) {
        check_index(f.i);
        if (!std::isfinite(f.w)) {
            throw InputError("IsingInstance: non-finite field weight");
        }
        if (!seen_fields.insert(f.i).second) {
            std::ostringstream msg;
            msg << "IsingInstance: duplicate field on qubit " << f.i;
            throw InputError(msg.str());
        }
    }
}

bool IsingInstance::has_fields() const noexcept {
    return std::any_of(fields_.begin(), fields_.end(),
                       [](const Field &f) { return f.w != 0.0; });
}

bool IsingInstance::has_negative_coupling() const noexcept {
    return std::any_of(couplings_.begin(), couplings_.end(),
                       [](const Coupling &c) { return c.w < 0.0; });
}

SpinConfig::SpinConfig(int n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n < 1 || n > 63) {
        throw InputError("SpinConfig: length must be in [1, 63]");
    }
    if (bits >> n) {
        throw InputError("SpinConfig: bits set beyond length");
    }
}

SpinConfig SpinConfig::from_string(std::string_view text) {
    if (text.empty() || text.size() > 63) {
        throw InputError("SpinConfig: bitstring length must be in [1, 63]");
    }
    std::uint64_t bits = 0;
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw InputError("SpinConfig: bitstring may only contain 0 and 1");
        }
        bits = (bits << 1) | static_cast<std::uint64_t>(ch - '0');
    }
    return {static_cast<int>(text.size()), bits};
}

SpinConfig SpinConfig::complement() const {
    const std::uint64_t mask = (n_ == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
    return {n_, ~bits_ & mask};
}

std::string SpinConfig::to_string() const {
    std::string out(static_cast<std::size_t>(n_), '0');
    for (int i = 0; i < n_; ++i) {
        out[static_cast<std::size_t>(n_ - 1 - i)] = bit(i) ? '1' : '0';
    }
    return out;
}

double energy_of_index(const IsingInstance &inst, std::uint64_t k) {
    double e = 0.0;
    for (const auto &c : inst.couplings()) {
        e += (((k >> c.i) ^ (k >> c.j)) & 1U) ? -c.w : c.w;
    }
    for (const auto &f : inst.fields()) {
        e += ((k >> f.i) & 1U) ? -f.w : f.w;
    }
    return e;
}

double energy(const IsingInstance &inst, const SpinConfig &s) {
    if (s.size() != inst.n()) {
        throw InputError("energy: spin configuration length does not match instance");
    }
    double e = 0.0;
    for (const auto &c : inst.couplings()) {
        e += c.w * s.spin(c.i) * s.spin(c.j);
    }
    for (const auto &f : inst.fields()) {
        e += f.w * s.spin(f.i);
    }
    return e;
}

namespace detail {
void check_qubit_cap(int n, int cap) {
    if (n > cap) {
        std::ostringstream msg;
        msg << n << " qubits exceeds the brute-force cap of " << cap;
        throw ResourceError(msg.str());
    }
}
} // namespace detail

GroundState ground_state(const IsingInstance &inst, int cap) {
    const auto spec = diagonal<double>(inst, cap);
    GroundState out{spec.e_min, {}};
    for (auto k : ground_indices(spec)) {
        out.argmins.emplace_back(inst.n(), k);
    }
    return out;
}

IsingInstance normalize(const IsingInstance &inst) {
    double scale = 0.0;
    for (const auto &c : inst.couplings()) {
        scale = std::max(scale, std::abs(c.w));
    }
    if (scale == 0.0) {
        throw InputError("normalize: instance has no nonzero coupling");
    }
    auto couplings = inst.couplings();
    for (auto &c : couplings) {
        c.w /= scale;
    }
    auto fields = inst.fields();
    for (auto &f : fields) {
        f.w /= scale;
    }
    return {inst.n(), std::move(couplings), std::move(fields), inst.label()};
}

} // namespace pentao
