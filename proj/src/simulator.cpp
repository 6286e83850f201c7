#include "pentao/simulator.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace pentao {

namespace {

static_assert(std::endian::native == std::endian::little,
              "state dump assumes a little-endian host");

template <typename T> void put(std::ostream &out, T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T> T get(std::istream &in) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) {
        throw ParseError("state dump: truncated input", static_cast<std::size_t>(in.gcount()));
    }
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

} // namespace

void write_state_dump(std::ostream &out, const StateVector &psi) {
    put<std::int32_t>(out, qubit_count(psi));
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        put<double>(out, psi[k].real());
        put<double>(out, psi[k].imag());
    }
}

StateVector read_state_dump(std::istream &in) {
    const auto n = get<std::int32_t>(in);
    if (n < 1 || n > kDefaultQubitCap) {
        throw ParseError("state dump: qubit count out of range", 0);
    }
    StateVector psi(Eigen::Index{1} << n);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        psi[k] = {re, im};
    }
    return psi;
}

} // namespace pentao
