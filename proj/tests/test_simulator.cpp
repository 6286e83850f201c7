#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pentao/instances.hpp"
#include "pentao/simulator.hpp"

using namespace pentao;
using std::numbers::pi;

namespace {

IsingInstance single_edge() { return IsingInstance(2, {{0, 1, 1.0}}); }

StateVector basis_state(int n, std::uint64_t k) {
    StateVector psi = StateVector::Zero(Eigen::Index{1} << n);
    psi[static_cast<Eigen::Index>(k)] = 1.0;
    return psi;
}

double max_diff(const StateVector &a, const oracle::Vec &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("init_plus examples") {
    const auto one = init_plus(1);
    CHECK(one[0].real() == doctest::Approx(std::sqrt(0.5)));
    CHECK(one[1].real() == doctest::Approx(std::sqrt(0.5)));
    const auto two = init_plus(2);
    for (Eigen::Index k = 0; k < 4; ++k) {
        CHECK(two[k] == std::complex<double>(0.5, 0.0));
    }
    CHECK(std::abs(init_plus(10).squaredNorm() - 1.0) <= 1e-12);
    CHECK_THROWS_AS(init_plus(27), ResourceError);
    CHECK_THROWS_AS(init_plus(0), InputError);
}

TEST_CASE("apply_cost examples") {
    std::mt19937_64 gen(1);
    const auto inst = oracle::random_instance(gen, 6, true);
    const auto spec = diagonal<double>(inst);
    const StateVector psi = oracle::random_state(gen, 6);

    CHECK((apply_cost(psi, spec, 0.0) - psi).cwiseAbs().maxCoeff() == 0.0);

    const auto phased = apply_cost(basis_state(2, 0), single_edge(), pi / 4);
    CHECK(std::abs(phased[0] - std::polar(1.0, -pi / 4)) < 1e-15);

    const auto twice = apply_cost(apply_cost(psi, spec, 0.37), spec, 0.91);
    CHECK((twice - apply_cost(psi, spec, 1.28)).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(apply_cost(init_plus(3), single_edge(), 0.1), InputError);
}

TEST_CASE("apply_mixer examples") {
    std::mt19937_64 gen(2);
    const StateVector psi = oracle::random_state(gen, 5);
    CHECK((apply_mixer(psi, 0.0) - psi).cwiseAbs().maxCoeff() == 0.0);

    // theta = pi/2 multiplies every qubit by -iX; X^n is a bit flip of all qubits.
    const auto flipped = apply_mixer(psi, pi / 2);
    const auto dim = psi.size();
    const std::complex<double> phase = std::pow(std::complex<double>(0, -1), 5);
    for (Eigen::Index k = 0; k < dim; ++k) {
        CHECK(std::abs(flipped[k] - phase * psi[(dim - 1) ^ k]) < 1e-14);
    }
    // theta = pi is identity up to a global phase.
    const auto full = apply_mixer(psi, pi);
    CHECK((full + psi).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mixer sign satisfies the Heisenberg identity for Z") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4;
        const auto psi = oracle::random_state(gen, n);
        const double theta = trial == 0 ? 0.3 : std::uniform_real_distribution<double>(-3, 3)(gen);
        const StateVector after = apply_mixer(StateVector(psi), theta);
        for (int q = 0; q < n; ++q) {
            const auto z = oracle::on_qubit(oracle::pauli_z(), q, n);
            const auto y = oracle::on_qubit(oracle::pauli_y(), q, n);
            const double lhs = oracle::expect(after, z);
            const double rhs = std::cos(2 * theta) * oracle::expect(psi, z) +
                               std::sin(2 * theta) * oracle::expect(psi, y);
            CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("layers match dense unitaries for n <= 4") {
    std::mt19937_64 gen(4);
    for (int n = 1; n <= 4; ++n) {
        for (bool fields : {false, true}) {
            const auto inst = oracle::random_instance(gen, n, fields);
            const auto spec = diagonal<double>(inst);
            const auto h = oracle::hamiltonian(inst);
            const auto psi = oracle::random_state(gen, n);
            const double gamma = 0.83, theta = -0.41;
            CHECK(max_diff(apply_cost(StateVector(psi), spec, gamma), oracle::expm_herm(h, gamma) * psi) <= 1e-12);
            CHECK(max_diff(apply_mixer(StateVector(psi), theta), oracle::mixer_unitary(n, theta) * psi) <= 1e-12);

            // The mixer is exp(-i theta sum X), built here from the generator.
            oracle::Mat hx = oracle::Mat::Zero(psi.size(), psi.size());
            for (int q = 0; q < n; ++q) {
                hx += oracle::on_qubit(oracle::pauli_x(), q, n);
            }
            CHECK(max_diff(apply_mixer(StateVector(psi), theta), oracle::expm_herm(hx, theta) * psi) <= 1e-12);

            Schedule sched;
            sched.levels = {{0.3, 0.2}, {0.7, -0.5}, {1.1, 0.9}};
            const auto state = run_qaoa(spec, sched);
            CHECK(max_diff(state, oracle::qaoa_state(inst, {{0.3, 0.2}, {0.7, -0.5}, {1.1, 0.9}})) <= 1e-12);
        }
    }
}

TEST_CASE("norm is preserved after every layer") {
    std::mt19937_64 gen(5);
    const auto inst = oracle::random_instance(gen, 9, true);
    const auto spec = diagonal<double>(inst);
    StateVector psi = init_plus(9);
    for (int l = 0; l < 30; ++l) {
        apply_cost_inplace(psi, spec, 0.1 * l + 0.05);
        CHECK(std::abs(psi.squaredNorm() - 1.0) <= 1e-12);
        apply_mixer_inplace(psi, 0.07 * l - 0.9);
        CHECK(std::abs(psi.squaredNorm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("run_qaoa examples") {
    const auto inst = to_instance(grid_graph(2, 2));
    const auto spec = diagonal<double>(inst);
    CHECK((run_qaoa(spec, Schedule{}) - init_plus(4)).cwiseAbs().maxCoeff() == 0.0);

    Schedule diag_only;
    diag_only.levels = {{0.4, 0.0}, {1.3, 0.0}};
    const auto psi = run_qaoa(spec, diag_only);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        CHECK(std::norm(psi[k]) == doctest::Approx(1.0 / 16));
    }

    // p = 1 expectation surface on a single edge against 4x4 matrices.
    const auto edge = single_edge();
    const auto h = oracle::hamiltonian(edge);
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            const double gamma = a * pi / 8, theta = b * pi / 8;
            Schedule s;
            s.levels = {{gamma, theta}};
            const double ref = oracle::expect(oracle::qaoa_state(edge, {{gamma, theta}}), h);
            CHECK(std::abs(expectation(run_qaoa(edge, s), edge) - ref) <= 1e-12);
        }
    }
}

TEST_CASE("expectation examples") {
    std::mt19937_64 gen(6);
    const auto free = oracle::random_instance(gen, 6, false);
    const auto fielded = oracle::random_instance(gen, 6, true);
    CHECK(std::abs(expectation(init_plus(6), free)) < 1e-14);
    CHECK(std::abs(expectation(init_plus(6), fielded)) < 1e-14);
    for (std::uint64_t k : {0u, 5u, 63u}) {
        CHECK(expectation(basis_state(6, k), fielded) ==
              doctest::Approx(energy(fielded, SpinConfig(6, k))).epsilon(1e-14));
    }
    CHECK_THROWS_AS(expectation(init_plus(3), free), InputError);
}

TEST_CASE("expectation lies in [e_min, e_max] and ignores global phase") {
    std::mt19937_64 gen(7);
    const auto inst = oracle::random_instance(gen, 7, true);
    const auto spec = diagonal<double>(inst);
    for (int t = 0; t < 20; ++t) {
        const StateVector psi = oracle::random_state(gen, 7);
        const double j = expectation(psi, spec);
        CHECK(j >= spec.e_min - 1e-12);
        CHECK(j <= spec.e_max + 1e-12);
        const StateVector rotated = psi * std::polar(1.0, 0.3 * t);
        CHECK(std::abs(expectation(rotated, spec) - j) <= 1e-12);
    }
}

TEST_CASE("relabeling qubits together with the instance leaves J unchanged") {
    std::mt19937_64 gen(8);
    const int n = 6;
    const auto inst = oracle::random_instance(gen, n, true);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<Coupling> cs;
    for (const auto &c : inst.couplings()) {
        cs.push_back({perm[c.i], perm[c.j], c.w});
    }
    std::vector<Field> fs;
    for (const auto &f : inst.fields()) {
        fs.push_back({perm[f.i], f.w});
    }
    const IsingInstance relabeled(n, cs, fs);
    Schedule sched;
    sched.levels = {{0.4, 0.3}, {0.2, 0.8}};
    CHECK(std::abs(expectation(run_qaoa(inst, sched), inst) -
                   expectation(run_qaoa(relabeled, sched), relabeled)) <= 1e-12);
}

TEST_CASE("final-level periodicity in theta") {
    std::mt19937_64 gen(9);
    for (bool fields : {false, true}) {
        const auto inst = oracle::random_instance(gen, 6, fields);
        const auto spec = diagonal<double>(inst);
        Schedule prior;
        prior.levels = {{0.5, 0.2}};
        const auto base = apply_cost(run_qaoa(spec, prior), spec, 0.6);
        for (double theta : {0.1, 0.7, 1.9}) {
            const double j = expectation(apply_mixer(base, theta), spec);
            CHECK(std::abs(j - expectation(apply_mixer(base, theta + pi), spec)) <= 1e-12);
            if (!fields) {
                CHECK(std::abs(j - expectation(apply_mixer(base, theta + pi / 2), spec)) <= 1e-12);
            }
        }
        if (fields) {
            // With fields the pi/2 shift generally changes J.
            CHECK(std::abs(expectation(apply_mixer(base, 0.7), spec) -
                           expectation(apply_mixer(base, 0.7 + pi / 2), spec)) > 1e-6);
        }
    }
}

TEST_CASE("pauli_expectations examples") {
    std::mt19937_64 gen(10);
    const auto free = oracle::random_instance(gen, 5, false);
    const auto plus = pauli_expectations(init_plus(5), free);
    CHECK(std::abs(plus.zz) < 1e-14);
    CHECK(std::abs(plus.yy) < 1e-14);
    CHECK(std::abs(plus.zy) < 1e-14);
    CHECK(plus.z == 0.0);
    CHECK(plus.y == 0.0);

    const auto edge = single_edge();
    const auto aligned = pauli_expectations(basis_state(2, 0), edge);
    CHECK(aligned.zz == 1.0);
    CHECK(aligned.yy == 0.0);
    CHECK(aligned.zy == 0.0);
    CHECK(pauli_expectations(basis_state(2, 2), edge).zz == -1.0);
}

TEST_CASE("pauli_expectations match dense operators on random states") {
    std::mt19937_64 gen(11);
    const int n = 4;
    for (int t = 0; t < 10; ++t) {
        const auto inst = oracle::random_instance(gen, n, true, 0.8);
        const auto psi = oracle::random_state(gen, n);
        double zz = 0, yy = 0, zy = 0, z = 0, y = 0;
        for (const auto &c : inst.couplings()) {
            const auto zi = oracle::on_qubit(oracle::pauli_z(), c.i, n);
            const auto zj = oracle::on_qubit(oracle::pauli_z(), c.j, n);
            const auto yi = oracle::on_qubit(oracle::pauli_y(), c.i, n);
            const auto yj = oracle::on_qubit(oracle::pauli_y(), c.j, n);
            zz += c.w * oracle::expect(psi, zi * zj);
            yy += c.w * oracle::expect(psi, yi * yj);
            zy += c.w * oracle::expect(psi, zi * yj + yi * zj);
        }
        for (const auto &f : inst.fields()) {
            z += f.w * oracle::expect(psi, oracle::on_qubit(oracle::pauli_z(), f.i, n));
            y += f.w * oracle::expect(psi, oracle::on_qubit(oracle::pauli_y(), f.i, n));
        }
        const auto obs = pauli_expectations(StateVector(psi), inst);
        CHECK(std::abs(obs.zz - zz) <= 1e-12);
        CHECK(std::abs(obs.yy - yy) <= 1e-12);
        CHECK(std::abs(obs.zy - zy) <= 1e-12);
        CHECK(std::abs(obs.z - z) <= 1e-12);
        CHECK(std::abs(obs.y - y) <= 1e-12);
    }
}

TEST_CASE("sample examples") {
    const auto basis = sample(basis_state(3, 5), 100, 1);
    CHECK(basis.shots == 100);
    REQUIRE(basis.counts.size() == 1);
    CHECK(basis.counts.at(5) == 100);

    const std::uint64_t m = 100000;
    const auto uniform = sample(init_plus(2), m, 42);
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; k < 4; ++k) {
        const double freq = static_cast<double>(uniform.counts.at(k)) / m;
        CHECK(std::abs(freq - 0.25) < 5.0 * std::sqrt(0.25 * 0.75 / m));
        total += uniform.counts.at(k);
    }
    CHECK(total == m);

    std::mt19937_64 gen(12);
    const StateVector psi = oracle::random_state(gen, 5);
    const auto a = sample(psi, 3000, 77);
    const auto b = sample(psi, 3000, 77);
    CHECK(a.counts == b.counts);
    CHECK_FALSE(sample(psi, 3000, 78).counts == a.counts);
    CHECK_THROWS_AS(sample(psi, 0, 1), InputError);
}

TEST_CASE("estimate_energy examples") {
    const auto edge = single_edge();
    const auto spec = diagonal<double>(edge);
    CHECK(estimate_energy(sample(basis_state(2, 1), 10, 0), edge) == -1.0);

    ShotSet mixed;
    mixed.n = 2;
    mixed.counts = {{0, 1}, {1, 1}};
    mixed.shots = 2;
    CHECK(estimate_energy(mixed, edge) == 0.0);
    CHECK(estimate_energy(mixed, spec) == 0.0);

    ShotSet empty;
    empty.n = 2;
    CHECK_THROWS_AS(estimate_energy(empty, edge), InputError);
}

TEST_CASE("estimate_energy is unbiased at M = 3000") {
    std::mt19937_64 gen(13);
    const auto inst = oracle::random_instance(gen, 6, true);
    const auto spec = diagonal<double>(inst);
    Schedule sched;
    sched.levels = {{0.4, 0.35}};
    const auto psi = run_qaoa(spec, sched);
    const double exact = expectation(psi, spec);
    const double bound = 5.0 * (spec.e_max - spec.e_min) / std::sqrt(3000.0);
    for (Seed s = 0; s < 20; ++s) {
        CHECK(std::abs(estimate_energy(sample(psi, 3000, s), spec) - exact) < bound);
    }
}

TEST_CASE("state dump round trip") {
    std::mt19937_64 gen(14);
    const StateVector psi = oracle::random_state(gen, 4);
    std::stringstream buf;
    write_state_dump(buf, psi);
    CHECK(buf.str().size() == 4 + 16 * 16);
    const auto back = read_state_dump(buf);
    CHECK((back - psi).cwiseAbs().maxCoeff() == 0.0);
}
