#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pentao/instances.hpp"
#include "pentao/metrics.hpp"
#include "pentao/penta_o.hpp"

using namespace pentao;
using std::numbers::pi;

namespace {

PentaOConfig exact_config(double gamma0, int p_max) {
    PentaOConfig cfg;
    cfg.gamma0 = gamma0;
    cfg.p_max = p_max;
    return cfg;
}

Schedule random_schedule(std::mt19937_64 &gen, int depth) {
    std::uniform_real_distribution<double> g(0.0, 1.0), t(-pi, pi);
    Schedule s;
    for (int l = 0; l < depth; ++l) {
        s.levels.push_back({g(gen), t(gen)});
    }
    return s;
}

} // namespace

TEST_CASE("config validation") {
    PentaOConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.p_max = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.gamma0 = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.mode = ProbeMode::Shots;
    cfg.shots = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.gammas = {0.1, 0.2};
    cfg.p_max = 3;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.p_max = 2;
    CHECK(cfg.gamma_for_level(2) == 0.2);
}

TEST_CASE("step probe counts") {
    const auto free = to_instance(grid_graph(2, 3));
    const auto fielded = gen_sk(5, 0.5, 3);
    const auto cfg = exact_config(0.2, 1);
    CHECK(penta_o_step(free, Schedule{}, cfg).probes.size() == 3);
    CHECK(penta_o_step(fielded, Schedule{}, cfg).probes.size() == 5);
}

TEST_CASE("fitted model reproduces the exact theta curve") {
    std::mt19937_64 gen(1);
    for (int t = 0; t < 12; ++t) {
        const bool fields = t % 2 == 1;
        const auto inst = oracle::random_instance(gen, 3 + t % 6, fields);
        const auto spec = diagonal<double>(inst);
        const auto prior = random_schedule(gen, t % 4);
        PentaOConfig cfg = exact_config(std::uniform_real_distribution<double>(0.05, 1.0)(gen), 1);
        const auto state = run_qaoa(spec, prior);
        const auto step = penta_o_step(spec, state, fields, 1, cfg);
        const auto after_cost = apply_cost(state, spec, cfg.gamma0);
        for (int k = 0; k < 64; ++k) {
            const double theta = k * pi / 64;
            const double exact = expectation(apply_mixer(after_cost, theta), spec);
            CHECK(std::abs(model_eval(step.model, theta) - exact) <= 1e-9);
        }
        CHECK(step.j_predicted == doctest::Approx(expectation(apply_mixer(after_cost, step.theta), spec)).epsilon(1e-9));
    }
}

TEST_CASE("two-path coefficient equivalence") {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 10; ++t) {
        const bool fields = t % 2 == 0;
        const auto inst = oracle::random_instance(gen, 6, fields);
        const auto prior = random_schedule(gen, 2);
        const double gamma = std::uniform_real_distribution<double>(0.01, 1.0)(gen);
        const auto observed = coefficients_from_observables(inst, prior, gamma);
        PentaOConfig cfg = exact_config(gamma, 1);
        const auto fitted = penta_o_step(inst, prior, cfg).model;
        for (int k = 0; k < 64; ++k) {
            const double theta = k * pi / 64;
            CHECK(std::abs(model_eval(observed, theta) - model_eval(fitted, theta)) <= 1e-9);
        }
        if (!fields) {
            CHECK(observed.A_prime == 0.0);
        }
    }
}

TEST_CASE("observables at |+> with gamma = 0 vanish") {
    std::mt19937_64 gen(3);
    const auto inst = oracle::random_instance(gen, 5, false);
    const auto m = coefficients_from_observables(inst, Schedule{}, 0.0);
    CHECK(std::abs(m.A) < 1e-14);
    CHECK(m.A_prime == 0.0);
    CHECK(std::abs(m.C) < 1e-14);
}

TEST_CASE("grid demo trajectory is non-increasing") {
    const auto inst = to_instance(grid_graph(2, 3));
    const auto res = penta_o_run(inst, exact_config(0.2, 3));
    REQUIRE(res.j_exact.size() == 3);
    CHECK(res.j_exact[0] < 0.0);
    CHECK(res.j_exact[1] < res.j_exact[0]);
    CHECK(res.j_exact[2] < res.j_exact[1]);
    CHECK(res.schedule.depth() == 3);
    CHECK(res.schedule.objective_trajectory == res.j_observed);
}

TEST_CASE("exact mode never gets worse from level to level") {
    std::mt19937_64 gen(4);
    for (int t = 0; t < 8; ++t) {
        const auto inst = oracle::random_instance(gen, 4 + t % 5, t % 2 == 0);
        const auto res = penta_o_run(inst, exact_config(0.3, 15));
        double prev = 0.0; // <+|H_C|+>
        for (double j : res.j_exact) {
            CHECK(j <= prev + 1e-12);
            prev = j;
        }
    }
}

TEST_CASE("trial accounting") {
    const auto fielded = gen_sk(6, 0.5, 1);
    const auto free = gen_sk(6, 0.0, 1);
    for (int p = 1; p <= 10; ++p) {
        auto cfg = exact_config(0.1, p);
        const auto a = penta_o_run(fielded, cfg);
        CHECK(a.probe_trials == static_cast<std::uint64_t>(5 * p));
        CHECK(a.total_trials == static_cast<std::uint64_t>(5 * p + 1));
        const auto b = penta_o_run(free, cfg);
        CHECK(b.probe_trials == static_cast<std::uint64_t>(3 * p));
        CHECK(b.total_trials == static_cast<std::uint64_t>(3 * p + 1));
        cfg.final_sample = false;
        CHECK(penta_o_run(free, cfg).total_trials == static_cast<std::uint64_t>(3 * p));
    }
    const auto four = penta_o_run(fielded, exact_config(0.1, 4));
    CHECK(four.total_trials == 21);
    REQUIRE(four.final_shots.has_value());
    CHECK(four.final_shots->shots == 3000);
}

TEST_CASE("gamma0 = 0 keeps J at zero on field-free instances") {
    const auto inst = to_instance(gen_regular(8, 3, 2));
    const auto res = penta_o_run(inst, exact_config(0.0, 4));
    for (const auto &step : res.steps) {
        CHECK(step.degenerate);
        CHECK(step.theta == 0.0);
    }
    for (double j : res.j_exact) {
        CHECK(std::abs(j) < 1e-12);
    }
}

TEST_CASE("per-level gamma list is honoured") {
    const auto inst = to_instance(grid_graph(2, 2));
    PentaOConfig cfg = exact_config(0.0, 3);
    cfg.gammas = {0.1, 0.2, 0.3};
    const auto res = penta_o_run(inst, cfg);
    CHECK(res.schedule.levels[0].gamma == 0.1);
    CHECK(res.schedule.levels[2].gamma == 0.3);
}

TEST_CASE("final state equals re-preparing the whole schedule") {
    const auto inst = gen_sk(7, 0.4, 9);
    const auto res = penta_o_run(inst, exact_config(0.1, 6));
    const auto again = run_qaoa(inst, res.schedule);
    CHECK((again - res.final_state).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("runs are deterministic for a fixed configuration") {
    const auto inst = gen_sk(6, 0.5, 4);
    PentaOConfig cfg = exact_config(0.1, 5);
    cfg.mode = ProbeMode::Shots;
    cfg.shots = 500;
    cfg.seed = 123;
    const auto a = penta_o_run(inst, cfg);
    const auto b = penta_o_run(inst, cfg);
    CHECK(a.j_observed == b.j_observed);
    CHECK(a.schedule.levels == b.schedule.levels);
    CHECK(a.final_shots->counts == b.final_shots->counts);
    for (std::size_t l = 0; l < a.steps.size(); ++l) {
        for (std::size_t k = 0; k < a.steps[l].probes.size(); ++k) {
            CHECK(a.steps[l].probes[k].seed == probe_seed(123, static_cast<int>(l + 1), static_cast<int>(k)));
            CHECK(a.steps[l].probes[k].shots == 500);
        }
    }
    cfg.seed = 124;
    CHECK_FALSE(penta_o_run(inst, cfg).j_observed == a.j_observed);
}

TEST_CASE("shots mode converges to exact theta with many shots") {
    const auto grid = to_instance(grid_graph(2, 3));
    const auto sk = gen_sk(6, 0.5, 2);
    for (const auto *inst : {&grid, &sk}) {
        PentaOConfig cfg = exact_config(inst->has_fields() ? 0.1 : 0.2, 1);
        cfg.final_sample = false;
        const double exact = penta_o_run(*inst, cfg).schedule.levels[0].theta;
        cfg.mode = ProbeMode::Shots;
        cfg.shots = 1000000;
        for (Seed s : {1u, 2u, 3u}) {
            cfg.seed = s;
            CHECK(std::abs(penta_o_run(*inst, cfg).schedule.levels[0].theta - exact) < 0.01);
        }
    }
}

TEST_CASE("convergence stopping") {
    const auto inst = to_instance(grid_graph(2, 3));
    PentaOConfig cfg = exact_config(0.2, 40);
    cfg.converge = true;
    const auto res = penta_o_run(inst, cfg);
    CHECK(res.converged);
    CHECK(res.j_exact.size() < 40);
    const auto spec = diagonal<double>(inst);
    std::vector<double> r;
    for (double j : res.j_observed) {
        r.push_back(approx_ratio(inst, j, spec.e_min, RatioConvention::SumWeights));
    }
    const auto n = r.size();
    CHECK(r[n - 1] - r[n - 2] < cfg.epsilon);
    for (std::size_t l = 0; l + 2 < n; ++l) {
        CHECK(r[l + 1] - r[l] >= cfg.epsilon);
    }

    const auto sk = gen_sk(6, 0.5, 5);
    cfg.gamma0 = 0.05;
    const auto fielded = penta_o_run(sk, cfg);
    const auto sk_spec = diagonal<double>(sk);
    const auto m = fielded.j_observed.size();
    if (fielded.converged) {
        const double before = normalized_energy(sk_spec, fielded.j_observed[m - 2]);
        const double after = normalized_energy(sk_spec, fielded.j_observed[m - 1]);
        CHECK(before - after < cfg.epsilon * before);
    }

    const IsingInstance flat(2, {{0, 1, 0.0}});
    CHECK_THROWS_AS(penta_o_run(flat, cfg), InputError);
}
