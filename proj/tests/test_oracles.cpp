#include <doctest.h>

#include <cmath>

#include "cpf/gaussian_exact.hpp"
#include "cpf/montecarlo.hpp"
#include "cpf/pseudomode.hpp"

using namespace cpf;

TEST_CASE("OU sampler reproduces the stationary variance and correlation") {
    ClassicalNoiseModel m(1.0, 0.2);
    double h = 0.05;
    OUPathSampler s(m, h, 99);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sumlag = 0.0;
    double prev = s.value();
    for (int i = 0; i < n; ++i) {
        double v = s.advance();
        sum += v;
        sum2 += v * v;
        sumlag += v * prev;
        prev = v;
    }
    double mean = sum / n, var = sum2 / n - mean * mean;
    double chi0 = m.chi(0.0);  // gamma / 2 tau_c = 2.5
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - chi0) / chi0 < 0.02);
    CHECK(std::abs(sumlag / n - chi0 * std::exp(-h / m.tau_c)) / chi0 < 0.02);
}

TEST_CASE("trajectory seeds are distinct and order independent") {
    CHECK(trajectory_seed(1, 0) != trajectory_seed(1, 1));
    CHECK(trajectory_seed(1, 5) == trajectory_seed(1, 5));
    CHECK(trajectory_seed(1, 5) != trajectory_seed(2, 5));
}

TEST_CASE("Gaussian-exact oracle: normalization and Markov limit") {
    ClassicalNoiseModel m(1.0, 0.05);
    DensityMatrix rho0(ket_plus_proj());
    MeasurementScheme s = MeasurementScheme::preset("xxx");
    JointDistribution j = gaussian_dephasing_joint_prob(m, s, rho0, 1.0, 1.0);
    CHECK(std::abs(j.sum() - 1.0) < 1e-14);
    CHECK(j.min_entry() > -1e-15);
    // tau_c -> 0 at fixed gamma: white-noise limit is Markovian => CPF -> 0.
    ClassicalNoiseModel mk(1.0, 1e-4);
    JointDistribution jk = gaussian_dephasing_joint_prob(mk, s, rho0, 1.0, 1.0);
    std::vector<double> pm = {1.0, -1.0};
    for (std::size_t y = 0; y < 2; ++y)
        CHECK(std::abs(cpf_from_joint(jk, pm, pm, y).value) < 1e-3);
}

TEST_CASE("MC oracle is deterministic and matches the Gaussian oracle") {
    ClassicalNoiseModel m(1.0, 0.1);
    DensityMatrix rho0(ket_plus_proj());
    MeasurementScheme s = MeasurementScheme::preset("xxx");
    OracleResult a = mc_joint_prob(m, s, rho0, 0.8, 0.8, 20000, 7);
    OracleResult b = mc_joint_prob(m, s, rho0, 0.8, 0.8, 20000, 7);
    for (std::size_t i = 0; i < a.joint.table.size(); ++i)
        CHECK(a.joint.table[i] == b.joint.table[i]);
    CHECK(std::abs(a.joint.sum() - 1.0) < 1e-12);

    JointDistribution exact = gaussian_dephasing_joint_prob(m, s, rho0, 0.8, 0.8);
    for (std::size_t i = 0; i < a.joint.table.size(); ++i) {
        double se = std::max(a.stderr_table[i], 1e-12);
        CHECK(std::abs(a.joint.table[i] - exact.table[i]) < 5.0 * se);
    }
}

TEST_CASE("pseudomode embedding parameters and joint distribution") {
    QuantumBathModel m(1.0, 0.25, 0.0);
    PseudomodeModel pm = PseudomodeModel::from_bath(m);
    CHECK(std::abs(pm.g - std::sqrt(1.0 / 0.5)) < 1e-14);
    CHECK(std::abs(pm.kappa - 8.0) < 1e-14);
    CHECK(pm.n_max == 4);

    DensityMatrix rho0(qubit_projector(std::sqrt(0.8), std::sqrt(0.2)));
    MeasurementScheme s = MeasurementScheme::preset("zzz");
    OracleResult r = pseudomode_joint_prob(m, s, rho0, 1.0, 1.0);
    CHECK(std::abs(r.joint.sum() - 1.0) < 1e-10);
    CHECK(r.joint.min_entry() > -1e-12);

    ModeCorrelationReport rep = mode_correlation_check(pm);
    CHECK(rep.max_dev_down < 1e-8);
    CHECK(rep.max_dev_up < 1e-8);
}

TEST_CASE("oracles respect input validation") {
    ClassicalNoiseModel m(1.0, 0.1);
    DensityMatrix rho0(ket_plus_proj());
    MeasurementScheme s = MeasurementScheme::preset("xxx");
    CHECK_THROWS_AS(mc_joint_prob(m, s, rho0, 1.0, 1.0, 10, 1), validation_error);
}
