#include <doctest.h>

#include "cpf/measurement.hpp"
#include "cpf/propagator.hpp"

using namespace cpf;

TEST_CASE("presets are normalized projective qubit schemes") {
    for (const char* name : {"zzz", "xzx", "xxx"}) {
        MeasurementScheme s = MeasurementScheme::preset(name);
        for (const MeasurementSet* set : {&s.first, &s.middle, &s.last}) {
            ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
            for (std::size_t i = 0; i < set->size(); ++i) sum += set->effect(i);
            CHECK((sum - qubit_identity()).cwiseAbs().maxCoeff() < 1e-14);
            CHECK(set->is_projective());
        }
    }
    CHECK_THROWS_AS(MeasurementScheme::preset("yyy"), validation_error);
}

TEST_CASE("post-first states sum to the dephased initial state") {
    DensityMatrix rho0(qubit_projector(std::sqrt(0.8), std::sqrt(0.2)));
    PostFirstStates pfs =
        build_post_first_states(rho0, MeasurementSet::qubit_z());
    CHECK(std::abs(pfs.prob_x(0) - 0.8) < 1e-14);
    CHECK(std::abs(pfs.prob_x(1) - 0.2) < 1e-14);
    CHECK(std::abs(pfs.rho_sum.trace().real() - 1.0) < 1e-14);
    // z-measurement kills the coherences of the summed state.
    CHECK(std::abs(pfs.rho_sum(0, 1)) < 1e-14);
}

TEST_CASE("rho_yx under the identity channel: closed-form qubit case") {
    // rho0 = |+x><+x|, first = z, middle effect E_y = |+x><+x|, Lambda = id.
    DensityMatrix rho0(ket_xplus_proj());
    PostFirstStates pfs =
        build_post_first_states(rho0, MeasurementSet::qubit_z());
    SuperOperator id = SuperOperator::identity(2);
    ComplexMatrix e_y = ket_xplus_proj();
    // P(y) = 1/2 for both x, P(x) = 1/2, so
    // rho~_yx = rho~_x * 1/2 - rho~ * 1/4 with rho~ = I/2.
    for (std::size_t x = 0; x < 2; ++x) {
        ComplexMatrix expected =
            0.5 * pfs.rho_x[x] - 0.25 * pfs.rho_sum;
        CHECK((rho_yx(pfs, id, e_y, x) - expected).cwiseAbs().maxCoeff() < 1e-14);
        // trace = P(y)P(x) - P(y,x) = 1/4 - 1/4 = 0 here.
        CHECK(std::abs(rho_yx(pfs, id, e_y, x).trace()) < 1e-14);
    }
}

TEST_CASE("prob_y sums to one over the middle outcomes") {
    DensityMatrix rho0(qubit_projector(std::sqrt(0.8), std::sqrt(0.2)));
    MeasurementScheme s = MeasurementScheme::preset("xzx");
    PostFirstStates pfs = build_post_first_states(rho0, s.first);
    UnperturbedPropagator lam =
        dephasing_propagator(ClassicalNoiseModel(1.0, 0.1), 2.0);
    SuperOperator l = lam.at(1.5);
    double total = 0.0;
    for (std::size_t y = 0; y < s.middle.size(); ++y)
        total += prob_y(pfs, l, s.middle.effect(y));
    CHECK(std::abs(total - 1.0) < 1e-13);
}
