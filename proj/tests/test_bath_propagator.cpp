#include <doctest.h>

#include <cmath>

#include "cpf/propagator.hpp"
#include "cpf/pseudomode.hpp"

using namespace cpf;

TEST_CASE("correlation functions and their classical/quantum relation") {
    ClassicalNoiseModel cm(1.0, 0.1);
    CHECK(std::abs(cm.chi(0.0) - 5.0) < 1e-14);
    CHECK(std::abs(cm.chi(0.2) - 5.0 * std::exp(-2.0)) < 1e-14);
    QuantumBathModel qm(1.0, 0.1, 0.3);
    CHECK(std::abs(qm.chi_down(0.2) - 1.3 * cm.chi(0.2)) < 1e-13);
    CHECK(std::abs(qm.chi_up(-0.2) - 0.3 * cm.chi(0.2)) < 1e-13);
    CHECK_THROWS_AS(ClassicalNoiseModel(0.0, 0.1), validation_error);
    CHECK_THROWS_AS(QuantumBathModel(1.0, 0.1, -0.1), validation_error);
}

TEST_CASE("dephasing decoherence factor closed form") {
    ClassicalNoiseModel m(1.0, 0.1);
    double expected = std::exp(-2.0 * (1.0 - 0.1 * (1.0 - std::exp(-10.0))));
    CHECK(std::abs(dephasing_decoherence_factor(m, 1.0) - expected) < 1e-14);
    CHECK(dephasing_decoherence_factor(m, 0.0) == 1.0);
    // Channel: populations fixed, coherences scaled by D.
    UnperturbedPropagator lam = dephasing_propagator(m, 2.0);
    SuperOperator l = lam.at(1.0);
    CHECK(l.is_trace_preserving());
    CHECK(l.choi_min_eigenvalue() > -Tol::choi_positivity);
    ComplexMatrix rho = ket_xplus_proj();
    ComplexMatrix out = l(rho);
    CHECK(std::abs(out(0, 0).real() - 0.5) < 1e-14);
    CHECK(std::abs(out(0, 1).real() - 0.5 * expected) < 1e-14);
}

TEST_CASE("decay amplitude: closed form, Volterra, degenerate case") {
    // Degenerate branch gamma tau_c = 0.5: G(2 tau_c) = 2/e.
    double g_deg = decay_amplitude_closed_form(1.0 / (2.0 * 0.5), 0.5, 1.0);
    CHECK(std::abs(g_deg - 2.0 / std::exp(1.0)) < 1e-12);
    for (double tc : {0.05, 0.125, 0.5, 0.9}) {
        double c = 1.0 / (2.0 * tc);
        auto max_err = [&](int n) {
            std::vector<double> gv = volterra_decay_amplitude(c, tc, 2.0, n);
            double e = 0.0;
            for (int i = 0; i <= n; i += n / 8)
                e = std::max(e, std::abs(gv[i] - decay_amplitude_closed_form(
                                              c, tc, 2.0 * i / n)));
            return e;
        };
        double e1 = max_err(2000), e2 = max_err(4000);
        CHECK(e2 < 1e-5);
        CHECK(e1 / e2 > 3.5);  // second-order step convergence
        CHECK(e1 / e2 < 4.5);
    }
}

TEST_CASE("zero-T channel matches the pseudomode-tabulated propagator") {
    for (double tc : {0.05, 0.125, 0.5}) {
        QuantumBathModel m(1.0, tc, 0.0);
        UnperturbedPropagator a = zero_T_decay_propagator(m, 2.0);
        UnperturbedPropagator b =
            detail::pseudomode_tabulated_propagator(m, 2.0);
        for (double s : {0.3, 1.0, 2.0})
            CHECK((a.at(s).action() - b.at(s).action()).cwiseAbs().maxCoeff() <
                  1e-6);
    }
}

TEST_CASE("finite-T propagator styles are trace preserving and agree at nbar->0") {
    QuantumBathModel m(1.0, 0.25, 0.2);
    for (FiniteTStyle st : {FiniteTStyle::pseudomode_tabulated, FiniteTStyle::ansatz}) {
        UnperturbedPropagator lam = finite_T_propagator(m, 2.0, st);
        SuperOperator l = lam.at(1.7);
        CHECK(l.is_trace_preserving());
        CHECK(l.choi_min_eigenvalue() > -Tol::choi_positivity);
    }
    QuantumBathModel m0(1.0, 0.25, 1e-9);
    CHECK((finite_T_propagator(m0, 1.0).at(1.0).action() -
           zero_T_decay_propagator(QuantumBathModel(1.0, 0.25, 0.0), 1.0)
               .at(1.0)
               .action())
              .cwiseAbs()
              .maxCoeff() < 1e-5);
}

TEST_CASE("propagator range checking") {
    UnperturbedPropagator lam =
        dephasing_propagator(ClassicalNoiseModel(1.0, 0.1), 1.0);
    CHECK_THROWS_AS(lam.at(1.5), validation_error);
    CHECK_THROWS_AS(lam.at(-0.1), validation_error);
}
