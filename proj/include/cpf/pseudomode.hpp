#pragma once

#include "cpf/bath.hpp"
#include "cpf/measurement.hpp"
#include "cpf/oracle.hpp"
#include "cpf/propagator.hpp"
#include "cpf/superoperator.hpp"

namespace cpf {

/// Markovian embedding of the exponential-correlation bath: one damped
/// (thermal) bosonic mode with coupling g = sqrt(gamma / 2 tau_c) and decay
/// kappa = 2 / tau_c, reproducing chi_down / chi_up exactly.
struct PseudomodeModel {
    double g;
    double kappa;
    double nbar;
    int n_max;

    /// n_max < 0 selects the default cutoff (4 at nbar = 0, 8 otherwise).
    static PseudomodeModel from_bath(const QuantumBathModel& m, int n_max = -1);

    int mode_dim() const { return n_max + 1; }

    ComplexMatrix annihilation() const;
    /// Truncated thermal mode state, renormalized to unit trace.
    ComplexMatrix mode_stationary_state() const;
    /// Generator on the qubit (x) mode Liouville space:
    /// -i[g(sigma_+ a + sigma_- a^dag), .] + kappa(nbar+1) D[a] + kappa nbar D[a^dag].
    SuperOperator embedding_generator() const;
    /// Dissipative part alone, acting on the mode space.
    SuperOperator mode_generator() const;
};

/// Joint three-measurement distribution from the embedding. The bipartite
/// state is evolved for t, conditioned on the middle outcome (system reset to
/// rho_y = E_y, mode kept), evolved for tau, and read out with E_z. Exact up
/// to Fock cutoff and stepper tolerance; cutoff convergence is verified
/// against n_max + 2 when check_cutoff is set.
OracleResult pseudomode_joint_prob(const QuantumBathModel& model,
                                   const MeasurementScheme& scheme,
                                   const DensityMatrix& rho0, double t, double tau,
                                   int n_max = -1, bool check_cutoff = true);

/// Deviation of the embedded mode's stationary two-time functions from the
/// closed-form chi_down / chi_up (quantum regression evolution).
struct ModeCorrelationReport {
    double max_dev_down = 0.0;  // |g^2 <a(t) a^dag> - chi_down(t)|
    double max_dev_up = 0.0;    // |g^2 <a^dag(t) a> - chi_up(t)|
};

ModeCorrelationReport mode_correlation_check(const PseudomodeModel& model,
                                             double t_max = 5.0, int n_samples = 40);

namespace detail {
UnperturbedPropagator pseudomode_tabulated_propagator(const QuantumBathModel& m,
                                                      double max_duration);
}

}  // namespace cpf
