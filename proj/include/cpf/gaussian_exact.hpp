#pragma once

#include "cpf/bath.hpp"
#include "cpf/measurement.hpp"
#include "cpf/oracle.hpp"

namespace cpf {

/// Accumulated-phase variance of the stationary OU process over a window of
/// length s: Var(int_0^s xi) = gamma (s - tau_c (1 - e^{-s/tau_c})).
double ou_phase_variance(const ClassicalNoiseModel& model, double s);

/// Covariance of the phases accumulated over [0, t] and [t, t + tau]:
/// (gamma tau_c / 2)(1 - e^{-t/tau_c})(1 - e^{-tau/tau_c}).
double ou_phase_covariance(const ClassicalNoiseModel& model, double t, double tau);

/// Exact joint three-measurement distribution for Gaussian dephasing, from
/// the closed-form trigonometric moments of the jointly Gaussian phase pair.
/// Qubit schemes only.
JointDistribution gaussian_dephasing_joint_prob(const ClassicalNoiseModel& model,
                                                const MeasurementScheme& scheme,
                                                const DensityMatrix& rho0, double t,
                                                double tau);

}  // namespace cpf
