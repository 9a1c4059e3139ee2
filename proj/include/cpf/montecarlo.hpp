#pragma once

#include <cstdint>

#include "cpf/bath.hpp"
#include "cpf/measurement.hpp"
#include "cpf/oracle.hpp"

namespace cpf {

/// Exact-update Ornstein-Uhlenbeck sampler for the stationary colored noise:
/// xi_{k+1} = xi_k e^{-h/tau_c} + sqrt((gamma/2tau_c)(1 - e^{-2h/tau_c})) nu.
class OUPathSampler {
  public:
    OUPathSampler(const ClassicalNoiseModel& model, double step, std::uint64_t seed);

    /// Current noise value; the sampler starts from the stationary marginal.
    double value() const { return xi_; }
    double advance();

    /// Continue the same path with a different step size.
    void set_step(const ClassicalNoiseModel& model, double step);

  private:
    double decay_;
    double kick_;
    double xi_;
    std::uint64_t state_;
    double gauss();
};

/// Per-trajectory RNG stream derived from a base seed (splitmix64 mixing),
/// so parallel and serial runs aggregate identically.
std::uint64_t trajectory_seed(std::uint64_t base_seed, long trajectory_index);

/// Monte Carlo joint distribution for the dephasing dynamics: each sampled
/// path evolves rho~_x to t, records Tr(E_y .), restarts from rho_y on the
/// same (continuous) path, evolves to t + tau and records Tr(E_z .); the
/// per-path products are averaged. Deterministic for a fixed seed.
OracleResult mc_joint_prob(const ClassicalNoiseModel& model,
                           const MeasurementScheme& scheme, const DensityMatrix& rho0,
                           double t, double tau, long n_traj, std::uint64_t seed);

}  // namespace cpf
