#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cpf/bath.hpp"
#include "cpf/joint.hpp"
#include "cpf/measurement.hpp"
#include "cpf/propagator.hpp"
#include "cpf/superoperator.hpp"

namespace cpf {

/// System-side coupling operators and Wick pair rules of one interaction
/// model, in the form consumed by the contraction enumerator. Couplings are
/// indexed by a symbol id; a Wick pair of symbols (first, second) in
/// linearized product order scores coeff * exp(-|dt| / tau_c).
class EngineModel {
  public:
    static EngineModel dephasing(const ClassicalNoiseModel& m);
    static EngineModel dissipative(const QuantumBathModel& m);

    bool classical() const { return classical_; }
    double tau_c() const { return tau_c_; }
    int n_couplings() const { return static_cast<int>(ops_.size()); }
    const ComplexMatrix& system_op(int mu) const { return ops_[mu]; }
    double pair_coeff(int first, int second) const { return coeff_[first][second]; }

  private:
    bool classical_ = true;
    double tau_c_ = 0.0;
    std::vector<ComplexMatrix> ops_;
    double coeff_[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

struct SeriesOptions {
    int max_order = 3;    // highest evaluated order
    int quad_nodes = 41;  // quadrature nodes per axis on [0,t] and [0,tau]
};

struct SeriesTables {
    JointDistribution markov;
    std::vector<JointDistribution> integral_order;  // [n-1] = order-n term
    JointDistribution total() const;
};

/// Factorized (memoryless) part of the joint distribution:
/// P_M(z,y,x) = Tr(E_z Lambda_tau[rho_y]) Tr(E_y Lambda_t[rho~_x]).
JointDistribution markov_term(const MeasurementScheme& scheme,
                              const UnperturbedPropagator& lambda,
                              const DensityMatrix& rho0, double t, double tau);

/// Memory-kernel series evaluator for one (t, tau) point. Precomputes the
/// propagator applications on the shared quadrature grids and caches the
/// separable exponential integrals, so joint tables and CPF values for all
/// conditioning outcomes reuse the same contraction enumeration.
class SeriesEvaluator {
  public:
    SeriesEvaluator(const MeasurementScheme& scheme, const EngineModel& model,
                    const UnperturbedPropagator& lambda, const DensityMatrix& rho0,
                    double t, double tau, SeriesOptions opts = {});
    ~SeriesEvaluator();
    SeriesEvaluator(SeriesEvaluator&&) noexcept;
    SeriesEvaluator& operator=(SeriesEvaluator&&) noexcept;

    JointDistribution markov() const;
    /// Integral contribution of order n (1 <= n <= max_order) to P(z,y,x).
    JointDistribution order_table(int n);
    SeriesTables tables();
    /// CPF conditioned on middle outcome y, with per-order breakdown.
    CPFResult cpf(std::size_t y);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SeriesTables joint_prob_perturbative(const MeasurementScheme& scheme,
                                     const EngineModel& model,
                                     const UnperturbedPropagator& lambda,
                                     const DensityMatrix& rho0, double t, double tau,
                                     SeriesOptions opts = {});

CPFResult cpf_perturbative(const MeasurementScheme& scheme, const EngineModel& model,
                           const UnperturbedPropagator& lambda,
                           const DensityMatrix& rho0, double t, double tau,
                           std::size_t y, SeriesOptions opts = {});

/// Discrepancy report for the projected-dynamics decomposition identities
///   Q rho_t = G_{t,0} Q rho_0 + int_0^t dt' G_{t,t'} Q L(t') P rho_t'
/// (and the P <-> Q mirrored one), evaluated on a small bipartite space with
/// all propagators built from per-step exponentials at step h = t/n_steps and
/// again at h/2. Errors must shrink as O(h^2).
struct ProjectionIdentityReport {
    double irrelevant_err_h = 0.0, irrelevant_err_half = 0.0;
    double relevant_err_h = 0.0, relevant_err_half = 0.0;
    double irrelevant_ratio() const { return irrelevant_err_h / irrelevant_err_half; }
    double relevant_ratio() const { return relevant_err_h / relevant_err_half; }
};

ProjectionIdentityReport projection_identity_check(
    const std::function<SuperOperator(double)>& generator, Eigen::Index d_s,
    Eigen::Index d_e, const DensityMatrix& sigma_e, const DensityMatrix& rho0_se,
    double t, int n_steps);

}  // namespace cpf
