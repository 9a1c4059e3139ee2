#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cpf/bath.hpp"
#include "cpf/superoperator.hpp"

namespace cpf {

/// Uniform-grid table with local 4-point (cubic) Lagrange interpolation.
class CubicTable {
  public:
    CubicTable() = default;
    CubicTable(double s_max, std::vector<double> values)
        : s_max_(s_max), values_(std::move(values)) {
        if (values_.size() < 4 || !(s_max > 0.0))
            throw validation_error("cubic table needs >= 4 nodes");
    }
    double operator()(double s) const;
    double step() const { return s_max_ / (values_.size() - 1); }
    const std::vector<double>& values() const { return values_; }

  private:
    double s_max_ = 0.0;
    std::vector<double> values_;
};

/// Duration-indexed family of reduced system channels Lambda_s. Stationarity
/// of the bath state makes the two-time propagator a function of the
/// duration only: Lambda_{tb,ta} = Lambda_{tb - ta}.
class UnperturbedPropagator {
  public:
    enum class Provenance { analytic, volterra, pseudomode_tabulated };

    UnperturbedPropagator(Provenance p, double max_duration,
                          std::function<SuperOperator(double)> eval)
        : provenance_(p), max_duration_(max_duration), eval_(std::move(eval)) {}

    SuperOperator at(double s) const {
        if (s < 0.0 || s > max_duration_ * (1.0 + 1e-12))
            throw validation_error("propagator duration out of tabulated range");
        return eval_(s);
    }
    Provenance provenance() const { return provenance_; }
    double max_duration() const { return max_duration_; }

  private:
    Provenance provenance_;
    double max_duration_;
    std::function<SuperOperator(double)> eval_;
};

/// Decoherence factor of the dephasing channel,
/// D(s) = exp(-2 gamma [s - tau_c (1 - e^{-s/tau_c})]).
double dephasing_decoherence_factor(const ClassicalNoiseModel& m, double s);

/// Qubit dephasing channel: populations invariant, coherences scaled by D(s).
UnperturbedPropagator dephasing_propagator(const ClassicalNoiseModel& m,
                                           double max_duration);

/// Closed-form decay amplitude for dG/ds = -int_0^s c e^{-(s-u)/tau_c} G(u) du,
/// G(0) = 1 (hyperbolic / trigonometric / degenerate branches unified).
double decay_amplitude_closed_form(double c, double tau_c, double s);

/// Trapezoidal Volterra solution of the same equation on a uniform grid of
/// n_steps steps over [0, s_max]; returns G at the n_steps+1 nodes.
std::vector<double> volterra_decay_amplitude(double c, double tau_c, double s_max,
                                             int n_steps);

/// Amplitude-damping channel at zero temperature built on the Volterra
/// amplitude G(s) with kernel chi_down. Requires nbar = 0.
UnperturbedPropagator zero_T_decay_propagator(const QuantumBathModel& m,
                                              double max_duration);

enum class FiniteTStyle {
    pseudomode_tabulated,  // default: tabulated from the thermal embedding
    ansatz,                // zero-T structure plus upward-transition term
};

/// Finite-temperature reduced propagator.
UnperturbedPropagator finite_T_propagator(const QuantumBathModel& m,
                                          double max_duration,
                                          FiniteTStyle style = FiniteTStyle::pseudomode_tabulated);

}  // namespace cpf
