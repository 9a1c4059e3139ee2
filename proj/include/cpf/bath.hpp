#pragma once

#include <vector>

#include "cpf/types.hpp"

namespace cpf {

/// Stationary Gaussian noise with exponential correlation
/// chi(t) = (gamma / 2 tau_c) exp(-|t| / tau_c).
struct ClassicalNoiseModel {
    double gamma;
    double tau_c;

    ClassicalNoiseModel(double g, double tc) : gamma(g), tau_c(tc) {
        if (!(g > 0.0) || !(tc > 0.0))
            throw validation_error("classical noise model requires gamma, tau_c > 0");
    }
    double chi(double dt) const {
        return (gamma / (2.0 * tau_c)) * std::exp(-std::abs(dt) / tau_c);
    }
};

/// Bosonic bath described through its pair correlations:
///   <B(ta) B^dag(tb)> = chi_down(ta - tb) = (nbar+1)(gamma/2 tau_c) e^{-|t|/tau_c}
///   <B^dag(ta) B(tb)> = chi_up(ta - tb)   =  nbar   (gamma/2 tau_c) e^{-|t|/tau_c}
/// with <BB> = <B^dag B^dag> = 0.
struct QuantumBathModel {
    double gamma;
    double tau_c;
    double nbar;

    QuantumBathModel(double g, double tc, double n) : gamma(g), tau_c(tc), nbar(n) {
        if (!(g > 0.0) || !(tc > 0.0) || n < 0.0)
            throw validation_error("quantum bath model requires gamma, tau_c > 0, nbar >= 0");
    }
    double chi_down(double dt) const {
        return (nbar + 1.0) * (gamma / (2.0 * tau_c)) * std::exp(-std::abs(dt) / tau_c);
    }
    double chi_up(double dt) const {
        return nbar * (gamma / (2.0 * tau_c)) * std::exp(-std::abs(dt) / tau_c);
    }
};

enum class CorrelationKind { chi, chi_down, chi_up };

double correlation_eval(const ClassicalNoiseModel& m, CorrelationKind kind, double dt);
double correlation_eval(const QuantumBathModel& m, CorrelationKind kind, double dt);

/// Bath-operator symbols appearing in the interaction Hamiltonian.
enum class BathSymbol { B, Bdag, Noise };

/// System operators with their associated bath symbol:
/// dissipative H = sigma_+ (x) B(t) + sigma_- (x) B^dag(t); dephasing
/// H = xi(t) sigma_z with a scalar noise tag.
struct CouplingStructure {
    struct Term {
        ComplexMatrix op;
        BathSymbol symbol;
    };
    std::vector<Term> terms;

    static CouplingStructure dissipative();
    static CouplingStructure dephasing();
};

}  // namespace cpf
