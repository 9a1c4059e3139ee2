#include "cpf/bath.hpp"

namespace cpf {

double correlation_eval(const ClassicalNoiseModel& m, CorrelationKind kind, double dt) {
    if (kind != CorrelationKind::chi)
        throw model_error("classical noise model only defines chi");
    return m.chi(dt);
}

double correlation_eval(const QuantumBathModel& m, CorrelationKind kind, double dt) {
    switch (kind) {
        case CorrelationKind::chi_down:
            return m.chi_down(dt);
        case CorrelationKind::chi_up:
            return m.chi_up(dt);
        default:
            throw model_error("quantum bath model defines chi_down / chi_up only");
    }
}

CouplingStructure CouplingStructure::dissipative() {
    return CouplingStructure{{{sigma_plus(), BathSymbol::B},
                              {sigma_minus(), BathSymbol::Bdag}}};
}

CouplingStructure CouplingStructure::dephasing() {
    return CouplingStructure{{{pauli_z(), BathSymbol::Noise}}};
}

}  // namespace cpf
