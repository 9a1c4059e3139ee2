#pragma once

#include <string>
#include <vector>

#include "cpf/superoperator.hpp"
#include "cpf/types.hpp"

namespace cpf {

/// A set of measurement operators {Omega_i} with real outcome values O_i.
/// Normalized: sum_i Omega_i^dag Omega_i = I.
struct MeasurementSet {
    std::vector<ComplexMatrix> operators;
    std::vector<double> outcomes;

    MeasurementSet(std::vector<ComplexMatrix> ops, std::vector<double> vals);

    std::size_t size() const { return operators.size(); }
    /// E_i = Omega_i^dag Omega_i.
    ComplexMatrix effect(std::size_t i) const {
        return operators[i].adjoint() * operators[i];
    }
    bool is_projective(double tol = Tol::hermiticity) const;

    /// Projective qubit set along the Bloch z axis, outcomes (+1, -1).
    static MeasurementSet qubit_z();
    /// Projective qubit set along the Bloch x axis, outcomes (+1, -1).
    static MeasurementSet qubit_x();
};

/// Three successive measurement sets (first -> middle -> last). The middle
/// set must be projective.
struct MeasurementScheme {
    MeasurementSet first;
    MeasurementSet middle;
    MeasurementSet last;

    MeasurementScheme(MeasurementSet f, MeasurementSet m, MeasurementSet l);

    static MeasurementScheme preset(const std::string& name);  // "zzz", "xzx", "xxx"
};

/// Unnormalized post-first-measurement states rho~_x = Omega_x rho0 Omega_x^dag
/// and their sum rho~.
struct PostFirstStates {
    std::vector<ComplexMatrix> rho_x;
    ComplexMatrix rho_sum;

    double prob_x(std::size_t x) const { return rho_x[x].trace().real(); }
};

PostFirstStates build_post_first_states(const DensityMatrix& rho0,
                                        const MeasurementSet& first);

/// rho~_yx = rho~_x Tr(E_y Lambda[rho~]) - rho~ Tr(E_y Lambda[rho~_x]).
/// Its trace equals P(y)P(x) - P(y,x).
ComplexMatrix rho_yx(const PostFirstStates& states, const SuperOperator& lambda_t,
                     const ComplexMatrix& e_y, std::size_t x);

/// P(y) = sum_x Tr(E_y Lambda[rho~_x]).
double prob_y(const PostFirstStates& states, const SuperOperator& lambda_t,
              const ComplexMatrix& e_y);

}  // namespace cpf
