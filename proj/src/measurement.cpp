#include "cpf/measurement.hpp"

namespace cpf {

MeasurementSet::MeasurementSet(std::vector<ComplexMatrix> ops, std::vector<double> vals)
    : operators(std::move(ops)), outcomes(std::move(vals)) {
    if (operators.empty() || operators.size() != outcomes.size())
        throw validation_error("measurement set: operators/outcomes mismatch");
    Eigen::Index d = operators.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& om : operators) {
        if (om.rows() != d || om.cols() != d)
            throw validation_error("measurement set: inconsistent dimensions");
        sum += om.adjoint() * om;
    }
    if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > Tol::hermiticity)
        throw validation_error("measurement set not normalized to identity");
}

bool MeasurementSet::is_projective(double tol) const {
    for (const auto& om : operators)
        if ((om.adjoint() * om - om).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

MeasurementSet MeasurementSet::qubit_z() {
    return MeasurementSet({ket_plus_proj(), ket_minus_proj()}, {+1.0, -1.0});
}

MeasurementSet MeasurementSet::qubit_x() {
    return MeasurementSet({ket_xplus_proj(), ket_xminus_proj()}, {+1.0, -1.0});
}

MeasurementScheme::MeasurementScheme(MeasurementSet f, MeasurementSet m,
                                     MeasurementSet l)
    : first(std::move(f)), middle(std::move(m)), last(std::move(l)) {
    if (!middle.is_projective())
        throw validation_error("intermediate measurement must be projective");
}

MeasurementScheme MeasurementScheme::preset(const std::string& name) {
    if (name == "zzz")
        return MeasurementScheme(MeasurementSet::qubit_z(), MeasurementSet::qubit_z(),
                                 MeasurementSet::qubit_z());
    if (name == "xzx")
        return MeasurementScheme(MeasurementSet::qubit_x(), MeasurementSet::qubit_z(),
                                 MeasurementSet::qubit_x());
    if (name == "xxx")
        return MeasurementScheme(MeasurementSet::qubit_x(), MeasurementSet::qubit_x(),
                                 MeasurementSet::qubit_x());
    throw validation_error("unknown scheme preset: " + name);
}

PostFirstStates build_post_first_states(const DensityMatrix& rho0,
                                        const MeasurementSet& first) {
    PostFirstStates out;
    Eigen::Index d = rho0.dim();
    out.rho_sum = ComplexMatrix::Zero(d, d);
    for (const auto& om : first.operators) {
        ComplexMatrix s = om * rho0.matrix() * om.adjoint();
        out.rho_sum += s;
        out.rho_x.push_back(std::move(s));
    }
    return out;
}

ComplexMatrix rho_yx(const PostFirstStates& states, const SuperOperator& lambda_t,
                     const ComplexMatrix& e_y, std::size_t x) {
    Complex py = (e_y * lambda_t(states.rho_sum)).trace();
    Complex pyx = (e_y * lambda_t(states.rho_x[x])).trace();
    return states.rho_x[x] * py - states.rho_sum * pyx;
}

double prob_y(const PostFirstStates& states, const SuperOperator& lambda_t,
              const ComplexMatrix& e_y) {
    return (e_y * lambda_t(states.rho_sum)).trace().real();
}

}  // namespace cpf
