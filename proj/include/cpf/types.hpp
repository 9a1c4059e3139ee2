#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cpf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Fixed numerical tolerances used across the library.
struct Tol {
    static constexpr double hermiticity = 1e-12;
    static constexpr double trace = 1e-12;
    static constexpr double eigenvalue = 1e-10;
    static constexpr double trace_preserving = 1e-10;
    static constexpr double projector = 1e-12;
    static constexpr double choi_positivity = 1e-8;
    static constexpr double imag_residue = 1e-10;
    static constexpr double conditioning = 1e-12;
    static constexpr double volterra_selfconv = 1e-7;
    static constexpr double matrix_exp = 1e-13;
};

struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_hermitian(const ComplexMatrix& m, double tol = Tol::hermiticity) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Density matrix on a d-dimensional Hilbert space. Validates Hermiticity,
/// unit trace and spectrum at construction.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw validation_error("density matrix must be square");
        if (!is_hermitian(m_))
            throw validation_error("density matrix not Hermitian");
        if (std::abs(m_.trace() - Complex(1.0)) > Tol::trace)
            throw validation_error("density matrix trace != 1");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_);
        if (es.eigenvalues().minCoeff() < -Tol::eigenvalue)
            throw validation_error("density matrix has negative eigenvalue");
    }

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    ComplexMatrix m_;
};

// Pauli matrices and common qubit states. Basis ordering: index 0 = |+>
// (upper level), index 1 = |->.
inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline ComplexMatrix sigma_plus() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}
inline ComplexMatrix sigma_minus() {
    ComplexMatrix m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}
inline ComplexMatrix qubit_identity() { return ComplexMatrix::Identity(2, 2); }

/// |psi><psi| for a two-component state vector.
inline ComplexMatrix qubit_projector(Complex up, Complex down) {
    ComplexVector v(2);
    v << up, down;
    v.normalize();
    return v * v.adjoint();
}

inline ComplexMatrix ket_plus_proj() { return qubit_projector(1, 0); }
inline ComplexMatrix ket_minus_proj() { return qubit_projector(0, 1); }
inline ComplexMatrix ket_xplus_proj() { return qubit_projector(1, 1); }
inline ComplexMatrix ket_xminus_proj() { return qubit_projector(1, -1); }

}  // namespace cpf
