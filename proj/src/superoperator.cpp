#include "cpf/superoperator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace cpf {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

SuperOperator SuperOperator::left_multiply(const ComplexMatrix& a) {
    Eigen::Index d = a.rows();
    return SuperOperator(d, kron(ComplexMatrix::Identity(d, d), a));
}

SuperOperator SuperOperator::right_multiply(const ComplexMatrix& b) {
    Eigen::Index d = b.rows();
    return SuperOperator(d, kron(b.transpose(), ComplexMatrix::Identity(d, d)));
}

SuperOperator SuperOperator::hs_adjoint() const {
    return SuperOperator(dim_, action_.adjoint());
}

bool SuperOperator::is_trace_preserving(double tol) const {
    ComplexVector tr = vectorize(ComplexMatrix::Identity(dim_, dim_));
    ComplexVector residual = action_.adjoint() * tr - tr;
    return residual.cwiseAbs().maxCoeff() <= tol;
}

bool SuperOperator::is_trace_annihilating(double tol) const {
    ComplexVector tr = vectorize(ComplexMatrix::Identity(dim_, dim_));
    return (action_.adjoint() * tr).cwiseAbs().maxCoeff() <= tol;
}

double SuperOperator::choi_min_eigenvalue() const {
    // Choi matrix C = sum_{ij} |i><j| (x) L[|i><j|], with the (x) ordering
    // (input index, output index) blocked as d x d blocks of size d x d.
    Eigen::Index d = dim_;
    ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            ComplexMatrix eij = ComplexMatrix::Zero(d, d);
            eij(i, j) = 1.0;
            choi.block(i * d, j * d, d, d) = apply(eij);
        }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((choi + choi.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

void SuperOperator::reproject_trace_preserving() {
    ComplexVector tr = vectorize(ComplexMatrix::Identity(dim_, dim_));
    ComplexVector defect = action_.adjoint() * tr - tr;
    action_ -= (tr * defect.adjoint()) / static_cast<double>(dim_);
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) { return m.exp(); }

SuperOperator commutator_superop(const ComplexMatrix& h) {
    if (h.rows() != h.cols())
        throw validation_error("Hamiltonian must be square");
    if (!is_hermitian(h))
        throw validation_error("Hamiltonian not Hermitian");
    Eigen::Index d = h.rows();
    ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix action = Complex(0, -1) * (kron(id, h) - kron(h.transpose(), id));
    return SuperOperator(d, action);
}

SuperOperator time_ordered_exp(const std::function<SuperOperator(double)>& generator,
                               double t_a, double t_b, const TimeGrid& grid) {
    if (t_b < t_a)
        throw validation_error("time_ordered_exp requires t_b >= t_a");
    double h = grid.step();
    int n = static_cast<int>(std::lround((t_b - t_a) / h));
    if (n == 0) {
        Eigen::Index d = generator(t_a).dim();
        return SuperOperator::identity(d);
    }
    // Per-step midpoint exponentials composed in time order (later steps left).
    SuperOperator total;
    for (int k = 0; k < n; ++k) {
        double mid = t_a + (k + 0.5) * h;
        SuperOperator l = generator(mid);
        SuperOperator step(l.dim(), matrix_exp(h * l.action()));
        total = (k == 0) ? step : step * total;
    }
    return total;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index d_s, Eigen::Index d_e,
                            bool keep_system) {
    if (m.rows() != d_s * d_e || m.cols() != d_s * d_e)
        throw validation_error("partial_trace: dimension mismatch");
    // Bipartite index convention: row = s * d_e + e (system factor first).
    if (keep_system) {
        ComplexMatrix out = ComplexMatrix::Zero(d_s, d_s);
        for (Eigen::Index i = 0; i < d_s; ++i)
            for (Eigen::Index j = 0; j < d_s; ++j)
                for (Eigen::Index e = 0; e < d_e; ++e)
                    out(i, j) += m(i * d_e + e, j * d_e + e);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(d_e, d_e);
    for (Eigen::Index a = 0; a < d_e; ++a)
        for (Eigen::Index b = 0; b < d_e; ++b)
            for (Eigen::Index s = 0; s < d_s; ++s)
                out(a, b) += m(s * d_e + a, s * d_e + b);
    return out;
}

SuperOperator projector_P(const DensityMatrix& sigma_e, Eigen::Index d_s) {
    Eigen::Index d_e = sigma_e.dim();
    Eigen::Index d = d_s * d_e;
    ComplexMatrix action = ComplexMatrix::Zero(d * d, d * d);
    // Column by column: P applied to each bipartite basis matrix.
    for (Eigen::Index col = 0; col < d * d; ++col) {
        ComplexMatrix basis = ComplexMatrix::Zero(d, d);
        basis(col % d, col / d) = 1.0;
        ComplexMatrix mapped =
            kron(partial_trace(basis, d_s, d_e, true), sigma_e.matrix());
        action.col(col) = vectorize(mapped);
    }
    return SuperOperator(d, action);
}

SuperOperator projector_Q(const DensityMatrix& sigma_e, Eigen::Index d_s) {
    SuperOperator p = projector_P(sigma_e, d_s);
    return SuperOperator::identity(p.dim()) - p;
}

}  // namespace cpf
