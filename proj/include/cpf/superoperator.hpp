#pragma once

#include <functional>

#include "cpf/types.hpp"

namespace cpf {

// Column vectorization: vec stacks columns, so vec(A X B) = (B^T kron A) vec(X).
// Left multiplication by A is represented as (I kron A), right multiplication
// by B as (B^T kron I).

inline ComplexVector vectorize(const ComplexMatrix& m) {
    return ComplexVector(Eigen::Map<const ComplexVector>(m.data(), m.size()));
}

inline ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index d) {
    return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), d, d));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Linear map on operators over a d-dimensional space, stored as its
/// d^2 x d^2 action on column-vectorized operators.
class SuperOperator {
  public:
    SuperOperator() = default;
    SuperOperator(Eigen::Index dim, ComplexMatrix action)
        : dim_(dim), action_(std::move(action)) {
        if (action_.rows() != dim_ * dim_ || action_.cols() != dim_ * dim_)
            throw validation_error("superoperator action has wrong shape");
    }

    static SuperOperator identity(Eigen::Index dim) {
        return SuperOperator(dim, ComplexMatrix::Identity(dim * dim, dim * dim));
    }
    static SuperOperator left_multiply(const ComplexMatrix& a);
    static SuperOperator right_multiply(const ComplexMatrix& b);

    ComplexMatrix apply(const ComplexMatrix& m) const {
        return unvectorize(action_ * vectorize(m), dim_);
    }
    ComplexMatrix operator()(const ComplexMatrix& m) const { return apply(m); }

    /// Hilbert-Schmidt adjoint: Tr(A L[B]) = Tr(adjoint(L)[A] B) for all A, B.
    SuperOperator hs_adjoint() const;

    SuperOperator compose(const SuperOperator& inner) const {
        return SuperOperator(dim_, action_ * inner.action_);
    }
    SuperOperator operator*(const SuperOperator& inner) const { return compose(inner); }
    SuperOperator operator+(const SuperOperator& o) const {
        return SuperOperator(dim_, action_ + o.action_);
    }
    SuperOperator operator-(const SuperOperator& o) const {
        return SuperOperator(dim_, action_ - o.action_);
    }
    SuperOperator scaled(Complex c) const { return SuperOperator(dim_, c * action_); }

    Eigen::Index dim() const { return dim_; }
    const ComplexMatrix& action() const { return action_; }

    bool is_trace_preserving(double tol = Tol::trace_preserving) const;
    bool is_trace_annihilating(double tol = Tol::trace_preserving) const;
    /// Smallest Choi-matrix eigenvalue; >= -tol means completely positive.
    double choi_min_eigenvalue() const;

    /// Renormalizes the action so the map is exactly trace preserving
    /// (projects out the accumulated round-off in the trace functional).
    void reproject_trace_preserving();

  private:
    Eigen::Index dim_ = 0;
    ComplexMatrix action_;
};

/// exp(M) via Eigen scaling-and-squaring.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

/// L[rho] = -i (H rho - rho H). H must be Hermitian.
SuperOperator commutator_superop(const ComplexMatrix& h);

/// Uniform time grid on [t_start, t_end] with n_steps steps.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    int n_steps = 0;

    TimeGrid(double a, double b, int n) : t_start(a), t_end(b), n_steps(n) {
        if (n <= 0 || !(b > a))
            throw validation_error("time grid requires t_end > t_start, n_steps > 0");
    }
    double step() const { return (t_end - t_start) / n_steps; }
    double node(int i) const { return t_start + i * step(); }
};

/// Time-ordered exponential of a generator family over [t_a, t_b],
/// composed from per-step midpoint exponentials (second order in the step).
SuperOperator time_ordered_exp(const std::function<SuperOperator(double)>& generator,
                               double t_a, double t_b, const TimeGrid& grid);

/// Trace over the complementary subsystem of a (d_s * d_e)-dimensional
/// bipartite operator. keep_system selects which factor survives.
ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index d_s, Eigen::Index d_e,
                            bool keep_system);

/// P[rho_se] = Tr_e(rho_se) (x) sigma_e on the bipartite Liouville space.
SuperOperator projector_P(const DensityMatrix& sigma_e, Eigen::Index d_s);
/// Q = I - P.
SuperOperator projector_Q(const DensityMatrix& sigma_e, Eigen::Index d_s);

}  // namespace cpf
