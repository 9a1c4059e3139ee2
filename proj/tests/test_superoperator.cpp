#include <doctest.h>

#include "cpf/superoperator.hpp"

using namespace cpf;

namespace {
ComplexMatrix random_matrix(Eigen::Index d, unsigned seed) {
    std::srand(seed);
    ComplexMatrix m = ComplexMatrix::Random(d, d);
    return m;
}
}  // namespace

TEST_CASE("vectorize/unvectorize roundtrip and multiplication maps") {
    ComplexMatrix a = random_matrix(3, 1), b = random_matrix(3, 2),
                  x = random_matrix(3, 3);
    CHECK((unvectorize(vectorize(x), 3) - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((SuperOperator::left_multiply(a)(x) - a * x).cwiseAbs().maxCoeff() <
          1e-14);
    CHECK((SuperOperator::right_multiply(b)(x) - x * b).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("hs_adjoint satisfies the trace pairing for arbitrary maps") {
    ComplexMatrix act = random_matrix(4, 4);
    SuperOperator l(2, act);
    ComplexMatrix a = random_matrix(2, 5), b = random_matrix(2, 6);
    Complex lhs = (a.adjoint() * l(b)).trace();
    Complex rhs = (l.hs_adjoint()(a).adjoint() * b).trace();
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("commutator superoperator annihilates the trace") {
    ComplexMatrix h = pauli_x() + 0.3 * pauli_z();
    SuperOperator l = commutator_superop(h);
    CHECK(l.is_trace_annihilating());
    ComplexMatrix rho = ket_plus_proj();
    CHECK(std::abs(l(rho).trace()) < 1e-14);
}

TEST_CASE("time_ordered_exp matches exp for a constant generator") {
    SuperOperator l = commutator_superop(0.7 * pauli_x());
    SuperOperator u = time_ordered_exp([&](double) { return l; }, 0.0, 1.3,
                                       TimeGrid(0.0, 1.3, 16));
    ComplexMatrix exact = matrix_exp(1.3 * l.action());
    CHECK((u.action() - exact).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(u.is_trace_preserving());
}

TEST_CASE("time_ordered_exp converges at second order in the step") {
    auto gen = [](double s) {
        return commutator_superop(std::cos(s) * pauli_x() + s * pauli_z());
    };
    ComplexMatrix ref =
        time_ordered_exp(gen, 0.0, 1.0, TimeGrid(0.0, 1.0, 512)).action();
    double e1 = (time_ordered_exp(gen, 0.0, 1.0, TimeGrid(0.0, 1.0, 16)).action() -
                 ref)
                    .cwiseAbs()
                    .maxCoeff();
    double e2 = (time_ordered_exp(gen, 0.0, 1.0, TimeGrid(0.0, 1.0, 32)).action() -
                 ref)
                    .cwiseAbs()
                    .maxCoeff();
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("partial trace contracts the correct factor") {
    ComplexMatrix s = random_matrix(2, 7), e = random_matrix(3, 8);
    ComplexMatrix se = kron(s, e);
    CHECK((partial_trace(se, 2, 3, true) - s * e.trace()).cwiseAbs().maxCoeff() <
          1e-13);
    CHECK((partial_trace(se, 2, 3, false) - e * s.trace()).cwiseAbs().maxCoeff() <
          1e-13);
}

TEST_CASE("projectors P and Q are complementary idempotents") {
    ComplexMatrix sm(3, 3);
    sm.setZero();
    sm(0, 0) = 0.5;
    sm(1, 1) = 0.3;
    sm(2, 2) = 0.2;
    DensityMatrix sigma_e(sm);
    SuperOperator p = projector_P(sigma_e, 2), q = projector_Q(sigma_e, 2);
    CHECK((p.action() * p.action() - p.action()).cwiseAbs().maxCoeff() <
          Tol::projector);
    CHECK((q.action() * q.action() - q.action()).cwiseAbs().maxCoeff() <
          Tol::projector);
    CHECK((p.action() * q.action()).cwiseAbs().maxCoeff() < Tol::projector);
    CHECK((p.action() + q.action() -
           ComplexMatrix::Identity(36, 36))
              .cwiseAbs()
              .maxCoeff() < Tol::projector);
}
