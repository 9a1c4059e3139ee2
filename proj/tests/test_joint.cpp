#include <doctest.h>

#include "cpf/joint.hpp"

using namespace cpf;

namespace {
const std::vector<double> kPm = {1.0, -1.0};
}

TEST_CASE("marginals of a hand-built table") {
    JointDistribution j;
    double v = 0.0;
    for (std::size_t z = 0; z < 2; ++z)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t x = 0; x < 2; ++x) j.at(z, y, x) = (v += 1.0);
    // total 36; normalize.
    for (double& e : j.table) e /= 36.0;
    Marginals m = marginals(j);
    CHECK(std::abs(j.sum() - 1.0) < 1e-15);
    CHECK(std::abs(m.p_y[0] + m.p_y[1] - 1.0) < 1e-15);
    CHECK(std::abs(m.p_zy[0 * 2 + 0] - (1.0 + 2.0) / 36.0) < 1e-15);
    CHECK(std::abs(m.p_yx[1 * 2 + 0] - (3.0 + 7.0) / 36.0) < 1e-15);
    CHECK(std::abs(m.p_x[0] - (1 + 3 + 5 + 7) / 36.0) < 1e-15);
}

TEST_CASE("factorizable joint gives zero CPF") {
    // P(z,y,x) = A(z|y) B(y,x): the defining Markov factorization.
    double a[2][2] = {{0.7, 0.4}, {0.3, 0.6}};
    double b[2][2] = {{0.2, 0.15}, {0.35, 0.3}};
    JointDistribution j;
    for (std::size_t z = 0; z < 2; ++z)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t x = 0; x < 2; ++x) j.at(z, y, x) = a[z][y] * b[y][x];
    for (std::size_t y = 0; y < 2; ++y)
        CHECK(std::abs(cpf_from_joint(j, kPm, kPm, y).value) < 1e-14);
}

TEST_CASE("CPF of a correlated table matches the hand value") {
    JointDistribution j;
    // All mass on y = 0; perfectly correlated z = x.
    j.at(0, 0, 0) = 0.5;
    j.at(1, 0, 1) = 0.5;
    CPFResult r = cpf_from_joint(j, kPm, kPm, 0);
    // <O_z O_x|y> = 1, <O_z|y><O_x|y> = 0.
    CHECK(std::abs(r.value - 1.0) < 1e-14);
    CHECK_THROWS_AS(cpf_from_joint(j, kPm, kPm, 1), model_error);
}
