#pragma once

#include <vector>

#include "cpf/types.hpp"

namespace cpf {

/// Joint probability table P[z][y][x] over the outcome labels of a
/// three-measurement sequence.
struct JointDistribution {
    std::size_t nz = 2, ny = 2, nx = 2;
    std::vector<double> table;  // index (z * ny + y) * nx + x

    JointDistribution() : table(8, 0.0) {}
    JointDistribution(std::size_t z, std::size_t y, std::size_t x)
        : nz(z), ny(y), nx(x), table(z * y * x, 0.0) {}

    double& at(std::size_t z, std::size_t y, std::size_t x) {
        return table[(z * ny + y) * nx + x];
    }
    double at(std::size_t z, std::size_t y, std::size_t x) const {
        return table[(z * ny + y) * nx + x];
    }

    double sum() const;
    double min_entry() const;
};

struct Marginals {
    std::vector<double> p_zy;  // z * ny + y
    std::vector<double> p_yx;  // y * nx + x
    std::vector<double> p_y;
    std::vector<double> p_x;
};

Marginals marginals(const JointDistribution& j);

/// CPF correlation value for one conditioning outcome y, with an optional
/// per-order breakdown when it comes from the perturbative series.
struct CPFResult {
    double value = 0.0;
    double t = 0.0;
    double tau = 0.0;
    std::size_t y = 0;
    std::vector<double> per_order;
};

/// C_pf|_y from a joint table via
/// sum_{zx} O_z O_x [P(z,y,x)P(y) - P(z,y)P(y,x)] / P(y)^2.
/// Marginals are computed internally. Throws if P(y) <= eps.
CPFResult cpf_from_joint(const JointDistribution& j, const std::vector<double>& o_z,
                         const std::vector<double>& o_x, std::size_t y,
                         double eps = Tol::conditioning);

}  // namespace cpf
