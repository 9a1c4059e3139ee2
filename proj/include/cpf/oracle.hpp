#pragma once

#include <vector>

#include "cpf/joint.hpp"

namespace cpf {

/// Exact or sampled joint distribution from one of the reference simulators.
struct OracleResult {
    JointDistribution joint;
    std::vector<double> stderr_table;  // per entry; empty for non-MC sources
    long n_trajectories = 0;
    int fock_cutoff = 0;

    double stderr_at(std::size_t z, std::size_t y, std::size_t x) const {
        return stderr_table[(z * joint.ny + y) * joint.nx + x];
    }
};

}  // namespace cpf
