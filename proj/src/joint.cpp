#include "cpf/joint.hpp"

#include <algorithm>
#include <numeric>

namespace cpf {

double JointDistribution::sum() const {
    return std::accumulate(table.begin(), table.end(), 0.0);
}

double JointDistribution::min_entry() const {
    return *std::min_element(table.begin(), table.end());
}

Marginals marginals(const JointDistribution& j) {
    Marginals m;
    m.p_zy.assign(j.nz * j.ny, 0.0);
    m.p_yx.assign(j.ny * j.nx, 0.0);
    m.p_y.assign(j.ny, 0.0);
    m.p_x.assign(j.nx, 0.0);
    for (std::size_t z = 0; z < j.nz; ++z)
        for (std::size_t y = 0; y < j.ny; ++y)
            for (std::size_t x = 0; x < j.nx; ++x) {
                double p = j.at(z, y, x);
                m.p_zy[z * j.ny + y] += p;
                m.p_yx[y * j.nx + x] += p;
                m.p_y[y] += p;
                m.p_x[x] += p;
            }
    return m;
}

CPFResult cpf_from_joint(const JointDistribution& j, const std::vector<double>& o_z,
                         const std::vector<double>& o_x, std::size_t y, double eps) {
    if (o_z.size() != j.nz || o_x.size() != j.nx)
        throw validation_error("cpf_from_joint: outcome value size mismatch");
    Marginals m = marginals(j);
    if (m.p_y[y] <= eps)
        throw model_error("cpf_from_joint: conditioning outcome has P(y) <= eps");
    double py2 = m.p_y[y] * m.p_y[y];
    double acc = 0.0;
    for (std::size_t z = 0; z < j.nz; ++z)
        for (std::size_t x = 0; x < j.nx; ++x)
            acc += o_z[z] * o_x[x] *
                   (j.at(z, y, x) * m.p_y[y] - m.p_zy[z * j.ny + y] * m.p_yx[y * j.nx + x]);
    CPFResult r;
    r.value = acc / py2;
    r.y = y;
    return r;
}

}  // namespace cpf
