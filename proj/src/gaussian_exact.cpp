#include "cpf/gaussian_exact.hpp"

#include <cmath>

namespace cpf {

double ou_phase_variance(const ClassicalNoiseModel& model, double s) {
    return model.gamma * (s - model.tau_c * (1.0 - std::exp(-s / model.tau_c)));
}

double ou_phase_covariance(const ClassicalNoiseModel& model, double t, double tau) {
    return 0.5 * model.gamma * model.tau_c * (1.0 - std::exp(-t / model.tau_c)) *
           (1.0 - std::exp(-tau / model.tau_c));
}

namespace {

// Tr(E e^{-i phi sz} rho e^{i phi sz}) = a0 + ac cos(2 phi) + as sin(2 phi).
struct TrigReadout {
    double a0, ac, as;
};

TrigReadout trig_coeffs(const ComplexMatrix& e, const ComplexMatrix& rho) {
    Complex w = e(1, 0) * rho(0, 1);
    return {(e(0, 0) * rho(0, 0) + e(1, 1) * rho(1, 1)).real(), 2.0 * w.real(),
            2.0 * w.imag()};
}

}  // namespace

JointDistribution gaussian_dephasing_joint_prob(const ClassicalNoiseModel& model,
                                                const MeasurementScheme& scheme,
                                                const DensityMatrix& rho0, double t,
                                                double tau) {
    if (rho0.matrix().rows() != 2)
        throw validation_error("gaussian_dephasing_joint_prob is qubit-only");

    const double v1 = ou_phase_variance(model, t);
    const double v2 = ou_phase_variance(model, tau);
    const double c = ou_phase_covariance(model, t, tau);
    // E[cos 2phi] = e^{-2 Var}; joint second moments from the covariance.
    const double e1 = std::exp(-2.0 * v1);
    const double e2 = std::exp(-2.0 * v2);
    const double epp = std::exp(-2.0 * (v1 + v2 + 2.0 * c));
    const double epm = std::exp(-2.0 * (v1 + v2 - 2.0 * c));
    const double mcc = 0.5 * (epp + epm);  // E[cos 2phi1 cos 2phi2]
    const double mss = 0.5 * (epm - epp);  // E[sin 2phi1 sin 2phi2]

    PostFirstStates pfs = build_post_first_states(rho0, scheme.first);
    const std::size_t ny = scheme.middle.size();
    const std::size_t nx = scheme.first.size();
    const std::size_t nz = scheme.last.size();
    JointDistribution j(nz, ny, nx);
    for (std::size_t y = 0; y < ny; ++y) {
        ComplexMatrix e_y = scheme.middle.effect(y);
        for (std::size_t z = 0; z < nz; ++z) {
            TrigReadout b = trig_coeffs(scheme.last.effect(z), e_y);
            for (std::size_t x = 0; x < nx; ++x) {
                TrigReadout a = trig_coeffs(e_y, pfs.rho_x[x]);
                j.at(z, y, x) = a.a0 * b.a0 + a.a0 * b.ac * e2 + b.a0 * a.ac * e1 +
                                a.ac * b.ac * mcc + a.as * b.as * mss;
            }
        }
    }
    return j;
}

}  // namespace cpf
