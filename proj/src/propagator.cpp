#include "cpf/propagator.hpp"

#include <cmath>

#include "cpf/pseudomode.hpp"

namespace cpf {

double CubicTable::operator()(double s) const {
    const double h = step();
    const int n = static_cast<int>(values_.size());
    double u = s / h;
    int i0 = static_cast<int>(std::floor(u)) - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > n - 4) i0 = n - 4;
    // 4-point Lagrange around the bracketing interval.
    double x = u - i0;
    const double* v = values_.data() + i0;
    double w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
    double w1 = x * (x - 2) * (x - 3) / 2.0;
    double w2 = -x * (x - 1) * (x - 3) / 2.0;
    double w3 = x * (x - 1) * (x - 2) / 6.0;
    return w0 * v[0] + w1 * v[1] + w2 * v[2] + w3 * v[3];
}

double dephasing_decoherence_factor(const ClassicalNoiseModel& m, double s) {
    return std::exp(-2.0 * m.gamma * (s - m.tau_c * (1.0 - std::exp(-s / m.tau_c))));
}

namespace {

// Qubit channel action in the column-vectorized basis
// (rho_{++}, rho_{-+}, rho_{+-}, rho_{--}).
SuperOperator decay_channel(double pop_keep, double pop_gain_from_ground,
                            double coherence) {
    ComplexMatrix a = ComplexMatrix::Zero(4, 4);
    a(0, 0) = pop_keep;
    a(3, 0) = 1.0 - pop_keep;
    a(0, 3) = pop_gain_from_ground;
    a(3, 3) = 1.0 - pop_gain_from_ground;
    a(1, 1) = coherence;
    a(2, 2) = coherence;
    return SuperOperator(2, std::move(a));
}

}  // namespace

UnperturbedPropagator dephasing_propagator(const ClassicalNoiseModel& m,
                                           double max_duration) {
    ClassicalNoiseModel model = m;
    return UnperturbedPropagator(
        UnperturbedPropagator::Provenance::analytic, max_duration,
        [model](double s) {
            double d = dephasing_decoherence_factor(model, s);
            ComplexMatrix a = ComplexMatrix::Identity(4, 4);
            a(1, 1) = d;
            a(2, 2) = d;
            return SuperOperator(2, std::move(a));
        });
}

double decay_amplitude_closed_form(double c, double tau_c, double s) {
    // G solves G'' + G'/tau_c + c G = 0 via the exponential kernel; roots
    // -1/(2 tau_c) +- d/2 with d^2 = 1/tau_c^2 - 4c.
    Complex d2(1.0 / (tau_c * tau_c) - 4.0 * c, 0.0);
    Complex d = std::sqrt(d2);
    double damp = std::exp(-s / (2.0 * tau_c));
    if (std::abs(d) * s < 1e-6) {
        // Degenerate-root series, stable as d -> 0.
        double corr = std::real(d2) * (s * s / 8.0 + s * s * s / (48.0 * tau_c));
        return damp * (1.0 + s / (2.0 * tau_c) + corr);
    }
    Complex x = d * s / 2.0;
    Complex g = std::cosh(x) + std::sinh(x) / (d * tau_c);
    return damp * std::real(g);
}

std::vector<double> volterra_decay_amplitude(double c, double tau_c, double s_max,
                                             int n_steps) {
    const double h = s_max / n_steps;
    const double decay = std::exp(-h / tau_c);
    std::vector<double> g(n_steps + 1);
    g[0] = 1.0;
    // I[n] = trapz_0^{s_n} K(s_n - u) G(u) du with K(t) = c e^{-t/tau_c}.
    // The running sum R[n] = sum_{j=0}^{n-1} K(s_n - s_j) G(j) obeys
    // R[n+1] = decay * (R[n] + K(0) G(n)); the trapezoid rule then demotes
    // the left endpoint from weight 1 to 1/2.
    double running = 0.0;  // full-weight node sum for the current n
    double f_prev = 0.0;   // f(0) = -I(0) = 0
    for (int n = 0; n < n_steps; ++n) {
        double kn1 = c * std::exp(-(n + 1) * h / tau_c);
        double running_next = decay * (running + c * g[n]);
        // I(n+1) split into its known part and the h/2*K(0)*G(n+1) term.
        double i_known = h * (running_next - 0.5 * kn1 * g[0]);
        double rhs = g[n] + 0.5 * h * (f_prev - i_known);
        g[n + 1] = rhs / (1.0 + 0.25 * h * h * c);
        f_prev = -(i_known + 0.5 * h * c * g[n + 1]);
        running = running_next;
    }
    return g;
}

namespace {

// Solves the Volterra amplitude with step doubling until successive grids
// agree to Tol::volterra_selfconv at shared nodes.
CubicTable converged_volterra_table(double c, double tau_c, double s_max) {
    int n = std::max(static_cast<int>(std::ceil(s_max / (tau_c / 20.0))), 256);
    std::vector<double> coarse = volterra_decay_amplitude(c, tau_c, s_max, n);
    for (int iter = 0; iter < 8; ++iter) {
        std::vector<double> fine = volterra_decay_amplitude(c, tau_c, s_max, 2 * n);
        double diff = 0.0;
        for (int i = 0; i <= n; ++i)
            diff = std::max(diff, std::abs(fine[2 * i] - coarse[i]));
        if (diff <= Tol::volterra_selfconv) return CubicTable(s_max, std::move(fine));
        coarse = std::move(fine);
        n *= 2;
    }
    throw accuracy_error("Volterra decay amplitude did not self-converge");
}

}  // namespace

UnperturbedPropagator zero_T_decay_propagator(const QuantumBathModel& m,
                                              double max_duration) {
    if (m.nbar != 0.0)
        throw validation_error("zero_T_decay_propagator requires nbar = 0");
    double c = m.gamma / (2.0 * m.tau_c);
    auto table = std::make_shared<CubicTable>(
        converged_volterra_table(c, m.tau_c, max_duration));
    return UnperturbedPropagator(
        UnperturbedPropagator::Provenance::volterra, max_duration,
        [table](double s) {
            double g = (*table)(s);
            return decay_channel(g * g, 0.0, g);
        });
}

UnperturbedPropagator finite_T_propagator(const QuantumBathModel& m,
                                          double max_duration, FiniteTStyle style) {
    if (style == FiniteTStyle::pseudomode_tabulated)
        return detail::pseudomode_tabulated_propagator(m, max_duration);
    double c_down = (m.nbar + 1.0) * m.gamma / (2.0 * m.tau_c);
    double c_up = m.nbar * m.gamma / (2.0 * m.tau_c);
    auto g_down = std::make_shared<CubicTable>(
        converged_volterra_table(c_down, m.tau_c, max_duration));
    std::shared_ptr<CubicTable> g_up;
    if (c_up > 0.0)
        g_up = std::make_shared<CubicTable>(
            converged_volterra_table(c_up, m.tau_c, max_duration));
    return UnperturbedPropagator(
        UnperturbedPropagator::Provenance::volterra, max_duration,
        [g_down, g_up](double s) {
            double gd = (*g_down)(s);
            double gu = g_up ? (*g_up)(s) : 1.0;
            return decay_channel(gd * gd, 1.0 - gu * gu, gd * gu);
        });
}

}  // namespace cpf
