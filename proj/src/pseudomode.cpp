#include "cpf/pseudomode.hpp"

#include <cmath>

namespace cpf {

PseudomodeModel PseudomodeModel::from_bath(const QuantumBathModel& m, int n_max) {
    if (n_max < 0) n_max = (m.nbar == 0.0) ? 4 : 8;
    return PseudomodeModel{std::sqrt(m.gamma / (2.0 * m.tau_c)), 2.0 / m.tau_c, m.nbar,
                           n_max};
}

ComplexMatrix PseudomodeModel::annihilation() const {
    int d = mode_dim();
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix PseudomodeModel::mode_stationary_state() const {
    int d = mode_dim();
    ComplexMatrix s = ComplexMatrix::Zero(d, d);
    if (nbar == 0.0) {
        s(0, 0) = 1.0;
        return s;
    }
    double ratio = nbar / (nbar + 1.0);
    double w = 1.0, norm = 0.0;
    for (int n = 0; n < d; ++n, w *= ratio) {
        s(n, n) = w;
        norm += w;
    }
    s /= norm;  // renormalized after cutoff
    return s;
}

namespace {

SuperOperator dissipator(const ComplexMatrix& a) {
    Eigen::Index d = a.rows();
    ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix ada = a.adjoint() * a;
    ComplexMatrix action = kron(a.conjugate(), a) - 0.5 * kron(id, ada) -
                           0.5 * kron(ada.transpose(), id);
    return SuperOperator(d, std::move(action));
}

}  // namespace

SuperOperator PseudomodeModel::mode_generator() const {
    ComplexMatrix a = annihilation();
    SuperOperator l = dissipator(a).scaled(kappa * (nbar + 1.0));
    if (nbar > 0.0) l = l + dissipator(a.adjoint()).scaled(kappa * nbar);
    return l;
}

SuperOperator PseudomodeModel::embedding_generator() const {
    ComplexMatrix a = annihilation();
    int d = 2 * mode_dim();
    ComplexMatrix h = g * (kron(sigma_plus(), a) + kron(sigma_minus(), a.adjoint()));
    SuperOperator l = commutator_superop(h);
    ComplexMatrix a_full = kron(qubit_identity(), a);
    l = l + dissipator(a_full).scaled(kappa * (nbar + 1.0));
    if (nbar > 0.0) l = l + dissipator(a_full.adjoint()).scaled(kappa * nbar);
    (void)d;
    return l;
}

namespace {

// Evolves a vectorized state under exp(s L) by composing per-step
// exponentials; the generator is time independent so the step matrix is
// built once.
class SteppedEvolution {
  public:
    SteppedEvolution(const SuperOperator& gen, double step_hint)
        : dim_(gen.dim()), step_hint_(step_hint), gen_action_(gen.action()) {}

    ComplexVector evolve(ComplexVector v, double s) const {
        if (s <= 0.0) return v;
        int n = std::max(1, static_cast<int>(std::ceil(s / step_hint_)));
        double h = s / n;
        ComplexMatrix u = matrix_exp(h * gen_action_);
        for (int k = 0; k < n; ++k) v = u * v;
        return v;
    }

  private:
    Eigen::Index dim_;
    double step_hint_;
    ComplexMatrix gen_action_;
};

// Tr_s((E (x) I) rho_se) as an operator on the mode factor.
ComplexMatrix system_conditioned_mode(const ComplexMatrix& rho_se,
                                      const ComplexMatrix& e_sys, int d_e) {
    ComplexMatrix weighted = kron(e_sys, ComplexMatrix::Identity(d_e, d_e)) * rho_se;
    return partial_trace(weighted, 2, d_e, false);
}

JointDistribution pseudomode_joint_once(const QuantumBathModel& model,
                                        const MeasurementScheme& scheme,
                                        const DensityMatrix& rho0, double t,
                                        double tau, int n_max) {
    PseudomodeModel pm = PseudomodeModel::from_bath(model, n_max);
    int d_e = pm.mode_dim();
    SuperOperator gen = pm.embedding_generator();
    SteppedEvolution evo(gen, model.tau_c / 100.0);
    ComplexMatrix sigma_mode = pm.mode_stationary_state();
    PostFirstStates pfs = build_post_first_states(rho0, scheme.first);

    JointDistribution j(scheme.last.size(), scheme.middle.size(), scheme.first.size());
    for (std::size_t x = 0; x < scheme.first.size(); ++x) {
        ComplexVector v0 = vectorize(kron(pfs.rho_x[x], sigma_mode));
        ComplexMatrix rho_se_t = unvectorize(evo.evolve(v0, t), 2 * d_e);
        for (std::size_t y = 0; y < scheme.middle.size(); ++y) {
            ComplexMatrix e_y = scheme.middle.effect(y);
            ComplexMatrix eta = system_conditioned_mode(rho_se_t, e_y, d_e);
            ComplexMatrix rho_y = e_y;  // collapsed system state
            ComplexVector v1 = vectorize(kron(rho_y, eta));
            ComplexMatrix rho_se_final = unvectorize(evo.evolve(v1, tau), 2 * d_e);
            for (std::size_t z = 0; z < scheme.last.size(); ++z) {
                ComplexMatrix e_z = scheme.last.effect(z);
                Complex p = (kron(e_z, ComplexMatrix::Identity(d_e, d_e)) *
                             rho_se_final)
                                .trace();
                j.at(z, y, x) = p.real();
            }
        }
    }
    return j;
}

}  // namespace

OracleResult pseudomode_joint_prob(const QuantumBathModel& model,
                                   const MeasurementScheme& scheme,
                                   const DensityMatrix& rho0, double t, double tau,
                                   int n_max, bool check_cutoff) {
    if (n_max < 0) n_max = (model.nbar == 0.0) ? 4 : 8;
    JointDistribution j = pseudomode_joint_once(model, scheme, rho0, t, tau, n_max);
    if (check_cutoff) {
        // Escalate the cutoff until the table is insensitive to it.
        bool converged = false;
        for (int attempt = 0; attempt < 4 && !converged; ++attempt) {
            JointDistribution j2 =
                pseudomode_joint_once(model, scheme, rho0, t, tau, n_max + 2);
            double diff = 0.0;
            for (std::size_t i = 0; i < j.table.size(); ++i)
                diff = std::max(diff, std::abs(j.table[i] - j2.table[i]));
            converged = diff < 1e-8;
            j = std::move(j2);
            n_max += 2;
        }
        if (!converged)
            throw accuracy_error("pseudomode Fock cutoff not converged");
    }
    OracleResult r;
    r.joint = std::move(j);
    r.fock_cutoff = n_max;
    return r;
}

ModeCorrelationReport mode_correlation_check(const PseudomodeModel& model,
                                             double t_max, int n_samples) {
    int d = model.mode_dim();
    SuperOperator gen = model.mode_generator();
    double tau_c = 2.0 / model.kappa;
    SteppedEvolution evo(gen, tau_c / 100.0);
    ComplexMatrix a = model.annihilation();
    ComplexMatrix sigma = model.mode_stationary_state();
    double g2 = model.g * model.g;

    ModeCorrelationReport rep;
    for (int i = 0; i <= n_samples; ++i) {
        double t = t_max * i / n_samples;
        // Quantum regression: <A(t) B(0)> = Tr(A e^{tL}[B sigma]).
        ComplexMatrix down_seed = a.adjoint() * sigma;
        ComplexMatrix up_seed = a * sigma;
        ComplexMatrix down_t = unvectorize(evo.evolve(vectorize(down_seed), t), d);
        ComplexMatrix up_t = unvectorize(evo.evolve(vectorize(up_seed), t), d);
        Complex down = (a * down_t).trace();
        Complex up = (a.adjoint() * up_t).trace();
        double chi_down = (model.nbar + 1.0) * g2 * std::exp(-t / tau_c);
        double chi_up = model.nbar * g2 * std::exp(-t / tau_c);
        rep.max_dev_down = std::max(rep.max_dev_down, std::abs(g2 * down - chi_down));
        rep.max_dev_up = std::max(rep.max_dev_up, std::abs(g2 * up - chi_up));
    }
    return rep;
}

namespace detail {

UnperturbedPropagator pseudomode_tabulated_propagator(const QuantumBathModel& m,
                                                      double max_duration) {
    PseudomodeModel pm = PseudomodeModel::from_bath(m);
    int d_e = pm.mode_dim();
    double step = std::min(m.tau_c, 1.0 / m.gamma) / 50.0;
    int n_tab = std::max(4, static_cast<int>(std::ceil(max_duration / step)));
    double h = max_duration / n_tab;

    auto tabulate = [&](int cutoff) {
        PseudomodeModel p = pm;
        p.n_max = cutoff;
        int de = p.mode_dim();
        ComplexMatrix u = matrix_exp(h * p.embedding_generator().action());
        ComplexMatrix sigma_mode = p.mode_stationary_state();
        // Four vectorized bipartite states, one per system basis matrix.
        std::vector<ComplexVector> states;
        for (int col = 0; col < 4; ++col) {
            ComplexMatrix basis = ComplexMatrix::Zero(2, 2);
            basis(col % 2, col / 2) = 1.0;
            states.push_back(vectorize(kron(basis, sigma_mode)));
        }
        std::vector<ComplexMatrix> actions;
        actions.reserve(n_tab + 1);
        for (int k = 0; k <= n_tab; ++k) {
            ComplexMatrix action(4, 4);
            for (int col = 0; col < 4; ++col) {
                ComplexMatrix reduced =
                    partial_trace(unvectorize(states[col], 2 * de), 2, de, true);
                action.col(col) = vectorize(reduced);
            }
            SuperOperator so(2, action);
            so.reproject_trace_preserving();
            actions.push_back(so.action());
            if (k < n_tab)
                for (auto& v : states) v = u * v;
        }
        return actions;
    };

    // Escalate the Fock cutoff until the reduced maps are insensitive to it.
    auto actions =
        std::make_shared<std::vector<ComplexMatrix>>(tabulate(pm.n_max));
    bool converged = false;
    for (int attempt = 0; attempt < 4 && !converged; ++attempt) {
        auto probe = tabulate(pm.n_max + 2);
        double diff = 0.0;
        for (int k : {n_tab / 4, n_tab / 2, n_tab})
            diff = std::max(diff, ((*actions)[k] - probe[k]).cwiseAbs().maxCoeff());
        converged = diff < 1e-8;
        *actions = std::move(probe);
        pm.n_max += 2;
    }
    if (!converged)
        throw accuracy_error("pseudomode propagator Fock cutoff not converged");
    for (const auto& act : *actions) {
        SuperOperator so(2, act);
        if (so.choi_min_eigenvalue() < -Tol::choi_positivity)
            throw accuracy_error("tabulated propagator violates complete positivity");
    }

    double smax = max_duration;
    return UnperturbedPropagator(
        UnperturbedPropagator::Provenance::pseudomode_tabulated, max_duration,
        [actions, smax, n_tab](double s) {
            // Entrywise 4-point Lagrange interpolation between tabulated maps.
            double hh = smax / n_tab;
            double u = s / hh;
            int i0 = static_cast<int>(std::floor(u)) - 1;
            if (i0 < 0) i0 = 0;
            if (i0 > n_tab - 3) i0 = n_tab - 3;
            double xx = u - i0;
            double w0 = -(xx - 1) * (xx - 2) * (xx - 3) / 6.0;
            double w1 = xx * (xx - 2) * (xx - 3) / 2.0;
            double w2 = -xx * (xx - 1) * (xx - 3) / 2.0;
            double w3 = xx * (xx - 1) * (xx - 2) / 6.0;
            ComplexMatrix act = w0 * (*actions)[i0] + w1 * (*actions)[i0 + 1] +
                                w2 * (*actions)[i0 + 2] + w3 * (*actions)[i0 + 3];
            return SuperOperator(2, std::move(act));
        });
}

}  // namespace detail

}  // namespace cpf
