#include "cpf/engine.hpp"

#include <cmath>
#include <map>
#include <string>

namespace cpf {

EngineModel EngineModel::dephasing(const ClassicalNoiseModel& m) {
    EngineModel e;
    e.classical_ = true;
    e.tau_c_ = m.tau_c;
    e.ops_ = {pauli_z()};
    e.coeff_[0][0] = m.gamma / (2.0 * m.tau_c);
    return e;
}

EngineModel EngineModel::dissipative(const QuantumBathModel& m) {
    EngineModel e;
    e.classical_ = false;
    e.tau_c_ = m.tau_c;
    // Symbol 0 = B (with sigma_+), symbol 1 = B^dag (with sigma_-).
    e.ops_ = {sigma_plus(), sigma_minus()};
    e.coeff_[0][1] = (m.nbar + 1.0) * m.gamma / (2.0 * m.tau_c);  // <B Bdag>
    e.coeff_[1][0] = m.nbar * m.gamma / (2.0 * m.tau_c);          // <Bdag B>
    return e;
}

JointDistribution SeriesTables::total() const {
    JointDistribution out = markov;
    for (const auto& ord : integral_order)
        for (std::size_t i = 0; i < out.table.size(); ++i)
            out.table[i] += ord.table[i];
    return out;
}

JointDistribution markov_term(const MeasurementScheme& scheme,
                              const UnperturbedPropagator& lambda,
                              const DensityMatrix& rho0, double t, double tau) {
    PostFirstStates pfs = build_post_first_states(rho0, scheme.first);
    SuperOperator lam_t = lambda.at(t);
    SuperOperator lam_tau = lambda.at(tau);
    JointDistribution j(scheme.last.size(), scheme.middle.size(), scheme.first.size());
    for (std::size_t y = 0; y < j.ny; ++y) {
        ComplexMatrix e_y = scheme.middle.effect(y);
        ComplexMatrix evolved_y = lam_tau(e_y);  // rho_y = E_y (collapsed state)
        for (std::size_t z = 0; z < j.nz; ++z) {
            double f = (scheme.last.effect(z) * evolved_y).trace().real();
            for (std::size_t x = 0; x < j.nx; ++x)
                j.at(z, y, x) = f * (e_y * lam_t(pfs.rho_x[x])).trace().real();
        }
    }
    return j;
}

namespace {

using M2 = Eigen::Matrix2cd;

bool is_zero_matrix(const M2& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

/// Perfect matchings of the linearized symbol lists, segment by segment.
/// Each emitted pair (a, b) has a before b in the linearized product order.
void enum_matchings(const std::vector<std::vector<int>>& segments, std::size_t seg,
                    std::vector<int>& remaining, std::vector<std::pair<int, int>>& pairs,
                    const std::function<void()>& emit) {
    if (remaining.empty()) {
        if (seg + 1 == segments.size()) {
            emit();
            return;
        }
        std::vector<int> next = segments[seg + 1];
        enum_matchings(segments, seg + 1, next, pairs, emit);
        return;
    }
    int first = remaining.front();
    for (std::size_t j = 1; j < remaining.size(); ++j) {
        std::vector<int> rest;
        rest.reserve(remaining.size() - 2);
        for (std::size_t i = 1; i < remaining.size(); ++i)
            if (i != j) rest.push_back(remaining[i]);
        pairs.emplace_back(first, remaining[j]);
        enum_matchings(segments, seg, rest, pairs, emit);
        pairs.pop_back();
    }
}

}  // namespace

struct SeriesEvaluator::Impl {
    MeasurementScheme scheme;
    EngineModel model;
    DensityMatrix rho0;
    double t, tau;
    SeriesOptions opts;

    std::size_t nx, ny, nz, nslots;
    std::vector<M2> e_mid, e_last;
    std::vector<double> p_y;
    JointDistribution markov_;

    bool degenerate = false;  // t = 0 or tau = 0: all integral terms vanish
    int N = 0;
    double ht = 0.0, hv = 0.0;
    std::vector<double> tp, vv, wt, wv;
    std::vector<std::vector<M2>> lam_slot;  // [slot][i], Lambda_{t'_i}[slot]
    std::vector<std::vector<M2>> fzt;       // [z][j], adjoint-evolved E_z

    std::map<std::string, std::vector<M2>> amemo;  // past beta key -> per slot
    std::map<std::string, std::vector<M2>> bmemo;  // future beta key -> per z
    std::map<int, std::vector<Eigen::MatrixXcd>> acc;  // order -> per-y matrices

    Impl(const MeasurementScheme& s, const EngineModel& em,
         const UnperturbedPropagator& lambda, const DensityMatrix& r0, double t_,
         double tau_, SeriesOptions o)
        : scheme(s), model(em), rho0(r0), t(t_), tau(tau_), opts(o) {
        if (rho0.dim() != 2)
            throw validation_error("series evaluator supports qubit systems only");
        if (t < 0.0 || tau < 0.0)
            throw validation_error("series evaluator requires t, tau >= 0");
        if (opts.max_order < 1) throw validation_error("max_order must be >= 1");
        if (opts.quad_nodes < 2) throw validation_error("need >= 2 quadrature nodes");

        nx = scheme.first.size();
        ny = scheme.middle.size();
        nz = scheme.last.size();
        nslots = nx + ny;

        PostFirstStates pfs = build_post_first_states(rho0, scheme.first);
        SuperOperator lam_t = lambda.at(t);
        for (std::size_t y = 0; y < ny; ++y) {
            e_mid.push_back(scheme.middle.effect(y));
            p_y.push_back(prob_y(pfs, lam_t, scheme.middle.effect(y)));
        }
        for (std::size_t z = 0; z < nz; ++z) e_last.push_back(scheme.last.effect(z));
        markov_ = markov_term(scheme, lambda, rho0, t, tau);

        // Slot list: rho~_x per first outcome, then the outcome-weighted
        // sum_x O_x rho~_yx per conditioning outcome (drives the CPF).
        std::vector<M2> slots;
        for (std::size_t x = 0; x < nx; ++x) slots.push_back(pfs.rho_x[x]);
        for (std::size_t y = 0; y < ny; ++y) {
            M2 s = M2::Zero();
            for (std::size_t x = 0; x < nx; ++x)
                s += scheme.first.outcomes[x] *
                     M2(rho_yx(pfs, lam_t, scheme.middle.effect(y), x));
            slots.push_back(s);
        }

        degenerate = (t <= 0.0 || tau <= 0.0);
        if (degenerate) return;

        N = opts.quad_nodes;
        ht = t / (N - 1);
        hv = tau / (N - 1);
        tp.resize(N);
        vv.resize(N);
        wt.assign(N, ht);
        wv.assign(N, hv);
        wt.front() = wt.back() = ht / 2.0;
        wv.front() = wv.back() = hv / 2.0;
        for (int i = 0; i < N; ++i) {
            tp[i] = t * i / (N - 1);
            vv[i] = tau * i / (N - 1);
        }

        lam_slot.assign(nslots, std::vector<M2>(N));
        for (int i = 0; i < N; ++i) {
            SuperOperator lam_i = lambda.at(tp[i]);
            for (std::size_t s = 0; s < nslots; ++s)
                lam_slot[s][i] = M2(lam_i(slots[s]));
        }
        fzt.assign(nz, std::vector<M2>(N));
        for (int j = 0; j < N; ++j) {
            SuperOperator adj = lambda.at(tau - vv[j]).hs_adjoint();
            for (std::size_t z = 0; z < nz; ++z)
                fzt[z][j] = M2(adj(ComplexMatrix(e_last[z])).adjoint());
        }
    }

    // Nested ordered-time integral over the past window, evaluated at every
    // lower-limit node by reverse trapezoid accumulation. betas[0] belongs to
    // the mandatory insertion at t'; betas[1..k] to the interior ones.
    const std::vector<M2>& past_integral(const std::vector<int>& betas) {
        std::string key(betas.size(), ' ');
        for (std::size_t i = 0; i < betas.size(); ++i)
            key[i] = betas[i] > 0 ? '+' : '-';
        auto it = amemo.find(key);
        if (it != amemo.end()) return it->second;

        const double tc = model.tau_c();
        int k = static_cast<int>(betas.size()) - 1;
        // Stabilized form: each level stores e^{d_l (s - t)/tc} times the true
        // suffix integral with d_l = beta_0 + ... + beta_{l-1}. Time ordering
        // makes every d_l >= 0 (ballot property of the pairing pattern), so
        // all stored values and step factors stay bounded for any tc.
        std::vector<int> d(k + 2);
        d[k + 1] = 0;
        for (int lvl = 0; lvl <= k; ++lvl) d[k + 1] += betas[lvl];
        for (int lvl = k; lvl >= 1; --lvl) d[lvl] = d[lvl + 1] - betas[lvl];
        std::vector<double> suffix(N);
        for (int i = 0; i < N; ++i)
            suffix[i] = std::exp(d[k + 1] * (tp[i] - t) / tc);
        for (int lvl = k; lvl >= 1; --lvl) {
            double fac = std::exp(-d[lvl] * ht / tc);
            std::vector<double> out(N, 0.0);
            for (int i = N - 2; i >= 0; --i)
                out[i] = fac * (out[i + 1] + 0.5 * ht * suffix[i + 1]) +
                         0.5 * ht * suffix[i];
            suffix = std::move(out);
        }
        // d_1 = beta_0, so the remaining boundary exponent cancels exactly.
        std::vector<M2> a(nslots, M2::Zero());
        for (int i = 0; i < N; ++i) {
            double w = wt[i] * suffix[i];
            for (std::size_t s = 0; s < nslots; ++s) a[s] += w * lam_slot[s][i];
        }
        return amemo.emplace(std::move(key), std::move(a)).first->second;
    }

    // Future-window counterpart: forward prefix accumulation over the
    // interior times; the last beta belongs to the insertion at t + tau'.
    const std::vector<M2>& future_integral(const std::vector<int>& betas) {
        std::string key(betas.size(), ' ');
        for (std::size_t i = 0; i < betas.size(); ++i)
            key[i] = betas[i] > 0 ? '+' : '-';
        auto it = bmemo.find(key);
        if (it != bmemo.end()) return it->second;

        const double tc = model.tau_c();
        int m = static_cast<int>(betas.size()) - 1;
        // Mirror of the past-window stabilization: level l stores
        // e^{-c_l v/tc} times the true prefix integral, c_0 = -(sum of betas),
        // c_{l+1} = c_l + beta_l. The reversed ballot property of the pattern
        // keeps every c_l >= 0 and cancels the boundary exponent at level m.
        std::vector<int> c(m + 1);
        c[0] = 0;
        for (int lvl = 0; lvl <= m; ++lvl) c[0] -= betas[lvl];
        for (int lvl = 0; lvl < m; ++lvl) c[lvl + 1] = c[lvl] + betas[lvl];
        std::vector<double> prefix(N);
        for (int j = 0; j < N; ++j) prefix[j] = std::exp(-c[0] * vv[j] / tc);
        for (int lvl = 0; lvl < m; ++lvl) {
            double fac = std::exp(-c[lvl + 1] * hv / tc);
            std::vector<double> out(N, 0.0);
            for (int j = 1; j < N; ++j)
                out[j] = fac * (out[j - 1] + 0.5 * hv * prefix[j - 1]) +
                         0.5 * hv * prefix[j];
            prefix = std::move(out);
        }
        std::vector<M2> b(nz, M2::Zero());
        for (int j = 0; j < N; ++j) {
            double w = wv[j] * prefix[j];
            for (std::size_t z = 0; z < nz; ++z) b[z] += w * fzt[z][j];
        }
        return bmemo.emplace(std::move(key), std::move(b)).first->second;
    }

    void accumulate_split(int n, int k, std::vector<Eigen::MatrixXcd>& res) {
        const int q = 2 * n;
        const int n_mu = model.n_couplings();
        std::vector<int> sym(q, 0), beta(q, 0);

        // Cumulant subtraction: each of the q-1 insertions carrying Q may be
        // expanded into its -P part, which closes the bath trace after it.
        for (int pmask = 0; pmask < (1 << (q - 1)); ++pmask) {
            std::vector<std::vector<int>> segs;
            std::vector<int> cur;
            bool odd = false;
            for (int p = 0; p < q; ++p) {
                cur.push_back(p);
                if (p < q - 1 && (pmask >> p) & 1) {
                    if (cur.size() % 2) {
                        odd = true;
                        break;
                    }
                    segs.push_back(std::move(cur));
                    cur.clear();
                }
            }
            if (odd || cur.size() % 2) continue;
            segs.push_back(std::move(cur));
            double sign_p = (__builtin_popcount(static_cast<unsigned>(pmask)) % 2)
                                ? -1.0
                                : 1.0;

            for (int bmask = 0; bmask < (1 << q); ++bmask) {
                Complex branch_coeff = 1.0;
                for (int p = 0; p < q; ++p)
                    branch_coeff *= ((bmask >> p) & 1) ? Complex(0, -1) : Complex(0, 1);

                // Linearize each segment around its sigma_e by cyclicity:
                // right-branch symbols in time order, then left-branch
                // symbols in reverse time order.
                std::vector<std::vector<int>> lin(segs.size());
                for (std::size_t s = 0; s < segs.size(); ++s) {
                    for (int p : segs[s])
                        if (!((bmask >> p) & 1)) lin[s].push_back(p);
                    for (auto it2 = segs[s].rbegin(); it2 != segs[s].rend(); ++it2)
                        if ((bmask >> *it2) & 1) lin[s].push_back(*it2);
                }

                std::vector<std::pair<int, int>> pairs;
                std::vector<int> work = lin[0];
                enum_matchings(lin, 0, work, pairs, [&] {
                    int npairs = static_cast<int>(pairs.size());
                    int orient_count = model.classical() ? 1 : (1 << npairs);
                    for (int omask = 0; omask < orient_count; ++omask) {
                        double cpairs = sign_p;
                        for (int pi = 0; pi < npairs; ++pi) {
                            int a = pairs[pi].first, b = pairs[pi].second;
                            int sa = 0, sb = 0;
                            if (n_mu == 2) {
                                sa = ((omask >> pi) & 1) ? 1 : 0;
                                sb = 1 - sa;
                            }
                            double c = model.pair_coeff(sa, sb);
                            if (c == 0.0) {
                                cpairs = 0.0;
                                break;
                            }
                            cpairs *= c;
                            sym[a] = sa;
                            sym[b] = sb;
                            // Time order equals position order; the earlier
                            // element scores +1/tau_c in the exponent.
                            beta[std::min(a, b)] = +1;
                            beta[std::max(a, b)] = -1;
                        }
                        if (cpairs == 0.0) continue;

                        M2 mlp = M2::Identity(), mrp = M2::Identity();
                        M2 mlf = M2::Identity(), mrf = M2::Identity();
                        for (int p = 0; p <= k; ++p) {
                            M2 s = M2(model.system_op(sym[p]));
                            if ((bmask >> p) & 1)
                                mlp = s * mlp;
                            else
                                mrp = mrp * s;
                        }
                        for (int p = k + 1; p < q; ++p) {
                            M2 s = M2(model.system_op(sym[p]));
                            if ((bmask >> p) & 1)
                                mlf = s * mlf;
                            else
                                mrf = mrf * s;
                        }
                        if (is_zero_matrix(mlp) || is_zero_matrix(mrp) ||
                            is_zero_matrix(mlf) || is_zero_matrix(mrf))
                            continue;

                        std::vector<int> bpast(beta.begin(), beta.begin() + k + 1);
                        std::vector<int> bfut(beta.begin() + k + 1, beta.end());
                        const std::vector<M2>& a_int = past_integral(bpast);
                        const std::vector<M2>& b_int = future_integral(bfut);

                        Complex coeff = branch_coeff * cpairs;
                        for (std::size_t y = 0; y < ny; ++y) {
                            M2 kmat = mrp * e_mid[y] * mlp;
                            for (std::size_t z = 0; z < nz; ++z) {
                                Complex fut =
                                    (mrf * b_int[z] * mlf * e_mid[y]).trace();
                                if (fut == Complex(0.0)) continue;
                                Complex cf = coeff * fut;
                                for (std::size_t s = 0; s < nslots; ++s)
                                    res[y](z, s) += cf * (kmat * a_int[s]).trace();
                            }
                        }
                    }
                });
            }
        }
    }

    void compute_order(int n) {
        if (acc.count(n)) return;
        std::vector<Eigen::MatrixXcd> res(ny, Eigen::MatrixXcd::Zero(nz, nslots));
        if (!degenerate)
            for (int k = 0; k <= 2 * n - 2; ++k) accumulate_split(n, k, res);
        acc[n] = std::move(res);
    }

    const std::vector<Eigen::MatrixXcd>& order(int n) {
        if (n < 1 || n > opts.max_order)
            throw model_error("series order outside configured range");
        compute_order(n);
        return acc.at(n);
    }
};

SeriesEvaluator::SeriesEvaluator(const MeasurementScheme& scheme,
                                 const EngineModel& model,
                                 const UnperturbedPropagator& lambda,
                                 const DensityMatrix& rho0, double t, double tau,
                                 SeriesOptions opts)
    : impl_(std::make_unique<Impl>(scheme, model, lambda, rho0, t, tau, opts)) {}

SeriesEvaluator::~SeriesEvaluator() = default;
SeriesEvaluator::SeriesEvaluator(SeriesEvaluator&&) noexcept = default;
SeriesEvaluator& SeriesEvaluator::operator=(SeriesEvaluator&&) noexcept = default;

JointDistribution SeriesEvaluator::markov() const { return impl_->markov_; }

JointDistribution SeriesEvaluator::order_table(int n) {
    const auto& per_y = impl_->order(n);
    JointDistribution j(impl_->nz, impl_->ny, impl_->nx);
    for (std::size_t y = 0; y < impl_->ny; ++y)
        for (std::size_t z = 0; z < impl_->nz; ++z)
            for (std::size_t x = 0; x < impl_->nx; ++x) {
                Complex v = per_y[y](z, x);
                if (std::abs(v.imag()) > Tol::imag_residue)
                    throw accuracy_error("order table has complex residue");
                j.at(z, y, x) = v.real();
            }
    return j;
}

SeriesTables SeriesEvaluator::tables() {
    SeriesTables out;
    out.markov = impl_->markov_;
    for (int n = 1; n <= impl_->opts.max_order; ++n)
        out.integral_order.push_back(order_table(n));
    return out;
}

CPFResult SeriesEvaluator::cpf(std::size_t y) {
    if (y >= impl_->ny) throw validation_error("conditioning outcome out of range");
    double py = impl_->p_y[y];
    if (py <= Tol::conditioning)
        throw model_error("conditioning outcome has vanishing probability");
    CPFResult r;
    r.t = impl_->t;
    r.tau = impl_->tau;
    r.y = y;
    std::size_t slot = impl_->nx + y;
    for (int n = 1; n <= impl_->opts.max_order; ++n) {
        const auto& per_y = impl_->order(n);
        Complex v = 0.0;
        for (std::size_t z = 0; z < impl_->nz; ++z)
            v += impl_->scheme.last.outcomes[z] * per_y[y](z, slot);
        v /= py * py;
        if (std::abs(v.imag()) > Tol::imag_residue)
            throw accuracy_error("CPF has complex residue");
        r.per_order.push_back(v.real());
        r.value += v.real();
    }
    return r;
}

SeriesTables joint_prob_perturbative(const MeasurementScheme& scheme,
                                     const EngineModel& model,
                                     const UnperturbedPropagator& lambda,
                                     const DensityMatrix& rho0, double t, double tau,
                                     SeriesOptions opts) {
    SeriesEvaluator ev(scheme, model, lambda, rho0, t, tau, opts);
    return ev.tables();
}

CPFResult cpf_perturbative(const MeasurementScheme& scheme, const EngineModel& model,
                           const UnperturbedPropagator& lambda,
                           const DensityMatrix& rho0, double t, double tau,
                           std::size_t y, SeriesOptions opts) {
    SeriesEvaluator ev(scheme, model, lambda, rho0, t, tau, opts);
    return ev.cpf(y);
}

namespace {

double projected_identity_error(const std::function<SuperOperator(double)>& generator,
                                const SuperOperator& a, const SuperOperator& b,
                                const ComplexVector& rho0_vec, Eigen::Index d,
                                double t, int n) {
    double h = t / n;
    // Full evolution at the grid nodes (midpoint per-step exponentials).
    std::vector<ComplexVector> states(n + 1);
    states[0] = rho0_vec;
    for (int kk = 0; kk < n; ++kk) {
        ComplexMatrix step = matrix_exp(h * generator((kk + 0.5) * h).action());
        states[kk + 1] = step * states[kk];
    }
    // Projected propagators G_{t, t_k} generated by a o L, accumulated
    // backwards from G_{t,t} = identity.
    std::vector<ComplexMatrix> g(n + 1);
    g[n] = ComplexMatrix::Identity(d * d, d * d);
    for (int kk = n - 1; kk >= 0; --kk) {
        ComplexMatrix step =
            matrix_exp(h * (a.action() * generator((kk + 0.5) * h).action()));
        g[kk] = g[kk + 1] * step;
    }
    ComplexVector lhs = a.action() * states[n];
    ComplexVector rhs = g[0] * (a.action() * states[0]);
    for (int kk = 0; kk <= n; ++kk) {
        double w = (kk == 0 || kk == n) ? h / 2.0 : h;
        rhs += w * (g[kk] * (a.action() *
                             (generator(kk * h).action() * (b.action() * states[kk]))));
    }
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace

ProjectionIdentityReport projection_identity_check(
    const std::function<SuperOperator(double)>& generator, Eigen::Index d_s,
    Eigen::Index d_e, const DensityMatrix& sigma_e, const DensityMatrix& rho0_se,
    double t, int n_steps) {
    Eigen::Index d = d_s * d_e;
    if (rho0_se.dim() != d || generator(0.0).dim() != d)
        throw validation_error("projection identity check: dimension mismatch");
    if (n_steps < 2 || !(t > 0.0))
        throw validation_error("projection identity check needs t > 0, n_steps >= 2");
    SuperOperator p = projector_P(sigma_e, d_s);
    SuperOperator q = projector_Q(sigma_e, d_s);
    ComplexVector v0 = vectorize(rho0_se.matrix());

    ProjectionIdentityReport rep;
    rep.irrelevant_err_h =
        projected_identity_error(generator, q, p, v0, d, t, n_steps);
    rep.irrelevant_err_half =
        projected_identity_error(generator, q, p, v0, d, t, 2 * n_steps);
    rep.relevant_err_h = projected_identity_error(generator, p, q, v0, d, t, n_steps);
    rep.relevant_err_half =
        projected_identity_error(generator, p, q, v0, d, t, 2 * n_steps);
    return rep;
}

}  // namespace cpf
