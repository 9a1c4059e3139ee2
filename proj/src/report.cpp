#include "cpf/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cpf/engine.hpp"
#include "cpf/gaussian_exact.hpp"
#include "cpf/montecarlo.hpp"
#include "cpf/pseudomode.hpp"

namespace cpf {

namespace {

const char* kVersion = "cpfkit 0.1.0";

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string joint_checksum(const JointDistribution& j) {
    std::string all;
    for (double v : j.table) {
        all += fmt15(v);
        all += ',';
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(all)));
    return buf;
}

DensityMatrix build_rho0(const ExperimentConfig& cfg) {
    return DensityMatrix(
        qubit_projector(std::sqrt(cfg.p), std::sqrt(1.0 - cfg.p)));
}

UnperturbedPropagator build_propagator(const ExperimentConfig& cfg, double s_max) {
    if (cfg.model_type == "dephasing")
        return dephasing_propagator(ClassicalNoiseModel(cfg.gamma, cfg.tau_c), s_max);
    QuantumBathModel qm(cfg.gamma, cfg.tau_c, cfg.nbar);
    if (cfg.nbar == 0.0) return zero_T_decay_propagator(qm, s_max);
    return finite_T_propagator(qm, s_max,
                               cfg.finite_t_style == "ansatz"
                                   ? FiniteTStyle::ansatz
                                   : FiniteTStyle::pseudomode_tabulated);
}

EngineModel build_engine_model(const ExperimentConfig& cfg) {
    if (cfg.model_type == "dephasing")
        return EngineModel::dephasing(ClassicalNoiseModel(cfg.gamma, cfg.tau_c));
    return EngineModel::dissipative(QuantumBathModel(cfg.gamma, cfg.tau_c, cfg.nbar));
}

OracleResult run_oracle(const ExperimentConfig& cfg, const MeasurementScheme& scheme,
                        const DensityMatrix& rho0, double t, double tau) {
    if (cfg.oracle_kind == "mc") {
        if (cfg.model_type != "dephasing")
            throw model_error("mc oracle supports the dephasing model only");
        return mc_joint_prob(ClassicalNoiseModel(cfg.gamma, cfg.tau_c), scheme, rho0,
                             t, tau, cfg.n_traj, cfg.seed);
    }
    if (cfg.oracle_kind == "gaussian") {
        if (cfg.model_type != "dephasing")
            throw model_error("gaussian oracle supports the dephasing model only");
        OracleResult r;
        r.joint = gaussian_dephasing_joint_prob(
            ClassicalNoiseModel(cfg.gamma, cfg.tau_c), scheme, rho0, t, tau);
        return r;
    }
    if (cfg.oracle_kind == "pseudomode") {
        if (cfg.model_type != "bosonic")
            throw model_error("pseudomode oracle supports the bosonic model only");
        return pseudomode_joint_prob(QuantumBathModel(cfg.gamma, cfg.tau_c, cfg.nbar),
                                     scheme, rho0, t, tau, cfg.fock_cutoff);
    }
    throw model_error("unknown oracle kind: " + cfg.oracle_kind);
}

/// Delta-method propagation of per-entry MC standard errors into the CPF.
double cpf_stderr_from_joint(const OracleResult& oracle, const std::vector<double>& oz,
                             const std::vector<double>& ox, std::size_t y) {
    if (oracle.stderr_table.empty()) return 0.0;
    double var = 0.0;
    const double h = 1e-7;
    for (std::size_t i = 0; i < oracle.joint.table.size(); ++i) {
        double se = oracle.stderr_table[i];
        if (se == 0.0) continue;
        JointDistribution jp = oracle.joint, jm = oracle.joint;
        jp.table[i] += h;
        jm.table[i] -= h;
        double d = (cpf_from_joint(jp, oz, ox, y).value -
                    cpf_from_joint(jm, oz, ox, y).value) /
                   (2.0 * h);
        var += d * d * se * se;
    }
    return std::sqrt(var);
}

double time_axis_factor(const ExperimentConfig& cfg) {
    // Dimensionless axis: gamma t, or gamma (nbar + 1) t at finite temperature.
    return (cfg.model_type == "bosonic") ? cfg.gamma * (cfg.nbar + 1.0) : cfg.gamma;
}

void write_csv_header(std::ofstream& out, const ExperimentConfig& cfg,
                      const std::vector<std::string>& cols) {
    out << "# " << kVersion << "\n";
    out << "# config " << cfg.to_json().dump() << "\n";
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << cols[i] << (i + 1 < cols.size() ? "," : "\n");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    for (const auto& item : j.items()) {
        static const std::vector<std::string> allowed = {
            "model", "scheme", "initial_state", "grid",
            "series", "oracle", "compare",       "output"};
        bool ok = false;
        for (const auto& a : allowed) ok = ok || item.key() == a;
        if (!ok) throw validation_error("unknown config key: " + item.key());
    }
    ExperimentConfig c;
    if (j.contains("model")) {
        const auto& m = j.at("model");
        c.model_type = m.value("type", c.model_type);
        c.gamma = m.value("gamma", c.gamma);
        c.tau_c = m.value("tau_c", c.tau_c);
        c.nbar = m.value("nbar", c.nbar);
        c.finite_t_style = m.value("finite_t_style", c.finite_t_style);
    }
    if (j.contains("scheme")) c.scheme = j.at("scheme").get<std::string>();
    if (j.contains("initial_state")) c.p = j.at("initial_state").value("p", c.p);
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.t_max = g.value("t_max", c.t_max);
        c.n_points = g.value("n_points", c.n_points);
        c.quad_nodes = g.value("quad_nodes", c.quad_nodes);
    }
    if (j.contains("series")) c.max_order = j.at("series").value("max_order", c.max_order);
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        c.oracle_kind = o.value("kind", c.oracle_kind);
        c.n_traj = o.value("n_traj", c.n_traj);
        c.seed = o.value("seed", c.seed);
        c.fock_cutoff = o.value("fock_cutoff", c.fock_cutoff);
    }
    if (j.contains("compare")) c.tolerance = j.at("compare").value("tolerance", c.tolerance);
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (model_type != "dephasing" && model_type != "bosonic")
        throw validation_error("model.type must be 'dephasing' or 'bosonic'");
    if (!(gamma > 0.0) || !(tau_c > 0.0))
        throw validation_error("model.gamma and model.tau_c must be positive");
    if (nbar < 0.0) throw validation_error("model.nbar must be >= 0");
    if (finite_t_style != "pseudomode" && finite_t_style != "ansatz")
        throw validation_error("model.finite_t_style must be 'pseudomode' or 'ansatz'");
    if (scheme != "zzz" && scheme != "xzx" && scheme != "xxx")
        throw validation_error("scheme must be one of zzz, xzx, xxx");
    if (p < 0.0 || p > 1.0) throw validation_error("initial_state.p must be in [0,1]");
    if (n_points < 0) throw validation_error("grid.n_points must be >= 0");
    if (n_points > 0 && !(t_max > 0.0))
        throw validation_error("grid.t_max must be positive for a non-empty sweep");
    if (quad_nodes < 2) throw validation_error("grid.quad_nodes must be >= 2");
    if (max_order < 1) throw validation_error("series.max_order must be >= 1");
    if (oracle_kind != "none" && oracle_kind != "mc" && oracle_kind != "gaussian" &&
        oracle_kind != "pseudomode")
        throw validation_error("oracle.kind must be none, mc, gaussian or pseudomode");
    if (oracle_kind == "mc" && n_traj < 1000)
        throw validation_error("oracle.n_traj must be >= 1000");
    if (output.empty()) throw validation_error("output path must be set");
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{
        {"model",
         {{"type", model_type},
          {"gamma", gamma},
          {"tau_c", tau_c},
          {"nbar", nbar},
          {"finite_t_style", finite_t_style}}},
        {"scheme", scheme},
        {"initial_state", {{"p", p}}},
        {"grid",
         {{"t_max", t_max}, {"n_points", n_points}, {"quad_nodes", quad_nodes}}},
        {"series", {{"max_order", max_order}}},
        {"oracle",
         {{"kind", oracle_kind},
          {"n_traj", n_traj},
          {"seed", seed},
          {"fock_cutoff", fock_cutoff}}},
        {"compare", {{"tolerance", tolerance}}},
        {"output", output}};
}

nlohmann::json load_config(const std::string& path,
                           const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("config parse error: ") + e.what());
    }
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw validation_error("override must be key.path=value: " + ov);
        std::string keypath = ov.substr(0, eq), value = ov.substr(eq + 1);
        nlohmann::json* node = &j;
        std::size_t pos = 0;
        while (true) {
            auto dot = keypath.find('.', pos);
            std::string key = keypath.substr(pos, dot - pos);
            if (dot == std::string::npos) {
                nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
                (*node)[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
                break;
            }
            node = &(*node)[key];
            pos = dot + 1;
        }
    }
    return j;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    std::ofstream out(cfg.output);
    if (!out) throw validation_error("cannot open output file: " + cfg.output);

    std::vector<std::string> cols = {"t_axis", "t", "tau", "y"};
    for (int n = 1; n <= cfg.max_order; ++n)
        cols.push_back("cpf_order_" + std::to_string(n));
    cols.push_back("cpf_total");
    cols.push_back("cpf_oracle");
    cols.push_back("cpf_oracle_stderr");
    cols.push_back("joint_checksum");
    write_csv_header(out, cfg, cols);
    if (cfg.n_points == 0) return 0;

    MeasurementScheme scheme = MeasurementScheme::preset(cfg.scheme);
    DensityMatrix rho0 = build_rho0(cfg);
    UnperturbedPropagator prop = build_propagator(cfg, cfg.t_max);
    EngineModel em = build_engine_model(cfg);
    SeriesOptions opts{cfg.max_order, cfg.quad_nodes};
    double axis = time_axis_factor(cfg);

    for (int i = 0; i < cfg.n_points; ++i) {
        double t = cfg.t_max * (i + 1) / cfg.n_points;
        SeriesEvaluator ev(scheme, em, prop, rho0, t, t, opts);
        std::string checksum = joint_checksum(ev.tables().total());
        bool have_oracle = cfg.oracle_kind != "none";
        OracleResult oracle;
        if (have_oracle) oracle = run_oracle(cfg, scheme, rho0, t, t);
        for (std::size_t y = 0; y < scheme.middle.size(); ++y) {
            CPFResult r = ev.cpf(y);
            out << fmt15(axis * t) << ',' << fmt15(t) << ',' << fmt15(t) << ','
                << fmt15(scheme.middle.outcomes[y]);
            for (double v : r.per_order) out << ',' << fmt15(v);
            out << ',' << fmt15(r.value) << ',';
            if (have_oracle) {
                CPFResult oc = cpf_from_joint(oracle.joint, scheme.last.outcomes,
                                              scheme.first.outcomes, y);
                out << fmt15(oc.value) << ','
                    << fmt15(cpf_stderr_from_joint(oracle, scheme.last.outcomes,
                                                   scheme.first.outcomes, y));
            } else {
                out << ',';
            }
            out << ',' << checksum << "\n";
        }
    }
    return 0;
}

int cmd_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.oracle_kind == "none")
        throw validation_error("compare requires an oracle block");
    if (cfg.n_points < 1) throw validation_error("compare requires n_points >= 1");

    std::ofstream out(cfg.output);
    if (!out) throw validation_error("cannot open output file: " + cfg.output);
    write_csv_header(out, cfg,
                     {"t_axis", "t", "tau", "y", "cpf_series", "cpf_oracle",
                      "abs_error"});

    MeasurementScheme scheme = MeasurementScheme::preset(cfg.scheme);
    DensityMatrix rho0 = build_rho0(cfg);
    UnperturbedPropagator prop = build_propagator(cfg, cfg.t_max);
    EngineModel em = build_engine_model(cfg);
    SeriesOptions opts{cfg.max_order, cfg.quad_nodes};
    double axis = time_axis_factor(cfg);

    double max_err = 0.0, sum_err = 0.0;
    long count = 0;
    for (int i = 0; i < cfg.n_points; ++i) {
        double t = cfg.t_max * (i + 1) / cfg.n_points;
        SeriesEvaluator ev(scheme, em, prop, rho0, t, t, opts);
        OracleResult oracle = run_oracle(cfg, scheme, rho0, t, t);
        for (std::size_t y = 0; y < scheme.middle.size(); ++y) {
            double series = ev.cpf(y).value;
            double exact = cpf_from_joint(oracle.joint, scheme.last.outcomes,
                                          scheme.first.outcomes, y)
                               .value;
            double err = std::abs(series - exact);
            max_err = std::max(max_err, err);
            sum_err += err;
            ++count;
            out << fmt15(axis * t) << ',' << fmt15(t) << ',' << fmt15(t) << ','
                << fmt15(scheme.middle.outcomes[y]) << ',' << fmt15(series) << ','
                << fmt15(exact) << ',' << fmt15(err) << "\n";
        }
    }
    bool pass = max_err <= cfg.tolerance;
    std::cout << (pass ? "PASS" : "FAIL") << " compare max_error=" << fmt15(max_err)
              << " mean_error=" << fmt15(sum_err / count)
              << " tolerance=" << fmt15(cfg.tolerance) << "\n";
    return pass ? 0 : 3;
}

int cmd_validate() {
    bool all = true;
    auto check = [&](const std::string& name, double value, double tol) {
        bool ok = value <= tol;
        all = all && ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name << " value=" << fmt15(value)
                  << " tol=" << fmt15(tol) << "\n";
    };
    auto check_range = [&](const std::string& name, double value, double lo,
                           double hi) {
        bool ok = value >= lo && value <= hi;
        all = all && ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name << " value=" << fmt15(value)
                  << " range=[" << fmt15(lo) << "," << fmt15(hi) << "]\n";
    };

    {
        ComplexMatrix se(2, 2);
        se << 0.7, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.3;
        DensityMatrix sigma_e(se);
        SuperOperator p = projector_P(sigma_e, 2), q = projector_Q(sigma_e, 2);
        check("projector_idempotence",
              std::max((p.action() * p.action() - p.action()).cwiseAbs().maxCoeff(),
                       (q.action() * q.action() - q.action()).cwiseAbs().maxCoeff()),
              Tol::projector);
        check("projector_orthogonality",
              (p.action() * q.action()).cwiseAbs().maxCoeff(), Tol::projector);
    }
    {
        ClassicalNoiseModel m(1.0, 0.1);
        MeasurementScheme scheme = MeasurementScheme::preset("xxx");
        DensityMatrix rho0(ket_plus_proj());
        UnperturbedPropagator prop = dephasing_propagator(m, 1.0);
        SeriesTables st = joint_prob_perturbative(scheme, EngineModel::dephasing(m),
                                                  prop, rho0, 1.0, 1.0);
        JointDistribution total = st.markov;
        double worst = std::abs(total.sum() - 1.0);
        for (const auto& ord : st.integral_order) {
            for (std::size_t i = 0; i < total.table.size(); ++i)
                total.table[i] += ord.table[i];
            worst = std::max(worst, std::abs(total.sum() - 1.0));
        }
        check("joint_normalization_per_order", worst, Tol::trace);
    }
    {
        PseudomodeModel pm =
            PseudomodeModel::from_bath(QuantumBathModel(1.0, 0.25, 0.0));
        ModeCorrelationReport rep = mode_correlation_check(pm);
        check("mode_correlation_zero_T",
              std::max(rep.max_dev_down, rep.max_dev_up), 1e-8);
        // Cutoff 16 keeps the thermal truncation error of the two-time
        // functions below the 1e-8 gate.
        PseudomodeModel pt =
            PseudomodeModel::from_bath(QuantumBathModel(1.0, 0.25, 0.2), 16);
        ModeCorrelationReport rt = mode_correlation_check(pt);
        check("mode_correlation_thermal",
              std::max(rt.max_dev_down, rt.max_dev_up), 1e-8);
    }
    {
        PseudomodeModel pm =
            PseudomodeModel::from_bath(QuantumBathModel(1.0, 0.25, 0.2), 3);
        SuperOperator gen = pm.embedding_generator();
        int d_e = pm.mode_dim();
        DensityMatrix sigma_e(pm.mode_stationary_state());
        // Correlated initial state: entangled pure part plus white noise.
        ComplexVector psi = ComplexVector::Zero(2 * d_e);
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(d_e + 1) = 1.0 / std::sqrt(2.0);
        ComplexMatrix r0 = 0.6 * (psi * psi.adjoint()) +
                           0.4 * ComplexMatrix::Identity(2 * d_e, 2 * d_e) /
                               (2.0 * d_e);
        DensityMatrix rho0(r0);
        ProjectionIdentityReport rep = projection_identity_check(
            [&](double) { return gen; }, 2, d_e, sigma_e, rho0, 1.0, 40);
        check_range("projection_identity_irrelevant_ratio", rep.irrelevant_ratio(),
                    3.5, 4.5);
        check_range("projection_identity_relevant_ratio", rep.relevant_ratio(), 3.5,
                    4.5);
    }
    return all ? 0 : 3;
}

int cmd_figure_data(int fig, const nlohmann::json& overrides,
                    const std::string& out_dir) {
    std::vector<std::pair<std::string, nlohmann::json>> runs;
    auto add = [&](const std::string& name, nlohmann::json j) {
        j.merge_patch(overrides);
        runs.emplace_back(name, std::move(j));
    };
    if (fig == 1) {
        for (double tc : {0.05, 0.1})
            add("fig1_tauc_" + fmt15(tc),
                {{"model", {{"type", "dephasing"}, {"gamma", 1.0}, {"tau_c", tc}}},
                 {"scheme", "xxx"},
                 {"initial_state", {{"p", 1.0}}},
                 {"grid", {{"t_max", 4.0}, {"n_points", 40}}},
                 {"series", {{"max_order", 3}}},
                 {"oracle", {{"kind", "gaussian"}}}});
    } else if (fig == 2) {
        for (const char* sc : {"zzz", "xzx"})
            for (double tc : {0.125, 0.5})
                add(std::string("fig2_") + sc + "_tauc_" + fmt15(tc),
                    {{"model",
                      {{"type", "bosonic"},
                       {"gamma", 1.0},
                       {"tau_c", tc},
                       {"nbar", 0.0}}},
                     {"scheme", sc},
                     {"initial_state", {{"p", 0.8}}},
                     {"grid", {{"t_max", 4.0}, {"n_points", 24}}},
                     {"series", {{"max_order", 3}}},
                     {"oracle", {{"kind", "pseudomode"}}}});
    } else if (fig == 3) {
        for (const char* sc : {"zzz", "xzx"})
            for (double nb : {0.05, 0.1, 0.2})
                add(std::string("fig3_") + sc + "_nbar_" + fmt15(nb),
                    {{"model",
                      {{"type", "bosonic"},
                       {"gamma", 1.0},
                       {"tau_c", 0.25},
                       {"nbar", nb}}},
                     {"scheme", sc},
                     {"initial_state", {{"p", 0.8}}},
                     {"grid", {{"t_max", 4.0}, {"n_points", 16}}},
                     {"series", {{"max_order", 3}}},
                     {"oracle", {{"kind", "none"}}}});
    } else {
        throw validation_error("figure must be 1, 2 or 3");
    }
    for (auto& [name, j] : runs) {
        j["output"] = out_dir + "/" + name + ".csv";
        ExperimentConfig cfg = ExperimentConfig::from_json(j);
        int rc = cmd_simulate(cfg);
        if (rc != 0) return rc;
        std::cout << "wrote " << cfg.output << "\n";
    }
    return 0;
}

}  // namespace cpf
