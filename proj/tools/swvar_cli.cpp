// swvar: simulate, fit and analyse Subweibull VAR models from the command line.

#include "swvar/dependence.hpp"
#include "swvar/experiments.hpp"
#include "swvar/io.hpp"
#include "swvar/model.hpp"
#include "swvar/pipeline.hpp"
#include "swvar/simulate.hpp"
#include "swvar/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

using nlohmann::json;
using namespace swvar;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON configuration file");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--out", f.out, "output path (stdout when omitted)");
    cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        json j = json::parse(read_text_file(path));
        if (!j.is_object()) throw ConfigError("config root must be an object");
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

Matrix matrix_from_json(const json& j, const char* what) {
    if (j.is_string()) return matrix_from_csv(read_text_file(j.get<std::string>()));
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw ConfigError(std::string(what) + " must be a nested array or a CSV path");
    }
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.front().size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j.front().size()) throw ConfigError(std::string(what) + " is ragged");
        for (std::size_t k = 0; k < j[i].size(); ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty()) std::cout << text;
    else write_text_file(out, text);
}

SolverConfig solver_from(const json& j, unsigned threads) {
    SolverConfig s;
    s.threads = threads;
    s.record_trace = false;
    if (!j.contains("solver")) return s;
    const json& sj = j.at("solver");
    s.max_iters = get_or<std::size_t>(sj, "max_iters", s.max_iters);
    s.rel_tol = get_or<double>(sj, "rel_tol", s.rel_tol);
    s.restart = get_or<bool>(sj, "restart", s.restart);
    const auto rule = get_or<std::string>(sj, "step_rule", "fixed");
    if (rule == "fixed") s.step_rule = StepRule::Fixed;
    else if (rule == "backtracking") s.step_rule = StepRule::Backtracking;
    else throw ConfigError("unknown step_rule '" + rule + "'");
    s.validate();
    return s;
}

// simulate: {p, d, T, gamma2, noise_scale, rho, sparsity, burn_in, coeffs?, low_rank?}
int cmd_simulate(const CommonFlags& f) {
    const json cfg = load_config(f.config);
    Rng rng(f.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1)));
    const auto T = get_or<std::size_t>(cfg, "T", 200);
    NoiseSpec noise;
    noise.gamma2 = get_or<double>(cfg, "gamma2", 2.0);
    noise.scale = get_or<double>(cfg, "noise_scale", 1.0);
    SimulationOptions opts;
    opts.burn_in = get_or<std::size_t>(cfg, "burn_in", opts.burn_in);

    VarModel model;
    if (cfg.contains("coeffs")) {
        model = VarModel::from_stacked(matrix_from_json(cfg.at("coeffs"), "coeffs"), get_or<std::size_t>(cfg, "d", 1));
    } else {
        TransitionGenSpec gen;
        gen.p = get_or<std::size_t>(cfg, "p", 10);
        gen.sparsity = get_or<std::size_t>(cfg, "sparsity", gen.p);
        gen.target_rho = get_or<double>(cfg, "rho", 0.5);
        if (cfg.contains("low_rank")) {
            const json& lr = cfg.at("low_rank");
            LowRankBlock b;
            b.rank = get_or<std::size_t>(lr, "rank", b.rank);
            b.density_lo = get_or<double>(lr, "density_lo", b.density_lo);
            b.density_hi = get_or<double>(lr, "density_hi", b.density_hi);
            gen.low_rank = b;
            model.coeffs = {gen_lowrank_sparse_transition(gen, rng).B()};
        } else {
            model.coeffs = {gen_sparse_transition(gen, rng)};
        }
    }
    noise.p = model.dim();
    const Trajectory traj = simulate_var(model, noise, T, rng, opts);
    if (f.format == "json") {
        json j;
        j["coeffs"] = matrix_to_json(model.stacked());
        j["lag"] = model.lag();
        j["trajectory"] = matrix_to_json(traj.data);
        emit(f.out, j.dump(2) + "\n");
    } else {
        emit(f.out, trajectory_to_csv(traj));
    }
    if (cfg.contains("truth_out")) write_text_file(cfg.at("truth_out").get<std::string>(), matrix_to_csv(model.stacked()));
    return 0;
}

LambdaRule lambda_rule_from(const json& cfg) {
    const json lj = cfg.contains("lambda") ? cfg.at("lambda") : json::object();
    TheoryLambda t;
    t.K = get_or<double>(lj, "K", 1.0);
    t.c_factor = get_or<double>(lj, "c_factor", 1.0);
    t.c_abs = get_or<double>(lj, "c_abs", 1.0);
    if (lj.contains("width")) t.width = get_or<double>(lj, "width", 0.0);
    if (lj.contains("phi_bar")) t.phi_bar = get_or<double>(lj, "phi_bar", 1.0);
    const auto rule = get_or<std::string>(lj, "rule", "validation");
    LambdaRule out;
    if (rule == "fixed") out = LambdaRule::fixed(get_or<double>(lj, "value", 0.0));
    else if (rule == "theory") out = LambdaRule::from_theory(t);
    else if (rule == "validation") out = LambdaRule::validation(t);
    else throw ConfigError("unknown lambda rule '" + rule + "'");
    out.grid_size = get_or<std::size_t>(lj, "grid_size", out.grid_size);
    out.span_decades = get_or<double>(lj, "span_decades", out.span_decades);
    out.holdout_fraction = get_or<double>(lj, "holdout_fraction", out.holdout_fraction);
    return out;
}

// fit: {data, d, penalty, lambda, varx?, lowrank_sparse?, truth?, trace?, solver?}
int cmd_fit(const CommonFlags& f, const std::string& data_flag) {
    const json cfg = load_config(f.config);
    const std::string data_path = data_flag.empty() ? get_or<std::string>(cfg, "data", "") : data_flag;
    if (data_path.empty()) throw ConfigError("fit needs a trajectory (--data or config key 'data')");
    const Trajectory traj = trajectory_from_csv(read_text_file(data_path));
    const SolverConfig solver = solver_from(cfg, f.threads);
    const auto d = get_or<std::size_t>(cfg, "d", 1);

    FitResult fit;
    std::size_t lag_for_metrics = d;
    if (cfg.contains("lowrank_sparse")) {
        const json& ls = cfg.at("lowrank_sparse");
        fit = fit_var_lowrank_sparse(traj, get_or<double>(ls, "lambda_nuc", 0.1), get_or<double>(ls, "mu", 0.1),
                                     get_or<double>(ls, "alpha", static_cast<double>(traj.dim())), solver);
        lag_for_metrics = 1;
    } else if (cfg.contains("varx")) {
        const json& vx = cfg.at("varx");
        fit = fit_varx(traj, get_or<std::size_t>(vx, "d_a", 1), get_or<std::size_t>(vx, "d_b", 1),
                       lambda_rule_from(cfg), solver, get_or<double>(vx, "exo_scale", 1.0));
        lag_for_metrics = 0;
    } else {
        const PenaltySpec penalty =
            cfg.contains("penalty") ? penalty_from_json(cfg.at("penalty").dump()) : PenaltySpec::l1();
        fit = fit_var(traj, d, penalty, lambda_rule_from(cfg), solver);
    }

    std::optional<ErrorMetrics> metrics;
    if (cfg.contains("truth") && lag_for_metrics > 0) {
        const Matrix truth = matrix_from_json(cfg.at("truth"), "truth");
        const auto horizon = std::min<std::size_t>(10, traj.length() - lag_for_metrics);
        metrics = eval_errors(fit.coeffs, truth, lag_for_metrics, traj.data, horizon);
    }
    if (f.format == "json") emit(f.out, fit_to_json(fit, get_or<bool>(cfg, "trace", false), metrics));
    else emit(f.out, matrix_to_csv(fit.coeffs));
    return 0;
}

// dependence: {A, sigma?, grid?}
int cmd_dependence(const CommonFlags& f) {
    const json cfg = load_config(f.config);
    if (!cfg.contains("A")) throw ConfigError("dependence needs a generator matrix 'A'");
    const Matrix A = matrix_from_json(cfg.at("A"), "A");
    const Matrix sigma =
        cfg.contains("sigma") ? matrix_from_json(cfg.at("sigma"), "sigma") : Matrix::Identity(A.rows(), A.rows());
    const auto grid = get_or<std::size_t>(cfg, "grid", 512);
    const DependenceReport r = dependence_report(A, sigma, grid);
    if (f.format == "json") {
        emit(f.out, dependence_report_to_json(r));
    } else {
        std::string text = "c_factor,rho,op_norm,m_upper,m_lower,truncation_terms,tail_bound\n";
        json row = json::array({r.c_factor, r.rho, r.op_norm, r.m_upper, r.m_lower, r.truncation_terms, r.tail_bound});
        for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i].dump();
        emit(f.out, text + "\n");
    }
    return 0;
}

int cmd_experiment(const CommonFlags& f, const std::string& name, std::optional<std::size_t> reps) {
    const ExperimentKind kind = experiment_from_name(name);
    ExperimentConfig cfg =
        f.config.empty() ? ExperimentConfig::defaults(kind) : config_from_json(read_text_file(f.config), kind);
    if (f.seed) cfg.base_seed = *f.seed;
    if (reps) cfg.replications = *reps;
    cfg.threads = f.threads;
    if (!f.out.empty()) cfg.output_path = f.out;
    cfg.validate();

    ResultTable table;
    switch (kind) {
        case ExperimentKind::FigSW: table = run_figsw(cfg); break;
        case ExperimentKind::LsTables: table = run_ls_tables(cfg); break;
        case ExperimentKind::Concentration: table = concentration_table(run_concentration(cfg), cfg); break;
    }
    if (cfg.output_path.empty()) std::cout << (f.format == "json" ? emit_json(table) : emit_csv(table));
    else emit_results(table, cfg.output_path, f.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subweibull VAR simulation, estimation and experiments"};
    app.require_subcommand(1);

    CommonFlags sim_flags, fit_flags, dep_flags, exp_flags;
    auto* sim = app.add_subcommand("simulate", "simulate a sparse VAR trajectory");
    add_common(sim, sim_flags);

    auto* fit = app.add_subcommand("fit", "fit a penalized VAR to a trajectory CSV");
    add_common(fit, fit_flags);
    std::string data_path;
    fit->add_option("--data", data_path, "trajectory CSV (overrides config key 'data')");

    auto* dep = app.add_subcommand("dependence", "dependence factor and stability factors of a VAR(1) generator");
    add_common(dep, dep_flags);

    auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo study");
    add_common(exp, exp_flags);
    std::string exp_name;
    std::optional<std::size_t> reps;
    exp->add_option("name", exp_name, "figsw | ls-tables | concentration")
        ->required()
        ->check(CLI::IsMember({"figsw", "ls-tables", "ls_tables", "concentration"}));
    exp->add_option("--replications", reps, "override the replication count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sim) return cmd_simulate(sim_flags);
        if (*fit) return cmd_fit(fit_flags, data_path);
        if (*dep) return cmd_dependence(dep_flags);
        if (*exp) return cmd_experiment(exp_flags, exp_name, reps);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
