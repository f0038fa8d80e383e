#include "swvar/experiments.hpp"

#include "swvar/dependence.hpp"
#include "swvar/model.hpp"
#include "swvar/pipeline.hpp"
#include "swvar/simulate.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace swvar {

using nlohmann::json;

namespace {

constexpr std::uint64_t kGeneratorStream = 0x9E3779B97F4A7C15ULL;

std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string step_rule_name(StepRule r) { return r == StepRule::Fixed ? "fixed" : "backtracking"; }

StepRule step_rule_from(const std::string& s) {
    if (s == "fixed") return StepRule::Fixed;
    if (s == "backtracking") return StepRule::Backtracking;
    throw ConfigError("unknown step_rule '" + s + "'");
}

json config_object(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = experiment_name(cfg.experiment);
    j["p_list"] = cfg.p_list;
    j["gamma2_list"] = cfg.gamma2_list;
    j["m_list"] = cfg.m_list;
    json cells = json::array();
    for (const auto& [p, n] : cfg.cells) cells.push_back({p, n});
    j["cells"] = cells;
    j["n_list"] = cfg.n_list;
    j["rho_list"] = cfg.rho_list;
    j["replications"] = cfg.replications;
    j["base_seed"] = cfg.base_seed;
    j["rho_target"] = cfg.rho_target;
    j["burn_in"] = cfg.burn_in;
    j["holdout"] = cfg.holdout;
    j["lambda_grid"] = cfg.lambda_grid;
    j["lambda_span"] = cfg.lambda_span;
    j["nuc_grid"] = cfg.nuc_grid;
    j["t_max"] = cfg.t_max;
    j["t_points"] = cfg.t_points;
    j["include_p150"] = cfg.include_p150;
    j["solver"] = {{"max_iters", cfg.solver.max_iters},
                   {"rel_tol", cfg.solver.rel_tol},
                   {"step_rule", step_rule_name(cfg.solver.step_rule)},
                   {"restart", cfg.solver.restart}};
    return j;
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

std::string text_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<V, double>) {
                return format_real(v);
            } else {
                return v;
            }
        },
        c);
}

const char* type_name(ColumnType t) {
    switch (t) {
        case ColumnType::Int: return "int";
        case ColumnType::Real: return "real";
        case ColumnType::Text: return "text";
    }
    return "text";
}

ColumnType type_from(const std::string& s) {
    if (s == "int") return ColumnType::Int;
    if (s == "real") return ColumnType::Real;
    if (s == "text") return ColumnType::Text;
    throw ConfigError("unknown column type '" + s + "'");
}

Cell parse_cell(const std::string& s, ColumnType t) {
    switch (t) {
        case ColumnType::Int: {
            std::int64_t v = 0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad integer cell '" + s + "'");
            return v;
        }
        case ColumnType::Real: {
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad real cell '" + s + "'");
            return v;
        }
        case ColumnType::Text: return s;
    }
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

ResultTable make_table(const ExperimentConfig& cfg, std::vector<std::string> columns, std::vector<ColumnType> types) {
    ResultTable t;
    t.experiment = experiment_name(cfg.experiment);
    t.columns = std::move(columns);
    t.types = std::move(types);
    t.config_json = config_to_json(cfg);
    t.config_hash = config_hash(cfg);
    return t;
}

LambdaRule validation_rule(const ExperimentConfig& cfg, double K, double c_factor, std::size_t q) {
    TheoryLambda th;
    th.K = K;
    th.c_factor = c_factor;
    th.width = 2.0 * std::sqrt(std::log(2.0 * static_cast<double>(q)));
    th.phi_bar = 1.0;
    LambdaRule rule = LambdaRule::validation(th);
    rule.grid_size = cfg.lambda_grid;
    rule.span_decades = cfg.lambda_span;
    return rule;
}

double oracle_c_factor(const Matrix& B, double noise_scale) {
    const auto p = B.rows();
    return dependence_factor(
               LinearProcessSpec::var1(B.transpose(), noise_scale * noise_scale * Matrix::Identity(p, p)))
        .c_factor;
}

std::vector<std::size_t> figsw_dimensions(const ExperimentConfig& cfg) {
    std::vector<std::size_t> ps = cfg.p_list;
    if (cfg.include_p150 && std::find(ps.begin(), ps.end(), std::size_t{150}) == ps.end()) ps.push_back(150);
    return ps;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::FigSW: return "figsw";
        case ExperimentKind::LsTables: return "ls_tables";
        case ExperimentKind::Concentration: return "concentration";
    }
    return "figsw";
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "figsw") return ExperimentKind::FigSW;
    if (name == "ls_tables" || name == "ls-tables") return ExperimentKind::LsTables;
    if (name == "concentration") return ExperimentKind::Concentration;
    throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::FigSW:
            c.p_list = {30, 50, 100};
            c.gamma2_list = {0.5, 1.0, 2.0};
            c.m_list = {1, 3, 5, 7, 9, 13, 15, 17, 19};
            c.replications = 30;
            c.rho_target = 0.5;
            break;
        case ExperimentKind::LsTables:
            c.cells = {{10, 30}, {10, 50}, {30, 80}, {30, 100}};
            c.gamma2_list = {2.0, 1.0, 0.5};
            c.replications = 20;
            c.rho_target = 0.7;
            break;
        case ExperimentKind::Concentration:
            c.p_list = {10};
            c.gamma2_list = {1.0, 2.0};
            c.n_list = {200, 800};
            c.replications = 1000;
            c.rho_target = 0.5;
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (!(rho_target > 0.0 && rho_target < 1.0)) throw ConfigError("rho_target must lie in (0,1)");
    for (double r : rho_list) {
        if (!(r > 0.0 && r < 1.0)) throw ConfigError("rho_list entries must lie in (0,1)");
    }
    if (gamma2_list.empty()) throw ConfigError("gamma2_list is empty");
    for (double g : gamma2_list) {
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("gamma2 values must be positive");
    }
    if (lambda_grid < 1) throw ConfigError("lambda_grid must be >= 1");
    solver.validate();
    switch (experiment) {
        case ExperimentKind::FigSW:
            if (p_list.empty() || m_list.empty()) throw ConfigError("figsw needs p_list and m_list");
            for (auto p : p_list) {
                if (p < 2) throw ConfigError("all p must be >= 2");
            }
            for (double m : m_list) {
                if (!(m > 0.0)) throw ConfigError("m values must be positive");
            }
            break;
        case ExperimentKind::LsTables:
            if (cells.empty()) throw ConfigError("ls_tables needs cells");
            for (const auto& [p, n] : cells) {
                if (p < 4) throw ConfigError("ls_tables needs p >= 4 (rank-3 low-rank block)");
                if (n < 1 + kMinExtraSamples) throw ConfigError("ls_tables sample size too small");
            }
            if (holdout < 1) throw ConfigError("holdout must be >= 1");
            if (nuc_grid < 1) throw ConfigError("nuc_grid must be >= 1");
            break;
        case ExperimentKind::Concentration:
            if (p_list.empty() || n_list.empty()) throw ConfigError("concentration needs p_list and n_list");
            for (auto p : p_list) {
                if (p < 2 || p > 20) throw ConfigError("concentration needs 2 <= p <= 20");
            }
            for (auto n : n_list) {
                if (n < 2) throw ConfigError("concentration sample sizes must be >= 2");
            }
            if (replications < 1000) throw ConfigError("concentration needs at least 1000 replications");
            if (!(t_max > 0.0) || t_points < 2) throw ConfigError("concentration t-grid needs t_max > 0 and >= 2 points");
            break;
    }
}

std::string config_to_json(const ExperimentConfig& cfg) { return config_object(cfg).dump(); }

ExperimentConfig config_from_json(const std::string& json_text, ExperimentKind kind) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c = ExperimentConfig::defaults(kind);
    if (j.contains("experiment")) {
        if (experiment_from_name(get_as<std::string>(j, "experiment")) != kind) {
            throw ConfigError("config names a different experiment");
        }
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "experiment") continue;
        if (key == "p_list") c.p_list = get_as<std::vector<std::size_t>>(j, "p_list");
        else if (key == "gamma2_list") c.gamma2_list = get_as<std::vector<double>>(j, "gamma2_list");
        else if (key == "m_list") c.m_list = get_as<std::vector<double>>(j, "m_list");
        else if (key == "n_list") c.n_list = get_as<std::vector<std::size_t>>(j, "n_list");
        else if (key == "rho_list") c.rho_list = get_as<std::vector<double>>(j, "rho_list");
        else if (key == "cells") {
            c.cells.clear();
            for (const auto& v : get_as<std::vector<std::vector<std::size_t>>>(j, "cells")) {
                if (v.size() != 2) throw ConfigError("cells entries must be [p, N] pairs");
                c.cells.emplace_back(v[0], v[1]);
            }
        }
        else if (key == "replications") c.replications = get_as<std::size_t>(j, "replications");
        else if (key == "base_seed") c.base_seed = get_as<std::uint64_t>(j, "base_seed");
        else if (key == "rho_target") c.rho_target = get_as<double>(j, "rho_target");
        else if (key == "output_path") c.output_path = get_as<std::string>(j, "output_path");
        else if (key == "threads") c.threads = get_as<unsigned>(j, "threads");
        else if (key == "burn_in") c.burn_in = get_as<std::size_t>(j, "burn_in");
        else if (key == "holdout") c.holdout = get_as<std::size_t>(j, "holdout");
        else if (key == "lambda_grid") c.lambda_grid = get_as<std::size_t>(j, "lambda_grid");
        else if (key == "lambda_span") c.lambda_span = get_as<double>(j, "lambda_span");
        else if (key == "nuc_grid") c.nuc_grid = get_as<std::size_t>(j, "nuc_grid");
        else if (key == "t_max") c.t_max = get_as<double>(j, "t_max");
        else if (key == "t_points") c.t_points = get_as<std::size_t>(j, "t_points");
        else if (key == "include_p150") c.include_p150 = get_as<bool>(j, "include_p150");
        else if (key == "solver") {
            const json& s = value;
            if (!s.is_object()) throw ConfigError("solver must be an object");
            for (const auto& [sk, sv] : s.items()) {
                if (sk == "max_iters") c.solver.max_iters = get_as<std::size_t>(s, "max_iters");
                else if (sk == "rel_tol") c.solver.rel_tol = get_as<double>(s, "rel_tol");
                else if (sk == "step_rule") c.solver.step_rule = step_rule_from(get_as<std::string>(s, "step_rule"));
                else if (sk == "restart") c.solver.restart = get_as<bool>(s, "restart");
                else throw ConfigError("unknown solver key '" + sk + "'");
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string emit_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const std::string s = text_cell(row[i]);
            if (s.find_first_of(",\n\"") != std::string::npos) throw ConfigError("CSV cell contains a separator");
            out += s;
        }
        out += '\n';
    }
    return out;
}

std::string emit_json(const ResultTable& table) {
    json j;
    j["experiment"] = table.experiment;
    j["software_version"] = kSoftwareVersion;
    j["config"] = table.config_json.empty() ? json::object() : json::parse(table.config_json);
    j["config_hash"] = table.config_hash;
    j["columns"] = table.columns;
    json types = json::array();
    for (auto t : table.types) types.push_back(type_name(t));
    j["types"] = types;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto& v) { r[table.columns[i]] = v; }, row[i]);
        }
        r["config_hash"] = table.config_hash;
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

ResultTable parse_csv(const std::string& text, const std::vector<ColumnType>& types) {
    ResultTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("CSV is empty");
    t.columns = split(line, ',');
    if (types.size() != t.columns.size()) throw ConfigError("CSV column count differs from the type list");
    t.types = types;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != t.columns.size()) throw ConfigError("CSV row has the wrong number of fields");
        std::vector<Cell> row;
        for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(parse_cell(fields[i], types[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable parse_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("result JSON is invalid: ") + e.what());
    }
    ResultTable t;
    t.experiment = get_as<std::string>(j, "experiment");
    t.columns = get_as<std::vector<std::string>>(j, "columns");
    for (const auto& s : get_as<std::vector<std::string>>(j, "types")) t.types.push_back(type_from(s));
    if (t.types.size() != t.columns.size()) throw ConfigError("result JSON types and columns differ in length");
    const json& cfg = j.at("config");
    t.config_json = cfg.empty() ? std::string() : cfg.dump();
    t.config_hash = get_as<std::string>(j, "config_hash");
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            const json& v = r.at(t.columns[i]);
            switch (t.types[i]) {
                case ColumnType::Int: row.emplace_back(v.get<std::int64_t>()); break;
                case ColumnType::Real: row.emplace_back(v.get<double>()); break;
                case ColumnType::Text: row.emplace_back(v.get<std::string>()); break;
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void emit_results(const ResultTable& table, const std::string& path, const std::string& format) {
    std::string body;
    if (format == "csv") body = emit_csv(table);
    else if (format == "json") body = emit_json(table);
    else throw ConfigError("unknown output format '" + format + "'");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw IoError("failed writing '" + path + "'");
}

ResultTable run_figsw(const ExperimentConfig& cfg) {
    cfg.validate();
    struct CellSpec {
        std::size_t p, s, n;
        double gamma2, m;
    };
    std::vector<CellSpec> cells;
    for (auto p : figsw_dimensions(cfg)) {
        const auto s = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(p))));
        for (double g : cfg.gamma2_list) {
            for (double m : cfg.m_list) {
                const auto n = static_cast<std::size_t>(
                    std::lround(m * static_cast<double>(s) * std::log(static_cast<double>(p))));
                cells.push_back({p, s, n, g, m});
            }
        }
    }
    const std::size_t reps = cfg.replications;
    std::vector<double> err(cells.size() * reps);
    parallel_for(err.size(), cfg.threads, [&](std::size_t task) {
        const CellSpec& c = cells[task / reps];
        const std::size_t r = task % reps;
        Rng rng(cfg.base_seed + r);
        TransitionGenSpec gen;
        gen.p = c.p;
        gen.sparsity = c.s;
        gen.target_rho = cfg.rho_target;
        const Matrix B = gen_sparse_transition(gen, rng);
        NoiseSpec noise;
        noise.gamma2 = c.gamma2;
        noise.p = c.p;
        SimulationOptions opts;
        opts.burn_in = cfg.burn_in;
        const Trajectory traj = simulate_var(VarModel{{B}}, noise, c.n, rng, opts);
        const LambdaRule rule = validation_rule(cfg, noise.subweibull_norm(), oracle_c_factor(B, noise.scale), c.p);
        const FitResult fit = fit_var(traj, 1, PenaltySpec::l1(), rule, cfg.solver);
        err[task] = (fit.coeffs - B).norm();
    });

    ResultTable table = make_table(cfg, {"p", "gamma2", "m", "n", "mean_err", "std_err"},
                                   {ColumnType::Int, ColumnType::Real, ColumnType::Real, ColumnType::Int,
                                    ColumnType::Real, ColumnType::Real});
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::vector<double> e(err.begin() + static_cast<std::ptrdiff_t>(i * reps),
                                    err.begin() + static_cast<std::ptrdiff_t>((i + 1) * reps));
        const auto& c = cells[i];
        table.rows.push_back({static_cast<std::int64_t>(c.p), c.gamma2, c.m, static_cast<std::int64_t>(c.n),
                              mean_of(e), sd_of(e)});
    }
    return table;
}

ResultTable run_ls_tables(const ExperimentConfig& cfg) {
    cfg.validate();
    struct CellSpec {
        std::size_t p, N;
        double gamma2;
    };
    std::vector<CellSpec> cells;
    for (const auto& [p, N] : cfg.cells) {
        for (double g : cfg.gamma2_list) cells.push_back({p, N, g});
    }
    const std::size_t reps = cfg.replications;
    constexpr std::size_t kMethods = 3;  // ols, lasso, ls
    std::vector<ErrorMetrics> metrics(cells.size() * reps * kMethods);

    parallel_for(cells.size() * reps, cfg.threads, [&](std::size_t task) {
        const CellSpec& c = cells[task / reps];
        const std::size_t r = task % reps;
        Rng rng(cfg.base_seed + r);
        TransitionGenSpec gen;
        gen.p = c.p;
        gen.target_rho = cfg.rho_target;
        gen.low_rank = LowRankBlock{};
        const LowRankSparse truth = gen_lowrank_sparse_transition(gen, rng);
        const Matrix B = truth.B();
        NoiseSpec noise;
        noise.gamma2 = c.gamma2;
        noise.p = c.p;
        SimulationOptions opts;
        opts.burn_in = cfg.burn_in;
        const Trajectory full = simulate_var(VarModel{{B}}, noise, c.N + cfg.holdout, rng, opts);
        Trajectory in_sample;
        in_sample.data = full.data.topRows(static_cast<Eigen::Index>(c.N + 1));
        const RegressionData data = build_design(in_sample, 1);
        ErrorMetrics* out = &metrics[task * kMethods];

        out[0] = eval_errors(ols_fit(data.X, data.Y).coeffs, B, 1, full.data, cfg.holdout);

        const LambdaRule rule = validation_rule(cfg, noise.subweibull_norm(), oracle_c_factor(B, noise.scale), c.p);
        const double center = theory_lambda_value(rule.theory, PenaltySpec::l1(), data.n(), c.p);
        const auto grid = validation_grid(rule, center, lambda_zero_threshold(data.X, data.Y, PenaltySpec::l1()));
        const ValidationResult sel =
            select_lambda_validation(data, PenaltySpec::l1(), grid, rule.holdout_fraction, cfg.solver);
        const FitResult lasso = fista_fit(data.X, data.Y, PenaltySpec::l1(), sel.lambda, cfg.solver);
        out[1] = eval_errors(lasso.coeffs, B, 1, full.data, cfg.holdout);

        // Low-rank plus sparse: 2-D validation on the same split. The pure-sparse
        // column (L = 0) reuses the LASSO path, since ½‖·‖² + μ‖S‖₁ with
        // μ = nλ/2 is the LASSO objective scaled by n/2.
        const auto n = static_cast<Eigen::Index>(data.n());
        const auto h = std::max<Eigen::Index>(1, std::lround(rule.holdout_fraction * static_cast<double>(n)));
        const Matrix Xt = data.X.topRows(n - h), Yt = data.Y.topRows(n - h);
        const Matrix Xv = data.X.bottomRows(h), Yv = data.Y.bottomRows(h);
        const double n_train = static_cast<double>(n - h);
        const double nuc_max = Eigen::JacobiSVD<Matrix>(Matrix(Xt.transpose() * Yt)).singularValues()(0);
        const auto nuc_grid = log_grid(nuc_max * std::pow(10.0, -cfg.lambda_span / 2.0), cfg.lambda_span / 2.0,
                                       cfg.nuc_grid);
        double best = sel.errors[sel.best_index];
        double best_nuc = -1.0;  // < 0: pure sparse
        double best_mu = 0.0;
        for (double lam_nuc : nuc_grid) {
            for (double lam : sel.grid) {
                const double mu = 0.5 * n_train * lam;
                const FitResult f =
                    lowrank_sparse_fit(Xt, Yt, lam_nuc, mu, static_cast<double>(c.p), cfg.solver);
                const double e = (Yv - Xv * f.coeffs).squaredNorm();
                if (e < best) {
                    best = e;
                    best_nuc = lam_nuc;
                    best_mu = mu;
                }
            }
        }
        if (best_nuc < 0.0) {
            out[2] = out[1];
        } else {
            const double scale = static_cast<double>(n) / n_train;
            const FitResult ls =
                lowrank_sparse_fit(data.X, data.Y, best_nuc * scale, best_mu * scale, static_cast<double>(c.p), cfg.solver);
            out[2] = eval_errors(ls.coeffs, B, 1, full.data, cfg.holdout);
        }
    });

    ResultTable table = make_table(cfg, {"p", "N", "gamma2", "method", "rel_err", "pred_err"},
                                   {ColumnType::Int, ColumnType::Int, ColumnType::Real, ColumnType::Text,
                                    ColumnType::Real, ColumnType::Real});
    const char* names[kMethods] = {"ols", "lasso", "ls"};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t k = 0; k < kMethods; ++k) {
            double rel = 0.0, pred = 0.0;
            for (std::size_t r = 0; r < reps; ++r) {
                const ErrorMetrics& m = metrics[(i * reps + r) * kMethods + k];
                rel += m.rel_err;
                pred += m.pred_err;
            }
            table.rows.push_back({static_cast<std::int64_t>(cells[i].p), static_cast<std::int64_t>(cells[i].N),
                                  cells[i].gamma2, std::string(names[k]), rel / static_cast<double>(reps),
                                  pred / static_cast<double>(reps)});
        }
    }
    return table;
}

double calibrate_bound_constant(const std::vector<double>& t_grid, const std::vector<double>& tail, double n,
                                double gamma2, double prefactor) {
    if (t_grid.size() != tail.size()) throw StructuralError("t-grid and tail lengths differ");
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        const double expo = std::min(std::pow(n * t, gamma2 / 2.0), n * t * t);
        if (!(expo > 0.0) || !(tail[i] > 0.0)) continue;
        c = std::min(c, std::log(prefactor / tail[i]) / expo);
    }
    if (!std::isfinite(c)) {
        // No positive tail beyond t = 0 constrains c; report the conservative 0.
        c = 0.0;
    }
    // Rounding in log/exp can leave the binding point a few ulps short.
    auto majorizes = [&] {
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double t = t_grid[i];
            const double expo = std::min(std::pow(n * t, gamma2 / 2.0), n * t * t);
            if (prefactor * std::exp(-c * expo) < tail[i]) return false;
        }
        return true;
    };
    while (c > 0.0 && !majorizes()) c = std::max(0.0, c * (1.0 - 1e-12) - 1e-300);
    return c;
}

std::vector<ConcentrationReport> run_concentration(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<double> rhos = cfg.rho_list.empty() ? std::vector<double>{cfg.rho_target} : cfg.rho_list;
    std::vector<double> t_grid(cfg.t_points);
    for (std::size_t i = 0; i < cfg.t_points; ++i) {
        t_grid[i] = cfg.t_max * static_cast<double>(i) / static_cast<double>(cfg.t_points - 1);
    }
    std::vector<ConcentrationReport> reports;
    for (auto p : cfg.p_list) {
        for (double rho : rhos) {
            // Generator and direction depend only on (seed, p): every ρ rescales the same pattern.
            Rng grng(cfg.base_seed ^ (kGeneratorStream * (p + 1)));
            TransitionGenSpec gen;
            gen.p = p;
            gen.sparsity = p;
            gen.target_rho = rho;
            const Matrix B = gen_sparse_transition(gen, grng);
            std::normal_distribution<double> gauss(0.0, 1.0);
            Vector u(static_cast<Eigen::Index>(p));
            for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gauss(grng);
            u.normalize();
            for (double g : cfg.gamma2_list) {
                NoiseSpec noise;
                noise.gamma2 = g;
                noise.p = p;
                const Matrix sigma_x =
                    solve_lyapunov(B, noise.scale * noise.scale * Matrix::Identity(static_cast<Eigen::Index>(p),
                                                                                   static_cast<Eigen::Index>(p)));
                const double quad = u.dot(sigma_x * u);
                const double K = noise.subweibull_norm();
                const double cf = oracle_c_factor(B, noise.scale);
                for (auto n : cfg.n_list) {
                    std::vector<double> gram(cfg.replications), cross(cfg.replications);
                    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
                        Rng rng(cfg.base_seed + r);
                        SimulationOptions opts;
                        opts.burn_in = cfg.burn_in;
                        const Trajectory traj = simulate_var(VarModel{{B}}, noise, n, rng, opts);
                        const RegressionData data = build_design(traj, 1);
                        const Vector xu = data.X * u;
                        const double nn = static_cast<double>(n);
                        gram[r] = std::abs(xu.squaredNorm() / nn - quad);
                        const Vector eta = data.Y.col(0) - data.X * B.col(0);
                        cross[r] = std::abs(xu.dot(eta) / nn);
                    });
                    for (int which = 0; which < 2; ++which) {
                        ConcentrationReport rep;
                        rep.statistic = which == 0 ? "gram" : "cross";
                        rep.p = p;
                        rep.n = n;
                        rep.gamma2 = g;
                        rep.rho = rho;
                        rep.c_factor = cf;
                        rep.K = K;
                        rep.prefactor = which == 0 ? 6.0 : 6.0 * static_cast<double>(p);  // d = 1
                        rep.t_grid = t_grid;
                        rep.deviations = which == 0 ? gram : cross;
                        for (double t : t_grid) {
                            const double thr = K * K * cf * t;
                            std::size_t count = 0;
                            for (double dv : rep.deviations) count += dv > thr ? 1 : 0;
                            rep.threshold.push_back(thr);
                            rep.empirical_tail_prob.push_back(static_cast<double>(count) /
                                                              static_cast<double>(cfg.replications));
                        }
                        rep.calibrated_c = calibrate_bound_constant(t_grid, rep.empirical_tail_prob,
                                                                    static_cast<double>(n), g, rep.prefactor);
                        for (double t : t_grid) {
                            const double expo = std::min(std::pow(static_cast<double>(n) * t, g / 2.0),
                                                         static_cast<double>(n) * t * t);
                            rep.bound_value.push_back(rep.prefactor * std::exp(-rep.calibrated_c * expo));
                        }
                        reports.push_back(std::move(rep));
                    }
                }
            }
        }
    }
    return reports;
}

ResultTable concentration_table(const std::vector<ConcentrationReport>& reports, const ExperimentConfig& cfg) {
    ResultTable table =
        make_table(cfg,
                   {"statistic", "p", "n", "gamma2", "rho", "c_factor", "t", "threshold", "empirical_tail", "bound",
                    "calibrated_c"},
                   {ColumnType::Text, ColumnType::Int, ColumnType::Int, ColumnType::Real, ColumnType::Real,
                    ColumnType::Real, ColumnType::Real, ColumnType::Real, ColumnType::Real, ColumnType::Real,
                    ColumnType::Real});
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.t_grid.size(); ++i) {
            table.rows.push_back({r.statistic, static_cast<std::int64_t>(r.p), static_cast<std::int64_t>(r.n),
                                  r.gamma2, r.rho, r.c_factor, r.t_grid[i], r.threshold[i],
                                  r.empirical_tail_prob[i], r.bound_value[i], r.calibrated_c});
        }
    }
    return table;
}

}  // namespace swvar
