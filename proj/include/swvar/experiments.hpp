#pragma once

#include "swvar/common.hpp"
#include "swvar/solvers.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace swvar {

inline constexpr const char* kSoftwareVersion = "0.1.0";

enum class ExperimentKind { FigSW, LsTables, Concentration };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::FigSW;
    std::vector<std::size_t> p_list;
    std::vector<double> gamma2_list;
    std::vector<double> m_list;                               // figsw sample-size multipliers
    std::vector<std::pair<std::size_t, std::size_t>> cells;   // ls_tables (p, N)
    std::vector<std::size_t> n_list;                          // concentration sample sizes
    std::vector<double> rho_list;                             // concentration generators; empty → {rho_target}
    std::size_t replications = 30;
    std::uint64_t base_seed = 20240101;
    double rho_target = 0.5;
    std::string output_path;
    unsigned threads = 1;
    std::size_t burn_in = 500;
    std::size_t holdout = 10;        // ls_tables out-of-sample points
    std::size_t lambda_grid = 30;    // validation grid size
    double lambda_span = 2.0;        // decades on each side of the theory λ
    std::size_t nuc_grid = 6;        // ls_tables nuclear-penalty grid size (plus the pure-sparse point)
    double t_max = 0.05;             // concentration t-grid upper end
    std::size_t t_points = 51;
    bool include_p150 = false;
    SolverConfig solver;

    /// Full-size defaults for each study.
    static ExperimentConfig defaults(ExperimentKind kind);
    void validate() const;
};

/// Canonical JSON (sorted keys) of every field except output_path and threads,
/// which do not affect results.
std::string config_to_json(const ExperimentConfig& cfg);
/// Starts from defaults(kind) and overrides the keys present in `json_text`.
ExperimentConfig config_from_json(const std::string& json_text, ExperimentKind kind);
/// 16 hex digits, FNV-1a over config_to_json.
std::string config_hash(const ExperimentConfig& cfg);

using Cell = std::variant<std::int64_t, double, std::string>;
enum class ColumnType { Int, Real, Text };

struct ResultTable {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<ColumnType> types;
    std::vector<std::vector<Cell>> rows;
    std::string config_json;
    std::string config_hash;

    bool operator==(const ResultTable&) const = default;
};

/// CSV: header line then one line per row; reals use shortest round-trip formatting.
std::string emit_csv(const ResultTable& table);
/// JSON mirror: experiment, software version, config echo, hash, columns and
/// rows (each row also carries config_hash).
std::string emit_json(const ResultTable& table);
ResultTable parse_csv(const std::string& text, const std::vector<ColumnType>& types);
ResultTable parse_json(const std::string& text);
/// Writes emit_csv or emit_json to `path`; format is "csv" or "json".
void emit_results(const ResultTable& table, const std::string& path, const std::string& format);

/// Per (p, γ₂, m): mean and sample standard deviation of ‖B̂ − B‖_F.
ResultTable run_figsw(const ExperimentConfig& cfg);

/// Long format: p, N, gamma2, method (ols | lasso | ls), replication-mean rel_err and pred_err.
ResultTable run_ls_tables(const ExperimentConfig& cfg);

struct ConcentrationReport {
    std::string statistic;  // "gram" or "cross"
    std::size_t p = 0;
    std::size_t n = 0;
    double gamma2 = 0.0;
    double rho = 0.0;
    double c_factor = 0.0;
    double K = 0.0;
    double prefactor = 0.0;
    double calibrated_c = 0.0;
    std::vector<double> t_grid;
    std::vector<double> threshold;  // K²𝖢t
    std::vector<double> empirical_tail_prob;
    std::vector<double> bound_value;
    std::vector<double> deviations;  // raw |statistic| per replication
};

std::vector<ConcentrationReport> run_concentration(const ExperimentConfig& cfg);
ResultTable concentration_table(const std::vector<ConcentrationReport>& reports, const ExperimentConfig& cfg);

/// Largest c with prefactor·exp(−c·min((nt)^{γ/2}, nt²)) >= tail[i] on the grid.
double calibrate_bound_constant(const std::vector<double>& t_grid, const std::vector<double>& tail, double n,
                                double gamma2, double prefactor);

}  // namespace swvar
