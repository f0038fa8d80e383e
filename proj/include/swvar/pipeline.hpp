#pragma once

#include "swvar/common.hpp"
#include "swvar/model.hpp"
#include "swvar/penalties.hpp"
#include "swvar/solvers.hpp"

#include <optional>
#include <vector>

namespace swvar {

struct ErrorMetrics {
    double frob_err = 0.0;
    double rel_err = 0.0;
    double pred_err = 0.0;
    double max_row_l2 = 0.0;  // max over responses j of ‖B̂_j − B_j‖₂ (columns of the stacked coefficient)
};

/// Inputs of the theory-scaled λ_n = 2Φ̄K²𝖢√(c·w²/n).
struct TheoryLambda {
    double K = 1.0;
    double c_factor = 1.0;
    double c_abs = 1.0;
    /// Width bound w(𝔹_R(0,1)); when unset, 2√log(2q) for ℓ1 and a
    /// fixed-seed Monte-Carlo estimate otherwise.
    std::optional<double> width;
    /// Φ̄ bound; when unset, 1/w_1 for OWL and 1 otherwise.
    std::optional<double> phi_bar;
};

struct LambdaRule {
    enum class Kind { Fixed, Theory, Validation };
    Kind kind = Kind::Fixed;
    double value = 0.0;
    TheoryLambda theory;
    /// Validation: last `holdout_fraction` of the trajectory is held out; the
    /// grid has `grid_size` log-spaced points spanning ±`span_decades` around
    /// the theory value, widened symmetrically when needed so that its low end
    /// reaches `floor_ratio`·λ_max (λ_max: smallest λ with a zero solution).
    double holdout_fraction = 0.1;
    std::size_t grid_size = 30;
    double span_decades = 2.0;
    double floor_ratio = 1e-3;

    static LambdaRule fixed(double lambda) { return {Kind::Fixed, lambda, {}}; }
    static LambdaRule from_theory(TheoryLambda t) { return {Kind::Theory, 0.0, std::move(t)}; }
    static LambdaRule validation(TheoryLambda t) { return {Kind::Validation, 0.0, std::move(t)}; }
};

struct ValidationResult {
    std::vector<double> grid;    // descending
    std::vector<double> errors;  // held-out squared one-step-ahead error per grid point
    std::size_t best_index = 0;  // first index attaining the minimum
    double lambda = 0.0;
};

/// Minimum usable sample beyond the lag order.
inline constexpr std::size_t kMinExtraSamples = 10;

/// Holds out the last holdout_fraction of the design rows (the last part of
/// the trajectory), fits the remaining rows along the grid and scores the
/// held-out rows. Because design rows carry realized lags, X_val·β̂ are the
/// one-step-ahead predictions from realized history.
ValidationResult select_lambda_validation(const RegressionData& data, const PenaltySpec& penalty,
                                          const std::vector<double>& grid, double holdout_fraction,
                                          const SolverConfig& cfg);

/// λ from the theory rule for a design with n rows and q regressors.
double theory_lambda_value(const TheoryLambda& t, const PenaltySpec& penalty, std::size_t n, std::size_t q);

/// Descending log grid center·10^{linspace(span, −span, size)}.
std::vector<double> log_grid(double center, double span_decades, std::size_t size);

/// Smallest λ for which β = 0 solves the penalized problem: R*(2C) over the
/// joint vector, or the largest per-column value for separable penalties.
double lambda_zero_threshold(const Matrix& X, const Matrix& Y, const PenaltySpec& penalty);

/// Validation grid of `rule` around `center` (see LambdaRule).
std::vector<double> validation_grid(const LambdaRule& rule, double center, double lambda_max);

/// Fits all p responses of the VAR(d) with a shared λ. coeffs is the stacked
/// dp×p estimate.
FitResult fit_var(const Trajectory& traj, std::size_t d, const PenaltySpec& penalty, const LambdaRule& rule,
                  const SolverConfig& cfg = {});

/// VAR-X fit of F = [A_1; ..; A_{d_A}; B_1; ..; B_{d_B}] under the Own/Other
/// penalty. `exo_scale` multiplies the exogenous group weights.
FitResult fit_varx(const Trajectory& traj, std::size_t d_a, std::size_t d_b, const LambdaRule& rule,
                   const SolverConfig& cfg = {}, double exo_scale = 1.0);

/// VAR(1) low-rank plus sparse fit; coeffs = L̂ + Ŝ.
FitResult fit_var_lowrank_sparse(const Trajectory& traj, double lambda_nuc, double mu, double alpha,
                                 const SolverConfig& cfg = {});

struct LowRankSparseErrors {
    double sparse_sq = 0.0;    // ‖Ŝ − S*‖²_F
    double low_rank_sq = 0.0;  // ‖L̂ − L*‖²_F
    double combined_sq = 0.0;  // ‖B̂ − B*‖²_F
};

LowRankSparseErrors lowrank_sparse_errors(const FitResult& fit, const Matrix& L_true, const Matrix& S_true);

/// Iterated forecasts Ẑ_{t+1..t+h} from the last d rows of `history`
/// (rows oldest first). `coeffs` is the stacked dp×p matrix.
Matrix predict(const Matrix& coeffs, std::size_t d, const Matrix& history, std::size_t horizon);

/// One-step-ahead predictions of the last `count` rows of `series` from
/// realized history.
Matrix one_step_predictions(const Matrix& coeffs, std::size_t d, const Matrix& series, std::size_t count);

/// Errors of a stacked estimate. pred_err = Σ‖ẑ_k − z_k‖₂ / Σ‖z_k‖₂ over the
/// last `horizon` rows of `series`, predicted one step ahead.
ErrorMetrics eval_errors(const Matrix& coeffs, const Matrix& truth, std::size_t d, const Matrix& series,
                         std::size_t horizon = 10);

}  // namespace swvar
