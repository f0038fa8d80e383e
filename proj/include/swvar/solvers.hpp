#pragma once

#include "swvar/common.hpp"
#include "swvar/penalties.hpp"

#include <optional>
#include <vector>

namespace swvar {

enum class StepRule { Fixed, Backtracking };

struct SolverConfig {
    std::size_t max_iters = 50000;
    double rel_tol = 1e-8;
    StepRule step_rule = StepRule::Fixed;
    bool restart = true;
    bool record_trace = true;
    /// Workers for independent response columns; results do not depend on it.
    unsigned threads = 1;

    void validate() const;
};

struct FitResult {
    Matrix coeffs;
    std::vector<double> objective_trace;
    std::size_t iters = 0;
    bool converged = false;
    double lambda_used = 0.0;
    /// Low-rank and sparse parts for composite fits.
    std::optional<Matrix> low_rank;
    std::optional<Matrix> sparse;
};

/// Penalized least squares (1/n)‖Y − Xβ‖²_F + λ·R(β).
///
/// When the penalty is defined on a single column (its dimension equals
/// X.cols(), or it has no fixed dimension), every response column is fitted
/// independently; the trace then holds the summed objective. Nuclear and
/// Own/Other penalties act on vec(β) (column-major) and are fitted jointly.
FitResult fista_fit(const Matrix& X, const Matrix& Y, const PenaltySpec& penalty, double lambda,
                    const SolverConfig& cfg = {});

/// Sufficient statistics of a least-squares problem: G = XᵀX/n, C = XᵀY/n and
/// the per-column ‖Y_j‖²/n. Shared across λ paths.
struct GramData {
    Matrix G;
    Matrix C;
    Vector yy;
    double lip = 0.0;  // power-iteration estimate of λ_max(G)

    static GramData from(const Matrix& X, const Matrix& Y);
};

/// Same objective as fista_fit from precomputed statistics; `warm` is an
/// optional starting point.
FitResult fista_fit_gram(const GramData& data, const PenaltySpec& penalty, double lambda, const SolverConfig& cfg = {},
                         const Matrix* warm = nullptr);

/// Minimum-norm least squares via complete orthogonal decomposition.
FitResult ols_fit(const Matrix& X, const Matrix& Y);

/// ℓ1 Dantzig selector: min ‖β‖₁ s.t. ‖Xᵀ(y − Xβ)/n‖_∞ <= λ, by linearized ADMM.
FitResult dantzig_l1(const Matrix& X, const Vector& y, double lambda, const SolverConfig& cfg = {});

/// ½‖Y − X(L + S)‖²_F + λ‖L‖_* + μ‖S‖₁ with ‖L‖_max <= α/p (p = Y.cols()).
/// Proximal gradient on (L, S): singular-value thresholding followed by
/// clipping for L, soft thresholding for S. Clipping after thresholding is an
/// inexact proximal step for the constrained nuclear term; steps are accepted
/// only when the objective does not increase.
FitResult lowrank_sparse_fit(const Matrix& X, const Matrix& Y, double lambda_nuc, double mu_sparse, double alpha_box,
                             const SolverConfig& cfg = {});

struct SampleSizeThresholds {
    double n_dev = 0.0;
    double n_re = 0.0;
};

/// n_dev = (c·w²)^{4/γ₂−1};
/// n_RE = (c·max(1, 16Φ̄²K⁴𝖢²/Λ_min²)·w²_cone)^{2/γ₂}.
SampleSizeThresholds sample_size_theory(double width_unit_ball_sq, double width_cone_sq, double gamma2, double K,
                                        double c_factor, double lambda_min_sigma, double phi_bar,
                                        double c_abs = 1.0);

/// λ above which the ℓ1 LASSO solution is zero: ‖2XᵀY/n‖_∞ (per column max).
double lasso_lambda_max(const Matrix& X, const Matrix& Y);

}  // namespace swvar
