#include "swvar/pipeline.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace swvar {

namespace {

constexpr std::uint64_t kWidthSeed = 0x5eedULL;
constexpr std::size_t kWidthSamples = 500;

void check_sample(const Trajectory& traj, std::size_t d) {
    traj.validate();
    if (d < 1) throw ParameterError("lag order must be >= 1");
    if (traj.length() < d + kMinExtraSamples) {
        throw InsufficientDataError("need T >= d + " + std::to_string(kMinExtraSamples) + " (T = " +
                                    std::to_string(traj.length()) + ", d = " + std::to_string(d) + ")");
    }
}

FitResult fit_design(const RegressionData& data, const PenaltySpec& penalty, const LambdaRule& rule,
                     const SolverConfig& cfg) {
    const std::size_t q = static_cast<std::size_t>(data.X.cols());
    switch (rule.kind) {
        case LambdaRule::Kind::Fixed:
            return fista_fit(data.X, data.Y, penalty, rule.value, cfg);
        case LambdaRule::Kind::Theory:
            return fista_fit(data.X, data.Y, penalty, theory_lambda_value(rule.theory, penalty, data.n(), q), cfg);
        case LambdaRule::Kind::Validation: {
            const double center = theory_lambda_value(rule.theory, penalty, data.n(), q);
            const auto grid = validation_grid(rule, center, lambda_zero_threshold(data.X, data.Y, penalty));
            const auto sel = select_lambda_validation(data, penalty, grid, rule.holdout_fraction, cfg);
            return fista_fit(data.X, data.Y, penalty, sel.lambda, cfg);
        }
    }
    throw ParameterError("unknown lambda rule");
}

}  // namespace

std::vector<double> log_grid(double center, double span_decades, std::size_t size) {
    if (!(center > 0.0) || !std::isfinite(center)) throw ParameterError("grid center must be positive");
    if (size == 0) throw ParameterError("grid needs at least one point");
    if (!(span_decades >= 0.0)) throw ParameterError("grid span must be >= 0");
    std::vector<double> grid(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double frac = size == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(size - 1);
        grid[i] = center * std::pow(10.0, span_decades * (1.0 - 2.0 * frac));
    }
    return grid;
}

double lambda_zero_threshold(const Matrix& X, const Matrix& Y, const PenaltySpec& penalty) {
    if (X.rows() != Y.rows() || X.rows() == 0) throw StructuralError("X and Y row counts differ or are zero");
    const Matrix grad = 2.0 * X.transpose() * Y / static_cast<double>(X.rows());
    const auto q = static_cast<std::size_t>(grad.rows());
    const auto r = static_cast<std::size_t>(grad.cols());
    const auto fixed = penalty.fixed_dimension();
    if (penalty.is_matrix_penalty() || (fixed && *fixed != q && *fixed == q * r)) {
        return penalty_dual(penalty, Eigen::Map<const Vector>(grad.data(), grad.size()));
    }
    double best = 0.0;
    for (Eigen::Index j = 0; j < grad.cols(); ++j) best = std::max(best, penalty_dual(penalty, grad.col(j)));
    return best;
}

std::vector<double> validation_grid(const LambdaRule& rule, double center, double lambda_max) {
    double span = rule.span_decades;
    if (lambda_max > 0.0 && rule.floor_ratio > 0.0) {
        span = std::max(span, std::log10(center / (rule.floor_ratio * lambda_max)));
    }
    return log_grid(center, span, rule.grid_size);
}

double theory_lambda_value(const TheoryLambda& t, const PenaltySpec& penalty, std::size_t n, std::size_t q) {
    double width = 0.0;
    if (t.width) {
        width = *t.width;
    } else if (std::holds_alternative<penalty::L1>(penalty.variant)) {
        width = 2.0 * std::sqrt(std::log(2.0 * static_cast<double>(q)));
    } else {
        Rng rng(kWidthSeed);
        const std::size_t dim = penalty.fixed_dimension().value_or(q);
        width = gaussian_width_unit_ball(penalty, dim, kWidthSamples, rng).mean;
    }
    double phi_bar = 1.0;
    if (t.phi_bar) {
        phi_bar = *t.phi_bar;
    } else if (auto owl = std::get_if<penalty::Owl>(&penalty.variant)) {
        phi_bar = 1.0 / owl->weights.front();
    }
    return lambda_theory(width, n, t.K, t.c_factor, phi_bar, t.c_abs);
}

ValidationResult select_lambda_validation(const RegressionData& data, const PenaltySpec& penalty,
                                          const std::vector<double>& grid, double holdout_fraction,
                                          const SolverConfig& cfg) {
    if (grid.empty()) throw ParameterError("validation grid is empty");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) throw ParameterError("holdout fraction must lie in (0,1)");
    const auto n = static_cast<Eigen::Index>(data.n());
    const auto h = std::max<Eigen::Index>(1, std::lround(holdout_fraction * static_cast<double>(n)));
    if (n - h < 2) throw InsufficientDataError("validation split leaves fewer than 2 training rows");
    const Matrix Xt = data.X.topRows(n - h);
    const Matrix Yt = data.Y.topRows(n - h);
    const Matrix Xv = data.X.bottomRows(h);
    const Matrix Yv = data.Y.bottomRows(h);
    const GramData gram = GramData::from(Xt, Yt);

    ValidationResult out;
    out.grid = grid;
    std::sort(out.grid.begin(), out.grid.end(), std::greater<>());
    out.errors.resize(out.grid.size());
    Matrix warm;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        const FitResult fit = fista_fit_gram(gram, penalty, out.grid[i], cfg, i == 0 ? nullptr : &warm);
        warm = fit.coeffs;
        out.errors[i] = (Yv - Xv * fit.coeffs).squaredNorm();
        if (out.errors[i] < best) {
            best = out.errors[i];
            out.best_index = i;
        }
    }
    out.lambda = out.grid[out.best_index];
    return out;
}

FitResult fit_var(const Trajectory& traj, std::size_t d, const PenaltySpec& penalty, const LambdaRule& rule,
                  const SolverConfig& cfg) {
    check_sample(traj, d);
    return fit_design(build_design(traj, d), penalty, rule, cfg);
}

FitResult fit_varx(const Trajectory& traj, std::size_t d_a, std::size_t d_b, const LambdaRule& rule,
                   const SolverConfig& cfg, double exo_scale) {
    if (!traj.exo) throw StructuralError("VAR-X fit needs exogenous data");
    check_sample(traj, std::max(d_a, d_b));
    const RegressionData data = build_varx_design(traj, d_a, d_b);
    return fit_design(data, PenaltySpec::own_other(traj.dim(), d_a, d_b, exo_scale), rule, cfg);
}

FitResult fit_var_lowrank_sparse(const Trajectory& traj, double lambda_nuc, double mu, double alpha,
                                 const SolverConfig& cfg) {
    check_sample(traj, 1);
    const RegressionData data = build_design(traj, 1);
    return lowrank_sparse_fit(data.X, data.Y, lambda_nuc, mu, alpha, cfg);
}

LowRankSparseErrors lowrank_sparse_errors(const FitResult& fit, const Matrix& L_true, const Matrix& S_true) {
    if (!fit.low_rank || !fit.sparse) throw StructuralError("fit has no low-rank/sparse decomposition");
    if (fit.low_rank->rows() != L_true.rows() || fit.low_rank->cols() != L_true.cols() ||
        fit.sparse->rows() != S_true.rows() || fit.sparse->cols() != S_true.cols()) {
        throw StructuralError("decomposition shapes differ from the truth");
    }
    LowRankSparseErrors e;
    e.sparse_sq = (*fit.sparse - S_true).squaredNorm();
    e.low_rank_sq = (*fit.low_rank - L_true).squaredNorm();
    e.combined_sq = (fit.coeffs - (L_true + S_true)).squaredNorm();
    return e;
}

Matrix predict(const Matrix& coeffs, std::size_t d, const Matrix& history, std::size_t horizon) {
    const auto p = history.cols();
    const auto dd = static_cast<Eigen::Index>(d);
    if (d < 1 || coeffs.rows() != dd * p || coeffs.cols() != p) throw StructuralError("coefficients must be dp x p");
    if (history.rows() < dd) throw InsufficientDataError("history shorter than the lag order");
    Matrix path(dd + static_cast<Eigen::Index>(horizon), p);
    path.topRows(dd) = history.bottomRows(dd);
    for (Eigen::Index t = dd; t < path.rows(); ++t) {
        Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(p);
        for (Eigen::Index k = 0; k < dd; ++k) z.noalias() += path.row(t - 1 - k) * coeffs.middleRows(k * p, p);
        path.row(t) = z;
    }
    return path.bottomRows(static_cast<Eigen::Index>(horizon));
}

Matrix one_step_predictions(const Matrix& coeffs, std::size_t d, const Matrix& series, std::size_t count) {
    const auto p = series.cols();
    const auto dd = static_cast<Eigen::Index>(d);
    const auto c = static_cast<Eigen::Index>(count);
    if (d < 1 || coeffs.rows() != dd * p || coeffs.cols() != p) throw StructuralError("coefficients must be dp x p");
    if (series.rows() < c + dd) throw InsufficientDataError("series too short for the requested predictions");
    Matrix out(c, p);
    const Eigen::Index first = series.rows() - c;
    for (Eigen::Index i = 0; i < c; ++i) {
        const Eigen::Index t = first + i;
        Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(p);
        for (Eigen::Index k = 0; k < dd; ++k) z.noalias() += series.row(t - 1 - k) * coeffs.middleRows(k * p, p);
        out.row(i) = z;
    }
    return out;
}

ErrorMetrics eval_errors(const Matrix& coeffs, const Matrix& truth, std::size_t d, const Matrix& series,
                         std::size_t horizon) {
    if (coeffs.rows() != truth.rows() || coeffs.cols() != truth.cols()) {
        throw StructuralError("estimate and truth shapes differ");
    }
    if (horizon == 0) throw ParameterError("prediction horizon must be >= 1");
    ErrorMetrics m;
    const Matrix diff = coeffs - truth;
    m.frob_err = diff.norm();
    const double scale = truth.norm();
    m.rel_err = scale > 0.0 ? m.frob_err / scale : std::numeric_limits<double>::infinity();
    m.max_row_l2 = diff.colwise().norm().maxCoeff();
    const Matrix pred = one_step_predictions(coeffs, d, series, horizon);
    const Matrix actual = series.bottomRows(static_cast<Eigen::Index>(horizon));
    const double denom = actual.rowwise().norm().sum();
    const double numer = (pred - actual).rowwise().norm().sum();
    m.pred_err = denom > 0.0 ? numer / denom : std::numeric_limits<double>::infinity();
    return m;
}

}  // namespace swvar
