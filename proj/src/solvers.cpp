#include "swvar/solvers.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <functional>

namespace swvar {

namespace {

constexpr int kPowerIters = 50;
constexpr int kConsecutive = 3;
constexpr int kMaxDoublings = 60;

double power_lambda_max(const Matrix& G) {
    if (G.rows() == 0) return 0.0;
    Vector v(G.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i % 7);
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < kPowerIters; ++it) {
        Vector w = G * v;
        const double nrm = w.norm();
        if (nrm == 0.0) return 0.0;
        est = v.dot(w);
        v = w / nrm;
    }
    return std::max(est, (G * v).norm());
}

/// f(x) = yy − 2cᵀx + xᵀHx on vectors; H applied by callback.
struct Quadratic {
    std::function<Vector(const Vector&)> apply;
    Vector c;
    double yy = 0.0;
    double lip = 0.0;  // estimate of λ_max(H)

    double value(const Vector& x, const Vector& hx) const { return yy - 2.0 * c.dot(x) + x.dot(hx); }
};

struct CoreResult {
    Vector x;
    std::vector<double> trace;
    std::size_t iters = 0;
    bool converged = false;
};

Vector prox_or_identity(const PenaltySpec& pen, const Vector& u, double tau) {
    return tau > 0.0 ? penalty_prox(pen, u, tau) : u;
}

double penalty_term(const PenaltySpec& pen, const Vector& x, double lambda) {
    return lambda > 0.0 ? lambda * penalty_value(pen, x) : 0.0;
}

/// Accelerated proximal gradient with function-value restart. Rejected
/// momentum steps are redone from the last iterate, so the recorded
/// objective never increases.
CoreResult fista_core(const Quadratic& q, const PenaltySpec& pen, double lambda, const SolverConfig& cfg, Vector x) {
    CoreResult out;
    double L = 2.0 * std::max(q.lip, 1e-12);
    if (cfg.step_rule == StepRule::Backtracking) L *= 0.5;
    Vector hx = q.apply(x);
    double F = q.value(x, hx) + penalty_term(pen, x, lambda);
    if (cfg.record_trace) out.trace.push_back(F);

    Vector y = x, hy = hx;
    double t = 1.0;
    int streak = 0;
    bool fresh = true;  // y == x (no momentum pending)
    auto residual_ok = [&](const Vector& xv, const Vector& hxv) {
        const Vector g = 2.0 * (hxv - q.c);
        const Vector z = prox_or_identity(pen, xv - g / L, lambda / L);
        return (xv - z).norm() / std::max(1.0, xv.norm()) < cfg.rel_tol;
    };

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        out.iters = it + 1;
        const Vector g = 2.0 * (hy - q.c);
        const double fy = q.value(y, hy);
        Vector z, hz;
        double fz = 0.0;
        for (int k = 0; k <= kMaxDoublings; ++k) {
            z = prox_or_identity(pen, y - g / L, lambda / L);
            hz = q.apply(z);
            fz = q.value(z, hz);
            const Vector dz = z - y;
            const double model = fy + g.dot(dz) + 0.5 * L * dz.squaredNorm();
            if (fz <= model + 1e-12 * std::max(1.0, std::abs(fy))) break;
            L *= 2.0;
        }
        const double Fz = fz + penalty_term(pen, z, lambda);
        if (!std::isfinite(Fz)) throw NumericalError("proximal gradient produced a non-finite objective");

        if (Fz > F && cfg.restart) {
            if (!fresh) {
                y = x;
                hy = hx;
                t = 1.0;
                fresh = true;
                continue;
            }
            // A plain proximal step from x failed to decrease: rounding floor.
            out.converged = residual_ok(x, hx);
            break;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        y = z + beta * (z - x);
        // H is linear, so H·y follows from H·z and H·x without another product.
        hy = hz + beta * (hz - hx);
        if (it % 64 == 63) hy = q.apply(y);
        x = std::move(z);
        hx = std::move(hz);
        t = t_next;
        fresh = beta == 0.0;

        const double change = std::abs(F - Fz) / std::max(1.0, std::abs(F));
        F = Fz;
        if (cfg.record_trace) out.trace.push_back(F);
        streak = change < cfg.rel_tol ? streak + 1 : 0;
        if (streak >= kConsecutive) {
            if (residual_ok(x, hx)) {
                out.converged = true;
                break;
            }
            streak = 0;
        }
    }
    if (!cfg.record_trace) out.trace.push_back(F);
    out.x = std::move(x);
    return out;
}

bool fit_jointly(const PenaltySpec& pen, std::size_t q, std::size_t r) {
    if (pen.is_matrix_penalty()) return true;
    const auto fixed = pen.fixed_dimension();
    return fixed && *fixed != q && *fixed == q * r;
}

Vector soft(const Vector& u, double tau) {
    return u.unaryExpr([tau](double x) { return x > tau ? x - tau : (x < -tau ? x + tau : 0.0); });
}

}  // namespace

void SolverConfig::validate() const {
    if (max_iters < 1) throw ParameterError("max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
}

GramData GramData::from(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows()) throw StructuralError("X and Y row counts differ");
    if (X.rows() == 0) throw InsufficientDataError("least squares needs at least one row");
    require_finite(X, "design");
    require_finite(Y, "response");
    const double n = static_cast<double>(X.rows());
    GramData d;
    d.G = (X.transpose() * X) / n;
    d.C = (X.transpose() * Y) / n;
    d.yy = Y.colwise().squaredNorm().transpose() / n;
    d.lip = power_lambda_max(d.G);
    return d;
}

FitResult fista_fit(const Matrix& X, const Matrix& Y, const PenaltySpec& penalty, double lambda,
                    const SolverConfig& cfg) {
    return fista_fit_gram(GramData::from(X, Y), penalty, lambda, cfg);
}

FitResult fista_fit_gram(const GramData& data, const PenaltySpec& penalty, double lambda, const SolverConfig& cfg,
                         const Matrix* warm) {
    cfg.validate();
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and >= 0");
    const auto q = static_cast<std::size_t>(data.G.rows());
    const auto r = static_cast<std::size_t>(data.C.cols());
    if (warm && (warm->rows() != data.G.rows() || warm->cols() != data.C.cols())) {
        throw StructuralError("warm start has the wrong shape");
    }
    FitResult res;
    res.lambda_used = lambda;
    res.coeffs = Matrix::Zero(data.G.rows(), data.C.cols());

    if (fit_jointly(penalty, q, r)) {
        penalty.validate(q * r);
        const Matrix& G = data.G;
        const auto rows = data.G.rows();
        const auto cols = data.C.cols();
        Quadratic quad;
        quad.apply = [&G, rows, cols](const Vector& v) -> Vector {
            const Matrix m = G * Eigen::Map<const Matrix>(v.data(), rows, cols);
            return Eigen::Map<const Vector>(m.data(), m.size());
        };
        quad.c = Eigen::Map<const Vector>(data.C.data(), data.C.size());
        quad.yy = data.yy.sum();
        quad.lip = data.lip;
        Vector x0 = warm ? Vector(Eigen::Map<const Vector>(warm->data(), warm->size())) : Vector::Zero(quad.c.size());
        CoreResult core = fista_core(quad, penalty, lambda, cfg, std::move(x0));
        res.coeffs = Eigen::Map<const Matrix>(core.x.data(), rows, cols);
        res.objective_trace = std::move(core.trace);
        res.iters = core.iters;
        res.converged = core.converged;
        return res;
    }

    penalty.validate(q);
    std::vector<CoreResult> cores(r);
    parallel_for(r, cfg.threads, [&](std::size_t j) {
        const auto col = static_cast<Eigen::Index>(j);
        Quadratic quad;
        quad.apply = [&data](const Vector& v) -> Vector { return data.G * v; };
        quad.c = data.C.col(col);
        quad.yy = data.yy(col);
        quad.lip = data.lip;
        Vector x0 = warm ? Vector(warm->col(col)) : Vector::Zero(static_cast<Eigen::Index>(q));
        cores[j] = fista_core(quad, penalty, lambda, cfg, std::move(x0));
    });
    std::size_t longest = 0;
    res.converged = true;
    for (std::size_t j = 0; j < r; ++j) {
        res.coeffs.col(static_cast<Eigen::Index>(j)) = cores[j].x;
        res.iters = std::max(res.iters, cores[j].iters);
        res.converged = res.converged && cores[j].converged;
        longest = std::max(longest, cores[j].trace.size());
    }
    res.objective_trace.assign(longest, 0.0);
    for (const auto& c : cores) {
        for (std::size_t i = 0; i < longest; ++i) res.objective_trace[i] += c.trace[std::min(i, c.trace.size() - 1)];
    }
    return res;
}

FitResult ols_fit(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows()) throw StructuralError("X and Y row counts differ");
    if (X.rows() == 0) throw InsufficientDataError("least squares needs at least one row");
    require_finite(X, "design");
    require_finite(Y, "response");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(X);
    FitResult res;
    res.coeffs = cod.solve(Y);
    res.objective_trace = {(Y - X * res.coeffs).squaredNorm() / static_cast<double>(X.rows())};
    res.iters = 1;
    res.converged = true;
    return res;
}

FitResult dantzig_l1(const Matrix& X, const Vector& y, double lambda, const SolverConfig& cfg) {
    cfg.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("Dantzig selector needs lambda > 0");
    if (X.rows() != y.size()) throw StructuralError("X and y lengths differ");
    if (X.rows() == 0) throw InsufficientDataError("Dantzig selector needs at least one row");
    require_finite(X, "design");
    require_finite(y, "response");
    const double n = static_cast<double>(X.rows());
    const Matrix G = X.transpose() * X / n;
    const Vector c = X.transpose() * y / n;
    const auto q = G.rows();

    FitResult res;
    res.lambda_used = lambda;
    if (c.lpNorm<Eigen::Infinity>() <= lambda) {
        res.coeffs = Matrix::Zero(q, 1);
        res.objective_trace = {0.0};
        res.converged = true;
        return res;
    }
    // min ‖β‖₁ + I_box(w)  s.t.  Gβ − w = c, scaled dual u, penalty ρ.
    const double g_norm = std::max(power_lambda_max(G), 1e-12);
    const double mu = 1.01 * g_norm * g_norm;
    double rho = 1.0 / lambda;
    Vector beta = Vector::Zero(q), w = -c.cwiseMax(-lambda).cwiseMin(lambda), u = Vector::Zero(q);
    Vector gb = Vector::Zero(q);
    const double tol = cfg.rel_tol * std::max(1.0, c.lpNorm<Eigen::Infinity>());
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        res.iters = it + 1;
        const Vector v = w + c - u;
        const Vector beta_prev = beta;
        beta = soft(beta - G * (gb - v) / mu, 1.0 / (rho * mu));
        gb = G * beta;
        const Vector w_prev = w;
        w = (gb - c + u).cwiseMax(-lambda).cwiseMin(lambda);
        const Vector r = gb - w - c;
        u += r;
        if (cfg.record_trace) res.objective_trace.push_back(beta.lpNorm<1>());
        const double primal = r.lpNorm<Eigen::Infinity>();
        const double dual = rho * (G * (w - w_prev)).lpNorm<Eigen::Infinity>();
        const double step = (beta - beta_prev).lpNorm<Eigen::Infinity>();
        if (primal < tol && step < tol && dual < tol * rho) {
            res.converged = true;
            break;
        }
        if (it % 10 == 9) {
            // Residual balancing keeps the scaled dual consistent with ρ.
            if (primal > 10.0 * dual) {
                rho *= 2.0;
                u /= 2.0;
            } else if (dual > 10.0 * primal) {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }
    if (!cfg.record_trace) res.objective_trace = {beta.lpNorm<1>()};
    res.coeffs = beta;
    const double slack = (c - gb).lpNorm<Eigen::Infinity>() - lambda;
    res.converged = res.converged && slack <= 1e-6;
    return res;
}

FitResult lowrank_sparse_fit(const Matrix& X, const Matrix& Y, double lambda_nuc, double mu_sparse, double alpha_box,
                             const SolverConfig& cfg) {
    cfg.validate();
    if (X.rows() != Y.rows()) throw StructuralError("X and Y row counts differ");
    if (X.cols() != Y.cols()) throw StructuralError("low-rank plus sparse fit needs a square coefficient (VAR(1))");
    if (!(lambda_nuc >= 0.0) || !(mu_sparse >= 0.0)) throw ParameterError("penalty levels must be >= 0");
    const double p = static_cast<double>(Y.cols());
    if (!(alpha_box >= 1.0 && alpha_box <= p)) throw ParameterError("alpha must lie in [1, p]");
    require_finite(X, "design");
    require_finite(Y, "response");
    const Matrix G = X.transpose() * X;
    const Matrix C = X.transpose() * Y;
    const double yy = Y.squaredNorm();
    const double box = alpha_box / p;
    const auto k = G.rows();

    auto smooth = [&](const Matrix& B, const Matrix& GB) { return 0.5 * (yy - 2.0 * (B.cwiseProduct(C)).sum() + (B.cwiseProduct(GB)).sum()); };
    auto nuclear = [](const Matrix& M) { return Eigen::JacobiSVD<Matrix>(M).singularValues().sum(); };
    auto objective = [&](const Matrix& Lm, const Matrix& Sm, const Matrix& GB) {
        return smooth(Lm + Sm, GB) + lambda_nuc * nuclear(Lm) + mu_sparse * Sm.cwiseAbs().sum();
    };
    auto prox_L = [&](const Matrix& M, double tau) -> Matrix {
        Matrix out = M;
        if (tau > 0.0) {
            Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const Vector sv = (svd.singularValues().array() - tau).max(0.0).matrix();
            out = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
        }
        return out.cwiseMax(-box).cwiseMin(box);
    };
    auto prox_S = [&](const Matrix& M, double tau) -> Matrix {
        return M.unaryExpr([tau](double x) { return x > tau ? x - tau : (x < -tau ? x + tau : 0.0); });
    };

    // Joint gradient in (L, S) has Lipschitz constant 2·λ_max(G).
    double lip = 2.0 * std::max(power_lambda_max(G), 1e-12);
    Matrix Lx = Matrix::Zero(k, k), Sx = Matrix::Zero(k, k);
    Matrix GBx = Matrix::Zero(k, k);
    double F = objective(Lx, Sx, GBx);
    FitResult res;
    res.lambda_used = lambda_nuc;
    if (cfg.record_trace) res.objective_trace.push_back(F);
    Matrix Ly = Lx, Sy = Sx;
    double t = 1.0;
    bool fresh = true;
    int streak = 0;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        res.iters = it + 1;
        const Matrix By = Ly + Sy;
        const Matrix GBy = G * By;
        const Matrix grad = GBy - C;
        const double fy = smooth(By, GBy);
        Matrix Lz, Sz, GBz;
        double fz = 0.0;
        for (int d = 0; d <= kMaxDoublings; ++d) {
            Lz = prox_L(Ly - grad / lip, lambda_nuc / lip);
            Sz = prox_S(Sy - grad / lip, mu_sparse / lip);
            const Matrix Bz = Lz + Sz;
            GBz = G * Bz;
            fz = smooth(Bz, GBz);
            const double dist = (Lz - Ly).squaredNorm() + (Sz - Sy).squaredNorm();
            const double model = fy + grad.cwiseProduct(Lz - Ly).sum() + grad.cwiseProduct(Sz - Sy).sum() + 0.5 * lip * dist;
            if (fz <= model + 1e-12 * std::max(1.0, std::abs(fy))) break;
            lip *= 2.0;
        }
        const double Fz = fz + lambda_nuc * nuclear(Lz) + mu_sparse * Sz.cwiseAbs().sum();
        if (!std::isfinite(Fz)) throw NumericalError("low-rank plus sparse iteration produced a non-finite objective");
        if (Fz > F) {
            if (!fresh && cfg.restart) {
                Ly = Lx;
                Sy = Sx;
                t = 1.0;
                fresh = true;
                continue;
            }
            // The clipped step no longer decreases the objective: stop here.
            res.converged = streak > 0 || std::abs(Fz - F) <= cfg.rel_tol * std::max(1.0, std::abs(F));
            break;
        }
        const double t_next = cfg.restart ? 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)) : 1.0;
        const double beta = (t - 1.0) / t_next;
        Ly = Lz + beta * (Lz - Lx);
        Sy = Sz + beta * (Sz - Sx);
        // Keep the extrapolated low-rank point inside the box.
        Ly = Ly.cwiseMax(-box).cwiseMin(box);
        Lx = std::move(Lz);
        Sx = std::move(Sz);
        GBx = std::move(GBz);
        t = t_next;
        fresh = beta == 0.0;
        const double change = std::abs(F - Fz) / std::max(1.0, std::abs(F));
        F = Fz;
        if (cfg.record_trace) res.objective_trace.push_back(F);
        streak = change < cfg.rel_tol ? streak + 1 : 0;
        if (streak >= kConsecutive) {
            res.converged = true;
            break;
        }
    }
    if (!cfg.record_trace) res.objective_trace = {F};
    res.low_rank = Lx;
    res.sparse = Sx;
    res.coeffs = Lx + Sx;
    return res;
}

SampleSizeThresholds sample_size_theory(double width_unit_ball_sq, double width_cone_sq, double gamma2, double K,
                                        double c_factor, double lambda_min_sigma, double phi_bar, double c_abs) {
    if (!(gamma2 > 0.0 && gamma2 <= 2.0)) throw ParameterError("gamma2 must lie in (0, 2]");
    if (!(lambda_min_sigma > 0.0)) throw ParameterError("Λ_min(Σ_X) must be positive");
    if (!(c_abs > 0.0)) throw ParameterError("absolute constant must be positive");
    if (width_unit_ball_sq < 0.0 || width_cone_sq < 0.0) throw ParameterError("widths must be nonnegative");
    SampleSizeThresholds out;
    out.n_dev = std::pow(c_abs * width_unit_ball_sq, 4.0 / gamma2 - 1.0);
    const double dep = 16.0 * phi_bar * phi_bar * std::pow(K, 4) * c_factor * c_factor /
                       (lambda_min_sigma * lambda_min_sigma);
    out.n_re = std::pow(c_abs * std::max(1.0, dep) * width_cone_sq, 2.0 / gamma2);
    return out;
}

double lasso_lambda_max(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows() || X.rows() == 0) throw StructuralError("X and Y row counts differ or are zero");
    return (2.0 * X.transpose() * Y / static_cast<double>(X.rows())).lpNorm<Eigen::Infinity>();
}

}  // namespace swvar
