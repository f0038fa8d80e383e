#pragma once
// Reference implementations used only by tests. None of them call into the
// library's penalty or solver code.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Golden-section minimum of a unimodal f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline double l1(const Vec& v) { return v.cwiseAbs().sum(); }

inline double owl_value(const Vec& v, const std::vector<double>& w) {
    std::vector<double> a(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
    std::sort(a.begin(), a.end(), std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i];
    return s;
}

/// Separable scalar prox of tau|x| by direct 1-D minimization.
inline Vec prox_l1(const Vec& u, double tau) {
    Vec x(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double ui = u[i];
        const double r = std::abs(ui) + 1.0;
        x[i] = golden_min([&](double t) { return 0.5 * (t - ui) * (t - ui) + tau * std::abs(t); }, -r, r);
    }
    return x;
}

/// Group prox: by rotational symmetry the solution is t·u_g/‖u_g‖; t found by 1-D search.
inline Vec prox_group(const Vec& u, const std::vector<std::vector<std::size_t>>& groups,
                      const std::vector<double>& w, double tau) {
    Vec x = Vec::Zero(u.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double nrm = 0.0;
        for (auto i : groups[g]) nrm += u[i] * u[i];
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        const double t = golden_min([&](double s) { return 0.5 * (s - nrm) * (s - nrm) + tau * w[g] * s; }, 0.0, nrm);
        for (auto i : groups[g]) x[i] = t * u[i] / nrm;
    }
    return x;
}

/// OWL prox by exhaustive search over consecutive block structures of |u|↓.
/// The optimum is block-constant on |u|↓ with block value max(0, block mean of
/// |u|↓ − tau·w); every candidate is feasible, so the best true objective wins.
inline Vec prox_owl(const Vec& u, const std::vector<double>& w, double tau) {
    const auto q = static_cast<std::size_t>(u.size());
    std::vector<std::size_t> idx(q);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(u[a]) > std::abs(u[b]); });
    std::vector<double> z(q);
    for (std::size_t i = 0; i < q; ++i) z[i] = std::abs(u[idx[i]]) - tau * w[i];

    Vec best;
    double best_obj = INFINITY;
    const std::size_t masks = q > 0 ? (std::size_t{1} << (q - 1)) : 1;
    for (std::size_t mask = 0; mask < masks; ++mask) {
        std::vector<double> y(q);
        std::size_t start = 0;
        for (std::size_t i = 0; i < q; ++i) {
            const bool cut = i + 1 == q || ((mask >> i) & 1u);
            if (!cut) continue;
            double mean = 0.0;
            for (std::size_t t = start; t <= i; ++t) mean += z[t];
            mean /= static_cast<double>(i + 1 - start);
            for (std::size_t t = start; t <= i; ++t) y[t] = std::max(0.0, mean);
            start = i + 1;
        }
        Vec x = Vec::Zero(static_cast<Eigen::Index>(q));
        for (std::size_t i = 0; i < q; ++i) x[idx[i]] = (u[idx[i]] < 0 ? -1.0 : 1.0) * y[i];
        const double obj = 0.5 * (x - u).squaredNorm() + tau * owl_value(x, w);
        if (obj < best_obj) {
            best_obj = obj;
            best = x;
        }
    }
    return best;
}

/// Nuclear prox through the eigendecomposition of UᵀU instead of an SVD.
inline Mat prox_nuclear(const Mat& U, double tau) {
    Eigen::SelfAdjointEigenSolver<Mat> es(U.transpose() * U);
    const Mat& V = es.eigenvectors();
    Vec scale(V.cols());
    for (Eigen::Index i = 0; i < V.cols(); ++i) {
        const double s = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
        scale[i] = s > 1e-12 ? std::max(0.0, s - tau) / s : 0.0;
    }
    return U * V * scale.asDiagonal() * V.transpose();
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

/// Projection onto {z : ‖z_S‖₂ <= r for every |S| = k} (the k-support dual
/// ball) by Dykstra's algorithm over the cylinder sets.
inline Vec project_topk_ball_dykstra(const Vec& y, std::size_t k, double r, int sweeps = 200000) {
    std::vector<std::vector<std::size_t>> sets;
    subsets(static_cast<std::size_t>(y.size()), k, sets);
    std::vector<Vec> inc(sets.size(), Vec::Zero(y.size()));
    Vec x = y;
    for (int s = 0; s < sweeps; ++s) {
        const Vec before = x;
        for (std::size_t j = 0; j < sets.size(); ++j) {
            const Vec z = x + inc[j];
            Vec p = z;
            double nrm = 0.0;
            for (auto i : sets[j]) nrm += z[i] * z[i];
            nrm = std::sqrt(nrm);
            if (nrm > r) for (auto i : sets[j]) p[i] = z[i] * r / nrm;
            inc[j] = z - p;
            x = p;
        }
        if ((x - before).lpNorm<Eigen::Infinity>() < 1e-14) break;
    }
    return x;
}

inline Vec prox_ksupport(const Vec& u, std::size_t k, double tau) {
    return u - tau * project_topk_ball_dykstra(u / tau, k, 1.0);
}

/// k-support norm from the variational form ‖v‖² = min Σ v_i²/θ_i over
/// 0 < θ_i <= 1, Σθ_i <= k. At the optimum θ_i = min(1, |v_i|/√ν) for a
/// scalar ν fixed by the budget; ν is found by bisection.
inline double ksupport_value(const Vec& v, std::size_t k) {
    const Vec a = v.cwiseAbs();
    std::size_t nnz = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) nnz += a[i] > 0.0;
    if (nnz <= k) return v.norm();
    auto budget = [&](double s) {
        double t = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) t += std::min(1.0, a[i] / s);
        return t;
    };
    double lo = 1e-300, hi = a.maxCoeff() * 1e6 + 1.0;
    for (int it = 0; it < 3000 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (budget(mid) > static_cast<double>(k) ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    double val = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        const double th = std::min(1.0, a[i] / s);
        val += a[i] * a[i] / th;
    }
    return std::sqrt(val);
}

/// Cyclic coordinate descent for (1/n)‖y − Xb‖² + λ‖b‖₁.
inline Vec lasso_cd(const Mat& X, const Vec& y, double lambda, long iters = 1000000) {
    const double n = static_cast<double>(X.rows());
    Vec b = Vec::Zero(X.cols());
    Vec r = y;
    for (long it = 0; it < iters; ++it) {
        double change = 0.0;
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            const double a = X.col(j).squaredNorm() / n;
            const double rho = X.col(j).dot(r) / n + a * b[j];
            const double nb = (rho > lambda / 2 ? rho - lambda / 2 : rho < -lambda / 2 ? rho + lambda / 2 : 0.0) / a;
            r -= X.col(j) * (nb - b[j]);
            change = std::max(change, std::abs(nb - b[j]));
            b[j] = nb;
        }
        if (change < 1e-15) break;
    }
    return b;
}

/// Two-variable Dantzig selector by grid search (step h over [-R, R]²)
/// followed by successively finer local grids around the incumbent.
inline Vec dantzig_grid_2d(const Mat& X, const Vec& y, double lambda, double R, double h = 1e-3) {
    const double n = static_cast<double>(X.rows());
    const Mat G = X.transpose() * X / n;
    const Vec c = X.transpose() * y / n;
    auto feasible = [&](double a, double b) {
        const Vec beta = (Vec(2) << a, b).finished();
        return (c - G * beta).lpNorm<Eigen::Infinity>() <= lambda + 1e-12;
    };
    double ba = 0, bb = 0, best = INFINITY;
    auto scan = [&](double ca, double cb, double half, double step) {
        for (double a = ca - half; a <= ca + half + 1e-15; a += step) {
            for (double b = cb - half; b <= cb + half + 1e-15; b += step) {
                const double obj = std::abs(a) + std::abs(b);
                if (obj < best && feasible(a, b)) {
                    best = obj;
                    ba = a;
                    bb = b;
                }
            }
        }
    };
    scan(0.0, 0.0, R, h);
    for (double step = h / 10; step > 1e-9; step /= 10) {
        const double ca = ba, cb = bb;
        scan(ca, cb, 20 * step, step);
    }
    return (Vec(2) << ba, bb).finished();
}

}  // namespace oracle
