#include "swvar/dependence.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace swvar {

namespace {

/// Parlett-Reinsch diagonal balancing with powers of two (exact similarity).
Matrix balanced(Matrix A) {
    const Eigen::Index n = A.rows();
    constexpr double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double c = A.col(i).cwiseAbs().sum() - std::abs(A(i, i));
            const double r = A.row(i).cwiseAbs().sum() - std::abs(A(i, i));
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            double cc = c;
            const double s = c + r;
            while (cc < r / radix) {
                cc *= radix;
                f *= radix;
            }
            while (cc >= r * radix) {
                cc /= radix;
                f /= radix;
            }
            if ((cc + r / f) < 0.95 * s) {
                converged = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
    return A;
}

enum class StopRule { DependenceFactor, SingleSum };

struct Series {
    std::vector<double> norms;
    std::vector<Matrix> psi;
    double single_tail = 0.0;  // bound on Σ_{k>J} ‖Ψ_k‖₂
    double c_tail = 0.0;       // bound on the omitted part of the double sum
    double rho = std::numeric_limits<double>::quiet_NaN();
};

/// Expands Ψ_0, Ψ_1, ... until the tail estimate meets the rule. With a
/// generator the tail bound is rigorous (submultiplicativity); for a general
/// coefficient rule it extrapolates the largest of the last five norm ratios.
Series expand(const LinearProcessSpec& spec, StopRule rule, bool keep_matrices) {
    const auto p = static_cast<Eigen::Index>(spec.dim());
    if (spec.sigma_eta.rows() != spec.sigma_eta.cols()) throw StructuralError("Σ_η must be square");
    if (!(spec.truncation.tol > 0.0)) throw ParameterError("truncation tolerance must be positive");
    Series s;
    Matrix power;
    if (spec.generator) {
        const Matrix& A = *spec.generator;
        if (A.rows() != p || A.cols() != p) throw StructuralError("generator and Σ_η dimensions differ");
        s.rho = spectral_radius(A);
        if (!(s.rho < 1.0)) {
            throw StabilityError("process is not stable: spectral radius " + std::to_string(s.rho) + " >= 1");
        }
        power = Matrix::Identity(p, p);
    } else if (!spec.coeff) {
        throw StructuralError("linear process needs a generator or a coefficient rule");
    }

    const std::size_t max_terms = std::max<std::size_t>(spec.truncation.max_terms, 1);
    double partial_single = 0.0;
    std::size_t block = 0;  // first m >= 1 with ‖A^m‖ < 1
    for (std::size_t j = 0;; ++j) {
        if (spec.support && j >= *spec.support) {
            s.single_tail = 0.0;
            s.c_tail = 0.0;
            return s;
        }
        Matrix term = spec.generator ? power : spec.coeff(j);
        if (term.rows() != p || term.cols() != p) throw StructuralError("coefficient Ψ_j has wrong shape");
        const double nrm = op_norm(term);
        s.norms.push_back(nrm);
        partial_single += nrm;
        if (keep_matrices) s.psi.push_back(term);
        if (spec.generator) power = (*spec.generator) * power;

        const std::size_t J = s.norms.size();
        if (nrm == 0.0 && spec.generator) {
            // A^j = 0 implies every later power vanishes.
            s.single_tail = 0.0;
            s.c_tail = 0.0;
            return s;
        }
        if (spec.generator) {
            // ‖A^{j+m}‖ <= ‖A^j‖·‖A^m‖, so once q = ‖A^m‖ < 1 the omitted norms are
            // bounded by the last m computed ones times q/(1 − q).
            if (block == 0 && J > 1 && nrm < 1.0) block = J - 1;
            if (block > 0 && J >= 2 * block) {
                const double q = s.norms[block];
                double last = 0.0;
                for (std::size_t k = J - block; k < J; ++k) last += s.norms[k];
                const double tail = last * q / (1.0 - q);
                const double c_tail = partial_single * tail + tail * tail;
                const double crit = rule == StopRule::DependenceFactor ? c_tail : tail;
                if (crit < spec.truncation.tol) {
                    s.single_tail = tail;
                    s.c_tail = c_tail;
                    return s;
                }
            }
        } else if (J >= 6) {
            double ratio = 0.0;
            bool usable = true;
            for (std::size_t k = J - 6; k + 1 < J; ++k) {
                if (s.norms[k] == 0.0) {
                    if (s.norms[k + 1] != 0.0) usable = false;
                    continue;
                }
                ratio = std::max(ratio, s.norms[k + 1] / s.norms[k]);
            }
            if (usable && ratio < 1.0) {
                const double tail = nrm * ratio / (1.0 - ratio);
                const double c_tail = partial_single * tail + tail * tail;
                const double crit = rule == StopRule::DependenceFactor ? c_tail : tail;
                if (crit < spec.truncation.tol) {
                    s.single_tail = tail;
                    s.c_tail = c_tail;
                    return s;
                }
            }
        }
        if (J >= max_terms) {
            double partial = 0.0;
            double suffix = 0.0;
            for (std::size_t k = J; k-- > 0;) {
                suffix += s.norms[k];
                partial += s.norms[k] * suffix;
            }
            throw TruncationError("coefficient series did not reach tolerance within " + std::to_string(max_terms) +
                                      " terms",
                                  partial);
        }
    }
}

/// Σ_{j≤J} a_j Σ_{j≤k≤J} a_k.
double truncated_double_sum(const std::vector<double>& a) {
    double total = 0.0;
    double suffix = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) {
        suffix += a[k];
        total += a[k] * suffix;
    }
    return total;
}

CMatrix evaluate_series(const std::vector<Matrix>& psi, std::complex<double> z) {
    const auto p = psi.front().rows();
    CMatrix out = CMatrix::Zero(p, p);
    // Horner: Ψ_0 + z(Ψ_1 + z(Ψ_2 + ...)).
    for (std::size_t k = psi.size(); k-- > 0;) out = out * z + psi[k].cast<std::complex<double>>();
    return out;
}

double grid_angle(std::size_t k, std::size_t grid_size) {
    return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid_size);
}

}  // namespace

LinearProcessSpec LinearProcessSpec::var1(Matrix A, Matrix sigma_eta, Truncation trunc) {
    LinearProcessSpec spec;
    spec.generator = std::move(A);
    spec.sigma_eta = std::move(sigma_eta);
    spec.truncation = trunc;
    return spec;
}

LinearProcessSpec LinearProcessSpec::finite(std::vector<Matrix> coeffs, Matrix sigma_eta) {
    if (coeffs.empty()) throw StructuralError("finite filter needs at least Ψ_0");
    LinearProcessSpec spec;
    spec.support = coeffs.size();
    spec.coeff = [c = std::move(coeffs)](std::size_t j) { return c.at(j); };
    spec.sigma_eta = std::move(sigma_eta);
    return spec;
}

double spectral_radius(const Matrix& A) {
    if (A.rows() != A.cols()) throw StructuralError("spectral radius of a non-square matrix");
    if (A.size() == 0) return 0.0;
    require_finite(A, "spectral_radius");
    if (A.rows() == 1) return std::abs(A(0, 0));
    if (A.isZero(0.0)) return 0.0;
    Eigen::EigenSolver<Matrix> es(balanced(A), false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double op_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    require_finite(A, "op_norm");
    if (A.rows() == 1 || A.cols() == 1) return A.norm();
    if (std::min(A.rows(), A.cols()) <= 16) {
        Eigen::JacobiSVD<Matrix> svd(A);
        return svd.singularValues()(0);
    }
    const Matrix gram = A.rows() < A.cols() ? Matrix(A * A.transpose()) : Matrix(A.transpose() * A);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

DependenceReport dependence_factor(const LinearProcessSpec& spec) {
    const Series s = expand(spec, StopRule::DependenceFactor, false);
    DependenceReport r;
    r.c_factor = truncated_double_sum(s.norms);
    r.truncation_terms = s.norms.size();
    r.tail_bound = s.c_tail;
    if (spec.generator) {
        r.rho = s.rho;
        r.op_norm = op_norm(*spec.generator);
    }
    return r;
}

Matrix solve_lyapunov(const Matrix& B, const Matrix& sigma_eta) {
    if (B.rows() != B.cols() || sigma_eta.rows() != B.rows() || sigma_eta.cols() != B.rows()) {
        throw StructuralError("Lyapunov solve needs square B and matching Σ_η");
    }
    require_finite(B, "solve_lyapunov");
    const double rho = spectral_radius(B);
    if (!(rho < 1.0)) throw StabilityError("Lyapunov equation needs spectral radius < 1, got " + std::to_string(rho));

    // Doubling form of Σ = Σ_j (Bᵀ)^j Σ_η B^j: after k rounds the partial sum
    // covers 2^k terms.
    Matrix sigma = sigma_eta;
    Matrix power = B.transpose();
    for (int round = 0; round < 80; ++round) {
        const Matrix increment = power * sigma * power.transpose();
        sigma += increment;
        if (increment.norm() <= std::numeric_limits<double>::epsilon() * sigma.norm()) break;
        power = power * power;
        if (power.isZero(0.0)) break;
    }
    // A couple of plain fixed-point sweeps remove the doubling round-off.
    for (int sweep = 0; sweep < 2; ++sweep) sigma = B.transpose() * sigma * B + sigma_eta;
    return 0.5 * (sigma + sigma.transpose());
}

CMatrix transfer_function(const LinearProcessSpec& spec, std::complex<double> z) {
    const Series s = expand(spec, StopRule::SingleSum, true);
    return evaluate_series(s.psi, z);
}

CMatrix spectral_density(const LinearProcessSpec& spec, double theta) {
    const Series s = expand(spec, StopRule::SingleSum, true);
    const CMatrix a = evaluate_series(s.psi, std::polar(1.0, -theta));
    const CMatrix sigma = spec.sigma_eta.cast<std::complex<double>>() / (2.0 * std::numbers::pi);
    CMatrix f = a * sigma * a.adjoint();
    return 0.5 * (f + f.adjoint());
}

StabilityFactors stability_factors(const LinearProcessSpec& spec, std::size_t grid_size) {
    if (grid_size < 8) throw ParameterError("stability factor grid needs at least 8 points");
    const Series s = expand(spec, StopRule::SingleSum, true);
    const CMatrix sigma = spec.sigma_eta.cast<std::complex<double>>() / (2.0 * std::numbers::pi);
    StabilityFactors out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Eigen::SelfAdjointEigenSolver<CMatrix> es;
    for (std::size_t k = 0; k < grid_size; ++k) {
        const CMatrix a = evaluate_series(s.psi, std::polar(1.0, -grid_angle(k, grid_size)));
        CMatrix f = a * sigma * a.adjoint();
        f = 0.5 * (f + f.adjoint());
        es.compute(f, Eigen::EigenvaluesOnly);
        out.m_upper = std::max(out.m_upper, es.eigenvalues().maxCoeff());
        out.m_lower = std::min(out.m_lower, es.eigenvalues().minCoeff());
    }
    return out;
}

MuBounds mu_bounds(const LinearProcessSpec& spec, std::size_t grid_size) {
    if (grid_size < 8) throw ParameterError("mu grid needs at least 8 points");
    const Series s = expand(spec, StopRule::SingleSum, true);
    MuBounds out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Eigen::SelfAdjointEigenSolver<CMatrix> es;
    for (std::size_t k = 0; k < grid_size; ++k) {
        const CMatrix a = evaluate_series(s.psi, std::polar(1.0, -grid_angle(k, grid_size)));
        CMatrix g = a.adjoint() * a;
        g = 0.5 * (g + g.adjoint());
        es.compute(g, Eigen::EigenvaluesOnly);
        out.mu_max = std::max(out.mu_max, es.eigenvalues().maxCoeff());
        out.mu_min = std::min(out.mu_min, es.eigenvalues().minCoeff());
    }
    return out;
}

DependenceReport dependence_report(const Matrix& A, const Matrix& sigma_eta, std::size_t grid_size, Truncation trunc) {
    const auto spec = LinearProcessSpec::var1(A, sigma_eta, trunc);
    DependenceReport r = dependence_factor(spec);
    const auto sf = stability_factors(spec, grid_size);
    r.m_upper = sf.m_upper;
    r.m_lower = sf.m_lower;
    return r;
}

}  // namespace swvar
