#pragma once

#include "swvar/common.hpp"

#include <complex>
#include <functional>
#include <optional>

namespace swvar {

/// Truncation policy for the causal coefficient series Ψ_0, Ψ_1, ...
struct Truncation {
    double tol = 1e-10;
    std::size_t max_terms = 100000;
};

/// Causal linear process x_t = Σ_j Ψ_j η_{t-j}, η ~ IID(0, Σ_η).
///
/// Either `generator` is set (VAR(1): x_t = A x_{t-1} + η_t, so Ψ_j = A^j) or
/// `coeff` produces Ψ_j on demand.
struct LinearProcessSpec {
    std::optional<Matrix> generator;
    std::function<Matrix(std::size_t)> coeff;
    std::optional<std::size_t> support;  // Ψ_j = 0 for j >= support (finite filters)
    Matrix sigma_eta;
    Truncation truncation;

    /// x_t = A x_{t-1} + η_t. For a VAR model in companion form pass A = B̃ᵀ.
    static LinearProcessSpec var1(Matrix A, Matrix sigma_eta, Truncation trunc = {});
    /// Finite filter Ψ_0..Ψ_m; Ψ_j = 0 afterwards.
    static LinearProcessSpec finite(std::vector<Matrix> coeffs, Matrix sigma_eta);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(sigma_eta.rows()); }
};

struct DependenceReport {
    double c_factor = 0.0;
    double rho = 0.0;
    double op_norm = 0.0;
    double m_upper = 0.0;
    double m_lower = 0.0;
    std::size_t truncation_terms = 0;
    double tail_bound = 0.0;
};

double spectral_radius(const Matrix& A);
double op_norm(const Matrix& A);

/// 𝖢(𝒜) = Σ_{i,j≥0} ‖Ψ_{i+j}‖₂‖Ψ_j‖₂, truncated once the geometric tail
/// estimate falls below `truncation.tol`. Populates c_factor, rho and
/// op_norm (of the generator, when present), truncation_terms, tail_bound.
DependenceReport dependence_factor(const LinearProcessSpec& spec);

/// Stationary covariance Σ of x_t = Bᵀ x_{t-1} + η_t, i.e. Σ = BᵀΣB + Σ_η.
Matrix solve_lyapunov(const Matrix& B, const Matrix& sigma_eta);

/// f(θ) = 𝒜(e^{-iθ}) Σ_η/(2π) 𝒜(e^{-iθ})*.
CMatrix spectral_density(const LinearProcessSpec& spec, double theta);

/// 𝒜(z) = Σ_j Ψ_j z^j evaluated on the truncated series.
CMatrix transfer_function(const LinearProcessSpec& spec, std::complex<double> z);

struct StabilityFactors {
    double m_upper = 0.0;  // ℳ(f_X): grid max of Λ_max(f(θ))
    double m_lower = 0.0;  // 𝔪(f_X): grid min of Λ_min(f(θ))
};

/// Uniform θ-grid approximation: the grid maximum is a lower bound for the
/// essential supremum and the grid minimum an upper bound for the infimum.
StabilityFactors stability_factors(const LinearProcessSpec& spec, std::size_t grid_size = 512);

struct MuBounds {
    double mu_min = 0.0;
    double mu_max = 0.0;
};

/// Grid extremes over |z| = 1 of the eigenvalues of 𝒜(z)*𝒜(z).
MuBounds mu_bounds(const LinearProcessSpec& spec, std::size_t grid_size = 512);

/// Everything at once for a VAR(1)-form generator.
DependenceReport dependence_report(const Matrix& A, const Matrix& sigma_eta, std::size_t grid_size = 512,
                                   Truncation trunc = {});

}  // namespace swvar
