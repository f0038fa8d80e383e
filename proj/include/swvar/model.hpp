#pragma once

#include "swvar/common.hpp"

#include <optional>
#include <vector>

namespace swvar {

/// VAR(d) process Z_t = B_1ᵀ Z_{t-1} + ... + B_dᵀ Z_{t-d} + ε_t.
///
/// Coefficients are stored as B_k (not B_kᵀ): entry (r, c) of B_k is the
/// effect of component r at lag k on component c.
struct VarModel {
    std::vector<Matrix> coeffs;

    std::size_t lag() const noexcept { return coeffs.size(); }
    std::size_t dim() const noexcept { return coeffs.empty() ? 0 : static_cast<std::size_t>(coeffs.front().rows()); }

    /// Throws StructuralError unless there is at least one lag and every B_k is p×p.
    void validate() const;

    /// [B_1; B_2; ...; B_d], shape dp×p. This is the coefficient layout of the
    /// per-component regressions produced by build_design.
    Matrix stacked() const;

    static VarModel from_stacked(const Matrix& stacked, std::size_t d);
};

/// VAR-X process
///   x_t = Σ_i A_iᵀ x_{t-i} + Σ_j B_jᵀ z_{t-j} + ε_t,   z_t = η_t,
/// where the exogenous process has zero dynamics.
struct VarxModel {
    VarModel base;                  // A_1..A_{d_A}
    std::vector<Matrix> exo_coeffs; // B_1..B_{d_B}, each p×p

    std::size_t endo_lag() const noexcept { return base.lag(); }
    std::size_t exo_lag() const noexcept { return exo_coeffs.size(); }
    std::size_t dim() const noexcept { return base.dim(); }

    void validate() const;

    /// [A_1; ...; A_{d_A}; B_1; ...; B_{d_B}], shape p(d_A+d_B)×p.
    Matrix stacked() const;
};

/// Observations Z_0..Z_T as rows of `data` ((T+1)×p). `exo` holds z_0..z_T
/// when present; `innovations` records the noise that generated each row
/// (simulation output only).
struct Trajectory {
    Matrix data;
    std::optional<Matrix> exo;
    std::optional<Matrix> innovations;

    std::size_t length() const noexcept { return data.rows() == 0 ? 0 : static_cast<std::size_t>(data.rows()) - 1; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(data.cols()); }

    void validate() const;
};

/// Per-component regression data: Y = X·B_stacked + E with
///   row i of X = [Z_{i+d-2}ᵀ, Z_{i+d-3}ᵀ, ..., Z_{i-1}ᵀ]  (most recent lag first)
///   row i of Y = Z_{i+d-1}ᵀ,                       i = 1..n,  n = T-d+1.
struct RegressionData {
    Matrix X;
    Matrix Y;
    std::size_t n() const noexcept { return static_cast<std::size_t>(X.rows()); }
};

/// Companion matrix B̃ᵀ: top block row [B_1ᵀ ... B_dᵀ], identity blocks on the
/// block sub-diagonal, zeros elsewhere. Stacked state evolves as
/// Z̃_t = B̃ᵀ Z̃_{t-1} + ε̃_t.
Matrix build_companion(const VarModel& model);

/// Companion of the VAR-X model for the state
///   y_t = [x_t; ...; x_{t-d_A+1}; z_t; ...; z_{t-d_B+1}].
/// The top block row is [A_1ᵀ..A_{d_A}ᵀ  B_1ᵀ..B_{d_B}ᵀ]; endogenous and
/// exogenous shifts are identity blocks; the z_t block row is zero.
Matrix build_varx_companion(const VarxModel& model);

RegressionData build_design(const Trajectory& traj, std::size_t d);

/// VAR-X design: rows t = t0..T with t0 = max(d_A, d_B), regressors
/// [x_{t-1}ᵀ..x_{t-d_A}ᵀ, z_{t-1}ᵀ..z_{t-d_B}ᵀ], response x_tᵀ.
RegressionData build_varx_design(const Trajectory& traj, std::size_t d_a, std::size_t d_b);

}  // namespace swvar
