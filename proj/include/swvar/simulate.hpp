#pragma once

#include "swvar/common.hpp"
#include "swvar/model.hpp"

#include <optional>
#include <utility>
#include <variant>

namespace swvar {

/// Innovation law: symmetrized Weibull with tail index `gamma2`, rescaled to
/// zero mean and standard deviation `scale`.
struct NoiseSpec {
    double gamma2 = 2.0;
    double scale = 1.0;
    std::size_t p = 1;

    void validate() const;

    /// Subweibull (ψ_γ Orlicz) norm of one coordinate:
    /// ‖scale·W/sd(W)‖_ψγ = scale·2^{1/γ}/√Γ(1+2/γ) for W symmetric Weibull(γ, 1).
    double subweibull_norm() const;
};

struct LowRankBlock {
    std::size_t rank = 3;
    double density_lo = 0.02;
    double density_hi = 0.04;
};

struct TransitionGenSpec {
    std::size_t p = 0;
    std::size_t sparsity = 0;  // nonzero count of the sparse generator
    double target_rho = 0.5;
    std::optional<LowRankBlock> low_rank;

    void validate() const;
};

/// n×p matrix of iid draws. Draw order is row-major; each entry consumes one
/// Weibull draw followed by one sign draw.
Matrix sample_subweibull(const NoiseSpec& spec, std::size_t n, Rng& rng);

/// Exactly `sparsity` Uniform(0,1) entries at uniformly chosen positions,
/// rescaled so the spectral radius equals `target_rho`.
Matrix gen_sparse_transition(const TransitionGenSpec& spec, Rng& rng);

struct LowRankSparse {
    Matrix L;
    Matrix S;
    Matrix B() const { return L + S; }
};

/// L = P·Q with Gaussian p×r and r×p factors, S sparse with Uniform(0,1)
/// entries at a density drawn from [density_lo, density_hi]; both scaled by a
/// common factor so ρ(L+S) = target_rho.
LowRankSparse gen_lowrank_sparse_transition(const TransitionGenSpec& spec, Rng& rng);

/// Rescales all lag matrices by a common positive scalar so that the
/// companion spectral radius equals `target_rho` (bisection, tol 1e-8 for
/// d > 1; exact division for d = 1).
VarModel rescale_to_radius(VarModel model, double target_rho);

struct SimulationOptions {
    std::size_t burn_in = 500;
    bool allow_unstable = false;
};

/// Returns Z_0..Z_T after discarding `burn_in` steps from a zero initial
/// state. The recorded innovations are attached to the trajectory.
Trajectory simulate_var(const VarModel& model, const NoiseSpec& noise, std::size_t T, Rng& rng,
                        SimulationOptions opts = {});

/// Deterministic recursion: rows of `initial` are Z_0..Z_{d-1}; row k of
/// `innovations` drives Z_{d+k}.
Trajectory propagate_var(const VarModel& model, const Matrix& initial, const Matrix& innovations);

/// VAR-X simulation; the exogenous series z_t are iid draws from `noise`.
Trajectory simulate_varx(const VarxModel& model, const NoiseSpec& noise, std::size_t T, Rng& rng,
                         SimulationOptions opts = {});

}  // namespace swvar
