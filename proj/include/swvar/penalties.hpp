#pragma once

#include "swvar/common.hpp"

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace swvar {

/// Penalty variants. Matrix-valued arguments are passed vectorized in
/// column-major order.
namespace penalty {

struct L1 {};

/// Σ_g w_g ‖v_g‖₂ over disjoint groups covering every index.
struct GroupL21 {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<double> weights;
};

/// Σ_i w_i |v|↓_i with w_1 >= ... >= w_q >= 0, w_1 > 0.
struct Owl {
    std::vector<double> weights;
};

/// Tightest convex gauge whose unit ball contains every k-sparse unit vector.
struct KSupport {
    std::size_t k = 1;
};

/// Sum of singular values of the rows×cols matrix.
struct Nuclear {
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// VAR-X Own/Other penalty on the stacked coefficient F = [A_1; ..; A_{d_A}; B_1; ..; B_{d_B}]
/// (p(d_A+d_B) rows, p columns). Groups: the diagonal of each A_i (weight
/// √p), the off-diagonal of each A_i (weight √(p(p-1))), and for each B_j and
/// exogenous component k the row k of B_j (weight √p · exo_scale).
struct OwnOther {
    std::size_t p = 0;
    std::size_t d_a = 1;
    std::size_t d_b = 0;
    double exo_scale = 1.0;
};

}  // namespace penalty

using PenaltyVariant =
    std::variant<penalty::L1, penalty::GroupL21, penalty::Owl, penalty::KSupport, penalty::Nuclear, penalty::OwnOther>;

struct PenaltySpec {
    PenaltyVariant variant;

    static PenaltySpec l1() { return {penalty::L1{}}; }
    static PenaltySpec group(std::vector<std::vector<std::size_t>> groups, std::vector<double> weights = {});
    static PenaltySpec owl(std::vector<double> weights) { return {penalty::Owl{std::move(weights)}}; }
    static PenaltySpec ksupport(std::size_t k) { return {penalty::KSupport{k}}; }
    static PenaltySpec nuclear(std::size_t rows, std::size_t cols) { return {penalty::Nuclear{rows, cols}}; }
    static PenaltySpec own_other(std::size_t p, std::size_t d_a, std::size_t d_b, double exo_scale = 1.0) {
        return {penalty::OwnOther{p, d_a, d_b, exo_scale}};
    }

    std::string name() const;

    /// Vector length implied by the variant, if any (L1 and KSupport accept any length).
    std::optional<std::size_t> fixed_dimension() const;

    /// True when the penalty couples entries of different response columns,
    /// so a multi-response fit cannot be split column by column.
    bool is_matrix_penalty() const;

    /// Throws on malformed parameters or when `dim` conflicts with the variant.
    void validate(std::size_t dim) const;
};

/// Own/Other expressed as an explicit weighted group penalty.
penalty::GroupL21 own_other_groups(const penalty::OwnOther& oo);

double penalty_value(const PenaltySpec& spec, const Vector& v);
double penalty_dual(const PenaltySpec& spec, const Vector& u);

/// argmin_x ½‖x − u‖² + tau·value(x).
Vector penalty_prox(const PenaltySpec& spec, const Vector& u, double tau);

/// Euclidean projection onto {u : dual(u) <= radius}. Available for L1,
/// GroupL21 (and Own/Other) and KSupport.
Vector project_dual_ball(const PenaltySpec& spec, const Vector& u, double radius = 1.0);

struct WidthEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo Gaussian width of the unit penalty ball: E[dual(g)], g ~ N(0, I_dim).
WidthEstimate gaussian_width_unit_ball(const PenaltySpec& spec, std::size_t dim, std::size_t mc_samples, Rng& rng);

/// Closed-form bounds on the quantities driving the sample size and tuning:
/// w(unit ball), w²(tangent cone ∩ sphere), Φ(cone) and Φ̄.
struct BoundBundle {
    double width_unit_ball = 0.0;
    double width_cone_sq = 0.0;
    double phi = 0.0;
    double phi_bar = 0.0;
    /// Φ bound for overlapping groups (group penalty only; NaN otherwise).
    double phi_overlapping = std::numeric_limits<double>::quiet_NaN();
    /// Set when width_cone_sq is reported verbatim from a formula whose
    /// scaling is inconsistent with the other variants (k-support).
    bool cone_width_verbatim = false;
};

struct TheoryParams {
    std::size_t p = 0;  // ambient dimension (number of groups M for the group penalty is derived from the spec)
    std::size_t s = 0;  // sparsity: nonzeros, or active groups for group penalties
    /// β*_max / β*_min, needed by the k-support bounds.
    std::optional<double> beta_ratio;
};

BoundBundle theory_bounds(const PenaltySpec& spec, const TheoryParams& params);

/// λ_n = 2·Φ̄·K²·𝖢·√(c·w²/n).
double lambda_theory(double width_unit_ball, std::size_t n, double K, double c_factor, double phi_bar,
                     double c_abs = 1.0);

}  // namespace swvar
