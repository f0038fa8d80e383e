#include "swvar/simulate.hpp"

#include "swvar/dependence.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace swvar {

namespace {

constexpr int kMaxResample = 1000;

Matrix sparse_uniform(std::size_t p, std::size_t count, Rng& rng) {
    const std::size_t cells = p * p;
    std::vector<std::size_t> idx(cells);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `count` slots become the support.
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cells - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < count; ++i) {
        double v = 0.0;
        while (v == 0.0) v = unif(rng);
        const auto r = static_cast<Eigen::Index>(idx[i] / p);
        const auto c = static_cast<Eigen::Index>(idx[i] % p);
        out(r, c) = v;
    }
    return out;
}

/// True when the support digraph (edge r -> c for B(r, c) != 0) has a cycle.
/// For nonnegative B this is exactly ρ(B) > 0; the numerical radius of a
/// nilpotent matrix is rounding noise and must not be used as a divisor.
bool support_has_cycle(const Matrix& B) {
    const Eigen::Index n = B.rows();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) indeg[static_cast<std::size_t>(c)] += B(r, c) != 0.0 ? 1 : 0;
    }
    std::vector<Eigen::Index> ready;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (indeg[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
    }
    Eigen::Index removed = 0;
    while (!ready.empty()) {
        const Eigen::Index r = ready.back();
        ready.pop_back();
        ++removed;
        for (Eigen::Index c = 0; c < n; ++c) {
            if (B(r, c) != 0.0 && --indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
        }
    }
    return removed < n;
}

}  // namespace

void NoiseSpec::validate() const {
    if (!(gamma2 > 0.0) || !std::isfinite(gamma2)) throw ParameterError("tail index gamma2 must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("noise scale must be positive");
    if (p == 0) throw ParameterError("noise dimension must be positive");
}

double NoiseSpec::subweibull_norm() const {
    validate();
    // W^γ ~ Exp(1), so E exp((|W|/c)^γ) = 1/(1 - c^{-γ}) = 2 at c = 2^{1/γ}.
    return scale * std::pow(2.0, 1.0 / gamma2) / std::sqrt(std::tgamma(1.0 + 2.0 / gamma2));
}

void TransitionGenSpec::validate() const {
    if (p == 0) throw ParameterError("dimension must be positive");
    if (!(target_rho > 0.0 && target_rho < 1.0)) throw ParameterError("target spectral radius must lie in (0,1)");
    if (sparsity > p * p) throw ParameterError("sparsity exceeds p^2");
    if (low_rank) {
        if (low_rank->rank == 0 || low_rank->rank >= p) throw ParameterError("low-rank block needs 0 < r < p");
        if (!(low_rank->density_lo >= 0.0 && low_rank->density_lo <= low_rank->density_hi &&
              low_rank->density_hi <= 1.0)) {
            throw ParameterError("sparse density range must satisfy 0 <= lo <= hi <= 1");
        }
    }
}

Matrix sample_subweibull(const NoiseSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    if (n == 0) throw ParameterError("sample count must be >= 1");
    std::weibull_distribution<double> weibull(spec.gamma2, 1.0);
    std::bernoulli_distribution sign(0.5);
    // Symmetrized draws have E X² = E W² = Γ(1 + 2/γ).
    const double factor = spec.scale / std::sqrt(std::tgamma(1.0 + 2.0 / spec.gamma2));
    Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.p));
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            const double w = weibull(rng);
            out(i, j) = sign(rng) ? factor * w : -factor * w;
        }
    }
    return out;
}

Matrix gen_sparse_transition(const TransitionGenSpec& spec, Rng& rng) {
    spec.validate();
    if (spec.sparsity == 0) throw ParameterError("sparse transition needs at least one nonzero");
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        Matrix B = sparse_uniform(spec.p, spec.sparsity, rng);
        if (!support_has_cycle(B)) continue;
        const double rho = spectral_radius(B);
        if (rho > 1e-12) return (B / rho) * spec.target_rho;
    }
    throw NumericalError("could not draw a sparse transition with a cycle in its support after " +
                         std::to_string(kMaxResample) + " attempts");
}

LowRankSparse gen_lowrank_sparse_transition(const TransitionGenSpec& spec, Rng& rng) {
    spec.validate();
    if (!spec.low_rank) throw ParameterError("low-rank block missing from generator spec");
    const auto p = static_cast<Eigen::Index>(spec.p);
    const auto r = static_cast<Eigen::Index>(spec.low_rank->rank);
    const double cells = static_cast<double>(spec.p * spec.p);
    auto lo = static_cast<std::size_t>(std::ceil(spec.low_rank->density_lo * cells - 1e-9));
    auto hi = static_cast<std::size_t>(std::floor(spec.low_rank->density_hi * cells + 1e-9));
    if (hi < lo || hi == 0) {
        lo = hi = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(0.5 * (spec.low_rank->density_lo + spec.low_rank->density_hi) * cells)));
    }
    lo = std::max<std::size_t>(lo, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        Matrix P(p, r), Q(r, p);
        for (Eigen::Index i = 0; i < P.size(); ++i) P.data()[i] = gauss(rng);
        for (Eigen::Index i = 0; i < Q.size(); ++i) Q.data()[i] = gauss(rng);
        std::uniform_int_distribution<std::size_t> count(lo, hi);
        LowRankSparse out{P * Q / std::sqrt(static_cast<double>(p)), sparse_uniform(spec.p, count(rng), rng)};
        const double rho = spectral_radius(out.B());
        if (rho > 1e-12) {
            const double c = spec.target_rho / rho;
            out.L *= c;
            out.S *= c;
            return out;
        }
    }
    throw NumericalError("could not draw a low-rank plus sparse transition with nonzero spectral radius");
}

VarModel rescale_to_radius(VarModel model, double target_rho) {
    model.validate();
    if (!(target_rho > 0.0 && target_rho < 1.0)) throw ParameterError("target spectral radius must lie in (0,1)");
    auto radius_at = [&](double c) {
        VarModel scaled = model;
        for (auto& b : scaled.coeffs) b *= c;
        return spectral_radius(build_companion(scaled));
    };
    const double base = radius_at(1.0);
    if (!(base > 0.0)) throw NumericalError("cannot rescale a model with zero spectral radius");
    if (model.lag() == 1) {
        for (auto& b : model.coeffs) b = (b / base) * target_rho;
        return model;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (radius_at(hi) < target_rho) hi *= 2.0;
    double mid = hi;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double r = radius_at(mid);
        if (std::abs(r - target_rho) < 1e-12) break;
        (r < target_rho ? lo : hi) = mid;
    }
    for (auto& b : model.coeffs) b *= mid;
    return model;
}

Trajectory propagate_var(const VarModel& model, const Matrix& initial, const Matrix& innovations) {
    model.validate();
    const auto p = static_cast<Eigen::Index>(model.dim());
    const auto d = static_cast<Eigen::Index>(model.lag());
    if (initial.rows() != d || initial.cols() != p) throw StructuralError("initial block must be d x p");
    if (innovations.cols() != p) throw StructuralError("innovations must have p columns");
    Trajectory out;
    out.data.resize(d + innovations.rows(), p);
    out.data.topRows(d) = initial;
    for (Eigen::Index t = d; t < out.data.rows(); ++t) {
        Eigen::RowVectorXd z = innovations.row(t - d);
        for (Eigen::Index k = 0; k < d; ++k) z.noalias() += out.data.row(t - 1 - k) * model.coeffs[static_cast<std::size_t>(k)];
        out.data.row(t) = z;
    }
    Matrix recorded = Matrix::Zero(out.data.rows(), p);
    recorded.bottomRows(innovations.rows()) = innovations;
    out.innovations = std::move(recorded);
    return out;
}

Trajectory simulate_var(const VarModel& model, const NoiseSpec& noise, std::size_t T, Rng& rng,
                        SimulationOptions opts) {
    model.validate();
    noise.validate();
    if (noise.p != model.dim()) throw StructuralError("noise dimension differs from model dimension");
    const double rho = spectral_radius(build_companion(model));
    if (!(rho < 1.0) && !opts.allow_unstable) {
        throw StabilityError("model is not stable (companion spectral radius " + std::to_string(rho) + ")");
    }
    const auto p = static_cast<Eigen::Index>(model.dim());
    const auto total = static_cast<Eigen::Index>(opts.burn_in + T + 1);
    const Matrix eps = sample_subweibull(noise, static_cast<std::size_t>(total), rng);
    const Trajectory full = propagate_var(model, Matrix::Zero(static_cast<Eigen::Index>(model.lag()), p), eps);
    const auto keep = static_cast<Eigen::Index>(T + 1);
    Trajectory out;
    out.data = full.data.bottomRows(keep);
    out.innovations = Matrix(eps.bottomRows(keep));
    return out;
}

Trajectory simulate_varx(const VarxModel& model, const NoiseSpec& noise, std::size_t T, Rng& rng,
                         SimulationOptions opts) {
    model.validate();
    noise.validate();
    if (noise.p != model.dim()) throw StructuralError("noise dimension differs from model dimension");
    const double rho = spectral_radius(build_varx_companion(model));
    if (!(rho < 1.0) && !opts.allow_unstable) {
        throw StabilityError("VAR-X model is not stable (companion spectral radius " + std::to_string(rho) + ")");
    }
    const auto p = static_cast<Eigen::Index>(model.dim());
    const auto total = static_cast<Eigen::Index>(opts.burn_in + T + 1);
    const auto da = static_cast<Eigen::Index>(model.endo_lag());
    const auto db = static_cast<Eigen::Index>(model.exo_lag());
    const Matrix eps = sample_subweibull(noise, static_cast<std::size_t>(total), rng);
    const Matrix exo = sample_subweibull(noise, static_cast<std::size_t>(total), rng);
    Matrix x = Matrix::Zero(total, p);
    for (Eigen::Index t = 0; t < total; ++t) {
        Eigen::RowVectorXd v = eps.row(t);
        for (Eigen::Index i = 0; i < da && t - 1 - i >= 0; ++i) {
            v.noalias() += x.row(t - 1 - i) * model.base.coeffs[static_cast<std::size_t>(i)];
        }
        for (Eigen::Index j = 0; j < db && t - 1 - j >= 0; ++j) {
            v.noalias() += exo.row(t - 1 - j) * model.exo_coeffs[static_cast<std::size_t>(j)];
        }
        x.row(t) = v;
    }
    const auto keep = static_cast<Eigen::Index>(T + 1);
    Trajectory out;
    out.data = x.bottomRows(keep);
    out.exo = Matrix(exo.bottomRows(keep));
    out.innovations = Matrix(eps.bottomRows(keep));
    return out;
}

}  // namespace swvar
