#include "swvar/penalties.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>

namespace swvar {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::size_t> order_by_magnitude(const Vector& u) {
    std::vector<std::size_t> order(static_cast<std::size_t>(u.size()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(u(static_cast<Eigen::Index>(a))) > std::abs(u(static_cast<Eigen::Index>(b)));
    });
    return order;
}

Vector sorted_magnitudes(const Vector& u) {
    Vector a = u.cwiseAbs();
    std::sort(a.data(), a.data() + a.size(), std::greater<>());
    return a;
}

double group_norm(const Vector& v, const std::vector<std::size_t>& g) {
    double s = 0.0;
    for (auto i : g) {
        const double x = v(static_cast<Eigen::Index>(i));
        s += x * x;
    }
    return std::sqrt(s);
}

const std::vector<double>& group_weights(const penalty::GroupL21& g, std::vector<double>& storage) {
    if (!g.weights.empty()) return g.weights;
    storage.assign(g.groups.size(), 1.0);
    return storage;
}

Eigen::Map<const Matrix> as_matrix(const Vector& v, const penalty::Nuclear& n) {
    return {v.data(), static_cast<Eigen::Index>(n.rows), static_cast<Eigen::Index>(n.cols)};
}

/// Argyriou-Foygel-Srebro closed form on |v| sorted decreasingly.
double ksupport_value(const Vector& v, std::size_t k) {
    const Vector z = sorted_magnitudes(v);
    const auto d = static_cast<std::size_t>(z.size());
    k = std::min(k, d);
    // suffix[i] = Σ_{t>=i} z_t
    std::vector<double> suffix(d + 1, 0.0);
    for (std::size_t i = d; i-- > 0;) suffix[i] = suffix[i + 1] + z(static_cast<Eigen::Index>(i));
    std::vector<double> prefix_sq(d + 1, 0.0);
    for (std::size_t i = 0; i < d; ++i) prefix_sq[i + 1] = prefix_sq[i] + z(static_cast<Eigen::Index>(i)) * z(static_cast<Eigen::Index>(i));

    double best = std::numeric_limits<double>::infinity();
    double best_violation = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t head = k - r - 1;  // entries kept individually
        const double avg = suffix[head] / static_cast<double>(r + 1);
        const double value = std::sqrt(prefix_sq[head] + suffix[head] * suffix[head] / static_cast<double>(r + 1));
        const double upper = head == 0 ? std::numeric_limits<double>::infinity() : z(static_cast<Eigen::Index>(head - 1));
        const double lower = z(static_cast<Eigen::Index>(head));
        const double violation = std::max(0.0, avg - upper) + std::max(0.0, lower - avg);
        if (violation == 0.0) return value;
        if (violation < best_violation) {
            best_violation = violation;
            best = value;
        }
    }
    return best;
}

/// Projection of a (sorted decreasing, nonnegative) onto {x : top-k ℓ2 norm <= radius}.
///
/// KKT structure: the k-th largest coordinate of the projection is shared by a
/// tie group G = {s..e}; coordinates above it shrink by 1/(1+μ), coordinates
/// below it are untouched. Each (s, e) candidate fixes μ through the active
/// constraint, which is monotone in μ and solved by bisection.
Vector project_topk_sorted(const Vector& a, std::size_t k, double radius) {
    const auto d = static_cast<std::size_t>(a.size());
    const double r2 = radius * radius;
    double top = 0.0;
    for (std::size_t i = 0; i < k; ++i) top += a(static_cast<Eigen::Index>(i)) * a(static_cast<Eigen::Index>(i));
    if (top <= r2) return a;

    std::vector<double> prefix(d + 1, 0.0), prefix_sq(d + 1, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double x = a(static_cast<Eigen::Index>(i));
        prefix[i + 1] = prefix[i] + x;
        prefix_sq[i + 1] = prefix_sq[i] + x * x;
    }
    const double scale = std::max(a(0), radius);
    const double tol = 1e-12 * scale;

    Vector best;
    double best_violation = std::numeric_limits<double>::infinity();
    for (std::size_t s = k; s-- > 0;) {
        const double m = static_cast<double>(k - s);
        const double st = prefix_sq[s];
        for (std::size_t e = k - 1; e < d; ++e) {
            const double g = static_cast<double>(e - s + 1);
            const double ag = prefix[e + 1] - prefix[s];
            auto h = [&](double mu) {
                const double theta = ag / (mu * m + g);
                return st / ((1.0 + mu) * (1.0 + mu)) + m * theta * theta - r2;
            };
            if (h(0.0) <= 0.0) continue;
            double lo = 0.0, hi = 1.0;
            while (h(hi) > 0.0) hi *= 2.0;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (h(mid) > 0.0 ? lo : hi) = mid;
            }
            const double mu = 0.5 * (lo + hi);
            const double theta = ag / (mu * m + g);
            double violation = 0.0;
            violation = std::max(violation, theta - a(static_cast<Eigen::Index>(e)));
            violation = std::max(violation, a(static_cast<Eigen::Index>(s)) - (1.0 + mu) * theta);
            if (s > 0) violation = std::max(violation, theta - a(static_cast<Eigen::Index>(s - 1)) / (1.0 + mu));
            if (e + 1 < d) violation = std::max(violation, a(static_cast<Eigen::Index>(e + 1)) - theta);
            if (violation < best_violation) {
                best_violation = violation;
                best = a;
                for (std::size_t i = 0; i < s; ++i) best(static_cast<Eigen::Index>(i)) = a(static_cast<Eigen::Index>(i)) / (1.0 + mu);
                for (std::size_t i = s; i <= e; ++i) best(static_cast<Eigen::Index>(i)) = theta;
            }
            if (violation <= tol) return best;
        }
    }
    return best;
}

Vector project_topk(const Vector& u, std::size_t k, double radius) {
    const auto order = order_by_magnitude(u);
    Vector a(u.size());
    for (std::size_t i = 0; i < order.size(); ++i) a(static_cast<Eigen::Index>(i)) = std::abs(u(static_cast<Eigen::Index>(order[i])));
    const Vector z = project_topk_sorted(a, k, radius);
    Vector out(u.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(order[i]);
        out(j) = u(j) < 0.0 ? -z(static_cast<Eigen::Index>(i)) : z(static_cast<Eigen::Index>(i));
    }
    return out;
}

Vector soft_threshold(const Vector& u, double tau) {
    return u.unaryExpr([tau](double x) { return x > tau ? x - tau : (x < -tau ? x + tau : 0.0); });
}

Vector group_prox(const penalty::GroupL21& g, const Vector& u, double tau) {
    std::vector<double> storage;
    const auto& w = group_weights(g, storage);
    Vector out = Vector::Zero(u.size());
    for (std::size_t i = 0; i < g.groups.size(); ++i) {
        const double nrm = group_norm(u, g.groups[i]);
        const double t = tau * w[i];
        if (nrm <= t) continue;
        const double f = 1.0 - t / nrm;
        for (auto j : g.groups[i]) out(static_cast<Eigen::Index>(j)) = f * u(static_cast<Eigen::Index>(j));
    }
    return out;
}

Vector owl_prox(const std::vector<double>& w, const Vector& u, double tau) {
    const auto order = order_by_magnitude(u);
    const std::size_t q = order.size();
    // Pool adjacent violators for a nonincreasing fit to |u|↓ − τw.
    std::vector<double> sum;
    std::vector<std::size_t> len;
    sum.reserve(q);
    len.reserve(q);
    for (std::size_t i = 0; i < q; ++i) {
        sum.push_back(std::abs(u(static_cast<Eigen::Index>(order[i]))) - tau * w[i]);
        len.push_back(1);
        while (sum.size() > 1) {
            const std::size_t b = sum.size() - 1;
            if (sum[b - 1] / static_cast<double>(len[b - 1]) > sum[b] / static_cast<double>(len[b])) break;
            sum[b - 1] += sum[b];
            len[b - 1] += len[b];
            sum.pop_back();
            len.pop_back();
        }
    }
    Vector out(u.size());
    std::size_t pos = 0;
    for (std::size_t b = 0; b < sum.size(); ++b) {
        const double v = std::max(0.0, sum[b] / static_cast<double>(len[b]));
        for (std::size_t t = 0; t < len[b]; ++t, ++pos) {
            const auto j = static_cast<Eigen::Index>(order[pos]);
            out(j) = u(j) < 0.0 ? -v : v;
        }
    }
    return out;
}

Vector nuclear_prox(const penalty::Nuclear& n, const Vector& u, double tau) {
    const Matrix M = as_matrix(u, n);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector sv = (svd.singularValues().array() - tau).max(0.0).matrix();
    const Matrix out = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
    return Eigen::Map<const Vector>(out.data(), out.size());
}

penalty::GroupL21 as_group(const PenaltySpec& spec) {
    if (auto g = std::get_if<penalty::GroupL21>(&spec.variant)) return *g;
    return own_other_groups(std::get<penalty::OwnOther>(spec.variant));
}

void check_dim(const PenaltySpec& spec, const Vector& v) {
    spec.validate(static_cast<std::size_t>(v.size()));
}

}  // namespace

PenaltySpec PenaltySpec::group(std::vector<std::vector<std::size_t>> groups, std::vector<double> weights) {
    if (weights.empty()) weights.assign(groups.size(), 1.0);
    return {penalty::GroupL21{std::move(groups), std::move(weights)}};
}

std::string PenaltySpec::name() const {
    return std::visit(Overloaded{[](const penalty::L1&) { return std::string("l1"); },
                                 [](const penalty::GroupL21&) { return std::string("group"); },
                                 [](const penalty::Owl&) { return std::string("owl"); },
                                 [](const penalty::KSupport&) { return std::string("ksupport"); },
                                 [](const penalty::Nuclear&) { return std::string("nuclear"); },
                                 [](const penalty::OwnOther&) { return std::string("own_other"); }},
                      variant);
}

std::optional<std::size_t> PenaltySpec::fixed_dimension() const {
    return std::visit(
        Overloaded{[](const penalty::L1&) -> std::optional<std::size_t> { return std::nullopt; },
                   [](const penalty::KSupport&) -> std::optional<std::size_t> { return std::nullopt; },
                   [](const penalty::GroupL21& g) -> std::optional<std::size_t> {
                       std::size_t n = 0;
                       for (const auto& grp : g.groups) n += grp.size();
                       return n;
                   },
                   [](const penalty::Owl& o) -> std::optional<std::size_t> { return o.weights.size(); },
                   [](const penalty::Nuclear& n) -> std::optional<std::size_t> { return n.rows * n.cols; },
                   [](const penalty::OwnOther& o) -> std::optional<std::size_t> {
                       return o.p * o.p * (o.d_a + o.d_b);
                   }},
        variant);
}

bool PenaltySpec::is_matrix_penalty() const {
    return std::holds_alternative<penalty::Nuclear>(variant) || std::holds_alternative<penalty::OwnOther>(variant);
}

void PenaltySpec::validate(std::size_t dim) const {
    if (dim == 0) throw StructuralError("penalty argument is empty");
    std::visit(
        Overloaded{
            [](const penalty::L1&) {},
            [dim](const penalty::KSupport& k) {
                if (k.k < 1 || k.k > dim) throw ParameterError("k-support needs 1 <= k <= dimension");
            },
            [dim](const penalty::GroupL21& g) {
                if (g.groups.empty()) throw ParameterError("group penalty needs at least one group");
                if (!g.weights.empty() && g.weights.size() != g.groups.size()) {
                    throw ParameterError("group weights and groups differ in count");
                }
                for (double w : g.weights) {
                    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("group weights must be positive");
                }
                std::vector<char> seen(dim, 0);
                std::size_t covered = 0;
                for (const auto& grp : g.groups) {
                    if (grp.empty()) throw ParameterError("empty group");
                    for (auto i : grp) {
                        if (i >= dim) throw StructuralError("group index out of range");
                        if (seen[i]) throw ParameterError("groups overlap");
                        seen[i] = 1;
                        ++covered;
                    }
                }
                if (covered != dim) throw StructuralError("groups do not cover the argument");
            },
            [dim](const penalty::Owl& o) {
                if (o.weights.size() != dim) throw StructuralError("OWL weight count differs from the argument length");
                if (!(o.weights[0] > 0.0)) throw ParameterError("OWL needs w_1 > 0");
                for (std::size_t i = 0; i < o.weights.size(); ++i) {
                    if (!(o.weights[i] >= 0.0) || !std::isfinite(o.weights[i])) {
                        throw ParameterError("OWL weights must be nonnegative");
                    }
                    if (i > 0 && o.weights[i] > o.weights[i - 1]) throw ParameterError("OWL weights must be nonincreasing");
                }
            },
            [dim](const penalty::Nuclear& n) {
                if (n.rows == 0 || n.cols == 0) throw ParameterError("nuclear shape must be positive");
                if (n.rows * n.cols != dim) throw StructuralError("nuclear shape differs from the argument length");
            },
            [dim](const penalty::OwnOther& o) {
                if (o.p < 2) throw ParameterError("Own/Other needs p >= 2");
                if (o.d_a < 1) throw ParameterError("Own/Other needs d_A >= 1");
                if (!(o.exo_scale > 0.0)) throw ParameterError("exogenous group scale must be positive");
                if (o.p * o.p * (o.d_a + o.d_b) != dim) {
                    throw StructuralError("Own/Other shape differs from the argument length");
                }
            }},
        variant);
}

penalty::GroupL21 own_other_groups(const penalty::OwnOther& oo) {
    const std::size_t p = oo.p;
    const std::size_t rows = p * (oo.d_a + oo.d_b);
    // Column-major index of entry (r, c) of the stacked coefficient.
    auto at = [rows](std::size_t r, std::size_t c) { return c * rows + r; };
    const double sp = std::sqrt(static_cast<double>(p));
    const double spp = std::sqrt(static_cast<double>(p * (p - 1)));
    penalty::GroupL21 out;
    for (std::size_t i = 0; i < oo.d_a; ++i) {
        std::vector<std::size_t> own, other;
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) (r == c ? own : other).push_back(at(i * p + r, c));
        }
        out.groups.push_back(std::move(own));
        out.weights.push_back(sp);
        out.groups.push_back(std::move(other));
        out.weights.push_back(spp);
    }
    for (std::size_t j = 0; j < oo.d_b; ++j) {
        for (std::size_t k = 0; k < p; ++k) {
            std::vector<std::size_t> g;
            for (std::size_t c = 0; c < p; ++c) g.push_back(at((oo.d_a + j) * p + k, c));
            out.groups.push_back(std::move(g));
            out.weights.push_back(sp * oo.exo_scale);
        }
    }
    return out;
}

double penalty_value(const PenaltySpec& spec, const Vector& v) {
    check_dim(spec, v);
    return std::visit(
        Overloaded{[&](const penalty::L1&) { return v.lpNorm<1>(); },
                   [&](const penalty::GroupL21& g) {
                       std::vector<double> storage;
                       const auto& w = group_weights(g, storage);
                       double s = 0.0;
                       for (std::size_t i = 0; i < g.groups.size(); ++i) s += w[i] * group_norm(v, g.groups[i]);
                       return s;
                   },
                   [&](const penalty::Owl& o) {
                       const Vector a = sorted_magnitudes(v);
                       double s = 0.0;
                       for (Eigen::Index i = 0; i < a.size(); ++i) s += o.weights[static_cast<std::size_t>(i)] * a(i);
                       return s;
                   },
                   [&](const penalty::KSupport& k) { return ksupport_value(v, k.k); },
                   [&](const penalty::Nuclear& n) {
                       return Eigen::JacobiSVD<Matrix>(Matrix(as_matrix(v, n))).singularValues().sum();
                   },
                   [&](const penalty::OwnOther& o) {
                       return penalty_value(PenaltySpec{own_other_groups(o)}, v);
                   }},
        spec.variant);
}

double penalty_dual(const PenaltySpec& spec, const Vector& u) {
    check_dim(spec, u);
    return std::visit(
        Overloaded{[&](const penalty::L1&) { return u.lpNorm<Eigen::Infinity>(); },
                   [&](const penalty::GroupL21& g) {
                       std::vector<double> storage;
                       const auto& w = group_weights(g, storage);
                       double best = 0.0;
                       for (std::size_t i = 0; i < g.groups.size(); ++i) {
                           best = std::max(best, group_norm(u, g.groups[i]) / w[i]);
                       }
                       return best;
                   },
                   [&](const penalty::Owl& o) {
                       const Vector a = sorted_magnitudes(u);
                       double su = 0.0, sw = 0.0, best = 0.0;
                       for (Eigen::Index i = 0; i < a.size(); ++i) {
                           su += a(i);
                           sw += o.weights[static_cast<std::size_t>(i)];
                           best = std::max(best, su / sw);
                       }
                       return best;
                   },
                   [&](const penalty::KSupport& k) {
                       const Vector a = sorted_magnitudes(u);
                       return a.head(static_cast<Eigen::Index>(k.k)).norm();
                   },
                   [&](const penalty::Nuclear& n) {
                       return Eigen::JacobiSVD<Matrix>(Matrix(as_matrix(u, n))).singularValues()(0);
                   },
                   [&](const penalty::OwnOther& o) { return penalty_dual(PenaltySpec{own_other_groups(o)}, u); }},
        spec.variant);
}

Vector penalty_prox(const PenaltySpec& spec, const Vector& u, double tau) {
    check_dim(spec, u);
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ParameterError("prox step must be positive");
    return std::visit(Overloaded{[&](const penalty::L1&) { return soft_threshold(u, tau); },
                                 [&](const penalty::GroupL21& g) { return group_prox(g, u, tau); },
                                 [&](const penalty::Owl& o) { return owl_prox(o.weights, u, tau); },
                                 [&](const penalty::KSupport& k) -> Vector {
                                     // Moreau: prox_{τR}(u) = u − τ·Proj_{R* ≤ 1}(u/τ).
                                     return u - tau * project_topk(u / tau, k.k, 1.0);
                                 },
                                 [&](const penalty::Nuclear& n) { return nuclear_prox(n, u, tau); },
                                 [&](const penalty::OwnOther& o) { return group_prox(own_other_groups(o), u, tau); }},
                      spec.variant);
}

Vector project_dual_ball(const PenaltySpec& spec, const Vector& u, double radius) {
    check_dim(spec, u);
    if (!(radius >= 0.0)) throw ParameterError("dual-ball radius must be nonnegative");
    if (std::holds_alternative<penalty::L1>(spec.variant)) {
        return u.cwiseMax(-radius).cwiseMin(radius);
    }
    if (std::holds_alternative<penalty::GroupL21>(spec.variant) ||
        std::holds_alternative<penalty::OwnOther>(spec.variant)) {
        const auto g = as_group(spec);
        Vector out = u;
        for (std::size_t i = 0; i < g.groups.size(); ++i) {
            const double cap = radius * g.weights[i];
            const double nrm = group_norm(u, g.groups[i]);
            if (nrm <= cap) continue;
            for (auto j : g.groups[i]) out(static_cast<Eigen::Index>(j)) *= cap / nrm;
        }
        return out;
    }
    if (auto k = std::get_if<penalty::KSupport>(&spec.variant)) return project_topk(u, k->k, radius);
    throw ParameterError("dual-ball projection not available for the " + spec.name() + " penalty");
}

WidthEstimate gaussian_width_unit_ball(const PenaltySpec& spec, std::size_t dim, std::size_t mc_samples, Rng& rng) {
    if (mc_samples < 100) throw ParameterError("Gaussian width estimate needs at least 100 samples");
    spec.validate(dim);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector g(static_cast<Eigen::Index>(dim));
    double mean = 0.0, m2 = 0.0;
    for (std::size_t n = 1; n <= mc_samples; ++n) {
        for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
        const double x = penalty_dual(spec, g);
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    const double var = m2 / static_cast<double>(mc_samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(mc_samples))};
}

BoundBundle theory_bounds(const PenaltySpec& spec, const TheoryParams& params) {
    const double s = static_cast<double>(params.s);
    BoundBundle b;
    std::visit(
        Overloaded{
            [&](const penalty::L1&) {
                if (params.p == 0 || params.s < 1 || params.s > params.p) throw ParameterError("ℓ1 bounds need 1 <= s <= p");
                const double p = static_cast<double>(params.p);
                b.width_unit_ball = 2.0 * std::sqrt(std::log(2.0 * p));
                b.width_cone_sq = 2.0 * s * std::log(p / s) + 1.25 * s;
                b.phi = 2.0 * std::sqrt(s);
                b.phi_bar = 1.0;
            },
            [&](const penalty::Owl& o) {
                const std::size_t q = o.weights.size();
                if (params.p != 0 && params.p != q) throw ParameterError("OWL bounds: p differs from the weight count");
                if (params.s < 1 || params.s >= q) throw ParameterError("OWL bounds need 1 <= s < p");
                const double p = static_cast<double>(q);
                const double w1 = o.weights[0];
                const double wbar = std::accumulate(o.weights.begin(), o.weights.end(), 0.0) / p;
                const double wtail = std::accumulate(o.weights.begin() + static_cast<std::ptrdiff_t>(params.s),
                                                     o.weights.end(), 0.0) /
                                     (p - s);
                if (!(wbar > 0.0) || !(wtail > 0.0)) throw ParameterError("OWL bounds need positive average weights");
                b.width_unit_ball = 2.0 * std::sqrt(2.0 + std::log(2.0 * p)) / wbar;
                b.width_cone_sq = (2.0 * w1 * w1 / wtail) * s * std::log(p / s) + 1.5 * s;
                b.phi = (2.0 * w1 * w1 / wtail) * std::sqrt(s);
                b.phi_bar = 1.0 / w1;
            },
            [&](const penalty::GroupL21& g) {
                const double M = static_cast<double>(g.groups.size());
                std::size_t msize = 0;
                for (const auto& grp : g.groups) msize = std::max(msize, grp.size());
                const double m = static_cast<double>(msize);
                if (params.s < 1 || params.s >= g.groups.size()) throw ParameterError("group bounds need 1 <= s < M");
                b.width_unit_ball = std::sqrt(m) + 2.0 * std::sqrt(std::log(M));
                const double root = std::sqrt(2.0 * std::log(M - s)) + std::sqrt(m);
                b.width_cone_sq = (root * root + m) * s;
                b.phi = std::sqrt(s);
                b.phi_overlapping = s;
                b.phi_bar = 1.0;
            },
            [&](const penalty::KSupport& k) {
                if (params.p == 0 || k.k > params.p) throw ParameterError("k-support bounds need k <= p");
                if (params.s < 1 || params.s > params.p) throw ParameterError("k-support bounds need 1 <= s <= p");
                if (!params.beta_ratio || !(*params.beta_ratio >= 1.0)) {
                    throw ParameterError("k-support bounds need beta_max/beta_min >= 1");
                }
                const double p = static_cast<double>(params.p);
                const double kk = static_cast<double>(k.k);
                const double ratio = *params.beta_ratio;
                b.width_unit_ball = std::sqrt(kk) + 2.0 * std::sqrt(kk * std::log(p / kk) + kk);
                b.width_cone_sq = std::sqrt((2.0 * ratio) * s * std::log(p / s) + 1.5 * s);
                b.cone_width_verbatim = true;
                b.phi = std::sqrt(2.0) * (1.0 + 2.0 * ratio);
                b.phi_bar = 1.0;
            },
            [&](const penalty::Nuclear&) { throw ParameterError("no closed-form bounds for the nuclear penalty"); },
            [&](const penalty::OwnOther& o) {
                const double p = static_cast<double>(o.p);
                const double groups = p * (p - 1.0);
                const double m = 2.0 * static_cast<double>(o.d_a) + p * static_cast<double>(o.d_b);
                if (params.s < 1 || s >= groups) throw ParameterError("Own/Other bounds need 1 <= s < p(p-1)");
                b.width_unit_ball = (std::sqrt(m) + 2.0 * std::sqrt(std::log(groups))) / std::sqrt(p);
                const double root = std::sqrt(2.0 * std::log(groups - s)) + std::sqrt(m);
                b.width_cone_sq = (root * root + m) * (s / p);
                b.phi = std::sqrt(s);
                b.phi_bar = 1.0;
            }},
        spec.variant);
    return b;
}

double lambda_theory(double width_unit_ball, std::size_t n, double K, double c_factor, double phi_bar, double c_abs) {
    if (n == 0) throw ParameterError("lambda_theory needs n >= 1");
    if (!(c_abs > 0.0)) throw ParameterError("absolute constant must be positive");
    return 2.0 * phi_bar * K * K * c_factor *
           std::sqrt(c_abs * width_unit_ball * width_unit_ball / static_cast<double>(n));
}

}  // namespace swvar
