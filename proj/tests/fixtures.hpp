#pragma once
// Random instances shared by the unit tests and the acceptance runner.

#include "oracles.hpp"
#include "swvar/penalties.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace fixture {

using swvar::Matrix;
using swvar::PenaltySpec;
using swvar::Rng;
using swvar::Vector;

inline Vector random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
    return v;
}

inline Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

inline std::vector<double> random_owl_weights(Rng& rng, std::size_t q) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<double> w(q);
    for (auto& x : w) x = u(rng);
    std::sort(w.begin(), w.end(), std::greater<>());
    w[0] = std::max(w[0], 0.1);
    return w;
}

inline std::vector<std::vector<std::size_t>> random_partition(Rng& rng, std::size_t dim) {
    std::vector<std::size_t> idx(dim);
    for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_int_distribution<std::size_t> cnt(1, dim);
    std::size_t groups = cnt(rng);
    std::vector<std::vector<std::size_t>> out(groups);
    for (std::size_t i = 0; i < dim; ++i) out[i < groups ? i : std::uniform_int_distribution<std::size_t>(0, groups - 1)(rng)].push_back(idx[i]);
    return out;
}

/// Kinds: l1, group, owl, ksupport, nuclear. `dim` is adjusted for nuclear
/// (rows·cols with rows, cols <= 3).
inline PenaltySpec random_penalty(const std::string& kind, std::size_t& dim, Rng& rng) {
    if (kind == "l1") return PenaltySpec::l1();
    if (kind == "group") {
        auto groups = random_partition(rng, dim);
        std::uniform_real_distribution<double> u(0.2, 2.0);
        std::vector<double> w(groups.size());
        for (auto& x : w) x = u(rng);
        return PenaltySpec::group(std::move(groups), std::move(w));
    }
    if (kind == "owl") return PenaltySpec::owl(random_owl_weights(rng, dim));
    if (kind == "ksupport") return PenaltySpec::ksupport(std::uniform_int_distribution<std::size_t>(1, dim)(rng));
    std::uniform_int_distribution<std::size_t> side(1, 3);
    const std::size_t r = side(rng), c = std::max<std::size_t>(2, side(rng));
    dim = r * c;
    return PenaltySpec::nuclear(r, c);
}

inline Vector oracle_prox(const PenaltySpec& spec, const Vector& u, double tau) {
    namespace P = swvar::penalty;
    if (std::holds_alternative<P::L1>(spec.variant)) return oracle::prox_l1(u, tau);
    if (auto g = std::get_if<P::GroupL21>(&spec.variant)) return oracle::prox_group(u, g->groups, g->weights, tau);
    if (auto o = std::get_if<P::Owl>(&spec.variant)) return oracle::prox_owl(u, o->weights, tau);
    if (auto k = std::get_if<P::KSupport>(&spec.variant)) return oracle::prox_ksupport(u, k->k, tau);
    auto n = std::get<P::Nuclear>(spec.variant);
    const Matrix U = Eigen::Map<const Matrix>(u.data(), static_cast<Eigen::Index>(n.rows), static_cast<Eigen::Index>(n.cols));
    const Matrix X = oracle::prox_nuclear(U, tau);
    return Eigen::Map<const Vector>(X.data(), X.size());
}

}  // namespace fixture
