#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "swvar/penalties.hpp"

#include <cmath>

using namespace swvar;
using fixture::random_vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

const std::vector<std::string> kKinds{"l1", "group", "owl", "ksupport", "nuclear"};

double prox_objective(const PenaltySpec& spec, const Vector& x, const Vector& u, double tau) {
    return 0.5 * (x - u).squaredNorm() + tau * penalty_value(spec, x);
}

}  // namespace

TEST_CASE("penalty values on hand examples") {
    CHECK(penalty_value(PenaltySpec::owl({2, 1}), vec({1, -3})) == 7.0);
    CHECK(penalty_value(PenaltySpec::group({{0, 1}, {2}}), vec({3, 4, 5})) == doctest::Approx(10.0));
    CHECK(penalty_value(PenaltySpec::l1(), vec({1, -2, 3})) == 6.0);
    Matrix M = Matrix::Zero(2, 3);
    M(0, 0) = 3.0;
    M(1, 1) = -4.0;
    CHECK(penalty_value(PenaltySpec::nuclear(2, 3), Eigen::Map<Vector>(M.data(), 6)) == doctest::Approx(7.0));
}

TEST_CASE("k-support value equals the Euclidean norm on k-sparse vectors") {
    Rng rng(1);
    for (std::size_t dim : {3, 4, 6}) {
        for (std::size_t k = 1; k <= dim; ++k) {
            Vector v = random_vector(rng, static_cast<Eigen::Index>(dim));
            for (std::size_t i = k; i < dim; ++i) v[static_cast<Eigen::Index>(i)] = 0.0;
            CHECK(penalty_value(PenaltySpec::ksupport(k), v) == doctest::Approx(v.norm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("k-support value matches the variational oracle") {
    Rng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t dim = 2 + rep % 5;
        const std::size_t k = 1 + static_cast<std::size_t>(rep) % dim;
        const Vector v = random_vector(rng, static_cast<Eigen::Index>(dim), 2.0);
        CHECK(penalty_value(PenaltySpec::ksupport(k), v) == doctest::Approx(oracle::ksupport_value(v, k)).epsilon(1e-8));
    }
    // k = 1 is ℓ1, k = dim is ℓ2
    const Vector v = vec({1, -2, 0.5, 3});
    CHECK(penalty_value(PenaltySpec::ksupport(1), v) == doctest::Approx(6.5));
    CHECK(penalty_value(PenaltySpec::ksupport(4), v) == doctest::Approx(v.norm()));
}

TEST_CASE("dual norms on hand examples") {
    CHECK(penalty_dual(PenaltySpec::ksupport(2), vec({3, -2, 1})) == doctest::Approx(std::sqrt(13.0)));
    CHECK(penalty_dual(PenaltySpec::l1(), vec({1, -5, 2})) == 5.0);
    CHECK(penalty_dual(PenaltySpec::group({{0, 1}, {2}}, {1.0, 2.0}), vec({3, 4, 6})) == doctest::Approx(5.0));
    // OWL: max(4/2, (4+3)/3) = 7/3
    CHECK(penalty_dual(PenaltySpec::owl({2, 1}), vec({3, -4})) == doctest::Approx(7.0 / 3.0));
}

TEST_CASE("norm axioms and generalized Cauchy-Schwarz for every variant") {
    Rng rng(3);
    for (const auto& kind : kKinds) {
        for (int rep = 0; rep < 1000; ++rep) {
            std::size_t dim = 1 + static_cast<std::size_t>(rep) % 6;
            const PenaltySpec spec = fixture::random_penalty(kind, dim, rng);
            const auto n = static_cast<Eigen::Index>(dim);
            const Vector u = random_vector(rng, n), v = random_vector(rng, n), w = random_vector(rng, n);
            const double rv = penalty_value(spec, v);
            CHECK(rv >= 0.0);
            CHECK(std::abs(u.dot(v)) <= rv * penalty_dual(spec, u) * (1 + 1e-10) + 1e-12);
            CHECK(penalty_value(spec, -2.5 * v) == doctest::Approx(2.5 * rv).epsilon(1e-10));
            CHECK(penalty_value(spec, v + w) <= rv + penalty_value(spec, w) + 1e-10);
        }
    }
    // Own/Other as well
    const PenaltySpec oo = PenaltySpec::own_other(3, 2, 1);
    for (int rep = 0; rep < 200; ++rep) {
        const Vector u = random_vector(rng, 27), v = random_vector(rng, 27);
        CHECK(std::abs(u.dot(v)) <= penalty_value(oo, v) * penalty_dual(oo, u) * (1 + 1e-10));
    }
}

TEST_CASE("prox examples") {
    const Vector x = penalty_prox(PenaltySpec::l1(), vec({3, -1, 0.2}), 1.0);
    CHECK((x - vec({2, 0, 0})).norm() == 0.0);
    const Vector owl = penalty_prox(PenaltySpec::owl({2, 1}), vec({3, 3}), 1.0);
    CHECK((owl - oracle::prox_owl(vec({3, 3}), {2, 1}, 1.0)).lpNorm<Eigen::Infinity>() < 1e-4);
    CHECK((owl - vec({1.5, 1.5})).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK_THROWS_AS(penalty_prox(PenaltySpec::l1(), vec({1}), 0.0), ParameterError);
    CHECK_THROWS_AS(penalty_prox(PenaltySpec::l1(), vec({1}), -1.0), ParameterError);
    CHECK_THROWS(penalty_value(PenaltySpec::owl({1, 1}), vec({1, 2, 3})));
}

TEST_CASE("OWL with equal weights is the ℓ1 penalty") {
    Rng rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        const auto n = static_cast<Eigen::Index>(1 + rep % 8);
        const PenaltySpec owl = PenaltySpec::owl(std::vector<double>(static_cast<std::size_t>(n), 1.0));
        const Vector u = random_vector(rng, n, 2.0);
        const double tau = 0.1 + 0.01 * rep;
        CHECK((penalty_prox(owl, u, tau) - penalty_prox(PenaltySpec::l1(), u, tau)).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK(penalty_value(owl, u) == doctest::Approx(penalty_value(PenaltySpec::l1(), u)).epsilon(1e-14));
        CHECK(penalty_dual(owl, u) == doctest::Approx(penalty_dual(PenaltySpec::l1(), u)).epsilon(1e-14));
    }
}

TEST_CASE("prox matches the independent oracles") {
    Rng rng(5);
    for (const auto& kind : kKinds) {
        for (int rep = 0; rep < 30; ++rep) {
            std::size_t dim = 1 + static_cast<std::size_t>(rep) % 6;
            const PenaltySpec spec = fixture::random_penalty(kind, dim, rng);
            const Vector u = random_vector(rng, static_cast<Eigen::Index>(dim), 2.0);
            const double tau = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
            const Vector mine = penalty_prox(spec, u, tau);
            const Vector ref = fixture::oracle_prox(spec, u, tau);
            INFO(kind, " dim=", dim);
            CHECK((mine - ref).lpNorm<Eigen::Infinity>() < 1e-4);
        }
    }
}

TEST_CASE("prox output beats random perturbations") {
    Rng rng(6);
    std::normal_distribution<double> g(0.0, 1e-3);
    for (const auto& kind : kKinds) {
        for (int rep = 0; rep < 10; ++rep) {
            std::size_t dim = 2 + static_cast<std::size_t>(rep) % 5;
            const PenaltySpec spec = fixture::random_penalty(kind, dim, rng);
            const Vector u = random_vector(rng, static_cast<Eigen::Index>(dim), 2.0);
            const double tau = 0.5;
            const Vector x = penalty_prox(spec, u, tau);
            const double fx = prox_objective(spec, x, u, tau);
            bool ok = true;
            for (int k = 0; k < 1000; ++k) {
                Vector y = x;
                for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += g(rng);
                ok = ok && fx <= prox_objective(spec, y, u, tau) + 1e-12;
            }
            INFO(kind);
            CHECK(ok);
        }
    }
}

TEST_CASE("Moreau decomposition") {
    Rng rng(7);
    for (const std::string kind : {"l1", "group", "ksupport"}) {
        for (int rep = 0; rep < 100; ++rep) {
            std::size_t dim = 1 + static_cast<std::size_t>(rep) % 8;
            const PenaltySpec spec = fixture::random_penalty(kind, dim, rng);
            const Vector u = random_vector(rng, static_cast<Eigen::Index>(dim), 2.0);
            const double tau = 0.3 + 0.01 * rep;
            const Vector sum = penalty_prox(spec, u, tau) + tau * project_dual_ball(spec, u / tau);
            INFO(kind);
            CHECK((sum - u).lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }
    CHECK_THROWS_AS(project_dual_ball(PenaltySpec::owl({1, 1}), vec({1, 2})), ParameterError);
}

TEST_CASE("dual-ball projection recovers the norm") {
    Rng rng(8);
    for (const std::string kind : {"l1", "group"}) {
        for (int rep = 0; rep < 100; ++rep) {
            std::size_t dim = 1 + static_cast<std::size_t>(rep) % 8;
            const PenaltySpec spec = fixture::random_penalty(kind, dim, rng);
            const Vector v = random_vector(rng, static_cast<Eigen::Index>(dim));
            const double t = 1e12 / v.cwiseAbs().minCoeff();
            CHECK(v.dot(project_dual_ball(spec, t * v)) == doctest::Approx(penalty_value(spec, v)).epsilon(1e-8));
        }
    }
}

TEST_CASE("Own/Other groups") {
    const auto g = own_other_groups(penalty::OwnOther{3, 1, 1, 1.0});
    REQUIRE(g.groups.size() == 2 + 3);
    CHECK(g.groups[0].size() == 3);
    CHECK(g.groups[1].size() == 6);
    CHECK(g.weights[0] == doctest::Approx(std::sqrt(3.0)));
    CHECK(g.weights[1] == doctest::Approx(std::sqrt(6.0)));
    CHECK(g.weights[2] == doctest::Approx(std::sqrt(3.0)));
    // stacked F is 6x3, column-major: diagonal of A_1 is (0,0),(1,1),(2,2)
    CHECK(g.groups[0] == std::vector<std::size_t>{0, 7, 14});
    // row 0 of B_1 is stacked row 3
    CHECK(g.groups[2] == std::vector<std::size_t>{3, 9, 15});
    // Own/Other value equals the explicit group penalty
    Rng rng(9);
    const Vector v = random_vector(rng, 18);
    CHECK(penalty_value(PenaltySpec::own_other(3, 1, 1), v) ==
          doctest::Approx(penalty_value(PenaltySpec{g}, v)));
}

TEST_CASE("Gaussian width estimates") {
    Rng rng(10);
    const auto l2 = gaussian_width_unit_ball(PenaltySpec::ksupport(100), 100, 20000, rng);
    const double chi_mean = std::sqrt(2.0) * std::exp(std::lgamma(50.5) - std::lgamma(50.0));
    CHECK(std::abs(l2.mean - chi_mean) < 4 * l2.std_error);
    CHECK(chi_mean == doctest::Approx(9.975).epsilon(1e-3));

    const auto one = gaussian_width_unit_ball(PenaltySpec::l1(), 1, 50000, rng);
    CHECK(std::abs(one.mean - std::sqrt(2.0 / std::numbers::pi)) < 4 * one.std_error);

    const auto big = gaussian_width_unit_ball(PenaltySpec::l1(), 1000, 2000, rng);
    CHECK(big.mean <= 2.0 * std::sqrt(std::log(2000.0)));
    CHECK(2.0 * std::sqrt(std::log(2000.0)) == doctest::Approx(5.513).epsilon(1e-3));

    CHECK_THROWS_AS(gaussian_width_unit_ball(PenaltySpec::l1(), 5, 99, rng), ParameterError);
}

TEST_CASE("width estimates respect the closed-form bounds") {
    Rng rng(11);
    for (std::size_t p : {50, 200}) {
        const std::size_t s = 5;
        std::vector<PenaltySpec> specs{PenaltySpec::l1(), PenaltySpec::owl(fixture::random_owl_weights(rng, p)),
                                       PenaltySpec::ksupport(s)};
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < p; i += 5) groups.push_back({i, i + 1, i + 2, i + 3, i + 4});
        specs.push_back(PenaltySpec::group(groups));
        for (const auto& spec : specs) {
            const auto est = gaussian_width_unit_ball(spec, p, 2000, rng);
            const auto bounds = theory_bounds(spec, TheoryParams{p, s, 2.0});
            INFO(spec.name(), " p=", p);
            CHECK(est.mean - 3 * est.std_error <= bounds.width_unit_ball);
        }
    }
}

TEST_CASE("theory bounds: ℓ1") {
    const auto b = theory_bounds(PenaltySpec::l1(), TheoryParams{100, 10, {}});
    CHECK(b.width_unit_ball == doctest::Approx(2.0 * std::sqrt(std::log(200.0))));
    CHECK(b.width_cone_sq == doctest::Approx(58.5517).epsilon(1e-5));
    CHECK(b.phi == doctest::Approx(2.0 * std::sqrt(10.0)));
    CHECK(b.phi_bar == 1.0);
    CHECK(std::isnan(b.phi_overlapping));
    CHECK_THROWS_AS(theory_bounds(PenaltySpec::l1(), TheoryParams{10, 11, {}}), ParameterError);
}

TEST_CASE("theory bounds: OWL with equal weights") {
    const std::size_t p = 100, s = 10;
    const auto o = theory_bounds(PenaltySpec::owl(std::vector<double>(p, 1.0)), TheoryParams{p, s, {}});
    const auto l = theory_bounds(PenaltySpec::l1(), TheoryParams{p, s, {}});
    CHECK(o.phi == l.phi);
    CHECK(o.phi_bar == l.phi_bar);
    // With w̄_p = w̃_s = 1 the OWL displays keep their own constants.
    CHECK(o.width_unit_ball == doctest::Approx(2.0 * std::sqrt(2.0 + std::log(200.0))));
    CHECK(o.width_cone_sq == doctest::Approx(2.0 * 10 * std::log(10.0) + 15.0));
    CHECK(o.width_unit_ball >= l.width_unit_ball);
    CHECK(o.width_cone_sq >= l.width_cone_sq);

    std::vector<double> w(p, 1.0);
    for (std::size_t i = 0; i < p; ++i) w[i] = 2.0 - static_cast<double>(i) / static_cast<double>(p);
    const auto g = theory_bounds(PenaltySpec::owl(w), TheoryParams{p, s, {}});
    double wbar = 0, wtail = 0;
    for (std::size_t i = 0; i < p; ++i) {
        wbar += w[i];
        if (i >= s) wtail += w[i];
    }
    wbar /= p;
    wtail /= static_cast<double>(p - s);
    CHECK(g.width_unit_ball == doctest::Approx(2.0 * std::sqrt(2.0 + std::log(200.0)) / wbar));
    CHECK(g.phi == doctest::Approx(2.0 * 4.0 / wtail * std::sqrt(10.0)));
    CHECK(g.phi_bar == doctest::Approx(0.5));
}

TEST_CASE("theory bounds: group and k-support") {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < 100; i += 5) groups.push_back({i, i + 1, i + 2, i + 3, i + 4});
    const auto g = theory_bounds(PenaltySpec::group(groups), TheoryParams{100, 4, {}});
    CHECK(g.width_unit_ball == doctest::Approx(5.697).epsilon(1e-3));
    const double root = std::sqrt(2.0 * std::log(16.0)) + std::sqrt(5.0);
    CHECK(g.width_cone_sq == doctest::Approx((root * root + 5.0) * 4.0));
    CHECK(g.phi == doctest::Approx(2.0));
    CHECK(g.phi_overlapping == doctest::Approx(4.0));
    CHECK(g.phi_bar == 1.0);

    const auto k = theory_bounds(PenaltySpec::ksupport(5), TheoryParams{100, 5, 3.0});
    CHECK(k.width_unit_ball == doctest::Approx(std::sqrt(5.0) + 2.0 * std::sqrt(5.0 * std::log(20.0) + 5.0)));
    CHECK(k.width_cone_sq == doctest::Approx(std::sqrt(6.0 * 5.0 * std::log(20.0) + 7.5)));
    CHECK(k.phi == doctest::Approx(std::sqrt(2.0) * 7.0));
    CHECK(k.cone_width_verbatim);
    CHECK_THROWS_AS(theory_bounds(PenaltySpec::ksupport(5), TheoryParams{100, 5, {}}), ParameterError);
    CHECK_THROWS_AS(theory_bounds(PenaltySpec::nuclear(3, 3), TheoryParams{9, 1, {}}), ParameterError);
}

TEST_CASE("theory lambda scaling") {
    const double base = lambda_theory(3.0, 100, 1.5, 2.0, 1.0);
    CHECK(lambda_theory(3.0, 200, 1.5, 2.0, 1.0) == doctest::Approx(base / std::sqrt(2.0)));
    CHECK(lambda_theory(3.0, 100, 1.5, 4.0, 1.0) == doctest::Approx(2.0 * base));
    const double p = 50, n = 400;
    CHECK(lambda_theory(std::sqrt(std::log(2 * p)), 400, 1.0, 1.0, 1.0) ==
          doctest::Approx(2.0 * std::sqrt(std::log(2 * p) / n)));
    CHECK_THROWS_AS(lambda_theory(1.0, 0, 1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("penalty validation") {
    CHECK_THROWS(PenaltySpec::owl({1, 2}).validate(2));
    CHECK_THROWS(PenaltySpec::owl({0, 0}).validate(2));
    CHECK_THROWS(PenaltySpec::group({{0}, {0, 1}}).validate(2));
    CHECK_THROWS(PenaltySpec::group({{0}}).validate(2));
    CHECK_THROWS(PenaltySpec::ksupport(0).validate(2));
    CHECK_THROWS(PenaltySpec::ksupport(3).validate(2));
    CHECK_THROWS(PenaltySpec::nuclear(2, 2).validate(5));
    CHECK_NOTHROW(PenaltySpec::own_other(2, 1, 1).validate(8));
}
