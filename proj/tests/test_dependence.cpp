#include <doctest.h>

#include "swvar/dependence.hpp"

#include <cmath>
#include <numbers>

using namespace swvar;

namespace {

Matrix random_with_norm(Rng& rng, Eigen::Index p, double target_norm) {
    std::normal_distribution<double> g;
    Matrix A(p, p);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    Eigen::JacobiSVD<Matrix> svd(A);
    return A * (target_norm / svd.singularValues()(0));
}

double c_closed_form(double rho) { return 1.0 / ((1.0 - rho) * (1.0 - rho * rho)); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("spectral radius examples") {
    Matrix J(2, 2);
    J << 0.9, 1e6, 0.0, 0.9;
    CHECK(spectral_radius(J) == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(spectral_radius(Matrix::Zero(3, 3)) == 0.0);
    const double th = 0.7;
    Matrix R(2, 2);
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    CHECK(spectral_radius(0.5 * R) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(spectral_radius(Matrix::Zero(2, 3)), StructuralError);
}

TEST_CASE("operator norm examples") {
    Matrix A(2, 2);
    A << 0.5, 1.0, 0.0, 0.5;
    CHECK(op_norm(A) == doctest::Approx(std::sqrt(0.75 + 0.5 * std::sqrt(2.0))).epsilon(1e-10));
    CHECK(op_norm(Matrix::Identity(4, 4)) == doctest::Approx(1.0));
    Matrix D = Matrix::Zero(2, 2);
    D.diagonal() << 3.0, -4.0;
    CHECK(op_norm(D) == doctest::Approx(4.0));
}

TEST_CASE("spectral radius never exceeds the operator norm") {
    Rng rng(1);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 200; ++rep) {
        Matrix A(5, 5);
        for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
        CHECK(spectral_radius(A) <= op_norm(A) * (1 + 1e-12));
    }
}

TEST_CASE("dependence factor closed forms") {
    const auto r = dependence_factor(LinearProcessSpec::var1(0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2)));
    CHECK(std::abs(r.c_factor - 8.0 / 3.0) < 1e-6);
    CHECK(r.tail_bound <= 1e-10);
    CHECK(r.rho == doctest::Approx(0.5));
    CHECK(r.op_norm == doctest::Approx(0.5));

    const auto z = dependence_factor(LinearProcessSpec::var1(Matrix::Zero(3, 3), Matrix::Identity(3, 3)));
    CHECK(z.c_factor == 1.0);

    const double c1 = dependence_factor(LinearProcessSpec::var1(0.1 * Matrix::Identity(2, 2), Matrix::Identity(2, 2))).c_factor;
    const double c9 = dependence_factor(LinearProcessSpec::var1(0.9 * Matrix::Identity(2, 2), Matrix::Identity(2, 2))).c_factor;
    CHECK(c1 == doctest::Approx(c_closed_form(0.1)).epsilon(1e-8));
    CHECK(c9 == doctest::Approx(c_closed_form(0.9)).epsilon(1e-8));
    CHECK(c9 > r.c_factor);
    CHECK(r.c_factor > c1);
}

TEST_CASE("dependence factor respects the operator-norm bound") {
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        const double nrm = 0.8 * (rep + 1) / 50.0;
        const Matrix A = random_with_norm(rng, 4, nrm);
        const auto r = dependence_factor(LinearProcessSpec::var1(A, Matrix::Identity(4, 4)));
        CHECK(r.c_factor <= 1.0 / ((1.0 - nrm) * (1.0 - nrm)) + 1e-9);
        CHECK(r.c_factor >= 1.0);
    }
}

TEST_CASE("dependence factor errors") {
    CHECK_THROWS_AS(dependence_factor(LinearProcessSpec::var1(Matrix::Identity(2, 2), Matrix::Identity(2, 2))),
                    StabilityError);
    Truncation tight{1e-14, 3};
    CHECK_THROWS_AS(dependence_factor(LinearProcessSpec::var1(0.99 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), tight)),
                    TruncationError);
    try {
        dependence_factor(LinearProcessSpec::var1(0.99 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), tight));
    } catch (const TruncationError& e) {
        // Ψ_0..Ψ_2 norms 1, .99, .9801
        const double a0 = 1.0, a1 = 0.99, a2 = 0.9801;
        CHECK(e.partial_value() == doctest::Approx(a0 * (a0 + a1 + a2) + a1 * (a1 + a2) + a2 * a2));
    }
}

TEST_CASE("finite filters and the first-term lower bound") {
    Matrix psi0(2, 2), psi1(2, 2);
    psi0 << 2.0, 0.0, 0.0, 1.0;
    psi1 << 0.0, 1.0, 0.0, 0.0;
    const auto r = dependence_factor(LinearProcessSpec::finite({psi0, psi1}, Matrix::Identity(2, 2)));
    // ‖Ψ0‖(‖Ψ0‖+‖Ψ1‖) + ‖Ψ1‖² = 2·3 + 1
    CHECK(r.c_factor == doctest::Approx(7.0));
    CHECK(r.c_factor >= 4.0);
}

TEST_CASE("Lyapunov solutions") {
    const Matrix S = solve_lyapunov(0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    CHECK((S - (4.0 / 3.0) * Matrix::Identity(2, 2)).norm() < 1e-12);
    Matrix se(2, 2);
    se << 2.0, 0.5, 0.5, 1.0;
    CHECK((solve_lyapunov(Matrix::Zero(2, 2), se) - se).norm() == 0.0);

    Rng rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        Matrix B = random_with_norm(rng, 6, 1.0);
        B *= 0.95 / spectral_radius(B);
        const Matrix sig = solve_lyapunov(B, Matrix::Identity(6, 6));
        CHECK((sig - B.transpose() * sig * B - Matrix::Identity(6, 6)).norm() < 1e-10);
    }
    CHECK_THROWS_AS(solve_lyapunov(1.1 * Matrix::Identity(2, 2), Matrix::Identity(2, 2)), StabilityError);
}

TEST_CASE("spectral density examples") {
    Matrix se(2, 2);
    se << 1.0, 0.3, 0.3, 2.0;
    const auto white = LinearProcessSpec::var1(Matrix::Zero(2, 2), se);
    for (double th : {-2.0, 0.0, 1.3}) {
        CHECK((spectral_density(white, th) - se.cast<std::complex<double>>() / kTwoPi).norm() < 1e-14);
    }
    Matrix b(1, 1);
    b << 0.5;
    const auto ar = LinearProcessSpec::var1(b, Matrix::Identity(1, 1));
    CHECK(spectral_density(ar, 0.0)(0, 0).real() == doctest::Approx(1.0 / (kTwoPi * 0.25)).epsilon(1e-9));
    const double th = 1.1;
    const double expect = 1.0 / (kTwoPi * std::norm(1.0 - 0.5 * std::polar(1.0, -th)));
    CHECK(spectral_density(ar, th)(0, 0).real() == doctest::Approx(expect).epsilon(1e-9));

    Matrix A(2, 2);
    A << 0.4, 0.3, -0.2, 0.5;
    const auto spec = LinearProcessSpec::var1(A, se);
    const CMatrix f = spectral_density(spec, 0.8);
    const CMatrix g = spectral_density(spec, -0.8);
    CHECK((f - f.adjoint()).norm() < 1e-14);
    CHECK((g - f.conjugate()).norm() < 1e-12);
}

TEST_CASE("stability factors of white noise") {
    Matrix se = Matrix::Zero(2, 2);
    se.diagonal() << 1.0, 4.0;
    const auto sf = stability_factors(LinearProcessSpec::var1(Matrix::Zero(2, 2), se));
    CHECK(sf.m_upper == doctest::Approx(4.0 / kTwoPi));
    CHECK(sf.m_lower == doctest::Approx(1.0 / kTwoPi));
    CHECK_THROWS_AS(stability_factors(LinearProcessSpec::var1(Matrix::Zero(2, 2), se), 4), ParameterError);
}

TEST_CASE("mu bounds") {
    const auto w = mu_bounds(LinearProcessSpec::var1(Matrix::Zero(3, 3), Matrix::Identity(3, 3)));
    CHECK(w.mu_min == doctest::Approx(1.0));
    CHECK(w.mu_max == doctest::Approx(1.0));
    Matrix b(1, 1);
    b << 0.5;
    const auto m = mu_bounds(LinearProcessSpec::var1(b, Matrix::Identity(1, 1)));
    CHECK(m.mu_max == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(m.mu_min == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("stability and mu sandwiches on random stable VAR(1)") {
    Rng rng(4);
    std::uniform_int_distribution<int> dim(2, 8);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = static_cast<Eigen::Index>(dim(rng));
        Matrix A = random_with_norm(rng, p, 1.0);
        A *= 0.8 / spectral_radius(A);
        Matrix L = random_with_norm(rng, p, 1.0);
        const Matrix se = L * L.transpose() + 0.5 * Matrix::Identity(p, p);
        Eigen::SelfAdjointEigenSolver<Matrix> es(se);
        const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
        const auto spec = LinearProcessSpec::var1(A, se);
        const auto sf = stability_factors(spec);
        const double c = dependence_factor(spec).c_factor;
        CHECK(sf.m_lower <= sf.m_upper);
        CHECK(kTwoPi * sf.m_upper <= 2.0 * lmax * c * 1.01);
        CHECK(lmin / (c * c) <= kTwoPi * sf.m_lower * 1.01);
        const auto mu = mu_bounds(spec);
        CHECK(lmin * mu.mu_min / kTwoPi <= sf.m_lower * 1.01);
        CHECK(sf.m_upper <= lmax * mu.mu_max / kTwoPi * 1.01);
    }
}

TEST_CASE("dependence report combines the pieces") {
    const auto r = dependence_report(0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    CHECK(r.c_factor == doctest::Approx(8.0 / 3.0));
    CHECK(r.m_upper == doctest::Approx(4.0 / kTwoPi).epsilon(1e-6));
    CHECK(r.m_lower == doctest::Approx(1.0 / (kTwoPi * 2.25)).epsilon(1e-6));
}
