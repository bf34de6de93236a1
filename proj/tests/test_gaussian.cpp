#include "doctest.h"
#include "herald/gaussian.hpp"

using namespace herald;

TEST_CASE("epr state amplitudes and norm") {
    // vacuum limit
    PhotonVector v0 = epr_state(EprParams::from_lambda(0.0), 10);
    CHECK(v0.size() == 1);
    OccupationTuple vac;
    CHECK(v0.amplitude(vac) == Complex(1.0));

    PhotonVector v = epr_state(EprParams::from_lambda(0.6), 40);
    OccupationTuple t22;
    t22.m_minus = t22.m_plus = 2;
    CHECK(v.amplitude(t22).real() == doctest::Approx(0.8 * 0.36).epsilon(1e-14));
    CHECK(v.norm2() == doctest::Approx(1.0 - std::pow(0.36, 41)).epsilon(1e-14));

    // only diagonal |m,m> occupations appear
    for (const auto& [k, a] : v.entries()) {
        auto t = OccupationTuple::unpack(k);
        CHECK(t.m_minus == t.m_plus);
        CHECK(t.mt_minus == 0);
        CHECK(t.mt_plus == 0);
    }
    CHECK_THROWS_AS((void)epr_state(EprParams{1.0}, 5), std::domain_error);
}

TEST_CASE("lambda from mean and round trip") {
    CHECK(lambda_from_mean(0.0) == 0.0);
    CHECK(lambda_from_mean(1.0) == doctest::Approx(0.70710678118654752).epsilon(1e-12));
    CHECK(lambda_from_mean(3.0) == doctest::Approx(0.86602540378443865).epsilon(1e-12));
    CHECK_THROWS_AS((void)lambda_from_mean(-0.5), std::domain_error);

    for (double lam = 0.0; lam <= 0.999; lam += 0.037)
        CHECK(lambda_from_mean(mean_from_lambda(lam)) == doctest::Approx(lam).epsilon(1e-12));
}

TEST_CASE("photon number moments") {
    auto m0 = photon_number_moments(EprParams::from_lambda(0.0));
    CHECK(m0.mean == 0.0);
    CHECK(m0.variance == 0.0);

    auto m1 = photon_number_moments(EprParams::from_mean(1.0));
    CHECK(m1.variance == doctest::Approx(2.0).epsilon(1e-12));
    auto m5 = photon_number_moments(EprParams::from_mean(5.0));
    CHECK(m5.variance == doctest::Approx(30.0).epsilon(1e-12));

    // truncated summation agrees within the tail bound
    for (double mb : {0.5, 1.0, 3.0}) {
        EprParams p = EprParams::from_mean(mb);
        int n = truncation_level(p.lambda, 1e-14);
        auto a = photon_number_moments(p);
        auto s = photon_number_moments_summed(p, n);
        CHECK(s.mean == doctest::Approx(a.mean).epsilon(1e-10));
        CHECK(s.variance == doctest::Approx(a.variance).epsilon(1e-9));
    }

    // number-basis mean equals sinh^2 r
    for (double r : {0.2, 0.7, 1.3}) {
        EprParams p = EprParams::from_squeezing(r);
        CHECK(p.mean_photons() == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-12));
    }
}

TEST_CASE("standard covariance") {
    CovarianceMatrix v0 = standard_covariance(0.0);
    CHECK((v0 - 0.5 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);

    CovarianceMatrix v1 = standard_covariance(1.0);
    CHECK(2.0 * v1(0, 0) == doctest::Approx(3.7621956910836314).epsilon(1e-12));  // cosh 2

    for (double r = 0.0; r <= 2.0; r += 0.13)
        CHECK(standard_covariance(r).determinant() == doctest::Approx(1.0 / 16.0).epsilon(1e-9));
    CHECK_THROWS_AS((void)standard_covariance(-0.1), std::domain_error);
}

TEST_CASE("validate gaussian") {
    auto rep = validate_gaussian(standard_covariance(0.5));
    CHECK(rep.pure);
    CHECK(rep.physical);
    CHECK(rep.epr_form);

    // vacuum
    auto vac = validate_gaussian(CovarianceMatrix(0.5 * Eigen::Matrix4d::Identity()));
    CHECK(vac.pure);
    CHECK(vac.physical);
    CHECK(vac.epr_form);

    // thermal-like: physical but mixed, and not of the squeezed form
    auto th = validate_gaussian(CovarianceMatrix(1.0 * Eigen::Matrix4d::Identity()));
    CHECK_FALSE(th.pure);
    CHECK(th.physical);
    CHECK_FALSE(th.epr_form);

    // below the uncertainty bound
    auto bad = validate_gaussian(CovarianceMatrix(0.2 * Eigen::Matrix4d::Identity()));
    CHECK_FALSE(bad.physical);

    Eigen::Matrix4d asym = Eigen::Matrix4d::Identity();
    asym(0, 1) = 0.3;
    CHECK_THROWS_AS((void)validate_gaussian(CovarianceMatrix(asym)), std::invalid_argument);

    // every generated standard form passes all three flags, and the
    // positivity constraint s > max(1/2, |h-|, |h+|) holds
    for (double r = 0.0; r <= 1.6; r += 0.2) {
        CovarianceMatrix V = standard_covariance(r);
        auto g = validate_gaussian(V);
        CHECK(g.pure);
        CHECK(g.physical);
        CHECK(g.epr_form);
        CHECK(V(0, 0) >= std::max({0.5, std::abs(V(0, 2)), std::abs(V(1, 3))}) - 1e-12);
    }
}
