#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "freqloc/special_functions.hpp"
#include "support/oracles.hpp"

using namespace freqloc;

TEST(BesselJ0, ClosedValues) {
    EXPECT_EQ(bessel_j0(0.0), 1.0);
    EXPECT_NEAR(bessel_j0(2.404825557695773), 0.0, 1e-10);
    EXPECT_NEAR(bessel_j0(1.0), 0.7651976866, 1e-9);
}

TEST(BesselJ0, MatchesIntegralOracleUpTo50) {
    for (double z = 0.0; z <= 50.0; z += 0.37) EXPECT_NEAR(bessel_j0(z), oracle::j0_integral(z), 1e-12) << "z = " << z;
}

TEST(BesselJ0, MatchesPowerSeriesOracleForSmallArguments) {
    for (double z = 0.0; z <= 4.0; z += 0.25) EXPECT_NEAR(bessel_j0(z), oracle::j0_power_series(z), 1e-13);
}

TEST(BesselJ0, IsEven) {
    for (double z : {0.3, 7.0, 13.5, 44.0}) EXPECT_EQ(bessel_j0(-z), bessel_j0(z));
}

TEST(BesselJ0, RejectsHugeArguments) { EXPECT_THROW(bessel_j0(2e6), RangeError); }

TEST(BesselJ0, SatisfiesBesselOde) {
    std::mt19937_64 rng(11u);
    std::uniform_real_distribution<double> Z(0.5, 40.0);
    const double h = 1e-2;
    for (int i = 0; i < 100; ++i) {
        double z = Z(rng);
        auto f = [](double x) { return bessel_j0(x); };
        double d1 = (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h);
        double d2 = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h);
        EXPECT_LE(std::abs(d2 + d1 / z + f(z)), 1e-8) << "z = " << z;
    }
}

TEST(SphericalBessel, MatchesClosedForms) {
    for (int l = 0; l <= 2; ++l)
        for (double x : {0.05, 0.5, 1.0, 3.7, 10.0, 42.0})
            EXPECT_NEAR(spherical_bessel_j(l, x), oracle::spherical_j_closed(l, x), 1e-12) << l << " " << x;
}

TEST(SphericalBessel, SmallArgumentLimit) {
    EXPECT_NEAR(spherical_bessel_j(0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(spherical_bessel_j(3, 0.0), 0.0, 1e-15);
    // j_l(x) ~ x^l / (2l+1)!!
    EXPECT_NEAR(spherical_bessel_j(3, 1e-3) / 1e-9, 1.0 / 105.0, 1e-8);
}

TEST(ErfiScaled, ClosedValues) {
    EXPECT_NEAR(erfi_scaled(0.0), 2.0 / std::sqrt(std::numbers::pi), 1e-10);
    EXPECT_NEAR(erfi_scaled(1.0), 0.6071, 1e-4);
    EXPECT_NEAR(erfi_scaled(100.0) / (1.0 / (std::sqrt(std::numbers::pi) * 100.0)), 1.0, 0.02);
}

TEST(ErfiScaled, MatchesQuadratureOracle) {
    for (double nu : {0.01, 0.5, 2.0, 7.5, 30.0, 250.0})
        EXPECT_NEAR(erfi_scaled(nu) / oracle::erfi_scaled_quad(nu), 1.0, 1e-8) << "nu = " << nu;
}

TEST(ErfiScaled, StrictlyDecreasingAndBounded) {
    double prev = erfi_scaled(0.0);
    for (double nu = 0.05; nu < 400.0; nu *= 1.3) {
        double v = erfi_scaled(nu);
        EXPECT_LT(v, prev);
        EXPECT_GT(v, 0.0);
        prev = v;
    }
}

TEST(ErfiScaled, RejectsNegative) { EXPECT_THROW(erfi_scaled(-0.1), DomainError); }

TEST(LambertW0, ClosedValues) {
    EXPECT_EQ(lambert_w0(0.0), 0.0);
    EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-14);
    double x = std::exp(2.0) / 2.0, w = lambert_w0(x);
    EXPECT_GE(w, 2.0 - std::log(2.0) - std::log(2.0 - std::log(2.0)));
    EXPECT_LE(w, 2.0 - std::log(2.0));
}

TEST(LambertW0, ResidualMonotoneAndBracketed) {
    double prev = -1.0;
    for (double x = -1.0 / std::numbers::e + 1e-9; x < 1e6; x = x < 1 ? x + 0.05 : x * 1.7) {
        double w = lambert_w0(x);
        EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12 * std::max(1.0, std::abs(x))) << x;
        EXPECT_GT(w, prev);
        prev = w;
        if (x >= std::exp(2.0) / 2.0) {
            EXPECT_GE(w, std::log(x) - std::log(std::log(x)) - 1e-12);
            EXPECT_LE(w, std::log(x) + 1e-12);
        }
    }
}

TEST(LambertW0, RejectsBelowBranchPoint) { EXPECT_THROW(lambert_w0(-0.5), DomainError); }

TEST(Legendre, ClosedValues) {
    EXPECT_EQ(legendre_p(0, 0.37), 1.0);
    EXPECT_EQ(legendre_p(2, 1.0), 1.0);
    EXPECT_NEAR(legendre_p(4, 0.0), 3.0 / 8.0, 1e-15);
}

TEST(Legendre, MatchesExplicitFormula) {
    for (int n = 0; n <= 20; ++n)
        for (double x = -1.0; x <= 1.0; x += 0.125) EXPECT_NEAR(legendre_p(n, x), oracle::legendre_explicit(n, x), 1e-12);
}

TEST(Legendre, UnitAtOneAndBounded) {
    for (int n = 0; n <= 200; n += 7) {
        EXPECT_EQ(legendre_p(n, 1.0), 1.0);
        for (double x = -1.0; x <= 1.0; x += 0.01) EXPECT_LE(std::abs(legendre_p(n, x)), 1.0 + 1e-12);
    }
}

TEST(Legendre, OrthogonalOnRombergNodes) {
    for (int n = 0; n <= 12; ++n)
        for (int m = 0; m <= 12; ++m) {
            double v = oracle::romberg([&](double x) { return legendre_p(n, x) * legendre_p(m, x); }, -1.0, 1.0, 12);
            EXPECT_NEAR(v, n == m ? 2.0 / (2 * n + 1) : 0.0, 1e-8) << n << "," << m;
        }
}

TEST(Legendre, RejectsOutsideInterval) {
    EXPECT_THROW(legendre_p(3, 1.5), DomainError);
    EXPECT_THROW(legendre_p(-1, 0.0), DomainError);
}

TEST(DoubleFactorial, ClosedValues) {
    EXPECT_EQ(double_factorial(-1), 1.0L);
    EXPECT_EQ(double_factorial(0), 1.0L);
    EXPECT_EQ(double_factorial(5), 15.0L);
    EXPECT_EQ(double_factorial(8), 384.0L);
}

TEST(DoubleFactorial, LargeArgumentLogConsistent) {
    long double v = double_factorial(301);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0L);
    double expect = oracle::log_odd_double_factorial(151);  // 301!! = (2*151 - 1)!!
    EXPECT_NEAR(double(std::log(v)) / expect, 1.0, 1e-10);
    EXPECT_NEAR(log_double_factorial(301) / expect, 1.0, 1e-10);
}

TEST(DoubleFactorial, RejectsBelowMinusOne) { EXPECT_THROW(double_factorial(-2), DomainError); }
