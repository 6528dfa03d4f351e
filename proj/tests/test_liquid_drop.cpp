#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "droplab/errors.hpp"
#include "droplab/green.hpp"
#include "droplab/liquid_drop.hpp"

using namespace droplab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("ball-model coefficients and the inflection identity") {
    const BallModel model;
    CHECK(model.perimeter_coeff > 0.0);
    CHECK(model.coulomb_coeff > 0.0);
    CHECK(model.perimeter_coeff / (5.0 * model.coulomb_coeff) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("e0_ball closed-form value at m = 1") {
    const double a = 3.0 * std::cbrt(4.0 * kPi / 3.0);
    const double b = std::pow(3.0 / (4.0 * kPi), 5.0 / 3.0) * (8.0 * kPi / 15.0);
    CHECK(a == doctest::Approx(4.835976).epsilon(1e-6));
    CHECK(b == doctest::Approx(0.153934).epsilon(1e-5));
    CHECK(e0_ball(1.0) == doctest::Approx(a + b).epsilon(1e-15));
    CHECK(e0_ball(1.0) == doctest::Approx(4.98991).epsilon(1e-5));
    CHECK_THROWS_AS(e0_ball(0.0), std::invalid_argument);
    CHECK_THROWS_AS(e0_ball(-2.0), std::invalid_argument);
}

TEST_CASE("e0_ball / m^{2/3} tends to the perimeter coefficient") {
    const BallModel model;
    CHECK(e0_ball(1e-9) / std::pow(1e-9, 2.0 / 3.0) ==
          doctest::Approx(model.perimeter_coeff).epsilon(1e-6));
}

TEST_CASE("e0_ball equals ball perimeter plus ball self energy") {
    for (double m : {0.5, 1.0, 5.0}) {
        const double r = std::cbrt(3.0 * m / (4.0 * kPi));
        const double direct = 4.0 * kPi * r * r + GreenEvaluator::ball_self_coulomb(m, r);
        CHECK(e0_ball(m) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("second derivative signs and the 2 pi root") {
    CHECK(e0_ball_second_derivative(1.0) < 0.0);
    CHECK(e0_ball_second_derivative(10.0) > 0.0);
    CHECK(concavity_threshold() == doctest::Approx(2.0 * kPi).epsilon(1e-14));

    // bisection on e0'' as an independent root check
    double lo = 1.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (e0_ball_second_derivative(mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("binary split threshold closed form and sweep consistency") {
    const double mstar = binary_split_threshold();
    CHECK(mstar == doctest::Approx(10.0 * kPi * (std::cbrt(2.0) - 1.0) /
                                   (1.0 - std::pow(2.0, -2.0 / 3.0)))
                       .epsilon(1e-14));
    CHECK(mstar == doctest::Approx(22.07).epsilon(1e-3));
    CHECK(e0_ball(0.999 * mstar) < 2.0 * e0_ball(0.999 * mstar / 2.0));
    CHECK(e0_ball(1.001 * mstar) > 2.0 * e0_ball(1.001 * mstar / 2.0));
}

TEST_CASE("strict subadditivity below 2 pi") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uM(0.05, 2.0 * kPi), us(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        const double M = uM(rng);
        const double m = us(rng) * M;
        CHECK(e0_ball(M) < e0_ball(m) + e0_ball(M - m));
    }
}

TEST_CASE("optimal_partition keeps small masses whole") {
    const MassPartition p = optimal_partition(1.0, 8, 10.0);
    REQUIRE(p.masses.size() == 1);
    CHECK(p.masses[0] == doctest::Approx(1.0).epsilon(1e-12));

    // 2-part grid-search oracle: no split of M = 1 improves on the single ball
    double best_split = 1e300;
    for (int i = 1; i < 2000; ++i) {
        const double m = i / 2000.0;
        best_split = std::min(best_split, e0_ball(m) + e0_ball(1.0 - m));
    }
    CHECK(p.objective < best_split);
}

TEST_CASE("optimal_partition splits above the binary threshold") {
    const double mstar = binary_split_threshold();
    const MassPartition below = optimal_partition(mstar - 0.5, 2, 30.0);
    CHECK(below.masses.size() == 1);
    const MassPartition above = optimal_partition(mstar + 0.5, 2, 30.0);
    REQUIRE(above.masses.size() == 2);
    CHECK(above.masses[0] == doctest::Approx((mstar + 0.5) / 2.0).epsilon(1e-9));
    CHECK(above.masses[1] == doctest::Approx((mstar + 0.5) / 2.0).epsilon(1e-9));
}

TEST_CASE("partition respects the admissibility cap") {
    // M = 30 with cap 16 admits the unconstrained optimum {15, 15}
    const MassPartition loose = optimal_partition(30.0, 8, 16.0);
    REQUIRE(loose.masses.size() == 2);
    CHECK(loose.masses[0] == doctest::Approx(15.0).epsilon(1e-9));
    // cap 4 pi < 15 forces at least three droplets
    const MassPartition tight = optimal_partition(30.0, 8, 4.0 * kPi);
    CHECK(tight.masses.size() >= 3);
    double sum = 0.0;
    for (double m : tight.masses) {
        CHECK(m <= 4.0 * kPi * (1.0 + 1e-12));
        sum += m;
    }
    CHECK(sum == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(tight.objective >= loose.objective);
}

TEST_CASE("partition invariants over random instances") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uM(0.5, 80.0), uc(5.0, 25.0);
    for (int i = 0; i < 40; ++i) {
        const double M = uM(rng);
        const double cap = uc(rng);
        const int n_max = 12;
        if (n_max * cap < M) continue;
        const MassPartition p = optimal_partition(M, n_max, cap);

        double sum = 0.0;
        int below_threshold = 0;  // free (non-cap-saturated) masses only
        for (double m : p.masses) {
            CHECK(m > 0.0);
            sum += m;
            if (m < 2.0 * kPi && m < cap * (1.0 - 1e-9)) ++below_threshold;
        }
        CHECK(sum == doctest::Approx(M).epsilon(1e-12));
        CHECK(below_threshold <= 1);       // at most one small component
        CHECK(p.kkt_residual < 1e-6);

        // resolution-doubling self-consistency
        const MassPartition p2 = optimal_partition(M, n_max, cap, 1024);
        REQUIRE(p2.masses.size() == p.masses.size());
        for (std::size_t k = 0; k < p.masses.size(); ++k)
            CHECK(p2.masses[k] == doctest::Approx(p.masses[k]).epsilon(1e-8));
    }
}

TEST_CASE("infeasible partitions are rejected") {
    CHECK_THROWS_AS(optimal_partition(10.0, 2, 1.0), config_error);
    CHECK_THROWS_AS(optimal_partition(-1.0, 2, 1.0), config_error);
    CHECK_THROWS_AS(optimal_partition(1.0, 0, 1.0), config_error);
}
