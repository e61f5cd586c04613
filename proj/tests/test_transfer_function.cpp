#include "prtune/transfer_function.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace prtune;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// test-local fixed-step RK4 with constant input, for the realization check
double step_response_rk4(const StateSpaceRealization& ss, double t_end, double h, double u) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.order());
    const long n = std::lround(t_end / h);
    for (long i = 0; i < n; ++i) {
        const Eigen::VectorXd k1 = ss.A * x + ss.B * u;
        const Eigen::VectorXd k2 = ss.A * (x + 0.5 * h * k1) + ss.B * u;
        const Eigen::VectorXd k3 = ss.A * (x + 0.5 * h * k2) + ss.B * u;
        const Eigen::VectorXd k4 = ss.A * (x + h * k3) + ss.B * u;
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return ss.C.dot(x) + ss.D * u;
}

}  // namespace

TEST_SUITE("lti") {

TEST_CASE("first-order pole at its corner frequency") {
    const TransferFunction g({1.0}, {1.0, 1.0});
    const FrequencyPoint p = freq_response(g, 1.0);
    CHECK(p.magnitude == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p.phase_deg == doctest::Approx(-45.0).epsilon(1e-12));
}

TEST_CASE("double pole reaches -120 degrees at sqrt(3)") {
    const TransferFunction g({1.0}, {1.0, 2.0, 1.0});
    const FrequencyPoint p = freq_response(g, kSqrt3);
    CHECK(p.magnitude == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.phase_deg == doctest::Approx(-120.0).epsilon(1e-12));
}

TEST_CASE("dead time contributes -omega*L to the unwrapped phase") {
    const TransferFunction g({1.0}, {1.0, 2.0, 1.0}, 1.0);
    const FrequencyPoint p = freq_response(g, 1.3066);
    CHECK(std::abs(p.phase_deg + 180.0) < 0.05);
    CHECK(p.magnitude == doctest::Approx(0.3694).epsilon(3e-4));
}

TEST_CASE("series composes by convolution and delays add") {
    const TransferFunction lag({1.0}, {1.0, 1.0});
    const TransferFunction squared = series(lag, lag);
    CHECK(squared.den()[0] == 1.0);
    CHECK(squared.den()[1] == 2.0);
    CHECK(squared.den()[2] == 1.0);
    CHECK(squared.delay() == 0.0);

    const TransferFunction a({1.0}, {1.0, 1.0}, 0.5);
    const TransferFunction pure_delay({1.0}, {1.0}, 0.5);
    CHECK(series(a, pure_delay).delay() == doctest::Approx(1.0));

    const TransferFunction c = series(TransferFunction({2.0}, {1.0, 2.0}),
                                      TransferFunction({3.0}, {1.0, 0.0}));
    CHECK(c.num()[0] == 6.0);
    CHECK(c.den()[0] == 1.0);
    CHECK(c.den()[1] == 2.0);
    CHECK(c.den()[2] == 0.0);
    CHECK(c.delay() == 0.0);
}

TEST_CASE("series frequency response factors into the parts") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pole(-5.0, -0.1);
    std::uniform_real_distribution<double> gain(0.2, 3.0);
    std::uniform_real_distribution<double> freq_log(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const TransferFunction g1({gain(rng)}, {1.0, -pole(rng) - pole(rng),
                                                pole(rng) * pole(rng) + 0.5},
                                  0.25);
        const TransferFunction g2({gain(rng), gain(rng)}, {1.0, -pole(rng)});
        const double w = std::pow(10.0, freq_log(rng));
        const FrequencyPoint p1 = freq_response(g1, w);
        const FrequencyPoint p2 = freq_response(g2, w);
        const FrequencyPoint ps = freq_response(series(g1, g2), w);
        CHECK(ps.magnitude ==
              doctest::Approx(p1.magnitude * p2.magnitude).epsilon(1e-10));
        CHECK(ps.phase_deg == doctest::Approx(p1.phase_deg + p2.phase_deg).epsilon(1e-10));
    }
}

TEST_CASE("unwrapped phase of delayed lags is strictly decreasing") {
    const struct {
        double delay;
        int n;
    } cases[] = {{0.0, 1}, {0.0, 3}, {1.0, 2}, {0.5, 4}};
    for (const auto& c : cases) {
        TransferFunction g({1.0}, {1.0, 1.0}, c.delay);
        for (int k = 1; k < c.n; ++k) g = series(g, TransferFunction({1.0}, {1.0, 1.0}));
        double prev = freq_response(g, 1e-2).phase_deg;
        for (int i = 1; i <= 200; ++i) {
            const double w = std::pow(10.0, -2.0 + 4.0 * i / 200.0);
            const double phase = freq_response(g, w).phase_deg;
            CHECK(phase < prev);
            prev = phase;
        }
    }
}

TEST_CASE("controllable canonical realizations") {
    SUBCASE("first order") {
        const StateSpaceRealization ss = to_state_space(TransferFunction({1.0}, {1.0, 1.0}));
        REQUIRE(ss.order() == 1);
        CHECK(ss.A(0, 0) == -1.0);
        CHECK(ss.B[0] == 1.0);
        CHECK(ss.C[0] == 1.0);
        CHECK(ss.D == 0.0);
    }
    SUBCASE("companion form of a double pole") {
        const StateSpaceRealization ss =
            to_state_space(TransferFunction({1.0}, {1.0, 2.0, 1.0}));
        REQUIRE(ss.order() == 2);
        CHECK(ss.A(0, 0) == -2.0);
        CHECK(ss.A(0, 1) == -1.0);
        CHECK(ss.A(1, 0) == 1.0);
        CHECK(ss.A(1, 1) == 0.0);
        CHECK(ss.B[0] == 1.0);
        CHECK(ss.B[1] == 0.0);
        CHECK(ss.C[0] == 0.0);
        CHECK(ss.C[1] == 1.0);
        CHECK(ss.D == 0.0);
    }
    SUBCASE("biproper input splits off its direct term") {
        // kp + (s)/(s^2 + 1) with kp = 1
        const StateSpaceRealization ss =
            to_state_space(TransferFunction({1.0, 1.0, 1.0}, {1.0, 0.0, 1.0}));
        REQUIRE(ss.order() == 2);
        CHECK(ss.D == 1.0);
        CHECK(ss.C[0] == 1.0);  // remainder s / (s^2 + 1)
        CHECK(ss.C[1] == 0.0);
    }
}

TEST_CASE("realization step response matches the analytic solution") {
    const double h = 1e-3;
    const TransferFunction lag({1.0}, {1.0, 1.0});
    const TransferFunction lag2({1.0}, {1.0, 2.0, 1.0});
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
        CHECK(step_response_rk4(to_state_space(lag), t, h, 1.0) ==
              doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-6));
        CHECK(step_response_rk4(to_state_space(lag2), t, h, 1.0) ==
              doctest::Approx(1.0 - std::exp(-t) * (1.0 + t)).epsilon(1e-6));
    }
}

TEST_CASE("singular frequency at an imaginary-axis pole") {
    const TransferFunction resonant({1.0}, {1.0, 0.0, 1.0});
    CHECK_THROWS_AS(freq_response(resonant, 1.0), std::domain_error);
    CHECK_NOTHROW(freq_response(resonant, 1.001));
}

TEST_CASE("improper functions have no realization") {
    CHECK_THROWS_AS(to_state_space(TransferFunction({1.0, 0.0, 0.0}, {1.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("construction validates the denominator and delay") {
    CHECK_THROWS_AS(TransferFunction({1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(TransferFunction({1.0}, {1.0, 1.0}, -0.1), std::invalid_argument);
}

TEST_CASE("polynomial roots via balanced companion") {
    const auto roots = polynomial_roots(Eigen::Vector3d(1.0, 3.0, 2.0));
    REQUIRE(roots.size() == 2);
    double r0 = roots[0].real(), r1 = roots[1].real();
    if (r0 > r1) std::swap(r0, r1);
    CHECK(r0 == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(r1 == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("dc gain and integrator detection") {
    CHECK(TransferFunction({2.0}, {1.0, 4.0}).dc_gain() == doctest::Approx(0.5));
    const TransferFunction integ({1.0}, {1.0, 0.0});
    CHECK(integ.has_pole_at_origin());
    CHECK(std::isinf(integ.dc_gain()));
}

}  // TEST_SUITE
