#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nugap/error.hpp"
#include "nugap/oracle.hpp"
#include "nugap/plants.hpp"

using namespace nugap;
using lti::Complex;

namespace {

plants::RowenParameters simple() {
    plants::RowenParameters p;
    p.T_f = 0.4;
    p.K_F = 0.0;
    p.T_CR = 0.0;
    p.T_cd = 0.2;
    p.B = 1.3;
    p.sample_time = 0.05;
    return p;
}

}  // namespace

TEST_CASE("rowen_gcv_to_power examples") {
    SUBCASE("collapsed blocks leave one lag") {
        auto p = simple();
        p.T_cd = 1e-6;
        const auto tf = plants::rowen_gcv_to_power(p);
        CHECK(tf.input_delay() == 0);
        CHECK(std::abs(lti::freq_response(tf, 0.0) - Complex(p.B, 0.0)) < 1e-10);
        const auto poles = lti::poles(tf);
        int slow = 0;
        for (const Complex& z : poles) {
            slow += std::abs(z) > 1e-6 ? 1 : 0;
        }
        CHECK(slow == 1);
    }
    SUBCASE("zero torque gain") {
        auto p = simple();
        p.B = 0.0;
        CHECK(plants::rowen_gcv_to_power(p).is_zero());
    }
    SUBCASE("DC gain with fuel feedback") {
        auto p = simple();
        p.K_F = 0.3;
        p.T_CR = 0.1;
        const auto tf = plants::rowen_gcv_to_power(p);
        CHECK(std::abs(lti::freq_response(tf, 0.0) - Complex(p.B / 1.3, 0.0)) < 1e-10);
        CHECK(tf.input_delay() == 2);
    }
    SUBCASE("invalid parameters") {
        auto p = simple();
        p.T_f = 0.0;
        CHECK_THROWS_AS((void)plants::rowen_gcv_to_power(p), Error);
        p = simple();
        p.T_CR = -0.1;
        CHECK_THROWS_AS((void)plants::rowen_gcv_to_power(p), Error);
    }
}

TEST_CASE("rowen builder invariants") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> logt(std::log(0.01), std::log(10.0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        plants::RowenParameters p;
        p.T_f = std::exp(logt(rng));
        p.T_cd = std::exp(logt(rng));
        p.T_CR = std::exp(logt(rng));
        p.K_F = u(rng);
        p.B = 0.5 + u(rng);
        p.sample_time = 0.05;
        const auto tf = plants::rowen_gcv_to_power(p);
        CHECK(lti::is_stable(tf));
        CHECK(std::abs(lti::freq_response(tf, 0.0) - Complex(p.B / (1.0 + p.K_F), 0.0)) < 1e-9);
        CHECK(tf.input_delay() == static_cast<std::size_t>(std::lround(p.T_CR / 0.05)));
    }
    for (int k : {1, 2, 5}) {
        auto p = simple();
        p.T_CR = 0.1 * k;
        const auto single = plants::rowen_gcv_to_power(p).input_delay();
        p.T_CR = 0.2 * k;
        CHECK(plants::rowen_gcv_to_power(p).input_delay() == 2 * single);
    }
}

TEST_CASE("textbook_pair") {
    const auto [g1, g2] = plants::textbook_pair();
    CHECK(std::abs(lti::freq_response(g1, 0.0)) < 1e-15);
    CHECK(std::abs(lti::freq_response(g2, std::numbers::pi) - Complex(-2.0, 0.0)) < 1e-12);
    CHECK(oracle::chordal_sup(g1, g2).value == doctest::Approx(0.9308).epsilon(5e-4));
}

TEST_CASE("random_stable_plant") {
    std::mt19937_64 a(5);
    std::mt19937_64 b(5);
    const auto pa = plants::random_stable_plant(a, 1);
    CHECK(pa == plants::random_stable_plant(b, 1));
    CHECK(lti::is_stable(pa));

    std::mt19937_64 rng(123);
    int stable = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto tf = plants::random_stable_plant(rng, 1 + i % 6);
        stable += lti::is_stable(tf) ? 1 : 0;
        if (i % 10 == 0) {
            const double sup = oracle::hinf_norm(tf).value;
            CHECK(sup >= 0.5 - 1e-6);
            CHECK(sup <= 2.0 + 1e-6);
        }
    }
    CHECK(stable == 1000);
    CHECK_THROWS_AS((void)plants::random_stable_plant(rng, 0), Error);
    CHECK_THROWS_AS((void)plants::random_stable_plant(rng, 7), Error);
}

TEST_CASE("builtin plants") {
    for (const auto& p : plants::builtin_plants()) {
        CAPTURE(p.name);
        const auto tf = plants::builtin(p.name);
        REQUIRE(tf.has_value());
        CHECK(lti::is_stable(*tf));
    }
    CHECK_FALSE(plants::builtin("no_such_plant").has_value());
    for (const auto& s : plants::rowen_slot_names()) {
        CHECK(plants::rowen_slot(s).has_value());
    }
}
