#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <set>

#include "ghzlab/patterns.hpp"

using namespace ghzlab;

TEST_CASE("axis parsing") {
    CHECK(axis_from_char('X') == Axis::X);
    CHECK(axis_from_char('y') == Axis::Y);
    CHECK(axis_char(Axis::Z) == 'Z');
    CHECK_THROWS_AS(axis_from_char('Q'), domain_error);
}

TEST_CASE("wrap_phase lands in (-pi, pi]") {
    const double pi = std::numbers::pi;
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(pi) == pi);
    CHECK(wrap_phase(-pi) == pi);
    CHECK(wrap_phase(3 * pi) == Catch::Approx(pi));
    CHECK(wrap_phase(-pi / 2) == Catch::Approx(-pi / 2));
    for (double a = -20.0; a < 20.0; a += 0.37) {
        const double w = wrap_phase(a);
        CHECK(w > -pi);
        CHECK(w <= pi);
        CHECK(std::abs(std::remainder(w - a, 2 * pi)) < 1e-12);
    }
}

TEST_CASE("setting patterns") {
    const SettingPattern s = SettingPattern::parse("XYZ");
    CHECK(s.size() == 3);
    CHECK(s.at(1) == Axis::X);
    CHECK(s.at(3) == Axis::Z);
    CHECK(s.str() == "XYZ");
    CHECK_FALSE(s.all_x());
    CHECK(SettingPattern::uniform(4, Axis::X).all_x());
    CHECK(SettingPattern::parse("x,y,z") == s);
    CHECK_THROWS_AS(s.at(0), domain_error);
    CHECK_THROWS_AS(s.at(4), domain_error);
    CHECK_THROWS_AS(SettingPattern::parse(""), domain_error);
    CHECK_THROWS_AS(SettingPattern::parse("XQ"), domain_error);
}

TEST_CASE("outcome patterns") {
    const OutcomePattern p = OutcomePattern::parse("+--");
    CHECK(p.size() == 3);
    CHECK(p.at(1) == +1);
    CHECK(p.at(2) == -1);
    CHECK(p.product() == +1);
    CHECK(p.minus_count() == 2);
    CHECK(p.str() == "+--");
    CHECK(p.index() == 0b011);

    SECTION("canonical index round trip") {
        for (std::size_t n = 1; n <= 5; ++n)
            for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
                const OutcomePattern q = OutcomePattern::from_index(n, idx);
                CHECK(q.index() == idx);
                CHECK(OutcomePattern::parse(q.str()) == q);
            }
    }

    SECTION("canonical order puts + before -") {
        CHECK(OutcomePattern::parse("++") < OutcomePattern::parse("+-"));
        CHECK(OutcomePattern::parse("+-") < OutcomePattern::parse("-+"));
        CHECK(OutcomePattern::parse("-+") < OutcomePattern::parse("--"));
    }

    SECTION("flip is an involution") {
        for (std::size_t k = 1; k <= 3; ++k) {
            CHECK(p.flipped(k).flipped(k) == p);
            CHECK(p.flipped(k) != p);
        }
        CHECK(OutcomePattern::parse("---").flipped(1) == OutcomePattern::parse("+--"));
        CHECK_THROWS_AS(p.flipped(0), domain_error);
        CHECK_THROWS_AS(p.flipped(4), domain_error);
    }

    SECTION("validation") {
        CHECK_THROWS_AS(OutcomePattern(std::vector<int>{1, 2}), domain_error);
        CHECK_THROWS_AS(OutcomePattern(std::vector<int>{}), domain_error);
        CHECK_THROWS_AS(OutcomePattern::parse("+?"), domain_error);
        CHECK_THROWS_AS(OutcomePattern::from_index(2, 4), domain_error);
    }
}

TEST_CASE("joint distribution") {
    JointDistribution d(2, {0.5, 0.25, 0.25, 0.0});
    CHECK(d.particles() == 2);
    CHECK(d.at(OutcomePattern::parse("++")) == 0.5);
    CHECK(d.at(OutcomePattern::parse("+-")) == 0.25);
    CHECK(d.total() == 1.0);
    // ++ contributes +0.5, +- and -+ contribute -0.25 each
    CHECK(d.product_mean() == Catch::Approx(0.0).margin(1e-15));

    const std::set<OutcomePattern> s = d.support();
    CHECK(s.size() == 3);
    CHECK(s.contains(OutcomePattern::parse("++")));
    CHECK_FALSE(s.contains(OutcomePattern::parse("--")));

    CHECK_THROWS_AS(JointDistribution(2, {0.5, 0.5}), domain_error);
    CHECK_THROWS_AS(d.at(OutcomePattern::parse("+")), domain_error);
}
