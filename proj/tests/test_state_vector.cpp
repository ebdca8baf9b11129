#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "ghzlab/state_vector.hpp"

using namespace ghzlab;

namespace {

StateVector random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> amps(std::size_t{1} << n);
    for (cdouble& a : amps) a = cdouble{gauss(rng), gauss(rng)};
    return StateVector::normalized(n, std::move(amps));
}

SettingPattern random_settings(std::size_t n, std::mt19937_64& rng) {
    static const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
    std::vector<Axis> a(n);
    for (Axis& x : a) x = axes[rng() % 3];
    return SettingPattern(std::move(a));
}

} // namespace

TEST_CASE("ghz_state amplitudes") {
    const double r = 1.0 / std::numbers::sqrt2;

    const StateVector g3 = ghz_state(3);
    CHECK(g3.dim() == 8);
    CHECK(g3.amp(0) == cdouble{r, 0.0});   // up,up,up
    CHECK(g3.amp(7) == cdouble{-r, 0.0});  // down,down,down
    for (std::uint64_t i = 1; i < 7; ++i) CHECK(g3.amp(i) == cdouble{0.0, 0.0});

    const StateVector g2 = ghz_state(2);
    CHECK(g2.amp(0) == cdouble{r, 0.0});
    CHECK(g2.amp(3) == cdouble{-r, 0.0});

    for (std::size_t n = 2; n <= 10; ++n)
        CHECK(std::abs(ghz_state(n).norm_sq() - 1.0) < 1e-12);

    CHECK_THROWS_WITH(ghz_state(1), Catch::Matchers::ContainsSubstring("2..10"));
    CHECK_THROWS_AS(ghz_state(11), domain_error);
    CHECK_NOTHROW(ghz_state(11, 12));  // configurable cap
}

TEST_CASE("state vector construction") {
    CHECK_THROWS_AS(StateVector(2, {cdouble{1, 0}, cdouble{0, 0}}), domain_error);
    CHECK_THROWS_AS(StateVector(1, {cdouble{1, 0}, cdouble{1, 0}}), domain_error);
    CHECK_THROWS_AS(StateVector::normalized(1, {cdouble{0, 0}, cdouble{0, 0}}), domain_error);
    const StateVector s = StateVector::normalized(1, {cdouble{3, 0}, cdouble{4, 0}});
    CHECK(std::abs(s.amp(0).real() - 0.6) < 1e-15);
    CHECK(StateVector::basis_state(2, 1).amp(1) == cdouble{1, 0});
}

TEST_CASE("single-site Paulis") {
    const StateVector up = StateVector::basis_state(1, 0);
    const StateVector down = StateVector::basis_state(1, 1);

    CHECK(apply_pauli(up, 1, Axis::X) == down);
    CHECK(apply_pauli(up, 1, Axis::Y).amp(1) == cdouble{0, 1});    // i|down>
    CHECK(apply_pauli(down, 1, Axis::Y).amp(0) == cdouble{0, -1}); // -i|up>
    CHECK(apply_pauli(down, 1, Axis::Z).amp(1) == cdouble{-1, 0});
    CHECK(apply_pauli(up, 1, Axis::Z) == up);

    CHECK_THROWS_AS(apply_pauli(up, 0, Axis::X), domain_error);
    CHECK_THROWS_AS(apply_pauli(up, 2, Axis::X), domain_error);
}

TEST_CASE("Paulis are involutions on random states") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        const StateVector s = random_state(n, rng);
        for (std::size_t site = 1; site <= n; ++site)
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                const StateVector twice = apply_pauli(apply_pauli(s, site, a), site, a);
                for (std::size_t i = 0; i < s.dim(); ++i)
                    CHECK(std::abs(twice.amp(i) - s.amp(i)) < 1e-12);
            }
    }
}

TEST_CASE("GHZ expectation values") {
    const StateVector g3 = ghz_state(3);
    CHECK(std::abs(expectation(g3, SettingPattern::parse("XXX")) - (-1.0)) < 1e-12);
    // sigma_x sigma_y sigma_y maps |uuu> -> -|ddd> and |ddd> -> -|uuu>,
    // so the GHZ state is a +1 eigenstate; same for the permutations.
    CHECK(std::abs(expectation(g3, SettingPattern::parse("XYY")) - 1.0) < 1e-12);
    CHECK(std::abs(expectation(g3, SettingPattern::parse("YXY")) - 1.0) < 1e-12);
    CHECK(std::abs(expectation(g3, SettingPattern::parse("YYX")) - 1.0) < 1e-12);
    // the two GHZ branches contribute +1 and -1 with weight 1/2 each
    CHECK(std::abs(expectation(g3, SettingPattern::parse("ZZZ"))) < 1e-12);

    CHECK_THROWS_AS(expectation(g3, SettingPattern::parse("XX")), domain_error);
}

TEST_CASE("joint probabilities") {
    const StateVector g3 = ghz_state(3);

    SECTION("all-X support is the odd-minus patterns at 1/4") {
        const JointDistribution d = joint_probabilities(g3, SettingPattern::parse("XXX"));
        for (std::uint64_t i = 0; i < 8; ++i) {
            const OutcomePattern p = OutcomePattern::from_index(3, i);
            const double expected = p.minus_count() % 2 ? 0.25 : 0.0;
            CHECK(std::abs(d.at(p) - expected) < 1e-12);
        }
        CHECK(std::abs(d.total() - 1.0) < 1e-12);
    }

    SECTION("all-Z reads off the two kets") {
        const JointDistribution d = joint_probabilities(g3, SettingPattern::parse("ZZZ"));
        CHECK(std::abs(d.at(OutcomePattern::parse("+++")) - 0.5) < 1e-12);
        CHECK(std::abs(d.at(OutcomePattern::parse("---")) - 0.5) < 1e-12);
        CHECK(support(g3, SettingPattern::parse("ZZZ")) ==
              std::set<OutcomePattern>{OutcomePattern::parse("+++"), OutcomePattern::parse("---")});
    }

    SECTION("product eigenstate") {
        const StateVector all_up = StateVector::basis_state(3, 0);
        const JointDistribution d = joint_probabilities(all_up, SettingPattern::parse("ZZZ"));
        CHECK(d.at(OutcomePattern::parse("+++")) == 1.0);
    }
}

TEST_CASE("all-X support and parity law for GHZ_n") {
    for (std::size_t n = 2; n <= 8; ++n) {
        const StateVector g = ghz_state(n);
        const SettingPattern all_x = SettingPattern::uniform(n, Axis::X);
        const JointDistribution d = joint_probabilities(g, all_x);
        const double expected = std::ldexp(1.0, -static_cast<int>(n - 1));  // 2^-(n-1)
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            const OutcomePattern p = OutcomePattern::from_index(n, i);
            if (p.minus_count() % 2)
                CHECK(std::abs(d.at(p) - expected) < 1e-12);
            else
                CHECK(std::abs(d.at(p)) < 1e-12);
        }
        CHECK(support(g, all_x).size() == (std::size_t{1} << (n - 1)));
    }
}

TEST_CASE("expectation agrees with the probability route") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        const StateVector s = random_state(n, rng);
        const SettingPattern settings = random_settings(n, rng);
        const double via_paulis = expectation(s, settings);
        const double via_probs = joint_probabilities(s, settings).product_mean();
        CHECK(std::abs(via_paulis - via_probs) < 1e-12);
        CHECK(via_paulis <= 1.0 + 1e-12);
        CHECK(via_paulis >= -1.0 - 1e-12);
    }
}
