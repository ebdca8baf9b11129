// patterns.hpp -- measurement settings, +/-1 outcome patterns, and
// pattern-indexed probability tables.
//
// Ordering conventions used everywhere in this library:
//   * particle indices are 1-based (particle 1 is the leftmost/first),
//   * in packed indices particle 1 is the most significant bit,
//   * outcome + maps to bit 0 and outcome - to bit 1, so the canonical
//     pattern order for n=2 is ++, +-, -+, --.
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ghzlab/errors.hpp"

namespace ghzlab {

inline constexpr std::size_t kDefaultParticleCap = 10;

enum class Axis : char { X = 'X', Y = 'Y', Z = 'Z' };

inline char axis_char(Axis a) { return static_cast<char>(a); }

inline Axis axis_from_char(char c) {
    switch (c) {
    case 'X': case 'x': return Axis::X;
    case 'Y': case 'y': return Axis::Y;
    case 'Z': case 'z': return Axis::Z;
    default:
        throw domain_error(std::string("unknown axis '") + c + "', expected X, Y or Z");
    }
}

// Wraps an angle to (-pi, pi].
inline double wrap_phase(double a) {
    double r = std::remainder(a, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

// One measurement axis per particle, e.g. "XYY".
class SettingPattern {
public:
    SettingPattern() = default;

    explicit SettingPattern(std::vector<Axis> axes) : axes_(std::move(axes)) {
        if (axes_.empty()) throw domain_error("setting pattern must not be empty");
    }

    static SettingPattern parse(std::string_view text) {
        std::vector<Axis> axes;
        for (char c : text) {
            if (c == ',' || c == ' ') continue;
            axes.push_back(axis_from_char(c));
        }
        return SettingPattern(std::move(axes));
    }

    static SettingPattern uniform(std::size_t n, Axis a) {
        return SettingPattern(std::vector<Axis>(n, a));
    }

    std::size_t size() const { return axes_.size(); }
    Axis at(std::size_t site) const {  // site is 1-based
        check_site(site);
        return axes_[site - 1];
    }
    const std::vector<Axis>& axes() const { return axes_; }

    bool all_x() const {
        for (Axis a : axes_)
            if (a != Axis::X) return false;
        return true;
    }

    std::string str() const {
        std::string s;
        s.reserve(axes_.size());
        for (Axis a : axes_) s.push_back(axis_char(a));
        return s;
    }

    friend bool operator==(const SettingPattern&, const SettingPattern&) = default;

private:
    void check_site(std::size_t site) const {
        if (site < 1 || site > axes_.size())
            throw domain_error("particle index " + std::to_string(site) +
                               " out of range 1.." + std::to_string(axes_.size()));
    }

    std::vector<Axis> axes_;
};

// One +/-1 outcome per particle, e.g. "+--".
class OutcomePattern {
public:
    OutcomePattern() = default;

    explicit OutcomePattern(std::vector<int> signs) : signs_(std::move(signs)) {
        if (signs_.empty()) throw domain_error("outcome pattern must not be empty");
        for (int s : signs_)
            if (s != 1 && s != -1)
                throw domain_error("outcome entries must be +1 or -1, got " + std::to_string(s));
    }

    // Canonical index: particle 1 = most significant bit, + = 0, - = 1.
    static OutcomePattern from_index(std::size_t n, std::uint64_t index) {
        if (n == 0 || n >= 64) throw domain_error("particle count out of range");
        if (index >= (std::uint64_t{1} << n))
            throw domain_error("pattern index out of range for n=" + std::to_string(n));
        std::vector<int> signs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t bit = (index >> (n - 1 - i)) & 1u;
            signs[i] = bit ? -1 : +1;
        }
        return OutcomePattern(std::move(signs));
    }

    static OutcomePattern parse(std::string_view text) {
        std::vector<int> signs;
        for (char c : text) {
            if (c == ',' || c == ' ' || c == '(' || c == ')') continue;
            if (c == '+') signs.push_back(+1);
            else if (c == '-') signs.push_back(-1);
            else throw domain_error(std::string("unknown outcome '") + c + "', expected + or -");
        }
        return OutcomePattern(std::move(signs));
    }

    std::size_t size() const { return signs_.size(); }
    int at(std::size_t site) const {  // site is 1-based
        check_site(site);
        return signs_[site - 1];
    }
    const std::vector<int>& signs() const { return signs_; }

    std::uint64_t index() const {
        std::uint64_t idx = 0;
        for (int s : signs_) idx = (idx << 1) | (s < 0 ? 1u : 0u);
        return idx;
    }

    int product() const {
        int p = 1;
        for (int s : signs_) p *= s;
        return p;
    }

    std::size_t minus_count() const {
        std::size_t m = 0;
        for (int s : signs_) m += (s < 0);
        return m;
    }

    OutcomePattern flipped(std::size_t site) const {  // site is 1-based
        check_site(site);
        std::vector<int> signs = signs_;
        signs[site - 1] = -signs[site - 1];
        return OutcomePattern(std::move(signs));
    }

    std::string str() const {
        std::string s;
        s.reserve(signs_.size());
        for (int v : signs_) s.push_back(v > 0 ? '+' : '-');
        return s;
    }

    friend bool operator==(const OutcomePattern& a, const OutcomePattern& b) {
        return a.signs_ == b.signs_;
    }
    // Canonical order: shorter patterns first, then by packed index (+ before -).
    friend std::strong_ordering operator<=>(const OutcomePattern& a, const OutcomePattern& b) {
        if (auto c = a.size() <=> b.size(); c != 0) return c;
        return a.index() <=> b.index();
    }

private:
    void check_site(std::size_t site) const {
        if (site < 1 || site > signs_.size())
            throw domain_error("particle index " + std::to_string(site) +
                               " out of range 1.." + std::to_string(signs_.size()));
    }

    std::vector<int> signs_;
};

// A required product of outcomes for one setting pattern, e.g. (XXX, -1).
struct SettingConstraint {
    SettingPattern settings;
    int target = +1;  // +1 or -1

    friend bool operator==(const SettingConstraint&, const SettingConstraint&) = default;
};

// Probabilities (or frequencies) over all 2^n outcome patterns, stored in
// canonical pattern order.
class JointDistribution {
public:
    JointDistribution(std::size_t n, std::vector<double> probs)
        : n_(n), probs_(std::move(probs)) {
        if (n == 0 || n >= 64) throw domain_error("particle count out of range");
        if (probs_.size() != (std::size_t{1} << n))
            throw domain_error("distribution must have 2^n entries");
    }

    std::size_t particles() const { return n_; }
    std::size_t size() const { return probs_.size(); }
    double at_index(std::uint64_t idx) const { return probs_.at(idx); }
    double at(const OutcomePattern& p) const {
        if (p.size() != n_) throw domain_error("pattern length does not match distribution");
        return probs_[p.index()];
    }
    const std::vector<double>& values() const { return probs_; }

    double total() const {
        double t = 0.0;
        for (double p : probs_) t += p;
        return t;
    }

    // Sum_p product(p) * P(p); the eigenvalue-product statistic.
    double product_mean() const {
        double e = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i)
            e += (std::popcount(std::uint64_t{i}) % 2 ? -1.0 : 1.0) * probs_[i];
        return e;
    }

    std::set<OutcomePattern> support(double tol = 1e-9) const {
        std::set<OutcomePattern> s;
        for (std::size_t i = 0; i < probs_.size(); ++i)
            if (probs_[i] > tol) s.insert(OutcomePattern::from_index(n_, i));
        return s;
    }

private:
    std::size_t n_;
    std::vector<double> probs_;
};

} // namespace ghzlab
