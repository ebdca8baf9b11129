// lhv.hpp -- exhaustive deterministic local-hidden-variable models.
//
// An assignment gives every (particle, setting) pair a definite +/-1 outcome,
// settings restricted to {X, Y}. The whole space has 4^n points, so the GHZ
// argument and the Mermin bound are settled by brute force rather than by
// optimizing over mixtures; a mixture reaching |E| = 1 must be supported on
// deterministic points that reach it, so nothing is lost.
//
// Canonical enumeration order: slots ordered particle-major with X before Y,
// +1 before -1, i.e. assignment index k has slot j's value in bit
// (2n - 1 - j) of k, bit value 0 meaning +1.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ghzlab/errors.hpp"
#include "ghzlab/patterns.hpp"
#include "ghzlab/state_vector.hpp"

namespace ghzlab {

inline constexpr std::size_t kLhvParticleCap = 6;

class LhvAssignment {
public:
    LhvAssignment(std::size_t n, std::vector<int> values)
        : n_(n), values_(std::move(values)) {
        if (n_ == 0 || n_ > kLhvParticleCap)
            throw domain_error("particle count outside 1.." + std::to_string(kLhvParticleCap));
        if (values_.size() != 2 * n_)
            throw domain_error("assignment needs one value per (particle, X/Y setting)");
        for (int v : values_)
            if (v != 1 && v != -1)
                throw domain_error("assignment entries must be +1 or -1");
    }

    static LhvAssignment from_index(std::size_t n, std::uint64_t code) {
        if (n == 0 || n > kLhvParticleCap)
            throw domain_error("particle count outside 1.." + std::to_string(kLhvParticleCap));
        if (code >= (std::uint64_t{1} << (2 * n)))
            throw domain_error("assignment index out of range");
        std::vector<int> values(2 * n);
        for (std::size_t slot = 0; slot < 2 * n; ++slot)
            values[slot] = ((code >> (2 * n - 1 - slot)) & 1u) ? -1 : +1;
        return LhvAssignment(n, std::move(values));
    }

    // "+- ++ -+" : per particle, X value then Y value.
    static LhvAssignment parse(std::string_view text) {
        std::vector<int> values;
        for (char c : text) {
            if (c == ' ' || c == ',' || c == '|') continue;
            if (c == '+') values.push_back(+1);
            else if (c == '-') values.push_back(-1);
            else throw domain_error(std::string("unknown value '") + c + "' in assignment");
        }
        if (values.size() % 2 != 0)
            throw domain_error("assignment text must hold an X and a Y value per particle");
        const std::size_t n = values.size() / 2;
        return LhvAssignment(n, std::move(values));
    }

    std::size_t particles() const { return n_; }

    std::uint64_t index() const {
        std::uint64_t code = 0;
        for (int v : values_) code = (code << 1) | (v < 0 ? 1u : 0u);
        return code;
    }

    int value(std::size_t site, Axis axis) const {  // site is 1-based
        if (site < 1 || site > n_)
            throw domain_error("particle index " + std::to_string(site) +
                               " out of range 1.." + std::to_string(n_));
        if (axis == Axis::Z)
            throw domain_error("deterministic assignments cover settings X and Y only");
        return values_[2 * (site - 1) + (axis == Axis::Y ? 1 : 0)];
    }

    int product(const SettingPattern& settings) const {
        if (settings.size() != n_)
            throw domain_error("setting pattern length does not match assignment");
        int p = 1;
        for (std::size_t i = 1; i <= n_; ++i) p *= value(i, settings.at(i));
        return p;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < n_; ++i) {
            if (i) s.push_back(' ');
            s.push_back(values_[2 * i] > 0 ? '+' : '-');
            s.push_back(values_[2 * i + 1] > 0 ? '+' : '-');
        }
        return s;
    }

    friend bool operator==(const LhvAssignment&, const LhvAssignment&) = default;

private:
    std::size_t n_;
    std::vector<int> values_;
};

inline std::vector<LhvAssignment> enumerate_assignments(std::size_t n) {
    if (n == 0 || n > kLhvParticleCap)
        throw domain_error("enumeration capped at " + std::to_string(kLhvParticleCap) +
                           " particles (4^n assignments)");
    std::vector<LhvAssignment> all;
    all.reserve(std::size_t{1} << (2 * n));
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code)
        all.push_back(LhvAssignment::from_index(n, code));
    return all;
}

// The four three-particle constraints. XXX's target comes from the oracle
// exactly like the Y-containing ones, so a broken engine cannot smuggle in a
// wrong sign; each expectation must be maximal (|E| = 1) to define a target.
inline std::vector<SettingConstraint> ghz_constraints() {
    const StateVector ghz = ghz_state(3);
    std::vector<SettingConstraint> constraints;
    for (const char* name : {"XXX", "XYY", "YXY", "YYX"}) {
        const SettingPattern settings = SettingPattern::parse(name);
        const double e = expectation(ghz, settings);
        if (std::abs(std::abs(e) - 1.0) > 1e-9)
            throw consistency_error("oracle expectation for " + settings.str() +
                                    " is " + std::to_string(e) + ", not +/-1");
        constraints.push_back({settings, e > 0 ? +1 : -1});
    }
    return constraints;
}

inline std::size_t satisfied_count(const LhvAssignment& assignment,
                                   const std::vector<SettingConstraint>& constraints) {
    std::size_t count = 0;
    for (const SettingConstraint& c : constraints)
        count += (assignment.product(c.settings) == c.target);
    return count;
}

struct MaxSatisfied {
    std::size_t best = 0;
    std::size_t constraint_count = 0;
    std::vector<LhvAssignment> witnesses;  // all maximizers, canonical order
};

inline MaxSatisfied max_satisfied(const std::vector<SettingConstraint>& constraints) {
    if (constraints.empty()) throw domain_error("constraint list must not be empty");
    const std::size_t n = constraints.front().settings.size();
    for (const SettingConstraint& c : constraints)
        if (c.settings.size() != n)
            throw domain_error("all constraints must have the same particle count");
    MaxSatisfied result;
    result.constraint_count = constraints.size();
    for (const LhvAssignment& a : enumerate_assignments(n)) {
        const std::size_t count = satisfied_count(a, constraints);
        if (count > result.best) {
            result.best = count;
            result.witnesses.clear();
        }
        if (count == result.best) result.witnesses.push_back(a);
    }
    return result;
}

// E(XYY) + E(YXY) + E(YYX) - E(XXX): deterministic maximum vs GHZ value.
struct MerminAnalysis {
    int classical_max = 0;
    double quantum_value = 0.0;
};

inline MerminAnalysis mermin_analysis() {
    const SettingPattern xxx = SettingPattern::parse("XXX");
    const SettingPattern xyy = SettingPattern::parse("XYY");
    const SettingPattern yxy = SettingPattern::parse("YXY");
    const SettingPattern yyx = SettingPattern::parse("YYX");
    MerminAnalysis result;
    int best = -4;
    for (const LhvAssignment& a : enumerate_assignments(3)) {
        const int m = a.product(xyy) + a.product(yxy) + a.product(yyx) - a.product(xxx);
        best = std::max(best, m);
    }
    result.classical_max = best;
    const StateVector ghz = ghz_state(3);
    result.quantum_value = expectation(ghz, xyy) + expectation(ghz, yxy) +
                           expectation(ghz, yyx) - expectation(ghz, xxx);
    return result;
}

// The GHZ contradiction, spelled out: for every deterministic assignment the
// product of the three Y-containing setting products equals the XXX product
// (every Y value enters twice), so satisfying the three +1 constraints forces
// the XXX product to +1, while the quantum value is -1.
struct ParadoxReport {
    std::vector<SettingConstraint> constraints;
    std::size_t assignments_checked = 0;
    bool product_identity_holds = false;
    int forced_xxx_product = 0;
    double quantum_xxx_expectation = 0.0;
    std::size_t max_satisfied = 0;
    std::size_t constraint_count = 0;
    std::size_t witness_count = 0;
    LhvAssignment first_witness{1, {1, 1}};
};

inline ParadoxReport paradox_report() {
    ParadoxReport report;
    report.constraints = ghz_constraints();

    const SettingPattern xxx = report.constraints[0].settings;
    bool identity = true;
    std::size_t checked = 0;
    for (const LhvAssignment& a : enumerate_assignments(3)) {
        int y_product = 1;
        for (std::size_t c = 1; c < report.constraints.size(); ++c)
            y_product *= a.product(report.constraints[c].settings);
        identity = identity && (y_product == a.product(xxx));
        ++checked;
    }
    report.assignments_checked = checked;
    report.product_identity_holds = identity;

    // Satisfying the three Y-containing targets forces the XXX product.
    int forced = 1;
    for (std::size_t c = 1; c < report.constraints.size(); ++c)
        forced *= report.constraints[c].target;
    report.forced_xxx_product = forced;
    report.quantum_xxx_expectation = expectation(ghz_state(3), xxx);

    const MaxSatisfied ms = max_satisfied(report.constraints);
    report.max_satisfied = ms.best;
    report.constraint_count = ms.constraint_count;
    report.witness_count = ms.witnesses.size();
    report.first_witness = ms.witnesses.front();
    return report;
}

} // namespace ghzlab
