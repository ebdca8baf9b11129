// amplitude_model.hpp -- local complex amplitudes with per-particle phases.
//
// Each particle carries an amplitude of fixed magnitude 1/sqrt(2) whose phase
// encodes everything local: theta_i for outcome +, theta_i + pi/2 for outcome
// - (the two outcomes are orthogonal). The n-particle correlation is
//
//     U(pattern) = N * Re(C_1 * conj(C_2) * ... * conj(C_n)),  N = sqrt(2)^n,
//
// so U = cos(Phi) with Phi the accumulated product phase, and U^2 acts as a
// 0/1 support indicator once the phases are solved to make a chosen reference
// pattern's product pure real. Flipping one outcome rotates the product by
// exactly pi/2, which is what produces the parity structure of the table.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <set>
#include <thread>
#include <vector>

#include "ghzlab/errors.hpp"
#include "ghzlab/patterns.hpp"

namespace ghzlab {

inline constexpr double kIndicatorTolerance = 1e-9;
inline constexpr double kPhaseConstraintTolerance = 1e-12;

// pi/2 for outcome -, 0 for outcome +.
inline double outcome_phase_offset(int sign) {
    if (sign != 1 && sign != -1)
        throw domain_error("outcome sign must be +1 or -1");
    return sign < 0 ? std::numbers::pi / 2.0 : 0.0;
}

// (1/sqrt2) exp(i theta) for +, (1/sqrt2) exp(i (theta + pi/2)) for -.
inline std::complex<double> local_amplitude(double theta, int sign) {
    return std::polar(1.0 / std::numbers::sqrt2, theta + outcome_phase_offset(sign));
}

// One phase per particle, wrapped to (-pi, pi].
class PhaseAssignment {
public:
    PhaseAssignment() = default;

    explicit PhaseAssignment(std::vector<double> thetas) : thetas_(std::move(thetas)) {
        if (thetas_.empty()) throw domain_error("phase assignment must not be empty");
        for (double& t : thetas_) t = wrap_phase(t);
    }

    static PhaseAssignment zeros(std::size_t n) {
        return PhaseAssignment(std::vector<double>(n, 0.0));
    }

    std::size_t size() const { return thetas_.size(); }
    double at(std::size_t site) const {  // site is 1-based
        if (site < 1 || site > thetas_.size())
            throw domain_error("particle index out of range");
        return thetas_[site - 1];
    }
    const std::vector<double>& thetas() const { return thetas_; }

    friend bool operator==(const PhaseAssignment&, const PhaseAssignment&) = default;

private:
    std::vector<double> thetas_;
};

// True when every phase agrees modulo 2pi within tol.
inline bool phases_equal(const PhaseAssignment& a, const PhaseAssignment& b, double tol = 1e-12) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 1; i <= a.size(); ++i)
        if (std::abs(std::remainder(a.at(i) - b.at(i), 2.0 * std::numbers::pi)) > tol)
            return false;
    return true;
}

// Phase of C_1 * conj(C_2) * ... * conj(C_n):
//   (theta_1 + off_1) - sum_{i>=2} (theta_i + off_i), wrapped to (-pi, pi].
inline double product_phase(const PhaseAssignment& phases, const OutcomePattern& pattern) {
    const std::size_t n = phases.size();
    if (pattern.size() != n)
        throw domain_error("phase assignment and outcome pattern lengths differ");
    if (n < 2)
        throw domain_error("correlation needs at least two particles");
    double phi = phases.at(1) + outcome_phase_offset(pattern.at(1));
    for (std::size_t i = 2; i <= n; ++i)
        phi -= phases.at(i) + outcome_phase_offset(pattern.at(i));
    return wrap_phase(phi);
}

// The literal complex product; magnitude is 2^{-n/2} for any phases.
// correlation() below evaluates the same quantity in polar form; tests hold
// the two routes against each other.
inline std::complex<double> amplitude_product(const PhaseAssignment& phases,
                                              const OutcomePattern& pattern) {
    const std::size_t n = phases.size();
    if (pattern.size() != n)
        throw domain_error("phase assignment and outcome pattern lengths differ");
    if (n < 2)
        throw domain_error("correlation needs at least two particles");
    std::complex<double> z = local_amplitude(phases.at(1), pattern.at(1));
    for (std::size_t i = 2; i <= n; ++i)
        z *= std::conj(local_amplitude(phases.at(i), pattern.at(i)));
    return z;
}

// The normalization making |N * product| = 1.
inline double correlation_norm(std::size_t n) {
    return std::pow(std::numbers::sqrt2, static_cast<double>(n));
}

// U = N * Re(product) = cos(product phase); always in [-1, 1].
inline double correlation(const PhaseAssignment& phases, const OutcomePattern& pattern) {
    return std::cos(product_phase(phases, pattern));
}

// U^2 rounded to {0, 1} when it lands within tol of either.
struct IndicatorValue {
    double square = 0.0;    // raw U^2
    double value = 0.0;     // rounded to 0/1 when exact, otherwise == square
    double residual = 0.0;  // distance from square to the nearer of {0, 1}
    bool exact = false;

    friend bool operator==(const IndicatorValue&, const IndicatorValue&) = default;
};

inline IndicatorValue joint_indicator(const PhaseAssignment& phases, const OutcomePattern& pattern,
                                      double tol = kIndicatorTolerance) {
    const double u = correlation(phases, pattern);
    IndicatorValue v;
    v.square = u * u;
    const double to_zero = std::abs(v.square);
    const double to_one = std::abs(v.square - 1.0);
    v.residual = std::min(to_zero, to_one);
    v.exact = v.residual <= tol;
    v.value = v.exact ? (to_one < to_zero ? 1.0 : 0.0) : v.square;
    return v;
}

// For call sites that have already established the phase constraint; a
// non-exact square there means the model code itself is inconsistent.
inline IndicatorValue checked_indicator(const PhaseAssignment& phases, const OutcomePattern& pattern,
                                        double tol = kIndicatorTolerance) {
    IndicatorValue v = joint_indicator(phases, pattern, tol);
    if (!v.exact)
        throw consistency_error("indicator for pattern " + pattern.str() +
                                " is " + std::to_string(v.square) +
                                ", not within tolerance of 0 or 1");
    return v;
}

// Distance of the reference pattern's product phase from the nearest multiple
// of pi (0 means the product is pure real).
inline double phase_constraint_residual(const PhaseAssignment& phases,
                                        const OutcomePattern& reference) {
    return std::abs(std::remainder(product_phase(phases, reference), std::numbers::pi));
}

inline bool satisfies_phase_constraint(const PhaseAssignment& phases,
                                       const OutcomePattern& reference,
                                       double tol = kPhaseConstraintTolerance) {
    return phase_constraint_residual(phases, reference) <= tol;
}

// Which real value the reference correlation takes once the product is pure
// real: +1 (product phase 0) or -1 (product phase pi).
enum class PhaseBranch { Positive, Negative };

// Pins theta_2 = ... = theta_n = 0 and solves theta_1 so the reference
// pattern's amplitude product is pure real. The reference must have an odd
// number of - outcomes; those are the only patterns the quantum oracle puts
// weight on under all-X measurement, so an even reference would build a table
// contradicting it.
inline PhaseAssignment solve_phases(const OutcomePattern& reference,
                                    PhaseBranch branch = PhaseBranch::Positive) {
    const std::size_t n = reference.size();
    if (n < 2) throw domain_error("need at least two particles");
    if (reference.minus_count() % 2 == 0)
        throw domain_error("reference pattern " + reference.str() +
                           " has an even number of '-' outcomes; the quantum support for "
                           "all-X measurement on a GHZ state contains only odd-minus patterns");
    double theta1 = -outcome_phase_offset(reference.at(1));
    for (std::size_t i = 2; i <= n; ++i)
        theta1 += outcome_phase_offset(reference.at(i));
    if (branch == PhaseBranch::Negative) theta1 += std::numbers::pi;
    std::vector<double> thetas(n, 0.0);
    thetas[0] = theta1;
    return PhaseAssignment(std::move(thetas));
}

struct IndicatorRow {
    OutcomePattern pattern;
    double correlation = 0.0;
    IndicatorValue indicator;
};

// All 2^n rows of correlation and indicator, in canonical pattern order.
class IndicatorTable {
public:
    IndicatorTable(std::size_t n, std::vector<IndicatorRow> rows)
        : n_(n), rows_(std::move(rows)) {
        if (rows_.size() != (std::size_t{1} << n_))
            throw domain_error("indicator table must have 2^n rows");
    }

    std::size_t particles() const { return n_; }
    const std::vector<IndicatorRow>& rows() const { return rows_; }
    const IndicatorRow& row(const OutcomePattern& p) const { return rows_.at(p.index()); }

    bool all_exact() const {
        return std::all_of(rows_.begin(), rows_.end(),
                           [](const IndicatorRow& r) { return r.indicator.exact; });
    }

    // Patterns whose indicator rounded to 1.
    std::set<OutcomePattern> support() const {
        std::set<OutcomePattern> s;
        for (const IndicatorRow& r : rows_)
            if (r.indicator.exact && r.indicator.value == 1.0) s.insert(r.pattern);
        return s;
    }

private:
    std::size_t n_;
    std::vector<IndicatorRow> rows_;
};

inline IndicatorTable full_table(const PhaseAssignment& phases,
                                 double tol = kIndicatorTolerance,
                                 std::size_t cap = kDefaultParticleCap) {
    const std::size_t n = phases.size();
    if (n < 2 || n > cap)
        throw domain_error("particle count " + std::to_string(n) +
                           " outside 2.." + std::to_string(cap));
    std::vector<IndicatorRow> rows;
    rows.reserve(std::size_t{1} << n);
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
        IndicatorRow r;
        r.pattern = OutcomePattern::from_index(n, idx);
        r.correlation = correlation(phases, r.pattern);
        r.indicator = joint_indicator(phases, r.pattern, tol);
        rows.push_back(std::move(r));
    }
    return IndicatorTable(n, std::move(rows));
}

struct SupportMatch {
    bool match = false;
    std::vector<OutcomePattern> discrepancies;  // symmetric difference, canonical order

    friend bool operator==(const SupportMatch&, const SupportMatch&) = default;
};

// Compares the indicator support against an oracle support set.
inline SupportMatch support_match(const IndicatorTable& table,
                                  const std::set<OutcomePattern>& oracle_support) {
    const std::set<OutcomePattern> model_support = table.support();
    SupportMatch result;
    std::set_symmetric_difference(model_support.begin(), model_support.end(),
                                  oracle_support.begin(), oracle_support.end(),
                                  std::back_inserter(result.discrepancies));
    result.match = result.discrepancies.empty();
    return result;
}

// ---------------------------------------------------------------------------
// Per-setting phase fitting (X/Y probe beyond the single all-X constraint).

// Phases theta_{i,s} for each particle i and setting s in {X, Y}.
class PhaseMap {
public:
    explicit PhaseMap(std::size_t n) : thetas_(n, {0.0, 0.0}) {
        if (n == 0) throw domain_error("particle count must be positive");
    }

    std::size_t particles() const { return thetas_.size(); }

    double at(std::size_t site, Axis axis) const {  // site is 1-based
        return thetas_.at(check(site, axis))[axis == Axis::Y ? 1 : 0];
    }
    void set(std::size_t site, Axis axis, double theta) {
        thetas_.at(check(site, axis))[axis == Axis::Y ? 1 : 0] = wrap_phase(theta);
    }

    // The per-particle phases selected by one setting pattern.
    PhaseAssignment select(const SettingPattern& settings) const {
        if (settings.size() != thetas_.size())
            throw domain_error("setting pattern length does not match phase map");
        std::vector<double> t(thetas_.size());
        for (std::size_t i = 1; i <= thetas_.size(); ++i)
            t[i - 1] = at(i, settings.at(i));
        return PhaseAssignment(std::move(t));
    }

    friend bool operator==(const PhaseMap&, const PhaseMap&) = default;

private:
    std::size_t check(std::size_t site, Axis axis) const {
        if (site < 1 || site > thetas_.size())
            throw domain_error("particle index out of range");
        if (axis == Axis::Z)
            throw domain_error("phase maps cover settings X and Y only");
        return site - 1;
    }

    std::vector<std::array<double, 2>> thetas_;
};

// Indicator-weighted expectation of the outcome product:
//   sum_p product(p) U_s(p)^2 / sum_p U_s(p)^2.
inline double model_expectation(const PhaseMap& map, const SettingPattern& settings) {
    const PhaseAssignment phases = map.select(settings);
    const std::size_t n = phases.size();
    double num = 0.0, den = 0.0;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
        const OutcomePattern p = OutcomePattern::from_index(n, idx);
        const double u = correlation(phases, p);
        num += p.product() * u * u;
        den += u * u;
    }
    return num / den;
}

struct FitResult {
    PhaseMap phases;
    double residual = 0.0;  // sum of squared errors against the targets
};

namespace detail {

// Defining sum evaluated as a function of the base phase
// B = theta_{1,s_1} - sum_{i>=2} theta_{i,s_i}.
inline double model_expectation_for_base(std::size_t n, double base) {
    double num = 0.0, den = 0.0;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
        const int first = static_cast<int>((idx >> (n - 1)) & 1u);
        const int rest = static_cast<int>(std::popcount(idx & ((std::uint64_t{1} << (n - 1)) - 1)));
        const double u = std::cos(base + (std::numbers::pi / 2.0) * (first - rest));
        const int product = std::popcount(idx) % 2 ? -1 : +1;
        num += product * u * u;
        den += u * u;
    }
    return num / den;
}

} // namespace detail

inline constexpr std::uint64_t kFitCandidateCap = std::uint64_t{1} << 26;

// Exhaustive grid search for per-setting phases minimizing
// sum_c |E_model(s_c) - target_c|^2. The grid covers (-pi, pi] in steps of
// `resolution` for every (particle, setting) slot that appears in at least
// one constraint; slots never referenced stay at 0. Ties resolve to the
// lexicographically smallest phase tuple (slots ordered particle-major,
// X before Y), regardless of thread count.
inline FitResult fit_phases(const std::vector<SettingConstraint>& constraints,
                            double resolution, unsigned threads = 1) {
    if (constraints.empty()) throw domain_error("constraint list must not be empty");
    const std::size_t n = constraints.front().settings.size();
    if (n < 2) throw domain_error("need at least two particles");
    for (const SettingConstraint& c : constraints) {
        if (c.settings.size() != n)
            throw domain_error("all constraints must have the same particle count");
        if (c.target != 1 && c.target != -1)
            throw domain_error("constraint targets must be +1 or -1");
        for (Axis a : c.settings.axes())
            if (a == Axis::Z)
                throw domain_error("phase fitting covers settings X and Y only");
    }
    const double steps_d = std::numbers::pi / resolution;
    const long long steps = std::llround(steps_d);
    if (!(resolution > 0.0) || steps < 1 || std::abs(steps_d - static_cast<double>(steps)) > 1e-9)
        throw domain_error("resolution must be pi divided by a positive integer");
    const std::int64_t grid = 2 * steps;  // grid points across (-pi, pi]

    // Slots referenced by at least one constraint, particle-major, X before Y.
    std::vector<std::array<bool, 2>> used(n, {false, false});
    for (const SettingConstraint& c : constraints)
        for (std::size_t i = 1; i <= n; ++i)
            used[i - 1][c.settings.at(i) == Axis::Y ? 1 : 0] = true;
    struct Slot { std::size_t site; Axis axis; };
    std::vector<Slot> slots;
    for (std::size_t i = 1; i <= n; ++i) {
        if (used[i - 1][0]) slots.push_back({i, Axis::X});
        if (used[i - 1][1]) slots.push_back({i, Axis::Y});
    }

    double cand = 1.0;
    for (std::size_t s = 0; s < slots.size(); ++s) cand *= static_cast<double>(grid);
    if (cand > static_cast<double>(kFitCandidateCap))
        throw domain_error("fit grid has too many candidates; use a coarser resolution");

    // Integer coefficient of each slot in each constraint's base phase.
    std::vector<std::vector<int>> coef(constraints.size(), std::vector<int>(slots.size(), 0));
    for (std::size_t c = 0; c < constraints.size(); ++c)
        for (std::size_t s = 0; s < slots.size(); ++s)
            for (std::size_t i = 1; i <= n; ++i)
                if (slots[s].site == i && constraints[c].settings.at(i) == slots[s].axis)
                    coef[c][s] += (i == 1) ? +1 : -1;

    // E_model depends on the base phase only through its value mod 2pi, and
    // every reachable base is a grid multiple of the resolution.
    std::vector<double> base_table(static_cast<std::size_t>(grid));
    for (std::int64_t m = 0; m < grid; ++m)
        base_table[static_cast<std::size_t>(m)] =
            detail::model_expectation_for_base(n, wrap_phase(resolution * static_cast<double>(m)));

    const auto grid_value = [&](std::int64_t j) {
        // j in [0, grid) maps to (-pi, pi]
        return wrap_phase(-std::numbers::pi + resolution * static_cast<double>(j + 1));
    };
    // Base-phase grid index for one candidate and constraint:
    //   B = sum_s coef * (-pi + (j_s + 1) * res)  ==  res * (sum coef*(j_s+1) - steps*sum coef)
    const auto residual_for = [&](const std::vector<std::int64_t>& tuple) {
        double r = 0.0;
        for (std::size_t c = 0; c < constraints.size(); ++c) {
            std::int64_t acc = 0;
            std::int64_t coef_sum = 0;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                acc += coef[c][s] * (tuple[s] + 1);
                coef_sum += coef[c][s];
            }
            std::int64_t m = (acc - steps * coef_sum) % grid;
            if (m < 0) m += grid;
            const double diff = base_table[static_cast<std::size_t>(m)] - constraints[c].target;
            r += diff * diff;
        }
        return r;
    };

    struct Best {
        double residual = std::numeric_limits<double>::infinity();
        std::vector<std::int64_t> tuple;
    };
    // Scans all tuples whose first slot lies in [first_begin, first_end),
    // in lexicographic order; keeps the first strict minimum.
    const auto scan = [&](std::int64_t first_begin, std::int64_t first_end) {
        Best best;
        const std::size_t nslots = slots.size();
        std::vector<std::int64_t> tuple(nslots, 0);
        for (std::int64_t first = first_begin; first < first_end; ++first) {
            tuple.assign(nslots, 0);
            tuple[0] = first;
            bool more = true;
            while (more) {
                const double r = residual_for(tuple);
                if (r < best.residual) {
                    best.residual = r;
                    best.tuple = tuple;
                }
                more = false;
                for (std::size_t pos = nslots; pos-- > 1;) {  // slot 0 is the stripe
                    if (++tuple[pos] < grid) {
                        more = true;
                        break;
                    }
                    tuple[pos] = 0;
                }
            }
        }
        return best;
    };

    Best best;
    if (threads <= 1 || grid < 2) {
        best = scan(0, grid);
    } else {
        const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(grid));
        std::vector<std::future<Best>> futures;
        for (unsigned w = 0; w < workers; ++w) {
            const std::int64_t begin = grid * w / workers;
            const std::int64_t end = grid * (w + 1) / workers;
            futures.push_back(std::async(std::launch::async, [&, begin, end] { return scan(begin, end); }));
        }
        for (auto& f : futures) {
            Best local = f.get();
            if (local.residual < best.residual ||
                (local.residual == best.residual && local.tuple < best.tuple))
                best = std::move(local);
        }
    }

    FitResult result{PhaseMap(n), 0.0};
    for (std::size_t s = 0; s < slots.size(); ++s)
        result.phases.set(slots[s].site, slots[s].axis, grid_value(best.tuple[s]));
    // Report the residual of the winning map through the defining sum.
    double r = 0.0;
    for (const SettingConstraint& c : constraints) {
        const double diff = model_expectation(result.phases, c.settings) - c.target;
        r += diff * diff;
    }
    result.residual = r;
    return result;
}

} // namespace ghzlab
