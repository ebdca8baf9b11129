// state_vector.hpp -- dense n-particle state vectors and exact measurement
// statistics for tensor products of Pauli observables.
//
// Basis ordering is frozen: basis index bit (n - site) holds particle `site`
// (so particle 1 is the most significant bit), bit value 0 is spin-up.
// All operations are pure; a StateVector never mutates after construction.
#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ghzlab/errors.hpp"
#include "ghzlab/patterns.hpp"

namespace ghzlab {

using cdouble = std::complex<double>;

class StateVector {
public:
    StateVector(std::size_t particles, std::vector<cdouble> amps)
        : n_(particles), amps_(std::move(amps)) {
        if (n_ == 0 || n_ >= 64)
            throw domain_error("particle count out of range");
        if (amps_.size() != (std::size_t{1} << n_))
            throw domain_error("amplitude vector must have 2^n entries");
        const double nsq = norm_sq();
        if (std::abs(nsq - 1.0) > 1e-12)
            throw domain_error("state vector is not normalized (|norm^2 - 1| = " +
                               std::to_string(std::abs(nsq - 1.0)) + ")");
    }

    static StateVector basis_state(std::size_t particles, std::uint64_t index) {
        std::vector<cdouble> amps(std::size_t{1} << particles, cdouble{0.0, 0.0});
        amps.at(index) = cdouble{1.0, 0.0};
        return StateVector(particles, std::move(amps));
    }

    // Rescales to unit norm; rejects the zero vector.
    static StateVector normalized(std::size_t particles, std::vector<cdouble> amps) {
        double nsq = 0.0;
        for (const cdouble& a : amps) nsq += std::norm(a);
        if (nsq <= 0.0) throw domain_error("cannot normalize the zero vector");
        const double scale = 1.0 / std::sqrt(nsq);
        for (cdouble& a : amps) a *= scale;
        return StateVector(particles, std::move(amps));
    }

    std::size_t particles() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    const cdouble& amp(std::uint64_t index) const { return amps_.at(index); }
    const std::vector<cdouble>& amps() const { return amps_; }

    double norm_sq() const {
        double t = 0.0;
        for (const cdouble& a : amps_) t += std::norm(a);
        return t;
    }

    // <this|other>
    cdouble inner(const StateVector& other) const {
        if (other.n_ != n_) throw domain_error("particle counts differ");
        cdouble acc{0.0, 0.0};
        for (std::size_t i = 0; i < amps_.size(); ++i)
            acc += std::conj(amps_[i]) * other.amps_[i];
        return acc;
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::size_t n_;
    std::vector<cdouble> amps_;
};

namespace detail {

// Applies a 2x2 matrix [[m00, m01], [m10, m11]] at `site` (1-based), in place.
inline void apply_one_site(std::size_t n, std::vector<cdouble>& amps, std::size_t site,
                           cdouble m00, cdouble m01, cdouble m10, cdouble m11) {
    if (site < 1 || site > n)
        throw domain_error("particle index " + std::to_string(site) +
                           " out of range 1.." + std::to_string(n));
    const std::size_t mask = std::size_t{1} << (n - site);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        const cdouble up = amps[i];
        const cdouble down = amps[j];
        amps[i] = m00 * up + m01 * down;
        amps[j] = m10 * up + m11 * down;
    }
}

inline void apply_pauli_in_place(std::size_t n, std::vector<cdouble>& amps,
                                 std::size_t site, Axis axis) {
    const cdouble i1{0.0, 1.0};
    switch (axis) {
    case Axis::X: apply_one_site(n, amps, site, 0.0, 1.0, 1.0, 0.0); break;
    case Axis::Y: apply_one_site(n, amps, site, 0.0, -i1, i1, 0.0); break;
    case Axis::Z: apply_one_site(n, amps, site, 1.0, 0.0, 0.0, -1.0); break;
    }
}

// Rotates `site` so that the +/- eigenvectors of `axis` land on the
// computational basis states (up for +, down for -).
inline void rotate_to_axis_basis(std::size_t n, std::vector<cdouble>& amps,
                                 std::size_t site, Axis axis) {
    const double s = 1.0 / std::numbers::sqrt2;
    const cdouble is{0.0, s};
    switch (axis) {
    case Axis::X: apply_one_site(n, amps, site, s, s, s, -s); break;
    case Axis::Y: apply_one_site(n, amps, site, s, -is, s, is); break;
    case Axis::Z: break;
    }
}

} // namespace detail

// (|up...up> - |down...down>) / sqrt(2)
inline StateVector ghz_state(std::size_t n, std::size_t cap = kDefaultParticleCap) {
    if (n < 2 || n > cap)
        throw domain_error("GHZ particle count " + std::to_string(n) +
                           " outside 2.." + std::to_string(cap));
    std::vector<cdouble> amps(std::size_t{1} << n, cdouble{0.0, 0.0});
    const double r = 1.0 / std::numbers::sqrt2;
    amps.front() = cdouble{r, 0.0};
    amps.back() = cdouble{-r, 0.0};
    return StateVector(n, std::move(amps));
}

inline StateVector apply_pauli(const StateVector& state, std::size_t site, Axis axis) {
    std::vector<cdouble> amps = state.amps();
    detail::apply_pauli_in_place(state.particles(), amps, site, axis);
    return StateVector(state.particles(), std::move(amps));
}

// <state| tensor-product-of-Paulis |state>. The observable is Hermitian, so
// the value must come out real; an imaginary residue above 1e-9 indicates a
// broken engine and raises consistency_error.
inline double expectation(const StateVector& state, const SettingPattern& settings) {
    if (settings.size() != state.particles())
        throw domain_error("setting pattern length does not match particle count");
    std::vector<cdouble> amps = state.amps();
    for (std::size_t site = 1; site <= state.particles(); ++site)
        detail::apply_pauli_in_place(state.particles(), amps, site, settings.at(site));
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps.size(); ++i)
        acc += std::conj(state.amps()[i]) * amps[i];
    if (std::abs(acc.imag()) > 1e-9)
        throw consistency_error("expectation value has imaginary part " +
                                std::to_string(acc.imag()));
    return acc.real();
}

// Probability of every outcome pattern when each particle is measured along
// its axis. Computed by rotating into the measurement basis and reading off
// |amplitude|^2, one rotation per site.
inline JointDistribution joint_probabilities(const StateVector& state,
                                             const SettingPattern& settings) {
    if (settings.size() != state.particles())
        throw domain_error("setting pattern length does not match particle count");
    std::vector<cdouble> amps = state.amps();
    for (std::size_t site = 1; site <= state.particles(); ++site)
        detail::rotate_to_axis_basis(state.particles(), amps, site, settings.at(site));
    std::vector<double> probs(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) probs[i] = std::norm(amps[i]);
    return JointDistribution(state.particles(), std::move(probs));
}

inline constexpr double kSupportTolerance = 1e-9;

inline std::set<OutcomePattern> support(const StateVector& state, const SettingPattern& settings,
                                        double tol = kSupportTolerance) {
    return joint_probabilities(state, settings).support(tol);
}

} // namespace ghzlab
