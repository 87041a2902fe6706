#pragma once

#include <array>
#include <compare>
#include <vector>

namespace telefid {

// Single-photon polarization qubit alpha|H> + beta|V>, real amplitudes
// (negative values allowed, e.g. the |-> state). Construction enforces
// alpha^2 + beta^2 = 1 within 1e-12.
class InputState {
public:
    InputState(double alpha, double beta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    static InputState horizontal() { return {1.0, 0.0}; }
    static InputState vertical() { return {0.0, 1.0}; }
    static InputState plus();
    static InputState minus();

    // H, V, +, - : the tomography set used for averaged fidelities.
    static std::vector<InputState> standard_set();

private:
    double alpha_;
    double beta_;
};

// Squeezing strength of the down-conversion source; chi^2 is proportional
// to the photon-pair production rate. tanh/cosh are cached since every
// probability formula uses them.
class PumpParameter {
public:
    explicit PumpParameter(double chi);

    double chi() const { return chi_; }
    double tanh_chi() const { return tanh_chi_; }
    double cosh_chi() const { return cosh_chi_; }

private:
    double chi_;
    double tanh_chi_;
    double cosh_chi_;
};

// Photon counts an ideal (lossless, number-resolving) detector quadruple
// would report on modes a_H, a_V, b_H, b_V.
struct IdealOutcome {
    int i = 0;
    int j = 0;
    int k = 0;
    int l = 0;

    int total() const { return i + j + k + l; }
    auto operator<=>(const IdealOutcome&) const = default;
};

// Two-branch conditional state on the receiver modes (c_H, c_V) after an
// ideal measurement outcome. Branch kets are |occupation_h> and
// |occupation_v>; a branch whose formal occupation would be negative has
// amplitude exactly zero.
struct PureTeleportedState {
    double amplitude_h = 0.0;               // coefficient of |occupation_h>
    double amplitude_v = 0.0;               // coefficient of |occupation_v>
    std::array<int, 2> occupation_h{0, 0};  // {j+l, i+k-1}
    std::array<int, 2> occupation_v{0, 0};  // {j+l-1, i+k}

    // <input|state>; only the |1,0> and |0,1> kets contribute.
    double overlap(const InputState& input) const;
};

// Unnormalized branch weight alpha^2 (i+k-1)!(j+l)!(i-k)^2
//                          + beta^2  (i+k)!(j+l-1)!(l-j)^2.
// A term whose squared difference factor vanishes is zero by convention,
// which also covers the formally negative factorial arguments.
double e_factor(const IdealOutcome& outcome, const InputState& input);

// Probability that ideal detectors report the given outcome.
double ideal_outcome_probability(const IdealOutcome& outcome,
                                 const InputState& input,
                                 const PumpParameter& pump);

// Normalized conditional state for a reachable outcome.
// Throws UnreachableOutcome when e_factor is zero.
PureTeleportedState teleported_pure_state(const IdealOutcome& outcome,
                                          const InputState& input);

}  // namespace telefid
