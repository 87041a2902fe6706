#pragma once

#include <array>
#include <map>
#include <optional>

#include "telefid/bayes.hpp"
#include "telefid/detector.hpp"
#include "telefid/spdc.hpp"

namespace telefid {

// Sparse real state vector over six counting modes
// (a_H, a_V, b_H, b_V, c_H, c_V), truncated by total photon number.
// Truncated states may leak norm; the leakage is observable through
// squared_norm().
class FockVector {
public:
    using Occupation = std::array<int, 6>;
    using AmplitudeMap = std::map<Occupation, double>;

    explicit FockVector(int max_total);

    // Accumulates into the amplitude; tuples beyond the truncation are
    // rejected (invalid_argument) since silently dropping them would skew
    // norms.
    void add(const Occupation& occ, double amplitude);

    double amplitude(const Occupation& occ) const;
    double squared_norm() const;
    int max_total() const { return max_total_; }
    const AmplitudeMap& amplitudes() const { return amps_; }

private:
    int max_total_;
    AmplitudeMap amps_;
};

// Input photon tensored with the pair expansion of the down-conversion
// source, truncated at max_total photons (one input photon plus pairs).
FockVector build_joint_state(const InputState& input, const PumpParameter& pump,
                             int max_total);

// Balanced beam splitter between modes a and b, per polarization.
// Unitary on the truncated space: photon number per polarization sector
// is conserved, so no truncation leakage occurs here.
FockVector apply_beam_splitter(const FockVector& state);

// Normalized conditional state on (c_H, c_V) after projecting modes a, b.
struct ConditionalState {
    std::map<std::array<int, 2>, double> amplitudes;

    double amplitude_at(int n_ch, int n_cv) const;
    double overlap(const InputState& input) const;
};

struct ProjectionResult {
    double probability = 0.0;
    std::optional<ConditionalState> state;  // empty when probability is 0
};

ProjectionResult project_outcome(const FockVector& state, const IdealOutcome& outcome);

// End-to-end fidelity recomputation from the state vector: enumerate
// outcomes, weight conditional states by likelihood x probability,
// normalize, overlap with the input. index_cap < 0 enumerates every
// outcome present in the truncated state.
double oracle_fidelity(const Readout& readout, const InputState& input,
                       const PumpParameter& pump, const DetectorQuad& dets,
                       int max_total, int index_cap = -1);

}  // namespace telefid
