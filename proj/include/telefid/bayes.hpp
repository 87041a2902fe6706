#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "telefid/detector.hpp"
#include "telefid/spdc.hpp"

namespace telefid {

// Controls the truncation of the infinite outcome sums. The enumeration
// runs over photon counts [0, cap] per index; if the geometric tail bound
// exceeds tail_tolerance relative to the partial sum, the cap is doubled
// (up to a hard limit) before NotConverged is raised.
struct TruncationPolicy {
    int max_photons_per_index = 6;
    double tail_tolerance = 1e-12;
    // Optional cap on i+j+k+l, used to match the enumeration to an
    // oracle-representable outcome set. Negative means no cap.
    int max_total_photons = -1;

    // Fixed grid: no escalation, no convergence error.
    static TruncationPolicy fixed(int cap, int total_cap = -1) {
        return {cap, std::numeric_limits<double>::infinity(), total_cap};
    }
};

// Posterior distribution over ideal outcomes given an actual readout.
// Weights are strictly positive and sum to one; entries are in
// lexicographic outcome order.
struct Posterior {
    Readout readout;
    std::vector<std::pair<IdealOutcome, double>> weights;
    double partition_z = 0.0;      // truncated partition sum
    double tail_estimate = 0.0;    // bound on the relative truncation error
    int cap_used = 0;              // per-index cap after escalation

    double weight_of(const IdealOutcome& outcome) const;
};

// Truncated partition sum of likelihood * pair-expansion weight over all
// outcomes. Returns exactly zero when every term vanishes. Throws
// NotConverged when the tail bound fails at the maximum truncation.
double partition_z(const Readout& readout, const InputState& input,
                   const PumpParameter& pump, const DetectorQuad& dets,
                   const TruncationPolicy& policy);

// Bayesian inversion of the readout. Throws ZeroEvidence when the readout
// is impossible under the model.
Posterior posterior(const Readout& readout, const InputState& input,
                    const PumpParameter& pump, const DetectorQuad& dets,
                    const TruncationPolicy& policy);

// Marginal probability of observing the readout; the 16 readouts sum to
// one up to truncation error.
double readout_probability(const Readout& readout, const InputState& input,
                           const PumpParameter& pump, const DetectorQuad& dets,
                           const TruncationPolicy& policy);

// Convergence certificate: largest absolute posterior weight change when
// the per-index cap is doubled. Checked on demand by tests and `verify`.
double posterior_doubling_change(const Readout& readout, const InputState& input,
                                 const PumpParameter& pump, const DetectorQuad& dets,
                                 const TruncationPolicy& policy);

}  // namespace telefid
