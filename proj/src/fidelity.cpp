#include "telefid/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "telefid/errors.hpp"

namespace telefid {

namespace {

double clamp_unit(double x) { return std::min(1.0, std::max(0.0, x)); }

double fidelity_from_posterior(const Posterior& post, const InputState& input) {
    double sum = 0.0;
    for (const auto& [outcome, weight] : post.weights) {
        const double ov = teleported_pure_state(outcome, input).overlap(input);
        sum += weight * ov * ov;
    }
    return std::sqrt(clamp_unit(sum));
}

}  // namespace

MixedTeleportedState mixed_state(const Readout& ro, const InputState& input,
                                 const PumpParameter& pump, const DetectorQuad& dets,
                                 const TruncationPolicy& policy) {
    const Posterior post = posterior(ro, input, pump, dets, policy);
    MixedTeleportedState mix;
    mix.readout = ro;
    mix.components.reserve(post.weights.size());
    for (const auto& [outcome, weight] : post.weights)
        mix.components.emplace_back(weight, teleported_pure_state(outcome, input));
    return mix;
}

double fidelity_direct(const Readout& ro, const InputState& input,
                       const PumpParameter& pump, const DetectorQuad& dets,
                       const TruncationPolicy& policy) {
    const MixedTeleportedState mix = mixed_state(ro, input, pump, dets, policy);
    double sum = 0.0;
    for (const auto& [weight, state] : mix.components) {
        const double ov = state.overlap(input);
        sum += weight * ov * ov;
    }
    return std::sqrt(clamp_unit(sum));
}

double fidelity_closed_form(const Readout& ro, const InputState& input,
                            const PumpParameter& pump, const DetectorQuad& dets,
                            const TruncationPolicy& policy) {
    const Posterior post = posterior(ro, input, pump, dets, policy);
    const double a2 = input.alpha() * input.alpha();
    const double b2 = input.beta() * input.beta();
    const double d2 = (a2 - b2) * (a2 - b2);
    // Outcomes whose conditional state reaches the qubit subspace; the
    // coefficients are the squared overlaps of the conditional states.
    const double f2 = post.weight_of({1, 0, 0, 1}) + post.weight_of({0, 1, 1, 0}) +
                      d2 * (post.weight_of({1, 1, 0, 0}) + post.weight_of({0, 0, 1, 1})) +
                      b2 * (post.weight_of({2, 0, 0, 0}) + post.weight_of({0, 0, 2, 0})) +
                      a2 * (post.weight_of({0, 2, 0, 0}) + post.weight_of({0, 0, 0, 2}));
    return std::sqrt(clamp_unit(f2));
}

FidelityReport average_fidelity(const std::vector<InputState>& inputs,
                                const std::vector<Readout>& accepted,
                                const PumpParameter& pump, const DetectorQuad& dets,
                                const TruncationPolicy& policy) {
    if (inputs.empty()) throw std::invalid_argument("input list must be non-empty");
    if (accepted.empty()) throw std::invalid_argument("accepted readout set must be non-empty");

    const double t2 = pump.tanh_chi() * pump.tanh_chi();
    const double cosh2 = pump.cosh_chi() * pump.cosh_chi();
    const double marginal_scale = 1.0 / (t2 * cosh2 * cosh2);

    FidelityReport report;
    report.accepted = accepted;
    report.per_input.reserve(inputs.size());

    for (const InputState& input : inputs) {
        FidelityReport::PerInput entry{input, {}, 0.0, 0.0};
        double weighted = 0.0;
        for (const Readout& ro : accepted) {
            ReadoutFidelity rf;
            try {
                const Posterior post = posterior(ro, input, pump, dets, policy);
                rf.probability = post.partition_z * marginal_scale;
                rf.fidelity = fidelity_from_posterior(post, input);
                report.max_truncation_residual =
                    std::max(report.max_truncation_residual, post.tail_estimate);
            } catch (const ZeroEvidence&) {
                // Impossible readouts contribute zero weight to the average.
                rf.probability = 0.0;
                rf.fidelity = 0.0;
            }
            entry.per_readout.emplace_back(ro, rf);
            entry.accepted_probability += rf.probability;
            weighted += rf.probability * rf.fidelity;
        }
        if (entry.accepted_probability <= 0.0)
            throw NoAcceptedEvidence("every accepted readout has zero probability for input (" +
                                     std::to_string(input.alpha()) + ", " +
                                     std::to_string(input.beta()) + ")");
        entry.fidelity = weighted / entry.accepted_probability;
        report.per_input.push_back(std::move(entry));
    }

    double total = 0.0;
    for (const auto& entry : report.per_input) total += entry.fidelity;
    report.average_fidelity = total / double(report.per_input.size());

    for (std::size_t n = 0; n < accepted.size(); ++n) {
        ReadoutFidelity mean;
        int contributing = 0;
        for (const auto& entry : report.per_input) {
            mean.probability += entry.per_readout[n].second.probability;
            if (entry.per_readout[n].second.probability > 0.0) {
                mean.fidelity += entry.per_readout[n].second.fidelity;
                ++contributing;
            }
        }
        mean.probability /= double(report.per_input.size());
        if (contributing > 0) mean.fidelity /= double(contributing);
        report.per_readout.emplace_back(accepted[n], mean);
    }
    return report;
}

}  // namespace telefid
