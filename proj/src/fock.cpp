#include "telefid/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "telefid/errors.hpp"
#include "tables.hpp"

namespace telefid {

namespace {

int tuple_total(const FockVector::Occupation& occ) {
    int total = 0;
    for (int n : occ) total += n;
    return total;
}

// Output amplitudes of a balanced beam splitter acting on |i, k> of one
// polarization pair: coefficient of |P, i+k-P> for P = 0..i+k.
// a -> (a - b)/sqrt(2), b -> (a + b)/sqrt(2).
std::vector<double> beam_splitter_pair(int i, int k) {
    using detail::binomial;
    using detail::factorial;
    const int total = i + k;
    std::vector<double> coeffs(total + 1, 0.0);
    const double scale = std::pow(0.5, total / 2.0) / std::sqrt(factorial(i) * factorial(k));
    for (int p_out = 0; p_out <= total; ++p_out) {
        double binom_sum = 0.0;
        for (int p = std::max(0, p_out - k); p <= std::min(i, p_out); ++p) {
            const double sign = ((i - p) % 2 == 0) ? 1.0 : -1.0;
            binom_sum += binomial(i, p) * binomial(k, p_out - p) * sign;
        }
        if (binom_sum != 0.0)
            coeffs[p_out] = scale * std::sqrt(factorial(p_out) * factorial(total - p_out)) *
                            binom_sum;
    }
    return coeffs;
}

}  // namespace

FockVector::FockVector(int max_total) : max_total_(max_total) {
    if (max_total < 1) throw std::invalid_argument("max_total must be >= 1");
}

void FockVector::add(const Occupation& occ, double amplitude) {
    for (int n : occ)
        if (n < 0) throw std::invalid_argument("occupation numbers must be >= 0");
    if (tuple_total(occ) > max_total_)
        throw std::invalid_argument("occupation tuple exceeds the truncation limit");
    if (amplitude == 0.0) return;
    const double updated = (amps_[occ] += amplitude);
    if (updated == 0.0) amps_.erase(occ);
}

double FockVector::amplitude(const Occupation& occ) const {
    auto it = amps_.find(occ);
    return it == amps_.end() ? 0.0 : it->second;
}

double FockVector::squared_norm() const {
    double sum = 0.0;
    for (const auto& [occ, amp] : amps_) sum += amp * amp;
    return sum;
}

FockVector build_joint_state(const InputState& input, const PumpParameter& pump,
                             int max_total) {
    FockVector state(max_total);
    const int max_pairs = (max_total - 1) / 2;
    const double inv_cosh2 = 1.0 / (pump.cosh_chi() * pump.cosh_chi());
    for (int n = 0; n <= max_pairs; ++n) {
        for (int m = 0; m + n <= max_pairs; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const double base =
                sign * std::pow(pump.tanh_chi(), n + m) * inv_cosh2;
            state.add({1, 0, n, m, m, n}, input.alpha() * base);
            state.add({0, 1, n, m, m, n}, input.beta() * base);
        }
    }
    return state;
}

FockVector apply_beam_splitter(const FockVector& state) {
    FockVector out(state.max_total());
    std::map<std::pair<int, int>, std::vector<double>> cache;
    auto coeffs = [&cache](int i, int k) -> const std::vector<double>& {
        auto it = cache.find({i, k});
        if (it == cache.end())
            it = cache.emplace(std::make_pair(i, k), beam_splitter_pair(i, k)).first;
        return it->second;
    };

    for (const auto& [occ, amp] : state.amplitudes()) {
        const auto& h = coeffs(occ[0], occ[2]);
        const auto& v = coeffs(occ[1], occ[3]);
        const int h_total = occ[0] + occ[2];
        const int v_total = occ[1] + occ[3];
        for (int ph = 0; ph <= h_total; ++ph) {
            if (h[ph] == 0.0) continue;
            for (int pv = 0; pv <= v_total; ++pv) {
                if (v[pv] == 0.0) continue;
                out.add({ph, pv, h_total - ph, v_total - pv, occ[4], occ[5]},
                        amp * h[ph] * v[pv]);
            }
        }
    }
    return out;
}

double ConditionalState::amplitude_at(int n_ch, int n_cv) const {
    auto it = amplitudes.find({n_ch, n_cv});
    return it == amplitudes.end() ? 0.0 : it->second;
}

double ConditionalState::overlap(const InputState& input) const {
    return input.alpha() * amplitude_at(1, 0) + input.beta() * amplitude_at(0, 1);
}

ProjectionResult project_outcome(const FockVector& state, const IdealOutcome& outcome) {
    if (outcome.i < 0 || outcome.j < 0 || outcome.k < 0 || outcome.l < 0)
        throw std::invalid_argument("photon counts must be non-negative");

    const auto& amps = state.amplitudes();
    FockVector::Occupation from{outcome.i, outcome.j, outcome.k, outcome.l, 0, 0};
    double probability = 0.0;
    std::map<std::array<int, 2>, double> selected;
    for (auto it = amps.lower_bound(from); it != amps.end(); ++it) {
        const auto& occ = it->first;
        if (occ[0] != outcome.i || occ[1] != outcome.j || occ[2] != outcome.k ||
            occ[3] != outcome.l)
            break;
        probability += it->second * it->second;
        selected[{occ[4], occ[5]}] = it->second;
    }
    if (probability == 0.0) return {0.0, std::nullopt};

    const double norm = std::sqrt(probability);
    ConditionalState cond;
    for (auto& [occ, amp] : selected) cond.amplitudes[occ] = amp / norm;
    return {probability, std::move(cond)};
}

double oracle_fidelity(const Readout& readout, const InputState& input,
                       const PumpParameter& pump, const DetectorQuad& dets,
                       int max_total, int index_cap) {
    const FockVector state = apply_beam_splitter(build_joint_state(input, pump, max_total));

    // Group amplitudes by measured outcome; the map order makes the sums
    // deterministic.
    std::map<IdealOutcome, std::pair<double, double>> groups;  // p, raw overlap
    for (const auto& [occ, amp] : state.amplitudes()) {
        if (index_cap >= 0 && (occ[0] > index_cap || occ[1] > index_cap ||
                               occ[2] > index_cap || occ[3] > index_cap))
            continue;
        auto& [p, raw] = groups[IdealOutcome{occ[0], occ[1], occ[2], occ[3]}];
        p += amp * amp;
        if (occ[4] == 1 && occ[5] == 0) raw += input.alpha() * amp;
        if (occ[4] == 0 && occ[5] == 1) raw += input.beta() * amp;
    }

    double z = 0.0;
    double overlap_sum = 0.0;
    for (const auto& [outcome, group] : groups) {
        const auto& [p, raw] = group;
        if (p == 0.0) continue;
        const double lik = readout_likelihood(readout, outcome, dets);
        z += lik * p;
        overlap_sum += lik * raw * raw;  // lik * p * (raw/sqrt(p))^2
    }
    if (z <= 0.0)
        throw ZeroEvidence("readout " + readout.to_string() +
                           " has zero probability in the state-vector simulation");
    return std::sqrt(std::min(1.0, std::max(0.0, overlap_sum / z)));
}

}  // namespace telefid
