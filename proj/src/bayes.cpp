#include "telefid/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "telefid/errors.hpp"
#include "tables.hpp"

namespace telefid {

namespace {

constexpr int kEscalationCap = 24;
constexpr int kMaxIndexCap = detail::kMaxCount / 2;

// E / (i! j! k! l!) in binomial form; keeps every intermediate well inside
// double range even at deep truncations.
double e_over_factorials(const IdealOutcome& o, const InputState& in) {
    using detail::binomial;
    double result = 0.0;
    if (o.i != o.k) {
        const double d = o.i - o.k;
        result += in.alpha() * in.alpha() * binomial(o.i + o.k, o.i) *
                  binomial(o.j + o.l, o.j) * d * d / (o.i + o.k);
    }
    if (o.l != o.j) {
        const double d = o.l - o.j;
        result += in.beta() * in.beta() * binomial(o.i + o.k, o.i) *
                  binomial(o.j + o.l, o.j) * d * d / (o.j + o.l);
    }
    return result;
}

struct Accumulation {
    double z = 0.0;
    double boundary = 0.0;  // mass sitting on the truncation boundary
    std::vector<std::pair<IdealOutcome, double>> terms;
};

// Single pass over the outcome grid [0,cap]^4, optionally capped by total
// photon number. Terms accumulate in lexicographic order; results must be
// bit-stable across runs.
Accumulation accumulate(const Readout& ro, const InputState& input,
                        const PumpParameter& pump, const DetectorQuad& dets,
                        int cap, int total_cap, bool keep_terms) {
    const double u = pump.tanh_chi() * pump.tanh_chi() / 2.0;

    std::vector<double> upow(cap + 1);
    upow[0] = 1.0;
    for (int n = 1; n <= cap; ++n) upow[n] = upow[n - 1] * u;

    std::array<std::vector<double>, 4> lik;
    const bool flags[4] = {ro.q, ro.r, ro.s, ro.t};
    for (int d = 0; d < 4; ++d) {
        lik[d].resize(cap + 1);
        for (int n = 0; n <= cap; ++n)
            lik[d][n] = flags[d] ? p_click(n, dets[d]) : p_no_click(n, dets[d]);
    }

    Accumulation acc;
    if (keep_terms) acc.terms.reserve(1024);
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; j <= cap; ++j)
            for (int k = 0; k <= cap; ++k)
                for (int l = 0; l <= cap; ++l) {
                    const int total = i + j + k + l;
                    if (total_cap >= 0 && total > total_cap) continue;
                    const IdealOutcome o{i, j, k, l};
                    const double e = e_over_factorials(o, input);
                    if (e == 0.0) continue;
                    const double term = upow[i] * upow[j] * upow[k] * upow[l] * e *
                                        lik[0][i] * lik[1][j] * lik[2][k] * lik[3][l];
                    if (term == 0.0) continue;
                    acc.z += term;
                    if (i == cap || j == cap || k == cap || l == cap ||
                        (total_cap >= 0 && total == total_cap))
                        acc.boundary += term;
                    if (keep_terms) acc.terms.emplace_back(o, term);
                }
    return acc;
}

struct Converged {
    Accumulation acc;
    double tail_relative = 0.0;
    int cap = 0;
};

void check_policy(const PumpParameter& pump, const TruncationPolicy& policy) {
    if (!(pump.chi() > 0.0))
        throw std::invalid_argument("pump parameter chi must be > 0 for readout inference");
    if (policy.max_photons_per_index < 1 || policy.max_photons_per_index > kMaxIndexCap)
        throw std::invalid_argument("max_photons_per_index must be in [1, " +
                                    std::to_string(kMaxIndexCap) + "]");
    if (!(policy.tail_tolerance > 0.0))
        throw std::invalid_argument("tail_tolerance must be > 0");
}

// Runs the enumeration, doubling the per-index cap until the geometric
// tail bound passes the policy, up to the hard escalation cap.
Converged converge(const Readout& ro, const InputState& input, const PumpParameter& pump,
                   const DetectorQuad& dets, const TruncationPolicy& policy,
                   bool keep_terms) {
    const double r = pump.tanh_chi() * pump.tanh_chi();
    const double geometric = r / (1.0 - r);
    const int hard_cap = std::min(std::max(policy.max_photons_per_index, kEscalationCap),
                                  kMaxIndexCap);

    int cap = policy.max_photons_per_index;
    for (;;) {
        Accumulation acc =
            accumulate(ro, input, pump, dets, cap, policy.max_total_photons, keep_terms);
        const double tail = acc.boundary * geometric;
        // Comparison is written so that an infinite tolerance (fixed
        // policies) and an exactly-zero sum both terminate.
        if (!(tail > policy.tail_tolerance * acc.z)) {
            const double rel = acc.z > 0.0 ? tail / acc.z : 0.0;
            return {std::move(acc), rel, cap};
        }
        if (cap >= hard_cap)
            throw NotConverged("partition sum tail bound " + std::to_string(tail) +
                               " exceeds tolerance at per-index cap " +
                               std::to_string(cap));
        cap = std::min(cap * 2, hard_cap);
    }
}

}  // namespace

double Posterior::weight_of(const IdealOutcome& outcome) const {
    auto it = std::lower_bound(
        weights.begin(), weights.end(), outcome,
        [](const auto& entry, const IdealOutcome& o) { return entry.first < o; });
    if (it != weights.end() && it->first == outcome) return it->second;
    return 0.0;
}

double partition_z(const Readout& ro, const InputState& input, const PumpParameter& pump,
                   const DetectorQuad& dets, const TruncationPolicy& policy) {
    check_policy(pump, policy);
    return converge(ro, input, pump, dets, policy, false).acc.z;
}

Posterior posterior(const Readout& ro, const InputState& input, const PumpParameter& pump,
                    const DetectorQuad& dets, const TruncationPolicy& policy) {
    check_policy(pump, policy);
    Converged c = converge(ro, input, pump, dets, policy, true);
    if (c.acc.z <= 0.0)
        throw ZeroEvidence("readout " + ro.to_string() +
                           " has zero probability under the model");

    Posterior post;
    post.readout = ro;
    post.partition_z = c.acc.z;
    post.tail_estimate = c.tail_relative;
    post.cap_used = c.cap;
    post.weights = std::move(c.acc.terms);
    for (auto& [outcome, w] : post.weights) w /= c.acc.z;
    return post;
}

double readout_probability(const Readout& ro, const InputState& input,
                           const PumpParameter& pump, const DetectorQuad& dets,
                           const TruncationPolicy& policy) {
    check_policy(pump, policy);
    const double z = converge(ro, input, pump, dets, policy, false).acc.z;
    const double t2 = pump.tanh_chi() * pump.tanh_chi();
    const double cosh2 = pump.cosh_chi() * pump.cosh_chi();
    return z / (t2 * cosh2 * cosh2);
}

double posterior_doubling_change(const Readout& ro, const InputState& input,
                                 const PumpParameter& pump, const DetectorQuad& dets,
                                 const TruncationPolicy& policy) {
    Posterior base = posterior(ro, input, pump, dets, policy);
    Posterior doubled =
        posterior(ro, input, pump, dets,
                  TruncationPolicy::fixed(std::min(base.cap_used * 2, kMaxIndexCap),
                                          policy.max_total_photons));
    double worst = 0.0;
    auto a = base.weights.begin();
    auto b = doubled.weights.begin();
    while (a != base.weights.end() || b != doubled.weights.end()) {
        if (b == doubled.weights.end() || (a != base.weights.end() && a->first < b->first)) {
            worst = std::max(worst, a->second);
            ++a;
        } else if (a == base.weights.end() || b->first < a->first) {
            worst = std::max(worst, b->second);
            ++b;
        } else {
            worst = std::max(worst, std::abs(a->second - b->second));
            ++a;
            ++b;
        }
    }
    return worst;
}

}  // namespace telefid
