#include "telefid/spdc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "telefid/errors.hpp"
#include "tables.hpp"

namespace telefid {

namespace {

void check_outcome(const IdealOutcome& o) {
    if (o.i < 0 || o.j < 0 || o.k < 0 || o.l < 0)
        throw std::invalid_argument("photon counts must be non-negative");
    if (o.i + o.k > detail::kMaxCount || o.j + o.l > detail::kMaxCount)
        throw std::invalid_argument("outcome total " + std::to_string(o.total()) +
                                    " exceeds the supported truncation range");
}

}  // namespace

InputState::InputState(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    const double norm2 = alpha * alpha + beta * beta;
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("input state is not normalized: alpha^2 + beta^2 = " +
                                    std::to_string(norm2));
}

InputState InputState::plus() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r};
}

InputState InputState::minus() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, -r};
}

std::vector<InputState> InputState::standard_set() {
    return {horizontal(), vertical(), plus(), minus()};
}

PumpParameter::PumpParameter(double chi) : chi_(chi) {
    if (!(chi >= 0.0))
        throw std::invalid_argument("pump parameter chi must be >= 0");
    tanh_chi_ = std::tanh(chi);
    cosh_chi_ = std::cosh(chi);
}

double e_factor(const IdealOutcome& o, const InputState& in) {
    check_outcome(o);
    using detail::factorial;
    double result = 0.0;
    if (o.i != o.k) {
        const double d = o.i - o.k;
        result += in.alpha() * in.alpha() * factorial(o.i + o.k - 1) *
                  factorial(o.j + o.l) * d * d;
    }
    if (o.l != o.j) {
        const double d = o.l - o.j;
        result += in.beta() * in.beta() * factorial(o.i + o.k) *
                  factorial(o.j + o.l - 1) * d * d;
    }
    return result;
}

double ideal_outcome_probability(const IdealOutcome& o, const InputState& in,
                                 const PumpParameter& pump) {
    check_outcome(o);
    const double e = e_factor(o, in);
    if (e == 0.0) return 0.0;  // covers the total == 0 exponent
    const int n = o.total();
    const double t2 = pump.tanh_chi() * pump.tanh_chi();
    const double cosh2 = pump.cosh_chi() * pump.cosh_chi();
    const double denom = cosh2 * cosh2 * std::pow(2.0, n) * detail::factorial(o.i) *
                         detail::factorial(o.j) * detail::factorial(o.k) *
                         detail::factorial(o.l);
    return std::pow(t2, n - 1) / denom * e;
}

PureTeleportedState teleported_pure_state(const IdealOutcome& o, const InputState& in) {
    check_outcome(o);
    const double e = e_factor(o, in);
    if (e <= 0.0)
        throw UnreachableOutcome("no conditional state for outcome (" +
                                 std::to_string(o.i) + "," + std::to_string(o.j) + "," +
                                 std::to_string(o.k) + "," + std::to_string(o.l) + ")");
    using detail::factorial;
    const double scale = 1.0 / std::sqrt(e);

    PureTeleportedState state;
    state.occupation_h = {o.j + o.l, o.i + o.k - 1};
    state.occupation_v = {o.j + o.l - 1, o.i + o.k};
    if (o.i != o.k)
        state.amplitude_h = scale * in.alpha() *
                            std::sqrt(factorial(o.i + o.k - 1) * factorial(o.j + o.l)) *
                            (o.i - o.k);
    if (o.l != o.j)
        state.amplitude_v = scale * in.beta() *
                            std::sqrt(factorial(o.i + o.k) * factorial(o.j + o.l - 1)) *
                            (o.l - o.j);
    return state;
}

double PureTeleportedState::overlap(const InputState& input) const {
    auto ket_coeff = [&input](const std::array<int, 2>& occ) {
        if (occ[0] == 1 && occ[1] == 0) return input.alpha();
        if (occ[0] == 0 && occ[1] == 1) return input.beta();
        return 0.0;
    };
    return amplitude_h * ket_coeff(occupation_h) + amplitude_v * ket_coeff(occupation_v);
}

}  // namespace telefid
