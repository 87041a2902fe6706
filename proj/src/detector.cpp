#include "telefid/detector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "telefid/errors.hpp"

namespace telefid {

DetectorParams::DetectorParams(double eta_, double zeta_dc_)
    : eta(eta_), zeta_dc(zeta_dc_) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("detector efficiency must be in [0,1]");
    if (!(zeta_dc >= 0.0 && zeta_dc < 1.0))
        throw std::invalid_argument("dark-count probability must be in [0,1)");
}

DetectorQuad uniform_detectors(const DetectorParams& d) { return {d, d, d, d}; }

Readout Readout::from_string(std::string_view bits) {
    if (bits.size() != 4)
        throw std::invalid_argument("readout must be four binary digits, got '" +
                                    std::string(bits) + "'");
    Readout ro;
    bool* flags[4] = {&ro.q, &ro.r, &ro.s, &ro.t};
    for (int n = 0; n < 4; ++n) {
        if (bits[n] != '0' && bits[n] != '1')
            throw std::invalid_argument("readout must be four binary digits, got '" +
                                        std::string(bits) + "'");
        *flags[n] = bits[n] == '1';
    }
    return ro;
}

std::string Readout::to_string() const {
    std::string out(4, '0');
    out[0] = q ? '1' : '0';
    out[1] = r ? '1' : '0';
    out[2] = s ? '1' : '0';
    out[3] = t ? '1' : '0';
    return out;
}

std::array<Readout, 16> Readout::all() {
    std::array<Readout, 16> result{};
    for (int n = 0; n < 16; ++n)
        result[n] = Readout{bool(n & 8), bool(n & 4), bool(n & 2), bool(n & 1)};
    return result;
}

std::array<Readout, 2> Readout::psi_minus_signature() {
    return {Readout{true, false, false, true}, Readout{false, true, true, false}};
}

ChannelParams::ChannelParams(double base_efficiency_, double attenuation_db_per_km_,
                             double distance_km_, double dark_count_rate_hz_,
                             double coincidence_window_s_)
    : base_efficiency(base_efficiency_),
      attenuation_db_per_km(attenuation_db_per_km_),
      distance_km(distance_km_),
      dark_count_rate_hz(dark_count_rate_hz_),
      coincidence_window_s(coincidence_window_s_) {
    if (!(base_efficiency >= 0.0 && base_efficiency <= 1.0))
        throw std::invalid_argument("base efficiency must be in [0,1]");
    if (!(attenuation_db_per_km >= 0.0))
        throw std::invalid_argument("attenuation must be >= 0");
    if (!(distance_km >= 0.0))
        throw std::invalid_argument("distance must be >= 0");
    if (!(dark_count_rate_hz >= 0.0))
        throw std::invalid_argument("dark-count rate must be >= 0");
    if (!(coincidence_window_s > 0.0))
        throw std::invalid_argument("coincidence window must be > 0");
    if (!(dark_count_rate_hz * coincidence_window_s < 1.0))
        throw std::invalid_argument("dark-count rate x window must be < 1");
}

DetectorParams ChannelParams::to_detector() const {
    return {effective_efficiency(*this),
            dark_count_probability(dark_count_rate_hz, coincidence_window_s)};
}

double p_no_click(int photons, const DetectorParams& det) {
    if (photons < 0) throw std::invalid_argument("photon count must be >= 0");
    const double survive = 1.0 - det.eta * (1.0 - det.zeta_dc);
    return (1.0 - det.zeta_dc) * std::pow(survive, photons);
}

double p_click(int photons, const DetectorParams& det) {
    return 1.0 - p_no_click(photons, det);
}

double readout_likelihood(const Readout& ro, const IdealOutcome& o,
                          const DetectorQuad& dets) {
    auto factor = [](bool clicked, int photons, const DetectorParams& det) {
        return clicked ? p_click(photons, det) : p_no_click(photons, det);
    };
    return factor(ro.q, o.i, dets[0]) * factor(ro.r, o.j, dets[1]) *
           factor(ro.s, o.k, dets[2]) * factor(ro.t, o.l, dets[3]);
}

double effective_efficiency(const ChannelParams& ch) {
    return ch.base_efficiency *
           std::pow(10.0, -ch.attenuation_db_per_km * ch.distance_km / 10.0);
}

double dark_count_probability(double rate_hz, double window_s) {
    if (rate_hz < 0.0 || window_s <= 0.0)
        throw std::invalid_argument("dark-count rate must be >= 0 and window > 0");
    const double product = rate_hz * window_s;
    if (product >= 0.1)
        throw WindowTooLarge("rate x window = " + std::to_string(product) +
                             " is outside the linear dark-count regime (< 0.1)");
    return product;
}

}  // namespace telefid
