#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "telefid/spdc.hpp"

namespace telefid {

// Threshold detector: efficiency eta in [0,1] (all transmission and
// coupling losses folded in) and dark-count probability per detection
// window zeta_dc in [0,1).
struct DetectorParams {
    double eta;
    double zeta_dc;

    DetectorParams(double eta_, double zeta_dc_);
};

// One detector per mode a_H, a_V, b_H, b_V.
using DetectorQuad = std::array<DetectorParams, 4>;

DetectorQuad uniform_detectors(const DetectorParams& d);

// Binary click pattern of the four threshold detectors.
struct Readout {
    bool q = false;  // a_H
    bool r = false;  // a_V
    bool s = false;  // b_H
    bool t = false;  // b_V

    auto operator<=>(const Readout&) const = default;

    static Readout from_string(std::string_view bits);  // e.g. "1001"
    std::string to_string() const;
    int index() const { return (q << 3) | (r << 2) | (s << 1) | int(t); }

    static std::array<Readout, 16> all();
    // psi-minus signature: clicks in opposite arms, opposite polarizations.
    static std::array<Readout, 2> psi_minus_signature();
};

// Physical channel/detector description used to derive DetectorParams.
struct ChannelParams {
    double base_efficiency;        // detector efficiency at zero distance
    double attenuation_db_per_km;  // >= 0
    double distance_km;            // >= 0
    double dark_count_rate_hz;     // >= 0
    double coincidence_window_s;   // > 0

    ChannelParams(double base_efficiency_, double attenuation_db_per_km_,
                  double distance_km_, double dark_count_rate_hz_,
                  double coincidence_window_s_);

    DetectorParams to_detector() const;
};

double p_no_click(int photons, const DetectorParams& det);
double p_click(int photons, const DetectorParams& det);

// Probability of the click pattern given the ideal outcome; the four
// detectors are independent.
double readout_likelihood(const Readout& readout, const IdealOutcome& outcome,
                          const DetectorQuad& dets);

// base_efficiency * 10^(-attenuation * distance / 10)
double effective_efficiency(const ChannelParams& ch);

// First-order Poisson dark-count probability rate * window.
// Throws WindowTooLarge when rate * window >= 0.1.
double dark_count_probability(double rate_hz, double window_s);

}  // namespace telefid
