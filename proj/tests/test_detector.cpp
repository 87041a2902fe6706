#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "telefid/detector.hpp"
#include "telefid/errors.hpp"

using namespace telefid;

TEST_CASE("no-click probability on the worked examples") {
    CHECK(p_no_click(0, {0.3, 0.0}) == 1.0);
    CHECK(p_no_click(3, {1.0, 0.0}) == 0.0);
    const DetectorParams det{0.236, 1e-6};
    const double expected = (1.0 - 1e-6) * (1.0 - 0.236 * (1.0 - 1e-6));
    CHECK(p_no_click(1, det) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(p_no_click(-1, det), std::invalid_argument);
}

TEST_CASE("click probability on the worked examples") {
    CHECK(p_click(0, {0.5, 0.0}) == 0.0);
    CHECK(p_click(0, {0.9, 0.01}) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(p_click(2, {0.5, 0.0}) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("click and no-click are exact complements") {
    for (double eta : {0.0, 0.1, 0.5, 1.0})
        for (double zeta : {0.0, 1e-6, 1e-2})
            for (int photons : {0, 1, 2, 5, 11})
                CHECK(p_click(photons, {eta, zeta}) + p_no_click(photons, {eta, zeta}) ==
                      1.0);
}

TEST_CASE("click probability is monotone in photons, efficiency and darks") {
    const double etas[] = {0.01, 0.1, 0.3, 0.9};
    const double zetas[] = {0.0, 1e-6, 1e-3, 1e-2};
    for (double eta : etas)
        for (double zeta : zetas)
            for (int n = 0; n < 8; ++n)
                CHECK(p_click(n + 1, {eta, zeta}) >= p_click(n, {eta, zeta}));
    for (int n : {0, 1, 4}) {
        for (std::size_t e = 0; e + 1 < 4; ++e)
            CHECK(p_click(n, {etas[e + 1], 1e-4}) >= p_click(n, {etas[e], 1e-4}));
        for (std::size_t z = 0; z + 1 < 4; ++z)
            CHECK(p_click(n, {0.2, zetas[z + 1]}) >= p_click(n, {0.2, zetas[z]}));
    }
}

TEST_CASE("detector parameter validation") {
    CHECK_THROWS_AS(DetectorParams(1.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DetectorParams(-0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DetectorParams(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("readout strings and enumeration") {
    const Readout ro = Readout::from_string("1001");
    CHECK(ro.q);
    CHECK_FALSE(ro.r);
    CHECK_FALSE(ro.s);
    CHECK(ro.t);
    CHECK(ro.to_string() == "1001");
    CHECK_THROWS_AS(Readout::from_string("10"), std::invalid_argument);
    CHECK_THROWS_AS(Readout::from_string("10a1"), std::invalid_argument);

    std::set<int> indices;
    for (const Readout& r : Readout::all()) indices.insert(r.index());
    CHECK(indices.size() == 16);

    const auto signature = Readout::psi_minus_signature();
    CHECK(signature[0].to_string() == "1001");
    CHECK(signature[1].to_string() == "0110");
}

TEST_CASE("readout likelihood on the worked examples") {
    const DetectorQuad ideal = uniform_detectors({1.0, 0.0});
    const DetectorQuad dark = uniform_detectors({0.3, 1e-3});

    CHECK(readout_likelihood(Readout::from_string("0000"), {0, 0, 0, 0},
                             uniform_detectors({0.7, 0.0})) == 1.0);
    CHECK(readout_likelihood(Readout::from_string("1111"), {0, 0, 0, 0}, dark) ==
          doctest::Approx(std::pow(1e-3, 4)).epsilon(1e-12));
    CHECK(readout_likelihood(Readout::from_string("1001"), {1, 0, 0, 1}, ideal) == 1.0);
}

TEST_CASE("readout likelihoods sum to one over the sixteen patterns") {
    const IdealOutcome outcomes[] = {{0, 0, 0, 0}, {1, 0, 0, 1}, {2, 3, 1, 0}, {5, 5, 5, 5}};
    const DetectorQuad quads[] = {
        uniform_detectors({0.3, 1e-3}),
        uniform_detectors({1.0, 0.0}),
        {DetectorParams{0.1, 1e-5}, DetectorParams{0.9, 1e-2}, DetectorParams{0.5, 0.0},
         DetectorParams{0.0, 0.2}},
    };
    for (const auto& quad : quads)
        for (const auto& outcome : outcomes) {
            double sum = 0.0;
            for (const Readout& ro : Readout::all())
                sum += readout_likelihood(ro, outcome, quad);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("effective efficiency reproduces the 45 dB budget") {
    const ChannelParams ch{0.236, 0.45, 100.0, 200.0, 5e-9};
    const double eta = effective_efficiency(ch);
    CHECK(eta == doctest::Approx(0.236 * std::pow(10.0, -4.5)).epsilon(1e-15));
    CHECK(std::abs(eta - 7.463e-6) < 5e-10);

    CHECK(effective_efficiency({0.236, 0.45, 0.0, 200.0, 5e-9}) == 0.236);
    CHECK(effective_efficiency({0.236, 0.0, 500.0, 200.0, 5e-9}) == 0.236);

    double previous = 1.0;
    for (double d : {0.0, 10.0, 50.0, 100.0, 200.0}) {
        const double value = effective_efficiency({0.9, 0.45, d, 0.0, 1e-9});
        CHECK(value <= previous);
        previous = value;
    }
}

TEST_CASE("dark-count probability is linear in the window") {
    CHECK(dark_count_probability(200.0, 5e-9) == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(dark_count_probability(0.0, 5e-9) == 0.0);
    CHECK_THROWS_AS(dark_count_probability(200.0, 1e-3), WindowTooLarge);
}

TEST_CASE("channel parameter validation") {
    CHECK_THROWS_AS(ChannelParams(0.2, 0.45, 100.0, 1e9, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(0.2, -0.1, 100.0, 200.0, 5e-9), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(0.2, 0.45, -1.0, 200.0, 5e-9), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(0.2, 0.45, 1.0, 200.0, 0.0), std::invalid_argument);

    const ChannelParams ch{0.236, 0.45, 100.0, 200.0, 5e-9};
    const DetectorParams det = ch.to_detector();
    CHECK(det.eta == doctest::Approx(7.463e-6).epsilon(1e-4));
    CHECK(det.zeta_dc == doctest::Approx(1e-6).epsilon(1e-12));
}
