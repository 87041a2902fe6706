// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. The CLI path for the determinism check comes in as argv[1].
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <sys/wait.h>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "telefid/errors.hpp"
#include "telefid/fidelity.hpp"
#include "telefid/fock.hpp"
#include "telefid/sweep.hpp"

using namespace telefid;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, const std::string& label, bool passed, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", passed ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

const std::vector<Readout> kAccepted{Readout::from_string("1001"),
                                     Readout::from_string("0110")};

double averaged_fidelity(double chi, double eta, double zeta) {
    const FidelityReport report =
        average_fidelity(InputState::standard_set(), kAccepted, PumpParameter(chi),
                         uniform_detectors(DetectorParams{eta, zeta}), TruncationPolicy{});
    return report.average_fidelity;
}

std::vector<InputState> equivalence_inputs() {
    std::vector<InputState> inputs = InputState::standard_set();
    inputs.emplace_back(0.6, 0.8);
    return inputs;
}

void criterion_1_experiment() {
    const auto start = std::chrono::steady_clock::now();
    const double value = averaged_fidelity(0.316, 7.463e-6, 1e-6);
    const double elapsed = seconds_since(start);
    const bool in_band = std::abs(value - 0.798) <= 0.02;
    const bool in_time = elapsed < 30.0;
    report(1, "experiment reproduction at chi=0.316, eta=7.463e-6, zeta=1e-6",
           in_band && in_time,
           fmt("average fidelity %.4f vs 0.798 +/- 0.02, %.1f s", value, elapsed));
}

void criterion_2_and_3_oracle_probabilities_and_states() {
    const auto start = std::chrono::steady_clock::now();
    double p_dev = 0.0;
    double state_dev = 0.0;
    for (double chi : {0.1, 0.3, 0.6}) {
        const PumpParameter pump(chi);
        for (const InputState& input : equivalence_inputs()) {
            const FockVector state = apply_beam_splitter(build_joint_state(input, pump, 9));
            for (int i = 0; i <= 4; ++i)
                for (int j = 0; i + j <= 4; ++j)
                    for (int k = 0; i + j + k <= 4; ++k)
                        for (int l = 0; i + j + k + l <= 4; ++l) {
                            const IdealOutcome o{i, j, k, l};
                            const auto projected = project_outcome(state, o);
                            p_dev = std::max(
                                p_dev, std::abs(projected.probability -
                                                ideal_outcome_probability(o, input, pump)));
                            if (!projected.state || e_factor(o, input) == 0.0) continue;
                            const auto model = teleported_pure_state(o, input);
                            const auto& oracle = *projected.state;
                            const double oh = oracle.amplitude_at(model.occupation_h[0],
                                                                  model.occupation_h[1]);
                            const double ov = oracle.amplitude_at(model.occupation_v[0],
                                                                  model.occupation_v[1]);
                            const double aligned =
                                std::abs(model.amplitude_h) >= std::abs(model.amplitude_v)
                                    ? oh * model.amplitude_h
                                    : ov * model.amplitude_v;
                            const double sign = aligned < 0.0 ? -1.0 : 1.0;
                            state_dev = std::max(
                                state_dev, std::abs(oh - sign * model.amplitude_h));
                            state_dev = std::max(
                                state_dev, std::abs(ov - sign * model.amplitude_v));
                            for (const auto& [occ, amp] : oracle.amplitudes)
                                if (occ != model.occupation_h && occ != model.occupation_v)
                                    state_dev = std::max(state_dev, std::abs(amp));
                        }
        }
    }
    const double elapsed = seconds_since(start);
    report(2, "outcome probabilities match the state-vector oracle",
           p_dev < 1e-10 && elapsed < 60.0,
           fmt("max deviation %.2e vs 1e-10, totals <= 4, chi in {0.1,0.3,0.6}, %.1f s",
               p_dev, elapsed));
    report(3, "conditional states match the oracle branch-wise", state_dev < 1e-10,
           fmt("max branch deviation %.2e vs 1e-10 (arbitrates the overlap grouping)",
               state_dev));
}

void criterion_4_oracle_fidelity() {
    const auto start = std::chrono::steady_clock::now();
    // Matched enumerations: the model runs on the fixed grid [0,4]^4 and the
    // oracle state is deep enough to represent every one of those outcomes.
    const TruncationPolicy matched = TruncationPolicy::fixed(4);
    const int oracle_max_total = 31;
    double dev = 0.0;
    for (double chi : {0.05, 0.2, 0.4})
        for (double eta : {1e-5, 0.1, 1.0})
            for (double zeta : {0.0, 1e-6, 1e-3})
                for (const std::string& bits : {"1001", "1100"})
                    for (const InputState& input : InputState::standard_set()) {
                        const Readout ro = Readout::from_string(bits);
                        const PumpParameter pump(chi);
                        const DetectorQuad dets =
                            uniform_detectors(DetectorParams{eta, zeta});
                        const double model = fidelity_direct(ro, input, pump, dets, matched);
                        const double oracle =
                            oracle_fidelity(ro, input, pump, dets, oracle_max_total, 4);
                        dev = std::max(dev, std::abs(model - oracle));
                    }
    report(4, "mixture fidelity matches the end-to-end oracle", dev < 1e-8,
           fmt("max |model - oracle| %.2e vs 1e-8 over the 3x3x3 grid, %.1f s", dev,
               seconds_since(start)));
}

void criterion_5_normalizations() {
    // Outcome probabilities over totals <= 10.
    const PumpParameter pump(0.2);
    const InputState input = InputState::plus();
    double outcome_sum = 0.0;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; i + j <= 10; ++j)
            for (int k = 0; i + j + k <= 10; ++k)
                for (int l = 0; i + j + k + l <= 10; ++l)
                    outcome_sum += ideal_outcome_probability({i, j, k, l}, input, pump);

    // Readout marginals over the sixteen patterns.
    const PumpParameter pump_r(0.3);
    const DetectorQuad dets = uniform_detectors(DetectorParams{0.1, 1e-5});
    double readout_sum = 0.0;
    for (const Readout& ro : Readout::all())
        readout_sum += readout_probability(ro, input, pump_r, dets, TruncationPolicy{});

    // Posterior weights.
    double worst_posterior = 0.0;
    for (const std::string& bits : {"1001", "1111", "1000"}) {
        const Posterior post =
            posterior(Readout::from_string(bits), input, pump_r, dets, TruncationPolicy{});
        double sum = 0.0;
        for (const auto& [o, w] : post.weights) sum += w;
        worst_posterior = std::max(worst_posterior, std::abs(sum - 1.0));
    }

    const bool passed = std::abs(outcome_sum - 1.0) < 1e-9 &&
                        std::abs(readout_sum - 1.0) < 1e-9 && worst_posterior < 1e-9;
    report(5, "probability normalizations", passed,
           fmt("|sum p - 1| = %.2e, |sum readouts - 1| = %.2e, posterior %.2e, all vs 1e-9",
               std::abs(outcome_sum - 1.0), std::abs(readout_sum - 1.0), worst_posterior));
}

double g_peak_chi = 0.06;  // refined by criterion 6, consumed by criterion 7

void criterion_6_peak() {
    const auto start = std::chrono::steady_clock::now();
    const int points = 25;
    std::vector<double> grid(points), values(points);
    const double lo = std::log10(0.005), hi = std::log10(0.5);
    for (int n = 0; n < points; ++n) {
        grid[n] = std::pow(10.0, lo + (hi - lo) * n / double(points - 1));
        values[n] = averaged_fidelity(grid[n], 0.1, 1e-5);
    }
    const auto peak = std::max_element(values.begin(), values.end());
    const int arg = int(peak - values.begin());
    bool unimodal = true;
    for (int n = 0; n < arg; ++n)
        if (!(values[n] < values[n + 1])) unimodal = false;
    for (int n = arg; n + 1 < points; ++n)
        if (!(values[n] > values[n + 1])) unimodal = false;
    g_peak_chi = grid[arg];
    const bool in_window = g_peak_chi >= 0.03 && g_peak_chi <= 0.12;
    const bool beats_classical = *peak > 0.66;
    report(6, "fidelity vs pump strength is unimodal with the documented peak",
           unimodal && in_window && beats_classical,
           fmt("argmax chi %.4f in [0.03, 0.12], peak %.4f > 0.66, unimodal=%s, %.1f s",
               g_peak_chi, *peak, unimodal ? "yes" : "no", seconds_since(start)));
}

void criterion_7_efficiency_insensitivity() {
    const auto start = std::chrono::steady_clock::now();
    double lo = 1.0, hi = 0.0;
    for (double eta : {0.025, 0.05, 0.1, 0.2, 0.3}) {
        const double f = averaged_fidelity(g_peak_chi, eta, 1e-5);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    report(7, "fidelity at the peak is insensitive to detector efficiency",
           hi - lo < 0.05,
           fmt("spread %.4f vs 0.05 over eta in {0.025..0.3} at chi=%.4f, %.1f s", hi - lo,
               g_peak_chi, seconds_since(start)));
}

void criterion_8_distance_knee() {
    const auto start = std::chrono::steady_clock::now();
    auto at_distance = [](double d) {
        const double eta = 0.236 * std::pow(10.0, -0.45 * d / 10.0);
        return averaged_fidelity(0.315, eta, 1e-6);
    };
    const double f10 = at_distance(10.0);
    const double f50 = at_distance(50.0);
    const double f100 = at_distance(100.0);
    const double f160 = at_distance(160.0);
    const bool plateau = std::abs(f50 - f10) <= 0.02;
    const bool drop = f160 <= f100 - 0.10;
    report(8, "distance curve shows a plateau then an abrupt dark-count drop",
           plateau && drop,
           fmt("F(10)=%.4f F(50)=%.4f F(100)=%.4f F(160)=%.4f, %.1f s", f10, f50, f100,
               f160, seconds_since(start)));
}

void criterion_9_ideal_limit() {
    const PumpParameter pump(0.01);
    const DetectorQuad ideal = uniform_detectors(DetectorParams{1.0, 0.0});
    double worst = 1.0;
    for (const InputState& input : InputState::standard_set())
        worst = std::min(worst, fidelity_direct(Readout::from_string("1001"), input, pump,
                                                ideal, TruncationPolicy{}));
    report(9, "near-perfect teleportation in the ideal limit", worst >= 0.999,
           fmt("min fidelity %.6f vs 0.999 at eta=1, zeta=0, chi=0.01", worst));
}

void criterion_10_determinism(const char* cli_path) {
    if (cli_path == nullptr) {
        report(10, "preset reruns are byte-identical", false, "CLI path not provided");
        return;
    }
    const auto start = std::chrono::steady_clock::now();
    const std::string dir = [] {
        char pattern[] = "/tmp/telefid_accept_XXXXXX";
        const char* made = mkdtemp(pattern);
        return std::string(made == nullptr ? "/tmp" : made);
    }();
    const std::string first = dir + "/run1.csv";
    const std::string second = dir + "/run2.csv";
    auto run = [&](const std::string& out) {
        const std::string cmd =
            std::string(cli_path) + " --quiet preset fig4 --out " + out;
        const int rc = std::system(cmd.c_str());
        return (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const int rc1 = run(first);
    const int rc2 = run(second);
    const std::string a = slurp(first);
    const std::string b = slurp(second);
    const bool identical = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    report(10, "preset reruns are byte-identical", identical,
           fmt("fig4 CSV %zu bytes, exit codes %d/%d, reruns %s, %.1f s", a.size(), rc1,
               rc2, a == b ? "identical" : "differ", seconds_since(start)));
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1_experiment();
    criterion_2_and_3_oracle_probabilities_and_states();
    criterion_4_oracle_fidelity();
    criterion_5_normalizations();
    criterion_6_peak();
    criterion_7_efficiency_insensitivity();
    criterion_8_distance_knee();
    criterion_9_ideal_limit();
    criterion_10_determinism(argc > 1 ? argv[1] : nullptr);

    std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
