#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "telefid/fidelity.hpp"

namespace telefid {

enum class SweptParameter { chi, eta, zeta_dc, distance };

std::string to_string(SweptParameter p);

// One sweep = one curve. Figure presets that show several curves expand
// into several configs (see preset_configs).
struct SweepConfig {
    SweptParameter swept = SweptParameter::chi;
    std::vector<double> grid;  // non-empty, strictly increasing

    // Fixed parameters. eta is used directly unless the channel mapping
    // fields are set (base_efficiency >= 0), in which case the effective
    // efficiency is derived from base/attenuation/distance.
    double chi = 0.1;
    double eta = 0.1;
    double zeta_dc = 1e-6;
    double base_efficiency = -1.0;       // < 0: direct eta
    double attenuation_db_per_km = 0.45;
    double distance_km = 0.0;

    std::vector<InputState> inputs = InputState::standard_set();
    std::vector<Readout> accepted{Readout{true, false, false, true},
                                  Readout{false, true, true, false}};
    TruncationPolicy truncation{};
    std::string output_path;

    void validate() const;  // throws ConfigError
};

struct SweepRow {
    double value = 0.0;
    std::vector<double> per_input_fidelity;
    double average_fidelity = 0.0;
    double accepted_probability = 0.0;   // mean over inputs
    double truncation_residual = 0.0;
    bool failed = false;                 // ZeroEvidence / NotConverged sentinel
    std::string note;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int exit_code = 0;  // 0 ok, 2 numerical failure at >= 1 grid point
};

// key = value per line, '#' comments. Throws ConfigError with line
// diagnostics.
SweepConfig parse_config(std::istream& in);
SweepConfig parse_config_file(const std::string& path);

struct PresetCurve {
    std::string label;  // empty for single-curve presets
    SweepConfig config;
};

std::vector<std::string> preset_names();
std::vector<PresetCurve> preset_configs(const std::string& name);

SweepResult run_sweep(const SweepConfig& config, int jobs = 1);

// Fixed 9-column schema, floats with 12 significant digits; byte-stable
// across runs.
void write_csv(std::ostream& out, const SweepConfig& config,
               const std::vector<SweepRow>& rows);

// Companion gnuplot script plotting the averaged fidelity from the CSV.
void write_gnuplot(std::ostream& out, const SweepConfig& config,
                   const std::string& csv_path);

// Oracle-equivalence checks runnable from the command line.
struct VerifyOptions {
    int max_total = 9;                         // state truncation, <= 12
    std::vector<double> chi_values{0.1, 0.3, 0.6};
    double probability_tolerance = 1e-10;
    double state_tolerance = 1e-10;
    double fidelity_tolerance = 1e-8;
};

struct VerifyReport {
    double max_probability_deviation = 0.0;
    double max_state_deviation = 0.0;
    double max_fidelity_deviation = 0.0;
    bool passed = false;
    std::vector<std::string> diagnostics;
};

VerifyReport run_verify(const VerifyOptions& options);

// Experiment reproduction: pair source at chi = sqrt(0.1), detectors at
// 0.236 base efficiency behind attenuation, 200/s dark counts in a 5 ns
// window.
struct ExperimentComparison {
    double model_average_fidelity = 0.0;
    double reference_calculated = 0.798;     // value reported alongside the experiment
    double reference_experimental = 0.8135;  // measured average fidelity
    double deviation_from_calculated = 0.0;
    double deviation_from_experimental = 0.0;
    double effective_eta = 0.0;
    double zeta_dc = 0.0;
};

ExperimentComparison compare_experiment(double distance_km = 100.0);

}  // namespace telefid
