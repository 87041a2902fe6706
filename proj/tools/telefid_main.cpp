#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "telefid/errors.hpp"
#include "telefid/sweep.hpp"

namespace {

// 0 ok, 1 usage/config, 2 numerical failure.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

std::string output_name(const std::string& base, const std::string& label) {
    if (label.empty()) return base;
    const auto dot = base.rfind(".csv");
    const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
    return stem + "_" + label + ".csv";
}

int run_curves(const std::vector<telefid::PresetCurve>& curves, const std::string& out,
               int jobs, bool quiet, bool gnuplot) {
    int exit_code = kOk;
    for (const auto& curve : curves) {
        const std::string path = output_name(out, curve.label);
        const telefid::SweepResult result = telefid::run_sweep(curve.config, jobs);
        std::ofstream file(path);
        if (!file) {
            std::cerr << "error: cannot write '" << path << "'\n";
            return kUsage;
        }
        telefid::write_csv(file, curve.config, result.rows);
        if (gnuplot) {
            std::ofstream script(path + ".gp");
            telefid::write_gnuplot(script, curve.config, path);
        }
        if (!quiet) {
            std::cout << path << ": " << result.rows.size() << " points, sweep over "
                      << telefid::to_string(curve.config.swept);
            std::size_t failed = 0;
            for (const auto& row : result.rows)
                if (row.failed) ++failed;
            if (failed > 0) std::cout << ", " << failed << " failed points";
            std::cout << "\n";
            for (const auto& row : result.rows)
                if (row.failed)
                    std::cerr << "  " << telefid::to_string(curve.config.swept) << " = "
                              << row.value << ": " << row.note << "\n";
        }
        exit_code = std::max(exit_code, result.exit_code);
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"teleportation fidelity model for down-conversion sources and "
                 "threshold detectors"};
    app.require_subcommand(1);
    app.fallthrough();

    int jobs = 1;
    bool quiet = false;
    bool gnuplot = false;
    app.add_option("--jobs", jobs, "worker threads for sweep grids")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress the human-readable summary");
    app.add_flag("--gnuplot", gnuplot, "also emit a gnuplot script next to each CSV");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep from a config file");
    std::string config_path;
    std::string sweep_out;
    sweep_cmd->add_option("--config", config_path, "key = value config file")->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV output path (overrides the config)");

    auto* preset_cmd = app.add_subcommand("preset", "run a built-in figure preset");
    std::string preset_name;
    std::string preset_out;
    preset_cmd
        ->add_option("name", preset_name,
                     "one of: fig2, fig3, fig4, fig5, fig6, experiment. Fidelities are "
                     "probability-weighted over the accepted psi-minus readouts "
                     "{1001, 0110}, then averaged uniformly over the H, V, +, - inputs.")
        ->required();
    preset_cmd->add_option("--out", preset_out, "CSV output path (default <name>.csv)");

    auto* verify_cmd = app.add_subcommand(
        "verify", "check closed forms against the state-vector simulation");
    int max_total = 9;
    std::string chi_list;
    verify_cmd->add_option("--max-total", max_total, "state truncation (<= 12)");
    verify_cmd->add_option("--chi", chi_list, "comma-separated pump values");

    auto* compare_cmd = app.add_subcommand(
        "compare-experiment", "reproduce the 100 km teleportation experiment point");
    double distance = 100.0;
    compare_cmd->add_option("--distance", distance, "channel length in km");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (sweep_cmd->parsed()) {
            telefid::SweepConfig config = telefid::parse_config_file(config_path);
            if (!sweep_out.empty()) config.output_path = sweep_out;
            if (config.output_path.empty()) config.output_path = "sweep.csv";
            return run_curves({{"", config}}, config.output_path, jobs, quiet, gnuplot);
        }
        if (preset_cmd->parsed()) {
            const auto curves = telefid::preset_configs(preset_name);
            const std::string out = preset_out.empty() ? preset_name + ".csv" : preset_out;
            return run_curves(curves, out, jobs, quiet, gnuplot);
        }
        if (verify_cmd->parsed()) {
            telefid::VerifyOptions options;
            options.max_total = max_total;
            if (!chi_list.empty()) {
                options.chi_values.clear();
                std::stringstream ss(chi_list);
                std::string item;
                while (std::getline(ss, item, ','))
                    options.chi_values.push_back(std::stod(item));
            }
            const telefid::VerifyReport report = telefid::run_verify(options);
            std::printf("max |closed-form p - simulated p|      : %.3e (tolerance 1e-10)\n",
                        report.max_probability_deviation);
            std::printf("max conditional-state deviation        : %.3e (tolerance 1e-10)\n",
                        report.max_state_deviation);
            std::printf("max |model fidelity - oracle fidelity| : %.3e (tolerance 1e-8)\n",
                        report.max_fidelity_deviation);
            for (const auto& line : report.diagnostics)
                std::cout << "note: " << line << "\n";
            std::cout << (report.passed ? "verify: PASS" : "verify: FAIL") << "\n";
            return report.passed ? kOk : kNumerical;
        }
        if (compare_cmd->parsed()) {
            const telefid::ExperimentComparison cmp = telefid::compare_experiment(distance);
            std::printf("distance                  : %g km\n", distance);
            std::printf("effective eta             : %.6e\n", cmp.effective_eta);
            std::printf("dark-count probability    : %.6e\n", cmp.zeta_dc);
            std::printf("model average fidelity    : %.4f\n", cmp.model_average_fidelity);
            std::printf("reference (calculated)    : %.4f\n", cmp.reference_calculated);
            std::printf("reference (experimental)  : %.4f\n", cmp.reference_experimental);
            std::printf("deviation vs calculated   : %.4f\n", cmp.deviation_from_calculated);
            std::printf("deviation vs experimental : %.4f\n",
                        cmp.deviation_from_experimental);
            return kOk;
        }
    } catch (const telefid::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
