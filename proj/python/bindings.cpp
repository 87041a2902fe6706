#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "telefid/errors.hpp"
#include "telefid/fidelity.hpp"
#include "telefid/fock.hpp"
#include "telefid/sweep.hpp"

namespace py = pybind11;
using namespace telefid;

PYBIND11_MODULE(telefid, m) {
    m.doc() = "Teleportation fidelity model: down-conversion source statistics, "
              "threshold-detector inference and a state-vector cross-check.";

    py::register_exception<UnreachableOutcome>(m, "UnreachableOutcome");
    py::register_exception<WindowTooLarge>(m, "WindowTooLarge");
    py::register_exception<NotConverged>(m, "NotConverged");
    py::register_exception<ZeroEvidence>(m, "ZeroEvidence");
    py::register_exception<NoAcceptedEvidence>(m, "NoAcceptedEvidence");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<InputState>(m, "InputState")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_property_readonly("alpha", &InputState::alpha)
        .def_property_readonly("beta", &InputState::beta)
        .def_static("horizontal", &InputState::horizontal)
        .def_static("vertical", &InputState::vertical)
        .def_static("plus", &InputState::plus)
        .def_static("minus", &InputState::minus)
        .def_static("standard_set", &InputState::standard_set)
        .def("__repr__", [](const InputState& s) {
            return "InputState(" + std::to_string(s.alpha()) + ", " +
                   std::to_string(s.beta()) + ")";
        });

    py::class_<PumpParameter>(m, "PumpParameter")
        .def(py::init<double>(), py::arg("chi"))
        .def_property_readonly("chi", &PumpParameter::chi)
        .def_property_readonly("tanh_chi", &PumpParameter::tanh_chi)
        .def_property_readonly("cosh_chi", &PumpParameter::cosh_chi);

    py::class_<IdealOutcome>(m, "IdealOutcome")
        .def(py::init([](int i, int j, int k, int l) {
                 return IdealOutcome{i, j, k, l};
             }),
             py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"))
        .def_readwrite("i", &IdealOutcome::i)
        .def_readwrite("j", &IdealOutcome::j)
        .def_readwrite("k", &IdealOutcome::k)
        .def_readwrite("l", &IdealOutcome::l)
        .def("total", &IdealOutcome::total)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def("__repr__", [](const IdealOutcome& o) {
            return "IdealOutcome(" + std::to_string(o.i) + ", " + std::to_string(o.j) +
                   ", " + std::to_string(o.k) + ", " + std::to_string(o.l) + ")";
        });

    py::class_<PureTeleportedState>(m, "PureTeleportedState")
        .def_readonly("amplitude_h", &PureTeleportedState::amplitude_h)
        .def_readonly("amplitude_v", &PureTeleportedState::amplitude_v)
        .def_readonly("occupation_h", &PureTeleportedState::occupation_h)
        .def_readonly("occupation_v", &PureTeleportedState::occupation_v)
        .def("overlap", &PureTeleportedState::overlap, py::arg("input"));

    py::class_<DetectorParams>(m, "DetectorParams")
        .def(py::init<double, double>(), py::arg("eta"), py::arg("zeta_dc"))
        .def_readonly("eta", &DetectorParams::eta)
        .def_readonly("zeta_dc", &DetectorParams::zeta_dc);

    py::class_<Readout>(m, "Readout")
        .def(py::init([](const std::string& bits) { return Readout::from_string(bits); }),
             py::arg("bits"))
        .def_static("from_string", &Readout::from_string)
        .def_static("all", &Readout::all)
        .def_static("psi_minus_signature", &Readout::psi_minus_signature)
        .def("to_string", &Readout::to_string)
        .def("index", &Readout::index)
        .def(py::self == py::self)
        .def("__repr__", [](const Readout& r) { return "Readout('" + r.to_string() + "')"; });

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<double, double, double, double, double>(), py::arg("base_efficiency"),
             py::arg("attenuation_db_per_km"), py::arg("distance_km"),
             py::arg("dark_count_rate_hz"), py::arg("coincidence_window_s"))
        .def_readonly("base_efficiency", &ChannelParams::base_efficiency)
        .def_readonly("attenuation_db_per_km", &ChannelParams::attenuation_db_per_km)
        .def_readonly("distance_km", &ChannelParams::distance_km)
        .def_readonly("dark_count_rate_hz", &ChannelParams::dark_count_rate_hz)
        .def_readonly("coincidence_window_s", &ChannelParams::coincidence_window_s)
        .def("to_detector", &ChannelParams::to_detector);

    py::class_<TruncationPolicy>(m, "TruncationPolicy")
        .def(py::init([](int cap, double tol, int total_cap) {
                 return TruncationPolicy{cap, tol, total_cap};
             }),
             py::arg("max_photons_per_index") = 6, py::arg("tail_tolerance") = 1e-12,
             py::arg("max_total_photons") = -1)
        .def_readwrite("max_photons_per_index", &TruncationPolicy::max_photons_per_index)
        .def_readwrite("tail_tolerance", &TruncationPolicy::tail_tolerance)
        .def_readwrite("max_total_photons", &TruncationPolicy::max_total_photons)
        .def_static("fixed", &TruncationPolicy::fixed, py::arg("cap"),
                    py::arg("total_cap") = -1);

    py::class_<Posterior>(m, "Posterior")
        .def_readonly("readout", &Posterior::readout)
        .def_readonly("weights", &Posterior::weights)
        .def_readonly("partition_z", &Posterior::partition_z)
        .def_readonly("tail_estimate", &Posterior::tail_estimate)
        .def_readonly("cap_used", &Posterior::cap_used)
        .def("weight_of", &Posterior::weight_of, py::arg("outcome"));

    py::class_<MixedTeleportedState>(m, "MixedTeleportedState")
        .def_readonly("readout", &MixedTeleportedState::readout)
        .def_readonly("components", &MixedTeleportedState::components);

    py::class_<ReadoutFidelity>(m, "ReadoutFidelity")
        .def_readonly("fidelity", &ReadoutFidelity::fidelity)
        .def_readonly("probability", &ReadoutFidelity::probability);

    py::class_<FidelityReport::PerInput>(m, "PerInputFidelity")
        .def_readonly("input", &FidelityReport::PerInput::input)
        .def_readonly("per_readout", &FidelityReport::PerInput::per_readout)
        .def_readonly("accepted_probability", &FidelityReport::PerInput::accepted_probability)
        .def_readonly("fidelity", &FidelityReport::PerInput::fidelity);

    py::class_<FidelityReport>(m, "FidelityReport")
        .def_readonly("accepted", &FidelityReport::accepted)
        .def_readonly("per_input", &FidelityReport::per_input)
        .def_readonly("per_readout", &FidelityReport::per_readout)
        .def_readonly("average_fidelity", &FidelityReport::average_fidelity)
        .def_readonly("max_truncation_residual", &FidelityReport::max_truncation_residual);

    m.def("uniform_detectors", &uniform_detectors, py::arg("detector"));
    m.def("e_factor", &e_factor, py::arg("outcome"), py::arg("input"));
    m.def("ideal_outcome_probability", &ideal_outcome_probability, py::arg("outcome"),
          py::arg("input"), py::arg("pump"));
    m.def("teleported_pure_state", &teleported_pure_state, py::arg("outcome"),
          py::arg("input"));
    m.def("p_no_click", &p_no_click, py::arg("photons"), py::arg("detector"));
    m.def("p_click", &p_click, py::arg("photons"), py::arg("detector"));
    m.def("readout_likelihood", &readout_likelihood, py::arg("readout"), py::arg("outcome"),
          py::arg("detectors"));
    m.def("effective_efficiency", &effective_efficiency, py::arg("channel"));
    m.def("dark_count_probability", &dark_count_probability, py::arg("rate_hz"),
          py::arg("window_s"));
    m.def("partition_z", &partition_z, py::arg("readout"), py::arg("input"), py::arg("pump"),
          py::arg("detectors"), py::arg("policy") = TruncationPolicy{});
    m.def("posterior", &posterior, py::arg("readout"), py::arg("input"), py::arg("pump"),
          py::arg("detectors"), py::arg("policy") = TruncationPolicy{});
    m.def("readout_probability", &readout_probability, py::arg("readout"), py::arg("input"),
          py::arg("pump"), py::arg("detectors"), py::arg("policy") = TruncationPolicy{});
    m.def("mixed_state", &mixed_state, py::arg("readout"), py::arg("input"), py::arg("pump"),
          py::arg("detectors"), py::arg("policy") = TruncationPolicy{});
    m.def("fidelity_direct", &fidelity_direct, py::arg("readout"), py::arg("input"),
          py::arg("pump"), py::arg("detectors"), py::arg("policy") = TruncationPolicy{});
    m.def("fidelity_closed_form", &fidelity_closed_form, py::arg("readout"),
          py::arg("input"), py::arg("pump"), py::arg("detectors"),
          py::arg("policy") = TruncationPolicy{});
    m.def("average_fidelity", &average_fidelity, py::arg("inputs"), py::arg("accepted"),
          py::arg("pump"), py::arg("detectors"), py::arg("policy") = TruncationPolicy{});
    m.def("oracle_fidelity", &oracle_fidelity, py::arg("readout"), py::arg("input"),
          py::arg("pump"), py::arg("detectors"), py::arg("max_total"),
          py::arg("index_cap") = -1);

    py::class_<FockVector>(m, "FockVector")
        .def(py::init<int>(), py::arg("max_total"))
        .def("add", &FockVector::add, py::arg("occupation"), py::arg("amplitude"))
        .def("amplitude", &FockVector::amplitude, py::arg("occupation"))
        .def("squared_norm", &FockVector::squared_norm)
        .def_property_readonly("max_total", &FockVector::max_total)
        .def_property_readonly("amplitudes", [](const FockVector& v) {
            return v.amplitudes();
        });

    py::class_<ConditionalState>(m, "ConditionalState")
        .def_readonly("amplitudes", &ConditionalState::amplitudes)
        .def("amplitude_at", &ConditionalState::amplitude_at, py::arg("n_ch"),
             py::arg("n_cv"))
        .def("overlap", &ConditionalState::overlap, py::arg("input"));

    py::class_<ProjectionResult>(m, "ProjectionResult")
        .def_readonly("probability", &ProjectionResult::probability)
        .def_readonly("state", &ProjectionResult::state);

    m.def("build_joint_state", &build_joint_state, py::arg("input"), py::arg("pump"),
          py::arg("max_total"));
    m.def("apply_beam_splitter", &apply_beam_splitter, py::arg("state"));
    m.def("project_outcome", &project_outcome, py::arg("state"), py::arg("outcome"));

    py::class_<ExperimentComparison>(m, "ExperimentComparison")
        .def_readonly("model_average_fidelity", &ExperimentComparison::model_average_fidelity)
        .def_readonly("reference_calculated", &ExperimentComparison::reference_calculated)
        .def_readonly("reference_experimental",
                      &ExperimentComparison::reference_experimental)
        .def_readonly("deviation_from_calculated",
                      &ExperimentComparison::deviation_from_calculated)
        .def_readonly("deviation_from_experimental",
                      &ExperimentComparison::deviation_from_experimental)
        .def_readonly("effective_eta", &ExperimentComparison::effective_eta)
        .def_readonly("zeta_dc", &ExperimentComparison::zeta_dc);
    m.def("compare_experiment", &compare_experiment, py::arg("distance_km") = 100.0);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
