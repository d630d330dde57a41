#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "coincsim/config.hpp"
#include "coincsim/electronics.hpp"
#include "coincsim/error.hpp"
#include "coincsim/results_csv.hpp"
#include "coincsim/scenario.hpp"
#include "coincsim/statistics.hpp"
#include "coincsim/timetag_io.hpp"

namespace py = pybind11;
using namespace coincsim;

namespace {

TimetagFormat format_of(const std::string& s) {
  const auto f = timetag_format_from_string(s);
  if (!f) throw ConfigError("unknown time-tag format '" + s + "' (expected csv or ttag1)", "format");
  return *f;
}

EventStream stream_from_bytes(const py::bytes& data, const std::string& format) {
  const std::string buf = data;
  return parse_timetag(std::string_view(buf), format_of(format));
}

CountSummary analyze(const py::bytes& data, const std::string& format, TimePs window_ps, const std::string& gate_channel,
                     bool allow_overlap) {
  const EventStream s = stream_from_bytes(data, format);
  const auto ch = channel_from_string(gate_channel);
  if (!ch || (*ch != Channel::Trigger && *ch != Channel::GateGen)) {
    throw ConfigError("gate channel must be T or G", "gate_channel");
  }
  GatePolicy policy;
  if (allow_overlap) policy.overlap = OverlapPolicy::AllowOverlap;
  const GateList gates = make_gates_from_trigger(filter_channel(s, *ch), window_ps, policy);
  return count_gates(gates, filter_channel(s, Channel::D1), filter_channel(s, Channel::D2));
}

}  // namespace

PYBIND11_MODULE(_coincsim, m) {
  m.doc() = "Gated photon-coincidence simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<UndefinedEstimate>(m, "UndefinedEstimate", PyExc_ArithmeticError);

  py::class_<CountSummary>(m, "CountSummary")
      .def(py::init([](std::uint64_t N, std::uint64_t N1, std::uint64_t N2, std::uint64_t Nc) {
             return CountSummary{N, N1, N2, Nc};
           }),
           py::arg("N"), py::arg("N1"), py::arg("N2"), py::arg("Nc"))
      .def_readwrite("N", &CountSummary::N)
      .def_readwrite("N1", &CountSummary::N1)
      .def_readwrite("N2", &CountSummary::N2)
      .def_readwrite("Nc", &CountSummary::Nc)
      .def("consistent", &CountSummary::consistent)
      .def(py::self + py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const CountSummary& c) {
        return "CountSummary(N=" + std::to_string(c.N) + ", N1=" + std::to_string(c.N1) + ", N2=" +
               std::to_string(c.N2) + ", Nc=" + std::to_string(c.Nc) + ")";
      });

  py::class_<AlphaEstimate>(m, "AlphaEstimate")
      .def(py::init([](double alpha, double sigma) { return AlphaEstimate{alpha, sigma, {}}; }), py::arg("alpha"),
           py::arg("sigma"))
      .def_readonly("alpha", &AlphaEstimate::alpha)
      .def_readonly("sigma", &AlphaEstimate::sigma)
      .def_readonly("counts", &AlphaEstimate::counts)
      .def("__repr__", [](const AlphaEstimate& e) {
        return "AlphaEstimate(alpha=" + std::to_string(e.alpha) + ", sigma=" + std::to_string(e.sigma) + ")";
      });

  m.def("alpha_estimate", &alpha_estimate, py::arg("counts"));
  m.def(
      "weighted_mean", [](const std::vector<AlphaEstimate>& v) { return weighted_mean(v); }, py::arg("estimates"));
  m.def("sigma_separation", &sigma_separation, py::arg("estimate"), py::arg("reference") = 1.0);

  py::class_<OracleParams>(m, "OracleParams")
      .def(py::init([](double t1, double t2, double a1, double a2, double split) {
             return OracleParams{t1, t2, a1, a2, split};
           }),
           py::arg("t1"), py::arg("t2"), py::arg("a1"), py::arg("a2"), py::arg("split") = 0.5)
      .def_readwrite("t1", &OracleParams::t1)
      .def_readwrite("t2", &OracleParams::t2)
      .def_readwrite("a1", &OracleParams::a1)
      .def_readwrite("a2", &OracleParams::a2)
      .def_readwrite("split", &OracleParams::split);
  m.def("expected_alpha_pdc", &expected_alpha_pdc, py::arg("params"));
  m.def("expected_alpha_thermal_shared", &expected_alpha_thermal_shared, py::arg("window_ps"),
        py::arg("coherence_time_ps"));

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("acquisitions", &ScenarioConfig::acquisitions)
      .def_readwrite("acquisition_duration_ps", &ScenarioConfig::acquisition_duration_ps)
      .def_readwrite("window_ps", &ScenarioConfig::window_ps)
      .def_readwrite("sweep", &ScenarioConfig::sweep)
      .def_readwrite("acquisitions_per_point", &ScenarioConfig::acquisitions_per_point)
      .def_readwrite("gate_rate_hz", &ScenarioConfig::gate_rate_hz)
      .def_property(
          "seed", [](const ScenarioConfig& c) { return c.seed.master_seed; },
          [](ScenarioConfig& c, std::uint64_t s) { c.seed.master_seed = s; })
      .def_property_readonly("model", [](const ScenarioConfig& c) { return std::string(to_string(c.model())); })
      .def("validate", [](const ScenarioConfig& c) { validate(c); })
      .def("serialize", &serialize_config)
      .def(py::self == py::self);

  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("load_config", &load_config_file, py::arg("path"));

  py::class_<PointResult>(m, "PointResult")
      .def_readonly("index", &PointResult::index)
      .def_readonly("multiplier", &PointResult::multiplier)
      .def_readonly("acquisitions", &PointResult::acquisitions)
      .def_readonly("source_rate_hz", &PointResult::source_rate_hz)
      .def_readonly("trigger_rate_cps", &PointResult::trigger_rate_cps)
      .def_readonly("d1_rate_cps", &PointResult::d1_rate_cps)
      .def_readonly("d2_rate_cps", &PointResult::d2_rate_cps)
      .def_readonly("rate_cps", &PointResult::rate_cps)
      .def_property_readonly("counts", [](const PointResult& p) { return p.tally.counts; })
      .def_readonly("estimate", &PointResult::estimate);

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("name", &ScenarioResult::name)
      .def_readonly("points", &ScenarioResult::points)
      .def_readonly("overall", &ScenarioResult::overall)
      .def_readonly("separation_from_one", &ScenarioResult::separation_from_one)
      .def("to_csv", &emit_results_csv);

  m.def(
      "run_scenario",
      [](const ScenarioConfig& cfg, unsigned jobs) {
        py::gil_scoped_release release;
        return run_scenario(cfg, {jobs});
      },
      py::arg("config"), py::arg("jobs") = 1u);
  m.def("scenario_oracle", &scenario_oracle, py::arg("config"));

  m.def(
      "parse_timetag",
      [](const py::bytes& data, const std::string& format) {
        const EventStream s = stream_from_bytes(data, format);
        py::list events;
        for (const Event& e : s.events) events.append(py::make_tuple(std::string(to_string(e.channel)), e.t));
        return py::make_tuple(s.duration_ps, events);
      },
      py::arg("data"), py::arg("format"),
      "Returns (duration_ps, [(channel, t_ps), ...]).");
  m.def(
      "write_timetag",
      [](TimePs duration_ps, const std::vector<std::pair<std::string, TimePs>>& events, const std::string& format) {
        EventStream s{duration_ps, {}};
        for (const auto& [name, t] : events) {
          const auto ch = channel_from_string(name);
          if (!ch) throw DataError("unknown channel '" + name + "'");
          s.events.push_back({*ch, t});
        }
        const auto report = validate_stream(s);
        if (!report.ok()) throw DataError(report.describe());
        const auto bytes = write_timetag(s, format_of(format));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("duration_ps"), py::arg("events"), py::arg("format"));
  m.def("analyze_timetag", &analyze, py::arg("data"), py::arg("format"), py::arg("window_ps") = kDefaultWindowPs,
        py::arg("gate_channel") = "T", py::arg("allow_overlap") = false,
        "Gate counts of a recorded time-tag stream.");
  m.def(
      "export_acquisition",
      [](const ScenarioConfig& cfg, std::size_t point, std::uint64_t acquisition, const std::string& format) {
        validate(cfg);
        if (point >= cfg.sweep.size()) throw ConfigError("point index beyond the sweep", "point");
        const auto bytes = write_timetag(acquisition_streams(cfg, point, acquisition).merged(), format_of(format));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("config"), py::arg("point") = 0, py::arg("acquisition") = 0, py::arg("format") = "ttag1");
}
