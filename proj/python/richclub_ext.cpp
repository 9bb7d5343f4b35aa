#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "richclub/error.hpp"
#include "richclub/io.hpp"
#include "richclub/scan.hpp"
#include "richclub/synthetic.hpp"

namespace py = pybind11;
using namespace richclub;

namespace {

std::string setting_value(const py::handle& v) {
    if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
    if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ",") + py::str(x).cast<std::string>();
        return s;
    }
    return py::str(v).cast<std::string>();
}

ScanConfig scan_config(const py::dict& settings) {
    ScanConfig c;
    for (const auto& [k, v] : settings) {
        const auto key = k.cast<std::string>();
        if (!apply_scan_setting(c, key, setting_value(v))) throw ConfigError("unknown scan setting '" + key + "'");
    }
    return c;
}

PlantedSpec planted_spec(const py::dict& settings) {
    PlantedSpec s;
    for (const auto& [k, v] : settings) {
        const auto key = k.cast<std::string>();
        if (!apply_planted_setting(s, key, setting_value(v)))
            throw ConfigError("unknown planted setting '" + key + "'");
    }
    return s;
}

std::vector<FlowRecord> to_records(const std::vector<std::tuple<std::string, std::string, std::string, double>>& rows) {
    std::vector<FlowRecord> out;
    out.reserve(rows.size());
    std::size_t line = 1;
    for (const auto& [t, o, d, w] : rows) out.push_back({t, o, d, w, ++line});
    return out;
}

}  // namespace

PYBIND11_MODULE(_richclub, m) {
    auto base = py::register_exception<Error>(m, "RichClubError");
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<GeometryError>(m, "GeometryError", base);

    py::class_<TemporalNetwork>(m, "TemporalNetwork")
        .def_property_readonly("node_count", &TemporalNetwork::node_count)
        .def_property_readonly("snapshot_count", &TemporalNetwork::snapshot_count)
        .def_property_readonly("temporal_edge_count", &TemporalNetwork::temporal_edge_count)
        .def_property_readonly("labels",
                               [](const TemporalNetwork& n) {
                                   return std::vector<std::string>(n.node_labels().begin(), n.node_labels().end());
                               })
        .def_property_readonly("timestamps",
                               [](const TemporalNetwork& n) {
                                   return std::vector<std::string>(n.timestamps().begin(), n.timestamps().end());
                               })
        .def("edges",
             [](const TemporalNetwork& n, std::size_t t) {
                 if (t < 1 || t > n.snapshot_count()) throw py::index_error("snapshot index out of range");
                 std::vector<std::tuple<std::string, std::string, double>> out;
                 for (const auto& e : n.at(t).edges()) out.emplace_back(n.label(e.u), n.label(e.v), e.weight);
                 return out;
             })
        .def("to_csv",
             [](const TemporalNetwork& n) {
                 std::ostringstream s;
                 write_flow_csv(s, n);
                 return s.str();
             })
        .def("__eq__", [](const TemporalNetwork& a, const TemporalNetwork& b) { return a == b; });

    m.def("network_from_records",
          [](const std::vector<std::tuple<std::string, std::string, std::string, double>>& rows,
             const std::string& symmetrization) {
              BuildOptions o;
              if (symmetrization == "max") o.symmetrization = Symmetrization::max;
              else if (symmetrization != "sum") throw ConfigError("symmetrization must be 'sum' or 'max'");
              return build_temporal_network(to_records(rows), o);
          },
          py::arg("records"), py::arg("symmetrization") = "sum");

    m.def("read_flow_csv", [](const std::string& path) { return build_temporal_network(read_flow_csv_file(path)); },
          py::arg("path"));

    m.def("scan_json",
          [](const TemporalNetwork& net, const py::dict& settings) {
              const auto c = scan_config(settings);
              ScanResult r;
              {
                  py::gil_scoped_release release;
                  r = scan(net, c);
              }
              return to_json(r).dump();
          },
          py::arg("network"), py::arg("settings"));

    m.def("generate_planted",
          [](const py::dict& settings) {
              const auto spec = planted_spec(settings);
              auto inst = generate_planted(spec);
              return py::make_tuple(std::move(inst.network), to_json(inst.truth, spec).dump());
          },
          py::arg("settings"));

    m.def("flow_sum_timeseries", &flow_sum_timeseries, py::arg("network"));

    m.def("minmax_regression",
          [](const std::vector<double>& x, const std::vector<double>& y) -> py::object {
              if (x.size() != y.size()) throw ConfigError("x and y differ in length");
              const auto fit = minmax_regression(x, y);
              if (!fit) return py::none();
              return py::make_tuple(fit->slope, fit->intercept);
          },
          py::arg("x"), py::arg("y"));
}
