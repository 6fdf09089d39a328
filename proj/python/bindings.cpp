#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <string>

#include "curvlab/approximation.hpp"
#include "curvlab/bessel.hpp"
#include "curvlab/cartoons.hpp"
#include "curvlab/experiments.hpp"
#include "curvlab/transform.hpp"

namespace py = pybind11;
using namespace curvlab;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

// Dicts cross the boundary as JSON text so that the library's own parsers do the validation.
nlohmann::json to_json(const py::object& obj) {
    if (obj.is_none()) return nlohmann::json::object();
    py::object dumps = py::module_::import("json").attr("dumps");
    return nlohmann::json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

RealGrid grid_from_array(const RealArray& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("image must be a square 2-d array");
    RealGrid g(int(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), g.data.begin());
    return g;
}

RealArray array_from_grid(const RealGrid& g) {
    RealArray out({g.n, g.n});
    std::copy(g.data.begin(), g.data.end(), out.mutable_data());
    return out;
}

CoefficientSet coefficients_from_array(const DigitalCurveletFrame& frame, const ComplexArray& a) {
    CoefficientSet c(frame.layout_ptr());
    if (a.ndim() != 1 || std::size_t(a.size()) != c.size())
        throw std::invalid_argument("coefficient array must be 1-d with coefficient_count entries");
    std::copy(a.data(), a.data() + a.size(), c.values().begin());
    return c;
}

ComplexArray array_from_coefficients(const CoefficientSet& c) {
    ComplexArray out(py::ssize_t(c.size()));
    std::copy(c.values().begin(), c.values().end(), out.mutable_data());
    return out;
}

BesselOrder parse_order(double nu) {
    if (nu == -0.5) return BesselOrder::MinusHalf;
    if (nu == 0.0) return BesselOrder::Zero;
    if (nu == 0.5) return BesselOrder::Half;
    if (nu == 1.0) return BesselOrder::One;
    throw std::invalid_argument("order must be one of -0.5, 0, 0.5, 1");
}

const char* kind_name(TileKind k) {
    switch (k) {
        case TileKind::Low: return "low";
        case TileKind::Wedge: return "wedge";
        case TileKind::Closure: return "closure";
    }
    return "wedge";
}

}  // namespace

PYBIND11_MODULE(_curvlab, m) {
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<FrameParams>(m, "FrameParams")
        .def(py::init([](double s, double alpha, int grid) { return FrameParams::make(s, alpha, grid); }),
             py::arg("s") = 1.0, py::arg("alpha") = 0.5, py::arg("grid") = 256)
        .def_static("from_dict", [](const py::dict& d) { return FrameParams::from_json(to_json(d)); })
        .def("to_dict", [](const FrameParams& p) { return from_json(p.to_json()); })
        .def_readonly("s", &FrameParams::s)
        .def_readonly("alpha", &FrameParams::alpha)
        .def_readonly("corona_constant", &FrameParams::corona_constant)
        .def_readonly("tau1", &FrameParams::tau1)
        .def_readonly("tau2", &FrameParams::tau2)
        .def_readonly("j_max", &FrameParams::j_max)
        .def_readonly("grid", &FrameParams::grid_n)
        .def("__repr__", [](const FrameParams& p) { return "FrameParams(" + p.to_json().dump() + ")"; });

    py::class_<DigitalCurveletFrame, std::shared_ptr<DigitalCurveletFrame>>(m, "Frame")
        .def(py::init<const FrameParams&>(), py::arg("params"))
        .def_property_readonly("params", &DigitalCurveletFrame::params)
        .def_property_readonly("wedge_count", [](const DigitalCurveletFrame& f) { return f.layout().wedge_count(); })
        .def_property_readonly("coefficient_count",
                               [](const DigitalCurveletFrame& f) { return f.layout().coefficient_count(); })
        .def("wedges",
             [](const DigitalCurveletFrame& f) {
                 py::list out;
                 CoefficientSet c(f.layout_ptr());
                 for (std::size_t w = 0; w < f.layout().wedge_count(); ++w) {
                     const auto& spec = f.layout().wedges[w];
                     py::dict d;
                     d["kind"] = kind_name(spec.kind);
                     d["j"] = spec.index.j;
                     d["ell"] = spec.index.ell;
                     d["p1"] = spec.wrap.p1;
                     d["p2"] = spec.wrap.p2;
                     d["offset"] = c.offset(w);
                     d["support_points"] = f.layout().supports[w].points.size();
                     out.append(d);
                 }
                 return out;
             })
        .def("partition_deviation",
             [](const DigitalCurveletFrame& f, int lattice_n) { return verify_partition(f.layout(), lattice_n); },
             py::arg("lattice_n") = 0)
        .def("analyze",
             [](const DigitalCurveletFrame& f, const RealArray& image) {
                 RealGrid g = grid_from_array(image);
                 CoefficientSet c;
                 {
                     py::gil_scoped_release release;
                     c = f.analyze(g);
                 }
                 return array_from_coefficients(c);
             },
             py::arg("image"))
        .def("synthesize",
             [](const DigitalCurveletFrame& f, const ComplexArray& coeffs) {
                 CoefficientSet c = coefficients_from_array(f, coeffs);
                 RealGrid g;
                 {
                     py::gil_scoped_release release;
                     g = f.synthesize(c);
                 }
                 return array_from_grid(g);
             },
             py::arg("coefficients"))
        .def("atom",
             [](const DigitalCurveletFrame& f, std::size_t wedge, int m1, int m2) {
                 return array_from_grid(f.atom({wedge, m1, m2}).values);
             },
             py::arg("wedge"), py::arg("m1") = 0, py::arg("m2") = 0);

    m.def("bessel_j", py::vectorize([](double nu, double r) { return bessel_j(parse_order(nu), r); }),
          py::arg("order"), py::arg("r"));
    m.def("disc_spectrum", py::vectorize(disc_spectrum), py::arg("xi"));

    m.def("render",
          [](const py::dict& cartoon, int grid) { return array_from_grid(render(CartoonSpec::from_json(to_json(cartoon)), grid)); },
          py::arg("cartoon"), py::arg("grid"));

    m.def("error_curve",
          [](const DigitalCurveletFrame& f, const RealArray& image, const std::vector<std::int64_t>& ns) {
              RealGrid g = grid_from_array(image);
              ErrorCurve curve;
              {
                  py::gil_scoped_release release;
                  curve = error_curve(g, f, ns);
              }
              py::list out;
              for (const auto& p : curve.points) {
                  py::dict d;
                  d["n"] = p.n;
                  d["err2"] = p.err2;
                  d["tail2"] = p.tail2;
                  out.append(d);
              }
              return out;
          },
          py::arg("frame"), py::arg("image"), py::arg("ns"));

    m.def("experiments", [] {
        py::list out;
        for (const auto& e : experiment_catalog()) {
            py::dict d;
            d["name"] = e.name;
            d["description"] = e.description;
            d["bands"] = e.bands;
            out.append(d);
        }
        return out;
    });

    m.def("default_config", [](const std::string& name) { return from_json(ExperimentConfig::defaults(name).to_json()); },
          py::arg("experiment"));

    m.def("run_experiment",
          [](const std::string& name, const py::object& overrides) {
              ExperimentConfig cfg = ExperimentConfig::resolve(to_json(overrides), name);
              ExperimentResult r;
              {
                  py::gil_scoped_release release;
                  r = run_experiment(cfg);
              }
              return from_json(r.summary);
          },
          py::arg("experiment"), py::arg("overrides") = py::none());
}
