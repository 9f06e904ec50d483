#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "polyscat/forward.hpp"
#include "polyscat/harmonics.hpp"
#include "polyscat/pipeline.hpp"

namespace py = pybind11;
using namespace polyscat;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polyhedral obstacle recovery from phaseless far-field data";
  m.attr("__version__") = "0.1.0";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::enum_<AreaMode>(m, "AreaMode").value("Flat", AreaMode::Flat).value("Spherical", AreaMode::Spherical);
  py::enum_<FieldKind>(m, "FieldKind")
      .value("Modulus", FieldKind::Modulus)
      .value("ComplexE", FieldKind::ComplexE)
      .value("ComplexH", FieldKind::ComplexH);
  py::enum_<Polarity>(m, "Polarity").value("Maximize", Polarity::Maximize).value("Minimize", Polarity::Minimize);

  // geometry
  py::class_<ConvexPolyhedron>(m, "ConvexPolyhedron")
      .def_property_readonly("vertices", &ConvexPolyhedron::vertices)
      .def_property_readonly("faces", &ConvexPolyhedron::faces)
      .def_property_readonly("normals", &ConvexPolyhedron::normals)
      .def_property_readonly("areas", &ConvexPolyhedron::areas)
      .def_property_readonly("offsets", &ConvexPolyhedron::offsets)
      .def_property_readonly("perimeters", &ConvexPolyhedron::perimeters)
      .def("volume", &ConvexPolyhedron::volume)
      .def("centroid", &ConvexPolyhedron::centroid)
      .def("diameter", &ConvexPolyhedron::diameter)
      .def("translated", &ConvexPolyhedron::translated, py::arg("shift"))
      .def("__repr__", [](const ConvexPolyhedron& p) {
        return "<ConvexPolyhedron " + std::to_string(p.vertices().size()) + " vertices, " +
               std::to_string(p.face_count()) + " faces>";
      });
  m.def("build_polyhedron", &build_polyhedron, py::arg("vertices"), py::arg("faces"));
  m.def("parse_obstacle", &parse_obstacle, py::arg("text"), py::arg("source") = "<string>");
  m.def("read_obstacle", &read_obstacle, py::arg("path"));
  m.def("format_obstacle", &format_obstacle, py::arg("poly"));
  auto shapes_mod = m.def_submodule("shapes", "Reference bodies");
  shapes_mod.def("regular_tetrahedron", &shapes::regular_tetrahedron);
  shapes_mod.def("cube", &shapes::cube, py::arg("side") = 1.0);
  shapes_mod.def("triangular_prism", &shapes::triangular_prism);
  shapes_mod.def("cuboctahedron", &shapes::cuboctahedron);

  py::class_<HalfspaceIntersection>(m, "HalfspaceIntersection")
      .def_readonly("polyhedron", &HalfspaceIntersection::polyhedron)
      .def_readonly("facet_of_plane", &HalfspaceIntersection::facet_of_plane)
      .def("vanished", &HalfspaceIntersection::vanished)
      .def("plane_areas", &HalfspaceIntersection::plane_areas);
  m.def(
      "halfspace_intersection",
      [](const std::vector<Vec3>& n, const std::vector<double>& a) { return halfspace_intersection(n, a); },
      py::arg("normals"), py::arg("offsets"));

  // forward model
  py::class_<PlaneWave>(m, "PlaneWave")
      .def(py::init(&PlaneWave::make), py::arg("d"), py::arg("p"), py::arg("k"))
      .def_static("from_wavelength", &PlaneWave::from_wavelength, py::arg("d"), py::arg("p"), py::arg("wavelength"))
      .def_readonly("d", &PlaneWave::d)
      .def_readonly("p", &PlaneWave::p)
      .def_readonly("k", &PlaneWave::k)
      .def("wavelength", &PlaneWave::wavelength);

  py::class_<SphericalGrid, std::shared_ptr<SphericalGrid>>(m, "SphericalGrid")
      .def_property_readonly("points", &SphericalGrid::points)
      .def_property_readonly("weights", &SphericalGrid::weights)
      .def("size", &SphericalGrid::size)
      .def("total_area", &SphericalGrid::total_area);
  m.def(
      "make_grid", [](int n, AreaMode mode) { return std::make_shared<SphericalGrid>(build_grid(n, mode)); },
      py::arg("n"), py::arg("mode") = AreaMode::Flat);

  py::class_<FarFieldSamples>(m, "FarFieldSamples")
      .def_property_readonly("grid", [](const FarFieldSamples& s) { return std::const_pointer_cast<SphericalGrid>(s.grid); })
      .def_readonly("wave", &FarFieldSamples::wave)
      .def_readonly("kind", &FarFieldSamples::kind)
      .def_readonly("moduli", &FarFieldSamples::moduli)
      .def_readonly("fields", &FarFieldSamples::fields)
      .def("magnitudes", &FarFieldSamples::magnitudes)
      .def("__len__", &FarFieldSamples::size);

  m.def(
      "polygon_fourier_integral",
      [](const std::vector<Vec3>& v, const Vec3& n, const Vec3& q) { return polygon_fourier_integral(v, n, q); },
      py::arg("vertices"), py::arg("normal"), py::arg("q"));
  m.def(
      "po_far_field",
      [](const ConvexPolyhedron& p, const PlaneWave& w, const Vec3& x) {
        const auto f = po_far_field(p, w, x);
        return py::make_tuple(f.e, f.h);
      },
      py::arg("poly"), py::arg("wave"), py::arg("xhat"));
  m.def(
      "sample_phaseless",
      [](const ConvexPolyhedron& p, const PlaneWave& w, std::shared_ptr<SphericalGrid> g) {
        return sample_phaseless(p, w, g);
      },
      py::arg("poly"), py::arg("wave"), py::arg("grid"));
  m.def(
      "sample_far_field",
      [](const ConvexPolyhedron& p, const PlaneWave& w, std::shared_ptr<SphericalGrid> g, FieldKind k) {
        return sample_far_field(p, w, g, k);
      },
      py::arg("poly"), py::arg("wave"), py::arg("grid"), py::arg("kind") = FieldKind::ComplexE);
  m.def(
      "dipole_far_field",
      [](const PlaneWave& w, std::shared_ptr<SphericalGrid> g, const Vec3& z) { return dipole_far_field(w, g, z); },
      py::arg("wave"), py::arg("grid"), py::arg("z0"));
  m.def(
      "add_noise", [](const FarFieldSamples& s, double level, std::uint64_t seed) { return add_noise(s, {level, seed}); },
      py::arg("samples"), py::arg("level"), py::arg("seed") = 1);

  // harmonics
  py::class_<HarmonicExpansion>(m, "HarmonicExpansion")
      .def(py::init<int, std::vector<double>>(), py::arg("cutoff"), py::arg("coefficients"))
      .def_property_readonly("cutoff", &HarmonicExpansion::cutoff)
      .def_property_readonly("coefficients", &HarmonicExpansion::coefficients)
      .def("coefficient", &HarmonicExpansion::coefficient, py::arg("n"), py::arg("m"))
      .def("__call__", &HarmonicExpansion::operator(), py::arg("xhat"));
  m.def("eval_scalar_harmonic", &eval_scalar_harmonic, py::arg("n"), py::arg("m"), py::arg("xhat"));
  m.def(
      "eval_vector_harmonics",
      [](int n, int mm, const Vec3& x) {
        const auto v = eval_vector_harmonics(n, mm, x);
        return py::make_tuple(v.u, v.v);
      },
      py::arg("n"), py::arg("m"), py::arg("xhat"));
  m.def(
      "sht_forward", [](const FarFieldSamples& s, int cutoff) { return sht_forward(s, cutoff); }, py::arg("samples"),
      py::arg("cutoff"));

  // step 1
  py::class_<Peak>(m, "Peak").def_readonly("direction", &Peak::direction).def_readonly("value", &Peak::value);
  py::class_<PeakSet>(m, "PeakSet")
      .def_readonly("peaks", &PeakSet::peaks)
      .def_readonly("incident", &PeakSet::incident)
      .def_readonly("wavelength", &PeakSet::wavelength);
  py::class_<RecoveryThresholds>(m, "RecoveryThresholds")
      .def(py::init<>())
      .def_readwrite("e_tol", &RecoveryThresholds::e_tol)
      .def_readwrite("sigma", &RecoveryThresholds::sigma)
      .def_readwrite("cluster_angle", &RecoveryThresholds::cluster_angle)
      .def_readwrite("cutoff", &RecoveryThresholds::cutoff)
      .def_readwrite("starts_theta", &RecoveryThresholds::starts_theta)
      .def_readwrite("starts_phi", &RecoveryThresholds::starts_phi);
  m.def(
      "find_local_maxima",
      [](const HarmonicExpansion& e, const RecoveryThresholds& t, const Vec3& d, double lam) {
        return find_local_maxima(e, t, d, lam);
      },
      py::arg("expansion"), py::arg("thresholds"), py::arg("incident"), py::arg("wavelength"));
  m.def("select_critical_directions", &select_critical_directions, py::arg("peaks"), py::arg("thresholds"));
  m.def(
      "normal_and_area_from_peak",
      [](const Vec3& x, double value, const Vec3& d, double lam) {
        const auto f = normal_and_area_from_peak(x, value, d, lam);
        return py::make_tuple(f.normal, f.area);
      },
      py::arg("xhat"), py::arg("value"), py::arg("incident"), py::arg("wavelength"));
  m.def("critical_direction", &critical_direction, py::arg("incident"), py::arg("normal"));

  // step 2
  m.def(
      "balance_areas",
      [](const std::vector<Vec3>& n, const std::vector<double>& a) {
        auto b = balance_areas(n, a);
        return py::make_tuple(b.areas, b.clamped);
      },
      py::arg("normals"), py::arg("areas"));
  m.def(
      "facet_areas", [](const std::vector<Vec3>& n, const std::vector<double>& a) { return facet_areas(n, a); },
      py::arg("normals"), py::arg("offsets"));
  py::class_<OffsetFit>(m, "OffsetFit")
      .def_readonly("offsets", &OffsetFit::offsets)
      .def_readonly("residual", &OffsetFit::residual)
      .def_readonly("history", &OffsetFit::history)
      .def_readonly("iterations", &OffsetFit::iterations)
      .def_readonly("converged", &OffsetFit::converged)
      .def_readonly("vanished", &OffsetFit::vanished);
  m.def(
      "fit_offsets",
      [](const std::vector<Vec3>& n, const std::vector<double>& a, const std::vector<double>& init) {
        return fit_offsets(n, a, init);
      },
      py::arg("normals"), py::arg("areas"), py::arg("initial"));

  // step 3
  py::class_<SampleRegion>(m, "SampleRegion")
      .def(py::init([](const Vec3& lo, const Vec3& hi, int points) {
             SampleRegion r{lo, hi, {points, points, points}};
             r.validate();
             return r;
           }),
           py::arg("lower"), py::arg("upper"), py::arg("points") = 11)
      .def_readonly("lower", &SampleRegion::lower)
      .def_readonly("upper", &SampleRegion::upper);
  m.def("indicator_value", &indicator_value, py::arg("samples"), py::arg("z"));
  m.def(
      "locate",
      [](const FarFieldSamples& s, const SampleRegion& r, Polarity pol) {
        const auto res = locate(s, r, pol);
        return py::make_tuple(res.location, res.value);
      },
      py::arg("samples"), py::arg("region"), py::arg("polarity") = Polarity::Maximize);

  // end to end
  m.def(
      "recover",
      [](const std::filesystem::path& config_path) {
        const ExperimentConfig cfg = read_config(config_path);
        const RecoveryReport rep = run_pipeline(cfg, synthesize_dataset(cfg));
        py::dict out;
        std::vector<Vec3> normals;
        std::vector<double> areas;
        for (const auto& f : rep.effective.entries) {
          normals.push_back(f.normal);
          areas.push_back(f.area);
        }
        out["normals"] = normals;
        out["areas"] = areas;
        out["offsets"] = rep.fit->offsets;
        out["shape"] = *rep.shape;
        out["location"] = rep.location->location;
        out["placed"] = *rep.placed;
        return out;
      },
      py::arg("config"), "Synthesize data for a configuration file and run all recovery stages.");
  m.def("max_vertex_error", &max_vertex_error, py::arg("a"), py::arg("b"));
}
