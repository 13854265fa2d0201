#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degen/config.hpp"
#include "degen/error.hpp"
#include "degen/nonlinear.hpp"
#include "degen/parallel.hpp"
#include "degen/propagator.hpp"
#include "degen/pseudodiff.hpp"
#include "degen/runner.hpp"
#include "degen/smoothing.hpp"

namespace py = pybind11;
using namespace degen;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Field to_field(const SpectralGrid& g, const CArray& a) {
  if (static_cast<std::size_t>(a.size()) != g.size() || a.ndim() != g.dim())
    throw ValidationError("array shape does not match the grid");
  return Field(g, std::vector<Complex>(a.data(), a.data() + a.size()), Space::Physical);
}

CArray to_array(const Field& f) {
  const Field u = as_physical(f);
  const auto& g = u.grid();
  std::vector<py::ssize_t> shape(g.dim(), g.points());
  CArray out(shape);
  std::copy(u.values().begin(), u.values().end(), out.mutable_data());
  return out;
}

py::dict report_dict(const SmoothingReport& r) {
  py::list rows;
  for (const auto& row : r.rows)
    rows.append(py::dict(py::arg("member_id") = row.member_id, py::arg("T") = row.T, py::arg("lhs") = row.lhs,
                         py::arg("rhs") = row.rhs, py::arg("ratio") = row.ratio));
  return py::dict(py::arg("estimate_id") = r.estimate_id, py::arg("rows") = rows, py::arg("fitted_C") = r.fitted_C,
                  py::arg("metadata") = r.metadata.dump());
}

}  // namespace

PYBIND11_MODULE(_degenlab, m) {
  m.doc() = "Time-degenerate Schrodinger numerics";

  auto base = py::register_exception<Error>(m, "DegenError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InstabilityError>(m, "InstabilityError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());

  py::class_<SpectralGrid>(m, "Grid")
      .def(py::init(&create_grid), py::arg("n"), py::arg("N"), py::arg("L"))
      .def_property_readonly("dim", &SpectralGrid::dim)
      .def_property_readonly("points", &SpectralGrid::points)
      .def_property_readonly("half_length", &SpectralGrid::half_length)
      .def_property_readonly("dx", &SpectralGrid::dx)
      .def_property_readonly("xi_max", &SpectralGrid::xi_max)
      .def("nodes", [](const SpectralGrid& g) {
        std::vector<double> x(g.points());
        for (int i = 0; i < g.points(); ++i) x[i] = g.node(i);
        return x;
      });

  m.def("theta", [](double alpha, double t, double s) { return AlphaParams(alpha).theta(t, s); },
        py::arg("alpha"), py::arg("t"), py::arg("s") = 0.0);
  m.def("l2_norm", [](const SpectralGrid& g, const CArray& u) { return l2_norm(to_field(g, u)); });
  m.def(
      "w_alpha",
      [](const SpectralGrid& g, const CArray& u, double t, double s, double alpha) {
        return to_array(w_alpha(to_field(g, u), t, s, AlphaParams(alpha)));
      },
      py::arg("grid"), py::arg("u"), py::arg("t"), py::arg("s"), py::arg("alpha"));

  m.def(
      "reparametrization_identity",
      [](const SpectralGrid& g, const CArray& u, double alpha, double T) {
        const auto r = reparametrization_identity(to_field(g, u), AlphaParams(alpha), T);
        return py::dict(py::arg("degenerate") = r.degenerate, py::arg("standard") = r.standard,
                        py::arg("discrepancy") = r.discrepancy);
      },
      py::arg("grid"), py::arg("u"), py::arg("alpha"), py::arg("T"));

  m.def(
      "frequency_sweep",
      [](const SpectralGrid& g, const std::vector<double>& carriers, double alpha, double T, double width, int nt) {
        SweepOptions opt;
        opt.width = width;
        opt.nt = nt;
        return report_dict(frequency_sweep(AlphaParams(alpha), carriers, T, g, opt));
      },
      py::arg("grid"), py::arg("carriers"), py::arg("alpha"), py::arg("T"), py::arg("width") = 1.0,
      py::arg("nt") = 2048);

  m.def(
      "garding_defect",
      [](const SpectralGrid& g, double sigma, double cprime, bool restrict_region) {
        const DoiParams d{sigma, cprime, 0.0};
        GardingOptions opt;
        opt.restrict_region = restrict_region;
        return garding_defect(doi_phase(d, g), d, opt);
      },
      py::arg("grid"), py::arg("sigma") = 2.0, py::arg("cprime") = 1.0, py::arg("restrict_region") = false);

  m.def(
      "picard_solve",
      [](const SpectralGrid& g, const CArray& u0, double alpha, double T, const std::string& kind, int k,
         int sign, double beta, int nt, int max_iter, double tol) {
        PicardOptions opt;
        opt.nt = nt;
        opt.max_iter = max_iter;
        opt.tol = tol;
        opt.throw_on_failure = false;
        const NonlinearitySpec spec{parse_nonlinearity_kind(kind), k, sign, beta};
        const auto st = picard_solve(to_field(g, u0), spec, AlphaParams(alpha), T, opt);
        return py::dict(py::arg("converged") = st.converged, py::arg("iterations") = st.iterations,
                        py::arg("distances") = st.distances, py::arg("final") = to_array(st.trajectory.back()));
      },
      py::arg("grid"), py::arg("u0"), py::arg("alpha"), py::arg("T"), py::arg("kind") = "power",
      py::arg("k") = 1, py::arg("sign") = 1, py::arg("beta") = 2.0, py::arg("nt") = 64, py::arg("max_iter") = 30,
      py::arg("tol") = 1e-10);

  m.def("_normalize_config", [](const std::string& text) {
    return to_json(parse_config_json(nlohmann::json::parse(text))).dump();
  });
  m.def("_config_hash", [](const std::string& text) {
    return config_hash(parse_config_json(nlohmann::json::parse(text)));
  });
  m.def("_run", [](const std::string& text) {
    const auto c = parse_config_json(nlohmann::json::parse(text));
    py::gil_scoped_release release;
    const auto r = run(c);
    py::gil_scoped_acquire acquire;
    return py::make_tuple(r.exit_code, r.summary.dump());
  });
  m.def("set_workers", &set_default_workers, py::arg("workers"));
}
