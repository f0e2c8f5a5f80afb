#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "obslab/bessel.hpp"
#include "obslab/floquet.hpp"
#include "obslab/runner.hpp"

namespace py = pybind11;
using namespace obslab;

namespace {

Quasimomentum theta_of(const std::vector<double>& theta) {
  return Quasimomentum(Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size())));
}

ControlSet set_of(const std::string& json) { return control_set_from_json(Json::parse(json)); }

ExperimentKind kind_of(const std::string& name) {
  const auto kind = parse_kind(name);
  if (!kind) throw std::invalid_argument("unknown experiment kind '" + name + "'");
  return *kind;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of obslab; JSON travels as strings.";
  m.attr("__version__") = OBSLAB_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("run", [](const std::string& kind, const std::string& params, std::uint64_t seed, unsigned threads) {
    ExperimentConfig config;
    config.kind = kind_of(kind);
    config.parameters = Json::parse(params);
    config.seed = seed;
    config.threads = threads;
    py::gil_scoped_release release;
    return run(config).document.dump();
  }, py::arg("kind"), py::arg("params"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def("validate", [](const std::string& kind, const std::string& params) {
    return validate(kind_of(kind), Json::parse(params));
  });

  m.def("indicator", [](const std::string& set, const Eigen::VectorXd& x) { return indicator(set_of(set), x); });
  m.def("thickness_check", [](const std::string& set, double rho, int centers, int samples, std::uint64_t seed) {
    return to_json(thickness_check(set_of(set), rho, centers, samples, seed)).dump();
  });
  m.def("gcc_check", [](const std::string& set, double length, int directions, int offsets, int resolution) {
    return to_json(gcc_check(set_of(set), length, directions, offsets, resolution)).dump();
  });

  m.def("eigenbasis", [](const std::vector<double>& theta, int cutoff) {
    std::vector<std::pair<Eigen::VectorXd, double>> out;
    for (const auto& mode : eigenbasis(theta_of(theta), cutoff)) out.emplace_back(mode.gamma, mode.eigenvalue);
    return out;
  });
  m.def("propagate", [](const std::string& state, double t) {
    return to_json(propagate(modal_state_from_json(Json::parse(state)), t)).dump();
  });
  m.def("restrict_mass", [](const std::string& state, double radius) {
    return restrict_mass(modal_state_from_json(Json::parse(state)), radius);
  });
  m.def("floquet_roundtrip", [](int dimension, int cells, int grid, const std::vector<Complex>& values) {
    SampledFunction u = SampledFunction::zeros(dimension, cells, grid);
    if (values.size() != u.values.size()) throw std::invalid_argument("floquet_roundtrip: wrong value count");
    u.values = values;
    const FloquetField f = floquet_forward(u);
    const SampledFunction back = floquet_inverse(f);
    double err = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) err = std::max(err, std::abs(back.values[i] - values[i]));
    return py::make_tuple(u.norm_squared(), f.norm_squared(), err);
  });

  m.def("lifted_lattice", [](const std::vector<double>& theta, int cutoff) {
    return build_lifted(theta_of(theta), cutoff).points;
  });
  m.def("gap", [](const PointSet& points) { return gap(points); });
  m.def("brute_force_gap", [](const PointSet& points) { return brute_force_gap(points); });
  m.def("ingham_c", &ingham_c, py::arg("ambient_dim"), py::arg("safety") = 1.0);
  m.def("decompose", [](const std::vector<double>& theta, int cutoff, double radius, double c) {
    return to_json(decompose(build_lifted(theta_of(theta), cutoff), radius, c)).dump();
  });

  m.def("bessel_j", &bessel_j);
  m.def("first_bessel_zero", &first_bessel_zero);
  m.def("ball_exp_integral", [](const Eigen::VectorXd& k, double radius) { return ball_exp_integral(k, radius); });
  m.def("gram_matrix", [](const PointSet& points, double radius) { return gram_matrix(points, radius).entries; });
  m.def("smallest_eigenvalue", [](const Eigen::MatrixXcd& g) { return smallest_eigenvalue(g); });
  m.def("ingham_certify", [](const PointSet& points, double radius, double c, double delta) {
    return to_json(ingham_certify(points, radius, c, delta)).dump();
  });

  m.def("obs_gramian", [](const std::vector<double>& theta, double T, double radius, int cutoff) {
    return obs_gramian(theta_of(theta), T, radius, cutoff).matrix;
  });
  m.def("theta_sweep", [](int dimension, double T, double radius, int cutoff, int n) {
    return to_json(theta_sweep(dimension, T, radius, cutoff, n)).dump();
  });
  m.def("hum_control", [](const std::string& state, double T, double radius, int steps) {
    const ControlSolution s = hum_control(modal_state_from_json(Json::parse(state)), T, radius, steps);
    Json out = to_json(s);
    out["final_state"] = to_json(s.final_state);
    return out.dump();
  });

  m.def("tail_mass", &tail_mass);
  m.def("schrodinger_heat_gap", &schrodinger_heat_gap);
  m.def("heat_observation", [](double nu, const Eigen::VectorXd& center, const std::string& set, double T) {
    return heat_observation(gaussian(nu, center), set_of(set), T);
  });
  m.def("observability_quotient", [](double nu, const Eigen::VectorXd& center, const std::string& set, double T, double E) {
    return to_json(observability_quotient(gaussian(nu, center), set_of(set), T, E)).dump();
  });
  m.def("thickness_schedule", [](int dimension, double T, double epsilon, double base_radius, int steps) {
    return to_json(thickness_schedule(dimension, T, epsilon, base_radius, steps)).dump();
  });
}
