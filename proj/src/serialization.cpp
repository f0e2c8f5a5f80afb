#include "obslab/serialization.hpp"

#include <iomanip>
#include <sstream>

namespace obslab {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json points_to_json(const PointSet& p) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < p.cols(); ++k) row.push_back(p(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* kind_name(SubsetKind k) {
  switch (k) {
    case SubsetKind::AxisClear: return "axis-clear";
    case SubsetKind::Slab: return "slab";
    case SubsetKind::Singleton: return "singleton";
  }
  return "unknown";
}

}  // namespace

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

ControlSet control_set_from_json(const Json& j, const std::string& path) {
  const Json& dim_field = field(j, "dimension", path);
  if (!dim_field.is_number_integer() || dim_field.get<int>() < 1)
    throw ConfigError(path + ".dimension", "must be a positive integer");
  const int d = dim_field.get<int>();
  const Json& variant = field(j, "variant", path);
  if (!variant.is_string()) throw ConfigError(path + ".variant", "expected a string");
  const std::string name = variant.get<std::string>();
  const std::string ppath = path + ".parameters";
  const Json empty = Json::object();
  const Json& p = name == "full-space" ? (j.contains("parameters") ? j["parameters"] : empty)
                                       : field(j, "parameters", path);

  auto center_of = [&](const std::string& key) {
    Eigen::VectorXd c = vector_from_json(field(p, key, ppath), ppath + "." + key);
    if (c.size() != d) throw ConfigError(ppath + "." + key, "length must equal the dimension");
    return c;
  };
  auto radius_of = [&](const std::string& key) {
    const double r = number(field(p, key, ppath), ppath + "." + key);
    if (!(r > 0.0)) throw ConfigError(ppath + "." + key, "must be positive");
    return r;
  };

  if (name == "periodic-balls") return ControlSet::periodic_balls(d, radius_of("radius"));
  if (name == "ball-complement") return ControlSet::ball_complement(center_of("center"), radius_of("radius"));
  if (name == "clearing") {
    const ControlSet base = control_set_from_json(field(p, "base", ppath), ppath + ".base");
    if (base.dimension() != d) throw ConfigError(ppath + ".base.dimension", "must match the clearing");
    return ControlSet::clearing(base, center_of("center"), radius_of("radius"));
  }
  if (name == "full-space") return ControlSet::full_space(d);
  if (name == "custom") {
    CustomGrid g;
    g.lower = center_of("lower");
    g.upper = center_of("upper");
    const Json& shape = field(p, "shape", ppath);
    if (!shape.is_array() || shape.size() != static_cast<std::size_t>(d))
      throw ConfigError(ppath + ".shape", "expected one positive integer per axis");
    for (const auto& s : shape) {
      if (!s.is_number_integer() || s.get<int>() < 1)
        throw ConfigError(ppath + ".shape", "expected one positive integer per axis");
      g.shape.push_back(s.get<int>());
    }
    const Json& values = field(p, "values", ppath);
    if (!values.is_array()) throw ConfigError(ppath + ".values", "expected an array of 0/1");
    for (const auto& v : values) {
      if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
        throw ConfigError(ppath + ".values", "indicator values must be 0 or 1");
      g.values.push_back(static_cast<std::uint8_t>(v.get<int>()));
    }
    g.periodic = p.value("periodic", false);
    try {
      return ControlSet::custom(std::move(g));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ppath, e.what());
    }
  }
  throw ConfigError(path + ".variant", "unknown variant '" + name + "'");
}

Json to_json(const ControlSet& set) {
  Json out;
  out["dimension"] = set.dimension();
  out["variant"] = set.variant_name();
  struct Visitor {
    Json operator()(const PeriodicBalls& s) const { return {{"radius", s.radius}}; }
    Json operator()(const BallComplement& s) const {
      return {{"radius", s.radius}, {"center", to_json(s.center)}};
    }
    Json operator()(const Clearing& s) const {
      return {{"base", to_json(*s.base)}, {"radius", s.radius}, {"center", to_json(s.center)}};
    }
    Json operator()(const CustomGrid& g) const {
      Json values = Json::array();
      for (auto v : g.values) values.push_back(static_cast<int>(v));
      return {{"lower", to_json(g.lower)},
              {"upper", to_json(g.upper)},
              {"shape", g.shape},
              {"values", values},
              {"periodic", g.periodic}};
    }
  };
  out["parameters"] = std::visit(Visitor{}, set.variant());
  return out;
}

Json to_json(const ThicknessReport& r) {
  return {{"gamma_mass", r.gamma_mass},
          {"rho", r.rho},
          {"is_thick", r.is_thick},
          {"worst_center", to_json(r.worst_center)},
          {"tolerance_band", r.tolerance_band},
          {"mc_samples", r.mc_samples},
          {"centers_evaluated", r.centers_evaluated},
          {"seed", r.seed}};
}

Json to_json(const GCCReport& r) {
  return {{"length", r.length},
          {"delta_line", r.delta_line},
          {"satisfies_gcc", r.satisfies_gcc},
          {"witness_line", {{"base", to_json(r.witness_line.base)},
                            {"direction", to_json(r.witness_line.direction)}}},
          {"lines_evaluated", r.lines_evaluated}};
}

Json to_json(const ModalState& s) {
  Json coeffs = Json::array();
  const auto modes = s.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Complex a = s.coefficients[static_cast<Eigen::Index>(i)];
    coeffs.push_back(Json::array({modes[i].index, a.real(), a.imag()}));
  }
  return {{"theta", to_json(s.theta.value())}, {"cutoff", s.cutoff}, {"coefficients", coeffs}};
}

ModalState modal_state_from_json(const Json& j) {
  const Eigen::VectorXd theta = vector_from_json(field(j, "theta", "state"), "state.theta");
  const Json& cutoff = field(j, "cutoff", "state");
  if (!cutoff.is_number_integer() || cutoff.get<int>() < 0)
    throw ConfigError("state.cutoff", "must be a non-negative integer");
  ModalState s = ModalState::zero(Quasimomentum(theta), cutoff.get<int>());
  const auto modes = s.modes();
  const Json& coeffs = field(j, "coefficients", "state");
  if (!coeffs.is_array()) throw ConfigError("state.coefficients", "expected an array");
  for (const auto& entry : coeffs) {
    if (!entry.is_array() || entry.size() != 3)
      throw ConfigError("state.coefficients", "entries must be [index, re, im]");
    const IntVec index = entry[0].get<IntVec>();
    const auto it = std::find_if(modes.begin(), modes.end(),
                                 [&](const Mode& m) { return m.index == index; });
    if (it == modes.end()) throw ConfigError("state.coefficients", "index outside the cutoff box");
    s.coefficients[it - modes.begin()] = Complex(entry[1].get<double>(), entry[2].get<double>());
  }
  return s;
}

Json to_json(const GapDecomposition& g) {
  Json subsets = Json::array();
  for (const auto& s : g.subsets) {
    Json item = {{"kind", kind_name(s.kind)}, {"members", s.members}, {"gap", finite_or_null(s.gap)}};
    if (s.kind == SubsetKind::Slab) {
      item["axis"] = s.axis;
      item["transverse"] = s.transverse;
    }
    subsets.push_back(std::move(item));
  }
  return {{"params", {{"alpha", g.params.alpha},
                      {"beta", g.params.beta},
                      {"n_alpha", g.params.n_alpha},
                      {"c", g.params.c},
                      {"R", g.params.radius},
                      {"alpha_doublings", g.params.alpha_doublings},
                      {"beta_escalations", g.params.beta_escalations}}},
          {"count", g.count()},
          {"budget", g.budget},
          {"axis_clear_budget", g.axis_clear_budget},
          {"slab_budget", g.slab_budget},
          {"subsets", subsets}};
}

Json to_json(const InghamCertificate& c) {
  return {{"points", points_to_json(c.points)},
          {"R", c.radius},
          {"lambda_min", c.lambda_min},
          {"satisfied", c.satisfied},
          {"gap", finite_or_null(c.gap)},
          {"ingham_constant", c.ingham_constant},
          {"in_regime", c.in_regime}};
}

Json to_json(const ThetaSweepReport& r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.thetas.size(); ++i)
    rows.push_back({{"theta", to_json(r.thetas[i].value())}, {"lambda_min", r.lambda_min[i]}});
  return {{"T", r.horizon},
          {"R_s", r.radius},
          {"cutoff", r.cutoff},
          {"global_min", r.global_min},
          {"worst_theta", to_json(r.thetas[r.worst_index].value())},
          {"worst_lambda_refined", r.worst_lambda_refined},
          {"stability_ratio", r.stability_ratio},
          {"sweep", rows}};
}

Json to_json(const ControlSolution& s) {
  return {{"theta", to_json(s.control.theta.value())},
          {"cutoff", s.control.cutoff},
          {"R_s", s.control.radius},
          {"T", s.control.horizon},
          {"time_steps", s.control.time_steps()},
          {"cost", s.cost},
          {"expected_cost", s.expected_cost},
          {"residual", s.residual},
          {"lambda_min", s.lambda_min},
          {"observability_constant", s.observability_constant}};
}

Json to_json(const QuotientReport& r) {
  return {{"Q", r.value},
          {"A1", r.a1},
          {"A2", r.a2},
          {"B", r.b},
          {"A1_majorant", r.a1_majorant},
          {"splitting_bound", r.splitting_rhs},
          {"splitting_holds", r.splitting_holds},
          {"E", r.E},
          {"nu", r.nu},
          {"x0", to_json(r.center)},
          {"T", r.T},
          {"box_length", r.box_length},
          {"box_points", r.box_points},
          {"leakage", r.leakage}};
}

Json to_json(const ThicknessSchedule& s) {
  Json steps = Json::array();
  for (const auto& st : s.steps) steps.push_back({{"rho", st.rho}, {"report", to_json(st.report)}});
  return {{"schedule", {{"epsilon", s.choice.epsilon},
                        {"T", s.choice.T},
                        {"base_radius", s.choice.base_radius},
                        {"E", s.choice.E},
                        {"nu", s.choice.nu},
                        {"rho_final", s.choice.rho_final},
                        {"x0", to_json(s.choice.center)}}},
          {"steps", steps},
          {"strictly_decreasing", s.strictly_decreasing},
          {"splitting_holds", s.splitting_holds}};
}

std::string theta_sweep_csv(const ThetaSweepReport& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  const int d = r.thetas.empty() ? 1 : r.thetas.front().dimension();
  for (int i = 0; i < d; ++i) out << "theta_" << i + 1 << ',';
  out << "lambda_min\n";
  for (std::size_t k = 0; k < r.thetas.size(); ++k) {
    for (int i = 0; i < d; ++i) out << r.thetas[k][i] << ',';
    out << r.lambda_min[k] << '\n';
  }
  return out.str();
}

}  // namespace obslab
