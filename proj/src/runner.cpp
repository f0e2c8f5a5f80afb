#include "obslab/runner.hpp"

#include <chrono>
#include <random>
#include <set>

#include "obslab/quadrature.hpp"

namespace obslab {

namespace {

constexpr std::pair<ExperimentKind, const char*> kKinds[] = {
    {ExperimentKind::Geometry, "geometry"},
    {ExperimentKind::Decompose, "decompose"},
    {ExperimentKind::ObsSweep, "obs-sweep"},
    {ExperimentKind::Hum, "hum"},
    {ExperimentKind::Counterexample, "counterexample"},
    {ExperimentKind::GramOracle, "gram-oracle"},
};

/// Reads typed fields from a parameter block, recording every violation
/// instead of stopping at the first.
class Fields {
 public:
  Fields(const Json& j, std::vector<std::string>& violations) : j_(j), out_(violations) {
    if (!j_.is_object()) out_.push_back("config: expected an object");
  }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) {
    seen_.insert(key);
    if (!present(key)) {
      if (!fallback) out_.push_back(key + ": missing field");
      return fallback.value_or(0.0);
    }
    if (!j_[key].is_number()) {
      out_.push_back(key + ": expected a number");
      return fallback.value_or(0.0);
    }
    return j_[key].get<double>();
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt,
                  const std::string& message = "") {
    const bool given = present(key);
    const double v = real(key, fallback);
    if (given && j_[key].is_number() && !(v > 0.0))
      out_.push_back(key + ": " + (message.empty() ? std::string("must be positive") : message));
    return v;
  }

  int integer(const std::string& key, int lo, int hi, std::optional<int> fallback = std::nullopt) {
    seen_.insert(key);
    if (!present(key)) {
      if (!fallback) out_.push_back(key + ": missing field");
      return fallback.value_or(lo);
    }
    if (!j_[key].is_number_integer()) {
      out_.push_back(key + ": expected an integer");
      return fallback.value_or(lo);
    }
    const auto v = j_[key].get<long long>();
    if (v < lo || v > hi) {
      out_.push_back(key + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return fallback.value_or(lo);
    }
    return static_cast<int>(v);
  }

  std::optional<Eigen::VectorXd> vector(const std::string& key, int size) {
    seen_.insert(key);
    if (!present(key)) return std::nullopt;
    try {
      Eigen::VectorXd v = vector_from_json(j_[key], key);
      if (v.size() != size) {
        out_.push_back(key + ": length must equal the dimension");
        return std::nullopt;
      }
      return v;
    } catch (const ConfigError& e) {
      out_.push_back(e.what());
      return std::nullopt;
    }
  }

  std::optional<ControlSet> control_set(const std::string& key) {
    seen_.insert(key);
    if (!present(key)) {
      out_.push_back(key + ": missing field");
      return std::nullopt;
    }
    try {
      return control_set_from_json(j_[key], key);
    } catch (const std::invalid_argument& e) {
      out_.push_back(e.what());
      return std::nullopt;
    }
  }

  bool present(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key) && key != "seed" && key != "threads") out_.push_back(key + ": unknown field");
  }

 private:
  const Json& j_;
  std::vector<std::string>& out_;
  std::set<std::string> seen_;
};

Quasimomentum checked_theta(Fields& f, std::vector<std::string>& out, int d) {
  const auto theta = f.vector("theta", d);
  if (!theta) return Quasimomentum::zero(d);
  for (Eigen::Index i = 0; i < theta->size(); ++i) {
    if (!((*theta)[i] > -kPi && (*theta)[i] <= kPi)) {
      out.push_back("theta: components must lie in (-pi, pi]");
      return Quasimomentum::zero(d);
    }
  }
  return Quasimomentum(*theta);
}

double torus_radius(Fields& f, std::vector<std::string>& out, const std::string& key,
                    std::optional<double> fallback = std::nullopt) {
  const double r = f.positive(key, fallback);
  if (r > kPi) out.push_back(key + " exceeds torus half-width");
  return r;
}

// Parameter blocks, parsed once for validation and again for running.

struct GeometryParams {
  std::optional<ControlSet> set;
  double rho = 0, length = 0;
  int centers = 0, mc = 0, directions = 0, offsets = 0, resolution = 0;
};

GeometryParams parse_geometry(const Json& j, std::vector<std::string>& out) {
  Fields f(j, out);
  GeometryParams p;
  p.set = f.control_set("set");
  p.rho = f.positive("rho");
  p.length = f.positive("L", p.rho > 0 ? p.rho : 1.0);
  p.centers = f.integer("centers_per_axis", 1, 4096, 16);
  p.mc = f.integer("mc_samples", 1, 1 << 24, 4096);
  p.directions = f.integer("direction_samples", 1, 1 << 16, 32);
  p.offsets = f.integer("offset_samples", 1, 1 << 16, 64);
  p.resolution = f.integer("line_resolution", 2, 1 << 20, 512);
  f.finish();
  return p;
}

struct DecomposeParams {
  int d = 1, cutoff = 0, samples = 1;
  std::optional<Eigen::VectorXd> theta;
  double safety = 1.01, radius = 0;
};

DecomposeParams parse_decompose(const Json& j, std::vector<std::string>& out) {
  Fields f(j, out);
  DecomposeParams p;
  p.d = f.integer("dimension", 1, 3);
  p.cutoff = f.integer("cutoff", 0, 200);
  p.theta = f.vector("theta", p.d);
  if (p.theta)
    for (Eigen::Index i = 0; i < p.theta->size(); ++i)
      if (!((*p.theta)[i] > -kPi && (*p.theta)[i] <= kPi))
        out.push_back("theta: components must lie in (-pi, pi]");
  p.samples = f.integer("theta_samples", 1, 100000, 1);
  p.safety = f.real("safety", 1.01);
  if (p.safety < 1.0) out.push_back("safety: must be at least 1");
  const double c = ingham_c(p.d + 1, std::max(1.0, p.safety));
  p.radius = f.positive("R", 6.0 * c);
  f.finish();
  return p;
}

struct SweepParams {
  int d = 1, cutoff = 0, theta_n = 1;
  double T = 0, rs = 0;
};

SweepParams parse_sweep(const Json& j, std::vector<std::string>& out) {
  Fields f(j, out);
  SweepParams p;
  p.d = f.integer("dimension", 1, 3);
  p.T = f.positive("T");
  p.rs = torus_radius(f, out, "R_s");
  p.cutoff = f.integer("cutoff", 0, 200);
  p.theta_n = f.integer("theta_n", 1, 4096);
  f.finish();
  return p;
}

struct HumParams {
  int d = 1, cutoff = 0, steps = 512;
  Quasimomentum theta = Quasimomentum::zero(1);
  double T = 0, rs = 0, tolerance = 1e-8;
};

HumParams parse_hum(const Json& j, std::vector<std::string>& out) {
  Fields f(j, out);
  HumParams p;
  p.d = f.integer("dimension", 1, 3);
  p.theta = checked_theta(f, out, p.d);
  p.cutoff = f.integer("cutoff", 0, 200);
  p.rs = torus_radius(f, out, "R_s");
  p.T = f.positive("T");
  p.steps = f.integer("time_steps", 1, 1 << 20, 512);
  p.tolerance = f.positive("tolerance", 1e-8);
  f.finish();
  return p;
}

struct CounterexampleParams {
  int d = 1, steps = 4;
  double T = 0, epsilon = 0, base_radius = 1, nu = 0, E = 0;
};

CounterexampleParams parse_counterexample(const Json& j, std::vector<std::string>& out) {
  Fields f(j, out);
  CounterexampleParams p;
  p.d = f.integer("dimension", 1, 2, 1);
  p.T = f.positive("T");
  p.epsilon = f.positive("epsilon", 0.01 * std::max(p.T, 0.0));
  p.base_radius = torus_radius(f, out, "base_radius", 1.0);
  p.steps = f.integer("steps", 1, 16, 4);
  p.nu = f.positive("nu", 0.0, "ν must be positive");
  p.E = f.positive("E", 0.0);
  f.finish();
  return p;
}

struct GramOracleParams {
  int m = 2, samples = 100, nodes = 48, forms = 5, points = 8;
  double r_max = 3, k_max = 5, tolerance = 1e-8;
};

GramOracleParams parse_gram_oracle(const Json& j, std::vector<std::string>& out) {
  Fields f(j, out);
  GramOracleParams p;
  p.m = f.integer("m", 1, 3);
  p.samples = f.integer("samples", 1, 100000, 100);
  p.r_max = f.positive("R_max", 3.0);
  p.k_max = f.positive("k_max", 5.0);
  p.nodes = f.integer("nodes", 4, 400, 48);
  p.forms = f.integer("forms", 0, 10000, 5);
  p.points = f.integer("points", 1, 200, 8);
  p.tolerance = f.positive("tolerance", 1e-8);
  f.finish();
  return p;
}

std::vector<std::string> validate_impl(ExperimentKind kind, const Json& j) {
  std::vector<std::string> out;
  switch (kind) {
    case ExperimentKind::Geometry: parse_geometry(j, out); break;
    case ExperimentKind::Decompose: parse_decompose(j, out); break;
    case ExperimentKind::ObsSweep: parse_sweep(j, out); break;
    case ExperimentKind::Hum: parse_hum(j, out); break;
    case ExperimentKind::Counterexample: parse_counterexample(j, out); break;
    case ExperimentKind::GramOracle: parse_gram_oracle(j, out); break;
  }
  return out;
}

template <class Parse>
auto parse_or_throw(Parse parse, const Json& j) {
  std::vector<std::string> out;
  auto p = parse(j, out);
  if (!out.empty()) {
    const std::string& first = out.front();
    const auto colon = first.find(':');
    if (colon != std::string::npos) throw ConfigError(first.substr(0, colon), first.substr(colon + 2));
    throw ConfigError(first.substr(0, first.find(' ')), first);
  }
  return p;
}

struct Outcome {
  Json results;
  Json assertions = Json::object();
  std::map<std::string, std::string> tables;
};

Outcome run_geometry(const Json& j, std::uint64_t seed) {
  const auto p = parse_or_throw(parse_geometry, j);
  Outcome o;
  const ThicknessReport thick = thickness_check(*p.set, p.rho, p.centers, p.mc, seed);
  const GCCReport gcc = gcc_check(*p.set, p.length, p.directions, p.offsets, p.resolution);
  o.results = {{"set", to_json(*p.set)}, {"thickness", to_json(thick)}, {"gcc", to_json(gcc)}};
  o.assertions["gcc_implies_thick"] = !gcc.satisfies_gcc || p.length > p.rho || thick.is_thick;
  return o;
}

Outcome run_decompose(const Json& j, std::uint64_t seed, unsigned threads) {
  const auto p = parse_or_throw(parse_decompose, j);
  const double c = ingham_c(p.d + 1, p.safety);
  std::vector<Quasimomentum> thetas;
  if (p.theta) {
    thetas.emplace_back(*p.theta);
  } else if (p.samples == 1 && !j.contains("theta_samples")) {
    thetas.push_back(Quasimomentum::zero(p.d));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-kPi, kPi);
    for (int i = 0; i < p.samples; ++i) {
      Eigen::VectorXd v(p.d);
      for (int k = 0; k < p.d; ++k) v[k] = uniform(rng);
      thetas.push_back(Quasimomentum::wrapped(v));
    }
  }
  struct Row {
    GapDecomposition dec;
    bool partition = false;
    bool certified = false;
    std::string error;
  };
  std::vector<Row> rows(thetas.size());
  parallel_for(thetas.size(), threads, [&](std::size_t i) {
    const LiftedLattice lattice = build_lifted(thetas[i], p.cutoff);
    try {
      rows[i].dec = decompose(lattice, p.radius, c);
    } catch (const NumericalError& e) {
      rows[i].error = e.what();
      return;
    }
    std::vector<int> hits(static_cast<std::size_t>(lattice.size()), 0);
    bool certified = true;
    for (const auto& s : rows[i].dec.subsets) {
      PointSet pts(static_cast<Eigen::Index>(s.members.size()), lattice.points.cols());
      for (std::size_t k = 0; k < s.members.size(); ++k) {
        ++hits[s.members[k]];
        pts.row(static_cast<Eigen::Index>(k)) = lattice.points.row(static_cast<Eigen::Index>(s.members[k]));
      }
      if (brute_force_gap(pts) < s.gap) certified = false;
    }
    rows[i].partition = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
    rows[i].certified = certified;
  });

  Outcome o;
  Json list = Json::array();
  bool partition = true, certified = true, budget = true, succeeded = true;
  std::size_t max_count = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (!r.error.empty()) {
      succeeded = false;
      list.push_back({{"theta", to_json(thetas[i].value())}, {"error", r.error}});
      continue;
    }
    partition = partition && r.partition;
    certified = certified && r.certified;
    budget = budget && r.dec.budget <= p.radius * (1.0 + 1e-12);
    max_count = std::max(max_count, r.dec.count());
    list.push_back({{"theta", to_json(thetas[i].value())},
                    {"count", r.dec.count()},
                    {"budget", r.dec.budget},
                    {"alpha", r.dec.params.alpha},
                    {"beta", r.dec.params.beta},
                    {"n_alpha", r.dec.params.n_alpha}});
  }
  o.results = {{"dimension", p.d}, {"cutoff", p.cutoff}, {"c", c}, {"R", p.radius},
               {"max_count", max_count}, {"decompositions", list}};
  if (rows.size() == 1 && rows.front().error.empty()) o.results["detail"] = to_json(rows.front().dec);
  o.assertions["decomposition_succeeded"] = succeeded;
  o.assertions["partition_exact"] = partition;
  o.assertions["gaps_certified"] = certified;
  o.assertions["budget_within_R"] = budget;
  return o;
}

Outcome run_sweep(const Json& j, unsigned threads) {
  const auto p = parse_or_throw(parse_sweep, j);
  const ThetaSweepReport r = theta_sweep(p.d, p.T, p.rs, p.cutoff, p.theta_n, threads);
  Outcome o;
  o.results = to_json(r);
  o.assertions["all_lambda_positive"] =
      std::all_of(r.lambda_min.begin(), r.lambda_min.end(), [](double v) { return v > 0.0; });
  o.tables["obs-sweep.csv"] = theta_sweep_csv(r);
  return o;
}

Outcome run_hum(const Json& j, std::uint64_t seed) {
  const auto p = parse_or_throw(parse_hum, j);
  std::mt19937_64 rng(seed);
  const ModalState u0 = ModalState::random(p.theta, p.cutoff, rng);
  const ControlSolution s = hum_control(u0, p.T, p.rs, p.steps);
  const double bound = std::pow(u0.l2_norm(), 2) / s.observability_constant;
  Outcome o;
  o.results = to_json(s);
  o.results["initial_norm"] = u0.l2_norm();
  o.results["cost_bound"] = bound;
  o.assertions["residual_within_tolerance"] = s.residual <= p.tolerance;
  o.assertions["cost_within_bound"] = s.cost <= bound * (1.0 + 1e-3);
  return o;
}

Outcome run_counterexample(const Json& j) {
  const auto p = parse_or_throw(parse_counterexample, j);
  ScheduleOptions options;
  options.nu = p.nu;
  options.E = p.E;
  const ThicknessSchedule s = thickness_schedule(p.d, p.T, p.epsilon, p.base_radius, p.steps, options);
  Outcome o;
  o.results = to_json(s);
  o.assertions["strictly_decreasing"] = s.strictly_decreasing;
  o.assertions["splitting_holds"] = s.splitting_holds;
  o.assertions["final_below_epsilon"] = s.steps.back().report.value <= p.epsilon;
  o.tables["counterexample.csv"] = decay_curve_csv(s);
  return o;
}

Outcome run_gram_oracle(const Json& j, std::uint64_t seed) {
  const auto p = parse_or_throw(parse_gram_oracle, j);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.1, p.r_max);
  double max_error = 0.0;
  for (int s = 0; s < p.samples; ++s) {
    Eigen::VectorXd k(p.m);
    for (int i = 0; i < p.m; ++i) k[i] = p.k_max * unit(rng) / std::sqrt(p.m);
    const double r = radius(rng);
    const double exact = ball_exp_integral(k, r);
    const double quad = integrate_ball(p.m, r, p.nodes, [&](std::span<const double> z) {
      double dot = 0.0;
      for (int i = 0; i < p.m; ++i) dot += k[i] * z[static_cast<std::size_t>(i)];
      return std::cos(dot);
    });
    max_error = std::max(max_error, std::abs(exact - quad));
  }
  double max_form_error = 0.0;
  for (int f = 0; f < p.forms; ++f) {
    PointSet pts(p.points, p.m);
    for (Eigen::Index a = 0; a < pts.rows(); ++a)
      for (int i = 0; i < p.m; ++i) pts(a, i) = 2.0 * unit(rng);
    Eigen::VectorXcd alpha(p.points);
    for (int a = 0; a < p.points; ++a) alpha[a] = Complex(unit(rng), unit(rng));
    const double r = radius(rng);
    const double form = gram_matrix(pts, r).quadratic_form(alpha);
    const double quad = integrate_ball(p.m, r, p.nodes, [&](std::span<const double> z) {
      Complex sum = 0.0;
      for (Eigen::Index a = 0; a < pts.rows(); ++a) {
        double dot = 0.0;
        for (int i = 0; i < p.m; ++i) dot += pts(a, i) * z[static_cast<std::size_t>(i)];
        sum += alpha[a] * std::polar(1.0, dot);
      }
      return std::norm(sum);
    });
    max_form_error = std::max(max_form_error, std::abs(form - quad) / std::abs(quad));
  }
  Outcome o;
  o.results = {{"m", p.m},
               {"samples", p.samples},
               {"max_abs_error", max_error},
               {"forms", p.forms},
               {"max_form_relative_error", max_form_error}};
  o.assertions["integrals_match"] = max_error <= p.tolerance;
  o.assertions["forms_match"] = max_form_error <= 1e-6;
  return o;
}

}  // namespace

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [kind, text] : kKinds)
    if (name == text) return kind;
  return std::nullopt;
}

std::string kind_name(ExperimentKind kind) {
  for (const auto& [k, text] : kKinds)
    if (k == kind) return text;
  return "unknown";
}

std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (const auto& entry : kKinds) out.emplace_back(entry.second);
  return out;
}

std::vector<std::string> validate(ExperimentKind kind, const Json& parameters) {
  return validate_impl(kind, parameters);
}

Json RunReport::payload() const {
  Json copy = document;
  copy.erase("timing");
  return copy;
}

RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const unsigned threads = config.threads == 0 ? default_thread_count() : config.threads;
  Outcome o;
  switch (config.kind) {
    case ExperimentKind::Geometry: o = run_geometry(config.parameters, config.seed); break;
    case ExperimentKind::Decompose: o = run_decompose(config.parameters, config.seed, threads); break;
    case ExperimentKind::ObsSweep: o = run_sweep(config.parameters, threads); break;
    case ExperimentKind::Hum: o = run_hum(config.parameters, config.seed); break;
    case ExperimentKind::Counterexample: o = run_counterexample(config.parameters); break;
    case ExperimentKind::GramOracle: o = run_gram_oracle(config.parameters, config.seed); break;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunReport report;
  report.passed = true;
  for (const auto& [name, value] : o.assertions.items()) report.passed = report.passed && value.get<bool>();
  report.document = {{"tool", "obslab"},
                     {"version", OBSLAB_VERSION},
                     {"kind", kind_name(config.kind)},
                     {"seed", config.seed},
                     {"config", config.parameters},
                     {"results", std::move(o.results)},
                     {"assertions", std::move(o.assertions)},
                     {"passed", report.passed},
                     {"timing", {{"wall_seconds", seconds}, {"threads", threads}}}};
  report.tables = std::move(o.tables);
  return report;
}

}  // namespace obslab
