#pragma once

#include <string>

#include <json.hpp>

#include "obslab/control.hpp"
#include "obslab/counterexample.hpp"
#include "obslab/geometry.hpp"
#include "obslab/lattice.hpp"

namespace obslab {

using Json = nlohmann::ordered_json;

/// A configuration field is missing, has the wrong type or is out of range.
/// `field` holds the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// {"dimension": d, "variant": name, "parameters": {...}}; the clearing
/// variant nests its base set under parameters.base.
ControlSet control_set_from_json(const Json& j, const std::string& path = "set");
Json to_json(const ControlSet& set);

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& path);

Json to_json(const ThicknessReport& r);
Json to_json(const GCCReport& r);

/// {"theta": [...], "cutoff": n, "coefficients": [[[n_1..n_d], re, im], ...]}
Json to_json(const ModalState& s);
ModalState modal_state_from_json(const Json& j);

Json to_json(const GapDecomposition& g);
Json to_json(const InghamCertificate& c);
Json to_json(const ThetaSweepReport& r);
/// Summary of a control run; the trajectory itself is omitted.
Json to_json(const ControlSolution& s);
Json to_json(const QuotientReport& r);
Json to_json(const ThicknessSchedule& s);

/// theta_1..theta_d, lambda_min per row.
std::string theta_sweep_csv(const ThetaSweepReport& r);

}  // namespace obslab
