#include "rfnn/logic_neurons.hpp"

#include <algorithm>
#include <stdexcept>

namespace rfnn {

namespace {

constexpr double kUnitSlack = 1e-9;

double check_unit(double v, const char* what) {
  if (!(v >= -kUnitSlack && v <= 1.0 + kUnitSlack)) {
    throw std::invalid_argument(std::string(what) + " outside [0,1]");
  }
  return std::clamp(v, 0.0, 1.0);
}

double antecedent_membership(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships,
                             std::size_t i) {
  const auto [feature, set] = neuron.antecedents[i];
  if (feature < 0 || feature >= memberships.rows() || set < 0 || set >= memberships.cols()) {
    throw std::invalid_argument("neuron antecedent outside the membership matrix");
  }
  return check_unit(memberships(feature, set), "membership");
}

void check_neuron(const LogicNeuron& neuron) {
  if (neuron.antecedents.empty()) throw std::invalid_argument("neuron has no antecedents");
  if (neuron.weights.size() != static_cast<Eigen::Index>(neuron.antecedents.size())) {
    throw std::invalid_argument("neuron weight count does not match its antecedents");
  }
}

}  // namespace

std::string to_string(NeuronKind kind) {
  switch (kind) {
    case NeuronKind::Uni: return "uni";
    case NeuronKind::And: return "and";
    case NeuronKind::Or: return "or";
  }
  throw std::invalid_argument("unknown neuron kind");
}

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::Max ? "max" : "min";
}

NeuronKind neuron_kind_from_string(const std::string& name) {
  if (name == "uni") return NeuronKind::Uni;
  if (name == "and") return NeuronKind::And;
  if (name == "or") return NeuronKind::Or;
  throw std::invalid_argument("unknown neuron kind: " + name);
}

BoundaryMode boundary_mode_from_string(const std::string& name) {
  if (name == "max") return BoundaryMode::Max;
  if (name == "min") return BoundaryMode::Min;
  throw std::invalid_argument("unknown boundary mode: " + name);
}

double t_norm(double x, double y) {
  x = check_unit(x, "t_norm input");
  y = check_unit(y, "t_norm input");
  return x * y;
}

double s_norm(double x, double y) {
  x = check_unit(x, "s_norm input");
  y = check_unit(y, "s_norm input");
  return x + y - x * y;
}

double uninorm_eval(const Uninorm& u, double x, double y) {
  x = check_unit(x, "uninorm input");
  y = check_unit(y, "uninorm input");
  const double g = check_unit(u.identity, "uninorm identity");

  if (g >= 1.0) return x * y;
  if (g <= 0.0) return x + y - x * y;
  if (x <= g && y <= g) {
    return g * ((x / g) * (y / g));
  }
  if (x >= g && y >= g) {
    const double a = (x - g) / (1.0 - g);
    const double b = (y - g) / (1.0 - g);
    return g + (1.0 - g) * (a + b - a * b);
  }
  return u.boundary == BoundaryMode::Max ? std::max(x, y) : std::min(x, y);
}

double weighted_transform(double w, double a, double g) {
  w = check_unit(w, "weight");
  a = check_unit(a, "weighted_transform input");
  g = check_unit(g, "identity");
  // rounding can nudge the sum just past the unit interval
  return std::clamp(w * a + (1.0 - w) * g, 0.0, 1.0);
}

double unineuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships,
                      BoundaryMode mode) {
  check_neuron(neuron);
  const Uninorm u{check_unit(neuron.identity, "uninorm identity"), mode};
  double acc = weighted_transform(neuron.weights[0], antecedent_membership(neuron, memberships, 0),
                                  u.identity);
  for (std::size_t i = 1; i < neuron.antecedents.size(); ++i) {
    const double b = weighted_transform(neuron.weights[static_cast<Eigen::Index>(i)],
                                        antecedent_membership(neuron, memberships, i), u.identity);
    acc = uninorm_eval(u, acc, b);
  }
  return acc;
}

double andneuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships) {
  check_neuron(neuron);
  double acc = 1.0;
  for (std::size_t i = 0; i < neuron.antecedents.size(); ++i) {
    acc = t_norm(acc, s_norm(antecedent_membership(neuron, memberships, i),
                             neuron.weights[static_cast<Eigen::Index>(i)]));
  }
  return acc;
}

double orneuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships) {
  check_neuron(neuron);
  double acc = 0.0;
  for (std::size_t i = 0; i < neuron.antecedents.size(); ++i) {
    acc = s_norm(acc, t_norm(antecedent_membership(neuron, memberships, i),
                             neuron.weights[static_cast<Eigen::Index>(i)]));
  }
  return acc;
}

double neuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships,
                   BoundaryMode mode) {
  switch (neuron.kind) {
    case NeuronKind::Uni: return unineuron_eval(neuron, memberships, mode);
    case NeuronKind::And: return andneuron_eval(neuron, memberships);
    case NeuronKind::Or: return orneuron_eval(neuron, memberships);
  }
  throw std::invalid_argument("unknown neuron kind");
}

}  // namespace rfnn
