#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace rfnn {

enum class NeuronKind { Uni, And, Or };
enum class BoundaryMode { Max, Min };

std::string to_string(NeuronKind kind);
std::string to_string(BoundaryMode mode);
NeuronKind neuron_kind_from_string(const std::string& name);
BoundaryMode boundary_mode_from_string(const std::string& name);

// algebraic product / probabilistic sum on [0,1]
double t_norm(double x, double y);
double s_norm(double x, double y);

// Uninorm with identity element g: a scaled product below g, a scaled
// probabilistic sum above g, max (or min) on the mixed region. g = 1
// degenerates to the product, g = 0 to the probabilistic sum.
struct Uninorm {
  double identity = 0.5;  // g
  BoundaryMode boundary = BoundaryMode::Max;
};

double uninorm_eval(const Uninorm& u, double x, double y);

// h(w, a, g) = w a + (1 - w) g. Full weight passes the input through; zero
// weight yields the identity element, which the uninorm then ignores.
double weighted_transform(double w, double a, double g);

struct LogicNeuron {
  NeuronKind kind = NeuronKind::Uni;
  std::vector<std::pair<int, int>> antecedents;  // (feature index, set index)
  Eigen::VectorXd weights;                       // one per antecedent, in [0,1]
  double identity = 0.5;                         // g, used by Uni neurons
};

// memberships is the fuzzify() output for one input row
double unineuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships,
                      BoundaryMode mode);
double andneuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships);
double orneuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships);
double neuron_eval(const LogicNeuron& neuron, const Eigen::MatrixXd& memberships,
                   BoundaryMode mode);

}  // namespace rfnn
