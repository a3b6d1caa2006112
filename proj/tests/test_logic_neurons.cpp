#include <doctest.h>

#include <cmath>

#include "rfnn/logic_neurons.hpp"
#include "rfnn/rng.hpp"

using rfnn::BoundaryMode;
using rfnn::LogicNeuron;
using rfnn::NeuronKind;
using rfnn::Uninorm;

TEST_CASE("uninorm piecewise regions match hand-computed values") {
  const Uninorm u{0.5, BoundaryMode::Max};
  // both below g: scaled product g*(x/g)*(y/g)
  CHECK(rfnn::uninorm_eval(u, 0.4, 0.4) == doctest::Approx(0.32));
  // both above g: scaled probabilistic sum
  CHECK(rfnn::uninorm_eval(u, 0.6, 0.8) == doctest::Approx(0.84));
  // mixed region takes the boundary operator
  CHECK(rfnn::uninorm_eval(u, 0.2, 0.9) == doctest::Approx(0.9));
  const Uninorm umin{0.5, BoundaryMode::Min};
  CHECK(rfnn::uninorm_eval(umin, 0.2, 0.9) == doctest::Approx(0.2));
}

TEST_CASE("uninorm degenerates to product and probabilistic sum at the ends") {
  const Uninorm product{1.0, BoundaryMode::Max};
  const Uninorm prob_sum{0.0, BoundaryMode::Max};
  rfnn::Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    CHECK(std::abs(rfnn::uninorm_eval(product, x, y) - x * y) <= 1e-12);
    CHECK(std::abs(rfnn::uninorm_eval(prob_sum, x, y) - (x + y - x * y)) <= 1e-12);
  }
}

TEST_CASE("uninorm identity, commutativity, closure over random triples") {
  rfnn::Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double g = rng.uniform();
    const double x = rng.uniform();
    const double y = rng.uniform();
    for (const BoundaryMode mode : {BoundaryMode::Max, BoundaryMode::Min}) {
      const Uninorm u{g, mode};
      CHECK(std::abs(rfnn::uninorm_eval(u, x, g) - x) <= 1e-12);
      CHECK(std::abs(rfnn::uninorm_eval(u, g, x) - x) <= 1e-12);
      const double xy = rfnn::uninorm_eval(u, x, y);
      CHECK(std::abs(xy - rfnn::uninorm_eval(u, y, x)) <= 1e-12);
      CHECK(xy >= 0.0);
      CHECK(xy <= 1.0);
    }
  }
}

TEST_CASE("weighted transform interpolates between identity and input") {
  CHECK(rfnn::weighted_transform(1.0, 0.3, 0.9) == doctest::Approx(0.3));
  CHECK(rfnn::weighted_transform(0.0, 0.3, 0.9) == doctest::Approx(0.9));
  CHECK(rfnn::weighted_transform(0.5, 0.2, 0.8) == doctest::Approx(0.5));
}

namespace {

Eigen::MatrixXd memberships_2x2(double a00, double a01, double a10, double a11) {
  Eigen::MatrixXd mu(2, 2);
  mu << a00, a01, a10, a11;
  return mu;
}

}  // namespace

TEST_CASE("unineuron with full weights reduces to the bare uninorm fold") {
  LogicNeuron neuron;
  neuron.kind = NeuronKind::Uni;
  neuron.antecedents = {{0, 0}, {1, 1}};
  neuron.weights = Eigen::Vector2d(1.0, 1.0);
  neuron.identity = 0.5;
  const Eigen::MatrixXd mu = memberships_2x2(0.4, 0.9, 0.1, 0.4);
  // inputs 0.4 and 0.4, both below g: 0.32
  CHECK(rfnn::unineuron_eval(neuron, mu, BoundaryMode::Max) == doctest::Approx(0.32));
}

TEST_CASE("unineuron with zero weights returns the identity element") {
  LogicNeuron neuron;
  neuron.kind = NeuronKind::Uni;
  neuron.antecedents = {{0, 0}, {1, 0}};
  neuron.weights = Eigen::Vector2d(0.0, 0.0);
  neuron.identity = 0.7;
  const Eigen::MatrixXd mu = memberships_2x2(0.2, 0.9, 0.3, 0.4);
  CHECK(rfnn::unineuron_eval(neuron, mu, BoundaryMode::Max) == doctest::Approx(0.7));
}

TEST_CASE("and neuron is the product of s-normed pairs") {
  LogicNeuron neuron;
  neuron.kind = NeuronKind::And;
  neuron.antecedents = {{0, 0}, {1, 1}};
  neuron.weights = Eigen::Vector2d(0.25, 0.5);
  const Eigen::MatrixXd mu = memberships_2x2(0.8, 0.0, 0.0, 0.6);
  const double left = 0.25 + 0.8 - 0.25 * 0.8;
  const double right = 0.5 + 0.6 - 0.5 * 0.6;
  CHECK(rfnn::andneuron_eval(neuron, mu) == doctest::Approx(left * right));
  // zero weights make AND pass memberships through as a plain product
  neuron.weights = Eigen::Vector2d(0.0, 0.0);
  CHECK(rfnn::andneuron_eval(neuron, mu) == doctest::Approx(0.8 * 0.6));
}

TEST_CASE("or neuron is the probabilistic sum of t-normed pairs") {
  LogicNeuron neuron;
  neuron.kind = NeuronKind::Or;
  neuron.antecedents = {{0, 0}, {1, 1}};
  neuron.weights = Eigen::Vector2d(0.5, 1.0);
  const Eigen::MatrixXd mu = memberships_2x2(0.8, 0.0, 0.0, 0.6);
  const double left = 0.5 * 0.8;
  const double right = 1.0 * 0.6;
  CHECK(rfnn::orneuron_eval(neuron, mu) == doctest::Approx(left + right - left * right));
  // full weights make OR the probabilistic sum of the memberships
  neuron.weights = Eigen::Vector2d(1.0, 1.0);
  CHECK(rfnn::orneuron_eval(neuron, mu) == doctest::Approx(0.8 + 0.6 - 0.48));
}

TEST_CASE("neuron outputs stay in the unit interval over random draws") {
  rfnn::Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    LogicNeuron neuron;
    neuron.antecedents = {{0, rng.uniform() < 0.5 ? 0 : 1}, {1, rng.uniform() < 0.5 ? 0 : 1}};
    neuron.weights = Eigen::Vector2d(rng.uniform(), rng.uniform());
    neuron.identity = rng.uniform();
    const Eigen::MatrixXd mu =
        memberships_2x2(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
    for (const NeuronKind kind : {NeuronKind::Uni, NeuronKind::And, NeuronKind::Or}) {
      neuron.kind = kind;
      const double out = rfnn::neuron_eval(neuron, mu, BoundaryMode::Max);
      CHECK(out >= 0.0);
      CHECK(out <= 1.0);
    }
  }
}

TEST_CASE("neuron_eval validates antecedent indices") {
  LogicNeuron neuron;
  neuron.kind = NeuronKind::Uni;
  neuron.antecedents = {{5, 0}};
  neuron.weights = Eigen::VectorXd::Ones(1);
  const Eigen::MatrixXd mu = memberships_2x2(0.5, 0.5, 0.5, 0.5);
  CHECK_THROWS_AS(rfnn::neuron_eval(neuron, mu, BoundaryMode::Max), std::invalid_argument);
}

TEST_CASE("enum names round trip") {
  for (const NeuronKind kind : {NeuronKind::Uni, NeuronKind::And, NeuronKind::Or}) {
    CHECK(rfnn::neuron_kind_from_string(rfnn::to_string(kind)) == kind);
  }
  for (const BoundaryMode mode : {BoundaryMode::Max, BoundaryMode::Min}) {
    CHECK(rfnn::boundary_mode_from_string(rfnn::to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(rfnn::neuron_kind_from_string("nand"), std::invalid_argument);
  CHECK_THROWS_AS(rfnn::boundary_mode_from_string("median"), std::invalid_argument);
}
