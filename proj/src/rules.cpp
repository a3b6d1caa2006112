#include "rfnn/rules.hpp"

#include <cstdio>
#include <stdexcept>

#include "rfnn/errors.hpp"

namespace rfnn {

namespace {

std::string connective_for(NeuronKind kind) {
  switch (kind) {
    case NeuronKind::Uni: return "and-or";
    case NeuronKind::And: return "and";
    case NeuronKind::Or: return "or";
  }
  throw std::invalid_argument("unknown neuron kind");
}

FuzzyRule rule_skeleton(const TrainedModel& model, std::size_t l) {
  const LogicNeuron& neuron = model.neurons[l];
  FuzzyRule rule;
  rule.connective = connective_for(neuron.kind);
  rule.certainty = model.output_weights[static_cast<Eigen::Index>(l + 1)];
  for (std::size_t i = 0; i < neuron.antecedents.size(); ++i) {
    const auto [feature, set] = neuron.antecedents[i];
    rule.antecedents.push_back(
        {model.feature_names[static_cast<std::size_t>(feature)],
         model.partition.per_feature[static_cast<std::size_t>(feature)]
                                    [static_cast<std::size_t>(set)].label,
         neuron.weights[static_cast<Eigen::Index>(i)]});
  }
  return rule;
}

}  // namespace

std::vector<FuzzyRule> extract_rules(const TrainedModel& model) {
  if (model.report.mean_activations.size() != model.neurons.size()) {
    throw std::invalid_argument("extract_rules: model carries no stored activations");
  }
  std::vector<FuzzyRule> rules;
  rules.reserve(model.neurons.size());
  for (std::size_t l = 0; l < model.neurons.size(); ++l) {
    FuzzyRule rule = rule_skeleton(model, l);
    rule.consequent = model.report.mean_activations[l];
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<FuzzyRule> extract_rules(const TrainedModel& model, const Dataset& training_data) {
  if (training_data.num_samples() == 0) throw DataError("extract_rules: empty dataset");
  const Eigen::MatrixXd rows = training_data.stats.has_value()
                                   ? training_data.features
                                   : standardize_rows(training_data.features, model.stats);

  std::vector<FuzzyRule> rules;
  rules.reserve(model.neurons.size());
  const double n = static_cast<double>(rows.rows());
  for (std::size_t l = 0; l < model.neurons.size(); ++l) {
    FuzzyRule rule = rule_skeleton(model, l);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      const Eigen::MatrixXd memberships = fuzzify(model.partition, rows.row(i).transpose());
      sum += neuron_eval(model.neurons[l], memberships, model.config.boundary_mode);
    }
    rule.consequent = sum / n;
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string render_rule(const FuzzyRule& rule, int index, int decimals) {
  if (decimals < 1) throw std::invalid_argument("render_rule: decimals must be positive");
  if (rule.antecedents.empty()) throw std::invalid_argument("render_rule: rule has no antecedents");

  const char* joiner = rule.connective == "or" ? "or" : "and";
  std::string text = std::to_string(index) + ". If ";
  for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
    if (i > 0) {
      text += ' ';
      text += joiner;
      text += ' ';
    }
    text += '(' + rule.antecedents[i].feature + " is " + rule.antecedents[i].set_label + ')';
  }

  char number[64];
  std::snprintf(number, sizeof(number), "%.*f", decimals, rule.certainty);
  text += " with certainly ";
  text += number;
  std::snprintf(number, sizeof(number), "%.*f", decimals, rule.consequent);
  text += " then (SQL Injection Attack is ";
  text += number;
  text += ')';
  return text;
}

}  // namespace rfnn
