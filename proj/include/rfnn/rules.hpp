#pragma once

#include <string>
#include <vector>

#include "rfnn/dataset.hpp"
#include "rfnn/network.hpp"

namespace rfnn {

struct RuleAntecedent {
  std::string feature;
  std::string set_label;
  double weight = 0.0;
};

struct FuzzyRule {
  std::vector<RuleAntecedent> antecedents;
  double certainty = 0.0;   // output weight of the neuron
  double consequent = 0.0;  // mean training activation, in [0,1]
  std::string connective;   // "and-or" (uninorm), "and", or "or"
};

// One rule per selected neuron, in neuron order. The one-argument form reads
// the consequents stored at training time; the two-argument form recomputes
// them as mean activations over the given data (standardized with the model's
// stats unless already transformed).
std::vector<FuzzyRule> extract_rules(const TrainedModel& model);
std::vector<FuzzyRule> extract_rules(const TrainedModel& model, const Dataset& training_data);

// "1. If (length is low) and (entropy is high) with certainly 10.3064
//  then (SQL Injection Attack is 0.1319)"
std::string render_rule(const FuzzyRule& rule, int index, int decimals = 4);

}  // namespace rfnn
