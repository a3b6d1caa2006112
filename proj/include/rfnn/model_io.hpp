#pragma once

#include <string>
#include <vector>

#include "rfnn/evaluation.hpp"
#include "rfnn/network.hpp"
#include "rfnn/rules.hpp"

namespace rfnn {

// Model files are a single versioned JSON document. Doubles are serialized
// with shortest round-trip precision, so save/load is bit-exact.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

std::string rules_to_json(const std::vector<FuzzyRule>& rules);
std::vector<FuzzyRule> rules_from_json(const std::string& text);

// Timing fields are deliberately absent so identical inputs produce
// byte-identical documents.
std::string metrics_to_json(const Metrics& metrics);
std::string grid_result_to_json(const GridResult& result);
std::string run_report_to_json(const RunReport& report);
std::string benchmark_report_to_json(const GridResult& grid, const RunReport& runs,
                                     const GridRanges& ranges, int run_count,
                                     double train_fraction, std::uint64_t seed);

// Write to a temp file in the destination directory, then rename.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_text_file(const std::string& path);

}  // namespace rfnn
