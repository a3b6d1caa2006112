#pragma once

#include <stdexcept>
#include <string>

namespace rfnn {

// Malformed or missing input data: CSV parse failures, schema mismatches,
// datasets too small for the requested resampling.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Training could not produce a model.
class TrainError : public std::runtime_error {
public:
  explicit TrainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rfnn
