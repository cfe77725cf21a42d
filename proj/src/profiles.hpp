#pragma once

// Built-in disease schemas together with the per-column generation profiles
// used by the synthesizer. Internal to the library.

#include <string>
#include <vector>

#include "clinpred/dataset.hpp"
#include "clinpred/ingest.hpp"

namespace clinpred::detail {

enum class Generator {
  gaussian,     // truncated normal on [min, max]
  bernoulli,    // numeric 0/1
  levels,       // numeric, drawn from a weighted set of values
  categorical,  // category tokens with weights
  identifier,   // 1..n
  target,
};

struct ColumnProfile {
  ColumnSpec spec;
  Generator gen = Generator::gaussian;
  double mean = 0.0;
  double min = 0.0;
  double max = 1.0;
  double std = 0.0;  // 0: derive as (max - min) / 6
  bool integer = false;
  double p = 0.5;  // bernoulli
  std::vector<double> values;       // levels
  std::vector<std::string> tokens;  // categorical
  std::vector<double> weights;      // levels / categorical
  double direction = 1.0;           // sign of the class shift
};

const std::vector<ColumnProfile>& disease_profile(DiseaseId id);

}  // namespace clinpred::detail
