#pragma once

#include <vector>

#include "rvnli/metrics/dataset.hpp"
#include "rvnli/metrics/metrics.hpp"

namespace rvnli::testkit {

// "<Name> is <a0>." plus `depth` rules "If something is <a_i> then it is <a_i+1>.", hypothesis
// "<Name> is <a_depth>."; `variant` picks the name and vocabulary.
metrics::DatasetInstance chain_instance(int depth, int variant = 0);

struct DepthCurves {
  // Used depth of every pipeline run, indexed like the records.
  std::vector<metrics::DepthRecord> tree;
  // The same chains after holistic compression to at most two links.
  std::vector<metrics::DepthRecord> holistic;
};

// Gold depths 1..5 with `per_depth` chains each, through run_instance with the scripted client.
DepthCurves depth_curves(int per_depth = 3);

// Saturating: starts on the diagonal, never decreases, flat from gold 3 on and below the diagonal at 5.
bool saturates(const std::vector<metrics::DepthBucket>& curve);
bool on_diagonal(const std::vector<metrics::DepthBucket>& curve);

}  // namespace rvnli::testkit
