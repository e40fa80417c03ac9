#pragma once

#include <utility>
#include <vector>

#include "crp/kronlin.hpp"

namespace crp {

// One sample: an l1 x l2 matrix and its class label in [0, classes).
struct LabeledMatrix {
  Matrix data;
  int label = 0;
};

struct Dataset {
  std::vector<LabeledMatrix> samples;
  int classes = 0;
  Index rows = 0;  // l1
  Index cols = 0;  // l2

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// Builds a dataset from samples, taking (rows, cols) from the first one.
Dataset make_dataset(std::vector<LabeledMatrix> samples, int classes);

// Checks labels, shape uniformity and finiteness; throws on violation.
void validate_dataset(const Dataset& d);

// An embedded sample, ready for nearest-neighbor classification.
struct Embedded {
  Vector features;
  int label = 0;
};

}  // namespace crp
