#include "crp/stats.hpp"

#include <sstream>

namespace crp {

Dataset make_dataset(std::vector<LabeledMatrix> samples, int classes) {
  Dataset d;
  d.samples = std::move(samples);
  d.classes = classes;
  if (!d.samples.empty()) {
    d.rows = d.samples.front().data.rows();
    d.cols = d.samples.front().data.cols();
  }
  validate_dataset(d);
  return d;
}

void validate_dataset(const Dataset& d) {
  if (d.classes < 0) throw DataError("dataset: negative class count");
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const LabeledMatrix& s = d.samples[i];
    if (s.label < 0 || s.label >= d.classes) {
      std::ostringstream msg;
      msg << "dataset: sample " << i << " has label " << s.label
          << " outside [0, " << d.classes << ")";
      throw DataError(msg.str());
    }
    if (s.data.rows() != d.rows || s.data.cols() != d.cols) {
      std::ostringstream msg;
      msg << "dataset: sample " << i << " is " << s.data.rows() << "x"
          << s.data.cols() << ", expected " << d.rows << "x" << d.cols;
      throw DimensionError(msg.str());
    }
    if (!s.data.allFinite()) {
      std::ostringstream msg;
      msg << "dataset: sample " << i << " contains non-finite entries";
      throw NumericalError(msg.str());
    }
  }
}

ClassStats compute_class_stats(const Dataset& d) {
  if (d.empty()) throw DataError("compute_class_stats: empty dataset");
  validate_dataset(d);

  ClassStats s;
  s.counts.assign(d.classes, 0);
  std::vector<Matrix> sums(d.classes, Matrix::Zero(d.rows, d.cols));
  for (const LabeledMatrix& sample : d.samples) {
    sums[sample.label] += sample.data;
    ++s.counts[sample.label];
  }

  s.class_means.resize(d.classes);
  Matrix total = Matrix::Zero(d.rows, d.cols);
  for (int c = 0; c < d.classes; ++c) {
    if (s.counts[c] == 0) {
      std::ostringstream msg;
      msg << "compute_class_stats: class " << c << " has no samples";
      throw DataError(msg.str());
    }
    s.class_means[c] = sums[c] / static_cast<double>(s.counts[c]);
    total += sums[c];
  }
  s.global_mean = total / static_cast<double>(d.size());
  return s;
}

std::vector<Matrix> between_deviations(const ClassStats& s) {
  std::vector<Matrix> out;
  out.reserve(s.class_means.size());
  for (const Matrix& mean : s.class_means) {
    out.push_back(mean - s.global_mean);
  }
  return out;
}

std::vector<Matrix> within_deviations(const Dataset& d, const ClassStats& s) {
  if (static_cast<int>(s.class_means.size()) != d.classes) {
    throw DimensionError("within_deviations: stats do not match dataset");
  }
  std::vector<Matrix> out;
  out.reserve(d.size());
  for (const LabeledMatrix& sample : d.samples) {
    out.push_back(sample.data - s.class_means[sample.label]);
  }
  return out;
}

}  // namespace crp
