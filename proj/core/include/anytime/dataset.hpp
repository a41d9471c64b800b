#ifndef ANYTIME_DATASET_HPP
#define ANYTIME_DATASET_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace anytime {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Labelled design matrix for multiclass classification. One row per example;
/// labels take values in [0, class_count).
struct Dataset {
  FeatureMatrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  int class_count = 0;

  std::size_t size() const { return labels.size(); }
  Eigen::Index input_dim() const { return features.cols(); }
  /// Dimension of a linear multiclass model: k * d_in.
  Eigen::Index model_dim() const { return static_cast<Eigen::Index>(class_count) * features.cols(); }

  /// Throws std::invalid_argument if shapes or labels are inconsistent.
  void validate() const;
};

}  // namespace anytime

#endif  // ANYTIME_DATASET_HPP
