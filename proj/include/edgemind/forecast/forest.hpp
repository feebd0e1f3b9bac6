#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace edgemind::forecast {

struct ForestOptions {
  std::size_t n_trees = 200;
  bool bootstrap = true;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
};

// CART regression tree over all features with multi-output SSE splits.
class RegressionTree {
 public:
  void fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, std::vector<std::size_t> rows,
           std::size_t min_samples_split);
  Eigen::RowVectorXd predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  std::size_t n_nodes() const { return nodes_.size(); }
  std::size_t n_leaves() const;

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t value = 0;  // row of values_
  };

  std::size_t build(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, std::vector<std::size_t>& rows,
                    std::size_t begin, std::size_t end, std::size_t min_samples_split);

  std::vector<Node> nodes_;
  std::vector<Eigen::RowVectorXd> values_;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
  Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
};

ForestModel rfr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const ForestOptions& options);

}  // namespace edgemind::forecast
