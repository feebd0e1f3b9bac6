#include "edgemind/clustering/graph.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "edgemind/common/errors.hpp"

namespace edgemind::clustering {

Eigen::MatrixXd transition_matrix(const CountMatrix& counts) {
  if (counts.rows() != counts.cols()) throw ShapeError("handover counts must be square");
  const auto n = counts.rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (counts(i, i) != 0) throw ShapeError("handover counts must have a zero diagonal");
    std::int64_t row = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (counts(i, j) < 0) throw ShapeError("handover counts must be non-negative");
      row += counts(i, j);
    }
    if (row == 0) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      h(i, j) = static_cast<double>(counts(i, j)) / static_cast<double>(row);
    }
  }
  return h;
}

Eigen::MatrixXd weight_graph(const Eigen::MatrixXd& transition) {
  if (transition.rows() != transition.cols()) throw ShapeError("transition matrix must be square");
  Eigen::MatrixXd w = transition + transition.transpose();
  w.diagonal().setZero();
  return w;
}

Laplacian normalized_laplacian(const Eigen::MatrixXd& weights) {
  if (weights.rows() != weights.cols()) throw ShapeError("weight matrix must be square");
  const auto n = weights.rows();
  Laplacian out;
  out.degree = weights.rowwise().sum();
  out.isolated.assign(static_cast<std::size_t>(n), false);
  out.L = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(out.degree(i) > 0.0)) {
      out.isolated[static_cast<std::size_t>(i)] = true;
      out.degree(i) = 1.0;
      continue;
    }
    out.L.row(i) -= weights.row(i) / out.degree(i);
  }
  return out;
}

SpectralEmbedding spectral_embed(const Laplacian& laplacian, std::size_t n_clusters) {
  const auto n = laplacian.L.rows();
  if (n_clusters < 1 || static_cast<Eigen::Index>(n_clusters) > n) {
    throw ShapeError("n_clusters must be in [1, N_g]");
  }
  const Eigen::VectorXd sqrt_d = laplacian.degree.array().sqrt();
  const Eigen::VectorXd inv_sqrt_d = sqrt_d.cwiseInverse();
  Eigen::MatrixXd sym = sqrt_d.asDiagonal() * laplacian.L * inv_sqrt_d.asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver did not converge");

  const auto k = static_cast<Eigen::Index>(n_clusters);
  SpectralEmbedding out;
  out.eigenvalues = solver.eigenvalues().head(k);
  out.U = inv_sqrt_d.asDiagonal() * solver.eigenvectors().leftCols(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    auto col = out.U.col(c);
    const double norm = col.norm();
    if (norm > 0.0) col /= norm;
    // Sign convention: the largest-magnitude entry (first on ties) is positive.
    Eigen::Index arg = 0;
    for (Eigen::Index r = 1; r < n; ++r) {
      if (std::abs(col(r)) > std::abs(col(arg)) + 1e-12) arg = r;
    }
    if (col(arg) < 0.0) col = -col;
  }
  return out;
}

std::size_t count_components(const Eigen::MatrixXd& weights) {
  const auto n = static_cast<std::size_t>(weights.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0 ||
          weights(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) > 0.0) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) roots += find(i) == i;
  return roots;
}

}  // namespace edgemind::clustering
