#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "edgemind/telemetry/types.hpp"

namespace edgemind::clustering {

// Row-normalized handover counts; rows without handovers stay all-zero.
// Throws ShapeError for non-square input, negative counts or a non-zero
// diagonal.
Eigen::MatrixXd transition_matrix(const CountMatrix& counts);
inline Eigen::MatrixXd transition_matrix(const HandoverCounts& hc) { return transition_matrix(hc.counts); }

// W = H + H^T with a zeroed diagonal.
Eigen::MatrixXd weight_graph(const Eigen::MatrixXd& transition);

struct Laplacian {
  Eigen::MatrixXd L;          // I - D^{-1} W
  Eigen::VectorXd degree;     // D_ii as used; isolated stations carry 1
  std::vector<bool> isolated; // D_ii was zero in W
};

// Random-walk normalized Laplacian. An isolated station gets unit degree
// with no edges, so its row is e_i and its eigenvalue is 1.
Laplacian normalized_laplacian(const Eigen::MatrixXd& weights);

struct SpectralEmbedding {
  Eigen::MatrixXd U;            // N_g x N_c, unit-norm columns
  Eigen::VectorXd eigenvalues;  // ascending
};

// Eigenvectors of L_rw for the n_clusters smallest eigenvalues, computed
// from L_sym = D^{1/2} L_rw D^{-1/2} and mapped back by D^{-1/2}.
// Throws ConvergenceError when the eigensolver fails.
SpectralEmbedding spectral_embed(const Laplacian& laplacian, std::size_t n_clusters);

// Connected components of the graph with edges where weights(i,j) > 0.
std::size_t count_components(const Eigen::MatrixXd& weights);

}  // namespace edgemind::clustering
