#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "edgemind/clustering/assignment.hpp"
#include "edgemind/clustering/graph.hpp"
#include "edgemind/common/errors.hpp"
#include "oracles.hpp"

using namespace edgemind;
using namespace edgemind::clustering;

namespace {

Eigen::MatrixXd random_points(Rng& rng, std::size_t m, std::size_t d) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = rng.uniform(-1.0, 1.0);
  }
  return p;
}

HandoverCounts wrap(const CountMatrix& c) { return {0, 1, c}; }

}  // namespace

TEST_SUITE("clustering") {
  TEST_CASE("transition matrix rows sum to one or zero") {
    CountMatrix c(3, 3);
    c << 0, 3, 1, 0, 0, 0, 2, 2, 0;
    const auto H = transition_matrix(c);
    CHECK(H(0, 1) == doctest::Approx(0.75));
    CHECK(H.row(1).sum() == 0.0);
    CHECK(std::abs(H.row(2).sum() - 1.0) < 1e-12);
    CountMatrix diag = CountMatrix::Zero(2, 2);
    diag(0, 0) = 1;
    CHECK_THROWS_AS(transition_matrix(diag), ShapeError);
    CountMatrix neg = CountMatrix::Zero(2, 2);
    neg(0, 1) = -1;
    CHECK_THROWS_AS(transition_matrix(neg), ShapeError);
    CHECK_THROWS_AS(transition_matrix(CountMatrix::Zero(2, 3)), ShapeError);
  }

  TEST_CASE("weight graph is the symmetrised transition matrix") {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(3, 3);
    H(0, 1) = 0.75;
    H(0, 2) = 0.25;
    H(1, 0) = 1.0;
    const auto W = weight_graph(H);
    CHECK(W(0, 1) == 1.75);
    CHECK(W(1, 0) == 1.75);
    CHECK(W(0, 2) == 0.25);
    CHECK((W - W.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(weight_graph(Eigen::MatrixXd::Zero(3, 3)).isZero());
  }

  TEST_CASE("random-walk laplacian") {
    Eigen::MatrixXd W(2, 2);
    W << 0, 0.4, 0.4, 0;
    const auto lap = normalized_laplacian(W);
    Eigen::MatrixXd want(2, 2);
    want << 1, -1, -1, 1;
    CHECK((lap.L - want).cwiseAbs().maxCoeff() < 1e-15);

    const auto G = test::component_graph(5, 1, 3);
    const auto L5 = normalized_laplacian(G).L;
    CHECK((L5 * Eigen::VectorXd::Ones(5)).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd iso = Eigen::MatrixXd::Zero(3, 3);
    iso(0, 1) = iso(1, 0) = 1.0;
    const auto li = normalized_laplacian(iso);
    CHECK(li.isolated == std::vector<bool>{false, false, true});
    CHECK(li.L.row(2).isApprox(Eigen::RowVector3d(0, 0, 1)));
  }

  TEST_CASE("eigenpairs and component counts on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const std::size_t comps = 1 + seed % 4;
      const auto W = test::component_graph(12 + seed, comps, seed);
      CHECK(count_components(W) == comps);
      const auto lap = normalized_laplacian(W);
      const auto emb = spectral_embed(lap, static_cast<std::size_t>(W.rows()));
      for (Eigen::Index j = 0; j < emb.U.cols(); ++j) {
        const Eigen::VectorXd r = lap.L * emb.U.col(j) - emb.eigenvalues(j) * emb.U.col(j);
        CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(emb.U.col(j).norm() == doctest::Approx(1.0));
        if (j > 0) CHECK(emb.eigenvalues(j) >= emb.eigenvalues(j - 1));
      }
      std::size_t zeros = 0;
      for (Eigen::Index j = 0; j < emb.eigenvalues.size(); ++j) zeros += std::abs(emb.eigenvalues(j)) < 1e-9;
      CHECK(zeros == comps);
    }
  }

  TEST_CASE("single eigenvector of a connected graph is constant") {
    const auto W = test::component_graph(8, 1, 11);
    const auto emb = spectral_embed(normalized_laplacian(W), 1);
    const auto u = emb.U.col(0);
    CHECK((u.array() - u(0)).abs().maxCoeff() < 1e-9);
    CHECK(std::abs(emb.eigenvalues(0)) < 1e-10);
  }

  TEST_CASE("default size bounds") {
    CHECK(default_size_bounds(40, 8).min == 4);
    CHECK(default_size_bounds(40, 8).max == 6);
    CHECK(default_size_bounds(10, 3).min == 2);
    CHECK(default_size_bounds(10, 3).max == 4);
    CHECK(default_size_bounds(60, 7).min == 6);
    CHECK(default_size_bounds(60, 7).max == 11);
    CHECK(feasible(10, 3, {3, 4}));
    CHECK_FALSE(feasible(10, 3, {4, 4}));
  }

  TEST_CASE("constrained assignment matches brute force") {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t m = 2 + rng.index(9), k = 1 + rng.index(3), d = 1 + rng.index(3);
      const auto points = random_points(rng, m, d);
      const auto centroids = random_points(rng, k, d);
      const std::size_t lo = rng.index(m / k + 1);
      const SizeBounds b{lo, lo + rng.index(m)};
      const double want = test::brute_force_assignment_cost(points, centroids, b);
      if (!std::isfinite(want)) {
        CHECK_THROWS_AS(assign_constrained(points, centroids, b), InfeasibleError);
        continue;
      }
      const auto got = assign_constrained(points, centroids, b);
      CHECK(got.cost == doctest::Approx(want).epsilon(1e-12));
      std::vector<std::size_t> sizes(k, 0);
      for (int l : got.labels) ++sizes[static_cast<std::size_t>(l)];
      for (auto s : sizes) {
        CHECK(s >= b.min);
        CHECK(s <= b.max);
      }
    }
  }

  TEST_CASE("rectangle corners pair along the short edges") {
    Eigen::MatrixXd p(4, 2);
    p << 0, 0, 0, 1, 4, 0, 4, 1;
    const auto r = constrained_kmeans(p, 2, {2, 2}, 1);
    CHECK(r.labels == std::vector<int>{0, 0, 1, 1});
  }

  TEST_CASE("bounds override natural blobs") {
    Rng rng(2);
    Eigen::MatrixXd p(12, 2);
    const double cx[3] = {0, 10, 20};
    for (int i = 0; i < 12; ++i) {
      const int blob = i < 6 ? 0 : (i < 9 ? 1 : 2);
      p(i, 0) = cx[blob] + rng.uniform(-0.1, 0.1);
      p(i, 1) = rng.uniform(-0.1, 0.1);
    }
    const auto r = constrained_kmeans(p, 3, {4, 4}, 7);
    std::vector<std::size_t> sizes(3, 0);
    for (int l : r.labels) ++sizes[static_cast<std::size_t>(l)];
    CHECK(sizes == std::vector<std::size_t>{4, 4, 4});
    const auto final_step = assign_constrained(p, r.centroids, {4, 4});
    CHECK(final_step.cost == doctest::Approx(test::brute_force_assignment_cost(p, r.centroids, {4, 4})));
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);
    }
  }

  TEST_CASE("one point per cluster") {
    Rng rng(8);
    const auto p = random_points(rng, 3, 2);
    const auto r = constrained_kmeans(p, 3, {1, 1}, 4);
    CHECK(r.labels == std::vector<int>{0, 1, 2});
    CHECK(r.objective == doctest::Approx(0.0));
  }

  TEST_CASE("canonical labels") {
    CHECK(canonical_labels({2, 2, 0, 1, 0}) == std::vector<int>{0, 0, 1, 2, 1});
  }

  TEST_CASE("adjusted rand index") {
    // Reference values from sklearn.metrics.adjusted_rand_score.
    CHECK(adjusted_rand_index({0, 0, 1, 1, 2, 2}, {0, 0, 1, 2, 2, 2}) == doctest::Approx(0.4444444444444444));
    CHECK(adjusted_rand_index({0, 0, 0, 1, 1, 1, 2, 2}, {1, 1, 0, 0, 2, 2, 2, 2}) ==
          doctest::Approx(0.18181818181818182));
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
  }

  TEST_CASE("data-driven clustering recovers disconnected communities") {
    for (const auto& sizes : {std::vector<std::size_t>{5, 5}, std::vector<std::size_t>{4, 4, 4}}) {
      std::vector<int> truth;
      const auto c = test::block_counts(sizes, 3, &truth);
      const auto a = cluster_data_driven(wrap(c), sizes.size(), 17);
      CHECK(adjusted_rand_index(a.labels, truth) == doctest::Approx(1.0));
      CHECK_NOTHROW(validate(a));
    }
  }

  TEST_CASE("a single cluster takes every station") {
    const auto c = test::block_counts({3, 4}, 1, nullptr);
    const auto a = cluster_data_driven(wrap(c), 1, 2);
    CHECK(a.labels == std::vector<int>(7, 0));
  }

  TEST_CASE("permuting stations permutes the partition") {
    std::vector<int> truth;
    const auto c = test::block_counts({4, 3, 3}, 9, &truth);
    const std::vector<Eigen::Index> perm{7, 2, 9, 0, 4, 1, 8, 3, 6, 5};
    CountMatrix pc(10, 10);
    for (Eigen::Index i = 0; i < 10; ++i) {
      for (Eigen::Index j = 0; j < 10; ++j) pc(i, j) = c(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    const auto a = cluster_data_driven(wrap(c), 3, 4);
    const auto b = cluster_data_driven(wrap(pc), 3, 4);
    std::vector<int> mapped(10);
    for (std::size_t i = 0; i < 10; ++i) mapped[i] = a.labels[static_cast<std::size_t>(perm[i])];
    CHECK(adjusted_rand_index(mapped, b.labels) == doctest::Approx(1.0));
  }

  TEST_CASE("scaling the weights keeps the partition") {
    Rng rng(21);
    CountMatrix c = CountMatrix::Zero(9, 9);
    for (Eigen::Index i = 0; i < 9; ++i) {
      for (Eigen::Index j = 0; j < 9; ++j) {
        if (i != j) c(i, j) = static_cast<std::int64_t>(rng.index(6)) + ((i / 3 == j / 3) ? 20 : 0);
      }
    }
    GraphArtifacts art;
    const auto a = cluster_data_driven(wrap(c), 3, 6, {}, &art);
    const auto lap2 = normalized_laplacian(art.W * 7.5);
    CHECK((lap2.L - art.laplacian.L).cwiseAbs().maxCoeff() < 1e-12);
    const auto b = cluster_data_driven(wrap(CountMatrix(c * 3)), 3, 6);
    CHECK(a.labels == b.labels);
  }

  TEST_CASE("geographic clustering") {
    std::vector<Station> st;
    for (std::uint32_t i = 0; i < 10; ++i) {
      const double base = i < 5 ? 37.70 : 37.80;
      st.push_back({StationId(i), base + 0.001 * i, -122.40 + 0.001 * (i % 5), 10.0});
    }
    const auto a = cluster_geographic(st, 2, 3);
    CHECK(a.labels == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
    const auto single = cluster_geographic(st, 10, 3);
    CHECK(single.labels == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  }

  TEST_CASE("assignment json") {
    const auto c = test::block_counts({3, 3}, 1, nullptr);
    auto a = cluster_data_driven(wrap(c), 2, 2);
    a.source_window = SourceWindow{100, 50};
    const auto b = assignment_from_json(to_json(a));
    CHECK(b.labels == a.labels);
    CHECK(b.min_size == a.min_size);
    CHECK(b.max_size == a.max_size);
    CHECK(b.strategy == a.strategy);
    ClusterAssignment bad = a;
    bad.labels[0] = 5;
    CHECK_THROWS_AS(validate(bad), ShapeError);
  }
}
