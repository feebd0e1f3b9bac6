#include "edgemind/forecast/arma.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {
namespace {

constexpr std::size_t kLongArMax = 20;

std::vector<double> difference(const std::vector<double>& x) {
  std::vector<double> d;
  for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
  return d;
}

// Roots of 1 + c_1 z + ... + c_k z^k all outside the unit circle.
bool invertible(const Eigen::VectorXd& coef) {
  const auto k = coef.size();
  if (k == 0 || coef.cwiseAbs().maxCoeff() == 0.0) return true;
  // Reciprocal roots are the eigenvalues of the companion of x^k + c_1 x^(k-1) + ... + c_k.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) C(0, j) = -coef(j);
  for (Eigen::Index i = 1; i < k; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  return es.eigenvalues().cwiseAbs().maxCoeff() < 1.0;
}

double sd(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

// One-step residuals of the fitted model, zero initial state.
std::vector<double> filter(const ArmaModel& m, const std::vector<double>& d) {
  std::vector<double> e(d.size(), 0.0);
  for (std::size_t t = 0; t < d.size(); ++t) {
    double pred = m.c;
    for (std::size_t i = 1; i <= m.p && i <= t; ++i) pred += m.phi(static_cast<Eigen::Index>(i - 1)) * d[t - i];
    for (std::size_t j = 1; j <= m.q && j <= t; ++j) pred += m.theta(static_cast<Eigen::Index>(j - 1)) * e[t - j];
    e[t] = d[t] - pred;
  }
  return e;
}

}  // namespace

ArmaModel arma_fit(std::span<const std::vector<double>> segments, std::size_t p, std::size_t q) {
  ArmaModel m;
  m.p = p;
  m.q = q;
  m.phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  m.theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));

  std::vector<std::vector<double>> diffs;
  std::size_t longest = 0;
  for (const auto& s : segments) {
    diffs.push_back(difference(s));
    longest = std::max(longest, diffs.back().size());
  }
  const std::size_t m_ar = std::max(p + q, std::min(kLongArMax, longest / 3));

  // Constant differences (a flat line or a ramp) leave the regression
  // rank-deficient; the exact model is a pure drift.
  double sum = 0.0, lo = HUGE_VAL, hi = -HUGE_VAL;
  std::size_t count = 0;
  for (const auto& d : diffs) {
    for (double v : d) {
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++count;
    }
  }
  if (count > 0 && hi - lo <= 1e-12 * (1.0 + std::abs(hi))) {
    m.c = sum / static_cast<double>(count);
    return m;
  }

  // Stage 1: long AR.
  std::size_t rows1 = 0;
  for (const auto& d : diffs) rows1 += d.size() > m_ar ? d.size() - m_ar : 0;
  if (rows1 <= m_ar + 1) {
    m.persistence = true;
    return m;
  }
  Eigen::MatrixXd A1(static_cast<Eigen::Index>(rows1), static_cast<Eigen::Index>(m_ar + 1));
  Eigen::VectorXd b1(static_cast<Eigen::Index>(rows1));
  Eigen::Index r = 0;
  for (const auto& d : diffs) {
    for (std::size_t t = m_ar; t < d.size(); ++t, ++r) {
      A1(r, 0) = 1.0;
      for (std::size_t i = 1; i <= m_ar; ++i) A1(r, static_cast<Eigen::Index>(i)) = d[t - i];
      b1(r) = d[t];
    }
  }
  const Eigen::VectorXd beta1 = A1.completeOrthogonalDecomposition().solve(b1);
  const Eigen::VectorXd resid1 = b1 - A1 * beta1;

  // Residual estimates aligned to each segment; NaN where the long AR lacks lags.
  std::vector<std::vector<double>> ehat;
  r = 0;
  for (const auto& d : diffs) {
    std::vector<double> e(d.size(), std::nan(""));
    for (std::size_t t = m_ar; t < d.size(); ++t, ++r) e[t] = resid1(r);
    ehat.push_back(std::move(e));
  }

  // Stage 2: regress on lagged differences and lagged residual estimates.
  const std::size_t start = std::max(p, m_ar + q);
  std::size_t rows2 = 0;
  for (const auto& d : diffs) rows2 += d.size() > start ? d.size() - start : 0;
  const std::size_t cols2 = 1 + p + q;
  if (rows2 <= cols2) {
    m.persistence = true;
    return m;
  }
  Eigen::MatrixXd A2(static_cast<Eigen::Index>(rows2), static_cast<Eigen::Index>(cols2));
  Eigen::VectorXd b2(static_cast<Eigen::Index>(rows2));
  r = 0;
  for (std::size_t s = 0; s < diffs.size(); ++s) {
    const auto& d = diffs[s];
    for (std::size_t t = start; t < d.size(); ++t, ++r) {
      A2(r, 0) = 1.0;
      for (std::size_t i = 1; i <= p; ++i) A2(r, static_cast<Eigen::Index>(i)) = d[t - i];
      for (std::size_t j = 1; j <= q; ++j) A2(r, static_cast<Eigen::Index>(p + j)) = ehat[s][t - j];
      b2(r) = d[t];
    }
  }
  const Eigen::VectorXd beta2 = A2.completeOrthogonalDecomposition().solve(b2);
  m.c = beta2(0);
  m.phi = beta2.segment(1, static_cast<Eigen::Index>(p));
  m.theta = beta2.segment(static_cast<Eigen::Index>(1 + p), static_cast<Eigen::Index>(q));

  // Divergence check: the MA part must be invertible and the filtered
  // residuals must stay on the scale of the long-AR residuals.
  const double scale = std::sqrt(resid1.squaredNorm() / static_cast<double>(resid1.size()));
  std::vector<double> all;
  bool ok = beta2.allFinite() && invertible(m.theta);
  for (const auto& d : diffs) {
    if (!ok) break;
    for (double e : filter(m, d)) {
      if (!std::isfinite(e)) ok = false;
      all.push_back(e);
    }
  }
  m.residual_sd = sd(all);
  if (!ok || !std::isfinite(m.residual_sd) || m.residual_sd > 10.0 * scale + 1e-12) {
    m.persistence = true;
    m.c = 0.0;
    m.phi.setZero();
    m.theta.setZero();
  }
  return m;
}

double arma_forecast(const ArmaModel& model, std::span<const double> history, std::size_t lookahead) {
  if (history.empty()) throw InsufficientData("ARMA forecast needs at least one observation");
  if (lookahead < 1) throw ConfigError("ARMA lookahead must be >= 1");
  const double last = history.back();
  if (model.persistence) return last;

  std::vector<double> d;
  for (std::size_t i = 1; i < history.size(); ++i) d.push_back(history[i] - history[i - 1]);
  std::vector<double> e = filter(model, d);
  double level = last;
  for (std::size_t h = 0; h < lookahead; ++h) {
    const std::size_t t = d.size();
    double next = model.c;
    for (std::size_t i = 1; i <= model.p && i <= t; ++i) next += model.phi(static_cast<Eigen::Index>(i - 1)) * d[t - i];
    for (std::size_t j = 1; j <= model.q && j <= t; ++j) next += model.theta(static_cast<Eigen::Index>(j - 1)) * e[t - j];
    d.push_back(next);
    e.push_back(0.0);
    level += next;
  }
  return level;
}

}  // namespace edgemind::forecast
