#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "conewalk/type_system.hpp"

namespace conewalk {

inline constexpr double kGrowthTolDefault = 1e-13; // relative sup-norm residual
inline constexpr double kLambdaTolDefault = 1e-14; // successive norm difference
inline constexpr std::int64_t kIterationBudget = 1'000'000;

/// Dominating eigenvalue and 1-normalized positive eigenvector of the
/// row-rescaled successor matrix.
struct GrowthData {
  double growth = 0.0;
  std::vector<double> eigenvector;
  double residual = 0.0; // sup norm of (M~ A - growth A)
  std::int64_t iterations = 0;
};

struct ExpansionResult {
  double lambda = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

struct EstimateReport {
  double bound = 0.0;
  double lambda = 0.0;
  double growth = 0.0;
  std::int64_t matrix_size = 0;
  std::int64_t power_iterations = 0;
  double tolerance_used = 0.0;
  double elapsed_seconds = 0.0;
  bool lambda_converged = true;
};

using TraceSink = std::function<void(std::int64_t iteration, double norm)>;

namespace detail {

inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum_sq(const double* x, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_sq(x, half) + pairwise_sum_sq(x + half, n - half);
}

} // namespace detail

/// Applies the row-rescaled matrix to `x` with compensated accumulation and
/// returns the sup norm of (M~ x - growth x).  Shared by the power-iteration
/// and closed-form eigenvector paths.
inline double tilde_residual_inf(const TypeSystem& ts, std::span<const double> x, double growth) {
  const auto n = static_cast<std::size_t>(ts.type_count);
  const auto p = predecessors(ts).counts;
  std::vector<double> acc(n, 0.0), comp(n, 0.0);
  for (const Triplet& t : ts.successors) {
    const auto r = static_cast<std::size_t>(t.row);
    const double term =
        static_cast<double>(t.count) / static_cast<double>(p[r]) * x[static_cast<std::size_t>(t.col)];
    const double y = term - comp[r];
    const double s = acc[r] + y;
    comp[r] = (s - acc[r]) - y;
    acc[r] = s;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(acc[i] - growth * x[i]));
  return worst;
}

/// Power iteration on the row-rescaled matrix from the uniform positive
/// vector, renormalizing in 1-norm each step.  Converges when the eigenvalue
/// estimate is stationary and every component satisfies the residual bound
/// relative to its own size, so small entries are as accurate as large ones.
inline GrowthData growth_and_eigenvector(const TypeSystem& ts, double tol = kGrowthTolDefault) {
  const auto n = static_cast<std::size_t>(ts.type_count);
  const auto p = predecessors(ts).counts;
  std::vector<std::int32_t> rows, cols;
  std::vector<double> vals;
  rows.reserve(ts.successors.size());
  cols.reserve(ts.successors.size());
  vals.reserve(ts.successors.size());
  for (const Triplet& t : ts.successors) {
    rows.push_back(t.row);
    cols.push_back(t.col);
    vals.push_back(static_cast<double>(t.count) /
                   static_cast<double>(p[static_cast<std::size_t>(t.row)]));
  }

  std::vector<double> u(n, 1.0 / static_cast<double>(n)), v(n);
  double lam_prev = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t iter = 1; iter <= kIterationBudget; ++iter) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t k = 0; k < vals.size(); ++k)
      v[static_cast<std::size_t>(rows[k])] += vals[k] * u[static_cast<std::size_t>(cols[k])];
    const double lam = detail::pairwise_sum(v.data(), n);
    double resid_abs = 0.0, resid_rel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(v[i] - lam * u[i]);
      resid_abs = std::max(resid_abs, d);
      resid_rel = std::max(resid_rel, d / (lam * u[i]));
    }
    if (std::abs(lam - lam_prev) <= tol * lam && resid_rel <= tol) {
      GrowthData gd;
      gd.growth = lam;
      gd.eigenvector = std::move(u);
      gd.residual = resid_abs;
      gd.iterations = iter;
      return gd;
    }
    lam_prev = lam;
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / lam;
  }
  throw NoConvergence(kIterationBudget);
}

/// Largest expansion of the rescaled matrix M'_ij = M_ij sqrt(A_j / A_i) on
/// the unit sphere, i.e. the top eigenvalue of (M' + M'^T)/2.  Iterates the
/// symmetric operator applying M' and its transpose in one pass over the
/// triplets; the norm sequence is non-decreasing, so every intermediate value
/// is already a valid lower bound.
inline ExpansionResult symmetrized_expansion(const TypeSystem& ts, const GrowthData& gd,
                                             double tol = kLambdaTolDefault,
                                             const TraceSink& trace = {}) {
  const auto n = static_cast<std::size_t>(ts.type_count);
  std::vector<double> sqrt_a(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_a[i] = std::sqrt(gd.eigenvector[i]);
  std::vector<std::int32_t> rows, cols;
  std::vector<double> half;
  rows.reserve(ts.successors.size());
  cols.reserve(ts.successors.size());
  half.reserve(ts.successors.size());
  for (const Triplet& t : ts.successors) {
    rows.push_back(t.row);
    cols.push_back(t.col);
    half.push_back(0.5 * static_cast<double>(t.count) * sqrt_a[static_cast<std::size_t>(t.col)] /
                   sqrt_a[static_cast<std::size_t>(t.row)]);
  }

  std::vector<double> u(n, 1.0 / std::sqrt(static_cast<double>(n))), v(n);
  double expansion = 0.0;
  for (std::int64_t iter = 1; iter <= kIterationBudget; ++iter) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t k = 0; k < half.size(); ++k) {
      const auto r = static_cast<std::size_t>(rows[k]);
      const auto c = static_cast<std::size_t>(cols[k]);
      v[r] += half[k] * u[c];
      v[c] += half[k] * u[r];
    }
    const double norm = std::sqrt(detail::pairwise_sum_sq(v.data(), n));
    if (norm < expansion * (1.0 - 64.0 * std::numeric_limits<double>::epsilon()))
      throw Error("expansion norm sequence decreased; input eigenvector is inconsistent");
    const double diff = norm - expansion;
    expansion = norm;
    if (trace) trace(iter, norm);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / norm;
    if (diff < tol) return {expansion, iter, true};
  }
  return {expansion, kIterationBudget, false};
}

/// Certified lower bound 2 * growth^(-1/2) * lambda / degree together with
/// all intermediates.  The bound is monotone in lambda, so a partially
/// converged expansion still yields a valid bound (flagged in the report).
inline EstimateReport estimate(const TypeSystem& ts, const GrowthData* gd = nullptr,
                               double tol = kLambdaTolDefault, const TraceSink& trace = {}) {
  const auto start = std::chrono::steady_clock::now();
  GrowthData local;
  if (!gd) {
    local = growth_and_eigenvector(ts);
    gd = &local;
  }
  const ExpansionResult ex = symmetrized_expansion(ts, *gd, tol, trace);
  EstimateReport report;
  report.lambda = ex.lambda;
  report.growth = gd->growth;
  report.bound = 2.0 * ex.lambda / (std::sqrt(gd->growth) * static_cast<double>(ts.degree));
  report.matrix_size = ts.type_count;
  report.power_iterations = gd->iterations + ex.iterations;
  report.tolerance_used = tol;
  report.lambda_converged = ex.converged;
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

} // namespace conewalk
