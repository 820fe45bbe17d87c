#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "conewalk/spectral.hpp"
#include "conewalk/type_system.hpp"

namespace conewalk {

/// Transition matrices of the quasi-transitive walk on Z x T: forward steps
/// follow the successor counts, backward steps randomize the predecessor
/// choice with the asymptotic type frequencies.
struct QuasiTransitiveWalk {
  std::int64_t type_count = 0;
  std::int64_t degree = 0;
  double growth = 0.0;
  std::vector<SparseEntry> p_plus;  // (i,j): M_ij / degree
  std::vector<SparseEntry> p_minus; // (i,j): growth^-1 A_i M_ji / (A_j degree)
};

/// Builds the walk and asserts column stochasticity, which encodes the
/// eigenvector identity sum_i M_ji A_i = p_j growth A_j.
inline QuasiTransitiveWalk build_y_walk(const TypeSystem& ts, const GrowthData& gd,
                                        double tol = 1e-12) {
  QuasiTransitiveWalk w;
  w.type_count = ts.type_count;
  w.degree = ts.degree;
  w.growth = gd.growth;
  const double inv_deg = 1.0 / static_cast<double>(ts.degree);
  const double inv_growth = 1.0 / gd.growth;
  const auto& a = gd.eigenvector;
  w.p_plus.reserve(ts.successors.size());
  w.p_minus.reserve(ts.successors.size());
  for (const Triplet& t : ts.successors) {
    w.p_plus.push_back({t.row, t.col, static_cast<double>(t.count) * inv_deg});
    // M_ji with j = t.row, i = t.col feeds the backward move (row=i, col=j)
    w.p_minus.push_back({t.col, t.row,
                         inv_growth * a[static_cast<std::size_t>(t.col)] *
                             static_cast<double>(t.count) * inv_deg /
                             a[static_cast<std::size_t>(t.row)]});
  }
  std::sort(w.p_minus.begin(), w.p_minus.end(), [](const SparseEntry& x, const SparseEntry& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });

  std::vector<double> sums(static_cast<std::size_t>(ts.type_count), 0.0);
  for (const SparseEntry& e : w.p_plus) sums[static_cast<std::size_t>(e.col)] += e.value;
  for (const SparseEntry& e : w.p_minus) sums[static_cast<std::size_t>(e.col)] += e.value;
  for (std::int64_t j = 0; j < ts.type_count; ++j) {
    const double deficit = sums[static_cast<std::size_t>(j)] - 1.0;
    if (std::abs(deficit) > tol) throw StochasticityViolation(j, deficit);
  }
  return w;
}

/// Perron value of the nonnegative matrix e^c P+ + e^-c P- by power
/// iteration from the uniform positive vector.
inline double phi(const QuasiTransitiveWalk& w, double c, double tol = 1e-13) {
  const auto n = static_cast<std::size_t>(w.type_count);
  const double fwd = std::exp(c), bwd = std::exp(-c);
  std::vector<std::int32_t> rows, cols;
  std::vector<double> vals;
  rows.reserve(w.p_plus.size() + w.p_minus.size());
  cols.reserve(rows.capacity());
  vals.reserve(rows.capacity());
  for (const SparseEntry& e : w.p_plus) {
    rows.push_back(e.row);
    cols.push_back(e.col);
    vals.push_back(fwd * e.value);
  }
  for (const SparseEntry& e : w.p_minus) {
    rows.push_back(e.row);
    cols.push_back(e.col);
    vals.push_back(bwd * e.value);
  }

  std::vector<double> u(n, 1.0 / static_cast<double>(n)), v(n);
  double lam_prev = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t iter = 1; iter <= kIterationBudget; ++iter) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t k = 0; k < vals.size(); ++k)
      v[static_cast<std::size_t>(rows[k])] += vals[k] * u[static_cast<std::size_t>(cols[k])];
    const double lam = detail::pairwise_sum(v.data(), n);
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(v[i] - lam * u[i]));
    if (std::abs(lam - lam_prev) <= tol * lam && resid <= tol * lam) return lam;
    lam_prev = lam;
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / lam;
  }
  throw NoConvergence(kIterationBudget);
}

struct GeometricVerification {
  double phi_min = 0.0;       // phi(-v/2)
  double bound = 0.0;         // estimator bound being checked
  double bound_defect = 0.0;  // |phi(-v/2) - bound|
  double symmetry_defect = 0.0;
  double convexity_defect = 0.0;
  double bound_tol = 1e-9;
  double symmetry_tol = 1e-10;
  double convexity_tol = 1e-10;
  bool bound_ok = false;
  bool symmetry_ok = false;
  bool convexity_ok = false;

  bool passed() const { return bound_ok && symmetry_ok && convexity_ok; }
};

/// End-to-end cross-check of the estimator: the walk's spectral radius
/// phi(-v/2) must match the bound, phi must be symmetric around -v/2, and phi
/// must be midpoint convex.  Failures are recorded, not thrown.
inline GeometricVerification verify_geometric(const TypeSystem& ts, const GrowthData& gd,
                                              const EstimateReport& report) {
  const QuasiTransitiveWalk walk = build_y_walk(ts, gd);
  const double v = std::log(gd.growth);
  const double center = -v / 2.0;

  GeometricVerification rec;
  rec.bound = report.bound;
  rec.phi_min = phi(walk, center);
  rec.bound_defect = std::abs(rec.phi_min - report.bound);

  constexpr int kGrid = 7;
  double grid_c[kGrid], grid_phi[kGrid];
  for (int k = 0; k < kGrid; ++k) {
    grid_c[k] = center + (k - kGrid / 2) * v / 4.0;
    grid_phi[k] = phi(walk, grid_c[k]);
  }
  // the grid is symmetric around -v/2, so phi(c) = phi(-c-v) pairs k with 6-k
  for (int k = 0; k < kGrid; ++k)
    rec.symmetry_defect = std::max(rec.symmetry_defect,
                                   std::abs(grid_phi[k] - grid_phi[kGrid - 1 - k]));
  for (int k = 0; k + 1 < kGrid; ++k) {
    const double mid = phi(walk, 0.5 * (grid_c[k] + grid_c[k + 1]));
    rec.convexity_defect =
        std::max(rec.convexity_defect, mid - 0.5 * (grid_phi[k] + grid_phi[k + 1]));
  }
  rec.convexity_defect = std::max(rec.convexity_defect, 0.0);

  rec.bound_ok = rec.bound_defect <= rec.bound_tol;
  rec.symmetry_ok = rec.symmetry_defect <= rec.symmetry_tol;
  rec.convexity_ok = rec.convexity_defect <= rec.convexity_tol;
  return rec;
}

/// Exact dynamic programming for the probability of returning to the start
/// state (level 0, type 0) after the given even number of steps.
inline double return_probability(const QuasiTransitiveWalk& w, std::int64_t steps) {
  if (steps == 0) return 1.0;
  if (steps < 0 || steps % 2 != 0) throw ConfigError("steps must be even and >= 0");
  const auto t = static_cast<std::size_t>(w.type_count);
  const std::size_t width = static_cast<std::size_t>(2 * steps + 1);
  const std::size_t offset = static_cast<std::size_t>(steps);
  std::vector<double> cur(width * t, 0.0), nxt(width * t);
  cur[offset * t] = 1.0;
  for (std::int64_t s = 0; s < steps; ++s) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::size_t level = 0; level < width; ++level) {
      const double* src = cur.data() + level * t;
      if (level + 1 < width) {
        double* up = nxt.data() + (level + 1) * t;
        for (const SparseEntry& e : w.p_plus)
          up[static_cast<std::size_t>(e.row)] += e.value * src[static_cast<std::size_t>(e.col)];
      }
      if (level > 0) {
        double* down = nxt.data() + (level - 1) * t;
        for (const SparseEntry& e : w.p_minus)
          down[static_cast<std::size_t>(e.row)] += e.value * src[static_cast<std::size_t>(e.col)];
      }
    }
    std::swap(cur, nxt);
  }
  return cur[offset * t];
}

} // namespace conewalk
