#include <catch2/catch_amalgamated.hpp>

#include <conewalk/geometric.hpp>
#include <conewalk/suffix.hpp>
#include <conewalk/surface.hpp>

#include <cmath>

using namespace conewalk;

namespace {

TypeSystem free_group(std::int64_t d) {
  TypeSystem ts;
  ts.type_count = 1;
  ts.degree = 2 * d;
  ts.successors = {{0, 0, 2 * d - 1}};
  return ts;
}

} // namespace

TEST_CASE("free-group walk transition probabilities") {
  const auto ts = free_group(2);
  const auto gd = growth_and_eigenvector(ts);
  const auto walk = build_y_walk(ts, gd);
  REQUIRE(walk.p_plus.size() == 1);
  REQUIRE(walk.p_minus.size() == 1);
  CHECK(std::abs(walk.p_plus[0].value - 3.0 / 4.0) < 1e-15);
  CHECK(std::abs(walk.p_minus[0].value - 1.0 / 4.0) < 1e-13);
}

TEST_CASE("column stochasticity of the combined transitions") {
  for (const auto& ts : {cannon_matrix(2), cannon_matrix(3), modified_cannon_matrix(2)}) {
    const auto gd = growth_and_eigenvector(ts);
    const auto walk = build_y_walk(ts, gd); // throws on violation
    std::vector<double> sums(static_cast<std::size_t>(ts.type_count), 0.0);
    for (const auto& e : walk.p_plus) sums[static_cast<std::size_t>(e.col)] += e.value;
    for (const auto& e : walk.p_minus) sums[static_cast<std::size_t>(e.col)] += e.value;
    for (double s : sums) CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("a corrupted eigenvector is flagged as a stochasticity violation") {
  const auto ts = cannon_matrix(2);
  auto gd = growth_and_eigenvector(ts);
  gd.eigenvector[2] *= 1.5;
  CHECK_THROWS_AS(build_y_walk(ts, gd), StochasticityViolation);
}

TEST_CASE("backward probabilities are the limit of the sphere ratios") {
  // s_{n-1}(i) M_ji / s_n(j) converges to the stored backward entry
  const auto ts = cannon_matrix(2);
  const auto gd = growth_and_eigenvector(ts);
  const auto walk = build_y_walk(ts, gd);
  const auto tilde = tilde_matrix(ts);
  std::vector<double> s(static_cast<std::size_t>(ts.type_count), 1.0), next(s.size());
  for (int n = 0; n < 80; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& e : tilde)
      next[static_cast<std::size_t>(e.row)] += e.value * s[static_cast<std::size_t>(e.col)];
    double total = 0.0;
    for (double x : next) total += x;
    for (double& x : next) x /= total; // keep the iteration in range
    s.swap(next);
  }
  // one more unnormalized step gives s_n from s_{n-1}
  std::fill(next.begin(), next.end(), 0.0);
  for (const auto& e : tilde)
    next[static_cast<std::size_t>(e.row)] += e.value * s[static_cast<std::size_t>(e.col)];
  const auto dense_counts = [&](std::int32_t row, std::int32_t col) {
    for (const auto& t : ts.successors)
      if (t.row == row && t.col == col) return static_cast<double>(t.count);
    return 0.0;
  };
  for (const auto& e : walk.p_minus) {
    // e is the move from type j=e.col down to type i=e.row
    const double ratio = s[static_cast<std::size_t>(e.row)] * dense_counts(e.col, e.row) /
                         next[static_cast<std::size_t>(e.col)] /
                         static_cast<double>(ts.degree);
    CHECK(std::abs(ratio - e.value) < 1e-9);
  }
}

TEST_CASE("phi on the free group") {
  const auto ts = free_group(3);
  const auto gd = growth_and_eigenvector(ts);
  const auto walk = build_y_walk(ts, gd);
  const double v = std::log(gd.growth);
  const double expected = std::sqrt(5.0) / 3.0;
  CHECK(std::abs(phi(walk, -v / 2) - expected) < 1e-12 * expected);
  CHECK(phi(walk, -v / 2 + 0.1) > phi(walk, -v / 2));
  CHECK(phi(walk, -v / 2 - 0.1) > phi(walk, -v / 2));
}

TEST_CASE("phi at the symmetry center reproduces the genus-2 bound") {
  const auto ts = cannon_matrix(2);
  const auto gd = growth_and_eigenvector(ts);
  const auto walk = build_y_walk(ts, gd);
  const double v = std::log(gd.growth);
  CHECK(std::abs(phi(walk, -v / 2) - 0.662477976598) < 1e-9);
}

TEST_CASE("phi is symmetric around -v/2") {
  const auto ts = cannon_matrix(2);
  const auto gd = growth_and_eigenvector(ts);
  const auto walk = build_y_walk(ts, gd);
  const double v = std::log(gd.growth);
  for (double c : {0.0, -0.5, -1.0})
    CHECK(std::abs(phi(walk, c) - phi(walk, -c - v)) < 1e-10);
}

TEST_CASE("full geometric verification passes on the base systems") {
  for (const auto& ts : {cannon_matrix(2), cannon_matrix(3), modified_cannon_matrix(2)}) {
    const auto gd = growth_and_eigenvector(ts);
    const auto report = estimate(ts, &gd);
    const auto rec = verify_geometric(ts, gd, report);
    INFO("bound defect " << rec.bound_defect << " symmetry " << rec.symmetry_defect
                         << " convexity " << rec.convexity_defect);
    CHECK(rec.bound_ok);
    CHECK(rec.symmetry_ok);
    CHECK(rec.convexity_ok);
    CHECK(rec.passed());
  }
}

TEST_CASE("suffix 25-type system: phi matches the published estimate") {
  const auto base = cannon_matrix(2);
  TruncationRule rule;
  rule.max_length = 3;
  rule.threshold = 1.0;
  const auto words = enumerate_types(base, rule);
  const auto ext = transition_matrix(words, base, rule);
  const auto base_gd = growth_and_eigenvector(base);
  const auto gd = closed_form_A(words, base, base_gd, ext);
  const auto walk = build_y_walk(ext, gd);
  const double v = std::log(gd.growth);
  CHECK(std::abs(phi(walk, -v / 2) - 0.6626394462) < 1e-9);
}

TEST_CASE("return probability conventions and the two-step oracle") {
  const auto ts = free_group(2);
  const auto gd = growth_and_eigenvector(ts);
  const auto walk = build_y_walk(ts, gd);
  CHECK(return_probability(walk, 0) == 1.0);
  CHECK_THROWS_AS(return_probability(walk, 3), ConfigError);
  // hand enumeration of the two-step paths: up then down, or down then up
  const double up = walk.p_plus[0].value, down = walk.p_minus[0].value;
  const double oracle = up * down + down * up;
  CHECK(std::abs(return_probability(walk, 2) - oracle) < 1e-15);
}

TEST_CASE("return probabilities stay under the walk's spectral radius") {
  for (std::int64_t g : {2, 3, 4}) {
    const auto ts = cannon_matrix(g);
    const auto gd = growth_and_eigenvector(ts);
    const auto walk = build_y_walk(ts, gd);
    const double rho_y = phi(walk, -std::log(gd.growth) / 2);
    double prev = 0.0;
    for (std::int64_t n : {5, 10, 25, 50}) {
      const double p = return_probability(walk, 2 * n);
      const double root = std::pow(p, 1.0 / static_cast<double>(2 * n));
      CHECK(root <= rho_y + 1e-12);
      CHECK(root >= prev - 1e-12); // the normalized returns approach from below
      prev = root;
    }
  }
}
