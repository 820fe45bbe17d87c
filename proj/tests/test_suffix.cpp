#include <catch2/catch_amalgamated.hpp>

#include <conewalk/spectral.hpp>
#include <conewalk/suffix.hpp>
#include <conewalk/surface.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace conewalk;

namespace {

// Direct restatement of the stopping rule, kept independent of truncate_word.
std::vector<std::uint8_t> truncate_scan_oracle(std::span<const std::uint8_t> letters,
                                               const TruncationRule& rule,
                                               const TypeSystem& base) {
  const auto preds = predecessors(base).counts;
  std::vector<double> w = rule.weights;
  if (w.empty()) w.assign(static_cast<std::size_t>(base.type_count), 0.0);
  double total = 0.0;
  std::vector<std::uint8_t> out;
  for (const std::uint8_t letter : letters) {
    if (static_cast<std::int64_t>(out.size()) == rule.max_length) return out;
    out.push_back(letter);
    if (preds[letter] > 1) return out;
    total += w[letter];
    if (total > rule.threshold) return out;
  }
  return out;
}

TruncationRule length_rule(std::int64_t len) {
  TruncationRule rule;
  rule.max_length = len;
  rule.threshold = 1.0;
  return rule;
}

TruncationRule weight_rule(std::vector<double> weights, double threshold) {
  TruncationRule rule;
  rule.weights = std::move(weights);
  rule.threshold = threshold;
  return rule;
}

} // namespace

TEST_CASE("truncate_word stops at multi-predecessor letters") {
  const auto base = cannon_matrix(2);
  TruncationRule rule = weight_rule({1, 2, 3, 4}, 100.0);
  // type 4 (index 3) has two predecessors: any word starting there is (4)
  const std::vector<std::uint8_t> w = {3, 2, 1, 0};
  CHECK(truncate_word(w, rule, base) == std::vector<std::uint8_t>{3});
}

TEST_CASE("truncate_word stops once the weight exceeds the threshold") {
  const auto base = cannon_matrix(2);
  const TruncationRule rule = weight_rule({1, 2, 3, 4}, 4.0);
  // five type-1 letters weigh 1 each; the fifth pushes past the threshold and
  // is kept as the stopping letter
  const std::vector<std::uint8_t> w = {0, 0, 0, 0, 0, 1};
  const auto got = truncate_word(w, rule, base);
  CHECK(got == std::vector<std::uint8_t>{0, 0, 0, 0, 0});
  CHECK(got == truncate_scan_oracle(w, rule, base));
}

TEST_CASE("truncate_word with max_length 1 keeps the first letter") {
  const auto base = cannon_matrix(2);
  const TruncationRule rule = length_rule(1);
  for (std::uint8_t a : {0, 1, 2, 3}) {
    const std::vector<std::uint8_t> w = {a, 0, 1};
    CHECK(truncate_word(w, rule, base) == std::vector<std::uint8_t>{a});
  }
}

TEST_CASE("truncate_word agrees with the scan oracle on random admissible words") {
  const auto base = cannon_matrix(2);
  const auto next = detail::next_letter_table(base);
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint8_t> w{static_cast<std::uint8_t>(rng() % 4)};
    while (w.size() < 12 && !next[w.back()].empty()) {
      const auto& options = next[w.back()];
      w.push_back(options[rng() % options.size()]);
    }
    TruncationRule rule = weight_rule({1, 2, 3, 4}, static_cast<double>(1 + rng() % 12));
    rule.max_length = 1 + static_cast<std::int64_t>(rng() % 12);
    CHECK(truncate_word(w, rule, base) == truncate_scan_oracle(w, rule, base));
  }
}

TEST_CASE("enumeration sizes match the published runs") {
  const auto base = cannon_matrix(2);
  CHECK(enumerate_types(base, length_rule(1)).count() == 4);
  CHECK(enumerate_types(base, length_rule(3)).count() == 25);
  CHECK(enumerate_types(base, length_rule(5)).count() == 148);
  CHECK(enumerate_types(base, weight_rule({1, 2, 3, 4}, 2)).count() == 13);
  CHECK(enumerate_types(base, weight_rule({1, 2, 3, 4}, 6)).count() == 109);
}

TEST_CASE("enumerated words are distinct, stopped, and admissible") {
  const auto base = cannon_matrix(2);
  const auto rule = weight_rule({1, 2, 3, 4}, 6);
  const auto words = enumerate_types(base, rule);
  const auto preds = predecessors(base).counts;
  const auto dense = oracles::dense_from(base);
  const detail::WordIndex index(words);
  for (std::int64_t i = 0; i < words.count(); ++i) {
    const auto w = words.word(i);
    REQUIRE(index.find(w.data(), w.size()) == i); // distinct
    double weight = 0.0;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      REQUIRE(dense[w[k] * 4 + w[k + 1]] > 0); // admissible adjacency
      REQUIRE(preds[w[k]] == 1);               // interior letters have one predecessor
      weight += rule.weights[w[k]];
      REQUIRE(weight <= rule.threshold); // no proper prefix is stopped
    }
    weight += rule.weights[w.back()];
    const bool stopped = preds[w.back()] > 1 || weight > rule.threshold ||
                         static_cast<std::int64_t>(w.size()) == rule.max_length;
    REQUIRE(stopped);
  }
}

TEST_CASE("max_length 1 reproduces the base system") {
  const auto base = cannon_matrix(2);
  const auto rule = length_rule(1);
  const auto words = enumerate_types(base, rule);
  const auto ext = transition_matrix(words, base, rule);
  CHECK(ext.type_count == base.type_count);
  CHECK(ext.degree == base.degree);
  REQUIRE(ext.successors.size() == base.successors.size());
  for (std::size_t k = 0; k < base.successors.size(); ++k) {
    CHECK(ext.successors[k].row == base.successors[k].row);
    CHECK(ext.successors[k].col == base.successors[k].col);
    CHECK(ext.successors[k].count == base.successors[k].count);
  }
}

TEST_CASE("extended estimates match the published values") {
  const auto base = cannon_matrix(2);
  const auto base_gd = growth_and_eigenvector(base);
  SECTION("pure length 5: 148 types") {
    const auto rule = length_rule(5);
    const auto words = enumerate_types(base, rule);
    const auto ext = transition_matrix(words, base, rule);
    validate(ext);
    const auto gd = closed_form_A(words, base, base_gd, ext);
    CHECK(std::abs(estimate(ext, &gd).bound - 0.662694226446) < 1e-8);
  }
  SECTION("weights (1,2,3,4) threshold 8: 319 types") {
    const auto rule = weight_rule({1, 2, 3, 4}, 8);
    const auto words = enumerate_types(base, rule);
    REQUIRE(words.count() == 319);
    const auto ext = transition_matrix(words, base, rule);
    validate(ext);
    const auto gd = closed_form_A(words, base, base_gd, ext);
    CHECK(std::abs(estimate(ext, &gd).bound - 0.662717774996) < 1e-8);
  }
}

TEST_CASE("closed-form eigenvector") {
  const auto base = cannon_matrix(2);
  const auto base_gd = growth_and_eigenvector(base);
  SECTION("max_length 1 returns the base eigenvector") {
    const auto rule = length_rule(1);
    const auto words = enumerate_types(base, rule);
    const auto ext = transition_matrix(words, base, rule);
    const auto gd = closed_form_A(words, base, base_gd, ext);
    CHECK(gd.growth == base_gd.growth);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(std::abs(gd.eigenvector[i] - base_gd.eigenvector[i]) < 1e-14);
  }
  SECTION("matches power iteration entrywise on the 25-type system") {
    const auto rule = length_rule(3);
    const auto words = enumerate_types(base, rule);
    const auto ext = transition_matrix(words, base, rule);
    const auto closed = closed_form_A(words, base, base_gd, ext);
    const auto power = growth_and_eigenvector(ext, 1e-14);
    REQUIRE(closed.eigenvector.size() == power.eigenvector.size());
    for (std::size_t i = 0; i < closed.eigenvector.size(); ++i)
      CHECK(std::abs(closed.eigenvector[i] - power.eigenvector[i]) <=
            1e-10 * power.eigenvector[i]);
    CHECK(closed.residual <= 1e-12 * closed.growth);
  }
  SECTION("explicit product for the word 1,2,4") {
    const auto rule = length_rule(3);
    const auto words = enumerate_types(base, rule);
    const auto ext = transition_matrix(words, base, rule);
    const auto gd = closed_form_A(words, base, base_gd, ext);
    const detail::WordIndex index(words);
    const std::vector<std::uint8_t> w124 = {0, 1, 3}; // types (1, 2, 4)
    const std::vector<std::uint8_t> w4 = {3};
    const auto i124 = index.find(w124.data(), w124.size());
    const auto i4 = index.find(w4.data(), w4.size());
    REQUIRE(i124 >= 0);
    REQUIRE(i4 >= 0);
    // A(1,2,4) = M[1,2] M[2,4] A0[4] growth^-2 and A(4) = A0[4], so the ratio
    // in the normalized vector is 5 * 2 / growth^2
    const double expected = 5.0 * 2.0 / (base_gd.growth * base_gd.growth);
    const double got = gd.eigenvector[static_cast<std::size_t>(i124)] /
                       gd.eigenvector[static_cast<std::size_t>(i4)];
    CHECK(std::abs(got - expected) < 1e-12 * expected);
  }
}

TEST_CASE("extended predecessor counts equal the base count of the first letter") {
  const auto base = cannon_matrix(2);
  const auto base_p = predecessors(base).counts;
  for (const auto& rule : {length_rule(3), weight_rule({1, 2, 3, 4}, 6)}) {
    const auto words = enumerate_types(base, rule);
    const auto ext = transition_matrix(words, base, rule);
    const auto ext_p = predecessors(ext).counts;
    for (std::int64_t j = 0; j < words.count(); ++j)
      REQUIRE(ext_p[static_cast<std::size_t>(j)] == base_p[words.word(j).front()]);
  }
}

TEST_CASE("refining the rule never lowers the bound") {
  const auto base = cannon_matrix(2);
  const auto base_gd = growth_and_eigenvector(base);
  double prev = 0.0;
  for (std::int64_t len : {1, 3, 5}) {
    const auto rule = length_rule(len);
    const auto words = enumerate_types(base, rule);
    const auto ext = transition_matrix(words, base, rule);
    const auto gd = closed_form_A(words, base, base_gd, ext);
    const double bound = estimate(ext, &gd).bound;
    CHECK(bound >= prev - 1e-12);
    prev = bound;
  }
}

TEST_CASE("length-k truncation equals unit weights with threshold k-1") {
  const auto base = cannon_matrix(2);
  for (std::int64_t k : {2, 4, 6}) {
    const auto rule_len = length_rule(k);
    const auto rule_w = weight_rule({1, 1, 1, 1}, static_cast<double>(k - 1));
    const auto a = enumerate_types(base, rule_len);
    const auto b = enumerate_types(base, rule_w);
    REQUIRE(a.count() == b.count());
    for (std::int64_t i = 0; i < a.count(); ++i) {
      const auto wa = a.word(i), wb = b.word(i);
      REQUIRE(std::vector<std::uint8_t>(wa.begin(), wa.end()) ==
              std::vector<std::uint8_t>(wb.begin(), wb.end()));
    }
    const auto ext_a = transition_matrix(a, base, rule_len);
    const auto ext_b = transition_matrix(b, base, rule_w);
    REQUIRE(ext_a.successors.size() == ext_b.successors.size());
    for (std::size_t t = 0; t < ext_a.successors.size(); ++t)
      REQUIRE(ext_a.successors[t].count == ext_b.successors[t].count);
  }
}

TEST_CASE("word-count limit trips PoolOverflow") {
  EnumerationLimits limits;
  limits.max_words = 10;
  CHECK_THROWS_AS(enumerate_types(cannon_matrix(2), length_rule(5), limits), PoolOverflow);
}

TEST_CASE("memory budget is refused before materializing") {
  EnumerationLimits limits;
  limits.memory_budget_bytes = 512;
  CHECK_THROWS_AS(enumerate_types(cannon_matrix(2), length_rule(7), limits),
                  MemoryBudgetExceeded);
  const auto base = cannon_matrix(2);
  const auto rule = length_rule(5);
  const auto words = enumerate_types(base, rule);
  CHECK_THROWS_AS(transition_matrix(words, base, rule, limits), MemoryBudgetExceeded);
}

TEST_CASE("a rule that is not closed under successors raises UnknownWord") {
  const auto base = cannon_matrix(2);
  const auto words = enumerate_types(base, length_rule(3));
  TruncationRule other = length_rule(4);
  CHECK_THROWS_AS(transition_matrix(words, base, other), UnknownWord);
}

TEST_CASE("mismatched weights length is a config error") {
  TruncationRule rule;
  rule.weights = {1, 2, 3};
  rule.threshold = 4;
  CHECK_THROWS_AS(enumerate_types(cannon_matrix(2), rule), ConfigError);
}
