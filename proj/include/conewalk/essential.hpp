#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "conewalk/suffix.hpp"
#include "conewalk/surface.hpp"

namespace conewalk {

/// Truncation rule over the modified alphabet plus the ambiguity marker
/// (2g+3 weights).  The marker weight must be maximal among all weights;
/// otherwise replacing letters by markers could lower a word's weight and the
/// stopped set would not be closed under the successor map.
struct EssentialRule {
  std::vector<double> weights;
  double threshold = 0.0;
  std::int64_t max_length = 10000;
};

namespace detail {

inline std::vector<double> essential_weights(const EssentialRule& rule, std::int64_t g) {
  const std::int64_t alphabet = 2 * g + 3;
  if (rule.max_length < 1) throw ConfigError("max_length must be >= 1");
  std::vector<double> w;
  if (rule.weights.empty()) {
    w.assign(static_cast<std::size_t>(alphabet), 0.0);
  } else {
    if (static_cast<std::int64_t>(rule.weights.size()) != alphabet)
      throw ConfigError("essential weights must have 2g+3 entries, got " +
                        std::to_string(rule.weights.size()));
    w = rule.weights;
  }
  for (double x : w)
    if (x < 0) throw ConfigError("weights must be nonnegative");
  for (double x : w)
    if (x > w.back()) throw ConfigError("the ambiguity-marker weight must be maximal");
  return w;
}

} // namespace detail

/// Replaces the letters that are not common to all geodesics by the ambiguity
/// marker: each letter of type 2g hides the following 2g-1 letters, and the
/// run chains for another block when the hidden letter at its end was itself
/// of type 2g, or was 1' directly preceded by 2'.  Tests read the input word,
/// so the function is idempotent on already-marked words.
inline std::vector<std::uint8_t> mark_ambiguous(std::span<const std::uint8_t> word,
                                                std::int64_t g) {
  std::vector<std::uint8_t> marked(word.begin(), word.end());
  const std::size_t len = word.size();
  const auto type_2g = static_cast<std::uint8_t>(2 * g - 1);
  const auto one_prime = static_cast<std::uint8_t>(2 * g);
  const auto two_prime = static_cast<std::uint8_t>(2 * g + 1);
  const auto marker = static_cast<std::uint8_t>(2 * g + 2);
  const std::size_t run = static_cast<std::size_t>(2 * g - 1);

  std::size_t i = 0;
  while (i < len && word[i] != type_2g) ++i;
  while (i < len) {
    for (std::size_t j = i + 1; j <= i + run; ++j) {
      if (j >= len) return marked; // word ends mid-run; partial marks stay
      marked[j] = marker;
    }
    i += run;
    if (word[i] == type_2g || (word[i] == one_prime && word[i - 1] == two_prime)) continue;
    ++i;
    while (i < len && word[i] != type_2g) ++i;
  }
  return marked;
}

/// Pool construction of the stopped essential words: a word ending in type 2g
/// extends only by the marker; a word ending in a marker extends by another
/// marker and, exactly when the trailing run length is a multiple of 2g-1,
/// also by every definite modified type; other words extend by admissible
/// definite letters.  Words whose weight exceeds the threshold (or that reach
/// max_length) are emitted.
inline WordList enumerate_essential(std::int64_t g, const EssentialRule& rule,
                                    const EnumerationLimits& limits = {}) {
  if (g < 2) throw InvalidGenus(g);
  const TypeSystem base = modified_cannon_matrix(g);
  const auto weights = detail::essential_weights(rule, g);
  const auto next_letters = detail::next_letter_table(base);
  const auto type_2g = static_cast<std::uint8_t>(2 * g - 1);
  const auto marker = static_cast<std::uint8_t>(2 * g + 2);
  const std::int64_t definite = 2 * g + 2;

  WordList result;
  detail::Generation gen;
  gen.length = 1;
  for (std::int64_t i = 0; i < definite; ++i) {
    gen.letters.push_back(static_cast<std::uint8_t>(i));
    gen.weights.push_back(weights[static_cast<std::size_t>(i)]);
    gen.trailing.push_back(0);
  }

  while (gen.length < rule.max_length && gen.count() > 0) {
    detail::Generation next;
    next.length = gen.length + 1;
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(next.length));
    const auto push = [&](std::uint8_t letter, double wt, std::uint8_t undet) {
      buf[static_cast<std::size_t>(gen.length)] = letter;
      next.letters.insert(next.letters.end(), buf.begin(), buf.end());
      next.weights.push_back(wt + weights[letter]);
      next.trailing.push_back(undet);
    };
    for (std::int64_t e = 0; e < gen.count(); ++e) {
      const std::uint8_t* w = gen.entry(e);
      const double wt = gen.weights[static_cast<std::size_t>(e)];
      if (wt > rule.threshold) {
        result.push(w, static_cast<std::size_t>(gen.length));
      } else {
        std::memcpy(buf.data(), w, static_cast<std::size_t>(gen.length));
        const std::uint8_t last = w[gen.length - 1];
        if (last == type_2g) {
          push(marker, wt, 1);
        } else if (last != marker) {
          for (const std::uint8_t i : next_letters[last]) push(i, wt, 0);
        } else {
          std::uint8_t undet = gen.trailing[static_cast<std::size_t>(e)] + 1;
          if (undet == 2 * g) {
            // trailing run complete: any definite type may resolve it
            for (std::int64_t i = 0; i < definite; ++i)
              push(static_cast<std::uint8_t>(i), wt, 0);
            undet = 1;
          }
          push(marker, wt, undet);
        }
      }
      if ((e & 0xffff) == 0) detail::check_limits(result, next, limits);
    }
    detail::check_limits(result, next, limits);
    gen = std::move(next);
  }
  for (std::int64_t e = 0; e < gen.count(); ++e)
    result.push(gen.entry(e), static_cast<std::size_t>(gen.length));
  detail::check_limits(result, {}, limits);
  return result;
}

/// Transition counts between stopped essential words: the successor of `orig`
/// under a definite letter `a` admissible from orig[0] is the truncation of
/// mark_ambiguous((a) ++ orig), with count taken from the modified matrix.
inline TypeSystem essential_transition_matrix(const WordList& words, std::int64_t g,
                                              const EssentialRule& rule,
                                              const EnumerationLimits& limits = {}) {
  if (g < 2) throw InvalidGenus(g);
  const TypeSystem base = modified_cannon_matrix(g);
  const auto weights = detail::essential_weights(rule, g);
  const auto columns = detail::successor_row_table(base);

  std::int64_t predicted = 0;
  for (std::int64_t j = 0; j < words.count(); ++j)
    predicted += static_cast<std::int64_t>(columns[words.word(j).front()].size());
  predicted *= static_cast<std::int64_t>(sizeof(Triplet));
  if (predicted > limits.memory_budget_bytes)
    throw MemoryBudgetExceeded(predicted, limits.memory_budget_bytes);

  const auto trunc_len = [&](const std::uint8_t* t, std::size_t n) -> std::size_t {
    const std::size_t limit = std::min(n, static_cast<std::size_t>(rule.max_length));
    double total = 0.0;
    for (std::size_t i = 0; i < limit; ++i) {
      total += weights[t[i]];
      if (total > rule.threshold) return i + 1;
    }
    return limit;
  };

  const detail::WordIndex index(words);
  TypeSystem out;
  out.type_count = words.count();
  out.degree = base.degree;
  out.successors.reserve(static_cast<std::size_t>(predicted / sizeof(Triplet)));
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(words.max_word_length()) + 1);
  std::vector<std::pair<std::int64_t, std::int64_t>> col_entries;
  for (std::int64_t j = 0; j < words.count(); ++j) {
    const auto orig = words.word(j);
    col_entries.clear();
    for (const auto& [a, m] : columns[orig.front()]) {
      buf[0] = a;
      std::memcpy(buf.data() + 1, orig.data(), orig.size());
      const auto marked = mark_ambiguous({buf.data(), orig.size() + 1}, g);
      const std::size_t len = trunc_len(marked.data(), marked.size());
      const std::int64_t idx = index.find(marked.data(), len);
      if (idx < 0) throw UnknownWord(detail::render_word({marked.data(), len}));
      col_entries.push_back({idx, m});
    }
    std::sort(col_entries.begin(), col_entries.end());
    for (const auto& [row, m] : col_entries)
      out.successors.push_back({static_cast<std::int32_t>(row), static_cast<std::int32_t>(j), m});
  }
  return out;
}

/// Closed-form eigenvector with multiplicity factors: definite segments
/// contribute the base counts, an internal ambiguous block of length (2g-1)m
/// resolved by definite type j contributes a_j 2^(m-1) with a_j = 4g-3 when j
/// is 2g-1 or 2g and 4g-2 otherwise, and a trailing block contributes 2^m
/// anchored at the type-2g letter shifted by the complete blocks.
inline GrowthData essential_A(const WordList& words, std::int64_t g, const GrowthData& base_gd,
                              const TypeSystem& extended, double tol = 1e-12) {
  if (g < 2) throw InvalidGenus(g);
  const TypeSystem base = modified_cannon_matrix(g);
  const auto types = static_cast<std::size_t>(base.type_count);
  std::vector<double> dense(types * types, 0.0);
  for (const Triplet& t : base.successors)
    dense[static_cast<std::size_t>(t.row) * types + static_cast<std::size_t>(t.col)] =
        static_cast<double>(t.count);

  const auto marker = static_cast<std::uint8_t>(2 * g + 2);
  const auto type_2g = static_cast<std::uint8_t>(2 * g - 1);
  const auto type_2gm1 = static_cast<std::uint8_t>(2 * g - 2);
  const std::int64_t run = 2 * g - 1;
  const std::int64_t max_len = words.max_word_length();
  std::vector<double> decay(types * static_cast<std::size_t>(max_len));
  for (std::size_t j = 0; j < types; ++j) {
    decay[j * static_cast<std::size_t>(max_len)] = base_gd.eigenvector[j];
    for (std::int64_t k = 1; k < max_len; ++k)
      decay[j * static_cast<std::size_t>(max_len) + static_cast<std::size_t>(k)] =
          decay[j * static_cast<std::size_t>(max_len) + static_cast<std::size_t>(k - 1)] /
          base_gd.growth;
  }

  std::vector<double> a(static_cast<std::size_t>(words.count()));
  for (std::int64_t i = 0; i < words.count(); ++i) {
    const auto w = words.word(i);
    const std::int64_t n = static_cast<std::int64_t>(w.size());
    std::int64_t true_length = n - 1;
    while (w[static_cast<std::size_t>(true_length)] == marker) --true_length;
    double prod = 1.0;
    std::int64_t ambiguous = 0;
    for (std::int64_t j = 0; j < true_length; ++j) {
      const std::uint8_t x = w[static_cast<std::size_t>(j)];
      const std::uint8_t y = w[static_cast<std::size_t>(j + 1)];
      if (x != marker && y != marker) {
        prod *= dense[x * types + y];
      } else if (x == marker && y != marker) {
        prod *= (y != type_2g && y != type_2gm1) ? static_cast<double>(4 * g - 2)
                                                 : static_cast<double>(4 * g - 3);
        ambiguous -= run;
      } else {
        ambiguous += 1;
      }
    }
    if (ambiguous < 0 || ambiguous % run != 0)
      throw Error("malformed essential word: ambiguous run not a multiple of 2g-1");
    prod *= std::ldexp(1.0, static_cast<int>(ambiguous / run));
    const std::uint8_t last = w[static_cast<std::size_t>(true_length)];
    const std::int64_t trailing = n - 1 - true_length;
    const std::int64_t extra = trailing > 0 ? (trailing - 1) / run : 0;
    std::int64_t depth = true_length;
    if (extra > 0) {
      depth += extra * run;
      prod *= std::ldexp(1.0, static_cast<int>(extra));
    }
    a[static_cast<std::size_t>(i)] =
        prod * decay[last * static_cast<std::size_t>(max_len) + static_cast<std::size_t>(depth)];
  }
  const double total = detail::pairwise_sum(a.data(), a.size());
  for (double& x : a) x /= total;

  GrowthData gd;
  gd.growth = base_gd.growth;
  gd.eigenvector = std::move(a);
  gd.iterations = 0;
  gd.residual = tilde_residual_inf(extended, gd.eigenvector, gd.growth);
  if (gd.residual > tol * gd.growth)
    throw Error("essential eigenvector residual " + std::to_string(gd.residual) +
                " exceeds tolerance; rule is not closed");
  return gd;
}

} // namespace conewalk
