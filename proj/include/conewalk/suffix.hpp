#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "conewalk/spectral.hpp"
#include "conewalk/type_system.hpp"

namespace conewalk {

/// Stopping rule for word truncation: a word stops at the first letter with
/// several predecessors, or once the cumulative weight exceeds the threshold,
/// or at max_length letters.  All-zero weights degenerate to pure length
/// truncation.
struct TruncationRule {
  std::vector<double> weights; // one per base type; empty means all zero
  double threshold = 0.0;
  std::int64_t max_length = 10000;
};

struct EnumerationLimits {
  std::int64_t max_words = std::int64_t{1} << 31;
  std::int64_t memory_budget_bytes = std::int64_t{12} * 1024 * 1024 * 1024;
};

/// Flat arena of enumerated words over a byte alphabet, in emission order.
struct WordList {
  std::vector<std::uint8_t> pool;
  std::vector<std::int64_t> offsets{0};

  std::int64_t count() const { return static_cast<std::int64_t>(offsets.size()) - 1; }

  std::span<const std::uint8_t> word(std::int64_t i) const {
    const auto b = static_cast<std::size_t>(offsets[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(offsets[static_cast<std::size_t>(i) + 1]);
    return {pool.data() + b, e - b};
  }

  void push(const std::uint8_t* letters, std::size_t len) {
    pool.insert(pool.end(), letters, letters + len);
    offsets.push_back(static_cast<std::int64_t>(pool.size()));
  }

  std::int64_t max_word_length() const {
    std::int64_t best = 0;
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i)
      best = std::max(best, offsets[i + 1] - offsets[i]);
    return best;
  }

  std::int64_t footprint_bytes() const {
    return static_cast<std::int64_t>(pool.capacity() + offsets.capacity() * sizeof(std::int64_t));
  }
};

namespace detail {

inline std::string render_word(std::span<const std::uint8_t> w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(static_cast<int>(w[i]));
  }
  return s;
}

/// Open-addressing index from word bytes to position in a WordList.
struct WordIndex {
  const WordList* words = nullptr;
  std::vector<std::uint32_t> slots; // stored index + 1, 0 = empty
  std::uint64_t mask = 0;

  static std::uint64_t hash(const std::uint8_t* p, std::size_t n) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
    return h;
  }

  explicit WordIndex(const WordList& w) : words(&w) {
    std::size_t cap = 16;
    while (cap < static_cast<std::size_t>(w.count()) * 2) cap <<= 1;
    slots.assign(cap, 0);
    mask = cap - 1;
    for (std::int64_t i = 0; i < w.count(); ++i) {
      const auto sp = w.word(i);
      std::uint64_t pos = hash(sp.data(), sp.size()) & mask;
      while (slots[pos]) pos = (pos + 1) & mask;
      slots[pos] = static_cast<std::uint32_t>(i) + 1;
    }
  }

  std::int64_t find(const std::uint8_t* p, std::size_t n) const {
    std::uint64_t pos = hash(p, n) & mask;
    while (slots[pos]) {
      const std::int64_t idx = static_cast<std::int64_t>(slots[pos]) - 1;
      const auto sp = words->word(idx);
      if (sp.size() == n && std::memcmp(sp.data(), p, n) == 0) return idx;
      pos = (pos + 1) & mask;
    }
    return -1;
  }
};

/// One fixed-length generation of the breadth-first pool.
struct Generation {
  std::int64_t length = 0;
  std::vector<std::uint8_t> letters; // length bytes per entry
  std::vector<double> weights;
  std::vector<std::uint8_t> trailing; // ambiguous-run counters (essential only)

  std::int64_t count() const { return static_cast<std::int64_t>(weights.size()); }
  const std::uint8_t* entry(std::int64_t i) const {
    return letters.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(length);
  }
  std::int64_t footprint_bytes() const {
    return static_cast<std::int64_t>(letters.capacity() + weights.capacity() * sizeof(double) +
                                     trailing.capacity());
  }
};

inline void check_limits(const WordList& result, const Generation& gen,
                         const EnumerationLimits& limits) {
  const std::int64_t total_words = result.count() + gen.count();
  if (total_words > limits.max_words) throw PoolOverflow(limits.max_words);
  const std::int64_t bytes = result.footprint_bytes() + gen.footprint_bytes();
  if (bytes > limits.memory_budget_bytes)
    throw MemoryBudgetExceeded(bytes, limits.memory_budget_bytes);
}

/// Per-row lists of admissible next letters: next_letters[a] holds every i
/// with M[a, i] > 0 (a is a successor type of i).
inline std::vector<std::vector<std::uint8_t>> next_letter_table(const TypeSystem& base) {
  std::vector<std::vector<std::uint8_t>> table(static_cast<std::size_t>(base.type_count));
  for (const Triplet& t : base.successors)
    table[static_cast<std::size_t>(t.row)].push_back(static_cast<std::uint8_t>(t.col));
  for (auto& row : table) std::sort(row.begin(), row.end());
  return table;
}

/// Column-major view: successor_rows[c] holds (row, count) pairs of column c.
inline std::vector<std::vector<std::pair<std::uint8_t, std::int64_t>>>
successor_row_table(const TypeSystem& base) {
  std::vector<std::vector<std::pair<std::uint8_t, std::int64_t>>> table(
      static_cast<std::size_t>(base.type_count));
  for (const Triplet& t : base.successors)
    table[static_cast<std::size_t>(t.col)].push_back(
        {static_cast<std::uint8_t>(t.row), t.count});
  return table;
}

inline std::vector<double> rule_weights(const TruncationRule& rule, std::int64_t alphabet) {
  if (rule.max_length < 1) throw ConfigError("max_length must be >= 1");
  if (rule.weights.empty()) return std::vector<double>(static_cast<std::size_t>(alphabet), 0.0);
  if (static_cast<std::int64_t>(rule.weights.size()) != alphabet)
    throw ConfigError("weights length " + std::to_string(rule.weights.size()) +
                      " does not match alphabet size " + std::to_string(alphabet));
  for (double w : rule.weights)
    if (w < 0) throw ConfigError("weights must be nonnegative");
  return rule.weights;
}

} // namespace detail

/// Shortest stopped prefix of `letters`: scan from position 0, stop at the
/// first letter with more than one predecessor, or once the accumulated
/// weight exceeds the threshold, or after max_length letters.
inline std::vector<std::uint8_t> truncate_word(std::span<const std::uint8_t> letters,
                                               const TruncationRule& rule,
                                               const TypeSystem& base) {
  const auto weights = detail::rule_weights(rule, base.type_count);
  const auto preds = predecessors(base).counts;
  const std::size_t limit =
      std::min(letters.size(), static_cast<std::size_t>(rule.max_length));
  double total = 0.0;
  std::size_t end = limit;
  for (std::size_t i = 0; i < limit; ++i) {
    if (preds[letters[i]] > 1) {
      end = i + 1;
      break;
    }
    total += weights[letters[i]];
    if (total > rule.threshold) {
      end = i + 1;
      break;
    }
  }
  return {letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(end)};
}

/// Breadth-first pool construction of all stopped words over the base
/// system: seed with every length-1 word, extend each non-stopped word by
/// every admissible next-ancestor letter, emit stopped words.  Output order
/// is by generation, then lexicographic within a generation.
inline WordList enumerate_types(const TypeSystem& base, const TruncationRule& rule,
                                const EnumerationLimits& limits = {}) {
  const auto weights = detail::rule_weights(rule, base.type_count);
  const auto preds = predecessors(base).counts;
  const auto next_letters = detail::next_letter_table(base);

  WordList result;
  detail::Generation gen;
  gen.length = 1;
  for (std::int64_t i = 0; i < base.type_count; ++i) {
    gen.letters.push_back(static_cast<std::uint8_t>(i));
    gen.weights.push_back(weights[static_cast<std::size_t>(i)]);
  }

  while (gen.length < rule.max_length && gen.count() > 0) {
    detail::Generation next;
    next.length = gen.length + 1;
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(next.length));
    for (std::int64_t e = 0; e < gen.count(); ++e) {
      const std::uint8_t* w = gen.entry(e);
      const double wt = gen.weights[static_cast<std::size_t>(e)];
      const std::uint8_t last = w[gen.length - 1];
      if (wt <= rule.threshold && preds[last] <= 1) {
        std::memcpy(buf.data(), w, static_cast<std::size_t>(gen.length));
        for (const std::uint8_t i : next_letters[last]) {
          buf[static_cast<std::size_t>(gen.length)] = i;
          next.letters.insert(next.letters.end(), buf.begin(), buf.end());
          next.weights.push_back(wt + weights[i]);
        }
      } else {
        result.push(w, static_cast<std::size_t>(gen.length));
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

/// Transition counts between stopped words: the successor of `orig` under a
/// base letter `a` admissible from orig[0] is truncate((a) ++ orig), with
/// count M_base[a, orig[0]].
inline TypeSystem transition_matrix(const WordList& words, const TypeSystem& base,
                                    const TruncationRule& rule,
                                    const EnumerationLimits& limits = {}) {
  const auto columns = detail::successor_row_table(base);
  // predicted footprint, refused before any large allocation
  std::int64_t predicted = 0;
  for (std::int64_t j = 0; j < words.count(); ++j)
    predicted += static_cast<std::int64_t>(columns[words.word(j).front()].size());
  predicted *= static_cast<std::int64_t>(sizeof(Triplet));
  if (predicted > limits.memory_budget_bytes)
    throw MemoryBudgetExceeded(predicted, limits.memory_budget_bytes);

  const auto weights = detail::rule_weights(rule, base.type_count);
  const auto preds = predecessors(base).counts;
  const auto trunc_len = [&](const std::uint8_t* t, std::size_t n) -> std::size_t {
    const std::size_t limit = std::min(n, static_cast<std::size_t>(rule.max_length));
    double total = 0.0;
    for (std::size_t i = 0; i < limit; ++i) {
      if (preds[t[i]] > 1) return i + 1;
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
      const std::size_t len = trunc_len(buf.data(), orig.size() + 1);
      const std::int64_t idx = index.find(buf.data(), len);
      if (idx < 0) throw UnknownWord(detail::render_word({buf.data(), len}));
      col_entries.push_back({idx, m});
    }
    std::sort(col_entries.begin(), col_entries.end());
    for (const auto& [row, m] : col_entries)
      out.successors.push_back({static_cast<std::int32_t>(row), static_cast<std::int32_t>(j), m});
  }
  return out;
}

/// Closed-form eigenvector of the extended system: the entry of a word
/// (i_0, ..., i_m) is A0[i_m] * growth^(-m) * prod of the base counts along
/// the word, renormalized to unit 1-norm.  The growth is unchanged by the
/// refinement.  The residual against the extended system is verified to pass
/// the eigen tolerance before returning.
inline GrowthData closed_form_A(const WordList& words, const TypeSystem& base,
                                const GrowthData& base_gd, const TypeSystem& extended,
                                double tol = 1e-12) {
  const auto types = static_cast<std::size_t>(base.type_count);
  std::vector<double> dense(types * types, 0.0);
  for (const Triplet& t : base.successors)
    dense[static_cast<std::size_t>(t.row) * types + static_cast<std::size_t>(t.col)] =
        static_cast<double>(t.count);

  const std::int64_t max_len = words.max_word_length();
  // decay[j][k] = A0[j] * growth^(-k), built by repeated division
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
    double prod = 1.0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) prod *= dense[w[l] * types + w[l + 1]];
    a[static_cast<std::size_t>(i)] =
        prod *
        decay[w.back() * static_cast<std::size_t>(max_len) + (w.size() - 1)];
  }
  const double total = detail::pairwise_sum(a.data(), a.size());
  for (double& x : a) x /= total;

  GrowthData gd;
  gd.growth = base_gd.growth;
  gd.eigenvector = std::move(a);
  gd.iterations = 0;
  gd.residual = tilde_residual_inf(extended, gd.eigenvector, gd.growth);
  if (gd.residual > tol * gd.growth)
    throw Error("closed-form eigenvector residual " + std::to_string(gd.residual) +
                " exceeds tolerance; truncation rule is not closed");
  return gd;
}

} // namespace conewalk
