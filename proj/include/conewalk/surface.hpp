#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conewalk/type_system.hpp"

namespace conewalk {

enum class SurfaceKind { canonical, modified };

/// Index conventions for the genus-g surface group alphabets.
/// canonical: index i-1 <-> type i for i in 1..2g.
/// modified:  additionally index 2g <-> type 1', index 2g+1 <-> type 2', and
/// the reserved ambiguity marker at index 2g+2 (used only by the essential
/// builder; it is never a column of the modified matrix).
struct SurfaceAlphabet {
  std::int64_t genus;
  SurfaceKind kind;

  std::int64_t size() const { return kind == SurfaceKind::canonical ? 2 * genus : 2 * genus + 2; }
  std::int64_t marker_index() const { return 2 * genus + 2; }

  std::string label(std::int64_t index) const {
    if (index < 2 * genus) return std::to_string(index + 1);
    if (index == 2 * genus) return "1'";
    if (index == 2 * genus + 1) return "2'";
    return "*";
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (std::int64_t i = 0; i < size(); ++i) out.push_back(label(i));
    return out;
  }
};

namespace detail {

/// Emits the triplets of a dense column-major accumulation in (col, row)
/// order, skipping zeros.
inline std::vector<Triplet> triplets_from_columns(const std::vector<std::vector<std::int64_t>>& cols) {
  std::vector<Triplet> out;
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i)
      if (cols[j][i] != 0)
        out.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), cols[j][i]});
  return out;
}

} // namespace detail

/// Successor counts of the canonical type system of the genus-g surface
/// group: 2g types, degree 4g.  A point of type i < 2g has 4g-3 successors of
/// type 1, one of type 2 and one of type i+1; a point of type 2g has 4g-4
/// successors of type 1 and 2 of type 2.
inline TypeSystem cannon_matrix(std::int64_t g) {
  if (g < 2) throw InvalidGenus(g);
  const std::int64_t n = 2 * g;
  std::vector<std::vector<std::int64_t>> cols(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    cols[j][0] = 4 * g - 3;
    cols[j][1] += 1;
    cols[j][static_cast<std::size_t>(j + 1)] += 1;
  }
  cols[static_cast<std::size_t>(n - 1)][0] = 4 * g - 4;
  cols[static_cast<std::size_t>(n - 1)][1] = 2;

  TypeSystem ts;
  ts.type_count = n;
  ts.degree = 4 * g;
  ts.successors = detail::triplets_from_columns(cols);
  ts.labels = SurfaceAlphabet{g, SurfaceKind::canonical}.labels();
  return ts;
}

/// Successor counts over the modified alphabet {1,..,2g,1',2'}: as canonical
/// except that type 2g-1 sends one successor to 1' instead of a plain 1, and
/// the two primed types each feed type 2 plus the next step of the chain
/// (1' -> 2', 2' -> 3).
inline TypeSystem modified_cannon_matrix(std::int64_t g) {
  if (g < 2) throw InvalidGenus(g);
  const std::int64_t n = 2 * g + 2;
  std::vector<std::vector<std::int64_t>> cols(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  for (std::int64_t j = 0; j < 2 * g - 2; ++j) {
    cols[j][0] = 4 * g - 3;
    cols[j][1] += 1;
    cols[j][static_cast<std::size_t>(j + 1)] += 1;
  }
  // type 2g-1
  cols[static_cast<std::size_t>(2 * g - 2)][0] = 4 * g - 4;
  cols[static_cast<std::size_t>(2 * g - 2)][static_cast<std::size_t>(2 * g)] = 1;
  cols[static_cast<std::size_t>(2 * g - 2)][1] = 1;
  cols[static_cast<std::size_t>(2 * g - 2)][static_cast<std::size_t>(2 * g - 1)] = 1;
  // type 2g
  cols[static_cast<std::size_t>(2 * g - 1)][0] = 4 * g - 4;
  cols[static_cast<std::size_t>(2 * g - 1)][1] = 2;
  // type 1'
  cols[static_cast<std::size_t>(2 * g)][0] = 4 * g - 3;
  cols[static_cast<std::size_t>(2 * g)][1] = 1;
  cols[static_cast<std::size_t>(2 * g)][static_cast<std::size_t>(2 * g + 1)] = 1;
  // type 2'
  cols[static_cast<std::size_t>(2 * g + 1)][0] = 4 * g - 3;
  cols[static_cast<std::size_t>(2 * g + 1)][1] = 1;
  cols[static_cast<std::size_t>(2 * g + 1)][2] = 1;

  TypeSystem ts;
  ts.type_count = n;
  ts.degree = 4 * g;
  ts.successors = detail::triplets_from_columns(cols);
  ts.labels = SurfaceAlphabet{g, SurfaceKind::modified}.labels();
  return ts;
}

} // namespace conewalk
