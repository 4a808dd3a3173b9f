#pragma once

#include <optional>

#include "annulus/map.hpp"

namespace annulus {

struct SparsityVerdict {
  bool sparse = true;
  bool tight = false;
  std::optional<EdgeSubset> violator;
  int level = 2;
};

// A subset violates level l if f < l, or it is balanced, nonempty, and f < 3.
bool violates(const AnnulusMap& m, const EdgeSubset& s, int level);

// Exhaustive check over all nonempty edge subsets, edges ordered by id and
// subsets visited in binary-counter order. Throws TooLarge past `max_edges`.
SparsityVerdict oracle_sparse(const AnnulusMap& m, int level, int max_edges = 20);

// Vertex-set based check. Exact; exponential only in the vertex count.
SparsityVerdict check_sparse(const AnnulusMap& m, int level);

inline bool is_tight(const AnnulusMap& m, int level) { return check_sparse(m, level).tight; }

// Inclusion-maximal tight subgraph containing `seed_edge` (map must be sparse).
EdgeSubset max_tight_subgraph(const AnnulusMap& m, int level, int seed_edge);

bool subset_is_tight(const AnnulusMap& m, const EdgeSubset& s, int level);

}  // namespace annulus
