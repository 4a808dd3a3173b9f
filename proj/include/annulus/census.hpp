#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "annulus/map.hpp"

namespace annulus {

// Canonical form under relabeling and reflection; equal codes iff isomorphic.
std::vector<int> canonical_code(const AnnulusMap& m);

// All connected maps with at most max_edges edges and every choice of end
// faces, one per isomorphism class. Includes the single vertex.
std::vector<AnnulusMap> enumerate_maps(int max_edges);

// Random connected map with exactly n_edges edges, built by pendant edges and
// chords at uniformly chosen corners; ends are two random faces.
AnnulusMap random_map(int n_edges, std::mt19937_64& rng);

}  // namespace annulus
