#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "annulus/map.hpp"
#include "annulus/moves.hpp"

namespace annulus {

struct ConstructionSequence {
  std::string base;  // "K", "L" or "M"
  int level = 2;
  std::vector<SplitRecord> steps;  // replay order, base first
  // Concrete base map the steps refer to. Absent means the canonical base.
  std::optional<AnnulusMap> base_graph;
};

// Canonical base maps: K = one edge, L = two parallel edges around the core,
// M = one winding loop.
AnnulusMap base_map(const std::string& tag);
// Tag of a 1- or 2-vertex tight map, or empty if it is not a base.
std::string base_tag(const AnnulusMap& m, int level);

struct ReduceStep {
  AnnulusMap result;
  SplitRecord record;
  std::string description;
};

// First tight contraction in candidate order: triangles before quads, then by
// face index, edge or diagonal, and deletion choice.
ReduceStep reduce_step(const AnnulusMap& m, int level);

ConstructionSequence decompose(const AnnulusMap& m, int level);

// Replays a certificate; every prefix must be tight and every split legal.
AnnulusMap rebuild(const ConstructionSequence& seq);
// Same, returning every prefix (base first).
std::vector<AnnulusMap> rebuild_prefixes(const ConstructionSequence& seq);

AnnulusMap generate_random_tight(int level, int n_vertices, std::uint64_t seed);

AnnulusMap complete_to_tight(const AnnulusMap& m, int level);

// Vertex split at z handing the ccw arc after `after` (length `len`) to a new
// vertex joined by a new edge. End witnesses keep their darts.
AnnulusMap vertex_split(const AnnulusMap& g, int z, int after_index, int len,
                        const std::string& new_vertex, const std::string& edge_id);

}  // namespace annulus
