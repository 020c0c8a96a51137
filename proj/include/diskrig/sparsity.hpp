#pragma once

#include <optional>
#include <vector>

#include "diskrig/packing.hpp"

namespace diskrig::combinatorics {

/// Vertex set of a subgraph violating (2,3)-sparsity, with its induced
/// edge count (which then satisfies edge_count > 2*|vertices| - 3).
struct SubgraphWitness {
    std::vector<int> vertices;
    int edge_count = 0;
};

struct SparsityReport {
    bool is_laman_sparse = false;
    bool is_laman_graph = false;
    std::optional<SubgraphWitness> violating_subgraph;
};

/// (2,3)-pebble game sparsity test.
///
/// is_laman_sparse is true iff every subgraph on n' vertices spans at most
/// 2n' - 3 edges; is_laman_graph additionally requires m = 2n - 3.  When a
/// subgraph violates the count, the witness is the closure of the failed
/// edge insertion (all vertices reachable from the rejected edge in the
/// pebble game's orientation).  Pebble searches expand lowest vertex index
/// first, so reports are deterministic.
///
/// Throws SelfLoopError / MultiEdgeError for non-simple input.
SparsityReport pebble_game_2_3(const ContactGraph& graph);

/// Exhaustive ground truth for pebble_game_2_3: checks every vertex subset
/// of size >= 2.  Throws TooLargeError for n > 16.
SparsityReport subgraph_oracle(const ContactGraph& graph);

/// True iff the straight-line drawing of the contact segments is
/// non-crossing: no two segments properly cross and no vertex lies in the
/// interior of a non-incident segment.  For valid packings this always
/// holds; the test exists to certify it.
bool embedding_is_planar(const DiskPacking& packing, const ContactGraph& graph);

}  // namespace diskrig::combinatorics
