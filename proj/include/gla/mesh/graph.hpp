#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gla::mesh {

/// Sparse symmetric node adjacency, stored as a sorted neighbour list per
/// node. Meshes of interest are far too large for dense 0/1 storage.
struct AdjacencyMatrix {
    std::size_t n = 0;
    std::vector<std::vector<int>> neighbors;  // sorted, no self-loops

    bool has_edge(int i, int j) const;
    std::size_t edge_count() const;
    std::size_t degree(std::size_t node) const { return neighbors[node].size(); }
};

/// Maps new position -> original node index; always a bijection on {0..n-1}.
struct NodePermutation {
    std::vector<int> perm;

    std::size_t size() const { return perm.size(); }
    static NodePermutation identity(std::size_t n);
    /// positions[original index] = new position; throws if not a bijection.
    std::vector<int> positions() const;
};

/// Two nodes are adjacent iff they co-occur in some element. Elements need
/// at least two nodes; out-of-range indices are rejected with the offending
/// element id.
AdjacencyMatrix build_adjacency(std::size_t n, const std::vector<std::vector<int>>& elements);

/// Reverse Cuthill-McKee ordering. Start node per component: lowest degree,
/// ties by smallest index; components are processed in ascending order of
/// their minimum degree (same tie rule). Empty graphs get the identity.
NodePermutation reverse_cuthill_mckee(const AdjacencyMatrix& adj);

/// max |pos(i) - pos(j)| over edges; 0 for edgeless graphs.
std::size_t bandwidth(const AdjacencyMatrix& adj, const NodePermutation& perm);

// Plain-text exchange formats: connectivity is one element per line of
// whitespace-separated zero-based node indices; permutations one index per
// line.
std::vector<std::vector<int>> read_connectivity(const std::string& path);
void write_permutation(const std::string& path, const NodePermutation& perm);
NodePermutation read_permutation(const std::string& path);

}  // namespace gla::mesh
