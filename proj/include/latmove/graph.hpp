#ifndef LATMOVE_GRAPH_HPP
#define LATMOVE_GRAPH_HPP

#include <cstdint>
#include <string>

#include "latmove/moves.hpp"

namespace latmove {

// Move graph over canonical polytopes in a box. Node payloads are stored as
// plain vertex lists; the full polytope (with facets) is materialized on
// demand through polytope_at.
class MoveGraph {
  public:
    MoveGraph() = default;
    MoveGraph(int d, Int k, VertexFilter filter) : d_(d), k_(std::move(k)), filter_(std::move(filter)) {}

    int dim() const { return d_; }
    const Int& box() const { return k_; }
    const VertexFilter& filter() const { return filter_; }

    std::size_t node_count() const { return keys_.size(); }
    std::size_t edge_count() const;
    const std::vector<std::string>& keys() const { return keys_; }
    const std::string& key_at(std::size_t i) const { return keys_[i]; }
    const std::vector<Vec>& vertices_at(std::size_t i) const { return verts_[i]; }
    const std::vector<std::int32_t>& neighbors_at(std::size_t i) const { return adj_[i]; }
    Polytope polytope_at(std::size_t i) const;

    // index of a canonical key, or -1
    std::int64_t index_of(const std::string& key) const;

    // Builder interface: add nodes first, then edges, then freeze.
    std::size_t add_node(std::string key, std::vector<Vec> vertices);
    void add_edge(std::size_t a, std::size_t b);
    void sort_adjacency();

    friend bool operator==(const MoveGraph& a, const MoveGraph& b) {
        return a.keys_ == b.keys_ && a.verts_ == b.verts_ && a.adj_ == b.adj_;
    }

  private:
    int d_ = 0;
    Int k_ = 0;
    VertexFilter filter_;
    std::vector<std::string> keys_;  // sorted, node identity
    std::vector<std::vector<Vec>> verts_;
    std::vector<std::vector<std::int32_t>> adj_;
};

// All full-dimensional lattice polytopes in [0,k]^d as canonical keys,
// obtained by an exhaustive subset scan; at most 16 box points allowed.
std::vector<std::string> enumerate_keys(int d, const Int& k, const VertexFilter& filter = std::nullopt);

// Same census with materialized polytopes.
std::vector<Polytope> enumerate_polytopes(int d, const Int& k, const VertexFilter& filter = std::nullopt);

// Graph on the given nodes; edges are the single moves inside the box that
// stay within the node set (and the filter on both endpoints).
MoveGraph build_graph(const std::vector<Polytope>& nodes, const Int& k,
                      const VertexFilter& filter = std::nullopt);

// Graph on everything reachable from the seed by moves inside the box.
MoveGraph bfs_closure(const Polytope& seed, const Int& k, const VertexFilter& filter = std::nullopt);

// Partition of the node keys into connected components, each sorted, the
// list ordered by smallest key.
std::vector<std::vector<std::string>> connected_components(const MoveGraph& g);

// Shortest move distance between two nodes, or nothing if unreachable.
std::optional<int> bfs_distance(const MoveGraph& g, const std::string& from, const std::string& to);

// JSONL export: one node per line, sorted by key. DOT export: one edge
// record per unordered pair.
std::string export_jsonl(const MoveGraph& g);
std::string export_dot(const MoveGraph& g);
MoveGraph load_jsonl(const std::string& text);

// FNV-1a over the JSONL serialization; cache key for resumable suites.
std::uint64_t content_hash(const MoveGraph& g);

}  // namespace latmove

#endif
