#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace epmd {

// Undirected episode graph. Adjacency lists are sorted and deduplicated;
// symmetric by construction.
struct AffinityGraph {
    std::vector<std::string> node_ids;
    std::map<std::string, std::size_t> node_index;
    std::vector<std::vector<std::size_t>> adjacency;
    bool self_loops = false;

    std::size_t num_nodes() const { return node_ids.size(); }
    std::size_t num_edges() const;  // undirected count, self-loops counted once
    bool has_edge(std::size_t i, std::size_t j) const;
    std::size_t num_isolated() const;
    void check_symmetric() const;  // throws ExecutionError on violation
};

AffinityGraph make_graph(std::vector<std::string> node_ids,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                         bool self_loops = false);

// Connects nodes i<j iff exp(-||v_i - v_j||_2) > threshold (strict).
AffinityGraph build_graph(const std::vector<std::string>& node_ids,
                          const std::vector<std::vector<double>>& vectors, double threshold,
                          bool self_loops = false);

// Copy of g with a loop edge added at every node.
AffinityGraph with_self_loops(const AffinityGraph& g);

// Lines "id_i<TAB>id_j" with id_i < id_j; self-loops stored as id<TAB>id.
void save_graph(const AffinityGraph& g, const std::string& path);
AffinityGraph load_graph(const std::string& path, const std::vector<std::string>& node_ids);

}  // namespace epmd
