#include "epmd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "epmd/errors.hpp"

namespace epmd {

std::size_t AffinityGraph::num_edges() const {
    std::size_t twice = 0, loops = 0;
    for (std::size_t i = 0; i < adjacency.size(); ++i)
        for (std::size_t j : adjacency[i]) {
            if (j == i)
                ++loops;
            else
                ++twice;
        }
    return twice / 2 + loops;
}

bool AffinityGraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& adj = adjacency[i];
    return std::binary_search(adj.begin(), adj.end(), j);
}

std::size_t AffinityGraph::num_isolated() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        bool any = false;
        for (std::size_t j : adjacency[i])
            if (j != i) any = true;
        if (!any) ++n;
    }
    return n;
}

void AffinityGraph::check_symmetric() const {
    for (std::size_t i = 0; i < adjacency.size(); ++i)
        for (std::size_t j : adjacency[i])
            if (j != i && !has_edge(j, i))
                throw ExecutionError("graph adjacency is not symmetric");
}

AffinityGraph make_graph(std::vector<std::string> node_ids,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                         bool self_loops) {
    AffinityGraph g;
    g.self_loops = self_loops;
    g.node_ids = std::move(node_ids);
    for (std::size_t i = 0; i < g.node_ids.size(); ++i) {
        if (g.node_index.count(g.node_ids[i]))
            throw DuplicateEpisodeId("duplicate graph node id: " + g.node_ids[i]);
        g.node_index[g.node_ids[i]] = i;
    }
    g.adjacency.assign(g.node_ids.size(), {});
    for (auto [i, j] : edges) {
        if (i >= g.node_ids.size() || j >= g.node_ids.size())
            throw ExecutionError("edge endpoint out of range");
        if (i == j) {
            if (self_loops) g.adjacency[i].push_back(i);
            continue;
        }
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
    }
    if (self_loops)
        for (std::size_t i = 0; i < g.adjacency.size(); ++i) g.adjacency[i].push_back(i);
    for (auto& adj : g.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    g.check_symmetric();
    return g;
}

AffinityGraph build_graph(const std::vector<std::string>& node_ids,
                          const std::vector<std::vector<double>>& vectors, double threshold,
                          bool self_loops) {
    if (node_ids.size() != vectors.size())
        throw DimensionMismatch("build_graph: ids/vectors length mismatch");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InvalidConfig("build_graph: threshold must lie in (0,1)");
    std::size_t dim = vectors.empty() ? 0 : vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != dim) throw DimensionMismatch("build_graph: ragged vector set");

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                double diff = vectors[i][k] - vectors[j][k];
                d2 += diff * diff;
            }
            if (std::exp(-std::sqrt(d2)) > threshold) edges.emplace_back(i, j);
        }
    }
    return make_graph(node_ids, edges, self_loops);
}

AffinityGraph with_self_loops(const AffinityGraph& g) {
    AffinityGraph out = g;
    out.self_loops = true;
    for (std::size_t i = 0; i < out.adjacency.size(); ++i) {
        auto& adj = out.adjacency[i];
        auto it = std::lower_bound(adj.begin(), adj.end(), i);
        if (it == adj.end() || *it != i) adj.insert(it, i);
    }
    return out;
}

void save_graph(const AffinityGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < g.adjacency.size(); ++i)
        for (std::size_t j : g.adjacency[i]) {
            if (j < i) continue;
            if (j == i && !g.self_loops) continue;
            const std::string& a = g.node_ids[i];
            const std::string& b = g.node_ids[j];
            if (a <= b)
                out << a << '\t' << b << '\n';
            else
                out << b << '\t' << a << '\n';
        }
}

AffinityGraph load_graph(const std::string& path, const std::vector<std::string>& node_ids) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file: " + path);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < node_ids.size(); ++i) index[node_ids[i]] = i;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    bool self_loops = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw MalformedRecord("graph line " + std::to_string(lineno) + ": missing tab");
        std::string a = line.substr(0, tab);
        std::string b = line.substr(tab + 1);
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end())
            throw MalformedRecord("graph line " + std::to_string(lineno) + ": unknown node id");
        if (ia->second == ib->second) self_loops = true;
        edges.emplace_back(ia->second, ib->second);
    }
    return make_graph(node_ids, edges, self_loops);
}

}  // namespace epmd
