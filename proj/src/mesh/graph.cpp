#include "gla/mesh/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gla::mesh {

bool AdjacencyMatrix::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
        return false;
    const auto& nb = neighbors[static_cast<std::size_t>(i)];
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::size_t AdjacencyMatrix::edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : neighbors) total += nb.size();
    return total / 2;
}

NodePermutation NodePermutation::identity(std::size_t n) {
    NodePermutation p;
    p.perm.resize(n);
    std::iota(p.perm.begin(), p.perm.end(), 0);
    return p;
}

std::vector<int> NodePermutation::positions() const {
    std::vector<int> pos(perm.size(), -1);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const int node = perm[i];
        if (node < 0 || static_cast<std::size_t>(node) >= perm.size() || pos[node] != -1)
            throw std::invalid_argument("permutation is not a bijection");
        pos[node] = static_cast<int>(i);
    }
    return pos;
}

AdjacencyMatrix build_adjacency(std::size_t n, const std::vector<std::vector<int>>& elements) {
    AdjacencyMatrix adj;
    adj.n = n;
    adj.neighbors.assign(n, {});
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto& elem = elements[e];
        if (elem.size() < 2)
            throw std::invalid_argument("element " + std::to_string(e) + " has fewer than 2 nodes");
        for (int idx : elem) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= n)
                throw std::invalid_argument("element " + std::to_string(e) +
                                            " references node out of range: " + std::to_string(idx));
        }
        for (std::size_t a = 0; a < elem.size(); ++a) {
            for (std::size_t b = a + 1; b < elem.size(); ++b) {
                if (elem[a] == elem[b]) continue;  // repeated node within an element
                adj.neighbors[elem[a]].push_back(elem[b]);
                adj.neighbors[elem[b]].push_back(elem[a]);
            }
        }
    }
    for (auto& nb : adj.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

NodePermutation reverse_cuthill_mckee(const AdjacencyMatrix& adj) {
    const std::size_t n = adj.n;
    // Candidate start nodes sorted by (degree, index); the first unvisited
    // one always belongs to the unprocessed component with the smallest
    // minimum degree, which fixes both the component order and the seed.
    std::vector<int> candidates(n);
    std::iota(candidates.begin(), candidates.end(), 0);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        const auto da = adj.degree(a), db = adj.degree(b);
        return da != db ? da < db : a < b;
    });

    std::vector<char> visited(n, 0);
    std::vector<int> order;
    order.reserve(n);
    std::deque<int> queue;
    std::vector<int> buffer;

    for (int seed : candidates) {
        if (visited[seed]) continue;
        visited[seed] = 1;
        queue.push_back(seed);
        while (!queue.empty()) {
            const int node = queue.front();
            queue.pop_front();
            order.push_back(node);
            buffer.clear();
            for (int nb : adj.neighbors[node])
                if (!visited[nb]) buffer.push_back(nb);
            std::stable_sort(buffer.begin(), buffer.end(), [&](int a, int b) {
                const auto da = adj.degree(a), db = adj.degree(b);
                return da != db ? da < db : a < b;
            });
            for (int nb : buffer) {
                visited[nb] = 1;
                queue.push_back(nb);
            }
        }
    }

    NodePermutation out;
    out.perm.assign(order.rbegin(), order.rend());
    return out;
}

std::size_t bandwidth(const AdjacencyMatrix& adj, const NodePermutation& perm) {
    if (perm.size() != adj.n)
        throw std::invalid_argument("bandwidth: permutation length does not match node count");
    const std::vector<int> pos = perm.positions();
    std::size_t band = 0;
    for (std::size_t i = 0; i < adj.n; ++i) {
        for (int j : adj.neighbors[i]) {
            if (static_cast<std::size_t>(j) < i) continue;
            const std::size_t d = static_cast<std::size_t>(
                std::abs(pos[i] - pos[static_cast<std::size_t>(j)]));
            band = std::max(band, d);
        }
    }
    return band;
}

std::vector<std::vector<int>> read_connectivity(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::vector<int>> elements;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<int> elem;
        int idx;
        while (ls >> idx) elem.push_back(idx);
        if (!elem.empty()) elements.push_back(std::move(elem));
    }
    return elements;
}

void write_permutation(const std::string& path, const NodePermutation& perm) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int idx : perm.perm) out << idx << '\n';
}

NodePermutation read_permutation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    NodePermutation p;
    int idx;
    while (in >> idx) p.perm.push_back(idx);
    return p;
}

}  // namespace gla::mesh
