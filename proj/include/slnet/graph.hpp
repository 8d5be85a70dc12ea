#pragma once

// Network topologies (simple undirected connected graphs) and the
// combinatorial Laplacian L = D - A with its spectral quantities.
//
// Node indices are 0-based internally; file formats and report text use
// 1-based labels.

#include <fstream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slnet/linalg.hpp"

namespace slnet {

enum class TopologyKind { Ring, Complete, Custom };

struct NetworkTopology {
    int n_nodes = 0;
    TopologyKind kind = TopologyKind::Custom;
    int ring_s = 0;  // coupling range, meaningful for kind == Ring
    Matrix adjacency;
    std::vector<int> degrees;

    // all-to-all means every off-diagonal pair is connected
    bool is_all_to_all() const {
        for (int j = 0; j < n_nodes; ++j)
            if (degrees[j] != n_nodes - 1) return false;
        return true;
    }
};

namespace detail {

inline void validate_and_finish(NetworkTopology& t) {
    const int n = t.n_nodes;
    if (n < 1) throw std::invalid_argument("topology: need at least one node");
    if (t.adjacency.rows != n || t.adjacency.cols != n)
        throw std::invalid_argument("topology: adjacency shape mismatch");
    for (int j = 0; j < n; ++j) {
        if (t.adjacency(j, j) != 0.0) throw std::invalid_argument("topology: self-loop at node " + std::to_string(j + 1));
        for (int k = 0; k < n; ++k) {
            const double v = t.adjacency(j, k);
            if (v != 0.0 && v != 1.0) throw std::invalid_argument("topology: adjacency entries must be 0 or 1");
            if (v != t.adjacency(k, j)) throw std::invalid_argument("topology: adjacency must be symmetric");
        }
    }
    t.degrees.assign(n, 0);
    for (int j = 0; j < n; ++j) {
        int d = 0;
        for (int k = 0; k < n; ++k) d += static_cast<int>(t.adjacency(j, k));
        t.degrees[j] = d;
    }
    // connectivity by breadth-first search
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int j = q.front();
        q.pop();
        for (int k = 0; k < n; ++k)
            if (t.adjacency(j, k) != 0.0 && !seen[k]) {
                seen[k] = 1;
                ++count;
                q.push(k);
            }
    }
    if (count != n) throw std::invalid_argument("topology: graph is not connected");
}

}  // namespace detail

/// Ring of N nodes where j and k are coupled iff their ring distance
/// min(|j-k|, N-|j-k|) is between 1 and s. Requires N >= 3 and
/// 1 <= s <= floor(N/2); s = N/2 (even N) gives all-to-all coupling.
inline NetworkTopology build_ring(int n, int s) {
    if (n < 3) throw std::invalid_argument("build_ring: need n >= 3");
    if (s < 1 || s > n / 2) throw std::invalid_argument("build_ring: require 1 <= s <= floor(n/2)");
    NetworkTopology t;
    t.n_nodes = n;
    t.kind = TopologyKind::Ring;
    t.ring_s = s;
    t.adjacency = Matrix(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const int d = std::min(std::abs(j - k), n - std::abs(j - k));
            if (d <= s) t.adjacency(j, k) = 1.0;
        }
    detail::validate_and_finish(t);
    return t;
}

/// Complete graph K_N (all ones off the diagonal). Requires N >= 2.
inline NetworkTopology build_complete(int n) {
    if (n < 2) throw std::invalid_argument("build_complete: need n >= 2");
    NetworkTopology t;
    t.n_nodes = n;
    t.kind = TopologyKind::Complete;
    t.adjacency = Matrix(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (j != k) t.adjacency(j, k) = 1.0;
    detail::validate_and_finish(t);
    return t;
}

/// Custom topology from a 1-based edge list. Node count defaults to the
/// largest index mentioned; pass n_nodes to override (isolated nodes are
/// rejected by the connectivity check anyway).
inline NetworkTopology build_custom(const std::vector<std::pair<int, int>>& edges_1based, int n_nodes = 0) {
    int n = n_nodes;
    for (const auto& [j, k] : edges_1based) {
        if (j < 1 || k < 1) throw std::invalid_argument("build_custom: node labels are 1-based");
        n = std::max({n, j, k});
    }
    if (n < 1) throw std::invalid_argument("build_custom: empty edge list and no node count");
    NetworkTopology t;
    t.n_nodes = n;
    t.kind = TopologyKind::Custom;
    t.adjacency = Matrix(n, n);
    for (const auto& [j, k] : edges_1based) {
        if (j == k) throw std::invalid_argument("build_custom: self-loop " + std::to_string(j) + "-" + std::to_string(k));
        t.adjacency(j - 1, k - 1) = 1.0;
        t.adjacency(k - 1, j - 1) = 1.0;
    }
    detail::validate_and_finish(t);
    return t;
}

/// Edge-list file: one "j k" pair per line, 1-based, whitespace-separated;
/// '#' starts a comment, blank lines are skipped.
inline NetworkTopology load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_edge_list: cannot open " + path);
    std::vector<std::pair<int, int>> edges;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int j = 0, k = 0;
        if (!(ls >> j)) continue;  // blank or comment-only line
        if (!(ls >> k)) throw std::invalid_argument("load_edge_list: " + path + ":" + std::to_string(line_no) + ": expected two node labels");
        int extra;
        if (ls >> extra) throw std::invalid_argument("load_edge_list: " + path + ":" + std::to_string(line_no) + ": trailing tokens");
        edges.emplace_back(j, k);
    }
    if (edges.empty()) throw std::invalid_argument("load_edge_list: " + path + ": no edges");
    return build_custom(edges);
}

/// L = D - A. Row sums are zero by construction.
inline Matrix laplacian(const NetworkTopology& t) {
    const int n = t.n_nodes;
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) l(j, k) = -t.adjacency(j, k);
        l(j, j) = static_cast<double>(t.degrees[j]);
    }
    return l;
}

struct LaplacianSpectrum {
    std::vector<double> eigenvalues;  // nondecreasing, size N
    double lambda2 = 0.0;             // algebraic connectivity
    double lambda_max = 0.0;
};

inline LaplacianSpectrum laplacian_spectrum(const Matrix& l) {
    if (!l.is_symmetric(1e-12)) throw std::invalid_argument("laplacian_spectrum: matrix not symmetric");
    LaplacianSpectrum s;
    s.eigenvalues = symmetric_eigenvalues(l);
    s.lambda2 = s.eigenvalues.size() > 1 ? s.eigenvalues[1] : 0.0;
    s.lambda_max = s.eigenvalues.back();
    return s;
}

inline int d_max(const NetworkTopology& t) {
    int d = 0;
    for (int v : t.degrees) d = std::max(d, v);
    return d;
}

}  // namespace slnet
