#pragma once

#include <cstddef>
#include <vector>

#include "ignn/error.hpp"
#include "ignn/graph.hpp"

namespace ignn {

// N x N hop-count table. kUnreachable marks pairs with no connecting path.
class DistanceMatrix {
public:
    static constexpr int kUnreachable = -1;

    explicit DistanceMatrix(int n)
        : n_(n), dist_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kUnreachable) {
        if (n < 0) throw parameter_error("negative distance matrix size");
        for (int i = 0; i < n; ++i) at(i, i) = 0;
    }

    int n() const { return n_; }

    int operator()(int i, int j) const { return dist_[index(i, j)]; }
    int& at(int i, int j) { return dist_[index(i, j)]; }

    bool reachable(int i, int j) const { return (*this)(i, j) != kUnreachable; }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<int> dist_;
};

// Exact all-pairs shortest paths by one BFS per source node.
inline DistanceMatrix bfs_apsp(const Graph& g) {
    const int n = g.num_nodes();
    DistanceMatrix dm(n);
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int src = 0; src < n; ++src) {
        int head = 0;
        int tail = 0;
        queue[tail++] = src;
        dm.at(src, src) = 0;
        while (head < tail) {
            const int u = queue[head++];
            const int du = dm(src, u);
            for (int v : g.neighbors(u)) {
                if (dm(src, v) == DistanceMatrix::kUnreachable) {
                    dm.at(src, v) = du + 1;
                    queue[tail++] = v;
                }
            }
        }
    }
    return dm;
}

} // namespace ignn
