#pragma once

#include <numeric>
#include <vector>

namespace gfc {

/// Union by size with path compression.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        int root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const int next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    /// Returns true when two distinct components were joined. On equal size
    /// the smaller index stays root, keeping the structure deterministic.
    bool unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        if (size_[ra] < size_[rb] || (size_[ra] == size_[rb] && rb < ra)) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
        return true;
    }

    std::size_t component_size(int x) { return size_[find(x)]; }

  private:
    std::vector<int> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace gfc
