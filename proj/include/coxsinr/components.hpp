/*
   Copyright 2026 the coxsinr authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coxsinr {

/// Union-find with path compression and union by rank.
class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    std::uint32_t find(std::uint32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

    std::size_t size() const { return parent_.size(); }

  private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

struct ComponentLabels {
    std::vector<std::uint32_t> label;  // component id per vertex, 0..count-1
    std::vector<std::uint32_t> sizes;  // size per component id
};

/// Connected components (maximal connected subgraphs) of the graph on n
/// vertices given by an edge list.
inline ComponentLabels components(std::size_t n,
                                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    DisjointSets ds(n);
    for (auto [i, j] : edges) {
        if (i >= n || j >= n) throw std::invalid_argument("components: vertex index out of range");
        ds.unite(i, j);
    }
    ComponentLabels out;
    out.label.assign(n, 0);
    std::vector<std::uint32_t> root_to_label(n, 0xffffffffu);
    std::uint32_t next = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        const std::uint32_t r = ds.find(v);
        if (root_to_label[r] == 0xffffffffu) {
            root_to_label[r] = next++;
            out.sizes.push_back(0);
        }
        out.label[v] = root_to_label[r];
        ++out.sizes[out.label[v]];
    }
    return out;
}

}  // namespace coxsinr
