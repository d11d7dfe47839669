#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace cimgraph {

// Union-find over string keys with path halving and union by size.
class DisjointSet {
public:
    void add(const std::string& key) { index_of(key); }

    void unite(const std::string& a, const std::string& b) {
        std::size_t ra = find(index_of(a));
        std::size_t rb = find(index_of(b));
        if (ra == rb) return;
        if (size_[ra] < size_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
    }

    bool same(const std::string& a, const std::string& b) {
        return find(index_of(a)) == find(index_of(b));
    }

    // Members of each set, sorted within and across groups.
    std::vector<std::vector<std::string>> groups() {
        std::map<std::size_t, std::vector<std::string>> by_root;
        for (const auto& [key, idx] : index_) {
            by_root[find(idx)].push_back(key);  // std::map keys iterate sorted
        }
        std::vector<std::vector<std::string>> out;
        out.reserve(by_root.size());
        for (auto& [root, members] : by_root) out.push_back(std::move(members));
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;

    std::size_t index_of(const std::string& key) {
        auto [it, inserted] = index_.emplace(key, parent_.size());
        if (inserted) {
            parent_.push_back(it->second);
            size_.push_back(1);
        }
        return it->second;
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
};

}  // namespace cimgraph
