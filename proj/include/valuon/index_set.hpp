#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

namespace valuon {

/// Index into a finite carrier.  Carriers are capped well below 2^16.
using Index = std::uint16_t;

/**
 * Sorted duplicate-free set of carrier indices.  Used for additive
 * subgroups, ideals, and powerset-semiring elements alike.
 */
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<Index> xs) : v_(xs) { canonicalize(); }
    explicit IndexSet(std::vector<Index> xs) : v_(std::move(xs)) { canonicalize(); }

    static IndexSet single(Index i) { return IndexSet{i}; }

    bool contains(Index i) const { return std::binary_search(v_.begin(), v_.end(), i); }

    void insert(Index i) {
        auto it = std::lower_bound(v_.begin(), v_.end(), i);
        if (it == v_.end() || *it != i) v_.insert(it, i);
    }

    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }
    const std::vector<Index>& indices() const { return v_; }

    friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.v_ == b.v_; }
    friend bool operator!=(const IndexSet& a, const IndexSet& b) { return a.v_ != b.v_; }
    friend bool operator<(const IndexSet& a, const IndexSet& b) { return a.v_ < b.v_; }

    bool subset_of(const IndexSet& other) const {
        return std::includes(other.v_.begin(), other.v_.end(), v_.begin(), v_.end());
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v_[i]);
        }
        return s + "}";
    }

private:
    std::vector<Index> v_;

    void canonicalize() {
        std::sort(v_.begin(), v_.end());
        v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
    }
};

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    std::vector<Index> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

inline IndexSet set_intersect(const IndexSet& a, const IndexSet& b) {
    std::vector<Index> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

}  // namespace valuon
