#pragma once

// Finite sets of positive integers with the combinatorial quantities the
// cosine-product estimates charge for: cardinality, number of components
// b(J) (maximal runs of consecutive integers), supremum.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace cantorft {

class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<std::int64_t> xs) : IndexSet(std::vector<std::int64_t>(xs)) {}
    explicit IndexSet(std::vector<std::int64_t> xs) : elems_(std::move(xs)) {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        for (std::int64_t x : elems_)
            if (x < 1) throw std::invalid_argument("IndexSet: elements must be positive");
    }

    // bitmask over {1..n} for exhaustive sweeps
    static IndexSet from_mask(std::uint64_t mask) {
        std::vector<std::int64_t> xs;
        for (int j = 1; mask != 0; ++j, mask >>= 1)
            if (mask & 1) xs.push_back(j);
        return IndexSet(std::move(xs));
    }

    const std::vector<std::int64_t>& elems() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    std::int64_t sup() const { return elems_.empty() ? 0 : elems_.back(); }

    bool contains(std::int64_t x) const {
        return std::binary_search(elems_.begin(), elems_.end(), x);
    }

    // b(J) = #{j in J : j-1 not in J}
    std::int64_t components() const {
        std::int64_t b = 0;
        for (std::size_t i = 0; i < elems_.size(); ++i)
            if (i == 0 || elems_[i - 1] != elems_[i] - 1) ++b;
        return b;
    }

    IndexSet shifted(std::int64_t d) const {
        std::vector<std::int64_t> xs;
        xs.reserve(elems_.size());
        for (std::int64_t x : elems_) xs.push_back(x + d);
        return IndexSet(std::move(xs));
    }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(elems_[i]);
        }
        return s + "}";
    }

private:
    std::vector<std::int64_t> elems_;
};

inline std::int64_t components(const IndexSet& j) { return j.components(); }

}  // namespace cantorft
