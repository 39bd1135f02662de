#ifndef HSFG_EXPVEC_HPP
#define HSFG_EXPVEC_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "hsfg/fq.hpp"

namespace hsfg {

using ExpVec = std::vector<uint32_t>;

enum class MonomialOrder { GrLex, Lex };

inline uint64_t ev_total(const ExpVec &a) {
    return std::accumulate(a.begin(), a.end(), uint64_t{0});
}

// strict less-than under the given order (GrLex default throughout)
inline bool ev_less(const ExpVec &a, const ExpVec &b, MonomialOrder ord = MonomialOrder::GrLex) {
    if (ord == MonomialOrder::GrLex) {
        uint64_t ta = ev_total(a), tb = ev_total(b);
        if (ta != tb)
            return ta < tb;
    }
    return a < b; // lexicographic tie-break
}

inline ExpVec ev_add(const ExpVec &a, const ExpVec &b) {
    ExpVec c(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

// entrywise a - b; valid only when b divides a
inline ExpVec ev_sub(const ExpVec &a, const ExpVec &b) {
    ExpVec c(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] - b[i];
    return c;
}

inline bool ev_divides(const ExpVec &a, const ExpVec &b) { // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

inline ExpVec ev_lcm(const ExpVec &a, const ExpVec &b) {
    ExpVec c(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        c[i] = std::max(a[i], b[i]);
    return c;
}

inline ExpVec ev_zero(size_t n) { return ExpVec(n, 0); }

inline ExpVec ev_unit(size_t n, size_t t) {
    ExpVec e(n, 0);
    e[t] = 1;
    return e;
}

inline std::string ev_to_string(const ExpVec &a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(a[i]);
    }
    return s;
}

// packs an exponent vector with entries < 256 into a u64 key (up to 8 slots)
inline uint64_t ev_pack(const ExpVec &a) {
    uint64_t k = 0;
    for (size_t i = 0; i < a.size(); ++i)
        k |= uint64_t(a[i] & 0xff) << (8 * i);
    return k;
}

/// The index set [bound]^dims enumerated in graded-lex order, with rank lookup.
/// Used for the operator indices of truncated derivations (bound = p^m).
class IndexSet {
  public:
    IndexSet() = default;
    IndexSet(uint32_t bound, size_t dims);

    const std::vector<ExpVec> &all() const { return all_; }
    size_t size() const { return all_.size(); }
    size_t rank(const ExpVec &i) const;
    const ExpVec &at(size_t r) const { return all_[r]; }
    uint32_t bound() const { return bound_; }
    size_t dims() const { return dims_; }
    bool contains(const ExpVec &i) const;

  private:
    uint32_t bound_ = 0;
    size_t dims_ = 0;
    std::vector<ExpVec> all_;
    std::unordered_map<uint64_t, size_t> rank_;
};

inline IndexSet::IndexSet(uint32_t bound, size_t dims) : bound_(bound), dims_(dims) {
    uint64_t total = 1;
    for (size_t i = 0; i < dims; ++i)
        total *= bound;
    if (total > (1u << 24))
        throw argument_error("index set too large");
    all_.reserve(total);
    ExpVec cur(dims, 0);
    for (uint64_t c = 0; c < total; ++c) {
        uint64_t x = c;
        for (size_t i = 0; i < dims; ++i) {
            cur[i] = uint32_t(x % bound);
            x /= bound;
        }
        all_.push_back(cur);
    }
    std::sort(all_.begin(), all_.end(),
              [](const ExpVec &a, const ExpVec &b) { return ev_less(a, b); });
    rank_.reserve(all_.size());
    for (size_t r = 0; r < all_.size(); ++r)
        rank_[ev_pack(all_[r])] = r;
}

inline size_t IndexSet::rank(const ExpVec &i) const {
    auto it = rank_.find(ev_pack(i));
    if (it == rank_.end())
        throw argument_error("index out of range: (" + ev_to_string(i) + ")");
    return it->second;
}

inline bool IndexSet::contains(const ExpVec &i) const {
    if (i.size() != dims_)
        return false;
    for (uint32_t x : i)
        if (x >= bound_)
            return false;
    return true;
}

inline uint64_t ipow(uint64_t base, uint32_t exp) {
    uint64_t r = 1;
    while (exp--)
        r *= base;
    return r;
}

} // namespace hsfg

#endif
