#ifndef HSFG_MPOLY_HPP
#define HSFG_MPOLY_HPP

#include <functional>
#include <map>
#include <optional>

#include "hsfg/expvec.hpp"
#include "hsfg/fq.hpp"

namespace hsfg {

// ring trait hooks; every coefficient type used by MPoly / TruncSeries
// provides these (Fq here, RatFunc and MPoly itself below / in ratfunc.hpp)
inline Fq ring_zero_like(const Fq &x) { return x.field()->zero(); }
inline Fq ring_one_like(const Fq &x) { return x.field()->one(); }
inline bool ring_is_zero(const Fq &x) { return x.is_zero(); }
inline std::optional<Fq> ring_inverse(const Fq &x) {
    if (x.is_zero())
        return std::nullopt;
    return x.inverse();
}
inline std::string ring_to_string(const Fq &x) { return x.to_string(); }

/// Sparse multivariate polynomial over a coefficient field K.
/// Terms are kept sorted in graded-lex order with no zero coefficients;
/// monomial orders other than the storage order are honored by the
/// division and Groebner routines via explicit leading-term selection.
template <class K>
class MPoly {
  public:
    using Term = std::pair<ExpVec, K>;

    MPoly() = default;
    MPoly(int arity, K proto) : arity_(arity), proto_(ring_zero_like(proto)) {}

    static MPoly zero(int arity, const K &proto) { return MPoly(arity, proto); }
    static MPoly constant(int arity, const K &c) {
        MPoly f(arity, c);
        if (!ring_is_zero(c))
            f.terms_.push_back({ev_zero(arity), c});
        return f;
    }
    static MPoly monomial(int arity, ExpVec e, const K &c) {
        MPoly f(arity, c);
        if (int(e.size()) != arity)
            throw argument_error("monomial arity mismatch");
        if (!ring_is_zero(c))
            f.terms_.push_back({std::move(e), c});
        return f;
    }
    static MPoly variable(int arity, int var, const K &proto) {
        return monomial(arity, ev_unit(arity, var), ring_one_like(proto));
    }

    int arity() const { return arity_; }
    const K &proto() const { return proto_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && ev_total(terms_[0].first) == 0);
    }
    bool is_one() const {
        return terms_.size() == 1 && ev_total(terms_[0].first) == 0 &&
               terms_[0].second == ring_one_like(proto_);
    }
    const std::vector<Term> &terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    K constant_term() const {
        if (!terms_.empty() && ev_total(terms_[0].first) == 0)
            return terms_[0].second;
        return proto_;
    }
    uint64_t total_degree() const { // degree of the zero polynomial reported as 0
        uint64_t d = 0;
        for (auto &t : terms_)
            d = std::max(d, ev_total(t.first));
        return d;
    }
    uint32_t degree_in(int var) const {
        uint32_t d = 0;
        for (auto &t : terms_)
            d = std::max(d, t.first[var]);
        return d;
    }

    K coeff(const ExpVec &e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term &t, const ExpVec &x) { return ev_less(t.first, x); });
        if (it != terms_.end() && it->first == e)
            return it->second;
        return proto_;
    }

    // leading term under an explicit order
    const Term &leading_term(MonomialOrder ord = MonomialOrder::GrLex) const {
        if (terms_.empty())
            throw argument_error("leading term of zero polynomial");
        if (ord == MonomialOrder::GrLex)
            return terms_.back();
        size_t best = 0;
        for (size_t i = 1; i < terms_.size(); ++i)
            if (ev_less(terms_[best].first, terms_[i].first, ord))
                best = i;
        return terms_[best];
    }

    MPoly operator+(const MPoly &o) const {
        check_compatible(o);
        MPoly r(arity_, proto_);
        r.terms_.reserve(terms_.size() + o.terms_.size());
        size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size() ||
                (i < terms_.size() && ev_less(terms_[i].first, o.terms_[j].first))) {
                r.terms_.push_back(terms_[i++]);
            } else if (i == terms_.size() || ev_less(o.terms_[j].first, terms_[i].first)) {
                r.terms_.push_back(o.terms_[j++]);
            } else {
                K c = terms_[i].second + o.terms_[j].second;
                if (!ring_is_zero(c))
                    r.terms_.push_back({terms_[i].first, c});
                ++i, ++j;
            }
        }
        return r;
    }

    MPoly operator-() const {
        MPoly r = *this;
        for (auto &t : r.terms_)
            t.second = -t.second;
        return r;
    }
    MPoly operator-(const MPoly &o) const { return *this + (-o); }

    MPoly operator*(const MPoly &o) const {
        check_compatible(o);
        MPoly r(arity_, proto_);
        if (is_zero() || o.is_zero())
            return r;
        std::map<ExpVec, K, bool (*)(const ExpVec &, const ExpVec &)> acc(
            [](const ExpVec &a, const ExpVec &b) { return ev_less(a, b); });
        for (auto &a : terms_)
            for (auto &b : o.terms_) {
                ExpVec e = ev_add(a.first, b.first);
                K c = a.second * b.second;
                auto it = acc.find(e);
                if (it == acc.end())
                    acc.emplace(std::move(e), std::move(c));
                else
                    it->second += c;
            }
        for (auto &kv : acc)
            if (!ring_is_zero(kv.second))
                r.terms_.push_back({kv.first, kv.second});
        return r;
    }

    MPoly scaled(const K &c) const {
        MPoly r(arity_, proto_);
        if (ring_is_zero(c))
            return r;
        for (auto &t : terms_) {
            K v = t.second * c;
            if (!ring_is_zero(v))
                r.terms_.push_back({t.first, v});
        }
        return r;
    }

    MPoly shifted(const ExpVec &mono) const { // multiply by a monomial
        MPoly r(arity_, proto_);
        for (auto &t : terms_)
            r.terms_.push_back({ev_add(t.first, mono), t.second});
        return r;
    }

    MPoly pow(uint32_t k) const {
        MPoly acc = constant(arity_, ring_one_like(proto_));
        MPoly base = *this;
        while (k) {
            if (k & 1)
                acc = acc * base;
            k >>= 1;
            if (k)
                base = base * base;
        }
        return acc;
    }

    bool operator==(const MPoly &o) const { return arity_ == o.arity_ && terms_ == o.terms_; }
    bool operator!=(const MPoly &o) const { return !(*this == o); }

    K evaluate(const std::vector<K> &values) const {
        K acc = proto_;
        for (auto &t : terms_) {
            K term = t.second;
            for (int v = 0; v < arity_; ++v)
                for (uint32_t k = 0; k < t.first[v]; ++k)
                    term = term * values[v];
            acc = acc + term;
        }
        return acc;
    }

    // polynomial substitution: variable i -> args[i]
    MPoly substitute(const std::vector<MPoly> &args) const {
        if (int(args.size()) != arity_)
            throw argument_error("substitution arity mismatch");
        int out_arity = args.empty() ? 0 : args[0].arity();
        MPoly acc(out_arity, proto_);
        for (auto &t : terms_) {
            MPoly term = constant(out_arity, t.second);
            for (int v = 0; v < arity_; ++v)
                if (t.first[v])
                    term = term * args[v].pow(t.first[v]);
            acc = acc + term;
        }
        return acc;
    }

    MPoly derivative(int var) const {
        MPoly r(arity_, proto_);
        K one = ring_one_like(proto_);
        for (auto &t : terms_) {
            if (t.first[var] == 0)
                continue;
            // multiply by the integer exponent inside K (characteristic p)
            K c = proto_;
            for (uint32_t k = 0; k < t.first[var]; ++k)
                c = c + t.second;
            if (ring_is_zero(c))
                continue;
            ExpVec e = t.first;
            e[var] -= 1;
            r.terms_.push_back({std::move(e), c});
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term &a, const Term &b) { return ev_less(a.first, b.first); });
        return r;
    }

    // extend to a larger variable set; old variable i becomes variable map[i]
    MPoly remap_variables(int new_arity, const std::vector<int> &map) const {
        MPoly r(new_arity, proto_);
        for (auto &t : terms_) {
            ExpVec e(new_arity, 0);
            for (int v = 0; v < arity_; ++v)
                e[map[v]] += t.first[v];
            r.terms_.push_back({std::move(e), t.second});
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term &a, const Term &b) { return ev_less(a.first, b.first); });
        return r;
    }

    template <class K2>
    MPoly<K2> map_coefficients(const std::function<K2(const K &)> &f, const K2 &proto2) const {
        MPoly<K2> r(arity_, proto2);
        for (auto &t : terms_) {
            K2 c = f(t.second);
            if (!ring_is_zero(c))
                r.mutable_terms().push_back({t.first, c});
        }
        return r;
    }

    std::string to_string(const std::function<std::string(int)> &var_name) const {
        if (terms_.empty())
            return "0";
        std::string s;
        for (size_t idx = terms_.size(); idx-- > 0;) { // descending, leading term first
            auto &t = terms_[idx];
            if (!s.empty())
                s += " + ";
            std::string factors;
            for (int v = 0; v < arity_; ++v) {
                if (t.first[v] == 0)
                    continue;
                if (!factors.empty())
                    factors += "*";
                factors += var_name(v);
                if (t.first[v] > 1)
                    factors += "^" + std::to_string(t.first[v]);
            }
            std::string cs = ring_to_string(t.second);
            if (factors.empty())
                s += cs;
            else if (cs == "1")
                s += factors;
            else
                s += cs + "*" + factors;
        }
        return s;
    }

    std::vector<Term> &mutable_terms() { return terms_; }
    void restore_invariants() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term &a, const Term &b) { return ev_less(a.first, b.first); });
        std::vector<Term> out;
        for (auto &t : terms_) {
            if (ring_is_zero(t.second))
                continue;
            if (!out.empty() && out.back().first == t.first)
                out.back().second += t.second;
            else
                out.push_back(t);
        }
        terms_.clear();
        for (auto &t : out)
            if (!ring_is_zero(t.second))
                terms_.push_back(std::move(t));
    }

  private:
    void check_compatible(const MPoly &o) const {
        if (arity_ != o.arity_)
            throw argument_error("polynomial arity mismatch");
    }

    int arity_ = 0;
    K proto_{};
    std::vector<Term> terms_;
};

template <class K>
MPoly<K> operator*(const K &c, const MPoly<K> &f) {
    return f.scaled(c);
}

// ring trait hooks for MPoly itself (as a coefficient ring of TruncSeries)
template <class K>
MPoly<K> ring_zero_like(const MPoly<K> &x) {
    return MPoly<K>(x.arity(), x.proto());
}
template <class K>
MPoly<K> ring_one_like(const MPoly<K> &x) {
    return MPoly<K>::constant(x.arity(), ring_one_like(x.proto()));
}
template <class K>
bool ring_is_zero(const MPoly<K> &x) {
    return x.is_zero();
}
template <class K>
std::optional<MPoly<K>> ring_inverse(const MPoly<K> &x) {
    // units of K[X] are the nonzero constants
    if (!x.is_constant() || x.is_zero())
        return std::nullopt;
    auto c = ring_inverse(x.constant_term());
    if (!c)
        return std::nullopt;
    return MPoly<K>::constant(x.arity(), *c);
}
template <class K>
std::string ring_to_string(const MPoly<K> &x) {
    std::string s = x.to_string([](int v) { return "x" + std::to_string(v + 1); });
    if (x.term_count() > 1)
        return "(" + s + ")";
    return s;
}

using PolyFq = MPoly<Fq>;

} // namespace hsfg

#endif
