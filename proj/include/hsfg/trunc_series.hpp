#ifndef HSFG_TRUNC_SERIES_HPP
#define HSFG_TRUNC_SERIES_HPP

#include "hsfg/ratfunc.hpp"

namespace hsfg {

/// Element of R[v_m] = R[X_1..X_a]/(X_1^{p^m},..,X_a^{p^m}) with coefficients
/// in a ring C. Monomials whose exponents reach p^m are discarded by every
/// operation. The 2e-variable rings used for comultiplication reuse this type
/// with arity 2e; the block split is positional (first block, second block).
template <class C>
class TruncSeries {
  public:
    using Term = std::pair<ExpVec, C>;

    TruncSeries() = default;
    TruncSeries(int64_t p, int m, int arity, C proto)
        : p_(p), m_(m), arity_(arity), bound_(uint32_t(ipow(uint64_t(p), uint32_t(m)))),
          proto_(ring_zero_like(proto)) {}

    static TruncSeries zero(int64_t p, int m, int arity, const C &proto) {
        return TruncSeries(p, m, arity, proto);
    }
    static TruncSeries constant(int64_t p, int m, int arity, const C &c) {
        TruncSeries s(p, m, arity, c);
        if (!ring_is_zero(c))
            s.terms_.push_back({ev_zero(arity), c});
        return s;
    }
    static TruncSeries one(int64_t p, int m, int arity, const C &proto) {
        return constant(p, m, arity, ring_one_like(proto));
    }
    static TruncSeries variable(int64_t p, int m, int arity, int var, const C &proto) {
        TruncSeries s(p, m, arity, proto);
        if (s.bound_ > 1)
            s.terms_.push_back({ev_unit(arity, var), ring_one_like(proto)});
        return s;
    }
    static TruncSeries monomial(int64_t p, int m, int arity, const ExpVec &e, const C &c) {
        TruncSeries s(p, m, arity, c);
        if (!s.in_bounds(e))
            return s;
        if (!ring_is_zero(c))
            s.terms_.push_back({e, c});
        return s;
    }

    int64_t p() const { return p_; }
    int level() const { return m_; }
    int arity() const { return arity_; }
    uint32_t bound() const { return bound_; }
    const C &proto() const { return proto_; }
    const std::vector<Term> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool in_bounds(const ExpVec &e) const {
        if (int(e.size()) != arity_)
            return false;
        for (uint32_t x : e)
            if (x >= bound_)
                return false;
        return true;
    }

    C coeff(const ExpVec &e) const {
        if (!in_bounds(e))
            throw argument_error("ts_coeff: index out of range");
        auto it = std::lower_bound(
            terms_.begin(), terms_.end(), e,
            [](const Term &t, const ExpVec &x) { return ev_less(t.first, x); });
        if (it != terms_.end() && it->first == e)
            return it->second;
        return proto_;
    }

    C constant_coeff() const {
        if (!terms_.empty() && ev_total(terms_[0].first) == 0)
            return terms_[0].second;
        return proto_;
    }

    TruncSeries operator+(const TruncSeries &o) const {
        check_context(o);
        TruncSeries r(p_, m_, arity_, proto_);
        size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size() ||
                (i < terms_.size() && ev_less(terms_[i].first, o.terms_[j].first))) {
                r.terms_.push_back(terms_[i++]);
            } else if (i == terms_.size() || ev_less(o.terms_[j].first, terms_[i].first)) {
                r.terms_.push_back(o.terms_[j++]);
            } else {
                C c = terms_[i].second + o.terms_[j].second;
                if (!ring_is_zero(c))
                    r.terms_.push_back({terms_[i].first, c});
                ++i, ++j;
            }
        }
        return r;
    }

    TruncSeries operator-() const {
        TruncSeries r = *this;
        for (auto &t : r.terms_)
            t.second = -t.second;
        return r;
    }
    TruncSeries operator-(const TruncSeries &o) const { return *this + (-o); }

    TruncSeries operator*(const TruncSeries &o) const {
        check_context(o);
        TruncSeries r(p_, m_, arity_, proto_);
        if (is_zero() || o.is_zero())
            return r;
        std::map<ExpVec, C, bool (*)(const ExpVec &, const ExpVec &)> acc(
            [](const ExpVec &a, const ExpVec &b) { return ev_less(a, b); });
        for (auto &a : terms_)
            for (auto &b : o.terms_) {
                ExpVec e = ev_add(a.first, b.first);
                if (!in_bounds(e))
                    continue; // the defining relations kill this monomial
                C c = a.second * b.second;
                auto it = acc.find(e);
                if (it == acc.end())
                    acc.emplace(std::move(e), std::move(c));
                else
                    it->second = it->second + c;
            }
        for (auto &kv : acc)
            if (!ring_is_zero(kv.second))
                r.terms_.push_back({kv.first, kv.second});
        return r;
    }

    TruncSeries scaled(const C &c) const {
        TruncSeries r(p_, m_, arity_, proto_);
        if (ring_is_zero(c))
            return r;
        for (auto &t : terms_) {
            C v = t.second * c;
            if (!ring_is_zero(v))
                r.terms_.push_back({t.first, v});
        }
        return r;
    }

    TruncSeries pow(uint32_t k) const {
        TruncSeries acc = one(p_, m_, arity_, proto_);
        TruncSeries base = *this;
        while (k) {
            if (k & 1)
                acc = acc * base;
            k >>= 1;
            if (k)
                base = base * base;
        }
        return acc;
    }

    bool operator==(const TruncSeries &o) const {
        return p_ == o.p_ && m_ == o.m_ && arity_ == o.arity_ && terms_ == o.terms_;
    }
    bool operator!=(const TruncSeries &o) const { return !(*this == o); }

    /// Inverse of a unit, by a Neumann series on the nilpotent part.
    /// The nilpotency degree is at most arity*(p^m - 1) + 1.
    TruncSeries invert() const {
        C c0 = constant_coeff();
        auto c0inv = ring_inverse(c0);
        if (!c0inv)
            throw unit_error("ts_invert: constant term is not a unit");
        TruncSeries u = *this - constant(p_, m_, arity_, c0); // nilpotent part
        TruncSeries w = u.scaled(*c0inv);                     // still nilpotent
        TruncSeries acc = one(p_, m_, arity_, proto_);
        TruncSeries pw = -w;
        while (!pw.is_zero()) {
            acc = acc + pw;
            pw = pw * (-w);
        }
        return acc.scaled(*c0inv);
    }

    /// Level lowering: discard monomials with any exponent >= p^{m2}.
    TruncSeries truncate(int m2) const {
        if (m2 > m_)
            throw argument_error("ts_truncate: target level exceeds source level");
        TruncSeries r(p_, m2, arity_, proto_);
        for (auto &t : terms_)
            if (r.in_bounds(t.first))
                r.terms_.push_back(t);
        return r;
    }

    /// Substitute args[i] for variable i; exact composite in the target ring.
    TruncSeries substitute(const std::vector<TruncSeries> &args) const {
        if (int(args.size()) != arity_)
            throw argument_error("ts_substitute: arity mismatch");
        for (auto &a : args)
            if (!args.empty() && (a.p() != args[0].p() || a.level() != args[0].level() ||
                                  a.arity() != args[0].arity()))
                throw argument_error("ts_substitute: argument contexts differ");
        int64_t tp = args.empty() ? p_ : args[0].p();
        int tm = args.empty() ? m_ : args[0].level();
        int ta = args.empty() ? 0 : args[0].arity();
        TruncSeries acc = zero(tp, tm, ta, proto_);
        for (auto &t : terms_) {
            TruncSeries term = constant(tp, tm, ta, t.second);
            for (int v = 0; v < arity_; ++v)
                if (t.first[v])
                    term = term * args[v].pow(t.first[v]);
            acc = acc + term;
        }
        return acc;
    }

    template <class C2>
    TruncSeries<C2> map_coefficients(const std::function<C2(const C &)> &f, const C2 &proto2) const {
        TruncSeries<C2> r(p_, m_, arity_, proto2);
        for (auto &t : terms_) {
            C2 c = f(t.second);
            if (!ring_is_zero(c))
                r.mutable_terms().push_back({t.first, c});
        }
        return r;
    }

    // extend into a wider ring; old variable i becomes variable map[i]
    TruncSeries remap_variables(int new_arity, const std::vector<int> &map) const {
        TruncSeries r(p_, m_, new_arity, proto_);
        for (auto &t : terms_) {
            ExpVec e(new_arity, 0);
            for (int v = 0; v < arity_; ++v)
                e[map[v]] += t.first[v];
            r.terms_.push_back({std::move(e), t.second});
        }
        r.restore_invariants();
        return r;
    }

    std::vector<Term> &mutable_terms() { return terms_; }
    void restore_invariants() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term &a, const Term &b) { return ev_less(a.first, b.first); });
        std::vector<Term> out;
        for (auto &t : terms_) {
            if (!in_bounds(t.first) || ring_is_zero(t.second))
                continue;
            if (!out.empty() && out.back().first == t.first)
                out.back().second = out.back().second + t.second;
            else
                out.push_back(t);
        }
        terms_.clear();
        for (auto &t : out)
            if (!ring_is_zero(t.second))
                terms_.push_back(std::move(t));
    }

    std::string to_string(const std::function<std::string(int)> &var_name) const {
        if (terms_.empty())
            return "0";
        std::string s;
        for (auto &t : terms_) { // ascending order: constant term first
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

  private:
    void check_context(const TruncSeries &o) const {
        if (p_ != o.p_ || m_ != o.m_ || arity_ != o.arity_)
            throw argument_error("truncated series context mismatch");
    }

    int64_t p_ = 2;
    int m_ = 1;
    int arity_ = 0;
    uint32_t bound_ = 2;
    C proto_{};
    std::vector<Term> terms_;
};

/// Substitute truncated series into a plain polynomial, embedding its
/// coefficients: f(args) with coefficients carried through `embed`.
template <class K, class C>
TruncSeries<C> substitute_poly(const MPoly<K> &f, const std::vector<TruncSeries<C>> &args,
                               const std::function<C(const K &)> &embed, const C &proto) {
    if (args.empty())
        throw argument_error("substitute_poly: no arguments");
    if (int(args.size()) != f.arity())
        throw argument_error("substitute_poly: arity mismatch");
    int64_t p = args[0].p();
    int m = args[0].level();
    int a = args[0].arity();
    TruncSeries<C> acc = TruncSeries<C>::zero(p, m, a, proto);
    for (auto &t : f.terms()) {
        TruncSeries<C> term = TruncSeries<C>::constant(p, m, a, embed(t.second));
        for (int v = 0; v < f.arity(); ++v)
            if (t.first[v])
                term = term * args[v].pow(t.first[v]);
        acc = acc + term;
    }
    return acc;
}

using TruncFq = TruncSeries<Fq>;

} // namespace hsfg

#endif
