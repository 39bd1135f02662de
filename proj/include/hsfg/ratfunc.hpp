#ifndef HSFG_RATFUNC_HPP
#define HSFG_RATFUNC_HPP

#include "hsfg/poly_algorithms.hpp"

namespace hsfg {

/// Element of the rational function field F_q(t_1..t_r), stored reduced to
/// lowest terms with a monic (graded-lex) denominator. Those two
/// normalizations make representatives unique, so == is structural.
class RatFunc {
  public:
    RatFunc() = default;
    explicit RatFunc(PolyFq num) : num_(std::move(num)) {
        den_ = PolyFq::constant(num_.arity(), ring_one_like(num_.proto()));
    }
    RatFunc(PolyFq num, PolyFq den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static RatFunc zero(int arity, const Fq &proto) {
        return RatFunc(PolyFq::zero(arity, proto));
    }
    static RatFunc constant(int arity, const Fq &c) {
        return RatFunc(PolyFq::constant(arity, c));
    }
    static RatFunc variable(int arity, int var, const Fq &proto) {
        return RatFunc(PolyFq::variable(arity, var, proto));
    }

    const PolyFq &num() const { return num_; }
    const PolyFq &den() const { return den_; }
    int arity() const { return num_.arity(); }
    const Fq &proto() const { return num_.proto(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }

    RatFunc operator+(const RatFunc &o) const {
        if (den_ == o.den_)
            return RatFunc(num_ + o.num_, den_);
        return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    RatFunc operator-(const RatFunc &o) const { return *this + (-o); }
    RatFunc operator*(const RatFunc &o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
    RatFunc operator/(const RatFunc &o) const {
        if (o.is_zero())
            throw unit_error("division by zero rational function");
        return RatFunc(num_ * o.den_, den_ * o.num_);
    }
    RatFunc &operator+=(const RatFunc &o) { return *this = *this + o; }
    RatFunc &operator-=(const RatFunc &o) { return *this = *this - o; }
    RatFunc &operator*=(const RatFunc &o) { return *this = *this * o; }

    bool operator==(const RatFunc &o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc &o) const { return !(*this == o); }

    RatFunc inverse() const {
        if (is_zero())
            throw unit_error("inverse of zero rational function");
        return RatFunc(den_, num_);
    }

    RatFunc pow(uint32_t k) const {
        RatFunc acc = constant(arity(), ring_one_like(proto()));
        RatFunc base = *this;
        while (k) {
            if (k & 1)
                acc = acc * base;
            k >>= 1;
            if (k)
                base = base * base;
        }
        return acc;
    }

    // substitute variables by rational functions (e.g. context embeddings)
    RatFunc substitute(const std::vector<RatFunc> &args) const {
        int out_arity = args.empty() ? 0 : args[0].arity();
        RatFunc acc_num = zero(out_arity, proto());
        for (auto &t : num_.terms()) {
            RatFunc term = constant(out_arity, t.second);
            for (int v = 0; v < arity(); ++v)
                if (t.first[v])
                    term = term * args[v].pow(t.first[v]);
            acc_num = acc_num + term;
        }
        RatFunc acc_den = zero(out_arity, proto());
        for (auto &t : den_.terms()) {
            RatFunc term = constant(out_arity, t.second);
            for (int v = 0; v < arity(); ++v)
                if (t.first[v])
                    term = term * args[v].pow(t.first[v]);
            acc_den = acc_den + term;
        }
        if (acc_den.is_zero())
            throw unit_error("substitution maps denominator to zero");
        return acc_num / acc_den;
    }

    std::string to_string(const std::function<std::string(int)> &var_name) const {
        if (is_polynomial())
            return num_.to_string(var_name);
        std::string n = num_.to_string(var_name);
        std::string d = den_.to_string(var_name);
        if (num_.term_count() > 1)
            n = "(" + n + ")";
        if (den_.term_count() > 1)
            d = "(" + d + ")";
        return n + "/" + d;
    }

  private:
    void reduce() {
        if (den_.is_zero())
            throw unit_error("zero denominator");
        if (num_.is_zero()) {
            den_ = PolyFq::constant(num_.arity(), ring_one_like(num_.proto()));
            return;
        }
        PolyFq g = poly_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
        Fq lc = den_.leading_term().second;
        if (!lc.is_one()) {
            Fq inv = lc.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    PolyFq num_;
    PolyFq den_;
};

inline RatFunc ring_zero_like(const RatFunc &x) { return RatFunc::zero(x.arity(), x.proto()); }
inline RatFunc ring_one_like(const RatFunc &x) {
    return RatFunc::constant(x.arity(), ring_one_like(x.proto()));
}
inline bool ring_is_zero(const RatFunc &x) { return x.is_zero(); }
inline std::optional<RatFunc> ring_inverse(const RatFunc &x) {
    if (x.is_zero())
        return std::nullopt;
    return x.inverse();
}
inline std::string ring_to_string(const RatFunc &x) {
    return x.to_string([](int v) { return "x" + std::to_string(v + 1); });
}

/// True iff every exponent in a polynomial is divisible by p entrywise.
inline bool poly_exponents_divisible(const PolyFq &f, int64_t p) {
    for (auto &t : f.terms())
        for (uint32_t e : t.first)
            if (e % uint32_t(p) != 0)
                return false;
    return true;
}

inline PolyFq poly_pth_root(const PolyFq &f, int64_t p) {
    PolyFq r(f.arity(), f.proto());
    for (auto &t : f.terms()) {
        ExpVec e = t.first;
        for (auto &x : e)
            x /= uint32_t(p);
        r.mutable_terms().push_back({std::move(e), t.second.pth_root()});
    }
    r.restore_invariants();
    return r;
}

/// x in K^p for K = F_q(t_1..t_r)? Coefficients over F_q are automatically
/// p-th powers, so this is the exponent-divisibility test on the reduced form.
inline bool is_pth_power(const RatFunc &x) {
    int64_t p = x.proto().p();
    return poly_exponents_divisible(x.num(), p) && poly_exponents_divisible(x.den(), p);
}

/// The p-th root function: y with y^p = x when x is a p-th power, else 0.
inline RatFunc lambda(const RatFunc &x) {
    if (!is_pth_power(x))
        return ring_zero_like(x);
    int64_t p = x.proto().p();
    return RatFunc(poly_pth_root(x.num(), p), poly_pth_root(x.den(), p));
}

/// On F_q every element is a p-th power (perfect field).
inline Fq lambda(const Fq &x) { return x.pth_root(); }

using JetPoly = MPoly<RatFunc>; // polynomials in jet variables over K

} // namespace hsfg

#endif
