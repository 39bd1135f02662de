#ifndef HSFG_POLY_ALGORITHMS_HPP
#define HSFG_POLY_ALGORITHMS_HPP

#include <deque>

#include "hsfg/mpoly.hpp"

namespace hsfg {

template <class K>
struct DivModResult {
    std::vector<MPoly<K>> quotients;
    MPoly<K> remainder;
};

/// Multivariate division with remainder: f = sum q_i * g_i + r, no term of r
/// divisible by any leading term of the divisors (under `ord`).
template <class K>
DivModResult<K> poly_divmod(const MPoly<K> &f, const std::vector<MPoly<K>> &divisors,
                            MonomialOrder ord = MonomialOrder::GrLex) {
    if (divisors.empty())
        throw argument_error("poly_divmod: empty divisor list");
    for (auto &g : divisors)
        if (g.is_zero())
            throw argument_error("poly_divmod: zero divisor");
    DivModResult<K> res;
    res.quotients.assign(divisors.size(), MPoly<K>(f.arity(), f.proto()));
    res.remainder = MPoly<K>(f.arity(), f.proto());
    MPoly<K> h = f;
    while (!h.is_zero()) {
        auto &lt = h.leading_term(ord);
        bool divided = false;
        for (size_t i = 0; i < divisors.size(); ++i) {
            auto &gt = divisors[i].leading_term(ord);
            if (!ev_divides(gt.first, lt.first))
                continue;
            K c = lt.second * gt.second.inverse();
            ExpVec e = ev_sub(lt.first, gt.first);
            auto mono = MPoly<K>::monomial(f.arity(), e, c);
            res.quotients[i] = res.quotients[i] + mono;
            h = h - divisors[i].shifted(e).scaled(c);
            divided = true;
            break;
        }
        if (!divided) {
            auto mono = MPoly<K>::monomial(f.arity(), lt.first, lt.second);
            res.remainder = res.remainder + mono;
            h = h - mono;
        }
    }
    return res;
}

template <class K>
MPoly<K> poly_reduce(const MPoly<K> &f, const std::vector<MPoly<K>> &basis,
                     MonomialOrder ord = MonomialOrder::GrLex) {
    if (basis.empty())
        return f;
    return poly_divmod(f, basis, ord).remainder;
}

namespace detail {

// dense univariate helpers over F_q (packed coefficients, no allocation per op)
inline std::vector<int64_t> dense_from_poly(const PolyFq &f) {
    std::vector<int64_t> c(size_t(f.degree_in(0)) + 1, 0);
    for (auto &t : f.terms())
        c[t.first[0]] = t.second.packed();
    return c;
}

inline PolyFq dense_to_poly(const std::vector<int64_t> &c, const Fq &proto) {
    PolyFq f(1, proto);
    for (uint32_t d = 0; d < c.size(); ++d)
        if (c[d])
            f.mutable_terms().push_back({ExpVec{d}, Fq::from_packed(proto.field(), c[d])});
    return f;
}

inline void dense_trim(std::vector<int64_t> &a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

// a := a mod b (b nonzero), in place
inline void dense_rem(std::vector<int64_t> &a, const std::vector<int64_t> &b,
                      const FqField &field) {
    int64_t lead_inv = field.inv_packed(b.back());
    while (a.size() >= b.size()) {
        int64_t c = field.mul_packed(a.back(), lead_inv);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] =
                field.add_packed(a[shift + i], field.neg_packed(field.mul_packed(c, b[i])));
        dense_trim(a);
        if (a.empty())
            return;
    }
}

inline PolyFq gcd_univariate_fq(const PolyFq &f, const PolyFq &g) {
    const FqField &field = *f.proto().field();
    auto a = dense_from_poly(f), b = dense_from_poly(g);
    while (!b.empty()) {
        dense_rem(a, b, field);
        std::swap(a, b);
    }
    int64_t lead_inv = field.inv_packed(a.back());
    for (auto &c : a)
        c = field.mul_packed(c, lead_inv);
    return dense_to_poly(a, f.proto());
}

inline PolyFq exact_div_univariate_fq(const PolyFq &f, const PolyFq &g) {
    const FqField &field = *f.proto().field();
    auto a = dense_from_poly(f);
    auto b = dense_from_poly(g);
    std::vector<int64_t> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    int64_t lead_inv = field.inv_packed(b.back());
    while (a.size() >= b.size()) {
        int64_t c = field.mul_packed(a.back(), lead_inv);
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] =
                field.add_packed(a[shift + i], field.neg_packed(field.mul_packed(c, b[i])));
        dense_trim(a);
        if (a.empty())
            break;
    }
    if (!a.empty())
        throw argument_error("exact_div: not divisible");
    return dense_to_poly(q, f.proto());
}

} // namespace detail

template <class K>
MPoly<K> exact_div(const MPoly<K> &f, const MPoly<K> &g) {
    if constexpr (std::is_same_v<K, Fq>) {
        if (f.arity() == 1 && !g.is_zero()) {
            if (f.is_zero())
                return f;
            return detail::exact_div_univariate_fq(f, g);
        }
    }
    auto r = poly_divmod(f, std::vector<MPoly<K>>{g});
    if (!r.remainder.is_zero())
        throw argument_error("exact_div: not divisible");
    return r.quotients[0];
}

template <class K>
MPoly<K> make_monic(const MPoly<K> &f, MonomialOrder ord = MonomialOrder::GrLex) {
    if (f.is_zero())
        return f;
    return f.scaled(f.leading_term(ord).second.inverse());
}

namespace detail {

// view f as univariate in `var`; coefficients keep full arity with var removed
template <class K>
std::vector<MPoly<K>> to_univariate(const MPoly<K> &f, int var) {
    std::vector<MPoly<K>> coeffs(size_t(f.degree_in(var)) + 1,
                                 MPoly<K>(f.arity() - 1, f.proto()));
    for (auto &t : f.terms()) {
        ExpVec e;
        e.reserve(f.arity() - 1);
        for (int v = 0; v < f.arity(); ++v)
            if (v != var)
                e.push_back(t.first[v]);
        coeffs[t.first[var]].mutable_terms().push_back({std::move(e), t.second});
    }
    for (auto &c : coeffs)
        c.restore_invariants();
    while (coeffs.size() > 1 && coeffs.back().is_zero())
        coeffs.pop_back();
    return coeffs;
}

template <class K>
MPoly<K> from_univariate(const std::vector<MPoly<K>> &coeffs, int var, int arity, const K &proto) {
    MPoly<K> r(arity, proto);
    for (uint32_t d = 0; d < coeffs.size(); ++d)
        for (auto &t : coeffs[d].terms()) {
            ExpVec e(arity, 0);
            int src = 0;
            for (int v = 0; v < arity; ++v)
                e[v] = (v == var) ? d : t.first[src++];
            r.mutable_terms().push_back({std::move(e), t.second});
        }
    r.restore_invariants();
    return r;
}

template <class K>
MPoly<K> gcd_univariate(MPoly<K> a, MPoly<K> b) {
    while (!b.is_zero()) {
        auto r = poly_divmod(a, std::vector<MPoly<K>>{b}).remainder;
        a = b;
        b = r;
    }
    return make_monic(a);
}

} // namespace detail

/// GCD in K[x_1..x_n] (K a field), normalized monic under graded-lex.
/// Recursion on the number of variables with a primitive PRS in the last one.
template <class K>
MPoly<K> poly_gcd(const MPoly<K> &f, const MPoly<K> &g) {
    if (f.is_zero())
        return make_monic(g);
    if (g.is_zero())
        return make_monic(f);
    if (f.is_constant() || g.is_constant())
        return MPoly<K>::constant(f.arity(), ring_one_like(f.proto()));
    if (f.term_count() == 1 || g.term_count() == 1) {
        // against a monomial: entrywise minimum over all exponent vectors
        ExpVec m(size_t(f.arity()), ~uint32_t(0));
        for (auto &t : f.terms())
            for (int v = 0; v < f.arity(); ++v)
                m[v] = std::min(m[v], t.first[v]);
        for (auto &t : g.terms())
            for (int v = 0; v < f.arity(); ++v)
                m[v] = std::min(m[v], t.first[v]);
        return MPoly<K>::monomial(f.arity(), m, ring_one_like(f.proto()));
    }
    int var = -1;
    for (int v = f.arity() - 1; v >= 0 && var < 0; --v)
        if (f.degree_in(v) > 0 || g.degree_in(v) > 0)
            var = v;
    if (f.arity() == 1) {
        if constexpr (std::is_same_v<K, Fq>)
            return detail::gcd_univariate_fq(f, g);
        else
            return detail::gcd_univariate(f, g);
    }
    auto fu = detail::to_univariate(f, var);
    auto gu = detail::to_univariate(g, var);
    auto content = [&](const std::vector<MPoly<K>> &u) {
        MPoly<K> c = u[0];
        for (size_t i = 1; i < u.size(); ++i)
            c = poly_gcd(c, u[i]);
        return make_monic(c);
    };
    auto primitive = [&](std::vector<MPoly<K>> u, const MPoly<K> &cont) {
        for (auto &c : u)
            if (!c.is_zero())
                c = exact_div(c, cont);
        return u;
    };
    MPoly<K> cf = content(fu), cg = content(gu);
    MPoly<K> cont_gcd = poly_gcd(cf, cg);
    auto A = primitive(fu, cf);
    auto B = primitive(gu, cg);
    if (A.size() < B.size())
        std::swap(A, B);
    // subresultant pseudo-remainder sequence in `var`: dividing each
    // remainder by g*h^delta keeps the coefficient degrees from exploding
    MPoly<K> one_c = MPoly<K>::constant(f.arity() - 1, ring_one_like(f.proto()));
    MPoly<K> g_c = one_c, h_c = one_c;
    auto trim = [](std::vector<MPoly<K>> &u) {
        while (u.size() > 1 && u.back().is_zero())
            u.pop_back();
    };
    trim(A);
    trim(B);
    while (true) {
        bool b_zero = B.size() == 1 && B[0].is_zero();
        if (b_zero)
            break;
        size_t delta = A.size() - B.size(); // deg A - deg B
        // pseudo-remainder: lc(B)^{delta+1} A  mod  B
        std::vector<MPoly<K>> R = A;
        MPoly<K> lb = B.back();
        size_t scale_left = delta + 1;
        while (R.size() >= B.size() && !(R.size() == 1 && R[0].is_zero())) {
            size_t shift = R.size() - B.size();
            MPoly<K> lr = R.back();
            for (auto &c : R)
                c = c * lb;
            --scale_left;
            for (size_t i = 0; i < B.size(); ++i)
                R[shift + i] = R[shift + i] - B[i] * lr;
            trim(R);
        }
        for (size_t s = 0; s < scale_left; ++s)
            for (auto &c : R)
                c = c * lb;
        A = B;
        if (R.size() == 1 && R[0].is_zero()) {
            B = R;
            continue;
        }
        MPoly<K> divisor = g_c * h_c.pow(uint32_t(delta));
        for (auto &c : R)
            if (!c.is_zero())
                c = exact_div(c, divisor);
        B = R;
        g_c = A.back();
        if (delta == 1)
            h_c = g_c;
        else if (delta > 1)
            h_c = exact_div(g_c.pow(uint32_t(delta)), h_c.pow(uint32_t(delta - 1)));
    }
    MPoly<K> ca = content(A);
    A = primitive(A, ca);
    MPoly<K> prim_gcd = detail::from_univariate(A, var, f.arity(), f.proto());
    MPoly<K> cont_full = cont_gcd.remap_variables(f.arity(), [&] {
        std::vector<int> map;
        for (int v = 0; v < f.arity(); ++v)
            if (v != var)
                map.push_back(v);
        return map;
    }());
    return make_monic(prim_gcd * cont_full);
}

struct GroebnerOptions {
    MonomialOrder order = MonomialOrder::GrLex;
    uint64_t pair_budget = 100000; // S-pairs processed before giving up
};

/// Buchberger with a resource budget; returns the reduced Groebner basis.
template <class K>
std::vector<MPoly<K>> buchberger(const std::vector<MPoly<K>> &generators,
                                 const GroebnerOptions &opt = {}) {
    std::vector<MPoly<K>> basis;
    for (auto &g : generators)
        if (!g.is_zero())
            basis.push_back(make_monic(g, opt.order));
    if (basis.empty())
        return basis;
    std::deque<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j)
            pairs.push_back({i, j});
    uint64_t processed = 0;
    while (!pairs.empty()) {
        if (++processed > opt.pair_budget)
            throw budget_error("buchberger: S-pair budget exceeded");
        auto [i, j] = pairs.front();
        pairs.pop_front();
        const auto &fi = basis[i], &fj = basis[j];
        const ExpVec &li = fi.leading_term(opt.order).first;
        const ExpVec &lj = fj.leading_term(opt.order).first;
        // Buchberger's first criterion: coprime leading monomials
        ExpVec l = ev_lcm(li, lj);
        if (l == ev_add(li, lj))
            continue;
        MPoly<K> spoly = fi.shifted(ev_sub(l, li)) - fj.shifted(ev_sub(l, lj));
        MPoly<K> rem = poly_reduce(spoly, basis, opt.order);
        if (rem.is_zero())
            continue;
        rem = make_monic(rem, opt.order);
        for (size_t t = 0; t < basis.size(); ++t)
            pairs.push_back({t, basis.size()});
        basis.push_back(rem);
    }
    // inter-reduce to the reduced basis
    std::vector<MPoly<K>> reduced;
    for (size_t i = 0; i < basis.size(); ++i) {
        std::vector<MPoly<K>> others;
        for (size_t j = 0; j < basis.size(); ++j)
            if (j != i)
                others.push_back(basis[j]);
        MPoly<K> r = others.empty() ? basis[i] : poly_reduce(basis[i], others, opt.order);
        if (!r.is_zero())
            reduced.push_back(make_monic(r, opt.order));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const MPoly<K> &a, const MPoly<K> &b) {
        return ev_less(a.leading_term(opt.order).first, b.leading_term(opt.order).first, opt.order);
    });
    // a second pass: reduce tails against the final leading terms
    for (size_t i = 0; i < reduced.size(); ++i) {
        std::vector<MPoly<K>> others;
        for (size_t j = 0; j < reduced.size(); ++j)
            if (j != i)
                others.push_back(reduced[j]);
        if (!others.empty())
            reduced[i] = make_monic(poly_reduce(reduced[i], others, opt.order), opt.order);
    }
    return reduced;
}

template <class K>
bool ideal_membership(const MPoly<K> &f, const std::vector<MPoly<K>> &groebner_basis,
                      MonomialOrder ord = MonomialOrder::GrLex) {
    if (f.is_zero())
        return true;
    if (groebner_basis.empty())
        return false;
    return poly_reduce(f, groebner_basis, ord).is_zero();
}

} // namespace hsfg

#endif
