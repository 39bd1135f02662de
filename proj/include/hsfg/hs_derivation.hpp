#ifndef HSFG_HS_DERIVATION_HPP
#define HSFG_HS_DERIVATION_HPP

#include "hsfg/formal_group.hpp"
#include "hsfg/linalg.hpp"

namespace hsfg {

struct inconsistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RingKind { Polynomial, RationalFunction, PowerSeries };

/// Carrier description for a derivation: base field F_{p^n}, named
/// generators, truncation level m and dimension e. Power-series contexts
/// carry an explicit X-precision N >= p^m; outputs are exact below it.
struct DerivCtx {
    FqFieldPtr field;
    RingKind kind = RingKind::RationalFunction;
    std::vector<std::string> gens;
    int m = 1;
    int e = 1;
    int precision = 0; // N, power-series contexts only

    int arity() const { return int(gens.size()); }
    int64_t p() const { return field->p(); }
    uint32_t index_bound() const { return uint32_t(ipow(uint64_t(p()), uint32_t(m))); }
    IndexSet indices() const { return IndexSet(index_bound(), size_t(e)); }

    void validate() const {
        if (!field || m < 1 || e < 1 || gens.empty())
            throw argument_error("derivation context: missing field, generators, m or e");
        for (size_t i = 0; i < gens.size(); ++i)
            for (size_t j = i + 1; j < gens.size(); ++j)
                if (gens[i] == gens[j])
                    throw argument_error("derivation context: duplicate generator " + gens[i]);
        if (kind == RingKind::PowerSeries && precision < int64_t(index_bound()))
            throw argument_error("power-series context needs precision N >= p^m");
    }

    bool same_shape(const DerivCtx &o) const {
        return field->same(*o.field) && kind == o.kind && gens == o.gens && m == o.m && e == o.e;
    }

    DerivCtx truncated(int m2) const {
        DerivCtx c = *this;
        c.m = m2;
        return c;
    }
};

template <class Elem>
struct ElemOps; // per-context element plumbing

template <>
struct ElemOps<RatFunc> {
    static RatFunc constant(const DerivCtx &c, const Fq &v) {
        return RatFunc::constant(c.arity(), v);
    }
    static RatFunc generator(const DerivCtx &c, int t) {
        return RatFunc::variable(c.arity(), t, c.field->one());
    }
    static RatFunc clip(const DerivCtx &, RatFunc x) { return x; }
    static PolyFq as_poly(const RatFunc &x) {
        if (!x.is_polynomial())
            throw argument_error("expected a polynomial ring element");
        return x.num();
    }
    static RatFunc from_poly(const DerivCtx &, const PolyFq &f) { return RatFunc(f); }
};

template <>
struct ElemOps<PolyFq> {
    static PolyFq constant(const DerivCtx &c, const Fq &v) {
        return PolyFq::constant(c.arity(), v);
    }
    static PolyFq generator(const DerivCtx &c, int t) {
        return PolyFq::variable(c.arity(), t, c.field->one());
    }
    static PolyFq clip(const DerivCtx &c, PolyFq x) {
        if (c.kind != RingKind::PowerSeries)
            return x;
        PolyFq out(x.arity(), x.proto());
        for (auto &t : x.terms())
            if (ev_total(t.first) < uint64_t(c.precision))
                out.mutable_terms().push_back(t);
        return out;
    }
    static PolyFq as_poly(const PolyFq &x) { return x; }
    static PolyFq from_poly(const DerivCtx &, const PolyFq &f) { return f; }
};

/// An m-truncated e-dimensional HS-derivation given by generator images.
/// The extension to the whole ring is the unique ring homomorphism
/// R -> R[v_m] determined by them, so the homomorphism and Leibniz laws hold
/// by construction; apply() computes it on demand. Fractions go through
/// ts_invert of the denominator image, whose constant term is the
/// denominator itself.
template <class Elem>
class HSDerivationT {
  public:
    using Series = TruncSeries<Elem>;

    HSDerivationT(DerivCtx ctx, std::vector<Series> images)
        : ctx_(std::move(ctx)), images_(std::move(images)) {
        ctx_.validate();
        if (images_.size() != ctx_.gens.size())
            throw argument_error("one image per generator required");
        for (auto &img : images_)
            if (img.p() != ctx_.p() || img.level() != ctx_.m || img.arity() != ctx_.e)
                throw argument_error("image series context mismatch");
    }

    /// the trivial derivation: every generator maps to itself
    static HSDerivationT trivial(DerivCtx ctx) {
        ctx.validate();
        std::vector<Series> images;
        for (int t = 0; t < int(ctx.gens.size()); ++t)
            images.push_back(Series::constant(ctx.p(), ctx.m, ctx.e,
                                              ElemOps<Elem>::generator(ctx, t)));
        return HSDerivationT(ctx, std::move(images));
    }

    const DerivCtx &ctx() const { return ctx_; }
    const std::vector<Series> &images() const { return images_; }

    bool operator==(const HSDerivationT &o) const {
        return ctx_.same_shape(o.ctx_) && ctx_.m == o.ctx_.m && images_ == o.images_;
    }

    Series apply_poly(const PolyFq &f) const {
        if (f.arity() != ctx_.arity())
            throw argument_error("apply: element arity does not match the context");
        Elem proto = ElemOps<Elem>::constant(ctx_, ctx_.field->zero());
        Series acc = Series::zero(ctx_.p(), ctx_.m, ctx_.e, proto);
        // image powers are shared across the terms
        std::vector<std::vector<Series>> pows(size_t(f.arity()));
        auto power = [&](int v, uint32_t k) -> const Series & {
            auto &table = pows[size_t(v)];
            if (table.empty())
                table.push_back(Series::one(ctx_.p(), ctx_.m, ctx_.e, proto));
            while (table.size() <= k)
                table.push_back(clip_series(table.back() * images_[size_t(v)]));
            return table[k];
        };
        for (auto &t : f.terms()) {
            Series term = Series::constant(ctx_.p(), ctx_.m, ctx_.e,
                                           ElemOps<Elem>::constant(ctx_, t.second));
            for (int v = 0; v < f.arity(); ++v)
                if (t.first[v])
                    term = term * power(v, t.first[v]);
            acc = acc + clip_series(term);
        }
        return clip_series(acc);
    }

    Series apply(const Elem &x) const {
        if constexpr (std::is_same_v<Elem, RatFunc>) {
            Series n = apply_poly(x.num());
            if (x.is_polynomial())
                return n;
            return n * invert_fraction_image(apply_poly(x.den()));
        } else {
            return apply_poly(x);
        }
    }

    /// the operator D_i
    Elem component(const ExpVec &i, const Elem &x) const { return apply(x).coeff(i); }

    HSDerivationT truncated(int m2) const {
        if (m2 > ctx_.m)
            throw argument_error("truncate_derivation: target level exceeds source");
        std::vector<Series> images;
        for (auto &img : images_)
            images.push_back(img.truncate(m2));
        return HSDerivationT(ctx_.truncated(m2), std::move(images));
    }

    AxiomVerdict check_hs_homomorphism() const {
        for (size_t t = 0; t < images_.size(); ++t) {
            Elem c0 = images_[t].constant_coeff();
            if (!(c0 == ElemOps<Elem>::generator(ctx_, int(t))))
                return {false, "image of " + ctx_.gens[t] +
                                   " is not a section: constant term differs from the generator"};
        }
        return {};
    }

  private:
    Series clip_series(const Series &s) const {
        if (ctx_.kind != RingKind::PowerSeries)
            return s;
        return s.template map_coefficients<Elem>(
            [&](const Elem &c) { return ElemOps<Elem>::clip(ctx_, c); },
            ElemOps<Elem>::constant(ctx_, ctx_.field->zero()));
    }

    /// Inverse of a denominator image. When every coefficient is polynomial
    /// the Neumann sum is taken over a common denominator c0^K, so fraction
    /// reduction happens once per output coefficient instead of per step.
    static TruncSeries<RatFunc> invert_fraction_image(const TruncSeries<RatFunc> &S) {
        RatFunc c0 = S.constant_coeff();
        if (c0.is_zero())
            throw unit_error("apply: denominator image has no invertible constant term");
        bool all_poly = true;
        for (auto &t : S.terms())
            if (!t.second.is_polynomial())
                all_poly = false;
        if (!all_poly)
            return S.invert();
        RatFunc one = ring_one_like(c0);
        TruncSeries<RatFunc> U =
            S - TruncSeries<RatFunc>::constant(S.p(), S.level(), S.arity(), c0);
        std::vector<TruncSeries<RatFunc>> upows;
        upows.push_back(TruncSeries<RatFunc>::one(S.p(), S.level(), S.arity(), one));
        while (!upows.back().is_zero())
            upows.push_back(upows.back() * U);
        upows.pop_back();
        size_t K = upows.size(); // U^K = 0
        PolyFq c0p = c0.num();
        std::vector<PolyFq> c0pows{PolyFq::constant(c0p.arity(), ring_one_like(c0p.proto()))};
        for (size_t k = 1; k < K; ++k)
            c0pows.push_back(c0pows.back() * c0p);
        TruncSeries<RatFunc> numer =
            TruncSeries<RatFunc>::zero(S.p(), S.level(), S.arity(), ring_zero_like(c0));
        bool negate = false;
        for (size_t k = 0; k < K; ++k) {
            RatFunc scale = RatFunc(c0pows[K - 1 - k]);
            if (negate)
                scale = -scale;
            numer = numer + upows[k].scaled(scale);
            negate = !negate;
        }
        PolyFq den = c0pows.back() * c0p; // c0^K
        return numer.map_coefficients<RatFunc>(
            [&](const RatFunc &c) { return RatFunc(c.num(), den); }, ring_zero_like(c0));
    }

    DerivCtx ctx_;
    std::vector<Series> images_;
};

using HSDerivation = HSDerivationT<RatFunc>;  // polynomial and rational contexts
using HSDerivationPS = HSDerivationT<PolyFq>; // power-series contexts

/// Both composites R -> R[v_m, w_m] of the iterativity square, compared on
/// generators: the comultiplication side sends v^k to F(v, w)^k; the other
/// side applies the derivation to every coefficient with output in the
/// w-block. Equality on generators settles it for the whole ring, both
/// sides being ring homomorphisms.
template <class Elem>
AxiomVerdict check_iterativity(const HSDerivationT<Elem> &D, const TruncatedGroupLaw &g) {
    const DerivCtx &ctx = D.ctx();
    if (g.dim() != ctx.e || g.level() != ctx.m || g.p() != ctx.p())
        throw argument_error("check_iterativity: law and derivation contexts differ");
    Elem zero = ElemOps<Elem>::constant(ctx, ctx.field->zero());
    auto embed = [&](const Fq &c) { return ElemOps<Elem>::constant(ctx, c); };
    int e = ctx.e;
    std::vector<int> wmap(e);
    for (int t = 0; t < e; ++t)
        wmap[t] = e + t;
    for (size_t t = 0; t < D.images().size(); ++t) {
        const auto &A = D.images()[t];
        auto comult_side = comultiplication_map<Elem>(g, A, embed);
        TruncSeries<Elem> coeff_side =
            TruncSeries<Elem>::zero(ctx.p(), ctx.m, 2 * e, zero);
        for (auto &term : A.terms()) {
            auto B = D.apply(term.second).remap_variables(2 * e, wmap);
            ExpVec vmono(2 * e, 0);
            for (int s = 0; s < e; ++s)
                vmono[s] = term.first[s];
            coeff_side = coeff_side + B * TruncSeries<Elem>::monomial(
                                              ctx.p(), ctx.m, 2 * e, vmono,
                                              ElemOps<Elem>::constant(ctx, ctx.field->one()));
        }
        if (!(comult_side == coeff_side)) {
            auto namer = [&](int v) {
                return v < e ? "v" + std::to_string(v + 1) : "w" + std::to_string(v - e + 1);
            };
            return {false, "iterativity fails on generator " + ctx.gens[t] + " at monomial " +
                               ts_first_difference(comult_side, coeff_side, namer)};
        }
    }
    return {};
}

/// Generator images X_t -> F_t(v, X): the new variables fill the law's first
/// argument block. f -> f(F) in the truncated ring.
template <class Elem>
std::vector<TruncSeries<Elem>> canonical_images(const FormalGroupLaw &F, const DerivCtx &ctx) {
    int e = F.dim();
    uint32_t bound = ctx.index_bound();
    Elem zero = ElemOps<Elem>::constant(ctx, ctx.field->zero());
    std::vector<TruncSeries<Elem>> images;
    for (int t = 0; t < e; ++t) {
        TruncSeries<Elem> img(ctx.p(), ctx.m, e, zero);
        for (auto &term : F.components()[t].terms()) {
            ExpVec vexp(term.first.begin(), term.first.begin() + e);
            ExpVec xexp(term.first.begin() + e, term.first.end());
            bool keep = true;
            for (uint32_t x : vexp)
                if (x >= bound)
                    keep = false;
            if (!keep)
                continue; // truncated away in v
            Elem coeff = ElemOps<Elem>::constant(ctx, term.second);
            for (int s = 0; s < e; ++s)
                if (xexp[s])
                    coeff = coeff * ElemOps<Elem>::generator(ctx, s).pow(xexp[s]);
            img.mutable_terms().push_back({vexp, ElemOps<Elem>::clip(ctx, coeff)});
        }
        img.restore_invariants();
        images.push_back(std::move(img));
    }
    return images;
}

/// Canonical derivation on k[[X_1..X_e]] at X-precision N.
HSDerivationPS canonical_derivation(const FormalGroupLaw &F, int m, int precision);

/// Canonical derivation on the coordinate ring of a built-in affine group
/// law, with the global coordinates as local parameters at the identity;
/// extends to rational functions through apply().
HSDerivation canonical_group_derivation(const FormalGroupLaw &G, int m);

/// The e one-dimensional component derivations (indices on coordinate axes).
template <class Elem>
std::vector<HSDerivationT<Elem>> component_derivations(const HSDerivationT<Elem> &D) {
    const DerivCtx &ctx = D.ctx();
    std::vector<HSDerivationT<Elem>> out;
    Elem zero = ElemOps<Elem>::constant(ctx, ctx.field->zero());
    for (int s = 0; s < ctx.e; ++s) {
        DerivCtx c1 = ctx;
        c1.e = 1;
        std::vector<TruncSeries<Elem>> images;
        for (auto &img : D.images()) {
            TruncSeries<Elem> one_dim(ctx.p(), ctx.m, 1, zero);
            for (uint32_t i = 0; i < ctx.index_bound(); ++i) {
                ExpVec full(ctx.e, 0);
                full[s] = i;
                Elem c = img.coeff(full);
                if (!ring_is_zero(c))
                    one_dim.mutable_terms().push_back({ExpVec{i}, c});
            }
            one_dim.restore_invariants();
            images.push_back(std::move(one_dim));
        }
        out.push_back(HSDerivationT<Elem>(c1, std::move(images)));
    }
    return out;
}

/// Builds the e-dimensional derivation D_(i_1..i_e) = D_[1,i_1] o ... o D_[e,i_e]
/// from e one-dimensional derivations on the same ring. The inputs must
/// commute pairwise; that is checked on the generator images first.
template <class Elem>
HSDerivationT<Elem> compose_one_dimensional(const std::vector<HSDerivationT<Elem>> &comps) {
    if (comps.empty())
        throw argument_error("compose_one_dimensional: no inputs");
    const DerivCtx &c0 = comps[0].ctx();
    for (auto &c : comps)
        if (!(c.ctx().field->same(*c0.field)) || c.ctx().gens != c0.gens || c.ctx().m != c0.m ||
            c.ctx().e != 1)
            throw argument_error("compose_one_dimensional: incompatible inputs");
    int e = int(comps.size());
    Elem zero = ElemOps<Elem>::constant(c0, c0.field->zero());
    // pairwise commutation on generators
    for (int r = 0; r < e; ++r)
        for (int s = r + 1; s < e; ++s)
            for (size_t t = 0; t < c0.gens.size(); ++t) {
                auto lift = [&](const HSDerivationT<Elem> &D, const TruncSeries<Elem> &series,
                                int new_axis_of_series) {
                    // apply D to coefficients; series variable moves to axis
                    // new_axis_of_series of a 2-variable ring
                    TruncSeries<Elem> out(c0.p(), c0.m, 2, zero);
                    for (auto &term : series.terms()) {
                        auto B = D.apply(term.second)
                                     .remap_variables(2, {1 - new_axis_of_series});
                        ExpVec mono(2, 0);
                        mono[new_axis_of_series] = term.first[0];
                        out = out + B * TruncSeries<Elem>::monomial(
                                            c0.p(), c0.m, 2, mono,
                                            ElemOps<Elem>::constant(c0, c0.field->one()));
                    }
                    return out;
                };
                auto rs = lift(comps[r], comps[s].images()[t], 1);
                auto sr = lift(comps[s], comps[r].images()[t], 0);
                if (!(rs == sr))
                    throw argument_error("compose_one_dimensional: inputs " + std::to_string(r) +
                                         " and " + std::to_string(s) +
                                         " do not commute on generator " + c0.gens[t]);
            }
    DerivCtx ctx = c0;
    ctx.e = e;
    std::vector<TruncSeries<Elem>> images;
    for (size_t t = 0; t < c0.gens.size(); ++t) {
        // innermost factor acts first; prepend axes right to left
        TruncSeries<Elem> S = comps[e - 1].images()[t];
        for (int s = e - 2; s >= 0; --s) {
            int k = S.arity();
            TruncSeries<Elem> next(c0.p(), c0.m, k + 1, zero);
            for (auto &term : S.terms()) {
                auto B = comps[s].apply(term.second); // arity-1 series in the new axis
                B = B.remap_variables(k + 1, {0});
                ExpVec mono(k + 1, 0);
                for (int v = 0; v < k; ++v)
                    mono[v + 1] = term.first[v];
                next = next + B * TruncSeries<Elem>::monomial(
                                      c0.p(), c0.m, k + 1, mono,
                                      ElemOps<Elem>::constant(c0, c0.field->one()));
            }
            S = next;
        }
        images.push_back(S);
    }
    return HSDerivationT<Elem>(ctx, std::move(images));
}

/// Rebuilds the full family of operator values on the generators from the
/// coordinate-axis components, walking the index lattice with the structure
/// constants: the leading coefficient of the split (i_1,0,..) + (0,i_2,..)
/// is a product of binomials equal to 1.
template <class Elem>
HSDerivationT<Elem> reconstruct_from_components(const std::vector<HSDerivationT<Elem>> &comps,
                                                const StructureConstants &sc) {
    if (comps.empty())
        throw argument_error("reconstruct_from_components: no inputs");
    const DerivCtx &c0 = comps[0].ctx();
    int e = int(comps.size());
    DerivCtx ctx = c0;
    ctx.e = e;
    IndexSet idx = ctx.indices();
    Elem zero = ElemOps<Elem>::constant(c0, c0.field->zero());
    size_t ngens = c0.gens.size();
    std::vector<std::vector<Elem>> val(idx.size(), std::vector<Elem>(ngens, zero));
    for (size_t r = 0; r < idx.size(); ++r) {
        const ExpVec &k = idx.at(r);
        int support = 0, first_axis = -1;
        for (int s = 0; s < e; ++s)
            if (k[s]) {
                ++support;
                if (first_axis < 0)
                    first_axis = s;
            }
        for (size_t t = 0; t < ngens; ++t) {
            if (support == 0) {
                val[r][t] = ElemOps<Elem>::generator(ctx, int(t));
            } else if (support == 1) {
                val[r][t] = comps[first_axis].images()[t].coeff({k[first_axis]});
            } else {
                ExpVec ax(e, 0);
                ax[first_axis] = k[first_axis];
                ExpVec rest = ev_sub(k, ax);
                // D_k = D_ax o D_rest - lower-order corrections
                Elem acc = comps[first_axis].component({k[first_axis]}, val[idx.rank(rest)][t]);
                for (auto &[kk, c] : sc.row(rest, ax)) {
                    if (kk == k)
                        continue; // coefficient 1 by the binomial diagonal
                    Elem corr = val[idx.rank(kk)][t] * ElemOps<Elem>::constant(ctx, c);
                    acc = acc - corr;
                }
                val[r][t] = acc;
            }
        }
    }
    std::vector<TruncSeries<Elem>> images;
    for (size_t t = 0; t < ngens; ++t) {
        TruncSeries<Elem> img(ctx.p(), ctx.m, e, zero);
        for (size_t r = 0; r < idx.size(); ++r)
            if (!ring_is_zero(val[r][t]))
                img.mutable_terms().push_back({idx.at(r), val[r][t]});
        img.restore_invariants();
        images.push_back(std::move(img));
    }
    return HSDerivationT<Elem>(ctx, std::move(images));
}

struct ConstantsReport {
    int degree_bound = 0;
    std::vector<PolyFq> constants;   // basis of the kernel inside the slice
    std::vector<PolyFq> pth_powers;  // monomial basis of the p-th power slice
    bool pth_powers_contained = false;
    bool strict_up_to_degree = false;
};

namespace detail {

template <class Elem>
ConstantsReport kernel_report(const HSDerivationT<Elem> &D, int degree_bound,
                              const std::vector<ExpVec> &op_indices) {
    const DerivCtx &ctx = D.ctx();
    int r = ctx.arity();
    int64_t p = ctx.p();
    const FqFieldPtr &F = ctx.field;
    // the degree-<=d monomial slice of the generator polynomial ring
    std::vector<ExpVec> slice;
    {
        IndexSet monos(uint32_t(degree_bound + 1), size_t(r));
        for (auto &ev : monos.all())
            if (ev_total(ev) <= uint64_t(degree_bound))
                slice.push_back(ev);
    }
    // operator values on the slice: one apply() per monomial serves every
    // operator index
    std::vector<std::vector<PolyFq>> op_values(
        op_indices.size(), std::vector<PolyFq>(slice.size(), PolyFq(r, F->zero())));
    for (size_t c = 0; c < slice.size(); ++c) {
        PolyFq x(r, F->zero());
        x.mutable_terms().push_back({slice[c], F->one()});
        auto series = D.apply(ElemOps<Elem>::from_poly(ctx, x));
        for (size_t o = 0; o < op_indices.size(); ++o)
            op_values[o][c] = ElemOps<Elem>::as_poly(series.coeff(op_indices[o]));
    }
    size_t total_rows = 0;
    std::vector<std::map<ExpVec, size_t>> row_maps(op_indices.size());
    for (size_t o = 0; o < op_indices.size(); ++o) {
        for (auto &v : op_values[o])
            for (auto &t : v.terms())
                if (!row_maps[o].count(t.first))
                    row_maps[o][t.first] = total_rows++;
    }
    Matrix<Fq> mat(std::max<size_t>(total_rows, 1), slice.size(), F->zero());
    for (size_t o = 0; o < op_indices.size(); ++o)
        for (size_t c = 0; c < slice.size(); ++c)
            for (auto &t : op_values[o][c].terms())
                mat.at(row_maps[o][t.first], c) = t.second;
    auto kernel = kernel_basis(mat, F->zero(), F->one());

    ConstantsReport rep;
    rep.degree_bound = degree_bound;
    for (auto &vec : kernel) {
        PolyFq f(r, F->zero());
        for (size_t c = 0; c < slice.size(); ++c)
            if (!vec[c].is_zero())
                f.mutable_terms().push_back({slice[c], vec[c]});
        f.restore_invariants();
        rep.constants.push_back(std::move(f));
    }
    // the p-th power slice: monomials with every exponent divisible by p
    for (auto &mono : slice) {
        bool ok = true;
        for (uint32_t x : mono)
            if (x % uint32_t(p))
                ok = false;
        if (!ok)
            continue;
        PolyFq f(r, F->zero());
        f.mutable_terms().push_back({mono, F->one()});
        rep.pth_powers.push_back(std::move(f));
    }
    // containment of the p-th powers in the kernel, checked directly
    rep.pth_powers_contained = true;
    for (auto &f : rep.pth_powers) {
        Elem xe = ElemOps<Elem>::from_poly(ctx, f);
        for (auto &i : op_indices)
            if (!ring_is_zero(D.component(i, xe)))
                rep.pth_powers_contained = false;
    }
    rep.strict_up_to_degree =
        rep.pth_powers_contained && rep.constants.size() == rep.pth_powers.size();
    return rep;
}

} // namespace detail

/// Kernel of the e first-order operators on the degree-<=d slice.
template <class Elem>
ConstantsReport constants_basis(const HSDerivationT<Elem> &D, int degree_bound) {
    std::vector<ExpVec> ops;
    for (int s = 0; s < D.ctx().e; ++s)
        ops.push_back(ev_unit(size_t(D.ctx().e), size_t(s)));
    return detail::kernel_report(D, degree_bound, ops);
}

/// Kernel of every D_i with i != 0 on the degree-<=d slice.
template <class Elem>
ConstantsReport absolute_constants_basis(const HSDerivationT<Elem> &D, int degree_bound) {
    std::vector<ExpVec> ops;
    IndexSet idx = D.ctx().indices();
    for (auto &i : idx.all())
        if (ev_total(i) > 0)
            ops.push_back(i);
    return detail::kernel_report(D, degree_bound, ops);
}

/// Wronskian matrix (D_i(x_j))_{i in [p]^e, j <= l} for a level-1 iterative
/// derivation; the precondition is checked against the supplied law.
Matrix<RatFunc> wronskian_matrix(const HSDerivation &D, const TruncatedGroupLaw &g_level1,
                                 const std::vector<RatFunc> &elements);

/// Linear dependence over the constants field: rank < l.
bool dependence_over_constants(const HSDerivation &D, const TruncatedGroupLaw &g_level1,
                               const std::vector<RatFunc> &elements);

/// The unique derivation on the joint polynomial ring restricting to both
/// factors; generator sets must be disjoint.
HSDerivation tensor_derivation(const HSDerivation &R, const HSDerivation &S);

/// Invertible generator substitution over a base-field automorphism
/// x -> x^{p^frobenius_power}; both directions are supplied and verified.
struct TransportMap {
    std::vector<std::string> target_gens;
    std::vector<RatFunc> forward; // source generator images, in the target ring
    std::vector<RatFunc> inverse; // target generator images, in the source ring
    int frobenius_power = 0;
};

HSDerivation transport_derivation(const HSDerivation &D, const TransportMap &phi);

/// A coherent family of levels 1..M of one derivation (level m at index m-1).
using HSFamily = std::vector<HSDerivation>;
using HSFamilyPS = std::vector<HSDerivationPS>;

HSFamily canonical_group_family(const FormalGroupLaw &G, int M);
HSFamilyPS canonical_family(const FormalGroupLaw &F, int M, int precision);

template <class Elem>
AxiomVerdict chain_compatibility_check(const std::vector<HSDerivationT<Elem>> &family,
                                       const FormalGroupLaw &F) {
    int M = int(family.size());
    for (int m = 1; m <= M; ++m) {
        if (family[m - 1].ctx().m != m)
            return {false, "family level " + std::to_string(m) + " stored at the wrong index"};
        auto v = check_iterativity(family[m - 1], fgl_truncate(F, m));
        if (!v.pass)
            return {false, "level " + std::to_string(m) + ": " + v.detail};
        for (int m2 = 1; m2 < m; ++m2)
            if (!(family[m - 1].truncated(m2) == family[m2 - 1]))
                return {false, "truncation of level " + std::to_string(m) + " to " +
                                   std::to_string(m2) + " differs from the stored level"};
    }
    return {};
}

struct StrictExtensionResult {
    std::vector<std::pair<ExpVec, RatFunc>> values; // D'_i(a) in the extended ring, i != 0
    HSDerivation extended;                          // level M-1, on the enlarged generators
    AxiomVerdict iterative;                         // checked against F[M-1]
};

/// The forced extension values D'_i(a) = (D_{p i}(a^p))^{1/p} for an element
/// a presented by its p-th power alpha = one of the context generators. The
/// extended context replaces that generator s by a new name u with s = u^p.
StrictExtensionResult strict_extension_values(const HSFamily &family, const FormalGroupLaw &F,
                                              const std::string &alpha_gen,
                                              const std::string &new_gen);

/// Per-element form of the same formula, with values inside the source ring:
/// lambda(D_{p i}(alpha)) over i in [p^{m-1}]^e. Throws inconsistency_error
/// when a required root does not exist in K.
std::vector<std::pair<ExpVec, RatFunc>> strict_extension_value_list(const HSDerivation &top,
                                                                    const RatFunc &alpha);

} // namespace hsfg

#endif
