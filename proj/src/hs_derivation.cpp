#include "hsfg/hs_derivation.hpp"

namespace hsfg {

namespace {

std::vector<std::string> default_gen_names(int e) {
    if (e == 1)
        return {"t"};
    std::vector<std::string> names;
    for (int i = 1; i <= e; ++i)
        names.push_back("t" + std::to_string(i));
    return names;
}

std::vector<std::string> series_gen_names(int e) {
    if (e == 1)
        return {"X"};
    std::vector<std::string> names;
    for (int i = 1; i <= e; ++i)
        names.push_back("X" + std::to_string(i));
    return names;
}

RatFunc apply_substitution(const RatFunc &x, const std::vector<RatFunc> &gen_images,
                           int frobenius_power) {
    RatFunc y = x;
    if (frobenius_power) {
        auto tw = [&](const PolyFq &f) {
            return f.map_coefficients<Fq>(
                [&](const Fq &c) { return c.frobenius(frobenius_power); }, f.proto());
        };
        y = RatFunc(tw(x.num()), tw(x.den()));
    }
    return y.substitute(gen_images);
}

} // namespace

HSDerivationPS canonical_derivation(const FormalGroupLaw &F, int m, int precision) {
    DerivCtx ctx;
    ctx.field = F.field();
    ctx.kind = RingKind::PowerSeries;
    ctx.gens = series_gen_names(F.dim());
    ctx.m = m;
    ctx.e = F.dim();
    ctx.precision = precision;
    ctx.validate();
    return HSDerivationPS(ctx, canonical_images<PolyFq>(F, ctx));
}

HSDerivation canonical_group_derivation(const FormalGroupLaw &G, int m) {
    DerivCtx ctx;
    ctx.field = G.field();
    ctx.kind = RingKind::Polynomial;
    ctx.gens = default_gen_names(G.dim());
    ctx.m = m;
    ctx.e = G.dim();
    ctx.validate();
    return HSDerivation(ctx, canonical_images<RatFunc>(G, ctx));
}

HSFamily canonical_group_family(const FormalGroupLaw &G, int M) {
    HSFamily fam;
    for (int m = 1; m <= M; ++m)
        fam.push_back(canonical_group_derivation(G, m));
    return fam;
}

HSFamilyPS canonical_family(const FormalGroupLaw &F, int M, int precision) {
    HSFamilyPS fam;
    for (int m = 1; m <= M; ++m)
        fam.push_back(canonical_derivation(F, m, precision));
    return fam;
}

Matrix<RatFunc> wronskian_matrix(const HSDerivation &D, const TruncatedGroupLaw &g_level1,
                                 const std::vector<RatFunc> &elements) {
    if (g_level1.level() != 1)
        throw argument_error("wronskian_matrix: the law must be given at level 1");
    HSDerivation D1 = D.ctx().m == 1 ? D : D.truncated(1);
    auto iter = check_iterativity(D1, g_level1);
    if (!iter.pass)
        throw argument_error("wronskian_matrix: derivation is not iterative at level 1: " +
                             iter.detail);
    IndexSet idx = D1.ctx().indices();
    RatFunc zero = ElemOps<RatFunc>::constant(D1.ctx(), D1.ctx().field->zero());
    Matrix<RatFunc> m(idx.size(), elements.size(), zero);
    for (size_t j = 0; j < elements.size(); ++j) {
        auto img = D1.apply(elements[j]);
        for (size_t r = 0; r < idx.size(); ++r)
            m.at(r, j) = img.coeff(idx.at(r));
    }
    return m;
}

bool dependence_over_constants(const HSDerivation &D, const TruncatedGroupLaw &g_level1,
                               const std::vector<RatFunc> &elements) {
    auto m = wronskian_matrix(D, g_level1, elements);
    return matrix_rank(m) < elements.size();
}

HSDerivation tensor_derivation(const HSDerivation &R, const HSDerivation &S) {
    const DerivCtx &cr = R.ctx(), &cs = S.ctx();
    if (!cr.field->same(*cs.field) || cr.m != cs.m || cr.e != cs.e)
        throw argument_error("tensor_derivation: contexts must share p, n, m and e");
    for (auto &g : cr.gens)
        for (auto &h : cs.gens)
            if (g == h)
                throw argument_error("tensor_derivation: generator name collision: " + g);
    DerivCtx ctx = cr;
    ctx.kind = RingKind::RationalFunction;
    ctx.gens.insert(ctx.gens.end(), cs.gens.begin(), cs.gens.end());
    int r = cr.arity(), total = ctx.arity();
    std::vector<int> map_r(r), map_s(cs.arity());
    for (int v = 0; v < r; ++v)
        map_r[v] = v;
    for (int v = 0; v < cs.arity(); ++v)
        map_s[v] = r + v;
    auto widen = [&](const RatFunc &x, const std::vector<int> &map) {
        return RatFunc(x.num().remap_variables(total, map), x.den().remap_variables(total, map));
    };
    RatFunc zero = RatFunc::zero(total, ctx.field->zero());
    std::vector<TruncSeries<RatFunc>> images;
    for (auto &img : R.images())
        images.push_back(img.map_coefficients<RatFunc>(
            [&](const RatFunc &c) { return widen(c, map_r); }, zero));
    for (auto &img : S.images())
        images.push_back(img.map_coefficients<RatFunc>(
            [&](const RatFunc &c) { return widen(c, map_s); }, zero));
    return HSDerivation(ctx, std::move(images));
}

HSDerivation transport_derivation(const HSDerivation &D, const TransportMap &phi) {
    const DerivCtx &src = D.ctx();
    if (phi.forward.size() != src.gens.size())
        throw argument_error("transport: one forward image per source generator");
    DerivCtx tgt = src;
    if (!phi.target_gens.empty())
        tgt.gens = phi.target_gens;
    if (phi.inverse.size() != tgt.gens.size())
        throw argument_error("transport: one inverse image per target generator");
    int n = src.field->n();
    int f = ((phi.frobenius_power % n) + n) % n;
    int finv = (n - f) % n;
    // verify invertibility on both sides
    for (size_t t = 0; t < tgt.gens.size(); ++t) {
        RatFunc roundtrip = apply_substitution(phi.inverse[t], phi.forward, f);
        if (!(roundtrip == RatFunc::variable(tgt.arity(), int(t), tgt.field->one())))
            throw argument_error("transport: substitution is not invertible (forward o inverse)");
    }
    for (size_t t = 0; t < src.gens.size(); ++t) {
        RatFunc roundtrip = apply_substitution(phi.forward[t], phi.inverse, finv);
        if (!(roundtrip == RatFunc::variable(src.arity(), int(t), src.field->one())))
            throw argument_error("transport: substitution is not invertible (inverse o forward)");
    }
    RatFunc zero = RatFunc::zero(tgt.arity(), tgt.field->zero());
    std::vector<TruncSeries<RatFunc>> images;
    for (size_t t = 0; t < tgt.gens.size(); ++t) {
        auto pre = D.apply(phi.inverse[t]); // series over the source ring
        images.push_back(pre.map_coefficients<RatFunc>(
            [&](const RatFunc &c) { return apply_substitution(c, phi.forward, f); }, zero));
    }
    return HSDerivation(tgt, std::move(images));
}

std::vector<std::pair<ExpVec, RatFunc>> strict_extension_value_list(const HSDerivation &top,
                                                                    const RatFunc &alpha) {
    const DerivCtx &src = top.ctx();
    if (src.m < 2)
        throw argument_error("strict_extension_value_list: needs level m >= 2");
    int64_t p = src.p();
    IndexSet idx(uint32_t(ipow(uint64_t(p), uint32_t(src.m - 1))), size_t(src.e));
    std::vector<std::pair<ExpVec, RatFunc>> values;
    for (auto &i : idx.all()) {
        ExpVec pi(i.size());
        for (size_t v = 0; v < i.size(); ++v)
            pi[v] = i[v] * uint32_t(p);
        RatFunc w = top.component(pi, alpha);
        RatFunc root = lambda(w);
        if (root.is_zero() && !w.is_zero())
            throw inconsistency_error("strict_extension_value_list: no p-th root at index (" +
                                      ev_to_string(i) + ")");
        values.push_back({i, root});
    }
    return values;
}

StrictExtensionResult strict_extension_values(const HSFamily &family, const FormalGroupLaw &F,
                                              const std::string &alpha_gen,
                                              const std::string &new_gen) {
    if (family.size() < 2)
        throw argument_error("strict_extension_values: needs a family with M >= 2");
    int M = int(family.size());
    const HSDerivation &top = family.back();
    const DerivCtx &src = top.ctx();
    if (src.m != M)
        throw argument_error("strict_extension_values: top of the family must have level M");
    int s = -1;
    for (size_t t = 0; t < src.gens.size(); ++t)
        if (src.gens[t] == alpha_gen)
            s = int(t);
    if (s < 0)
        throw argument_error("strict_extension_values: unknown generator " + alpha_gen);
    int64_t p = src.p();
    RatFunc alpha = ElemOps<RatFunc>::generator(src, s);
    // the square of the new element must lie in the constants
    for (int ax = 0; ax < src.e; ++ax)
        if (!ring_is_zero(top.component(ev_unit(size_t(src.e), size_t(ax)), alpha)))
            throw argument_error("strict_extension_values: " + alpha_gen +
                                 " is not a constant of the family");

    // extended context: alpha_gen = new_gen^p
    DerivCtx tgt = src;
    tgt.m = M - 1;
    tgt.gens[s] = new_gen;
    tgt.validate();
    int arity = src.arity();
    std::vector<RatFunc> embed_gens;
    for (int t = 0; t < arity; ++t) {
        RatFunc g = RatFunc::variable(arity, t, tgt.field->one());
        embed_gens.push_back(t == s ? g.pow(uint32_t(p)) : g);
    }
    auto embed = [&](const RatFunc &x) { return apply_substitution(x, embed_gens, 0); };

    IndexSet idx_lower = tgt.indices();
    RatFunc zero = RatFunc::zero(arity, tgt.field->zero());
    TruncSeries<RatFunc> u_image(tgt.p(), tgt.m, tgt.e, zero);
    std::vector<std::pair<ExpVec, RatFunc>> values;
    for (auto &i : idx_lower.all()) {
        if (ev_total(i) == 0) {
            u_image.mutable_terms().push_back({i, RatFunc::variable(arity, s, tgt.field->one())});
            continue;
        }
        ExpVec pi(i.size());
        for (size_t v = 0; v < i.size(); ++v)
            pi[v] = i[v] * uint32_t(p);
        RatFunc w = top.component(pi, alpha);
        if (w.is_zero()) {
            values.push_back({i, zero});
            continue;
        }
        RatFunc root = lambda(w);
        if (root.is_zero())
            throw inconsistency_error("strict_extension_values: D_{p i}(" + alpha_gen +
                                      ") is not a p-th power at index (" + ev_to_string(i) + ")");
        RatFunc val = embed(root);
        values.push_back({i, val});
        u_image.mutable_terms().push_back({i, val});
    }
    u_image.restore_invariants();

    const HSDerivation &lower = family[size_t(M - 2)];
    std::vector<TruncSeries<RatFunc>> images;
    for (size_t t = 0; t < src.gens.size(); ++t) {
        if (int(t) == s) {
            images.push_back(u_image);
            continue;
        }
        images.push_back(lower.images()[t].map_coefficients<RatFunc>(embed, zero));
    }
    HSDerivation extended(tgt, std::move(images));
    AxiomVerdict iterative = check_iterativity(extended, fgl_truncate(F, M - 1));
    return {std::move(values), std::move(extended), std::move(iterative)};
}

} // namespace hsfg
