#include "hsfg/prolongation.hpp"

#include "hsfg/poly_algorithms.hpp"

namespace hsfg {

JetRing::JetRing(HSDerivation base_derivation, int n)
    : base_(std::move(base_derivation)), n_(n),
      idx_(base_.ctx().index_bound(), size_t(base_.ctx().e)) {
    if (n_ < 1)
        throw argument_error("jet ring needs at least one base variable");
}

std::string JetRing::var_name(int slot) const {
    int t = slot % n_;
    const ExpVec &i = idx_.at(size_t(slot / n_));
    std::string s = "X" + std::to_string(t + 1) + "_";
    for (size_t k = 0; k < i.size(); ++k)
        s += (k ? "_" : "") + std::to_string(i[k]);
    return s;
}

TruncSeries<JetPoly> JetRing::apply(const JetPoly &f) const {
    const DerivCtx &ctx = base_.ctx();
    if (f.arity() != n_)
        throw argument_error("jet apply: polynomial must live in the base variables");
    int N = jet_count();
    RatFunc rf_zero = RatFunc::zero(ctx.arity(), ctx.field->zero());
    JetPoly jp_zero(N, rf_zero);
    using TS = TruncSeries<JetPoly>;
    TS acc = TS::zero(ctx.p(), ctx.m, ctx.e, jp_zero);
    // X_t -> sum_i X_t^(i) v^i, built once per base variable
    std::vector<TS> var_images;
    for (int t = 0; t < n_; ++t) {
        TS img(ctx.p(), ctx.m, ctx.e, jp_zero);
        for (auto &i : idx_.all())
            img.mutable_terms().push_back(
                {i, JetPoly::variable(N, slot(i, t), rf_zero)});
        img.restore_invariants();
        var_images.push_back(std::move(img));
    }
    for (auto &term : f.terms()) {
        // coefficient in K through D, landing in constants of the jet ring
        auto cser = base_.apply(term.second);
        TS piece = cser.map_coefficients<JetPoly>(
            [&](const RatFunc &c) { return JetPoly::constant(N, c); }, jp_zero);
        for (int t = 0; t < n_; ++t)
            if (term.first[t])
                piece = piece * var_images[t].pow(term.first[t]);
        acc = acc + piece;
    }
    return acc;
}

AffineVariety nabla_ideal(const AffineVariety &V, const JetRing &jet) {
    V.validate();
    if (V.ambient != jet.base_vars())
        throw argument_error("nabla_ideal: variety arity does not match the jet ring");
    AffineVariety out;
    out.ambient = jet.jet_count();
    out.name = V.name.empty() ? "nabla(V)" : "nabla(" + V.name + ")";
    for (auto &f : V.gens) {
        auto series = jet.apply(f);
        for (auto &term : series.terms())
            out.gens.push_back(term.second); // zero coefficients are not stored
    }
    return out;
}

Pt nabla_point(const HSDerivation &D, const Pt &a) {
    IndexSet idx = D.ctx().indices();
    int n = int(a.size());
    Pt out(idx.size() * size_t(n), RatFunc::zero(D.ctx().arity(), D.ctx().field->zero()));
    for (int t = 0; t < n; ++t) {
        auto series = D.apply(a[size_t(t)]);
        for (size_t r = 0; r < idx.size(); ++r)
            out[r * size_t(n) + size_t(t)] = series.coeff(idx.at(r));
    }
    return out;
}

Pt c_n_map(const StructureConstants &sc, const Pt &b, int n) {
    const IndexSet &idx = sc.indices();
    size_t N = idx.size() * size_t(n);
    if (b.size() != N)
        throw argument_error("c_n_map: point arity must be n * p^{me}");
    RatFunc zero = ring_zero_like(b[0]);
    Pt out(N * idx.size(), zero);
    for (size_t ir = 0; ir < idx.size(); ++ir)
        for (size_t jr = 0; jr < idx.size(); ++jr)
            for (auto &[k, c] : sc.row(idx.at(ir), idx.at(jr))) {
                size_t kr = idx.rank(k);
                RatFunc cc = RatFunc::constant(b[0].arity(), c);
                for (int t = 0; t < n; ++t) {
                    size_t dst = jr * N + ir * size_t(n) + size_t(t);
                    out[dst] += cc * b[kr * size_t(n) + size_t(t)];
                }
            }
    return out;
}

namespace {

// evaluate a K-coefficient polynomial at a point over F_q'; requires every
// coefficient to lie in the prime subfield so it embeds canonically
Fq eval_over_field(const JetPoly &f, const std::vector<Fq> &pt, const FqFieldPtr &field) {
    Fq acc = field->zero();
    for (auto &term : f.terms()) {
        const RatFunc &c = term.second;
        if (!c.is_polynomial() || !c.num().is_constant())
            throw argument_error("pointwise mode needs constant coefficients");
        Fq cv = field->zero();
        if (!c.num().is_zero()) {
            auto pv = c.num().constant_term().prime_value();
            if (!pv)
                throw argument_error(
                    "pointwise mode needs coefficients in the prime subfield");
            cv = field->from_int(*pv);
        }
        Fq mono = cv;
        for (int v = 0; v < f.arity(); ++v)
            for (uint32_t k = 0; k < term.first[v]; ++k)
                mono = mono * pt[size_t(v)];
        acc = acc + mono;
    }
    return acc;
}

std::vector<Fq> c_n_map_field(const StructureConstants &sc, const std::vector<Fq> &b, int n,
                              const FqFieldPtr &field) {
    const IndexSet &idx = sc.indices();
    size_t N = idx.size() * size_t(n);
    std::vector<Fq> out(N * idx.size(), field->zero());
    for (size_t ir = 0; ir < idx.size(); ++ir)
        for (size_t jr = 0; jr < idx.size(); ++jr)
            for (auto &[k, c] : sc.row(idx.at(ir), idx.at(jr))) {
                size_t kr = idx.rank(k);
                auto pv = c.prime_value();
                if (!pv)
                    throw argument_error("pointwise mode needs a prime-field law");
                Fq cc = field->from_int(*pv);
                for (int t = 0; t < n; ++t)
                    out[jr * N + ir * size_t(n) + size_t(t)] +=
                        cc * b[kr * size_t(n) + size_t(t)];
            }
    return out;
}

} // namespace

CompatVerdict cv_compatibility(const TruncatedGroupLaw &g, const JetRing &jet,
                               const AffineVariety &V, const AffineVariety &W,
                               const CompatOptions &opt) {
    const HSDerivation &D = jet.derivation();
    int n = jet.base_vars();
    size_t N = size_t(jet.jet_count());
    if (size_t(W.ambient) != N)
        throw argument_error("cv_compatibility: W must live in the ambient of nabla(V)");
    V.validate();
    W.validate();
    auto sc = structure_constants(g);
    // nabla(W): jets of the N-dimensional ambient space
    JetRing jetW(D, int(N));
    AffineVariety nw = nabla_ideal(W, jetW);

    if (opt.mode == CompatMode::Symbolic) {
        // substitute the linear forms of c_n into each generator of nabla(W),
        // then reduce modulo a Groebner basis of the W-ideal
        const IndexSet &idx = jet.indices();
        RatFunc zero = RatFunc::zero(D.ctx().arity(), D.ctx().field->zero());
        // double-jet slot (j, (i, t)) carries sum_k c_{i,j}^k Z_{(k,t)}
        std::vector<JetPoly> ordered(N * idx.size(), JetPoly(int(N), zero));
        for (size_t jr = 0; jr < idx.size(); ++jr)
            for (size_t ir = 0; ir < idx.size(); ++ir)
                for (int t = 0; t < n; ++t) {
                    JetPoly form(int(N), zero);
                    for (auto &[k, c] : sc.row(idx.at(ir), idx.at(jr))) {
                        ExpVec mono(N, 0);
                        mono[size_t(jet.slot(k, t))] = 1;
                        form = form + JetPoly::monomial(int(N), mono,
                                                        RatFunc::constant(zero.arity(), c));
                    }
                    size_t dst = jr * N + ir * size_t(n) + size_t(t);
                    ordered[dst] = std::move(form);
                }
        GroebnerOptions gopt;
        gopt.pair_budget = opt.pair_budget;
        std::vector<JetPoly> basis;
        if (!W.gens.empty())
            basis = buchberger(W.gens, gopt);
        CompatVerdict verdict;
        for (auto &gen : nw.gens) {
            JetPoly pulled = gen.substitute(ordered);
            if (!ideal_membership(pulled, basis)) {
                verdict.compatible = false;
                verdict.detail = "a generator of nabla(W) does not pull back into the W-ideal";
                return verdict;
            }
        }
        return verdict;
    }

    // pointwise: enumerate W(F_q') and push every point through c_n
    if (!opt.enumeration_field)
        throw argument_error("pointwise mode needs an enumeration field");
    const FqFieldPtr &field = opt.enumeration_field;
    uint64_t total = 1;
    for (size_t v = 0; v < N; ++v) {
        total *= uint64_t(field->q());
        if (total > opt.point_budget)
            throw budget_error("cv_compatibility: enumeration exceeds the point budget");
    }
    auto elements = field->all_elements();
    CompatVerdict verdict;
    std::vector<Fq> b(N, field->zero());
    for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        for (size_t v = 0; v < N; ++v) {
            b[v] = elements[c % uint64_t(field->q())];
            c /= uint64_t(field->q());
        }
        bool on_w = true;
        for (auto &gen : W.gens)
            if (!eval_over_field(gen, b, field).is_zero()) {
                on_w = false;
                break;
            }
        if (!on_w)
            continue;
        ++verdict.points_checked;
        auto image = c_n_map_field(sc, b, n, field);
        for (auto &gen : nw.gens)
            if (!eval_over_field(gen, image, field).is_zero()) {
                verdict.compatible = false;
                verdict.detail = "c_n image of a W(F_q) point misses nabla(W)";
                return verdict;
            }
    }
    return verdict;
}

PointDerivationResult derivation_from_point(const TruncatedGroupLaw &g, const JetRing &jet,
                                            const AffineVariety &V, const Pt &b) {
    const HSDerivation &base = jet.derivation();
    const DerivCtx &ctx = base.ctx();
    int n = jet.base_vars();
    const IndexSet &idx = jet.indices();
    if (b.size() != size_t(jet.jet_count()))
        throw argument_error("derivation_from_point: point arity must be n * p^{me}");
    if (n != ctx.arity())
        throw argument_error(
            "derivation_from_point: the first block must list the context generators");
    // b must lie on nabla(V)
    AffineVariety nv = nabla_ideal(V, jet);
    for (auto &gen : nv.gens)
        if (!gen.evaluate(b).is_zero())
            throw argument_error("derivation_from_point: the point is not on nabla(V)");
    // first block must be the generator tuple itself
    for (int t = 0; t < n; ++t)
        if (!(b[size_t(t)] == RatFunc::variable(n, t, ctx.field->one())))
            throw argument_error(
                "derivation_from_point: first block must equal the generator tuple");
    RatFunc zero = RatFunc::zero(n, ctx.field->zero());
    std::vector<TruncSeries<RatFunc>> images;
    for (int t = 0; t < n; ++t) {
        TruncSeries<RatFunc> img(ctx.p(), ctx.m, ctx.e, zero);
        for (size_t r = 0; r < idx.size(); ++r) {
            const RatFunc &val = b[r * size_t(n) + size_t(t)];
            if (!val.is_zero())
                img.mutable_terms().push_back({idx.at(r), val});
        }
        img.restore_invariants();
        images.push_back(std::move(img));
    }
    PointDerivationResult res{HSDerivation(ctx, std::move(images)), {}, {}};
    res.homomorphism = res.derivation.check_hs_homomorphism();
    res.iterativity = check_iterativity(res.derivation, g);
    return res;
}

AxiomSearchReport axiom_instance_check(const JetRing &jet, const AffineVariety &V,
                                       const AffineVariety &W,
                                       const std::optional<AffineVariety> &Z,
                                       const SearchSpace &space, bool irreducibility_asserted,
                                       bool generic_projection_asserted) {
    const HSDerivation &D = jet.derivation();
    const DerivCtx &ctx = D.ctx();
    int n = jet.base_vars();
    V.validate();
    W.validate();
    if (Z)
        Z->validate();
    if (V.ambient != n || W.ambient != jet.jet_count())
        throw argument_error("axiom_instance_check: ambient arities do not match the jet ring");

    AxiomSearchReport rep;
    rep.irreducibility_asserted = irreducibility_asserted;
    rep.generic_projection_asserted = generic_projection_asserted;

    // the candidate values for one coordinate, in deterministic order
    std::vector<RatFunc> candidates;
    const FqFieldPtr &field = ctx.field;
    if (space.kind == SearchSpace::Kind::FieldPoints) {
        for (auto &x : field->all_elements())
            candidates.push_back(RatFunc::constant(ctx.arity(), x));
    } else {
        // all polynomials in the context generators of total degree <= d,
        // enumerated as base-q counters over the graded-lex monomial slots
        std::vector<ExpVec> monos;
        IndexSet grid(uint32_t(space.degree + 1), size_t(ctx.arity()));
        for (auto &ev : grid.all())
            if (ev_total(ev) <= uint64_t(space.degree))
                monos.push_back(ev);
        uint64_t count = 1;
        for (size_t s = 0; s < monos.size(); ++s) {
            count *= uint64_t(field->q());
            if (count > space.budget)
                throw budget_error("axiom_instance_check: coordinate space exceeds the budget");
        }
        auto elements = field->all_elements();
        for (uint64_t code = 0; code < count; ++code) {
            uint64_t c = code;
            PolyFq f(ctx.arity(), field->zero());
            for (auto &mono : monos) {
                Fq coeff = elements[c % uint64_t(field->q())];
                c /= uint64_t(field->q());
                if (!coeff.is_zero())
                    f.mutable_terms().push_back({mono, coeff});
            }
            f.restore_invariants();
            candidates.push_back(RatFunc(f));
        }
    }

    uint64_t total = 1;
    for (int t = 0; t < n; ++t) {
        total *= candidates.size();
        if (total > space.budget)
            throw budget_error("axiom_instance_check: search space exceeds the budget");
    }
    Pt a(size_t(n), RatFunc::zero(ctx.arity(), field->zero()));
    for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        for (int t = 0; t < n; ++t) {
            a[size_t(t)] = candidates[c % candidates.size()];
            c /= candidates.size();
        }
        ++rep.examined;
        bool on_v = true;
        for (auto &gen : V.gens)
            if (!gen.evaluate(a).is_zero()) {
                on_v = false;
                break;
            }
        if (!on_v)
            continue;
        Pt image = nabla_point(D, a);
        bool on_w = true;
        for (auto &gen : W.gens)
            if (!gen.evaluate(image).is_zero()) {
                on_w = false;
                break;
            }
        if (!on_w)
            continue;
        if (Z && !Z->gens.empty()) {
            bool in_z = true;
            for (auto &gen : Z->gens)
                if (!gen.evaluate(image).is_zero()) {
                    in_z = false;
                    break;
                }
            if (in_z)
                continue;
        }
        rep.found = true;
        rep.witness = a;
        return rep;
    }
    rep.exhausted = true;
    return rep;
}

} // namespace hsfg
