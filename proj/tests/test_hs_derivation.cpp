#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hsfg/hs_derivation.hpp"

using namespace hsfg;

namespace {

// d/dt on F_p(t...), acting on the generator named by index `which` only
HSDerivation additive_on_one_gen(const FqFieldPtr &F, std::vector<std::string> gens, int which,
                                 int m) {
    DerivCtx ctx;
    ctx.field = F;
    ctx.kind = RingKind::RationalFunction;
    ctx.gens = std::move(gens);
    ctx.m = m;
    ctx.e = 1;
    RatFunc one = RatFunc::constant(ctx.arity(), F->one());
    std::vector<TruncSeries<RatFunc>> images;
    for (int t = 0; t < ctx.arity(); ++t) {
        auto img = TruncSeries<RatFunc>::constant(ctx.p(), m, 1,
                                                  RatFunc::variable(ctx.arity(), t, F->one()));
        if (t == which)
            img = img + TruncSeries<RatFunc>::variable(ctx.p(), m, 1, 0, one);
        images.push_back(img);
    }
    return HSDerivation(ctx, std::move(images));
}

RatFunc random_ratfunc(std::mt19937_64 &rng, const FqFieldPtr &F, int arity, int maxdeg) {
    auto poly = [&](bool nonzero) {
        PolyFq f(arity, F->zero());
        for (int tries = 0; tries < 6; ++tries) {
            ExpVec e(arity, 0);
            uint64_t budget = rng() % uint64_t(maxdeg + 1);
            for (int v = 0; v < arity; ++v) {
                e[v] = uint32_t(rng() % (budget + 1));
                budget -= e[v];
            }
            f = f + PolyFq::monomial(arity, e, F->from_int(int64_t(rng() % uint64_t(F->q()))));
        }
        if (nonzero && f.is_zero())
            f = PolyFq::constant(arity, F->one());
        return f;
    };
    return RatFunc(poly(false), poly(true));
}

int64_t binom_mod(int64_t n, int64_t k, int64_t p) {
    if (k < 0 || k > n)
        return 0;
    int64_t r = 1;
    while (n || k) {
        int64_t nd = n % p, kd = k % p;
        if (kd > nd)
            return 0;
        int64_t b = 1;
        for (int64_t i = 0; i < kd; ++i)
            b = b * (nd - i) / (i + 1);
        r = (r * b) % p;
        n /= p;
        k /= p;
    }
    return r;
}

std::vector<FormalGroupLaw> builtins(const FqFieldPtr &F) {
    return {fgl_builtin("additive", F, 1), fgl_builtin("additive", F, 2),
            fgl_builtin("multiplicative", F), fgl_builtin("witt2", F),
            fgl_builtin("ga_semidirect_gm", F)};
}

} // namespace

TEST_CASE("apply on F_2(t) with d/dt at level 1") {
    auto F2 = FqField::prime(2);
    auto D = additive_on_one_gen(F2, {"t"}, 0, 1);
    RatFunc t = RatFunc::variable(1, 0, F2->one());
    RatFunc one = RatFunc::constant(1, F2->one());

    // base-field constants are fixed
    auto c = D.apply(RatFunc::constant(1, F2->one()));
    CHECK(c == TruncSeries<RatFunc>::constant(2, 1, 1, one));

    // t^2 has derivative 2t = 0
    auto sq = D.apply(t * t);
    CHECK(sq == TruncSeries<RatFunc>::constant(2, 1, 1, t * t));

    // 1/t -> 1/t + v/t^2
    auto inv = D.apply(one / t);
    CHECK(inv.coeff({0}) == one / t);
    CHECK(inv.coeff({1}) == one / (t * t));
}

TEST_CASE("apply_component basics") {
    auto F3 = FqField::prime(3);
    auto D = additive_on_one_gen(F3, {"t"}, 0, 2);
    RatFunc t = RatFunc::variable(1, 0, F3->one());

    // D_0 = id
    CHECK(D.component({0}, t * t + t) == t * t + t);

    // D_i(t^n) = binom(n, i) t^{n-i}
    for (uint32_t n = 0; n <= 6; ++n)
        for (uint32_t i = 0; i < 9; ++i) {
            RatFunc expect = RatFunc::constant(1, F3->from_int(binom_mod(n, i, 3)));
            if (i <= n)
                expect = expect * t.pow(n - i);
            CHECK(D.component({i}, t.pow(n)) == expect);
        }
}

TEST_CASE("the rank-one square map of two variables has zero components") {
    // D(r) = r + d(r) v1 v2 at p=2, m=1, e=2: a 2-dimensional derivation whose
    // coordinate-axis components vanish
    auto F2 = FqField::prime(2);
    DerivCtx ctx;
    ctx.field = F2;
    ctx.kind = RingKind::RationalFunction;
    ctx.gens = {"t"};
    ctx.m = 1;
    ctx.e = 2;
    RatFunc t = RatFunc::variable(1, 0, F2->one());
    RatFunc one = RatFunc::constant(1, F2->one());
    auto img = TruncSeries<RatFunc>::constant(2, 1, 2, t) +
               TruncSeries<RatFunc>::monomial(2, 1, 2, {1, 1}, one);
    HSDerivation D(ctx, {img});

    CHECK(D.check_hs_homomorphism().pass);
    CHECK(D.component({1, 1}, t) == one);
    CHECK(D.component({1, 0}, t).is_zero());
    CHECK(D.component({0, 1}, t).is_zero());

    // multiplicativity: the map really is a ring homomorphism
    RatFunc x = t * t + t;
    CHECK(D.apply(x * x) == D.apply(x) * D.apply(x));

    SUBCASE("it is not iterative for the square of the additive law") {
        auto g = fgl_truncate(fgl_builtin("additive", F2, 2), 1);
        auto v = check_iterativity(D, g);
        CHECK(!v.pass);
        CHECK(v.detail.find("t") != std::string::npos);
    }
    SUBCASE("its components are zero, so composing them loses it") {
        auto comps = component_derivations(D);
        REQUIRE(comps.size() == 2);
        for (auto &c : comps)
            CHECK(c == HSDerivationT<RatFunc>::trivial(c.ctx()));
        auto composed = compose_one_dimensional(comps);
        CHECK(!(composed == D));
    }
}

TEST_CASE("check_hs_homomorphism flags a broken constant term") {
    auto F2 = FqField::prime(2);
    DerivCtx ctx;
    ctx.field = F2;
    ctx.kind = RingKind::RationalFunction;
    ctx.gens = {"t"};
    ctx.m = 1;
    ctx.e = 1;
    RatFunc t = RatFunc::variable(1, 0, F2->one());
    RatFunc one = RatFunc::constant(1, F2->one());
    auto good = TruncSeries<RatFunc>::constant(2, 1, 1, t);
    auto bad = TruncSeries<RatFunc>::constant(2, 1, 1, t + one);
    CHECK(HSDerivation(ctx, {good}).check_hs_homomorphism().pass);
    CHECK(!HSDerivation(ctx, {bad}).check_hs_homomorphism().pass);
}

TEST_CASE("canonical derivations on power series") {
    SUBCASE("additive: D_i(X^n) = binom(n,i) X^{n-i}") {
        auto F3 = FqField::prime(3);
        auto D = canonical_derivation(fgl_builtin("additive", F3, 1), 2, 16);
        PolyFq X = PolyFq::variable(1, 0, F3->one());
        for (uint32_t n = 0; n <= 8; ++n)
            for (uint32_t i = 0; i < 9; ++i) {
                PolyFq expect = PolyFq::constant(1, F3->from_int(binom_mod(n, i, 3)));
                if (i <= n)
                    expect = expect * X.pow(n - i);
                else
                    expect = PolyFq::zero(1, F3->zero());
                CHECK(D.component({i}, X.pow(n)) == expect);
            }
    }
    SUBCASE("multiplicative: D_1(X) = 1 + X") {
        auto F2 = FqField::prime(2);
        auto D = canonical_derivation(fgl_builtin("multiplicative", F2), 1, 16);
        PolyFq X = PolyFq::variable(1, 0, F2->one());
        CHECK(D.component({1}, X) == PolyFq::constant(1, F2->one()) + X);
    }
    SUBCASE("constants are fixed") {
        auto F2 = FqField::prime(2);
        auto D = canonical_derivation(fgl_builtin("witt2", F2), 1, 16);
        PolyFq c = PolyFq::constant(2, F2->one());
        CHECK(D.apply(c) ==
              TruncSeries<PolyFq>::constant(2, 1, 2, c));
    }
}

TEST_CASE("canonical derivations pass iterativity (all builtins, p in {2,3,5}, m <= 3)") {
    for (int64_t p : {int64_t(2), int64_t(3), int64_t(5)}) {
        auto F = FqField::prime(p);
        for (auto &law : builtins(F))
            for (int m = 1; m <= 3; ++m) {
                int precision = std::max<int>(16, int(ipow(uint64_t(p), uint32_t(m))));
                auto D = canonical_derivation(law, m, precision);
                auto v = check_iterativity(D, fgl_truncate(law, m));
                INFO(law.name(), " p=", p, " m=", m, ": ", v.detail);
                CHECK(v.pass);
            }
    }
}

TEST_CASE("canonical group derivations") {
    auto F2 = FqField::prime(2);
    SUBCASE("additive: t -> t + v") {
        auto D = canonical_group_derivation(fgl_builtin("additive", F2, 1), 1);
        RatFunc t = RatFunc::variable(1, 0, F2->one());
        CHECK(D.images()[0].coeff({0}) == t);
        CHECK(D.images()[0].coeff({1}) == RatFunc::constant(1, F2->one()));
    }
    SUBCASE("multiplicative: t -> t + v + tv, iterative") {
        for (int m = 1; m <= 2; ++m) {
            auto D = canonical_group_derivation(fgl_builtin("multiplicative", F2), m);
            RatFunc t = RatFunc::variable(1, 0, F2->one());
            RatFunc one = RatFunc::constant(1, F2->one());
            CHECK(D.images()[0].coeff({0}) == t);
            CHECK(D.images()[0].coeff({1}) == one + t);
            CHECK(check_iterativity(D, fgl_truncate(fgl_builtin("multiplicative", F2), m)).pass);
        }
    }
    SUBCASE("witt2 at p=2: (t1,t2) -> (t1+v1, t2+v2+t1v1)") {
        auto D = canonical_group_derivation(fgl_builtin("witt2", F2), 1);
        RatFunc t1 = RatFunc::variable(2, 0, F2->one());
        RatFunc t2 = RatFunc::variable(2, 1, F2->one());
        RatFunc one = RatFunc::constant(2, F2->one());
        CHECK(D.images()[0].coeff({0, 0}) == t1);
        CHECK(D.images()[0].coeff({1, 0}) == one);
        CHECK(D.images()[0].coeff({0, 1}).is_zero());
        CHECK(D.images()[1].coeff({0, 0}) == t2);
        CHECK(D.images()[1].coeff({0, 1}) == one);
        CHECK(D.images()[1].coeff({1, 0}) == t1);
    }
}

TEST_CASE("semidirect-law canonical derivation satisfies the asymmetric rule") {
    for (int64_t p : {int64_t(2), int64_t(3)}) {
        auto F = FqField::prime(p);
        auto law = fgl_builtin("ga_semidirect_gm", F);
        auto D = canonical_group_derivation(law, 1);
        for (size_t t = 0; t < 2; ++t) {
            RatFunc gen = RatFunc::variable(2, int(t), F->one());
            // D_(1,0) o D_(0,1) = D_(1,1) + D_(1,0)
            auto lhs = D.component({1, 0}, D.component({0, 1}, gen));
            auto rhs = D.component({1, 1}, gen) + D.component({1, 0}, gen);
            CHECK(lhs == rhs);
            // D_(0,1) o D_(1,0) = D_(1,1)
            CHECK(D.component({0, 1}, D.component({1, 0}, gen)) == D.component({1, 1}, gen));
        }
    }
}

TEST_CASE("iterativity is equivalent to the structure-constant identity") {
    for (int64_t p : {int64_t(2), int64_t(3)}) {
        auto F = FqField::prime(p);
        for (auto &law : builtins(F))
            for (int m = 1; m <= 2; ++m) {
                auto D = canonical_group_derivation(law, m);
                auto sc = structure_constants(fgl_truncate(law, m));
                const auto &idx = sc.indices();
                for (size_t t = 0; t < D.ctx().gens.size(); ++t) {
                    RatFunc gen = RatFunc::variable(law.dim(), int(t), F->one());
                    auto gen_img = D.apply(gen);
                    for (auto &i : idx.all()) {
                        auto img = D.apply(gen_img.coeff(i));
                        for (auto &j : idx.all()) {
                            RatFunc lhs = img.coeff(j); // D_j(D_i(gen))
                            RatFunc rhs = RatFunc::zero(law.dim(), F->zero());
                            for (auto &[k, c] : sc.row(i, j))
                                rhs += gen_img.coeff(k) * RatFunc::constant(law.dim(), c);
                            REQUIRE(lhs == rhs);
                        }
                    }
                }
            }
    }
}

TEST_CASE("Leibniz rule on random pairs") {
    std::mt19937_64 rng(123);
    auto run = [&](const HSDerivation &D, int arity, const FqFieldPtr &F, int pairs,
                   int maxdeg) {
        for (int it = 0; it < pairs; ++it) {
            RatFunc x = random_ratfunc(rng, F, arity, maxdeg);
            RatFunc y = random_ratfunc(rng, F, arity, maxdeg);
            REQUIRE(D.apply(x * y) == D.apply(x) * D.apply(y));
            REQUIRE(D.apply(x + y) == D.apply(x) + D.apply(y));
        }
    };
    auto F2 = FqField::prime(2);
    auto F3 = FqField::prime(3);
    run(canonical_group_derivation(fgl_builtin("multiplicative", F2), 2), 1, F2, 500, 3);
    run(canonical_group_derivation(fgl_builtin("additive", F3, 1), 2), 1, F3, 500, 3);
    // a small two-variable run; bivariate fraction reduction is much heavier
    run(canonical_group_derivation(fgl_builtin("witt2", F3), 1), 2, F3, 40, 2);
}

TEST_CASE("first-order components: additive equals the partials, all laws obey the chain rule") {
    for (int64_t p : {int64_t(2), int64_t(3)}) {
        auto F = FqField::prime(p);
        for (auto &law : builtins(F)) {
            auto D = canonical_derivation(law, 1, 16);
            int e = law.dim();
            IndexSet monos(9, size_t(e));
            for (int ax = 0; ax < e; ++ax) {
                ExpVec unit = ev_unit(size_t(e), size_t(ax));
                // frame matrix is the identity modulo (X)
                for (int s = 0; s < e; ++s) {
                    PolyFq img = D.component(unit, PolyFq::variable(e, s, F->one()));
                    Fq c0 = img.constant_term();
                    CHECK(c0 == (s == ax ? F->one() : F->zero()));
                }
                for (auto &mono : monos.all()) {
                    if (ev_total(mono) > 8)
                        continue;
                    PolyFq f = PolyFq::monomial(e, mono, F->one());
                    PolyFq got = D.component(unit, f);
                    if (law.name() == "additive") {
                        CHECK(got == f.derivative(ax));
                    }
                    // first-order components are derivations: the chain rule
                    PolyFq expect(e, F->zero());
                    for (int s = 0; s < e; ++s)
                        expect = expect + f.derivative(s) *
                                              D.component(unit, PolyFq::variable(e, s, F->one()));
                    CHECK(got == expect);
                }
            }
        }
    }
}

TEST_CASE("constants bases") {
    auto F2 = FqField::prime(2);
    SUBCASE("additive canonical over F_2[[X]]: constants at degree 6 are the squares") {
        auto D = canonical_derivation(fgl_builtin("additive", F2, 1), 1, 16);
        auto rep = constants_basis(D, 6);
        CHECK(rep.pth_powers_contained);
        CHECK(rep.strict_up_to_degree);
        REQUIRE(rep.constants.size() == 4); // 1, X^2, X^4, X^6
        for (auto &f : rep.constants)
            for (auto &t : f.terms())
                CHECK(t.first[0] % 2 == 0);
    }
    SUBCASE("the trivial derivation is not strict") {
        DerivCtx ctx;
        ctx.field = F2;
        ctx.kind = RingKind::PowerSeries;
        ctx.gens = {"X"};
        ctx.m = 1;
        ctx.e = 1;
        ctx.precision = 16;
        auto D = HSDerivationPS::trivial(ctx);
        auto rep = constants_basis(D, 3);
        CHECK(rep.constants.size() == 4); // everything of degree <= 3
        CHECK(!rep.strict_up_to_degree);
    }
    SUBCASE("constants = absolute constants of the level-1 truncation") {
        for (int64_t p : {int64_t(2), int64_t(3)}) {
            auto F = FqField::prime(p);
            for (auto &law : builtins(F)) {
                auto D = canonical_derivation(law, 2, 16);
                auto lhs = constants_basis(D, 5);
                auto rhs = absolute_constants_basis(D.truncated(1), 5);
                CHECK(lhs.constants == rhs.constants);
            }
        }
    }
    SUBCASE("every D_i maps the constants into the constants") {
        for (auto &law : builtins(F2)) {
            auto D = canonical_derivation(law, 2, 16);
            auto rep = constants_basis(D, 6);
            IndexSet idx = D.ctx().indices();
            for (auto &f : rep.constants)
                for (auto &i : idx.all()) {
                    PolyFq img = D.component(i, f);
                    for (int ax = 0; ax < D.ctx().e; ++ax)
                        REQUIRE(D.component(ev_unit(size_t(D.ctx().e), size_t(ax)), img)
                                    .is_zero());
                }
        }
    }
}

TEST_CASE("Wronskian dependence over the constants") {
    auto F2 = FqField::prime(2);
    auto g1 = fgl_truncate(fgl_builtin("additive", F2, 1), 1);
    auto D = additive_on_one_gen(F2, {"t"}, 0, 1);
    RatFunc t = RatFunc::variable(1, 0, F2->one());
    RatFunc one = RatFunc::constant(1, F2->one());

    SUBCASE("{1, t} is independent") {
        auto m = wronskian_matrix(D, g1, {one, t});
        CHECK(m.at(0, 0) == one);
        CHECK(m.at(0, 1) == t);
        CHECK(m.at(1, 0).is_zero());
        CHECK(m.at(1, 1) == one);
        CHECK(!dependence_over_constants(D, g1, {one, t}));
    }
    SUBCASE("{1, t^2} is dependent (t^2 is a constant)") {
        auto m = wronskian_matrix(D, g1, {one, t * t});
        CHECK(m.at(1, 1).is_zero());
        CHECK(dependence_over_constants(D, g1, {one, t * t}));
    }
    SUBCASE("more than p^e elements are always dependent") {
        std::mt19937_64 rng(5);
        for (int it = 0; it < 20; ++it) {
            std::vector<RatFunc> xs;
            for (int j = 0; j < 3; ++j)
                xs.push_back(random_ratfunc(rng, F2, 1, 3));
            CHECK(dependence_over_constants(D, g1, xs));
        }
    }
    SUBCASE("non-iterative input is rejected") {
        DerivCtx ctx = D.ctx();
        RatFunc tt = RatFunc::variable(1, 0, F2->one());
        // t -> t + t v is a section but not additive-iterative
        auto img = TruncSeries<RatFunc>::constant(2, 1, 1, tt) +
                   TruncSeries<RatFunc>::variable(2, 1, 1, 0, RatFunc::constant(1, F2->one()))
                       .scaled(tt);
        HSDerivation bad(ctx, {img});
        CHECK_THROWS_AS(wronskian_matrix(bad, g1, {tt}), argument_error);
    }
}

TEST_CASE("Wronskian agrees with the direct linear-system oracle over C = F_2(t^2)") {
    auto F2 = FqField::prime(2);
    auto g1 = fgl_truncate(fgl_builtin("additive", F2, 1), 1);
    auto D = additive_on_one_gen(F2, {"t"}, 0, 1);

    // write x = a(t^2) + t b(t^2); dependence over C is solvability of the
    // 2 x l system over F_2(s), s = t^2
    auto even_odd = [&](const PolyFq &f) {
        PolyFq even(1, f.proto()), odd(1, f.proto());
        for (auto &term : f.terms()) {
            ExpVec e = term.first;
            if (e[0] % 2 == 0) {
                e[0] /= 2;
                even.mutable_terms().push_back({e, term.second});
            } else {
                e[0] = (e[0] - 1) / 2;
                odd.mutable_terms().push_back({e, term.second});
            }
        }
        even.restore_invariants();
        odd.restore_invariants();
        return std::make_pair(even, odd);
    };
    auto coords_over_C = [&](const RatFunc &x) {
        auto [f0, f1] = even_odd(x.num());
        auto [g0, g1v] = even_odd(x.den());
        // 1/(g0 + t g1) = (g0 + t g1)/(g0^2 + s g1^2) with s = t^2
        PolyFq s = PolyFq::variable(1, 0, F2->one());
        PolyFq den = g0 * g0 + s * g1v * g1v;
        RatFunc a(f0 * g0 + s * f1 * g1v, den);
        RatFunc b(f1 * g0 + f0 * g1v, den);
        return std::make_pair(a, b);
    };

    std::mt19937_64 rng(20240809);
    int done = 0;
    while (done < 200) {
        std::vector<RatFunc> xs;
        for (int j = 0; j < 3; ++j)
            xs.push_back(random_ratfunc(rng, F2, 1, 3));
        bool any_zero = false;
        for (auto &x : xs)
            any_zero |= x.is_zero();
        if (any_zero)
            continue;
        ++done;
        // oracle: rank of the 2 x 3 coordinate matrix over F_2(s)
        Matrix<RatFunc> m(2, xs.size(), RatFunc::zero(1, F2->one()));
        for (size_t j = 0; j < xs.size(); ++j) {
            auto [a, b] = coords_over_C(xs[j]);
            m.at(0, j) = a;
            m.at(1, j) = b;
        }
        bool oracle_dependent = matrix_rank(m) < xs.size();
        REQUIRE(dependence_over_constants(D, g1, xs) == oracle_dependent);
    }
}

TEST_CASE("component derivations and composition") {
    auto F2 = FqField::prime(2);
    SUBCASE("composing axis copies of d/dt rebuilds the additive 2-dim derivation") {
        auto D1 = additive_on_one_gen(F2, {"t1", "t2"}, 0, 2);
        auto D2 = additive_on_one_gen(F2, {"t1", "t2"}, 1, 2);
        auto composed = compose_one_dimensional<RatFunc>({D1, D2});
        auto expect = canonical_group_derivation(fgl_builtin("additive", F2, 2), 2);
        // same generator images up to generator naming
        REQUIRE(composed.images().size() == expect.images().size());
        for (size_t t = 0; t < 2; ++t)
            CHECK(composed.images()[t] == expect.images()[t]);
    }
    SUBCASE("non-commuting inputs are rejected") {
        // on F_2(t1,t2): A moves t1 by t2-dependent amount, B moves t2
        DerivCtx ctx;
        ctx.field = F2;
        ctx.kind = RingKind::RationalFunction;
        ctx.gens = {"t1", "t2"};
        ctx.m = 1;
        ctx.e = 1;
        RatFunc t1 = RatFunc::variable(2, 0, F2->one());
        RatFunc t2 = RatFunc::variable(2, 1, F2->one());
        RatFunc one = RatFunc::constant(2, F2->one());
        using TS = TruncSeries<RatFunc>;
        // A: t1 -> t1 + t2 v, t2 -> t2 ; B: t2 -> t2 + v, t1 -> t1
        HSDerivation A(ctx, {TS::constant(2, 1, 1, t1) + TS::variable(2, 1, 1, 0, one).scaled(t2),
                             TS::constant(2, 1, 1, t2)});
        HSDerivation B(ctx, {TS::constant(2, 1, 1, t1),
                             TS::constant(2, 1, 1, t2) + TS::variable(2, 1, 1, 0, one)});
        CHECK_THROWS_AS(compose_one_dimensional<RatFunc>({A, B}), argument_error);
    }
}

TEST_CASE("full family reconstructs from axis components via structure constants") {
    for (int64_t p : {int64_t(2), int64_t(3)}) {
        auto F = FqField::prime(p);
        for (auto &law : builtins(F)) {
            if (law.dim() < 2)
                continue;
            for (int m = 1; m <= 2; ++m) {
                auto D = canonical_group_derivation(law, m);
                auto comps = component_derivations(D);
                auto sc = structure_constants(fgl_truncate(law, m));
                auto back = reconstruct_from_components(comps, sc);
                INFO(law.name(), " p=", p, " m=", m);
                REQUIRE(back.images().size() == D.images().size());
                for (size_t t = 0; t < D.images().size(); ++t)
                    CHECK(back.images()[t] == D.images()[t]);
            }
        }
    }
}

TEST_CASE("tensor derivations") {
    auto F2 = FqField::prime(2);
    auto Dt = additive_on_one_gen(F2, {"t"}, 0, 1);
    SUBCASE("D tensor trivial extends by constants") {
        DerivCtx cs;
        cs.field = F2;
        cs.kind = RingKind::RationalFunction;
        cs.gens = {"s"};
        cs.m = 1;
        cs.e = 1;
        auto T = tensor_derivation(Dt, HSDerivation::trivial(cs));
        CHECK(T.ctx().gens == std::vector<std::string>{"t", "s"});
        RatFunc s = RatFunc::variable(2, 1, F2->one());
        CHECK(T.apply(s) == TruncSeries<RatFunc>::constant(2, 1, 1, s));
        RatFunc t = RatFunc::variable(2, 0, F2->one());
        CHECK(T.component({1}, t) == RatFunc::constant(2, F2->one()));
    }
    SUBCASE("two additive canonicals stay additive-iterative") {
        auto Ds = additive_on_one_gen(F2, {"s"}, 0, 1);
        auto T = tensor_derivation(Dt, Ds);
        CHECK(check_iterativity(T, fgl_truncate(fgl_builtin("additive", F2, 1), 1)).pass);
    }
    SUBCASE("trivial tensor trivial is trivial") {
        DerivCtx ca, cb;
        ca.field = cb.field = F2;
        ca.kind = cb.kind = RingKind::RationalFunction;
        ca.gens = {"a"};
        cb.gens = {"b"};
        ca.m = cb.m = 1;
        ca.e = cb.e = 1;
        auto T = tensor_derivation(HSDerivation::trivial(ca), HSDerivation::trivial(cb));
        CHECK(T == HSDerivation::trivial(T.ctx()));
    }
    SUBCASE("name collisions are rejected") {
        CHECK_THROWS_AS(tensor_derivation(Dt, additive_on_one_gen(F2, {"t"}, 0, 1)),
                        argument_error);
    }
}

TEST_CASE("transported derivations") {
    auto F2 = FqField::prime(2);
    auto D = additive_on_one_gen(F2, {"t"}, 0, 1);
    RatFunc t = RatFunc::variable(1, 0, F2->one());
    RatFunc one = RatFunc::constant(1, F2->one());

    SUBCASE("identity substitution") {
        TransportMap phi{{}, {t}, {t}, 0};
        CHECK(transport_derivation(D, phi) == D);
    }
    SUBCASE("translation invariance: t -> t + 1") {
        TransportMap phi{{}, {t + one}, {t + one}, 0}; // self-inverse in char 2
        auto T = transport_derivation(D, phi);
        CHECK(T == D);
    }
    SUBCASE("non-invertible substitution is rejected") {
        TransportMap phi{{}, {t * t}, {t}, 0};
        CHECK_THROWS_AS(transport_derivation(D, phi), argument_error);
    }
}

TEST_CASE("strict extension values") {
    auto F2 = FqField::prime(2);
    // t-only additive family on F_2(s, t), M = 2
    HSFamily fam;
    for (int m = 1; m <= 2; ++m) {
        DerivCtx ctx;
        ctx.field = F2;
        ctx.kind = RingKind::RationalFunction;
        ctx.gens = {"s", "t"};
        ctx.m = m;
        ctx.e = 1;
        RatFunc s = RatFunc::variable(2, 0, F2->one());
        RatFunc t = RatFunc::variable(2, 1, F2->one());
        RatFunc one = RatFunc::constant(2, F2->one());
        using TS = TruncSeries<RatFunc>;
        fam.push_back(HSDerivation(ctx, {TS::constant(2, m, 1, s),
                                         TS::constant(2, m, 1, t) +
                                             TS::variable(2, m, 1, 0, one)}));
    }
    auto law = fgl_builtin("additive", F2, 1);

    SUBCASE("a = s^{1/2}: all higher components vanish and the extension is iterative") {
        auto res = strict_extension_values(fam, law, "s", "u");
        for (auto &[i, val] : res.values)
            CHECK(val.is_zero());
        CHECK(res.iterative.pass);
        // the extended derivation fixes u and differentiates t
        RatFunc u = RatFunc::variable(2, 0, F2->one());
        CHECK(res.extended.apply(u) == TruncSeries<RatFunc>::constant(2, 1, 1, u));
        CHECK(res.extended.component({1}, RatFunc::variable(2, 1, F2->one())) ==
              RatFunc::constant(2, F2->one()));
    }
    SUBCASE("for a already in K the formula returns D_i(a)") {
        std::mt19937_64 rng(77);
        for (int it = 0; it < 30; ++it) {
            RatFunc a = random_ratfunc(rng, F2, 2, 3);
            auto vals = strict_extension_value_list(fam[1], a * a);
            auto img = fam[0].apply(a);
            for (auto &[i, v] : vals)
                REQUIRE(v == img.coeff(i));
        }
    }
    SUBCASE("a non-constant generator is rejected") {
        CHECK_THROWS_AS(strict_extension_values(fam, law, "t", "u"), argument_error);
    }
}

TEST_CASE("chain compatibility") {
    SUBCASE("canonical families for all builtins at M = 3") {
        for (int64_t p : {int64_t(2), int64_t(3)}) {
            auto F = FqField::prime(p);
            for (auto &law : builtins(F)) {
                int precision = std::max<int>(16, int(ipow(uint64_t(p), 3)));
                auto fam = canonical_family(law, 3, precision);
                auto v = chain_compatibility_check(fam, law);
                INFO(law.name(), " p=", p, ": ", v.detail);
                CHECK(v.pass);
            }
        }
    }
    SUBCASE("a corrupted level-2 coefficient fails") {
        auto F2 = FqField::prime(2);
        auto law = fgl_builtin("additive", F2, 1);
        auto fam = canonical_family(law, 3, 16);
        auto ctx = fam[1].ctx();
        auto img = fam[1].images()[0];
        img = img + TruncSeries<PolyFq>::monomial(2, 2, 1, {2}, PolyFq::constant(1, F2->one()));
        fam[1] = HSDerivationPS(ctx, {img});
        CHECK(!chain_compatibility_check(fam, law).pass);
    }
    SUBCASE("M = 1 reduces to a single iterativity check") {
        auto F3 = FqField::prime(3);
        auto law = fgl_builtin("multiplicative", F3);
        auto fam = canonical_family(law, 1, 16);
        CHECK(chain_compatibility_check(fam, law).pass);
    }
}

TEST_CASE("derivations over an extension base field") {
    // canonical multiplicative derivation over F_4, and lambda on constants
    auto F4 = FqField::extension(2, 2);
    auto D = canonical_group_derivation(fgl_builtin("multiplicative", F4), 1);
    CHECK(check_iterativity(D, fgl_truncate(fgl_builtin("multiplicative", F4), 1)).pass);
    Fq g = F4->generator();
    RatFunc c = RatFunc::constant(1, g);
    CHECK(D.apply(c) == TruncSeries<RatFunc>::constant(2, 1, 1, c));
}
