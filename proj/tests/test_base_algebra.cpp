#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hsfg/linalg.hpp"
#include "hsfg/poly_algorithms.hpp"
#include "hsfg/ratfunc.hpp"

using namespace hsfg;

namespace {

PolyFq random_poly(std::mt19937_64 &rng, const FqFieldPtr &field, int arity, int maxdeg) {
    PolyFq f(arity, field->zero());
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<int64_t> cf(0, field->q() - 1);
    int terms = 1 + int(rng() % 4);
    for (int t = 0; t < terms; ++t) {
        ExpVec e(arity, 0);
        int budget = deg(rng);
        for (int v = 0; v < arity && budget > 0; ++v) {
            e[v] = uint32_t(rng() % (budget + 1));
            budget -= int(e[v]);
        }
        f = f + PolyFq::monomial(arity, e, field->from_int(cf(rng)));
    }
    return f;
}

} // namespace

TEST_CASE("F_p arithmetic") {
    auto F5 = FqField::prime(5);
    Fq a = F5->from_int(3), b = F5->from_int(4);
    CHECK(a + b == F5->from_int(2));
    CHECK(a * b == F5->from_int(2));
    CHECK((a - b) == F5->from_int(4));
    CHECK(a.inverse() * a == F5->one());
    CHECK(a.pth_root().pow(5) == a);
    CHECK_THROWS_AS(F5->zero().inverse(), unit_error);
}

TEST_CASE("F_4 and F_9 extension arithmetic") {
    auto F4 = FqField::extension(2, 2);
    Fq g = F4->generator();
    CHECK(g * g == g + F4->one()); // g^2 = g+1 for x^2+x+1
    CHECK(g.pow(3) == F4->one());
    CHECK(g.inverse() == g.pow(2));
    CHECK(g.to_string() == "g");
    CHECK((g * g).to_string() == "g^2");
    // Frobenius inverse really is the p-th root
    for (auto &x : F4->all_elements())
        CHECK(x.pth_root() * x.pth_root() == x);

    auto F9 = FqField::extension(3, 2);
    for (auto &x : F9->all_elements()) {
        CHECK(x.pth_root().pow(3) == x);
        if (!x.is_zero())
            CHECK(x * x.inverse() == F9->one());
    }
}

TEST_CASE("polynomial arithmetic and gcd") {
    auto F2 = FqField::prime(2);
    Fq one = F2->one();
    PolyFq t = PolyFq::variable(1, 0, one);
    PolyFq f = (t + PolyFq::constant(1, one)) * t;
    CHECK(f.coeff({1}) == one);
    CHECK(f.coeff({2}) == one);
    CHECK(poly_gcd(f, t) == t);
    PolyFq g = t * t; // gcd(t^2+t, t^2) = t
    CHECK(poly_gcd(f, g) == t);

    // bivariate: gcd((x+y)*x, (x+y)*y) = x+y
    PolyFq x = PolyFq::variable(2, 0, one), y = PolyFq::variable(2, 1, one);
    CHECK(poly_gcd((x + y) * x, (x + y) * y) == x + y);

    auto F3 = FqField::prime(3);
    PolyFq u = PolyFq::variable(2, 0, F3->one()), v = PolyFq::variable(2, 1, F3->one());
    PolyFq common = u * v + PolyFq::constant(2, F3->from_int(2));
    PolyFq a = common * (u + v);
    PolyFq b = common * (u * u + v);
    PolyFq gg = poly_gcd(a, b);
    CHECK(exact_div(a, gg) * gg == a);
    CHECK(exact_div(b, gg) * gg == b);
    CHECK(gg == make_monic(common));
}

TEST_CASE("gcd of random products has the planted factor") {
    std::mt19937_64 rng(7);
    for (auto p : {int64_t(2), int64_t(3)}) {
        auto F = FqField::prime(p);
        for (int it = 0; it < 40; ++it) {
            PolyFq h = random_poly(rng, F, 2, 2);
            PolyFq a = random_poly(rng, F, 2, 2);
            PolyFq b = random_poly(rng, F, 2, 2);
            if (h.is_zero() || a.is_zero() || b.is_zero())
                continue;
            PolyFq g = poly_gcd(h * a, h * b);
            // the planted factor divides the gcd, and the gcd divides both
            CHECK(poly_divmod(g, std::vector<PolyFq>{make_monic(h)}).remainder.is_zero());
            CHECK(poly_divmod(h * a, std::vector<PolyFq>{g}).remainder.is_zero());
            CHECK(poly_divmod(h * b, std::vector<PolyFq>{g}).remainder.is_zero());
        }
    }
}

TEST_CASE("rational functions reduce to lowest terms") {
    auto F2 = FqField::prime(2);
    Fq one = F2->one();
    PolyFq t = PolyFq::variable(1, 0, one);
    PolyFq one_p = PolyFq::constant(1, one);
    RatFunc x(t * t + t, t * t); // (t^2+t)/t^2 = (t+1)/t
    CHECK(x.num() == t + one_p);
    CHECK(x.den() == t);
    CHECK(x * RatFunc(t) == RatFunc(t + one_p));
    CHECK(x.inverse() * x == RatFunc::constant(1, one));
    CHECK_THROWS_AS(RatFunc::zero(1, one).inverse(), unit_error);
}

TEST_CASE("lambda and is_pth_power on F_2(t)") {
    auto F2 = FqField::prime(2);
    Fq one = F2->one();
    RatFunc t = RatFunc::variable(1, 0, one);
    RatFunc one_r = RatFunc::constant(1, one);

    CHECK(lambda(RatFunc::zero(1, one)).is_zero());
    CHECK(lambda(t * t) == t);
    CHECK(lambda(t).is_zero()); // t is not a square
    CHECK(is_pth_power(t) == false);
    CHECK(is_pth_power(t * t / (one_r + t * t)) == true);
    CHECK(lambda(t * t / (one_r + t * t)) == t / (one_r + t));
    for (int64_t c = 0; c < 2; ++c)
        CHECK(is_pth_power(RatFunc::constant(1, F2->from_int(c))));
}

TEST_CASE("lambda on F_9 elements") {
    auto F9 = FqField::extension(3, 2);
    for (auto &x : F9->all_elements()) {
        Fq r = lambda(x);
        CHECK(r.pow(3) == x);
    }
}

TEST_CASE("is_pth_power(f^p) for random rational functions") {
    std::mt19937_64 rng(2024);
    auto check_field = [&](const FqFieldPtr &F, int arity, uint32_t p) {
        for (int it = 0; it < 500; ++it) {
            PolyFq n = random_poly(rng, F, arity, 4);
            PolyFq d = random_poly(rng, F, arity, 4);
            if (n.is_zero() || d.is_zero())
                continue;
            RatFunc f(n, d);
            RatFunc fp = f.pow(p);
            CHECK(is_pth_power(fp));
            CHECK(lambda(fp) == f);
        }
    };
    check_field(FqField::prime(2), 1, 2);
    check_field(FqField::prime(3), 2, 3);
}

TEST_CASE("poly_divmod basics") {
    auto F2 = FqField::prime(2);
    Fq one = F2->one();
    PolyFq x = PolyFq::variable(2, 0, one), y = PolyFq::variable(2, 1, one);
    PolyFq one_p = PolyFq::constant(2, one);

    SUBCASE("f = g") {
        auto r = poly_divmod(x * y, {x * y});
        CHECK(r.quotients[0] == one_p);
        CHECK(r.remainder.is_zero());
    }
    SUBCASE("x*y + 1 by x under lex") {
        auto r = poly_divmod(x * y + one_p, {x}, MonomialOrder::Lex);
        CHECK(r.quotients[0] == y);
        CHECK(r.remainder == one_p);
    }
    SUBCASE("zero dividend") {
        auto r = poly_divmod(PolyFq::zero(2, F2->zero()), {x});
        CHECK(r.quotients[0].is_zero());
        CHECK(r.remainder.is_zero());
    }
    SUBCASE("empty divisor list is an argument error") {
        CHECK_THROWS_AS(poly_divmod(x, std::vector<PolyFq>{}), argument_error);
    }
}

TEST_CASE("divmod reconstruction property") {
    std::mt19937_64 rng(99);
    for (auto p : {int64_t(2), int64_t(3)}) {
        auto F = FqField::prime(p);
        for (int it = 0; it < 100; ++it) {
            PolyFq f = random_poly(rng, F, 2, 4);
            std::vector<PolyFq> gs;
            for (int i = 0; i < 2; ++i) {
                PolyFq g = random_poly(rng, F, 2, 2);
                if (!g.is_zero())
                    gs.push_back(g);
            }
            if (gs.empty())
                continue;
            auto r = poly_divmod(f, gs);
            PolyFq back = r.remainder;
            for (size_t i = 0; i < gs.size(); ++i)
                back = back + r.quotients[i] * gs[i];
            CHECK(back == f);
        }
    }
}

TEST_CASE("buchberger and ideal membership") {
    auto F2 = FqField::prime(2);
    Fq one = F2->one();
    PolyFq x = PolyFq::variable(2, 0, one), y = PolyFq::variable(2, 1, one);
    PolyFq one_p = PolyFq::constant(2, one);

    SUBCASE("principal ideal") {
        auto gb = buchberger(std::vector<PolyFq>{x});
        REQUIRE(gb.size() == 1);
        CHECK(gb[0] == x);
        CHECK(ideal_membership(x * y, gb));
        CHECK(!ideal_membership(one_p, gb));
        CHECK(!ideal_membership(y, gb));
    }
    SUBCASE("x^4 in (x^2 - y, y^2) over F_2") {
        auto gb = buchberger(std::vector<PolyFq>{x * x - y, y * y});
        CHECK(ideal_membership(x.pow(4), gb));
        CHECK(!ideal_membership(x.pow(3), gb));
    }
    SUBCASE("budget error") {
        GroebnerOptions opt;
        opt.pair_budget = 0;
        CHECK_THROWS_AS(buchberger(std::vector<PolyFq>{x * x - y, y * y, x * y - one_p}, opt),
                        budget_error);
    }
}

TEST_CASE("membership agrees with linear algebra in low-degree slices") {
    std::mt19937_64 rng(41);
    for (auto p : {int64_t(2), int64_t(3)}) {
        auto F = FqFieldPtr(FqField::prime(p));
        for (int trial = 0; trial < 12; ++trial) {
            int arity = 2;
            std::vector<PolyFq> gens;
            for (int i = 0; i < 1 + int(rng() % 3); ++i) {
                PolyFq g = random_poly(rng, F, arity, 2);
                if (!g.is_zero())
                    gens.push_back(g);
            }
            if (gens.empty())
                continue;
            auto gb = buchberger(gens);

            // members by construction must pass, and the linear oracle must
            // find them in the slice spanned by monomial multiples
            PolyFq f(arity, F->zero());
            for (auto &g : gens)
                f = f + random_poly(rng, F, arity, 1) * g;
            CHECK(ideal_membership(f, gb));

            uint64_t slice_deg = f.total_degree();
            for (auto &g : gens) // the construction used multipliers of degree <= 1
                slice_deg = std::max(slice_deg, g.total_degree() + 1);
            // columns: monomial multiples m*g with deg <= slice_deg
            std::vector<std::vector<Fq>> cols;
            IndexSet monos(uint32_t(slice_deg + 1), size_t(arity));
            std::vector<ExpVec> slice;
            for (auto &e : monos.all())
                if (ev_total(e) <= slice_deg)
                    slice.push_back(e);
            auto coord = [&](const PolyFq &poly) {
                std::vector<Fq> v(slice.size(), F->zero());
                for (auto &t : poly.terms()) {
                    for (size_t s = 0; s < slice.size(); ++s)
                        if (slice[s] == t.first) {
                            v[s] = t.second;
                            break;
                        }
                }
                return v;
            };
            for (auto &g : gens)
                for (auto &e : slice)
                    if (ev_total(e) + g.total_degree() <= slice_deg)
                        cols.push_back(coord(g.shifted(e)));
            bool lin = in_span(cols, coord(f), F->zero());
            CHECK(lin == true);

            // a random non-member (by GB) must not be linearly expressible either
            PolyFq h = random_poly(rng, F, arity, 2);
            if (!h.is_zero() && !ideal_membership(h, gb)) {
                uint64_t hd = h.total_degree() + 2;
                std::vector<ExpVec> slice2;
                IndexSet monos2(uint32_t(hd + 1), size_t(arity));
                for (auto &e : monos2.all())
                    if (ev_total(e) <= hd)
                        slice2.push_back(e);
                auto coord2 = [&](const PolyFq &poly) {
                    std::vector<Fq> v(slice2.size(), F->zero());
                    for (auto &t : poly.terms())
                        for (size_t s = 0; s < slice2.size(); ++s)
                            if (slice2[s] == t.first) {
                                v[s] = t.second;
                                break;
                            }
                    return v;
                };
                std::vector<std::vector<Fq>> cols2;
                for (auto &g : gens)
                    for (auto &e : slice2)
                        if (ev_total(e) + g.total_degree() <= hd)
                            cols2.push_back(coord2(g.shifted(e)));
                CHECK(in_span(cols2, coord2(h), F->zero()) == false);
            }
        }
    }
}

TEST_CASE("rank and kernel over F_q and over F_2(t)") {
    auto F3 = FqField::prime(3);
    Matrix<Fq> m(2, 3, F3->zero());
    m.at(0, 0) = F3->one();
    m.at(0, 1) = F3->from_int(2);
    m.at(1, 0) = F3->from_int(2);
    m.at(1, 1) = F3->from_int(4); // = 1, second row = 2 * first
    CHECK(matrix_rank(m) == 1);
    auto ker = kernel_basis(m, F3->zero(), F3->one());
    CHECK(ker.size() == 2);

    auto F2 = FqField::prime(2);
    RatFunc t = RatFunc::variable(1, 0, F2->one());
    Matrix<RatFunc> w(2, 2, RatFunc::zero(1, F2->one()));
    w.at(0, 0) = RatFunc::constant(1, F2->one());
    w.at(0, 1) = t;
    w.at(1, 1) = RatFunc::constant(1, F2->one());
    CHECK(matrix_rank(w) == 2);
}
