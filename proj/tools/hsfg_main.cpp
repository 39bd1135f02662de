#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "hsfg/suite.hpp"

using namespace hsfg;

namespace {

constexpr int EXIT_PASS = 0;
constexpr int EXIT_VERDICT = 1;
constexpr int EXIT_USAGE = 2;
constexpr int EXIT_BUDGET = 3;

uint64_t env_budget(uint64_t fallback) {
    if (const char *s = std::getenv("HF_BUDGET"))
        return std::strtoull(s, nullptr, 10);
    return fallback;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

FormalGroupLaw make_law(const std::string &name, int64_t p, int n, int e) {
    auto field = n == 1 ? FqField::prime(p) : FqField::extension(p, n);
    return fgl_builtin(name, field, e);
}

int run_fgl_check(const std::string &name, int64_t p, int n, int m, int e) {
    auto law = make_law(name, p, n, e);
    auto v = fgl_check_axioms(law, m);
    std::cout << record_to_line({{"record", "axioms"},
                                 {"law", law.name()},
                                 {"e", std::to_string(law.dim())},
                                 {"p", std::to_string(p)},
                                 {"m", std::to_string(m)},
                                 {"status", v.pass ? "pass" : "fail"}})
              << "\n";
    if (!v.pass)
        std::cout << "# " << v.detail << "\n";
    return v.pass ? EXIT_PASS : EXIT_VERDICT;
}

int run_fgl_constants(const std::string &name, int64_t p, int n, int m, int e, bool records) {
    auto law = make_law(name, p, n, e);
    auto sc = structure_constants(fgl_truncate(law, m));
    const IndexSet &idx = sc.indices();
    if (!records)
        std::cout << "# nonzero structure constants c[i][j][k] of " << law.name() << "[" << m
                  << "] over F_" << p << "\n";
    for (auto &i : idx.all())
        for (auto &j : idx.all())
            for (auto &[k, c] : sc.row(i, j)) {
                if (records) {
                    std::cout << record_to_line({{"record", "constant"},
                                                 {"i", ev_to_string(i)},
                                                 {"j", ev_to_string(j)},
                                                 {"k", ev_to_string(k)},
                                                 {"value", c.to_string()}})
                              << "\n";
                } else {
                    std::cout << "c[" << ev_to_string(i) << "][" << ev_to_string(j) << "]["
                              << ev_to_string(k) << "] = " << c.to_string() << "\n";
                }
            }
    return EXIT_PASS;
}

int run_hs_canonical(const std::string &group, int64_t p, int n, int m, int e) {
    auto law = make_law(group, p, n, e);
    auto D = canonical_group_derivation(law, m);
    std::cout << derivation_to_file(D);
    return EXIT_PASS;
}

int run_hs_check_iter(const std::string &group, const std::string &file) {
    auto parsed = parse_derivation_file(slurp(file));
    const DerivCtx &ctx = parsed.derivation.ctx();
    auto law = fgl_builtin(group, ctx.field, ctx.e);
    auto hv = parsed.derivation.check_hs_homomorphism();
    if (!hv.pass) {
        std::cout << record_to_line({{"record", "check_iter"}, {"status", "fail"}}) << "\n# "
                  << hv.detail << "\n";
        return EXIT_VERDICT;
    }
    auto v = check_iterativity(parsed.derivation, fgl_truncate(law, ctx.m));
    std::cout << record_to_line({{"record", "check_iter"},
                                 {"law", law.name()},
                                 {"m", std::to_string(ctx.m)},
                                 {"status", v.pass ? "pass" : "fail"}})
              << "\n";
    if (!v.pass)
        std::cout << "# " << v.detail << "\n";
    return v.pass ? EXIT_PASS : EXIT_VERDICT;
}

int run_hs_constants(const std::string &file, int degree, bool absolute) {
    auto parsed = parse_derivation_file(slurp(file));
    auto rep = absolute ? absolute_constants_basis(parsed.derivation, degree)
                        : constants_basis(parsed.derivation, degree);
    std::cout << record_to_line(
                     {{"record", "constants"},
                      {"degree", std::to_string(degree)},
                      {"kind", absolute ? "absolute" : "first-order"},
                      {"basis_size", std::to_string(rep.constants.size())},
                      {"pth_powers", std::to_string(rep.pth_powers.size())},
                      {"strict", rep.strict_up_to_degree ? "true" : "false"}})
              << "\n";
    const auto &gens = parsed.derivation.ctx().gens;
    for (auto &f : rep.constants)
        std::cout << record_to_line({{"record", "constant_basis_element"},
                                     {"value", poly_to_string(f, gens, true)}})
                  << "\n";
    return EXIT_PASS;
}

int run_hs_wronskian(const std::string &file, const std::string &group,
                     const std::vector<std::string> &elems) {
    auto parsed = parse_derivation_file(slurp(file));
    const DerivCtx &ctx = parsed.derivation.ctx();
    auto law = fgl_builtin(group, ctx.field, ctx.e);
    std::vector<RatFunc> xs;
    for (auto &e : elems)
        xs.push_back(parse_rational(e, ctx.field, ctx.gens));
    auto g1 = fgl_truncate(law, 1);
    auto m = wronskian_matrix(parsed.derivation, g1, xs);
    size_t rank = matrix_rank(m);
    bool dependent = rank < xs.size();
    std::cout << record_to_line({{"record", "wronskian"},
                                 {"elements", std::to_string(xs.size())},
                                 {"rank", std::to_string(rank)},
                                 {"dependent", dependent ? "true" : "false"}})
              << "\n";
    for (size_t r = 0; r < m.rows; ++r) {
        std::string row;
        for (size_t c = 0; c < m.cols; ++c)
            row += (c ? " " : "") + ratfunc_to_string(m.at(r, c), ctx.gens, true);
        std::cout << "# [" << row << "]\n";
    }
    return EXIT_PASS;
}

int run_geo_nabla(const std::string &file, const std::string &variety) {
    auto parsed = parse_derivation_file(slurp(file));
    const DerivCtx &ctx = parsed.derivation.ctx();
    auto V = parse_variety_file(slurp(variety), ctx.field, ctx.gens);
    JetRing jet(parsed.derivation, V.ambient);
    auto nv = nabla_ideal(V, jet);
    std::vector<std::string> jet_names;
    for (int s = 0; s < nv.ambient; ++s)
        jet_names.push_back(jet.var_name(s));
    std::cout << variety_to_file(nv, jet_names, ctx.gens);
    return EXIT_PASS;
}

int run_geo_compat(const std::string &file, const std::string &group, const std::string &vfile,
                   const std::string &wfile, const std::string &mode, int64_t q) {
    auto parsed = parse_derivation_file(slurp(file));
    const DerivCtx &ctx = parsed.derivation.ctx();
    auto law = fgl_builtin(group, ctx.field, ctx.e);
    auto V = parse_variety_file(slurp(vfile), ctx.field, ctx.gens);
    auto W = parse_variety_file(slurp(wfile), ctx.field, ctx.gens);
    JetRing jet(parsed.derivation, V.ambient);
    CompatOptions opt;
    opt.pair_budget = env_budget(opt.pair_budget);
    opt.point_budget = env_budget(opt.point_budget);
    if (mode == "pointwise") {
        opt.mode = CompatMode::Pointwise;
        int64_t p = ctx.p();
        int n = 0;
        int64_t qq = 1;
        while (qq < q) {
            qq *= p;
            ++n;
        }
        if (qq != q)
            throw argument_error("--q must be a power of the base characteristic");
        opt.enumeration_field = n <= 1 ? ctx.field : FqField::extension(p, n);
    } else if (mode == "symbolic") {
        opt.mode = CompatMode::Symbolic;
    } else {
        throw argument_error("--mode must be pointwise or symbolic");
    }
    auto v = cv_compatibility(fgl_truncate(law, ctx.m), jet, V, W, opt);
    std::cout << record_to_line({{"record", "compat"},
                                 {"mode", mode},
                                 {"status", v.compatible ? "compatible" : "incompatible"}})
              << "\n";
    if (!v.detail.empty())
        std::cout << "# " << v.detail << "\n";
    return v.compatible ? EXIT_PASS : EXIT_VERDICT;
}

int run_geo_search(const std::string &file, const std::string &vfile, const std::string &wfile,
                   const std::string &zfile, int64_t q, int degree, bool assert_irred,
                   bool assert_generic) {
    auto parsed = parse_derivation_file(slurp(file));
    const DerivCtx &ctx = parsed.derivation.ctx();
    auto V = parse_variety_file(slurp(vfile), ctx.field, ctx.gens);
    auto W = parse_variety_file(slurp(wfile), ctx.field, ctx.gens);
    std::optional<AffineVariety> Z;
    if (!zfile.empty())
        Z = parse_variety_file(slurp(zfile), ctx.field, ctx.gens);
    JetRing jet(parsed.derivation, V.ambient);
    SearchSpace space;
    space.budget = env_budget(space.budget);
    if (q > 0) {
        space.kind = SearchSpace::Kind::FieldPoints;
        if (q != ctx.field->q())
            throw argument_error("--q must equal the base field size for field-point search");
    } else {
        space.kind = SearchSpace::Kind::DegreeBound;
        space.degree = degree;
    }
    auto rep = axiom_instance_check(jet, V, W, Z, space, assert_irred, assert_generic);
    Record rec{{"record", "axiom_search"},
               {"found", rep.found ? "true" : "false"},
               {"exhausted", rep.exhausted ? "true" : "false"},
               {"examined", std::to_string(rep.examined)},
               {"irreducibility_asserted", rep.irreducibility_asserted ? "true" : "false"},
               {"generic_projection_asserted",
                rep.generic_projection_asserted ? "true" : "false"}};
    if (rep.found) {
        std::string w;
        for (size_t t = 0; t < rep.witness.size(); ++t)
            w += (t ? ";" : "") + ratfunc_to_string(rep.witness[t], ctx.gens, true);
        rec.push_back({"witness", w});
    }
    std::cout << record_to_line(rec) << "\n";
    return rep.found ? EXIT_PASS : EXIT_VERDICT;
}

int run_suite(uint64_t seed) {
    auto results = run_acceptance(seed);
    std::cout << acceptance_report(results);
    bool all = true;
    for (auto &r : results) {
        all = all && r.pass;
        if (!r.pass)
            std::cerr << "criterion " << r.number << " (" << r.name << "): FAIL — " << r.detail
                      << "\n";
    }
    return all ? EXIT_PASS : EXIT_VERDICT;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"exact computation with truncated group laws and iterative HS-derivations"};
    app.require_subcommand(1);

    // fgl
    auto *fgl = app.add_subcommand("fgl", "formal group laws");
    fgl->require_subcommand(1);
    std::string name = "additive";
    int64_t p = 2;
    int n = 1, m = 1, e = 1;
    bool records = false;

    auto *fcheck = fgl->add_subcommand("check", "verify the group-law axioms");
    fcheck->add_option("--name", name, "builtin law")->required();
    fcheck->add_option("--p", p, "characteristic")->required();
    fcheck->add_option("--n", n, "field extension degree");
    fcheck->add_option("--m", m, "truncation level")->required();
    fcheck->add_option("--e", e, "dimension (additive only)");

    auto *fconst = fgl->add_subcommand("constants", "emit the comultiplication constants");
    fconst->add_option("--name", name)->required();
    fconst->add_option("--p", p)->required();
    fconst->add_option("--n", n);
    fconst->add_option("--m", m)->required();
    fconst->add_option("--e", e);
    fconst->add_flag("--records", records, "line-oriented records instead of a table");

    // hs
    auto *hs = app.add_subcommand("hs", "HS-derivations");
    hs->require_subcommand(1);
    std::string group = "additive", file, wfile, zfile, vfile, mode = "pointwise";
    int degree = 0;
    bool absolute = false;
    std::vector<std::string> elems;

    auto *hcanon = hs->add_subcommand("canonical", "emit a canonical derivation file");
    hcanon->add_option("--group", group)->required();
    hcanon->add_option("--p", p)->required();
    hcanon->add_option("--n", n);
    hcanon->add_option("--m", m)->required();
    hcanon->add_option("--e", e);

    auto *hiter = hs->add_subcommand("check-iter", "check iterativity against a builtin law");
    hiter->add_option("--group", group)->required();
    hiter->add_option("--file", file, "derivation file")->required();

    auto *hconst = hs->add_subcommand("constants", "constants basis in a degree slice");
    hconst->add_option("--file", file)->required();
    hconst->add_option("--degree", degree)->required();
    hconst->add_flag("--absolute", absolute, "kernel of every D_i, i != 0");

    auto *hwr = hs->add_subcommand("wronskian", "Wronskian matrix and dependence verdict");
    hwr->add_option("--file", file)->required();
    hwr->add_option("--group", group)->required();
    hwr->add_option("--elem", elems, "element (repeatable)")->required();

    // geo
    auto *geo = app.add_subcommand("geo", "prolongations and geometric instances");
    geo->require_subcommand(1);
    int64_t qflag = 0;
    bool assert_irred = false, assert_generic = false;

    auto *gnabla = geo->add_subcommand("nabla", "emit the prolongation of a variety");
    gnabla->add_option("--file", file)->required();
    gnabla->add_option("--variety", vfile)->required();

    auto *gcompat = geo->add_subcommand("check-compat", "check c_n(W) inside nabla(W)");
    gcompat->add_option("--file", file)->required();
    gcompat->add_option("--group", group)->required();
    gcompat->add_option("--variety", vfile)->required();
    gcompat->add_option("--w", wfile)->required();
    gcompat->add_option("--mode", mode, "pointwise|symbolic");
    gcompat->add_option("--q", qflag, "enumeration field size (pointwise)");

    auto *gsearch = geo->add_subcommand("search", "search for a geometric-axiom witness");
    gsearch->add_option("--file", file)->required();
    gsearch->add_option("--variety", vfile)->required();
    gsearch->add_option("--w", wfile)->required();
    gsearch->add_option("--z", zfile);
    gsearch->add_option("--q", qflag, "search the base-field points");
    gsearch->add_option("--degree", degree, "search polynomial tuples of this degree");
    gsearch->add_flag("--assert-irreducible", assert_irred);
    gsearch->add_flag("--assert-generic-projection", assert_generic);

    // suite
    auto *suite = app.add_subcommand("suite", "verification suites");
    suite->require_subcommand(1);
    uint64_t seed = 0;
    auto *sacc = suite->add_subcommand("acceptance", "run the full acceptance list");
    sacc->add_option("--seed", seed, "seed for the randomized property instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &err) {
        app.exit(err);
        return EXIT_USAGE;
    }

    try {
        if (fcheck->parsed())
            return run_fgl_check(name, p, n, m, e);
        if (fconst->parsed())
            return run_fgl_constants(name, p, n, m, e, records);
        if (hcanon->parsed())
            return run_hs_canonical(group, p, n, m, e);
        if (hiter->parsed())
            return run_hs_check_iter(group, file);
        if (hconst->parsed())
            return run_hs_constants(file, degree, absolute);
        if (hwr->parsed())
            return run_hs_wronskian(file, group, elems);
        if (gnabla->parsed())
            return run_geo_nabla(file, vfile);
        if (gcompat->parsed())
            return run_geo_compat(file, group, vfile, wfile, mode, qflag);
        if (gsearch->parsed())
            return run_geo_search(file, vfile, wfile, zfile, qflag, degree, assert_irred,
                                  assert_generic);
        if (sacc->parsed())
            return run_suite(seed);
    } catch (const budget_error &err) {
        std::cerr << "budget exceeded: " << err.what() << "\n";
        return EXIT_BUDGET;
    } catch (const parse_error &err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return EXIT_USAGE;
    } catch (const argument_error &err) {
        std::cerr << "argument error: " << err.what() << "\n";
        return EXIT_USAGE;
    } catch (const std::exception &err) {
        std::cerr << "error: " << err.what() << "\n";
        return EXIT_USAGE;
    }
    return EXIT_USAGE;
}
