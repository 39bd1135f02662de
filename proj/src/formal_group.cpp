#include "hsfg/formal_group.hpp"

namespace hsfg {

FormalGroupLaw::FormalGroupLaw(std::string name, int e, FqFieldPtr field,
                               std::vector<PolyFq> comps)
    : name_(std::move(name)), e_(e), field_(std::move(field)), comps_(std::move(comps)) {
    if (e_ < 1 || int(comps_.size()) != e_)
        throw argument_error("formal group law needs e defining polynomials");
    for (auto &c : comps_)
        if (c.arity() != 2 * e_)
            throw argument_error("formal group law components must live in 2e variables");
}

bool fgl_is_builtin_name(const std::string &name) {
    return name == "additive" || name == "multiplicative" || name == "witt2" ||
           name == "ga_semidirect_gm";
}

FormalGroupLaw fgl_builtin(const std::string &name, const FqFieldPtr &field, int e) {
    Fq one = field->one();
    auto var = [&](int arity, int v) { return PolyFq::variable(arity, v, one); };
    if (name == "additive") {
        if (e < 1)
            throw argument_error("additive law needs e >= 1");
        std::vector<PolyFq> comps;
        for (int t = 0; t < e; ++t)
            comps.push_back(var(2 * e, t) + var(2 * e, e + t));
        return FormalGroupLaw("additive", e, field, std::move(comps));
    }
    if (name == "multiplicative") {
        PolyFq A = var(2, 0), B = var(2, 1);
        return FormalGroupLaw("multiplicative", 1, field, {A + B + A * B});
    }
    if (name == "witt2") {
        // cocycle ((A+B)^p - A^p - B^p)/p with integer binomials, reduced mod p
        int64_t p = field->p();
        PolyFq A1 = var(4, 0), B1 = var(4, 2);
        PolyFq cocycle(4, field->zero());
        for (int64_t i = 1; i < p; ++i) {
            // binom(p, i) / p computed exactly over the integers
            int64_t binom = 1;
            for (int64_t t = 0; t < i; ++t)
                binom = binom * (p - t) / (t + 1);
            Fq c = field->from_int(binom / p);
            cocycle = cocycle + (A1.pow(uint32_t(i)) * B1.pow(uint32_t(p - i))).scaled(c);
        }
        PolyFq F1 = A1 + B1;
        PolyFq F2 = var(4, 1) + var(4, 3) + cocycle;
        return FormalGroupLaw("witt2", 2, field, {F1, F2});
    }
    if (name == "ga_semidirect_gm") {
        PolyFq A1 = var(4, 0), A2 = var(4, 1), B1 = var(4, 2), B2 = var(4, 3);
        PolyFq F1 = A1 + B1 + A2 * B1;
        PolyFq F2 = A2 + B2 + A2 * B2;
        return FormalGroupLaw("ga_semidirect_gm", 2, field, {F1, F2});
    }
    throw argument_error("unknown group law: " + name);
}

namespace {

std::string block_var_name(int e, int v) {
    if (v < e)
        return "X" + std::to_string(v + 1);
    if (v < 2 * e)
        return "Y" + std::to_string(v - e + 1);
    return "Z" + std::to_string(v - 2 * e + 1);
}

// the truncated associativity check shared by both law representations
AxiomVerdict check_assoc(const std::vector<TruncFq> &comps, int e, int64_t p, int m,
                         const FqFieldPtr &field) {
    Fq one = field->one();
    auto vr = [&](int v) { return TruncFq::variable(p, m, 3 * e, v, one); };
    auto eval_law = [&](const std::vector<TruncFq> &first,
                        const std::vector<TruncFq> &second) {
        std::vector<TruncFq> args;
        args.reserve(2 * e);
        for (auto &f : first)
            args.push_back(f);
        for (auto &s : second)
            args.push_back(s);
        std::vector<TruncFq> out;
        for (auto &c : comps)
            out.push_back(c.substitute(args));
        return out;
    };
    std::vector<TruncFq> X, Y, Z;
    for (int t = 0; t < e; ++t) {
        X.push_back(vr(t));
        Y.push_back(vr(e + t));
        Z.push_back(vr(2 * e + t));
    }
    auto XY = eval_law(X, Y);
    auto YZ = eval_law(Y, Z);
    auto left = eval_law(XY, Z);
    auto right = eval_law(X, YZ);
    for (int t = 0; t < e; ++t) {
        if (left[t] != right[t]) {
            auto namer = [&](int v) { return block_var_name(e, v); };
            return {false, "associativity fails in component " + std::to_string(t + 1) +
                               " at monomial " + ts_first_difference(left[t], right[t], namer)};
        }
    }
    return {};
}

} // namespace

AxiomVerdict fgl_check_axioms(const FormalGroupLaw &F, int m) {
    int e = F.dim();
    Fq one = F.field()->one();
    Fq zero = F.field()->zero();
    auto g = fgl_truncate(F, m);
    auto assoc = check_assoc(g.components(), e, F.p(), m, F.field());
    if (!assoc.pass)
        return assoc;
    // unit axioms hold exactly on the polynomials
    std::vector<PolyFq> xs, x_zero, zero_y;
    for (int t = 0; t < e; ++t)
        xs.push_back(PolyFq::variable(e, t, one));
    for (int t = 0; t < e; ++t) {
        x_zero.push_back(xs[t]);
        zero_y.push_back(PolyFq::zero(e, zero));
    }
    for (int t = 0; t < e; ++t) {
        x_zero.push_back(PolyFq::zero(e, zero));
        zero_y.push_back(xs[t]);
    }
    for (int t = 0; t < e; ++t) {
        if (F.components()[t].substitute(x_zero) != xs[t])
            return {false, "unit axiom F(X,0) = X fails in component " + std::to_string(t + 1)};
        if (F.components()[t].substitute(zero_y) != xs[t])
            return {false, "unit axiom F(0,Y) = Y fails in component " + std::to_string(t + 1)};
    }
    return {};
}

FormalGroupLaw fgl_product(const FormalGroupLaw &F1, const FormalGroupLaw &F2) {
    if (!F1.field()->same(*F2.field()))
        throw argument_error("fgl_product: mismatched base fields");
    int e1 = F1.dim(), e2 = F2.dim(), e = e1 + e2;
    std::vector<PolyFq> comps;
    std::vector<int> map1(2 * e1), map2(2 * e2);
    for (int v = 0; v < e1; ++v) {
        map1[v] = v;
        map1[e1 + v] = e + v;
    }
    for (int v = 0; v < e2; ++v) {
        map2[v] = e1 + v;
        map2[e2 + v] = e + e1 + v;
    }
    for (auto &c : F1.components())
        comps.push_back(c.remap_variables(2 * e, map1));
    for (auto &c : F2.components())
        comps.push_back(c.remap_variables(2 * e, map2));
    return FormalGroupLaw(F1.name() + "*" + F2.name(), e, F1.field(), std::move(comps));
}

FormalGroupLaw frobenius_twist(const FormalGroupLaw &F, int i) {
    std::vector<PolyFq> comps;
    for (auto &c : F.components())
        comps.push_back(c.map_coefficients<Fq>([i](const Fq &x) { return x.frobenius(i); },
                                               F.field()->zero()));
    return FormalGroupLaw(F.name() + "^(fr" + std::to_string(i) + ")", F.dim(), F.field(),
                          std::move(comps));
}

TruncatedGroupLaw::TruncatedGroupLaw(std::string name, int e, int m, FqFieldPtr field,
                                     std::vector<TruncFq> comps, bool validate)
    : name_(std::move(name)), e_(e), m_(m), field_(std::move(field)), comps_(std::move(comps)),
      indices_(uint32_t(ipow(uint64_t(field_->p()), uint32_t(m))), size_t(e)) {
    if (e_ < 1 || m_ < 1 || int(comps_.size()) != e_)
        throw argument_error("truncated group law shape mismatch");
    for (auto &c : comps_)
        if (c.arity() != 2 * e_ || c.level() != m_)
            throw argument_error("truncated group law components must be level-m, 2e-variable");
    if (validate) {
        auto v = check_axioms();
        if (!v.pass)
            throw argument_error("truncated group law axioms fail: " + v.detail);
    }
}

AxiomVerdict TruncatedGroupLaw::check_axioms() const {
    Fq one = field_->one();
    Fq zero = field_->zero();
    int64_t pp = p();
    // unit axioms modulo the truncation ideal
    std::vector<TruncFq> x_zero, zero_y, xs;
    for (int t = 0; t < e_; ++t)
        xs.push_back(TruncFq::variable(pp, m_, e_, t, one));
    for (int t = 0; t < e_; ++t) {
        x_zero.push_back(xs[t]);
        zero_y.push_back(TruncFq::zero(pp, m_, e_, zero));
    }
    for (int t = 0; t < e_; ++t) {
        x_zero.push_back(TruncFq::zero(pp, m_, e_, zero));
        zero_y.push_back(xs[t]);
    }
    for (int t = 0; t < e_; ++t) {
        if (comps_[t].substitute(x_zero) != xs[t])
            return {false, "unit axiom F(X,0) = X fails in component " + std::to_string(t + 1)};
        if (comps_[t].substitute(zero_y) != xs[t])
            return {false, "unit axiom F(0,Y) = Y fails in component " + std::to_string(t + 1)};
    }
    return check_assoc(comps_, e_, pp, m_, field_);
}

TruncatedGroupLaw fgl_truncate(const FormalGroupLaw &F, int m) {
    int64_t p = F.p();
    uint32_t bound = uint32_t(ipow(uint64_t(p), uint32_t(m)));
    std::vector<TruncFq> comps;
    for (auto &c : F.components()) {
        TruncFq s(p, m, 2 * F.dim(), F.field()->zero());
        for (auto &t : c.terms()) {
            bool keep = true;
            for (uint32_t x : t.first)
                if (x >= bound)
                    keep = false;
            if (keep)
                s.mutable_terms().push_back({t.first, t.second});
        }
        s.restore_invariants();
        comps.push_back(std::move(s));
    }
    // the truncation of a valid law is valid; skip re-validation
    return TruncatedGroupLaw(F.name() + "[" + std::to_string(m) + "]", F.dim(), m, F.field(),
                             std::move(comps), /*validate=*/false);
}

StructureConstants::StructureConstants(int64_t p, int m, int e, FqFieldPtr field)
    : p_(p), m_(m), e_(e), field_(std::move(field)),
      indices_(uint32_t(ipow(uint64_t(p), uint32_t(m))), size_t(e)) {}

Fq StructureConstants::coeff(const ExpVec &i, const ExpVec &j, const ExpVec &k) const {
    for (auto &kv : row(i, j))
        if (kv.first == k)
            return kv.second;
    return field_->zero();
}

const std::vector<std::pair<ExpVec, Fq>> &StructureConstants::row(const ExpVec &i,
                                                                  const ExpVec &j) const {
    auto it = rows_.find(key(i, j));
    return it == rows_.end() ? empty_ : it->second;
}

void StructureConstants::insert(const ExpVec &i, const ExpVec &j, const ExpVec &k, const Fq &c) {
    rows_[key(i, j)].push_back({k, c});
}

void StructureConstants::sort_rows() {
    for (auto &kv : rows_)
        std::sort(kv.second.begin(), kv.second.end(),
                  [](const auto &a, const auto &b) { return ev_less(a.first, b.first); });
}

StructureConstants structure_constants(const TruncatedGroupLaw &g) {
    int e = g.dim();
    int64_t p = g.p();
    int m = g.level();
    StructureConstants sc(p, m, e, g.field());
    const IndexSet &idx = g.indices();
    // P[rank(k)] = F(v,w)^k, filled along the graded-lex lattice walk
    std::vector<TruncFq> powers(idx.size(), TruncFq::zero(p, m, 2 * e, g.field()->zero()));
    for (size_t r = 0; r < idx.size(); ++r) {
        const ExpVec &k = idx.at(r);
        if (ev_total(k) == 0) {
            powers[r] = TruncFq::one(p, m, 2 * e, g.field()->zero());
        } else {
            int t = 0;
            while (k[t] == 0)
                ++t;
            ExpVec prev = k;
            prev[t] -= 1;
            powers[r] = powers[idx.rank(prev)] * g.components()[t];
        }
        for (auto &term : powers[r].terms()) {
            ExpVec i(term.first.begin(), term.first.begin() + e);
            ExpVec j(term.first.begin() + e, term.first.end());
            sc.insert(i, j, k, term.second);
        }
    }
    sc.sort_rows();
    return sc;
}

} // namespace hsfg
