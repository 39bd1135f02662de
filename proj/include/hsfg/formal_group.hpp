#ifndef HSFG_FORMAL_GROUP_HPP
#define HSFG_FORMAL_GROUP_HPP

#include <unordered_map>

#include "hsfg/trunc_series.hpp"

namespace hsfg {

/// A polynomial e-dimensional formal group law over F_q: e polynomials in
/// 2e variables (first argument block = variables 0..e-1, second block =
/// e..2e-1) with F(X,0) = X, F(0,Y) = Y and associativity.
class FormalGroupLaw {
  public:
    FormalGroupLaw(std::string name, int e, FqFieldPtr field, std::vector<PolyFq> comps);

    const std::string &name() const { return name_; }
    int dim() const { return e_; }
    const FqFieldPtr &field() const { return field_; }
    int64_t p() const { return field_->p(); }
    const std::vector<PolyFq> &components() const { return comps_; }

  private:
    std::string name_;
    int e_;
    FqFieldPtr field_;
    std::vector<PolyFq> comps_;
};

/// Built-in laws: additive(e), multiplicative, witt2, ga_semidirect_gm.
/// witt2 carries the integral cocycle ((X+Y)^p - X^p - Y^p)/p reduced mod p
/// in its second coordinate, for every p.
FormalGroupLaw fgl_builtin(const std::string &name, const FqFieldPtr &field, int e = 1);
bool fgl_is_builtin_name(const std::string &name);

struct AxiomVerdict {
    bool pass = true;
    std::string detail; // names the axiom and first failing monomial
};

AxiomVerdict fgl_check_axioms(const FormalGroupLaw &F, int m);

FormalGroupLaw fgl_product(const FormalGroupLaw &F1, const FormalGroupLaw &F2);
FormalGroupLaw frobenius_twist(const FormalGroupLaw &F, int i);

/// A group law reduced to level m: e truncated series in the 2e-variable
/// ring. Any level-m law that passes the truncated axioms is accepted; it
/// does not need to come from a global formal group law.
class TruncatedGroupLaw {
  public:
    TruncatedGroupLaw(std::string name, int e, int m, FqFieldPtr field,
                      std::vector<TruncFq> comps, bool validate = true);

    const std::string &name() const { return name_; }
    int dim() const { return e_; }
    int level() const { return m_; }
    int64_t p() const { return field_->p(); }
    const FqFieldPtr &field() const { return field_; }
    const std::vector<TruncFq> &components() const { return comps_; }
    const IndexSet &indices() const { return indices_; }

    AxiomVerdict check_axioms() const;

  private:
    std::string name_;
    int e_;
    int m_;
    FqFieldPtr field_;
    std::vector<TruncFq> comps_; // arity 2e, level m
    IndexSet indices_;           // [p^m]^e
};

TruncatedGroupLaw fgl_truncate(const FormalGroupLaw &F, int m);

/// The comultiplication matrix (c_{i,j}^k): c_{i,j}^k is the coefficient of
/// (first block)^i (second block)^j in F(first, second)^k, all computed in
/// the 2e-variable truncated ring. These satisfy D_j . D_i = sum_k c_{i,j}^k D_k
/// for every law-iterative derivation.
class StructureConstants {
  public:
    StructureConstants(int64_t p, int m, int e, FqFieldPtr field);

    int64_t p() const { return p_; }
    int level() const { return m_; }
    int dim() const { return e_; }
    const FqFieldPtr &field() const { return field_; }
    const IndexSet &indices() const { return indices_; }

    Fq coeff(const ExpVec &i, const ExpVec &j, const ExpVec &k) const;
    /// all (k, c) with c_{i,j}^k != 0, sorted by k in graded-lex order
    const std::vector<std::pair<ExpVec, Fq>> &row(const ExpVec &i, const ExpVec &j) const;

    void insert(const ExpVec &i, const ExpVec &j, const ExpVec &k, const Fq &c);
    void sort_rows();

  private:
    static uint64_t key(const ExpVec &i, const ExpVec &j) {
        return (ev_pack(i) << 32) | ev_pack(j);
    }
    int64_t p_;
    int m_;
    int e_;
    FqFieldPtr field_;
    IndexSet indices_;
    std::unordered_map<uint64_t, std::vector<std::pair<ExpVec, Fq>>> rows_;
    std::vector<std::pair<ExpVec, Fq>> empty_;
};

StructureConstants structure_constants(const TruncatedGroupLaw &g);

/// The ring homomorphism K[v_m] -> K[v_m, w_m] sending v^k to F(v, w)^k,
/// extended linearly over the coefficients. Output arity is 2e with the
/// original variables in the first block and the new ones in the second.
template <class C>
TruncSeries<C> comultiplication_map(const TruncatedGroupLaw &g, const TruncSeries<C> &a,
                                    const std::function<C(const Fq &)> &embed) {
    int e = g.dim();
    if (a.arity() != e || a.level() != g.level() || a.p() != g.p())
        throw argument_error("comultiplication_map: context mismatch");
    int64_t p = g.p();
    int m = g.level();
    const C &proto = a.proto();
    TruncSeries<C> out = TruncSeries<C>::zero(p, m, 2 * e, proto);
    // group the law components' powers per needed exponent, term by term
    std::vector<TruncSeries<C>> comps;
    comps.reserve(e);
    for (auto &c : g.components())
        comps.push_back(c.template map_coefficients<C>(embed, proto));
    for (auto &t : a.terms()) {
        TruncSeries<C> term = TruncSeries<C>::constant(p, m, 2 * e, t.second);
        for (int s = 0; s < e; ++s)
            if (t.first[s])
                term = term * comps[s].pow(t.first[s]);
        out = out + term;
    }
    return out;
}

/// First graded-lex monomial where two truncated series differ, as text.
template <class C>
std::string ts_first_difference(const TruncSeries<C> &a, const TruncSeries<C> &b,
                                const std::function<std::string(int)> &var_name) {
    TruncSeries<C> d = a - b;
    if (d.is_zero())
        return "";
    const auto &t = d.terms().front();
    std::string mono;
    for (int v = 0; v < d.arity(); ++v) {
        if (t.first[v] == 0)
            continue;
        if (!mono.empty())
            mono += "*";
        mono += var_name(v);
        if (t.first[v] > 1)
            mono += "^" + std::to_string(t.first[v]);
    }
    return mono.empty() ? "1" : mono;
}

} // namespace hsfg

#endif
