#ifndef HSFG_PROLONGATION_HPP
#define HSFG_PROLONGATION_HPP

#include <optional>

#include "hsfg/hs_derivation.hpp"

namespace hsfg {

using Pt = std::vector<RatFunc>; // point with coordinates in K

/// Jet polynomial ring K{X_1..X_n} = K[X_t^(i) | i in [p^m]^e] over an
/// HS-field (K, D). Jet variable X_t^(i) lives at polynomial-variable /
/// point-slot index rank(i)*n + t, so points of the prolongation are read
/// as blocks b_i in K^n with the i = 0 block first.
class JetRing {
  public:
    JetRing(HSDerivation base_derivation, int n);

    const HSDerivation &derivation() const { return base_; }
    int base_vars() const { return n_; }
    const IndexSet &indices() const { return idx_; }
    int jet_count() const { return int(idx_.size()) * n_; }
    int slot(const ExpVec &i, int t) const { return int(idx_.rank(i)) * n_ + t; }
    std::string var_name(int slot) const;

    /// The induced derivation applied to f in K[X_1..X_n]: coefficients go
    /// through D, the base variable X_t becomes sum_i X_t^(i) v^i.
    TruncSeries<JetPoly> apply(const JetPoly &f) const;

  private:
    HSDerivation base_;
    int n_;
    IndexSet idx_;
};

struct AffineVariety {
    int ambient = 0;           // number of coordinates
    std::vector<JetPoly> gens; // over K; empty list = the whole affine space
    std::string name;

    void validate() const {
        for (auto &g : gens)
            if (g.is_zero() || g.arity() != ambient)
                throw argument_error("variety generators must be nonzero, in the ambient arity");
    }
};

/// nabla(V): the variety in jet coordinates cut out by all D_j applied to
/// the defining equations.
AffineVariety nabla_ideal(const AffineVariety &V, const JetRing &jet);

/// The point map D_V: a -> (D_i(a_t))_{i,t}.
Pt nabla_point(const HSDerivation &D, const Pt &a);

/// The comultiplication re-indexing c_n on points of arity n*p^{me}:
/// output slot (j, (i, t)) carries sum_k c_{i,j}^k b_{k,t}.
Pt c_n_map(const StructureConstants &sc, const Pt &b, int n);

enum class CompatMode { Pointwise, Symbolic };

struct CompatOptions {
    CompatMode mode = CompatMode::Pointwise;
    FqFieldPtr enumeration_field;      // pointwise: the F_q to enumerate
    uint64_t point_budget = 1 << 20;   // pointwise cap on candidate points
    uint64_t pair_budget = 100000;     // symbolic Groebner budget
};

struct CompatVerdict {
    bool compatible = true;
    std::string detail;
    uint64_t points_checked = 0;
};

/// Checks c_n(W) subseteq nabla(W) for W inside nabla(V)'s ambient space.
/// Pointwise mode enumerates W(F_q); symbolic mode substitutes the linear
/// forms of c_n into the generators of nabla(W) and tests membership in the
/// ideal of W via a Groebner basis over K.
CompatVerdict cv_compatibility(const TruncatedGroupLaw &g, const JetRing &jet,
                               const AffineVariety &V, const AffineVariety &W,
                               const CompatOptions &opt);

struct PointDerivationResult {
    HSDerivation derivation;
    AxiomVerdict homomorphism;
    AxiomVerdict iterativity;
};

/// Reconstructs the derivation with D(b_0) = b from a point b of nabla(V)
/// whose first block lists the distinguished generators of K. Iterativity
/// is reported against the supplied law.
PointDerivationResult derivation_from_point(const TruncatedGroupLaw &g, const JetRing &jet,
                                            const AffineVariety &V, const Pt &b);

struct SearchSpace {
    enum class Kind { FieldPoints, DegreeBound } kind = Kind::FieldPoints;
    int degree = 0;              // DegreeBound: total degree cap on each coordinate
    uint64_t budget = 1 << 22;   // candidates examined before giving up
};

struct AxiomSearchReport {
    bool found = false;
    Pt witness;                  // a in V(K) with D_V(a) in W \ Z
    bool exhausted = false;      // the whole space was scanned without a witness
    uint64_t examined = 0;
    bool irreducibility_asserted = false;     // caller-supplied, recorded only
    bool generic_projection_asserted = false; // caller-supplied, recorded only
};

/// Scans a finite search space for a witness of the geometric axiom
/// instance: a in V(K) with D_V(a) in W(K) \ Z(K). Z may be absent (no
/// exclusion). The first witness in the deterministic enumeration order is
/// returned.
AxiomSearchReport axiom_instance_check(const JetRing &jet, const AffineVariety &V,
                                       const AffineVariety &W,
                                       const std::optional<AffineVariety> &Z,
                                       const SearchSpace &space, bool irreducibility_asserted,
                                       bool generic_projection_asserted);

} // namespace hsfg

#endif
