#ifndef HSFG_TEXTIO_HPP
#define HSFG_TEXTIO_HPP

#include <map>

#include "hsfg/hs_derivation.hpp"
#include "hsfg/prolongation.hpp"

namespace hsfg {

/// Parses the polynomial grammar: terms `c*x1^a1*...*xn^an` joined by `+`
/// (with `-`, `/` and parentheses also accepted), coefficients as integers
/// mod p or `g^k` for the generator of F_{p^n}. Whitespace-insensitive.
/// Variables are resolved against `var_names`.
RatFunc parse_rational(const std::string &text, const FqFieldPtr &field,
                       const std::vector<std::string> &var_names);

PolyFq parse_poly(const std::string &text, const FqFieldPtr &field,
                  const std::vector<std::string> &var_names);

/// Series in the reserved variables v1..ve (alias v when e = 1) over the
/// generator names; coefficients may be rational in the generators.
TruncSeries<RatFunc> parse_series(const std::string &text, const FqFieldPtr &field,
                                  const std::vector<std::string> &gen_names, int64_t p, int m,
                                  int e);

std::string poly_to_string(const PolyFq &f, const std::vector<std::string> &var_names,
                           bool compact = false);
std::string ratfunc_to_string(const RatFunc &x, const std::vector<std::string> &var_names,
                              bool compact = false);
std::string series_to_string(const TruncSeries<RatFunc> &s,
                             const std::vector<std::string> &gen_names, bool compact = false);

/// Derivation file:
///   p=2 n=1 m=1 e=1
///   gens t
///   gen t -> t + v1
struct DerivationFile {
    HSDerivation derivation;
};
DerivationFile parse_derivation_file(const std::string &text);
std::string derivation_to_file(const HSDerivation &D);

/// Variety file (polynomials over the generators of the derivation context):
///   vars X1_0 X1_1
///   gen X1_1 - 1
AffineVariety parse_variety_file(const std::string &text, const FqFieldPtr &field,
                                 const std::vector<std::string> &gen_names);
std::string variety_to_file(const AffineVariety &V, const std::vector<std::string> &jet_names,
                            const std::vector<std::string> &gen_names);

/// One structured record per line: `key=value` pairs separated by single
/// spaces; values never contain spaces (polynomials print compactly).
using Record = std::vector<std::pair<std::string, std::string>>;
std::string record_to_line(const Record &r);
Record parse_record_line(const std::string &line);

} // namespace hsfg

#endif
