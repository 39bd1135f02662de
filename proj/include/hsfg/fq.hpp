#ifndef HSFG_FQ_HPP
#define HSFG_FQ_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsfg {

struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct unit_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FqField;
using FqFieldPtr = std::shared_ptr<const FqField>;

/// An element of F_{p^n}. The coordinates over F_p (little-endian in the
/// generator g) are packed, digit by digit, into a single integer, so field
/// arithmetic never allocates.
class Fq {
  public:
    Fq() = default;
    Fq(FqFieldPtr field, int64_t value); // value mod p, prime-subfield
    static Fq from_packed(FqFieldPtr field, int64_t packed);
    static Fq from_rep(FqFieldPtr field, const std::vector<int64_t> &rep);

    const FqFieldPtr &field() const { return field_; }
    int64_t p() const;
    bool is_zero() const { return packed_ == 0; }
    bool is_one() const { return packed_ == 1; }
    int64_t packed() const { return packed_; }
    std::vector<int64_t> rep() const; // coordinates in 1, g, g^2, ...
    // the F_p value when the element lies in the prime subfield
    std::optional<int64_t> prime_value() const;

    Fq operator+(const Fq &o) const;
    Fq operator-(const Fq &o) const;
    Fq operator-() const;
    Fq operator*(const Fq &o) const;
    Fq operator/(const Fq &o) const;
    Fq &operator+=(const Fq &o) { return *this = *this + o; }
    Fq &operator-=(const Fq &o) { return *this = *this - o; }
    Fq &operator*=(const Fq &o) { return *this = *this * o; }
    bool operator==(const Fq &o) const;
    bool operator!=(const Fq &o) const { return !(*this == o); }

    Fq inverse() const; // throws unit_error on zero
    Fq pow(uint64_t k) const;
    // unique y with y^p = x (finite fields are perfect): y = x^{p^{n-1}}
    Fq pth_root() const;
    Fq frobenius(int i = 1) const; // x -> x^{p^i}

    std::string to_string() const;

  private:
    FqFieldPtr field_;
    int64_t packed_ = 0;
    friend class FqField;
};

/// F_{p^n} with a fixed monic irreducible modulus for n > 1. Small fields
/// only (q <= 2^20); extension fields precompute log/exp tables, so nonzero
/// elements print as g^k and multiplication is table-based.
class FqField : public std::enable_shared_from_this<FqField> {
  public:
    // prime field F_p
    static FqFieldPtr prime(int64_t p);
    // F_{p^n} with the built-in modulus table
    static FqFieldPtr extension(int64_t p, int n);
    // F_{p^n} with a caller-supplied monic irreducible modulus
    // (little-endian coefficients, length n+1)
    static FqFieldPtr extension(int64_t p, int n, std::vector<int64_t> modulus);

    int64_t p() const { return p_; }
    int n() const { return n_; }
    int64_t q() const { return q_; }
    const std::vector<int64_t> &modulus() const { return modulus_; }

    Fq zero() const;
    Fq one() const;
    Fq from_int(int64_t v) const;
    Fq generator() const; // g, primitive for the built-in moduli
    Fq generator_pow(int64_t k) const;
    std::vector<Fq> all_elements() const; // deterministic order

    bool same(const FqField &o) const;

    int64_t add_packed(int64_t a, int64_t b) const;
    int64_t neg_packed(int64_t a) const;
    int64_t mul_packed(int64_t a, int64_t b) const;
    int64_t inv_packed(int64_t a) const;
    int64_t frobenius_packed(int64_t a, int i) const;

  private:
    FqField(int64_t p, int n, std::vector<int64_t> modulus);
    void build_tables();

    int64_t p_ = 2;
    int n_ = 1;
    int64_t q_ = 2;
    std::vector<int64_t> modulus_;     // empty for prime fields
    std::vector<int32_t> log_table_;   // packed -> discrete log (n > 1)
    std::vector<int64_t> exp_table_;   // discrete log -> packed (n > 1)
    friend class Fq;
};

int64_t mod_inverse(int64_t a, int64_t p);

} // namespace hsfg

#endif
