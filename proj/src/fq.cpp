#include "hsfg/fq.hpp"

#include <algorithm>
#include <map>

namespace hsfg {

namespace {

int64_t pos_mod(int64_t a, int64_t p) {
    int64_t r = a % p;
    return r < 0 ? r + p : r;
}

bool is_prime(int64_t p) {
    if (p < 2)
        return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

// poly arithmetic over F_p, little-endian coefficient vectors
using PV = std::vector<int64_t>;

void pv_trim(PV &a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

PV pv_mul(const PV &a, const PV &b, int64_t p) {
    if (a.empty() || b.empty())
        return {};
    PV c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = pos_mod(c[i + j] + a[i] * b[j], p);
    pv_trim(c);
    return c;
}

// remainder of a modulo monic m
PV pv_rem(PV a, const PV &m, int64_t p) {
    pv_trim(a);
    while (a.size() >= m.size()) {
        int64_t lead = a.back();
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i)
            a[shift + i] = pos_mod(a[shift + i] - lead * m[i], p);
        pv_trim(a);
    }
    return a;
}

int64_t pv_pack(const PV &a, int64_t p) {
    int64_t packed = 0;
    for (size_t i = a.size(); i-- > 0;)
        packed = packed * p + a[i];
    return packed;
}

PV pv_unpack(int64_t packed, int64_t p, int n) {
    PV a;
    a.reserve(size_t(n));
    while (packed) {
        a.push_back(packed % p);
        packed /= p;
    }
    return a;
}

// built-in moduli: x primitive (Conway polynomials for the small cases we ship)
const std::map<std::pair<int64_t, int>, PV> &builtin_moduli() {
    static const std::map<std::pair<int64_t, int>, PV> table = {
        {{2, 2}, {1, 1, 1}},       // x^2+x+1
        {{2, 3}, {1, 1, 0, 1}},    // x^3+x+1
        {{2, 4}, {1, 1, 0, 0, 1}}, // x^4+x+1
        {{3, 2}, {2, 2, 1}},       // x^2+2x+2
        {{3, 3}, {1, 2, 0, 1}},    // x^3+2x+1
        {{5, 2}, {2, 4, 1}},       // x^2+4x+2
    };
    return table;
}

bool pv_is_irreducible(const PV &m, int64_t p) {
    int n = int(m.size()) - 1;
    // trial division by all monic polynomials of degree <= n/2; fields are tiny
    for (int d = 1; 2 * d <= n; ++d) {
        int64_t count = 1;
        for (int i = 0; i < d; ++i)
            count *= p;
        for (int64_t code = 0; code < count; ++code) {
            PV div(size_t(d) + 1, 0);
            div[size_t(d)] = 1;
            int64_t c = code;
            for (int i = 0; i < d; ++i) {
                div[size_t(i)] = c % p;
                c /= p;
            }
            if (pv_rem(m, div, p).empty())
                return false;
        }
    }
    return true;
}

} // namespace

int64_t mod_inverse(int64_t a, int64_t p) {
    a = pos_mod(a, p);
    if (a == 0)
        throw unit_error("inverse of zero in F_p");
    int64_t t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        int64_t q = r / newr;
        int64_t tt = t - q * newt;
        t = newt;
        newt = tt;
        int64_t rr = r - q * newr;
        r = newr;
        newr = rr;
    }
    return pos_mod(t, p);
}

FqField::FqField(int64_t p, int n, std::vector<int64_t> modulus)
    : p_(p), n_(n), modulus_(std::move(modulus)) {
    q_ = 1;
    for (int i = 0; i < n; ++i)
        q_ *= p;
}

FqFieldPtr FqField::prime(int64_t p) {
    if (!is_prime(p))
        throw argument_error("characteristic must be prime");
    return FqFieldPtr(new FqField(p, 1, {}));
}

FqFieldPtr FqField::extension(int64_t p, int n) {
    if (n == 1)
        return prime(p);
    auto it = builtin_moduli().find({p, n});
    if (it == builtin_moduli().end())
        throw argument_error("no built-in modulus for F_" + std::to_string(p) + "^" +
                             std::to_string(n) + "; supply one explicitly");
    return extension(p, n, it->second);
}

FqFieldPtr FqField::extension(int64_t p, int n, std::vector<int64_t> modulus) {
    if (!is_prime(p))
        throw argument_error("characteristic must be prime");
    if (n < 2 || int(modulus.size()) != n + 1)
        throw argument_error("modulus must have degree n >= 2");
    for (auto &c : modulus)
        c = pos_mod(c, p);
    if (modulus.back() != 1)
        throw argument_error("modulus must be monic");
    if (!pv_is_irreducible(modulus, p))
        throw argument_error("modulus is reducible");
    auto f = std::shared_ptr<FqField>(new FqField(p, n, std::move(modulus)));
    if (f->q() > (1 << 20))
        throw argument_error("field too large for table-based representation");
    f->build_tables();
    return f;
}

void FqField::build_tables() {
    // exp_table_[k] = packed g^k; requires g = x primitive for the modulus
    exp_table_.assign(size_t(q_ - 1), 0);
    log_table_.assign(size_t(q_), -1);
    PV g = {0, 1};
    PV acc = {1};
    for (int64_t k = 0; k < q_ - 1; ++k) {
        int64_t packed = pv_pack(acc, p_);
        if (log_table_[size_t(packed)] != -1)
            throw argument_error("field generator is not primitive for this modulus");
        exp_table_[size_t(k)] = packed;
        log_table_[size_t(packed)] = int32_t(k);
        acc = pv_rem(pv_mul(acc, g, p_), modulus_, p_);
    }
    if (pv_pack(acc, p_) != 1)
        throw argument_error("field generator is not primitive for this modulus");
}

Fq FqField::zero() const { return Fq(shared_from_this(), 0); }

Fq FqField::one() const { return from_int(1); }

Fq FqField::from_int(int64_t v) const { return Fq(shared_from_this(), v); }

Fq FqField::generator() const {
    if (n_ == 1)
        throw argument_error("prime field has no extension generator");
    return Fq::from_packed(shared_from_this(), p_);
}

Fq FqField::generator_pow(int64_t k) const {
    k = pos_mod(k, q_ - 1);
    return Fq::from_packed(shared_from_this(), exp_table_[size_t(k)]);
}

std::vector<Fq> FqField::all_elements() const {
    std::vector<Fq> out;
    out.reserve(size_t(q_));
    for (int64_t code = 0; code < q_; ++code)
        out.push_back(Fq::from_packed(shared_from_this(), code));
    return out;
}

bool FqField::same(const FqField &o) const {
    return p_ == o.p_ && n_ == o.n_ && modulus_ == o.modulus_;
}

int64_t FqField::add_packed(int64_t a, int64_t b) const {
    if (n_ == 1)
        return (a + b) % p_;
    // digitwise addition base p
    int64_t r = 0, mult = 1;
    while (a || b) {
        r += ((a % p_ + b % p_) % p_) * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return r;
}

int64_t FqField::neg_packed(int64_t a) const {
    if (n_ == 1)
        return (p_ - a) % p_;
    int64_t r = 0, mult = 1;
    while (a) {
        r += ((p_ - a % p_) % p_) * mult;
        a /= p_;
        mult *= p_;
    }
    return r;
}

int64_t FqField::mul_packed(int64_t a, int64_t b) const {
    if (a == 0 || b == 0)
        return 0;
    if (n_ == 1)
        return (a * b) % p_;
    int64_t k = int64_t(log_table_[size_t(a)]) + int64_t(log_table_[size_t(b)]);
    if (k >= q_ - 1)
        k -= q_ - 1;
    return exp_table_[size_t(k)];
}

int64_t FqField::inv_packed(int64_t a) const {
    if (a == 0)
        throw unit_error("inverse of zero");
    if (n_ == 1)
        return mod_inverse(a, p_);
    int64_t k = (q_ - 1 - int64_t(log_table_[size_t(a)])) % (q_ - 1);
    return exp_table_[size_t(k)];
}

int64_t FqField::frobenius_packed(int64_t a, int i) const {
    if (n_ == 1 || a == 0)
        return a;
    int64_t steps = 1;
    for (int s = 0; s < (i % n_ + n_) % n_; ++s)
        steps = steps * p_ % (q_ - 1);
    int64_t k = int64_t(log_table_[size_t(a)]) * steps % (q_ - 1);
    return exp_table_[size_t(k)];
}

Fq::Fq(FqFieldPtr field, int64_t value) : field_(std::move(field)) {
    packed_ = pos_mod(value, field_->p());
}

Fq Fq::from_packed(FqFieldPtr field, int64_t packed) {
    Fq x;
    x.field_ = std::move(field);
    x.packed_ = packed;
    return x;
}

Fq Fq::from_rep(FqFieldPtr field, const std::vector<int64_t> &rep) {
    PV r = rep;
    for (auto &c : r)
        c = pos_mod(c, field->p());
    if (int(r.size()) > field->n())
        r = pv_rem(r, field->modulus(), field->p());
    pv_trim(r);
    return from_packed(field, pv_pack(r, field->p()));
}

std::vector<int64_t> Fq::rep() const { return pv_unpack(packed_, field_->p(), field_->n()); }

int64_t Fq::p() const { return field_->p(); }

std::optional<int64_t> Fq::prime_value() const {
    if (packed_ < field_->p())
        return packed_;
    return std::nullopt;
}

static inline void check_same_field(const Fq &a, const Fq &b) {
    if (!a.field() || !b.field())
        throw argument_error("arithmetic on uninitialized field element");
    if (a.field().get() != b.field().get() && !a.field()->same(*b.field()))
        throw argument_error("mixed field arithmetic");
}

Fq Fq::operator+(const Fq &o) const {
    check_same_field(*this, o);
    return from_packed(field_, field_->add_packed(packed_, o.packed_));
}

Fq Fq::operator-() const { return from_packed(field_, field_->neg_packed(packed_)); }

Fq Fq::operator-(const Fq &o) const {
    check_same_field(*this, o);
    return from_packed(field_, field_->add_packed(packed_, field_->neg_packed(o.packed_)));
}

Fq Fq::operator*(const Fq &o) const {
    check_same_field(*this, o);
    return from_packed(field_, field_->mul_packed(packed_, o.packed_));
}

Fq Fq::operator/(const Fq &o) const {
    check_same_field(*this, o);
    return from_packed(field_, field_->mul_packed(packed_, field_->inv_packed(o.packed_)));
}

bool Fq::operator==(const Fq &o) const {
    check_same_field(*this, o);
    return packed_ == o.packed_;
}

Fq Fq::inverse() const { return from_packed(field_, field_->inv_packed(packed_)); }

Fq Fq::pow(uint64_t k) const {
    Fq base = *this, acc = field_->one();
    while (k) {
        if (k & 1)
            acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

Fq Fq::frobenius(int i) const { return from_packed(field_, field_->frobenius_packed(packed_, i)); }

Fq Fq::pth_root() const {
    if (field_->n() == 1)
        return *this; // F_p is fixed by Frobenius
    return frobenius(field_->n() - 1);
}

std::string Fq::to_string() const {
    if (auto v = prime_value())
        return std::to_string(*v);
    int64_t k = field_->log_table_[size_t(packed_)];
    return k == 1 ? "g" : "g^" + std::to_string(k);
}

} // namespace hsfg
