#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modlie {

// ---------------------------------------------------------------------------
// Integer utilities
// ---------------------------------------------------------------------------

bool is_prime_u64(uint64_t n);

// Digits of a in base p, least significant first. Empty for a == 0.
struct PAdicDigits {
    uint64_t value = 0;
    uint64_t base = 0;
    std::vector<uint32_t> digits;
};

PAdicDigits p_adic_digits(uint64_t a, uint64_t p);

// C(a, b) mod p by Lucas' congruence: product of digit binomials.
// Throws std::invalid_argument when p is not prime.
uint32_t binom_mod_p(uint64_t a, uint64_t b, uint64_t p);

// ---------------------------------------------------------------------------
// Minimal unsigned bignum, base 10^9.  Enough for exact factorial ratios and
// test oracles; not a general-purpose integer type.
// ---------------------------------------------------------------------------

class BigNat {
public:
    BigNat() : limbs_{0} {}
    explicit BigNat(uint64_t v);

    void mul_small(uint64_t f);
    // Divides in place, returns the remainder.
    uint64_t div_small(uint64_t d);
    uint64_t mod_small(uint64_t m) const;
    bool is_zero() const;
    std::string to_string() const;

    static BigNat factorial(uint64_t n);

private:
    std::vector<uint32_t> limbs_;  // little-endian, base 1e9
    void trim();
};

// ((r*s)! / (r! * (s!)^r)) mod p, the scalar in the divided-power rule
// (f^(s))^(r) = ((rs)!/(r!(s!)^r)) f^(rs).  Exact: the quotient is computed
// in big integers before reduction.
uint32_t divided_power_ratio_mod_p(uint64_t r, uint64_t s, uint64_t p);

// ---------------------------------------------------------------------------
// Finite fields F_{p^M}
// ---------------------------------------------------------------------------

inline constexpr uint32_t kMaxFieldDeg = 6;

struct FieldSpec {
    uint32_t p = 0;
    uint32_t M = 0;
    std::vector<uint32_t> irr;  // monic, degree M, coefficients low degree first (size M+1)

    uint64_t q() const;
    bool operator==(const FieldSpec&) const = default;

    // "p=<int>;M=<int>;irr=<c0,c1,...,1>"
    std::string to_string() const;
    static FieldSpec parse(const std::string& text);
};

// Builds F_{p^M} with the lexicographically smallest monic irreducible of
// degree M (coefficient tuple (c0,...,c_{M-1}) compared left to right).
FieldSpec ext_field_make(uint32_t p, uint32_t M);

struct FieldElement {
    std::array<uint32_t, kMaxFieldDeg> c{};

    bool operator==(const FieldElement&) const = default;
};

// Field context.  All arithmetic goes through this class; FieldElement is a
// plain value whose residues are always reduced.
class Fq {
public:
    explicit Fq(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    uint32_t p() const { return spec_.p; }
    uint32_t deg() const { return spec_.M; }
    uint64_t q() const { return q_; }

    FieldElement zero() const { return FieldElement{}; }
    FieldElement one() const { return from_int(1); }
    FieldElement from_int(int64_t v) const;
    FieldElement gen() const;  // the class of X; equals 0 when M == 1... see impl

    bool is_zero(const FieldElement& a) const;
    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement mul_int(const FieldElement& a, int64_t k) const;
    FieldElement inv(const FieldElement& a) const;  // throws on zero
    FieldElement pow(const FieldElement& a, uint64_t e) const;
    FieldElement frobenius(const FieldElement& a) const { return pow(a, spec_.p); }
    FieldElement pth_root(const FieldElement& a) const;

    // Rank in [0, q): mixed-radix value of the residue tuple, c0 fastest.
    uint64_t rank(const FieldElement& a) const;
    FieldElement from_rank(uint64_t r) const;

    uint64_t multiplicative_order(const FieldElement& a) const;

    // Comma-separated residues.
    std::string to_string(const FieldElement& a) const;
    FieldElement parse(const std::string& text) const;

private:
    FieldSpec spec_;
    uint64_t q_;
    std::vector<uint32_t> red_;  // x^M = red_ (degree < M), precomputed from irr
};

// Polynomial irreducibility over F_p (coefficients low degree first, monic).
bool is_irreducible_mod_p(const std::vector<uint32_t>& poly, uint32_t p);

}  // namespace modlie
