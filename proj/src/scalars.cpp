#include "modlie/scalars.hpp"

#include <algorithm>
#include <sstream>

namespace modlie {

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        if (n % d == 0) return n == d;
    }
    for (uint64_t d = 37; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

PAdicDigits p_adic_digits(uint64_t a, uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("p_adic_digits: base must be prime");
    PAdicDigits out;
    out.value = a;
    out.base = p;
    while (a > 0) {
        out.digits.push_back(static_cast<uint32_t>(a % p));
        a /= p;
    }
    return out;
}

namespace {

uint32_t binom_small_mod_p(uint32_t a, uint32_t b, uint64_t p) {
    // a, b < p, so C(a, b) has no factor p in numerator terms; compute mod p.
    if (b > a) return 0;
    if (b > a - b) b = a - b;
    uint64_t num = 1, den = 1;
    for (uint32_t i = 0; i < b; ++i) {
        num = (num * ((a - i) % p)) % p;
        den = (den * ((i + 1) % p)) % p;
    }
    // den is invertible mod p
    uint64_t inv = 1, base = den, e = p - 2;
    while (e) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<uint32_t>(num * inv % p);
}

}  // namespace

uint32_t binom_mod_p(uint64_t a, uint64_t b, uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("binom_mod_p: modulus must be prime");
    uint64_t r = 1;
    while (b > 0 || a > 0) {
        uint32_t ai = static_cast<uint32_t>(a % p);
        uint32_t bi = static_cast<uint32_t>(b % p);
        if (bi > ai) return 0;
        r = r * binom_small_mod_p(ai, bi, p) % p;
        a /= p;
        b /= p;
    }
    return static_cast<uint32_t>(r);
}

// ---------------------------------------------------------------------------
// BigNat
// ---------------------------------------------------------------------------

namespace {
constexpr uint64_t kLimbBase = 1000000000ull;
}

BigNat::BigNat(uint64_t v) {
    if (v == 0) {
        limbs_ = {0};
        return;
    }
    while (v > 0) {
        limbs_.push_back(static_cast<uint32_t>(v % kLimbBase));
        v /= kLimbBase;
    }
}

void BigNat::trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

void BigNat::mul_small(uint64_t f) {
    if (f == 0) {
        limbs_ = {0};
        return;
    }
    unsigned __int128 carry = 0;
    for (auto& limb : limbs_) {
        unsigned __int128 cur = static_cast<unsigned __int128>(limb) * f + carry;
        limb = static_cast<uint32_t>(cur % kLimbBase);
        carry = cur / kLimbBase;
    }
    while (carry) {
        limbs_.push_back(static_cast<uint32_t>(carry % kLimbBase));
        carry /= kLimbBase;
    }
}

uint64_t BigNat::div_small(uint64_t d) {
    if (d == 0) throw std::invalid_argument("BigNat::div_small: division by zero");
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
        uint64_t cur = rem * kLimbBase + limbs_[i];
        limbs_[i] = static_cast<uint32_t>(cur / d);
        rem = cur % d;
    }
    trim();
    return rem;
}

uint64_t BigNat::mod_small(uint64_t m) const {
    if (m == 0) throw std::invalid_argument("BigNat::mod_small: modulus zero");
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
        rem = (rem * (kLimbBase % m) + limbs_[i]) % m;
    }
    return rem;
}

bool BigNat::is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

std::string BigNat::to_string() const {
    std::ostringstream os;
    os << limbs_.back();
    for (size_t i = limbs_.size() - 1; i-- > 0;) {
        std::string part = std::to_string(limbs_[i]);
        os << std::string(9 - part.size(), '0') << part;
    }
    return os.str();
}

BigNat BigNat::factorial(uint64_t n) {
    BigNat r(1);
    for (uint64_t i = 2; i <= n; ++i) r.mul_small(i);
    return r;
}

uint32_t divided_power_ratio_mod_p(uint64_t r, uint64_t s, uint64_t p) {
    if (s == 0) throw std::invalid_argument("divided_power_ratio_mod_p: s must be positive");
    if (r == 0) return 1;
    BigNat num = BigNat::factorial(r * s);
    for (uint64_t i = 2; i <= r; ++i) {
        uint64_t rem = num.div_small(i);
        if (rem != 0) throw std::logic_error("divided_power_ratio_mod_p: non-exact division");
    }
    for (uint64_t k = 0; k < r; ++k) {
        for (uint64_t i = 2; i <= s; ++i) {
            uint64_t rem = num.div_small(i);
            if (rem != 0) throw std::logic_error("divided_power_ratio_mod_p: non-exact division");
        }
    }
    return static_cast<uint32_t>(num.mod_small(p));
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over F_p (dense, low degree first) for the
// irreducible search.
// ---------------------------------------------------------------------------

namespace {

using Poly = std::vector<uint32_t>;

void ptrim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly pmod(Poly a, const Poly& m, uint64_t p) {
    ptrim(a);
    // m monic
    while (a.size() >= m.size() && !a.empty()) {
        uint64_t lead = a.back();
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
            uint64_t v = a[shift + i] + (p - (lead * m[i]) % p);
            a[shift + i] = static_cast<uint32_t>(v % p);
        }
        ptrim(a);
    }
    return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& m, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            c[i + j] = static_cast<uint32_t>((c[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
        }
    }
    return pmod(std::move(c), m, p);
}

Poly ppowmod(Poly base, uint64_t e, const Poly& m, uint64_t p) {
    Poly r = {1};
    base = pmod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = pmulmod(r, base, m, p);
        base = pmulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Poly pgcd(Poly a, Poly b, uint64_t p) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        // make b monic for pmod
        uint64_t lead = b.back();
        if (lead != 1) {
            uint64_t inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1) inv = inv * base % p;
                base = base * base % p;
                e >>= 1;
            }
            for (auto& c : b) c = static_cast<uint32_t>(c * inv % p);
        }
        Poly r = pmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace

bool is_irreducible_mod_p(const std::vector<uint32_t>& poly, uint32_t p) {
    Poly f = poly;
    ptrim(f);
    if (f.size() < 2) return false;
    size_t d = f.size() - 1;
    if (f.back() != 1) throw std::invalid_argument("is_irreducible_mod_p: polynomial must be monic");
    // x^{p^d} == x mod f, and gcd(x^{p^k} - x, f) == 1 for all k < d.
    Poly x = {0, 1};
    Poly xp = x;
    for (size_t k = 1; k <= d; ++k) {
        xp = ppowmod(xp, p, f, p);
        Poly diff = xp;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<uint32_t>((diff[1] + p - 1) % p);
        ptrim(diff);
        if (k == d) {
            if (!diff.empty()) return false;
        } else if (k <= d / 2) {
            Poly g = pgcd(f, diff, p);
            if (g.size() != 1) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// FieldSpec
// ---------------------------------------------------------------------------

uint64_t FieldSpec::q() const {
    uint64_t r = 1;
    for (uint32_t i = 0; i < M; ++i) r *= p;
    return r;
}

std::string FieldSpec::to_string() const {
    std::ostringstream os;
    os << "p=" << p << ";M=" << M << ";irr=";
    for (size_t i = 0; i < irr.size(); ++i) {
        if (i) os << ",";
        os << irr[i];
    }
    return os.str();
}

FieldSpec FieldSpec::parse(const std::string& text) {
    FieldSpec s;
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("FieldSpec::parse: bad segment " + part);
        std::string key = part.substr(0, eq), val = part.substr(eq + 1);
        if (key == "p") {
            s.p = static_cast<uint32_t>(std::stoul(val));
        } else if (key == "M") {
            s.M = static_cast<uint32_t>(std::stoul(val));
        } else if (key == "irr") {
            std::istringstream vs(val);
            std::string tok;
            while (std::getline(vs, tok, ',')) s.irr.push_back(static_cast<uint32_t>(std::stoul(tok)));
        } else {
            throw std::invalid_argument("FieldSpec::parse: unknown key " + key);
        }
    }
    if (s.p == 0 || s.M == 0 || s.irr.size() != s.M + 1) {
        throw std::invalid_argument("FieldSpec::parse: incomplete spec");
    }
    return s;
}

FieldSpec ext_field_make(uint32_t p, uint32_t M) {
    if (!is_prime_u64(p)) throw std::invalid_argument("ext_field_make: p must be prime");
    if (p < 3) throw std::invalid_argument("ext_field_make: p must be at least 3");
    if (M < 1 || M > kMaxFieldDeg) throw std::invalid_argument("ext_field_make: degree out of range");
    // p bounded so that p^2 fits comfortably in 64-bit intermediates.
    if (p > (1u << 15)) throw std::invalid_argument("ext_field_make: p too large");
    FieldSpec s;
    s.p = p;
    s.M = M;
    if (M == 1) {
        s.irr = {0, 1};  // X
        return s;
    }
    // Enumerate coefficient tuples (c0,...,c_{M-1}) in lexicographic order and
    // take the first irreducible X^M + c_{M-1}X^{M-1} + ... + c_0.
    std::vector<uint32_t> c(M, 0);
    for (;;) {
        std::vector<uint32_t> f(c.begin(), c.end());
        f.push_back(1);
        if (is_irreducible_mod_p(f, p)) {
            s.irr = f;
            return s;
        }
        size_t i = M;
        while (i-- > 0) {
            if (++c[i] < p) break;
            c[i] = 0;
            if (i == 0) throw std::logic_error("ext_field_make: no irreducible found");
        }
    }
}

// ---------------------------------------------------------------------------
// Fq
// ---------------------------------------------------------------------------

Fq::Fq(FieldSpec spec) : spec_(std::move(spec)) {
    if (spec_.M > kMaxFieldDeg) throw std::invalid_argument("Fq: extension degree too large");
    if (spec_.irr.size() != spec_.M + 1 || spec_.irr.back() != 1) {
        throw std::invalid_argument("Fq: irr must be monic of degree M");
    }
    if (spec_.M > 1 && !is_irreducible_mod_p(spec_.irr, spec_.p)) {
        throw std::invalid_argument("Fq: irr is reducible");
    }
    q_ = spec_.q();
    red_.resize(spec_.M);
    for (uint32_t i = 0; i < spec_.M; ++i) {
        red_[i] = (spec_.p - spec_.irr[i] % spec_.p) % spec_.p;
    }
}

FieldElement Fq::from_int(int64_t v) const {
    FieldElement e;
    int64_t r = v % static_cast<int64_t>(spec_.p);
    if (r < 0) r += spec_.p;
    e.c[0] = static_cast<uint32_t>(r);
    return e;
}

FieldElement Fq::gen() const {
    FieldElement e;
    if (spec_.M == 1) return e;  // X reduces to 0 in F_p = F_p[X]/(X)
    e.c[1] = 1;
    return e;
}

bool Fq::is_zero(const FieldElement& a) const {
    for (uint32_t i = 0; i < spec_.M; ++i) {
        if (a.c[i] != 0) return false;
    }
    return true;
}

FieldElement Fq::add(const FieldElement& a, const FieldElement& b) const {
    FieldElement r;
    for (uint32_t i = 0; i < spec_.M; ++i) {
        uint32_t v = a.c[i] + b.c[i];
        r.c[i] = v >= spec_.p ? v - spec_.p : v;
    }
    return r;
}

FieldElement Fq::sub(const FieldElement& a, const FieldElement& b) const {
    FieldElement r;
    for (uint32_t i = 0; i < spec_.M; ++i) {
        uint32_t v = a.c[i] + spec_.p - b.c[i];
        r.c[i] = v >= spec_.p ? v - spec_.p : v;
    }
    return r;
}

FieldElement Fq::neg(const FieldElement& a) const { return sub(zero(), a); }

FieldElement Fq::mul(const FieldElement& a, const FieldElement& b) const {
    const uint32_t M = spec_.M;
    const uint64_t p = spec_.p;
    if (M == 1) {
        FieldElement r;
        r.c[0] = static_cast<uint32_t>(static_cast<uint64_t>(a.c[0]) * b.c[0] % p);
        return r;
    }
    std::array<uint64_t, 2 * kMaxFieldDeg> acc{};
    for (uint32_t i = 0; i < M; ++i) {
        if (a.c[i] == 0) continue;
        for (uint32_t j = 0; j < M; ++j) {
            acc[i + j] += static_cast<uint64_t>(a.c[i]) * b.c[j] % p;
        }
    }
    // Reduce degrees >= M using x^M = red_.
    for (uint32_t d = 2 * M - 2; d >= M; --d) {
        uint64_t v = acc[d] % p;
        if (v) {
            for (uint32_t i = 0; i < M; ++i) {
                acc[d - M + i] += v * red_[i] % p;
            }
        }
        if (d == M) break;
    }
    FieldElement r;
    for (uint32_t i = 0; i < M; ++i) r.c[i] = static_cast<uint32_t>(acc[i] % p);
    return r;
}

FieldElement Fq::mul_int(const FieldElement& a, int64_t k) const {
    return mul(a, from_int(k));
}

FieldElement Fq::pow(const FieldElement& a, uint64_t e) const {
    FieldElement r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

FieldElement Fq::inv(const FieldElement& a) const {
    if (is_zero(a)) throw std::domain_error("Fq::inv: zero is not invertible");
    return pow(a, q_ - 2);
}

FieldElement Fq::pth_root(const FieldElement& a) const {
    // Frobenius has order M, so the inverse of x -> x^p is x -> x^{p^{M-1}}.
    FieldElement r = a;
    for (uint32_t i = 0; i + 1 < spec_.M; ++i) r = frobenius(r);
    return r;
}

uint64_t Fq::rank(const FieldElement& a) const {
    uint64_t r = 0;
    for (uint32_t i = spec_.M; i-- > 0;) r = r * spec_.p + a.c[i];
    return r;
}

FieldElement Fq::from_rank(uint64_t r) const {
    FieldElement e;
    for (uint32_t i = 0; i < spec_.M; ++i) {
        e.c[i] = static_cast<uint32_t>(r % spec_.p);
        r /= spec_.p;
    }
    return e;
}

uint64_t Fq::multiplicative_order(const FieldElement& a) const {
    if (is_zero(a)) throw std::domain_error("Fq::multiplicative_order: zero");
    uint64_t ord = 1;
    FieldElement x = a;
    while (!(x == one())) {
        x = mul(x, a);
        ++ord;
        if (ord > q_) throw std::logic_error("Fq::multiplicative_order: runaway");
    }
    return ord;
}

std::string Fq::to_string(const FieldElement& a) const {
    std::ostringstream os;
    for (uint32_t i = 0; i < spec_.M; ++i) {
        if (i) os << ",";
        os << a.c[i];
    }
    return os.str();
}

FieldElement Fq::parse(const std::string& text) const {
    FieldElement e;
    std::istringstream is(text);
    std::string tok;
    uint32_t i = 0;
    while (std::getline(is, tok, ',')) {
        if (i >= spec_.M) throw std::invalid_argument("Fq::parse: too many residues");
        e.c[i++] = static_cast<uint32_t>(std::stoul(tok) % spec_.p);
    }
    if (i != spec_.M) throw std::invalid_argument("Fq::parse: residue count mismatch");
    return e;
}

}  // namespace modlie
