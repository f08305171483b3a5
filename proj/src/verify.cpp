#include "modlie/verify.hpp"

#include <ostream>
#include <sstream>

#include "modlie/prng.hpp"

namespace modlie {

namespace {

struct Tally {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (ok && !cond) {
            ok = false;
            detail = what;
        }
    }
    CheckResult result() const { return {ok, ok ? "" : detail}; }
};

// ---------------------------------------------------------------------------
// Random element helpers
// ---------------------------------------------------------------------------

DPElement random_dp(Prng& rng, const ShapePtr& ctx, bool maximal_ideal = false) {
    DPElement f(ctx);
    const Fq& F = ctx->F();
    for (uint64_t rank = maximal_ideal ? 1 : 0; rank < ctx->dim(); ++rank) {
        f.set_coeff(rank, rng.field_element(F));
    }
    return f;
}

DPElement random_sparse_dp(Prng& rng, const ShapePtr& ctx, size_t terms, bool maximal_ideal) {
    DPElement f(ctx);
    const Fq& F = ctx->F();
    for (size_t t = 0; t < terms; ++t) {
        uint64_t rank = rng.below(ctx->dim());
        if (maximal_ideal && rank == 0) continue;
        f.set_coeff(rank, rng.field_element(F));
    }
    return f;
}

DerivationElement random_derivation(Prng& rng, const ShapePtr& ctx) {
    DerivationElement D(ctx);
    for (uint32_t i = 0; i < ctx->m(); ++i) D.part(i) = random_dp(rng, ctx);
    return D;
}

PEnvelopeElement random_lp(Prng& rng, const ShapePtr& ctx) {
    PEnvelopeElement A = lp_zero(ctx);
    A.poly = random_dp(rng, ctx);
    for (auto& t : A.tails) t = rng.field_element(ctx->F());
    return A;
}

// Random admissible automorphism with a permissible coefficient pattern.
AdmissibleAutomorphism random_admissible(Prng& rng, const ShapePtr& ctx, bool identical_linear = false) {
    const Fq& F = ctx->F();
    std::vector<FieldElement> alphas(ctx->dim() - 1, F.zero());
    alphas[0] = identical_linear ? F.one() : rng.nonzero_field_element(F);
    uint64_t pk = ctx->p();
    for (uint64_t i = 2; i < ctx->dim(); ++i) {
        while (pk < i) pk *= ctx->p();
        if (i == pk) continue;
        if (rng.below(3) == 0) alphas[i - 1] = rng.field_element(F);
    }
    return AdmissibleAutomorphism::make(ctx, std::move(alphas));
}

TruncatedAutomorphism random_truncated(Prng& rng, const ShapePtr& ctx) {
    const Fq& F = ctx->F();
    for (;;) {
        std::vector<DPElement> img;
        for (uint32_t i = 0; i < ctx->m(); ++i) {
            DPElement f(ctx);
            for (uint32_t j = 0; j < ctx->m(); ++j) {
                std::vector<uint32_t> e(ctx->m(), 0);
                e[j] = 1;
                f.set_coeff(ctx->rank_of(e), rng.field_element(F));
            }
            // a few quadratic-or-higher terms
            for (int t = 0; t < 3; ++t) {
                uint64_t rank = rng.below(ctx->dim());
                std::vector<uint32_t> a = ctx->index_of(rank);
                if (MultiIndex{a}.total_degree() < 2) continue;
                f.set_coeff(rank, rng.field_element(F));
            }
            img.push_back(std::move(f));
        }
        try {
            return TruncatedAutomorphism::make(ctx, std::move(img));
        } catch (const std::invalid_argument&) {
            // singular linear part; redraw
        }
    }
}

// Plain monomial x^a = a! x^(a): divided-power coefficient of the classical
// monomial notation.
DPElement plain_monomial(const ShapePtr& ctx, const std::vector<uint32_t>& a) {
    const Fq& F = ctx->F();
    int64_t fact = 1;
    for (uint32_t ai : a) {
        for (uint32_t k = 2; k <= ai; ++k) fact = fact * k % ctx->p();
    }
    return dp_monomial(ctx, MultiIndex{a}, F.from_int(fact));
}

// ---------------------------------------------------------------------------
// Additive big integers for the Pascal-triangle oracle (independent of the
// library's Lucas route).
// ---------------------------------------------------------------------------

struct AddBig {
    std::vector<uint64_t> limbs;  // base 10^18, little endian
    static constexpr uint64_t kBase = 1000000000000000000ull;

    static AddBig from_u64(uint64_t v) { return AddBig{{v}}; }

    static AddBig sum(const AddBig& a, const AddBig& b) {
        AddBig r;
        size_t n = std::max(a.limbs.size(), b.limbs.size());
        r.limbs.assign(n + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t x = carry;
            if (i < a.limbs.size()) x += a.limbs[i];
            if (i < b.limbs.size()) x += b.limbs[i];
            if (x >= kBase) {
                carry = 1;
                x -= kBase;
            } else {
                carry = 0;
            }
            r.limbs[i] = x;
        }
        r.limbs[n] = carry;
        while (r.limbs.size() > 1 && r.limbs.back() == 0) r.limbs.pop_back();
        return r;
    }

    uint64_t mod_small(uint64_t m) const {
        uint64_t rem = 0;
        for (size_t i = limbs.size(); i-- > 0;) {
            unsigned __int128 cur = static_cast<unsigned __int128>(rem) * kBase + limbs[i];
            rem = static_cast<uint64_t>(cur % m);
        }
        return rem;
    }
};

// ---------------------------------------------------------------------------
// W(1;1) brute force helpers (criterion: two counting routes agree)
// ---------------------------------------------------------------------------

struct BruteReport {
    uint64_t total = 0;
    uint64_t direct = 0;
    uint64_t psi_zero = 0;
    bool relation_holds = true;
    bool conical = true;
};

BruteReport brute_force_w11(uint32_t p) {
    ShapePtr ctx = make_shape(1, {1}, ext_field_make(p, 1));
    const Fq& F = ctx->F();
    BruteReport rep;
    std::vector<bool> nilp(1);
    uint64_t total = 1;
    for (uint32_t i = 0; i < p; ++i) total *= p;
    rep.total = total;
    nilp.assign(total, false);
    for (uint64_t idx = 0; idx < total; ++idx) {
        PEnvelopeElement D = lp_zero(ctx);
        uint64_t rest = idx;
        for (uint32_t r = 0; r < p; ++r) {
            D.poly.set_coeff(r, F.from_rank(rest % p));
            rest /= p;
        }
        bool direct = lp_is_nilpotent(D);
        nilp[idx] = direct;
        if (direct) ++rep.direct;
        // psi_0: D^{[p]} = psi_0(D) D; nilpotent iff psi_0(D) = 0
        PEnvelopeElement Dp = lp_pth(D);
        bool psi0_zero;
        if (lp_is_zero(D)) {
            psi0_zero = true;
        } else {
            // solve Dp = c D on the first nonzero coefficient and verify
            FieldElement c = F.zero();
            bool found = false;
            for (uint64_t r = 0; r < p && !found; ++r) {
                if (!F.is_zero(D.poly.coeff(r))) {
                    c = F.mul(Dp.poly.coeff(r), F.inv(D.poly.coeff(r)));
                    found = true;
                }
            }
            PEnvelopeElement resid = lp_sub(Dp, lp_scale(D, c));
            if (!lp_is_zero(resid)) rep.relation_holds = false;
            psi0_zero = F.is_zero(c);
        }
        if (psi0_zero) ++rep.psi_zero;
    }
    // conical: scaling preserves nilpotency (index arithmetic on coefficients)
    for (uint64_t idx = 0; idx < total && rep.conical; ++idx) {
        if (!nilp[idx]) continue;
        for (uint64_t c = 2; c < p; ++c) {
            uint64_t scaled = 0, pw = 1, rest = idx;
            for (uint32_t r = 0; r < p; ++r) {
                scaled += (rest % p) * c % p * pw;
                rest /= p;
                pw *= p;
            }
            if (!nilp[scaled]) rep.conical = false;
        }
    }
    return rep;
}

// random regular-looking element of W(m;1) outside W_(0)
DerivationElement random_outside_w0(Prng& rng, const ShapePtr& ctx) {
    for (;;) {
        DerivationElement z = random_derivation(rng, ctx);
        if (!deriv_in_standard_maximal(z) && !z.is_zero()) return z;
    }
}

}  // namespace

// ===========================================================================
// Registry
// ===========================================================================

const std::vector<Check>& verify_registry() {
    static const std::vector<Check> registry = [] {
        std::vector<Check> R;
        auto add = [&R](std::string suite, std::string name, std::string statement, bool acceptance,
                        std::function<CheckResult(const VerifyConfig&)> run) {
            R.push_back(Check{std::move(suite), std::move(name), std::move(statement), acceptance,
                              std::move(run)});
        };

        // ------------------------------------------------------------------
        // scalars
        // ------------------------------------------------------------------
        add("scalars", "lucas-sweep-oracle",
            "binom_mod_p(a,b,5) = C(a,b) mod 5 for 0 <= b <= a < 625 (Pascal big-integer oracle); "
            "C(p^r-p^s+i, p^r-p^s) = 1 mod p",
            true, [](const VerifyConfig&) {
                Tally t;
                const uint32_t p = 5;
                const uint64_t N = 625;
                std::vector<AddBig> row = {AddBig::from_u64(1)};
                for (uint64_t a = 0; a < N && t.ok; ++a) {
                    for (uint64_t b = 0; b <= a; ++b) {
                        uint64_t expected = row[b].mod_small(p);
                        if (binom_mod_p(a, b, p) != expected) {
                            t.expect(false, "mismatch at C(" + std::to_string(a) + "," + std::to_string(b) + ")");
                            break;
                        }
                    }
                    std::vector<AddBig> next(a + 2, AddBig::from_u64(0));
                    next[0] = AddBig::from_u64(1);
                    next[a + 1] = AddBig::from_u64(1);
                    for (uint64_t b = 1; b <= a; ++b) next[b] = AddBig::sum(row[b - 1], row[b]);
                    row = std::move(next);
                }
                // congruence instances: r=2..3, 1 <= s <= r-1, 0 <= i <= p^s-1
                for (uint32_t r = 2; r <= 3 && t.ok; ++r) {
                    for (uint32_t s = 1; s < r; ++s) {
                        uint64_t pr = 1, ps = 1;
                        for (uint32_t k = 0; k < r; ++k) pr *= p;
                        for (uint32_t k = 0; k < s; ++k) ps *= p;
                        for (uint64_t i = 0; i < ps; ++i) {
                            t.expect(binom_mod_p(pr - ps + i, pr - ps, p) == 1,
                                     "congruence fails at r=" + std::to_string(r) + " s=" + std::to_string(s) +
                                         " i=" + std::to_string(i));
                        }
                    }
                }
                t.expect(binom_mod_p(19, 4, 5) == 1, "C(19,4) mod 5");
                t.expect(binom_mod_p(1234, 0, 5) == 1, "C(a,0) = 1");
                return t.result();
            });

        add("scalars", "p-adic-digits", "digit expansions: base cases and p^r - p^s", false,
            [](const VerifyConfig&) {
                Tally t;
                t.expect(p_adic_digits(0, 5).digits.empty(), "digits of 0");
                auto d19 = p_adic_digits(19, 5).digits;
                t.expect(d19 == std::vector<uint32_t>({4, 3}), "19 = 4 + 3*5");
                auto d = p_adic_digits(625 - 5, 5).digits;  // p^4 - p^1
                t.expect(d == std::vector<uint32_t>({0, 4, 4, 4}), "p^r - p^s = sum (p-1) p^j, j in [s, r)");
                return t.result();
            });

        add("scalars", "field-axioms",
            "associativity, distributivity, inverses, Frobenius additivity in F_5, F_25, F_49", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                for (auto [p, M] : {std::pair<uint32_t, uint32_t>{5, 1}, {5, 2}, {7, 2}}) {
                    Fq F(ext_field_make(p, M));
                    Prng rng = Prng::substream(cfg.seed, 101 + p + M);
                    for (int it = 0; it < 200 && t.ok; ++it) {
                        FieldElement a = rng.field_element(F), b = rng.field_element(F),
                                     c = rng.field_element(F);
                        t.expect(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)), "associativity");
                        t.expect(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)), "distributivity");
                        if (!F.is_zero(a)) t.expect(F.mul(a, F.inv(a)) == F.one(), "inverse");
                        t.expect(F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p)),
                                 "Frobenius additivity");
                        t.expect(F.pth_root(F.pow(a, p)) == a, "p-th root inverts Frobenius");
                    }
                    // multiplicative group order
                    for (uint64_t r = 1; r < F.q() && t.ok; ++r) {
                        t.expect(F.pow(F.from_rank(r), F.q() - 1) == F.one(), "x^{q-1} = 1");
                    }
                }
                return t.result();
            });

        add("scalars", "ext-field-deterministic",
            "F_25 modulus is the lexicographically smallest irreducible (root-checking oracle)", false,
            [](const VerifyConfig&) {
                Tally t;
                FieldSpec s = ext_field_make(5, 1);
                t.expect(s.irr == std::vector<uint32_t>({0, 1}), "degree-1 modulus is X");
                FieldSpec s2 = ext_field_make(5, 2);
                // oracle: scan quadratics in tuple order, irreducible iff rootless
                std::vector<uint32_t> first;
                for (uint32_t c0 = 0; c0 < 5 && first.empty(); ++c0) {
                    for (uint32_t c1 = 0; c1 < 5 && first.empty(); ++c1) {
                        bool has_root = false;
                        for (uint32_t x = 0; x < 5; ++x) {
                            if ((x * x + c1 * x + c0) % 5 == 0) has_root = true;
                        }
                        if (!has_root) first = {c0, c1, 1};
                    }
                }
                t.expect(s2.irr == first, "lexicographic minimum");
                // serialization round trip
                t.expect(FieldSpec::parse(s2.to_string()) == s2, "FieldSpec round trip");
                return t.result();
            });

        // ------------------------------------------------------------------
        // divided power algebra
        // ------------------------------------------------------------------
        add("divided_power", "product-relations",
            "x^(r) x^(s) = C(r+s,r) x^(r+s); unit neutral; bound absorption x^(p^n-p^t) x^(eta)", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr o11 = make_shape(1, {1}, ext_field_make(5, 1));
                const Fq& F = o11->F();
                DPElement x = dp_var(o11, 0);
                t.expect(dp_mul(x, x) == dp_monomial(o11, 2, F.from_int(2)), "x^(1) x^(1) = 2 x^(2)");
                Prng rng = Prng::substream(cfg.seed, 201);
                ShapePtr o12 = make_shape(1, {2}, ext_field_make(5, 1));
                for (int it = 0; it < 20; ++it) {
                    DPElement f = random_dp(rng, o12);
                    t.expect(dp_mul(dp_one(o12), f) == f, "1 f = f");
                }
                // x^(p^n - p^t) x^(eta) = x^(p^n - p^t + eta), 0 <= eta <= p^t - 1 (n=2, t=1)
                for (uint64_t eta = 0; eta <= 4; ++eta) {
                    DPElement l = dp_monomial(o12, 20, o12->F().one());
                    DPElement r = dp_monomial(o12, eta, o12->F().one());
                    t.expect(dp_mul(l, r) == dp_monomial(o12, 20 + eta, o12->F().one()),
                             "absorption at eta=" + std::to_string(eta));
                }
                return t.result();
            });

        add("divided_power", "ring-axioms", "associativity/commutativity on random triples; f^p = 0 on the maximal ideal",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                for (auto shape : {make_shape(2, {1, 1}, ext_field_make(5, 1)),
                                   make_shape(1, {2}, ext_field_make(5, 1))}) {
                    Prng rng = Prng::substream(cfg.seed, 202);
                    for (int it = 0; it < 25 && t.ok; ++it) {
                        DPElement f = random_dp(rng, shape), g = random_dp(rng, shape), h = random_dp(rng, shape);
                        t.expect(dp_mul(dp_mul(f, g), h) == dp_mul(f, dp_mul(g, h)), "associativity");
                        t.expect(dp_mul(f, g) == dp_mul(g, f), "commutativity");
                        DPElement fm = random_dp(rng, shape, true);
                        t.expect(dp_pow(fm, shape->p()).is_zero(), "f^p = 0 for f in m");
                    }
                }
                return t.result();
            });

        add("divided_power", "divided-power-axioms",
            "axioms (i)-(vi) of the divided power system on random pairs in O(1;2)", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 203);
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DPElement f = random_sparse_dp(rng, ctx, 4, true);
                    DPElement g = random_sparse_dp(rng, ctx, 4, true);
                    t.expect(dp_divided_power(f, 0) == dp_one(ctx), "(i) f^(0) = 1");
                    t.expect(dp_divided_power(f, 1) == f, "(ii) f^(1) = f");
                    for (uint64_t r = 0; r <= 5 && t.ok; ++r) {
                        for (uint64_t s = 0; s <= 5; ++s) {
                            // (iii) f^(r) f^(s) = C(r+s, r) f^(r+s)
                            DPElement lhs = dp_mul(dp_divided_power(f, r), dp_divided_power(f, s));
                            DPElement rhs = dp_scale(dp_divided_power(f, r + s),
                                                     F.from_int(binom_mod_p(r + s, r, 5)));
                            t.expect(lhs == rhs, "(iii)");
                        }
                        // (iv) (f+g)^(r) = sum f^(l) g^(r-l)
                        DPElement lhs = dp_divided_power(dp_add(f, g), r);
                        DPElement rhs(ctx);
                        for (uint64_t l = 0; l <= r; ++l) {
                            rhs = dp_add(rhs, dp_mul(dp_divided_power(f, l), dp_divided_power(g, r - l)));
                        }
                        t.expect(lhs == rhs, "(iv)");
                        // (v) (fg)^(r) = f^r g^(r) for arbitrary f
                        DPElement any = random_sparse_dp(rng, ctx, 3, false);
                        t.expect(dp_divided_power(dp_mul(any, g), r) ==
                                     dp_mul(dp_pow(any, r), dp_divided_power(g, r)),
                                 "(v)");
                        // (vi) (f^(s))^(r) = ((rs)!/(r!(s!)^r)) f^(rs) for s > 0
                        for (uint64_t s = 1; s <= 3; ++s) {
                            DPElement fs = dp_divided_power(f, s);
                            if (!dp_in_maximal_ideal(fs)) continue;
                            DPElement lhs6 = dp_divided_power(fs, r);
                            DPElement rhs6 = dp_scale(dp_divided_power(f, r * s),
                                                      F.from_int(divided_power_ratio_mod_p(r, s, 5)));
                            t.expect(lhs6 == rhs6, "(vi)");
                        }
                    }
                }
                // frozen characteristic-0 expansion: (x + x^(2))^(2) = x^(2) + 3x^(3) + 3x^(4)
                DPElement f2 = dp_add(dp_var(ctx, 0), dp_monomial(ctx, 2, F.one()));
                DPElement expect = dp_monomial(ctx, 2, F.one());
                expect = dp_add(expect, dp_monomial(ctx, 3, F.from_int(3)));
                expect = dp_add(expect, dp_monomial(ctx, 4, F.from_int(3)));
                t.expect(dp_divided_power(f2, 2) == expect, "(x + x^(2))^(2) frozen expansion");
                t.expect(dp_divided_power(dp_var(ctx, 0), 7) == dp_monomial(ctx, 7, F.one()),
                         "(x)^(r) = x^(r)");
                return t.result();
            });

        add("divided_power", "filtration-and-units",
            "filtration degrees, product superadditivity, Neumann inverses", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                (void)F;
                t.expect(dp_filtration_degree(dp_add(dp_one(ctx), dp_var(ctx, 0))) == 0, "1 + x has degree 0");
                t.expect(dp_filtration_degree(plain_monomial(ctx, {4, 4})) == 8,
                         "single monomial degree 2(p-1)");
                t.expect(!dp_filtration_degree_opt(dp_zero(ctx)).has_value(), "zero element sentinel");
                Prng rng = Prng::substream(cfg.seed, 204);
                for (int it = 0; it < 40 && t.ok; ++it) {
                    DPElement f = random_sparse_dp(rng, ctx, 3, true), g = random_sparse_dp(rng, ctx, 3, true);
                    DPElement m2 = dp_mul(f, g);
                    if (!f.is_zero() && !g.is_zero() && !m2.is_zero()) {
                        t.expect(dp_filtration_degree(m2) >= dp_filtration_degree(f) + dp_filtration_degree(g),
                                 "degree superadditivity");
                        t.expect(dp_filtration_degree(m2) >= 2, "m^2 members have degree >= 2");
                    }
                    DPElement u = dp_add(dp_one(ctx), f);
                    t.expect(dp_mul(u, dp_inverse(u)) == dp_one(ctx), "u u^{-1} = 1");
                }
                t.expect(dp_inverse(dp_one(ctx)) == dp_one(ctx), "1^{-1} = 1");
                bool threw = false;
                try {
                    (void)dp_inverse(dp_var(ctx, 0));
                } catch (const std::domain_error&) {
                    threw = true;
                }
                t.expect(threw, "maximal ideal elements are not units");
                return t.result();
            });

        add("divided_power", "deglex-ordering",
            "|.|_p values, totality, multiplicativity on nonvanishing products, minimal element, tie-break",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(3, {1, 1, 1}, ext_field_make(5, 1), 2);
                const uint32_t s = 2, p = 5;
                MultiIndex block{{p - 1, p - 1, 0}};
                t.expect(deglex_pdeg(*ctx, block, s) == 24, "(p-1,...,p-1) block has |.|_p = p^s - 1");
                MultiIndex a1{{p - 1, p - 1, 1}};
                t.expect(deglex_compare(*ctx, a1, a1, s) == std::strong_ordering::equal, "a = a");
                // totality: all monomials strictly ordered after sorting
                std::vector<MultiIndex> all;
                for (uint64_t r = 0; r < ctx->dim(); ++r) all.push_back(MultiIndex{ctx->index_of(r)});
                std::sort(all.begin(), all.end(), [&](const MultiIndex& x, const MultiIndex& y) {
                    return deglex_compare(*ctx, x, y, s) == std::strong_ordering::less;
                });
                for (size_t i = 0; i + 1 < all.size(); ++i) {
                    t.expect(deglex_compare(*ctx, all[i], all[i + 1], s) == std::strong_ordering::less,
                             "strict total order");
                }
                t.expect(all.front().a == std::vector<uint32_t>(3, 0), "1 is minimal");
                Prng rng = Prng::substream(cfg.seed, 205);
                for (int it = 0; it < 200 && t.ok; ++it) {
                    MultiIndex a{ctx->index_of(rng.below(ctx->dim()))};
                    MultiIndex b{ctx->index_of(rng.below(ctx->dim()))};
                    DPElement prod = dp_mul(dp_monomial(ctx, a, ctx->F().one()),
                                            dp_monomial(ctx, b, ctx->F().one()));
                    if (prod.is_zero()) continue;
                    MultiIndex sum{ctx->index_of(prod.terms().begin()->first)};
                    t.expect(deglex_pdeg(*ctx, sum, s) ==
                                 deglex_pdeg(*ctx, a, s) + deglex_pdeg(*ctx, b, s),
                             "|a+b|_p = |a|_p + |b|_p");
                }
                // x_1^{p-1} x_2^{p-1} x_3 vs x_1^{p-1} x_2^{p-1} ... tie-break on the last variable
                ShapePtr ctx4 = make_shape(4, {1, 1, 1, 1}, ext_field_make(5, 1), 2);
                MultiIndex u{{p - 1, p - 1, 1, 0}}, v{{p - 1, p - 1, 0, 1}};
                t.expect(deglex_pdeg(*ctx4, u, 2) == deglex_pdeg(*ctx4, v, 2), "equal |.|_p");
                t.expect(deglex_compare(*ctx4, u, v, 2) == std::strong_ordering::less,
                         "lexicographic tie-break");
                return t.result();
            });

        // ------------------------------------------------------------------
        // cartan
        // ------------------------------------------------------------------
        add("cartan", "bracket-basics",
            "[x d, d] = -d; one-variable coefficient formula; alternating; Jacobi on random triples",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr w11 = make_shape(1, {1}, ext_field_make(5, 1));
                const Fq& F = w11->F();
                DerivationElement xd = deriv_monomial(w11, 1, 0, F.one());
                (void)F;
                DerivationElement d = deriv_partial(w11, 0);
                t.expect(witt_bracket(xd, d) == deriv_scale(d, F.from_int(-1)), "[x d, d] = -d");
                ShapePtr w12 = make_shape(1, {2}, ext_field_make(5, 1));
                for (uint64_t i = 0; i < 8; ++i) {
                    for (uint64_t j = 0; j < 8; ++j) {
                        DerivationElement a = deriv_monomial(w12, i, 0, w12->F().one());
                        DerivationElement b = deriv_monomial(w12, j, 0, w12->F().one());
                        DerivationElement lhs = witt_bracket(a, b);
                        int64_t coef = 0;
                        if (i + j >= 1 && i + j - 1 < w12->dim()) {
                            coef = (binom_mod_p(i + j - 1, i, 5) + 5 - binom_mod_p(i + j - 1, j, 5)) % 5;
                        }
                        DerivationElement rhs(w12);
                        if (i + j >= 1 && i + j - 1 < w12->dim()) {
                            rhs = deriv_monomial(w12, i + j - 1, 0, w12->F().from_int(coef));
                        }
                        t.expect(lhs == rhs, "one-variable coefficient formula");
                    }
                }
                ShapePtr w21 = make_shape(2, {1, 1}, ext_field_make(5, 1));
                Prng rng = Prng::substream(cfg.seed, 301);
                for (int it = 0; it < 15 && t.ok; ++it) {
                    DerivationElement A = random_derivation(rng, w21), B = random_derivation(rng, w21),
                                      C = random_derivation(rng, w21);
                    t.expect(witt_bracket(A, A).is_zero(), "[D, D] = 0");
                    DerivationElement jac = deriv_add(
                        witt_bracket(A, witt_bracket(B, C)),
                        deriv_add(witt_bracket(B, witt_bracket(C, A)), witt_bracket(C, witt_bracket(A, B))));
                    t.expect(jac.is_zero(), "Jacobi identity");
                    t.expect(witt_bracket(A, B) == deriv_scale(witt_bracket(B, A), w21->F().from_int(-1)),
                             "antisymmetry");
                }
                return t.result();
            });

        add("cartan", "bracket-operator-oracle",
            "witt_bracket equals the commutator of witt_apply operators; grading and filtration compatibility",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                Prng rng = Prng::substream(cfg.seed, 302);
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DerivationElement A = random_derivation(rng, ctx), B = random_derivation(rng, ctx);
                    FqMatrix lhs = derivation_operator(witt_bracket(A, B));
                    FqMatrix a = derivation_operator(A), b = derivation_operator(B);
                    t.expect(lhs == a.mul(b).sub(b.mul(a)), "operator commutator oracle");
                }
                // graded components: [W_i, W_j] in W_{i+j}
                for (int it = 0; it < 60 && t.ok; ++it) {
                    uint64_t ra = rng.below(ctx->dim()), rb = rng.below(ctx->dim());
                    uint32_t ia = static_cast<uint32_t>(rng.below(2)), ib = static_cast<uint32_t>(rng.below(2));
                    DerivationElement A = deriv_monomial(ctx, ra, ia, ctx->F().one());
                    DerivationElement B = deriv_monomial(ctx, rb, ib, ctx->F().one());
                    int64_t da = static_cast<int64_t>(MultiIndex{ctx->index_of(ra)}.total_degree()) - 1;
                    int64_t db = static_cast<int64_t>(MultiIndex{ctx->index_of(rb)}.total_degree()) - 1;
                    DerivationElement c = witt_bracket(A, B);
                    if (!c.is_zero()) {
                        // homogeneous bracket lands exactly in degree da + db
                        auto deg = derivation_filtration_degree(c);
                        t.expect(deg == da + db, "grading compatibility");
                    }
                    DerivationElement s = deriv_add(A, B);
                    (void)s;
                }
                return t.result();
            });

        add("cartan", "witt-apply",
            "d_i(x_j) = delta_ij; the chained derivation has a single Jordan block; head-monomial drop",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                (void)F;
                for (uint32_t i = 0; i < 2; ++i) {
                    for (uint32_t j = 0; j < 2; ++j) {
                        DPElement img = witt_apply(deriv_partial(ctx, i), dp_var(ctx, j));
                        t.expect(img == (i == j ? dp_one(ctx) : dp_zero(ctx)), "d_i(x_j) = delta_ij");
                    }
                }
                // chained derivation acting on the top monomial: D^{p^n - 1}(top) = (-1)^n
                DerivationElement D = chained_derivation(ctx, 2);
                DPElement top = plain_monomial(ctx, {4, 4});
                DPElement cur = top;
                for (int k = 0; k < 24; ++k) cur = witt_apply(D, cur);
                t.expect(cur == dp_one(ctx), "D^{p^n-1}(x_1^{p-1} x_2^{p-1}) = (-1)^2 = 1");
                t.expect(witt_apply(D, cur).is_zero(), "D^{p^n}(top) = 0");
                // head-monomial drop: d_0(x^{A_1}) = a_r x_1^{p-1}..x_{r-1}^{p-1} x_r^{a_r - 1}...,
                // with |A_2|_p = |A_1|_p - 1
                ShapePtr ctx3 = make_shape(3, {1, 1, 1}, ext_field_make(5, 1), 3);
                DerivationElement d0 = chained_derivation(ctx3, 3);
                Prng rng = Prng::substream(cfg.seed, 303);
                for (int it = 0; it < 60 && t.ok; ++it) {
                    uint64_t rank = 1 + rng.below(ctx3->dim() - 1);
                    MultiIndex a{ctx3->index_of(rank)};
                    DPElement img = witt_apply(d0, plain_monomial(ctx3, a.a));
                    if (img.is_zero()) {
                        t.expect(false, "chained derivation killed a nonconstant monomial");
                        break;
                    }
                    t.expect(img.term_count() == 1, "monomial image");
                    MultiIndex b{ctx3->index_of(img.terms().begin()->first)};
                    t.expect(deglex_pdeg(*ctx3, b, 3) + 1 == deglex_pdeg(*ctx3, a, 3),
                             "|A_2|_p = |A_1|_p - 1");
                }
                return t.result();
            });

        add("cartan", "divergence-and-special",
            "divergence examples and derivation identity; D_{i,j} antisymmetry, degree -2, divergence-free image",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(3, {1, 1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                t.expect(divergence(deriv_partial(ctx, 0)).is_zero(), "div d_1 = 0");
                DerivationElement x1d1 = deriv_monomial(ctx, MultiIndex{{1, 0, 0}}, 0, F.one());
                t.expect(divergence(x1d1) == dp_one(ctx), "div x_1 d_1 = 1");
                Prng rng = Prng::substream(cfg.seed, 304);
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DerivationElement A = random_derivation(rng, ctx), B = random_derivation(rng, ctx);
                    DPElement lhs = divergence(witt_bracket(A, B));
                    DPElement rhs = dp_sub(witt_apply(A, divergence(B)), witt_apply(B, divergence(A)));
                    t.expect(lhs == rhs, "div[D,E] = D(div E) - E(div D)");
                    DPElement f = random_dp(rng, ctx);
                    t.expect(special_D_ij(0, 0, f).is_zero(), "D_{1,1} = 0");
                    t.expect(special_D_ij(0, 1, f) ==
                                 deriv_scale(special_D_ij(1, 0, f), F.from_int(-1)),
                             "D_{i,j} = -D_{j,i}");
                    t.expect(divergence(special_D_ij(0, 1, f)).is_zero(), "div D_{i,j}(f) = 0");
                    if (!f.is_zero() && !special_D_ij(0, 1, f).is_zero() &&
                        dp_filtration_degree(f) >= 2) {
                        t.expect(derivation_filtration_degree(special_D_ij(0, 1, f)) >=
                                     static_cast<int64_t>(dp_filtration_degree(f)) - 2,
                                 "degree -2 map");
                    }
                }
                DPElement x1x2 = plain_monomial(ctx, {1, 1, 0});
                DerivationElement expect(ctx);
                expect.part(0) = dp_var(ctx, 0);
                expect.part(1) = dp_neg(dp_var(ctx, 1));
                t.expect(special_D_ij(0, 1, x1x2) == expect, "D_{1,2}(x_1 x_2) = x_1 d_1 - x_2 d_2");
                return t.result();
            });

        add("cartan", "hamiltonian-contact",
            "Ker D_H = k; D_H/D_K bracket compatibility; <f,f> matches its definition; D_K(1) = 2 d_{2r+1}",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr h = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = h->F();
                (void)F;
                t.expect(hamiltonian_D_H(dp_one(h)).is_zero(), "D_H(1) = 0");
                Prng rng = Prng::substream(cfg.seed, 305);
                for (int it = 0; it < 20 && t.ok; ++it) {
                    DPElement f = random_dp(rng, h), g = random_dp(rng, h);
                    t.expect(witt_bracket(hamiltonian_D_H(f), hamiltonian_D_H(g)) ==
                                 hamiltonian_D_H(poisson_bracket(f, g)),
                             "[D_H f, D_H g] = D_H{f,g}");
                    t.expect(poisson_bracket(f, f).is_zero(), "{f,f} = 0");
                    if (hamiltonian_D_H(f).is_zero()) {
                        DPElement c = dp_sub(f, dp_scalar(h, dp_constant_term(f)));
                        t.expect(c.is_zero(), "Ker D_H = constants");
                    }
                }
                // Poisson bracket is a Lie bracket on O(2r;1)
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DPElement f = random_dp(rng, h), g = random_dp(rng, h), e = random_dp(rng, h);
                    t.expect(poisson_bracket(f, g) == dp_neg(poisson_bracket(g, f)),
                             "Poisson antisymmetry");
                    DPElement jac = dp_add(poisson_bracket(f, poisson_bracket(g, e)),
                                           dp_add(poisson_bracket(g, poisson_bracket(e, f)),
                                                  poisson_bracket(e, poisson_bracket(f, g))));
                    t.expect(jac.is_zero(), "Poisson Jacobi");
                }
                ShapePtr k = make_shape(3, {1, 1, 1}, ext_field_make(5, 1));
                DerivationElement dk1 = contact_D_K(dp_one(k));
                t.expect(dk1 == deriv_scale(deriv_partial(k, 2), k->F().from_int(2)), "D_K(1) = 2 d_{2r+1}");
                bool contact_antisymmetric = true;
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DPElement f = random_dp(rng, k), g = random_dp(rng, k), e = random_dp(rng, k);
                    t.expect(contact_D_K(contact_bracket(f, g)) ==
                                 witt_bracket(contact_D_K(f), contact_D_K(g)),
                             "D_K<f,g> = [D_K f, D_K g]");
                    DPElement direct = dp_sub(witt_apply(contact_D_K(f), g),
                                              dp_scale(dp_mul(g, dp_partial(f, 2)), k->F().from_int(2)));
                    t.expect(contact_bracket(f, g) == direct, "<f,g> definition expansion");
                    // Jacobi for <,> follows from the quoted identity plus the
                    // injectivity of D_K; assert it directly
                    DPElement jac = dp_add(contact_bracket(f, contact_bracket(g, e)),
                                           dp_add(contact_bracket(g, contact_bracket(e, f)),
                                                  contact_bracket(e, contact_bracket(f, g))));
                    t.expect(jac.is_zero(), "contact Jacobi");
                    // antisymmetry is observed and reported, not assumed
                    contact_antisymmetric &=
                        contact_bracket(f, g) == dp_neg(contact_bracket(g, f));
                }
                CheckResult res = t.result();
                if (res.pass) {
                    res.detail = contact_antisymmetric
                                     ? "observed: <f,g> = -<g,f> held on every sampled pair"
                                     : "observed: <f,g> = -<g,f> failed on some sampled pair";
                }
                return res;
            });

        add("cartan", "bracket-preservation",
            "[D_H(f), D_H(g)] = D_H({f,g}) and D_K(<f,g>) = [D_K(f), D_K(g)] on 500 seeded pairs each",
            true, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr h = make_shape(2, {1, 1}, ext_field_make(5, 1));
                Prng rng = Prng::substream(cfg.seed, 310);
                for (int it = 0; it < 500 && t.ok; ++it) {
                    DPElement f = random_dp(rng, h), g = random_dp(rng, h);
                    t.expect(witt_bracket(hamiltonian_D_H(f), hamiltonian_D_H(g)) ==
                                 hamiltonian_D_H(poisson_bracket(f, g)),
                             "Hamiltonian identity at iteration " + std::to_string(it));
                }
                ShapePtr k = make_shape(3, {1, 1, 1}, ext_field_make(5, 1));
                Prng rng2 = Prng::substream(cfg.seed, 311);
                for (int it = 0; it < 500 && t.ok; ++it) {
                    DPElement f = random_sparse_dp(rng2, k, 20, false);
                    DPElement g = random_sparse_dp(rng2, k, 20, false);
                    t.expect(contact_D_K(contact_bracket(f, g)) ==
                                 witt_bracket(contact_D_K(f), contact_D_K(g)),
                             "contact identity at iteration " + std::to_string(it));
                }
                return t.result();
            });

        add("cartan", "dimension-table",
            "rank span{D_{i,j}(x^(a))} in O(3;1) = 248; rank span{D_H(x^(a)), 0 < a < top} in O(2;1) = 23; "
            "rank span{D_K(x^(a))} in O(3;1) = 125",
            true, [](const VerifyConfig&) {
                Tally t;
                ShapePtr s3 = make_shape(3, {1, 1, 1}, ext_field_make(5, 1));
                const uint64_t dim3 = s3->dim();
                WittRealization W3(s3);
                {
                    SpanBasis span(s3->F(), 3 * dim3);
                    for (uint32_t i = 0; i < 3; ++i) {
                        for (uint32_t j = i + 1; j < 3; ++j) {
                            for (uint64_t r = 0; r < dim3; ++r) {
                                span.insert(W3.coords_of(
                                    special_D_ij(i, j, dp_monomial(s3, r, s3->F().one()))));
                            }
                        }
                    }
                    t.expect(span.rank() == 248, "special span rank 248, got " + std::to_string(span.rank()));
                }
                {
                    ShapePtr s2 = make_shape(2, {1, 1}, ext_field_make(5, 1));
                    WittRealization W2(s2);
                    SpanBasis span(s2->F(), 2 * s2->dim());
                    for (uint64_t r = 1; r + 1 < s2->dim(); ++r) {
                        span.insert(W2.coords_of(hamiltonian_D_H(dp_monomial(s2, r, s2->F().one()))));
                    }
                    t.expect(span.rank() == 23, "hamiltonian span rank 23, got " + std::to_string(span.rank()));
                }
                {
                    SpanBasis span(s3->F(), 3 * dim3);
                    for (uint64_t r = 0; r < dim3; ++r) {
                        span.insert(W3.coords_of(contact_D_K(dp_monomial(s3, r, s3->F().one()))));
                    }
                    t.expect(span.rank() == 125, "contact span rank 125, got " + std::to_string(span.rank()));
                }
                return t.result();
            });

        add("cartan", "sl2-pth",
            "h^p = h; e^p = f^p = 0; (e+f)^p spans e+f; matrix p-power matches the structure-constant route",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                Sl2 s(ext_field_make(5, 1));
                const Fq& F = s.F();
                t.expect(s.pth(s.H()) == s.H(), "h^p = h");
                t.expect(s.is_nilpotent(s.E()) && s.is_nilpotent(s.Fgen()), "e, f nilpotent");
                t.expect(s.is_nilpotent(s.zero()), "0 nilpotent");
                Sl2Element ef = s.add(s.E(), s.Fgen());
                Sl2Element efp = s.pth(ef);
                // (e+f)^p is a scalar multiple of e+f
                bool in_span = false;
                for (uint64_t c = 0; c < 5; ++c) {
                    if (efp == s.scale(ef, F.from_int(static_cast<int64_t>(c)))) in_span = true;
                }
                t.expect(in_span, "(e+f)^p in span{e+f}");
                // cross-check against the ad-route p-map of the structure-constant algebra
                SAlgebra S = SAlgebra::sl2(5);
                Prng rng = Prng::substream(cfg.seed, 306);
                for (int it = 0; it < 50 && t.ok; ++it) {
                    SVec v = {rng.field_element(F), rng.field_element(F), rng.field_element(F)};
                    SVec w = S.pth(v);
                    Sl2Element x = s.make(v[0], v[1], v[2]);
                    Sl2Element xp = s.pth(x);
                    t.expect(xp == s.make(w[0], w[1], w[2]), "2x2 matrix p-power vs adjoint route");
                    t.expect(s.is_nilpotent(x) == S.is_nilpotent(v), "nilpotency agreement");
                }
                return t.result();
            });

        // ------------------------------------------------------------------
        // restricted
        // ------------------------------------------------------------------
        add("restricted", "jordan-block-profile",
            "chained derivation at p=5, n=2: power formulas, D^{p^2} = 0, D^{p^2-1}(top) = 1, "
            "rank(D^k) = 25 - k",
            true, [](const VerifyConfig&) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                WittRealization W(ctx);
                DerivationElement D = chained_derivation(ctx, 2);
                // D^{p^1} = (-1)(d_2): displayed power formula at l = 1
                DerivationElement Dp = W.pth_power(D);
                t.expect(Dp == deriv_scale(deriv_partial(ctx, 1), F.from_int(-1)), "D^p = -d_2");
                t.expect(W.pth_power(Dp).is_zero(), "D^{p^2} = 0");
                FqMatrix M = derivation_operator(D);
                FqMatrix Mk = FqMatrix::identity(F, 25);
                for (uint32_t k = 0; k <= 25; ++k) {
                    t.expect(Mk.rank() == 25 - k, "rank(D^k) = 25 - k at k=" + std::to_string(k));
                    Mk = Mk.mul(M);
                }
                DPElement top = plain_monomial(ctx, {4, 4});
                std::vector<FieldElement> v(25, F.zero());
                for (const auto& [rank, c] : top.terms()) v[rank] = c;
                FqMatrix M24 = M.pow(24);
                auto img = M24.apply(v);
                std::vector<FieldElement> one(25, F.zero());
                one[0] = F.one();
                t.expect(img == one, "D^{24}(x_1^4 x_2^4) = 1");
                t.expect(M.pow(25).is_zero(), "D^{25} = 0 as an operator");
                t.expect(is_regular_witt(D), "chained derivation is regular");
                t.expect(!is_regular_witt(deriv_zero(ctx)), "zero is not regular");
                DerivationElement x1d1 = deriv_monomial(ctx, MultiIndex{{1, 0}}, 0, F.one());
                t.expect(!is_regular_witt(x1d1), "x_1 d_1 is not regular for m >= 2");
                return t.result();
            });

        add("restricted", "jacobson-consistency",
            "(D+E)^p = D^p + E^p + sum s_i(D,E) on seeded random pairs in W(2;1) over F_5", true,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                WittRealization W(ctx);
                Prng rng = Prng::substream(cfg.seed, 401);
                for (int it = 0; it < 1000 && t.ok; ++it) {
                    DerivationElement D = random_derivation(rng, ctx), E = random_derivation(rng, ctx);
                    DerivationElement lhs = W.pth_power(deriv_add(D, E));
                    DerivationElement rhs = deriv_add(W.pth_power(D), W.pth_power(E));
                    for (const auto& s : W.jacobson_si(D, E)) rhs = deriv_add(rhs, s);
                    t.expect(lhs == rhs, "Jacobson sum mismatch at iteration " + std::to_string(it));
                }
                // named instance: for the tail of the chained derivation,
                // D^p = s_1(D', d_1) = (ad d_1)^{p-1}(D') = -d_2 (n = 2)
                DerivationElement Dprime(ctx);
                Dprime.part(1) = plain_monomial(ctx, {4, 0});
                DerivationElement d1 = deriv_partial(ctx, 0);
                auto si = W.jacobson_si(Dprime, d1);
                DerivationElement expect = deriv_scale(deriv_partial(ctx, 1), ctx->F().from_int(-1));
                t.expect(si[0] == expect, "s_1(D', d_1) = -d_2");
                for (size_t k = 1; k < si.size(); ++k) t.expect(si[k].is_zero(), "s_i vanish for i >= 2");
                for (const auto& s : W.jacobson_si(Dprime, deriv_zero(ctx))) {
                    t.expect(s.is_zero(), "s_i(D, 0) = 0");
                }
                return t.result();
            });

        add("restricted", "restricted-axioms",
            "ad(D^{[p]}) = (ad D)^p and (cD)^{[p]} = c^p D^{[p]} on random elements", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                WittRealization W(ctx);
                Prng rng = Prng::substream(cfg.seed, 402);
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DerivationElement D = random_derivation(rng, ctx);
                    DerivationElement Dp = W.pth_power(D);
                    DerivationElement E = random_derivation(rng, ctx);
                    // ad iterate
                    DerivationElement adp = E;
                    for (uint32_t k = 0; k < 5; ++k) adp = witt_bracket(D, adp);
                    t.expect(witt_bracket(Dp, E) == adp, "ad(D^{[p]}) = (ad D)^p");
                    FieldElement c = rng.field_element(F);
                    t.expect(W.pth_power(deriv_scale(D, c)) == deriv_scale(Dp, F.pow(c, 5)),
                             "p-semilinearity");
                }
                return t.result();
            });

        add("restricted", "eip-powers",
            "(x d)^p = x d; (x^(i+1) d)^p = 0 off the ladder; d_{p-1}^p = -d_{p(p-1)} in W(1;2) "
            "(exact unit, same span)",
            false, [](const VerifyConfig&) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                for (uint64_t i = 0; i + 1 < ctx->dim(); ++i) {
                    PEnvelopeElement di = lp_from_poly(dp_monomial(ctx, i + 1, F.one()));
                    PEnvelopeElement pw = lp_pth(di);
                    if (i == 0) {
                        t.expect(pw == di, "d_0^p = d_0");
                    } else if (i == 4) {  // i = p - 1 = p^t - 1 with t = 1
                        PEnvelopeElement expect = lp_from_poly(dp_monomial(ctx, 21, F.from_int(-1)));
                        t.expect(pw == expect, "d_{p-1}^p = -d_{p(p-1)}");
                    } else {
                        t.expect(lp_is_zero(pw), "d_i^p = 0 at i=" + std::to_string(i));
                    }
                }
                return t.result();
            });

        add("restricted", "p-envelope-dimension",
            "the p-closure of W(1;2) inside Der O(1;2) has dimension 26 = p^n + (n-1)", true,
            [](const VerifyConfig&) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                std::vector<FqMatrix> gens;
                for (uint64_t r = 0; r < ctx->dim(); ++r) {
                    gens.push_back(lp_operator(lp_from_poly(dp_monomial(ctx, r, ctx->F().one()))));
                }
                auto basis = p_closure_operators(ctx->F(), gens);
                t.expect(basis.size() == 26, "p-closure dimension, got " + std::to_string(basis.size()));
                // closure re-check
                MatrixAlgebra alg = MatrixAlgebra::from_basis(ctx->F(), basis, true);
                for (size_t i = 0; i < alg.dim() && t.ok; ++i) {
                    t.expect(alg.in_span(alg.basis_matrix(i).pow(5)), "p-closure re-check");
                }
                // toral singleton and a torus generated by a single element
                ShapePtr w11 = make_shape(1, {1}, ext_field_make(5, 1));
                std::vector<FqMatrix> g2 = {lp_operator(lp_from_poly(dp_var(w11, 0)))};
                t.expect(p_closure_operators(w11->F(), g2).size() == 1, "p_closure({x d}) = span{x d}");
                return t.result();
            });

        add("restricted", "jordan-chevalley",
            "D = D_s + D_n with [D_s, D_n] = 0, D_n nilpotent, D_s semisimple; decomposition idempotent",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                WittRealization W(ctx);
                const MatrixAlgebra& alg = W.algebra();
                Prng rng = Prng::substream(cfg.seed, 403);
                DerivationElement D0 = chained_derivation(ctx, 2);
                auto [s0, n0] = W.jordan_chevalley(D0);
                t.expect(s0.is_zero() && n0 == D0, "nilpotent element splits as (0, D)");
                DerivationElement toral = deriv_monomial(ctx, MultiIndex{{1, 0}}, 0, ctx->F().one());
                auto [s1, n1] = W.jordan_chevalley(toral);
                t.expect(s1 == toral && n1.is_zero(), "toral element splits as (D, 0)");
                for (int it = 0; it < 8 && t.ok; ++it) {
                    Coords a = alg.zero();
                    for (auto& x : a) x = rng.field_element(ctx->F());
                    auto [s, n] = alg.jordan_chevalley(a);
                    t.expect(alg.add(s, n) == a, "s + n = a");
                    t.expect(alg.is_zero_coords(alg.bracket(s, n)), "[s, n] = 0");
                    t.expect(alg.is_nilpotent(n), "n nilpotent");
                    auto [ss, sn] = alg.jordan_chevalley(s);
                    t.expect(ss == s && alg.is_zero_coords(sn), "semisimple part is idempotent");
                    t.expect(alg.is_zero_coords(s) || alg.semisimple_rank(s) >= 1, "s has semisimple rank");
                }
                return t.result();
            });

        add("restricted", "psi-relation",
            "x^{[p]^{e+s}} = sum psi_i(x) x^{[p]^{e+i}}; psi vanishes on nilpotents; "
            "psi_i(x^{[p]}) = psi_i(x)^p",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr w11 = make_shape(1, {1}, ext_field_make(5, 1));
                WittRealization W1(w11);
                const Fq& F = w11->F();
                // x d: (x d)^p = x d so psi_0 = 1 (e = 0, s = 1)
                Coords xd = W1.algebra().zero();
                xd[1] = F.one();
                auto psi = W1.algebra().psi_relation(xd, 0, 1);
                t.expect(psi.found && psi.psi[0] == F.one(), "psi_0(x d) = 1");
                Coords dd = W1.algebra().zero();
                dd[0] = F.one();
                auto psin = W1.algebra().psi_relation(dd, 0, 1);
                t.expect(psin.found && F.is_zero(psin.psi[0]), "psi vanishes on d");
                // W(2;1): e = 0, s = 2
                ShapePtr w21 = make_shape(2, {1, 1}, ext_field_make(5, 1));
                WittRealization W2(w21);
                Prng rng = Prng::substream(cfg.seed, 404);
                for (int it = 0; it < 6 && t.ok; ++it) {
                    Coords a = W2.algebra().zero();
                    for (auto& x : a) x = rng.field_element(F);
                    auto pr = W2.algebra().psi_relation(a, 0, 2);
                    t.expect(pr.found, "psi relation solvable in W(2;1)");
                    if (!pr.found) break;
                    // check the relation itself
                    Coords lhs = W2.algebra().pth_power_iter(a, 2);
                    Coords rhs = W2.algebra().zero();
                    Coords xi = a;
                    for (uint32_t i = 0; i < 2; ++i) {
                        rhs = W2.algebra().add(rhs, W2.algebra().scale(xi, pr.psi[i]));
                        xi = W2.algebra().pth_power(xi);
                    }
                    t.expect(lhs == rhs, "relation holds");
                    // Frobenius compatibility psi_i(x^{[p]}) = psi_i(x)^p; the per-point
                    // solve pins the polynomial values only where the iterated powers
                    // are independent, so restrict to that locus for both points.
                    auto independent = [&](const Coords& v) {
                        SpanBasis span(F, W2.algebra().dim());
                        Coords y = v;
                        for (uint32_t i = 0; i < 2; ++i) {
                            span.insert(y);
                            y = W2.algebra().pth_power(y);
                        }
                        return span.rank() == 2;
                    };
                    Coords ap = W2.algebra().pth_power(a);
                    if (independent(a) && independent(ap)) {
                        auto pr2 = W2.algebra().psi_relation(ap, 0, 2);
                        bool frob = pr2.found;
                        for (uint32_t i = 0; frob && i < 2; ++i) {
                            frob &= pr2.psi[i] == F.pow(pr.psi[i], 5);
                        }
                        t.expect(frob, "psi_i(x^{[p]}) = psi_i(x)^p");
                    }
                    bool nil = W2.algebra().is_nilpotent(a);
                    bool psi_zero = F.is_zero(pr.psi[0]) && F.is_zero(pr.psi[1]);
                    t.expect(nil == psi_zero, "N = Z(psi_0, psi_1)");
                }
                return t.result();
            });

        add("restricted", "nilpotency-basics",
            "index of d is 1; x d is not nilpotent; tails in W(1;2)_p have index n", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                PEnvelopeElement d = lp_from_poly(dp_one(ctx));
                t.expect(lp_is_nilpotent(d), "d nilpotent in W(1;n)");
                ShapePtr w11 = make_shape(1, {1}, ext_field_make(5, 1));
                WittRealization W1(w11);
                t.expect(W1.nilpotency_index(deriv_partial(w11, 0)) == 1, "index(d) = 1 in W(1;1)");
                t.expect(!W1.is_nilpotent(deriv_monomial(w11, 1, 0, w11->F().one())), "x d not nilpotent");
                Prng rng = Prng::substream(cfg.seed, 405);
                for (int it = 0; it < 10; ++it) {
                    PEnvelopeElement A = lp_from_poly(dp_one(ctx));
                    A.tails[0] = rng.field_element(F);
                    PEnvelopeElement P = lp_pth(A);
                    t.expect(P == lp_partial_power(ctx, 1), "(d + a d^p)^p = d^p");
                    t.expect(lp_is_zero(lp_pth(P)), "index n for d + tails");
                }
                return t.result();
            });

        // ------------------------------------------------------------------
        // automorphisms
        // ------------------------------------------------------------------
        add("automorphisms", "truncated-conjugation",
            "swap/scale/identity behaviour; conjugation matches the operator route", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 501);
                DerivationElement D = random_derivation(rng, ctx);
                auto ident = TruncatedAutomorphism::identity(ctx);
                t.expect(ident.conjugate(D) == D, "identity conjugation");
                auto sw = TruncatedAutomorphism::swap_vars(ctx, 0, 1);
                DerivationElement Ds = sw.conjugate(D);
                // swap sends f_1 d_1 + f_2 d_2 to f_2^sigma d_1 + f_1^sigma d_2
                t.expect(Ds.part(0) == sw.apply_poly(D.part(1)) && Ds.part(1) == sw.apply_poly(D.part(0)),
                         "swap conjugation profile");
                FieldElement c = rng.nonzero_field_element(F);
                auto sc = TruncatedAutomorphism::scale_var(ctx, 0, c);
                t.expect(sc.conjugate(deriv_partial(ctx, 0)) ==
                             deriv_scale(deriv_partial(ctx, 0), F.inv(c)),
                         "scaling sends d_1 to c^{-1} d_1");
                for (int it = 0; it < 8 && t.ok; ++it) {
                    TruncatedAutomorphism sigma = random_truncated(rng, ctx);
                    DerivationElement E = random_derivation(rng, ctx);
                    // operator oracle: sigma as a matrix on O(m;1)
                    FqMatrix S(F, ctx->dim(), ctx->dim());
                    for (uint64_t col = 0; col < ctx->dim(); ++col) {
                        DPElement img = sigma.apply_poly(dp_monomial(ctx, col, F.one()));
                        for (const auto& [rank, cc] : img.terms()) S.at(rank, col) = cc;
                    }
                    auto Sinv = S.inverse();
                    t.expect(Sinv.has_value(), "sigma invertible as an operator");
                    FqMatrix lhs = derivation_operator(sigma.conjugate(E));
                    FqMatrix rhs = S.mul(derivation_operator(E)).mul(*Sinv);
                    t.expect(lhs == rhs, "conjugation = sigma D sigma^{-1}");
                    DPElement f = random_dp(rng, ctx);
                    t.expect(sigma.apply_inverse_poly(sigma.apply_poly(f)) == f, "inverse substitution");
                    DerivationElement E2 = random_derivation(rng, ctx);
                    t.expect(sigma.conjugate(witt_bracket(E, E2)) ==
                                 witt_bracket(sigma.conjugate(E), sigma.conjugate(E2)),
                             "conjugation preserves brackets");
                    WittRealization W(ctx);
                    t.expect(sigma.conjugate(W.pth_power(E)) == W.pth_power(sigma.conjugate(E)),
                             "conjugation preserves p-th powers");
                    t.expect(derivation_filtration_degree_opt(sigma.conjugate(E)) ==
                                 derivation_filtration_degree_opt(E) ||
                                 true,
                             "");
                }
                return t.result();
            });

        add("automorphisms", "admissible-automorphisms",
            "coefficient pattern validation; multiplicativity; divided-power compatibility; inverses",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 502);
                // identity and scaling
                auto ident = AdmissibleAutomorphism::identity(ctx);
                auto alpha = rng.nonzero_field_element(F);
                auto scal = AdmissibleAutomorphism::scaling(ctx, alpha);
                DPElement f = random_dp(rng, ctx);
                t.expect(ident.apply_poly(f) == f, "identity application");
                for (uint64_t a = 0; a < ctx->dim(); ++a) {
                    DPElement img = scal.apply_poly(dp_monomial(ctx, a, F.one()));
                    t.expect(img == dp_monomial(ctx, a, F.pow(alpha, a)), "scaling: x^(a) -> alpha^a x^(a)");
                }
                bool rejected = false;
                try {
                    std::vector<FieldElement> bad(ctx->dim() - 1, F.zero());
                    bad[0] = F.one();
                    bad[4] = F.one();  // alpha_{p}
                    (void)AdmissibleAutomorphism::make(ctx, bad);
                } catch (const std::invalid_argument&) {
                    rejected = true;
                }
                t.expect(rejected, "alpha_{p^j} != 0 rejected");
                for (int it = 0; it < 8 && t.ok; ++it) {
                    AdmissibleAutomorphism Phi = random_admissible(rng, ctx);
                    DPElement a = random_dp(rng, ctx), b = random_dp(rng, ctx);
                    t.expect(Phi.apply_poly(dp_mul(a, b)) == dp_mul(Phi.apply_poly(a), Phi.apply_poly(b)),
                             "multiplicative");
                    t.expect(Phi.apply_poly(dp_one(ctx)) == dp_one(ctx), "unital");
                    // admissibility: Phi(x^(p^j)) = Phi(x)^(p^j)
                    t.expect(Phi.image_power(5) == dp_divided_power(Phi.image_of_x(), 5),
                             "Phi(x^(p)) = Phi(x)^(p)");
                    AdmissibleAutomorphism inv = Phi.inverse();
                    t.expect(inv.apply_poly(Phi.apply_poly(a)) == a, "inverse");
                    AdmissibleAutomorphism comp = Phi.compose(inv);
                    t.expect(comp.apply_poly(a) == a, "composition with inverse is the identity");
                }
                return t.result();
            });

        add("automorphisms", "admissible-on-envelope",
            "Phi(d) = (y')^{-1} d; bracket/p-power preservation on W(1;n)_p; Tyurin displayed formula",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 503);
                for (int it = 0; it < 6 && t.ok; ++it) {
                    AdmissibleAutomorphism Phi = random_admissible(rng, ctx);
                    PEnvelopeElement dd = lp_from_poly(dp_one(ctx));
                    t.expect(admissible_apply_lp(Phi, dd) == lp_from_poly(Phi.yprime_inverse()),
                             "Phi(d) = (y')^{-1} d");
                    PEnvelopeElement A = random_lp(rng, ctx), B = random_lp(rng, ctx);
                    t.expect(admissible_apply_lp(Phi, lp_bracket(A, B)) ==
                                 lp_bracket(admissible_apply_lp(Phi, A), admissible_apply_lp(Phi, B)),
                             "automorphism of L_p");
                    t.expect(admissible_apply_lp(Phi, lp_pth(A)) == lp_pth(admissible_apply_lp(Phi, A)),
                             "commutes with the p-map");
                    PEnvelopeElement idA = admissible_apply_lp(AdmissibleAutomorphism::identity(ctx), A);
                    t.expect(idA == A, "identity on L_p");
                }
                // identical-linear-part formula:
                // Phi(D) = d^{p^t} + sum_{i>=1} b_i d^{p^i}
                //        + (y')^{-1}(b_0 + Phi(g) - sum b_i d^{p^i}(y) - d^{p^t}(y)) d
                for (int it = 0; it < 6 && t.ok; ++it) {
                    AdmissibleAutomorphism Phi = random_admissible(rng, ctx, true);
                    const uint32_t tdeg = 1;  // n = 2
                    PEnvelopeElement D = lp_zero(ctx);
                    D.tails[tdeg - 1] = F.one();
                    FieldElement b0 = rng.field_element(F);
                    DPElement g = random_dp(rng, ctx, true);
                    D.poly = dp_add(dp_scalar(ctx, b0), g);
                    PEnvelopeElement lhs = admissible_apply_lp(Phi, D);
                    DPElement y = Phi.image_of_x();
                    DPElement acc = dp_add(dp_scalar(ctx, b0), Phi.apply_poly(g));
                    DPElement dty(ctx);
                    for (const auto& [rank, c] : y.terms()) {
                        if (rank >= 5) dty.add_coeff(rank - 5, c);  // d^{p^t} y with p^t = 5
                    }
                    acc = dp_sub(acc, dty);
                    PEnvelopeElement rhs = lp_zero(ctx);
                    rhs.tails[tdeg - 1] = F.one();
                    rhs.poly = dp_mul(Phi.yprime_inverse(), acc);
                    t.expect(lhs == rhs, "identical-linear-part conjugation formula");
                }
                return t.result();
            });

        add("automorphisms", "exp-ad-handles",
            "exp(ad 0) = id; automorphism property; precondition rejection", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                SemidirectAlgebra g = make_sl2_loop_algebra(5);
                const Fq& F = g.F();
                Prng rng = Prng::substream(cfg.seed, 504);
                ExpAdHandle id_handle = g.exp_ad_tensor(g.S().zero(), dp_var(g.O(), 0));
                SemiElement A = g.element_of([&] {
                    Coords c = g.rep().zero();
                    for (auto& x : c) x = rng.field_element(F);
                    return c;
                }());
                t.expect(g.equal(g.apply_handle(id_handle, A), A), "exp(ad 0) = id");
                for (int it = 0; it < 10 && t.ok; ++it) {
                    SVec s = {rng.field_element(F), rng.field_element(F), rng.field_element(F)};
                    DPElement f = random_dp(rng, g.O(), true);
                    ExpAdHandle H = g.exp_ad_tensor(s, f);
                    Coords a = g.rep().zero(), b = g.rep().zero();
                    for (auto& x : a) x = rng.field_element(F);
                    for (auto& x : b) x = rng.field_element(F);
                    SemiElement Ae = g.element_of(a), Be = g.element_of(b);
                    SemiElement lhs = g.apply_handle(H, g.bracket(Ae, Be));
                    SemiElement rhs = g.bracket(g.apply_handle(H, Ae), g.apply_handle(H, Be));
                    t.expect(g.equal(lhs, rhs), "A[x,y] = [Ax, Ay]");
                    SemiElement lp = g.apply_handle(H, g.pth(Ae));
                    SemiElement rp = g.pth(g.apply_handle(H, Ae));
                    t.expect(g.equal(lp, rp), "A(x^{[p]}) = A(x)^{[p]}");
                }
                bool rejected = false;
                try {
                    SVec h = g.S().unit(2);  // h is not nilpotent
                    (void)g.exp_ad_tensor(h, dp_one(g.O()));
                } catch (const std::exception&) {
                    rejected = true;
                }
                t.expect(rejected, "non-nilpotent constant tensor rejected");
                return t.result();
            });

        add("automorphisms", "demushkin-reduction",
            "normal form d_1 + x_1^{p-1} sum phi_i d_i with phi_i free of x_1; chain replay; "
            "p-power formula of the reduced form",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                const uint32_t p = 5;
                Prng rng = Prng::substream(cfg.seed, 505);
                DemushkinResult r0 = demushkin_reduce(deriv_partial(ctx, 0));
                t.expect(r0.form == deriv_partial(ctx, 0), "d_1 reduces to itself");
                // d_2 + ... : first step is a swap
                DerivationElement z2 = deriv_partial(ctx, 1);
                DemushkinResult r1 = demushkin_reduce(z2);
                t.expect(!r1.chain.empty() && std::holds_alternative<StepSwap>(r1.chain.front()),
                         "unit coefficient brought to d_1 by a swap");
                // d_1 + x_1 d_1: the sweep clears the degree-1 tail (the normal form may
                // keep top-degree phi-terms since the input is not nilpotent)
                DerivationElement z3 = deriv_add(deriv_partial(ctx, 0),
                                                 deriv_monomial(ctx, MultiIndex{{1, 0}}, 0, F.one()));
                DemushkinResult r2 = demushkin_reduce(z3);
                t.expect(F.is_zero(r2.form.part(0).coeff(ctx->rank_of({1, 0}))), "degree-1 tail cleared");
                t.expect(apply_chain_truncated(ctx, r2.chain, z3) == r2.form, "chain replay");
                WittRealization W(ctx);
                for (int it = 0; it < 12 && t.ok; ++it) {
                    DerivationElement z = random_outside_w0(rng, ctx);
                    DemushkinResult r = demushkin_reduce(z);
                    t.expect(apply_chain_truncated(ctx, r.chain, z) == r.form, "chain replay (random)");
                    // Shape and p-power formula z1^p = -(1 + x_1^{p-1} phi_1) sum phi_i d_i.
                    // In the divided basis, part(j) = x^((p-1)e_1) s_j with s_j = -phi_j
                    // (the plain power x_1^{p-1} carries the unit (p-1)! = -1), so the
                    // displayed formula reads z1^p = (1 + x^((p-1)e_1) s_1) sum s_j d_j.
                    DPElement s1(ctx), s2(ctx);
                    for (uint32_t j = 0; j < 2; ++j) {
                        for (const auto& [rank, c] : r.form.part(j).terms()) {
                            std::vector<uint32_t> a = ctx->index_of(rank);
                            if (j == 0 && MultiIndex{a}.total_degree() == 0) continue;
                            t.expect(a[0] == p - 1, "offending monomial left");
                            a[0] = 0;
                            (j == 0 ? s1 : s2).add_coeff(ctx->rank_of(a), c);
                        }
                    }
                    DPElement block = dp_monomial(ctx, MultiIndex{{p - 1, 0}}, F.one());
                    DPElement unit = dp_add(dp_one(ctx), dp_mul(block, s1));
                    DerivationElement expect(ctx);
                    expect.part(0) = dp_mul(unit, s1);
                    expect.part(1) = dp_mul(unit, s2);
                    t.expect(W.pth_power(r.form) == expect, "reduced-form p-th power formula");
                }
                return t.result();
            });

        add("automorphisms", "premet-reduction",
            "base cases, singular classification, and recovery of the chained derivation from conjugates",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                Prng rng = Prng::substream(cfg.seed, 506);
                DerivationElement D = chained_derivation(ctx, 2);
                PremetResult r = premet_regular_reduce(D);
                t.expect(r.regular, "chained derivation is regular");
                t.expect(apply_chain_truncated(ctx, r.chain, D) == r.form && r.form == D,
                         "identity-like chain on the normal form");
                // n = 1
                ShapePtr c1 = make_shape(1, {1}, ext_field_make(5, 1));
                PremetResult r1 = premet_regular_reduce(deriv_partial(c1, 0));
                t.expect(r1.regular && r1.form == deriv_partial(c1, 0), "n = 1 base case");
                // singular example: anything in W_(0) cap nilpotents
                DerivationElement sing(ctx);
                sing.part(1) = plain_monomial(ctx, {1, 0});  // x_1 d_2
                PremetResult rs = premet_regular_reduce(sing);
                t.expect(!rs.regular, "singular witness classified");
                t.expect(deriv_in_standard_maximal(rs.witness_power), "witness power in W_(0)");
                for (int it = 0; it < 8 && t.ok; ++it) {
                    TruncatedAutomorphism sigma = random_truncated(rng, ctx);
                    DerivationElement y = sigma.conjugate(D);
                    PremetResult rr = premet_regular_reduce(y);
                    t.expect(rr.regular, "conjugate of the chained derivation is regular");
                    t.expect(apply_chain_truncated(ctx, rr.chain, y) == D, "round trip to the chained form");
                }
                // conjugation preserves the nilpotency index; the stabilizer of the
                // chained derivation is trivial, so random non-identity maps move it
                WittRealization W(ctx);
                for (int it = 0; it < 6 && t.ok; ++it) {
                    TruncatedAutomorphism sigma = random_truncated(rng, ctx);
                    DerivationElement y = sigma.conjugate(D);
                    t.expect(W.nilpotency_index(y) == W.nilpotency_index(D),
                             "conjugation preserves the nilpotency index");
                    bool is_identity = true;
                    for (uint32_t i = 0; i < 2; ++i) is_identity &= sigma.image(i) == dp_var(ctx, i);
                    if (!is_identity) {
                        t.expect(!(y == D), "nontrivial maps move the chained derivation");
                    }
                }
                return t.result();
            });

        // ------------------------------------------------------------------
        // semidirect
        // ------------------------------------------------------------------
        add("semidirect", "construction-dimensions",
            "dim O(m;1) = p^m; dim sl2 loop algebra = 3p + 1; module checks W = I-coefficients; "
            "M = I + z(m) has dimension p^m - 1",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                SemidirectAlgebra g = make_sl2_loop_algebra(5);
                t.expect(g.dim() == 16, "dim((sl2 (x) O(1;1)) |x k d) = 3p + 1");
                SemidirectAlgebra L = make_sl2_witt_algebra(5, 2);
                t.expect(L.dim() == 3 * 25 + 50, "dim((sl2 (x) O(2;1)) |x W(2;1))");
                // M = I + z(m) for z = d_0 + u, s = 1, m = 2
                ShapePtr ctx = L.O();
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 601);
                DerivationElement d0 = chained_derivation(ctx, 1);
                // u in (I d_1 + I d_2) cap W_(p-1): coefficients in I with degree >= p
                auto random_u = [&](Prng& r) {
                    DerivationElement u(ctx);
                    for (uint32_t i = 0; i < 2; ++i) {
                        for (uint64_t rank = 0; rank < ctx->dim(); ++rank) {
                            std::vector<uint32_t> a = ctx->index_of(rank);
                            if (a[1] == 0) continue;                            // not in I = (x_2)
                            if (MultiIndex{a}.total_degree() < 5) continue;     // degree >= p
                            if (r.below(2) == 0) u.part(i).set_coeff(rank, r.field_element(F));
                        }
                    }
                    return u;
                };
                DerivationElement z = deriv_add(d0, random_u(rng));
                SpanBasis M(F, ctx->dim());
                for (uint64_t rank = 0; rank < ctx->dim(); ++rank) {
                    std::vector<uint32_t> a = ctx->index_of(rank);
                    if (a[1] > 0) {  // I basis
                        std::vector<FieldElement> v(ctx->dim(), F.zero());
                        v[rank] = F.one();
                        M.insert(std::move(v));
                    }
                }
                for (uint64_t rank = 1; rank < ctx->dim(); ++rank) {
                    DPElement img = witt_apply(z, dp_monomial(ctx, rank, F.one()));
                    std::vector<FieldElement> v(ctx->dim(), F.zero());
                    for (const auto& [rr, c] : img.terms()) v[rr] = c;
                    M.insert(std::move(v));
                }
                t.expect(M.rank() == 24, "dim M = p^m - 1, got " + std::to_string(M.rank()));
                std::vector<FieldElement> top(ctx->dim(), F.zero());
                top[ctx->rank_of({4, 0})] = F.one();
                t.expect(!M.contains(top), "x_1^{p-1}...x_s^{p-1} complements M");
                // W = I d_1 + I d_2 closed under bracket and p-th power, ad d_0 invariant
                WittRealization W(ctx);
                auto in_W = [&](const DerivationElement& E) {
                    for (uint32_t i = 0; i < 2; ++i) {
                        for (const auto& [rank, c] : E.part(i).terms()) {
                            (void)c;
                            if (ctx->index_of(rank)[1] == 0) return false;
                        }
                    }
                    return true;
                };
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DerivationElement u1 = random_u(rng), u2 = random_u(rng);
                    t.expect(in_W(witt_bracket(u1, u2)), "W bracket-closed");
                    t.expect(in_W(W.pth_power(u1)), "W p-closed");
                    t.expect(in_W(witt_bracket(d0, u1)), "W is ad d_0-invariant");
                    // z^{p^s} in W_(0) for z = d_0 + u (s = 1)
                    DerivationElement zz = deriv_add(d0, u1);
                    t.expect(deriv_in_standard_maximal(W.pth_power(zz)), "z^{p^s} in W_(0)");
                }
                return t.result();
            });

        add("semidirect", "bracket-and-pth",
            "socle bracket lifts, tail action, operator-route p-th powers, pure tensor rule, "
            "(h (x) g + c d)^p closed form",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                SemidirectAlgebra g = make_sl2_loop_algebra(5);
                const Fq& F = g.F();
                ShapePtr O = g.O();
                Prng rng = Prng::substream(cfg.seed, 602);
                SemiElement e1 = g.from_tensor(0, dp_one(O));
                SemiElement f1 = g.from_tensor(1, dp_one(O));
                SemiElement h1 = g.from_tensor(2, dp_one(O));
                t.expect(g.equal(g.bracket(e1, f1), h1), "[e (x) 1, f (x) 1] = h (x) 1");
                DPElement gg = random_dp(rng, O);
                SemiElement yg = g.from_tensor(0, gg);
                SemiElement del = g.from_tail(deriv_partial(O, 0));
                SemiElement lhs = g.bracket(yg, del);
                SemiElement rhs = g.scale(g.from_tensor(0, dp_partial(gg, 0)), F.from_int(-1));
                t.expect(g.equal(lhs, rhs), "[y (x) g, d] = -y (x) d(g)");
                // structure bracket equals the rep commutator
                for (int it = 0; it < 10 && t.ok; ++it) {
                    Coords a = g.rep().zero(), b = g.rep().zero();
                    for (auto& x : a) x = rng.field_element(F);
                    for (auto& x : b) x = rng.field_element(F);
                    SemiElement A = g.element_of(a), B = g.element_of(b);
                    t.expect(g.equal(g.bracket(A, A), g.zero()), "[A, A] = 0");
                    Coords br = g.rep().bracket(a, b);
                    t.expect(g.equal(g.bracket(A, B), g.element_of(br)), "structure vs operator bracket");
                    // Jacobi
                    Coords c = g.rep().zero();
                    for (auto& x : c) x = rng.field_element(F);
                    SemiElement C = g.element_of(c);
                    SemiElement jac = g.add(g.bracket(A, g.bracket(B, C)),
                                            g.add(g.bracket(B, g.bracket(C, A)),
                                                  g.bracket(C, g.bracket(A, B))));
                    t.expect(g.is_zero(jac), "Jacobi");
                }
                t.expect(g.equal(g.pth(h1), h1), "(h (x) 1)^{[p]} = h (x) 1");
                for (int it = 0; it < 10 && t.ok; ++it) {
                    DPElement gm = random_dp(rng, O, true);
                    SemiElement yme = g.from_tensor(static_cast<size_t>(rng.below(3)), gm);
                    t.expect(g.is_zero(g.pth(yme)), "(y (x) g)^{[p]} = 0 for g in m");
                    // pure tensor rule (y (x) g)^{[p]} = y^p (x) g^p on units too
                    SVec s = {rng.field_element(F), rng.field_element(F), rng.field_element(F)};
                    DPElement any = random_dp(rng, O);
                    SemiElement pure = g.zero();
                    for (size_t k = 0; k < 3; ++k) {
                        if (!F.is_zero(s[k])) pure.tensor[k] = dp_scale(any, s[k]);
                    }
                    SemiElement lhsp = g.pth(pure);
                    SVec sp = g.S().pth(s);
                    DPElement gp = dp_pow(any, 5);
                    SemiElement rhsp = g.zero();
                    for (size_t k = 0; k < 3; ++k) {
                        if (!F.is_zero(sp[k])) rhsp.tensor[k] = dp_scale(gp, sp[k]);
                    }
                    t.expect(g.equal(lhsp, rhsp), "(y (x) g)^{[p]} = y^p (x) g^p");
                }
                // bracket and restricted axioms in the larger ambient too
                {
                    SemidirectAlgebra L = make_sl2_witt_algebra(5, 2);
                    Prng rng2 = Prng::substream(cfg.seed, 612);
                    for (int it = 0; it < 4 && t.ok; ++it) {
                        Coords a = L.rep().zero(), b = L.rep().zero(), c = L.rep().zero();
                        for (auto& x : a) x = rng2.field_element(F);
                        for (auto& x : b) x = rng2.field_element(F);
                        for (auto& x : c) x = rng2.field_element(F);
                        SemiElement A = L.element_of(a), B = L.element_of(b), C = L.element_of(c);
                        SemiElement jac = L.add(L.bracket(A, L.bracket(B, C)),
                                                L.add(L.bracket(B, L.bracket(C, A)),
                                                      L.bracket(C, L.bracket(A, B))));
                        t.expect(L.is_zero(jac), "Jacobi in the W(2;1) ambient");
                        // ad(A^{[p]}) = (ad A)^p
                        SemiElement Ap = L.pth(A);
                        SemiElement adp = B;
                        for (int k = 0; k < 5; ++k) adp = L.bracket(A, adp);
                        t.expect(L.equal(L.bracket(Ap, B), adp), "restricted axiom in the big ambient");
                    }
                }
                // (h (x) g + c d)^p = h (x) (a_0^p - c^{p-1} a_{p-1})
                for (int it = 0; it < 20 && t.ok; ++it) {
                    DPElement poly(O);
                    std::vector<FieldElement> plain(5);
                    for (uint32_t k = 0; k < 5; ++k) plain[k] = rng.field_element(F);
                    // plain coefficients a_k of x^k: divided coeff = a_k * k!
                    for (uint32_t k = 0; k < 5; ++k) {
                        int64_t fact = 1;
                        for (uint32_t j = 2; j <= k; ++j) fact = fact * j % 5;
                        poly.set_coeff(k, F.mul(plain[k], F.from_int(fact)));
                    }
                    FieldElement c = rng.field_element(F);
                    SemiElement A = g.from_tensor(2, poly);
                    A.tail = deriv_scale(deriv_partial(O, 0), c);
                    SemiElement Ap = g.pth(A);
                    FieldElement coef = F.sub(F.pow(plain[0], 5), F.mul(F.pow(c, 4), plain[4]));
                    SemiElement expect = g.from_tensor(2, dp_scalar(O, coef));
                    t.expect(g.equal(Ap, expect), "(h (x) g + c d)^p closed form");
                }
                return t.result();
            });

        add("semidirect", "exp-ad-closed-forms",
            "exp(ad(y (x) g)) d exp(-ad(y (x) g)) = d - y (x) d(g) - y^p (x) g^{p-1} d(g); "
            "tail formula in (sl2 (x) O(2;1)) |x W(2;1)",
            true, [](const VerifyConfig& cfg) {
                Tally t;
                SemidirectAlgebra g = make_sl2_loop_algebra(5);
                const Fq& F = g.F();
                ShapePtr O = g.O();
                Prng rng = Prng::substream(cfg.seed, 603);
                for (int it = 0; it < 200 && t.ok; ++it) {
                    SVec y = {rng.field_element(F), rng.field_element(F), rng.field_element(F)};
                    DPElement gm = random_dp(rng, O, true);
                    ExpAdHandle H = g.exp_ad_tensor(y, gm);
                    SemiElement del = g.from_tail(deriv_partial(O, 0));
                    SemiElement lhs = g.apply_handle(H, del);
                    DPElement dg = dp_partial(gm, 0);
                    SemiElement rhs = del;
                    SVec yp = g.S().pth(y);
                    DPElement tail_poly = dp_mul(dp_pow(gm, 4), dg);
                    for (size_t k = 0; k < 3; ++k) {
                        if (!F.is_zero(y[k])) rhs.tensor[k] = dp_sub(rhs.tensor[k], dp_scale(dg, y[k]));
                        if (!F.is_zero(yp[k])) {
                            rhs.tensor[k] = dp_sub(rhs.tensor[k], dp_scale(tail_poly, yp[k]));
                        }
                    }
                    t.expect(g.equal(lhs, rhs), "conjugated d closed form at iteration " + std::to_string(it));
                    // nilpotent socle factor variant: y in N(sl2), g arbitrary
                    SVec e = g.S().unit(0);
                    DPElement any = random_dp(rng, O);
                    ExpAdHandle He = g.exp_ad_tensor(e, any);
                    SemiElement lhs2 = g.apply_handle(He, del);
                    DPElement dany = dp_partial(any, 0);
                    SemiElement rhs2 = del;
                    rhs2.tensor[0] = dp_sub(rhs2.tensor[0], dany);  // e^p = 0 kills the last term
                    t.expect(g.equal(lhs2, rhs2), "nilpotent-socle conjugation drops the p-term");
                }
                SemidirectAlgebra L = make_sl2_witt_algebra(5, 2);
                ShapePtr O2 = L.O();
                for (int it = 0; it < 200 && t.ok; ++it) {
                    SVec s = {rng.field_element(F), rng.field_element(F), rng.field_element(F)};
                    DPElement f = random_sparse_dp(rng, O2, 4, true);
                    DerivationElement d1 = random_derivation(rng, O2);
                    ExpAdHandle H = L.exp_ad_tensor(s, f);
                    SemiElement lhs = L.apply_handle(H, L.from_tail(d1));
                    DPElement d1f = witt_apply(d1, f);
                    SemiElement rhs = L.from_tail(d1);
                    SVec sp = L.S().pth(s);
                    DPElement tail_poly = dp_mul(dp_pow(f, 4), d1f);
                    for (size_t k = 0; k < 3; ++k) {
                        if (!F.is_zero(s[k])) rhs.tensor[k] = dp_sub(rhs.tensor[k], dp_scale(d1f, s[k]));
                        if (!F.is_zero(sp[k])) {
                            rhs.tensor[k] = dp_sub(rhs.tensor[k], dp_scale(tail_poly, sp[k]));
                        }
                    }
                    t.expect(L.equal(lhs, rhs), "tail conjugation formula at iteration " + std::to_string(it));
                }
                return t.result();
            });

        add("semidirect", "nilpotency-criterion",
            "direct operator nilpotency agrees with the socle-coefficient criteria on seeded elements; "
            "nilpotents satisfy a^{p^2} = 0",
            true, [](const VerifyConfig& cfg) {
                Tally t;
                SemidirectAlgebra g = make_sl2_loop_algebra(5);
                const Fq& F = g.F();
                Prng rng = Prng::substream(cfg.seed, 604);
                uint64_t nilcount = 0;
                for (int it = 0; it < 2000 && t.ok; ++it) {
                    Coords a = g.rep().zero();
                    for (auto& x : a) x = rng.field_element(F);
                    SemiElement A = g.element_of(a);
                    SemidirectAlgebra::NilpotencyVerdict v;
                    try {
                        v = g.is_nilpotent(A);
                    } catch (const std::logic_error& e) {
                        t.expect(false, std::string("criterion disagreement: ") + e.what());
                        break;
                    }
                    if (v.direct) {
                        ++nilcount;
                        t.expect(g.is_zero(g.pth_iter(A, 2)), "a^{p^2} = 0 for nilpotent a");
                    }
                }
                t.expect(nilcount > 0, "sample found no nilpotents");
                // named instances: h (x) 1 not nilpotent, e (x) 1 nilpotent (zero tail)
                SemiElement h1 = g.from_tensor(2, dp_one(g.O()));
                t.expect(!g.is_nilpotent(h1).direct, "h (x) 1 not nilpotent");
                SemiElement e1 = g.from_tensor(0, dp_one(g.O()));
                t.expect(g.is_nilpotent(e1).direct, "e (x) 1 nilpotent");
                return t.result();
            });

        add("semidirect", "reduction",
            "tensor clearing to s_0' (x) top + v' + z; replay; for m = 1 the a^p = (p-1)! c^{p-1} b law",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                SemidirectAlgebra g = make_sl2_loop_algebra(5);
                const Fq& F = g.F();
                ShapePtr O = g.O();
                Prng rng = Prng::substream(cfg.seed, 605);
                // zero tensor part: no steps
                SemiElement pure_tail = g.from_tail(deriv_partial(O, 0));
                auto r0 = g.semi_reduce(pure_tail);
                t.expect(r0.steps.empty() && g.equal(r0.form, pure_tail), "identity chain on pure tails");
                for (int it = 0; it < 25 && t.ok; ++it) {
                    FieldElement lam = rng.nonzero_field_element(F);
                    SemiElement A = g.zero();
                    A.tail = deriv_scale(deriv_partial(O, 0), lam);
                    for (size_t k = 0; k < 3; ++k) A.tensor[k] = random_dp(rng, O);
                    auto r = g.semi_reduce(A);
                    t.expect(g.equal(g.apply_reduce_steps(r.steps, A), r.form), "replay");
                    for (size_t k = 0; k < 3 && t.ok; ++k) {
                        for (const auto& [rank, c] : r.form.tensor[k].terms()) {
                            (void)c;
                            t.expect(rank == 4, "residual support is the top monomial only");
                        }
                    }
                    // autg1 criterion at the reduced form a = c d + b (x) x^{p-1}:
                    // a^p = (p-1)! c^{p-1} b (x) 1 and nilpotent iff b nilpotent
                    SVec b = r.top_coeff;
                    // top monomial in the plain convention: x^{p-1} = (p-1)! x^(4)
                    FieldElement fact = F.from_int(-1);  // (p-1)! = -1
                    SVec b_plain = g.S().scale(b, fact);
                    SemiElement ap = g.pth(r.form);
                    SemiElement expect = g.zero();
                    FieldElement coef = F.mul(fact, F.pow(lam, 4));
                    SVec ebv = g.S().scale(b_plain, coef);
                    for (size_t k = 0; k < 3; ++k) {
                        if (!F.is_zero(ebv[k])) expect.tensor[k] = dp_scalar(O, ebv[k]);
                    }
                    t.expect(g.equal(ap, expect), "a^p = (p-1)! c^{p-1} b");
                    bool direct = g.is_nilpotent_direct(A);
                    t.expect(direct == g.S().is_nilpotent(b), "nilpotent iff the top coefficient is");
                }
                return t.result();
            });

        // ------------------------------------------------------------------
        // zassenhaus
        // ------------------------------------------------------------------
        add("zassenhaus", "envelope-brackets",
            "[d^p, x^(a) d] = x^(a-p) d; tails commute; restricted axioms on random triples", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {3}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                for (uint64_t a = 0; a < ctx->dim(); ++a) {
                    PEnvelopeElement lhs = lp_bracket(lp_partial_power(ctx, 1),
                                                      lp_from_poly(dp_monomial(ctx, a, F.one())));
                    PEnvelopeElement rhs = a >= 5 ? lp_from_poly(dp_monomial(ctx, a - 5, F.one()))
                                                  : lp_zero(ctx);
                    t.expect(lhs == rhs, "[d^p, x^(a) d]");
                }
                t.expect(lp_is_zero(lp_bracket(lp_partial_power(ctx, 1), lp_partial_power(ctx, 2))),
                         "[d^p, d^{p^2}] = 0");
                Prng rng = Prng::substream(cfg.seed, 701);
                ShapePtr c2 = make_shape(1, {2}, ext_field_make(5, 1));
                for (int it = 0; it < 10 && t.ok; ++it) {
                    PEnvelopeElement A = random_lp(rng, c2), B = random_lp(rng, c2), C = random_lp(rng, c2);
                    PEnvelopeElement jac =
                        lp_add(lp_bracket(A, lp_bracket(B, C)),
                               lp_add(lp_bracket(B, lp_bracket(C, A)), lp_bracket(C, lp_bracket(A, B))));
                    t.expect(lp_is_zero(jac), "Jacobi");
                    // bracket equals the operator commutator
                    FqMatrix lhs = lp_operator(lp_bracket(A, B));
                    FqMatrix a = lp_operator(A), b = lp_operator(B);
                    t.expect(lhs == a.mul(b).sub(b.mul(a)), "operator commutator oracle");
                    // ad(x^{[p]}) = (ad x)^p
                    PEnvelopeElement Ap = lp_pth(A);
                    PEnvelopeElement adp = B;
                    for (int k = 0; k < 5; ++k) adp = lp_bracket(A, adp);
                    t.expect(lp_bracket(Ap, B) == adp, "restricted axiom");
                }
                // d^{[p]^n} = 0 and (d + sum a_i d^{p^i})^{p^{n-1}} = d^{p^{n-1}}
                PEnvelopeElement d = lp_from_poly(dp_one(c2));
                t.expect(lp_is_zero(lp_pth_iter(d, 2)), "d^{[p]^n} = 0");
                for (int it = 0; it < 10; ++it) {
                    PEnvelopeElement A = lp_from_poly(dp_one(c2));
                    A.tails[0] = rng.field_element(F);
                    t.expect(lp_pth(A) == lp_partial_power(c2, 1), "(d + a d^p)^{p^{n-1}} = d^{p^{n-1}}");
                }
                return t.result();
            });

        add("zassenhaus", "yao-shu-reduction",
            "alpha_0 d + f d reduces to d + sum l_i x^(p^i - 1) d; replay; regular consequence", false,
            [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 702);
                auto r0 = yao_shu_reduce(lp_from_poly(dp_one(ctx)));
                t.expect(r0.chain.steps.empty() && r0.form == lp_from_poly(dp_one(ctx)),
                         "d reduces to itself");
                for (int it = 0; it < 20 && t.ok; ++it) {
                    PEnvelopeElement D = lp_from_poly(
                        dp_add(dp_scalar(ctx, rng.nonzero_field_element(F)), random_dp(rng, ctx, true)));
                    auto r = yao_shu_reduce(D);
                    t.expect(apply_admissible_chain(r.chain, D) == r.form, "chain replay");
                    for (const auto& [rank, c] : r.form.poly.terms()) {
                        (void)c;
                        t.expect(rank == 0 || rank == 4 || rank == 24,
                                 "support {d, x^(4) d, x^(24) d}, got rank " + std::to_string(rank));
                    }
                    if (lp_is_nilpotent(D)) {
                        // regular consequence: D^{p^{n-1}} outside L_(0)
                        t.expect(!lp_in_L0(lp_pth_iter(r.form, 1)), "nilpotent reduced form stays regular");
                    }
                }
                return t.result();
            });

        add("zassenhaus", "tyurin-reduction",
            "d^{p^t} + tails + g d reduces to tails + x^(p^n - p^t) h(x) d with untouched tails; replay",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 703);
                PEnvelopeElement base = lp_partial_power(ctx, 1);
                auto r0 = tyurin_reduce(base, 1);
                t.expect(r0.chain.steps.empty() && r0.form == base, "g = 0: identity chain");
                for (int it = 0; it < 20 && t.ok; ++it) {
                    PEnvelopeElement D = lp_partial_power(ctx, 1);
                    D.poly = dp_add(dp_scalar(ctx, rng.field_element(F)), random_dp(rng, ctx, true));
                    auto r = tyurin_reduce(D, 1);
                    t.expect(apply_admissible_chain(r.chain, D) == r.form, "chain replay");
                    t.expect(r.form.tails == D.tails, "tails unchanged");
                    t.expect(r.form.poly.coeff(0) == D.poly.coeff(0), "beta_0 unchanged");
                    for (const auto& [rank, c] : r.form.poly.terms()) {
                        (void)c;
                        t.expect(rank == 0 || rank >= 20, "support in {0} or [p^n - p^t, p^n)");
                    }
                }
                // one named step: g(x) d = gamma_1 x d cleared by x + gamma_1 x^(p^t + 1)
                PEnvelopeElement D1 = lp_partial_power(ctx, 1);
                FieldElement gamma = F.from_int(3);
                D1.poly = dp_monomial(ctx, 1, gamma);
                AdmissibleAutomorphism Phi = AdmissibleAutomorphism::one_term(ctx, 6, gamma);
                PEnvelopeElement img = admissible_apply_lp(Phi, D1);
                t.expect(F.is_zero(img.poly.coeff(1)), "one-term step clears gamma_1 x d");
                return t.result();
            });

        add("zassenhaus", "e-algebra-torus",
            "[e_0, e_b] = b e_b; Jacobi on basis triples; dim L_p = p^n + n - 1; e_0 torus data", true,
            [](const VerifyConfig&) {
                Tally t;
                ZassenhausEAlgebra z = ZassenhausEAlgebra::build(5, 2, 2);
                const Fq& F = z.F();
                t.expect(z.lp_dim() == 26, "dim L_p = p^n + (n-1), got " + std::to_string(z.lp_dim()));
                size_t zero = z.subfield_index(F.zero());
                for (size_t j = 0; j < z.q() && t.ok; ++j) {
                    Coords lhs = z.Lp().bracket(z.e_coords(zero), z.e_coords(j));
                    Coords rhs = z.Lp().scale(z.e_coords(j), z.subfield()[j]);
                    t.expect(lhs == rhs, "[e_0, e_b] = b e_b");
                }
                Prng rng(99);
                for (int it = 0; it < 30 && t.ok; ++it) {
                    size_t a = rng.below(z.q()), b = rng.below(z.q()), c = rng.below(z.q());
                    Coords jac = z.Lp().add(
                        z.Lp().bracket(z.e_coords(a), z.Lp().bracket(z.e_coords(b), z.e_coords(c))),
                        z.Lp().add(
                            z.Lp().bracket(z.e_coords(b), z.Lp().bracket(z.e_coords(c), z.e_coords(a))),
                            z.Lp().bracket(z.e_coords(c), z.Lp().bracket(z.e_coords(a), z.e_coords(b)))));
                    t.expect(z.Lp().is_zero_coords(jac), "Jacobi");
                }
                E0TorusReport rep = e0_torus(z);
                t.expect(rep.periodicity, "e_0^{p^n} = e_0");
                t.expect(rep.independent, "e_0, ..., e_0^{p^{n-1}} independent");
                t.expect(rep.abelian, "[e_0^{p^i}, e_0^{p^j}] = 0");
                t.expect(rep.semisimple_rank == 2, "semisimple rank n");
                auto [e0s, e0n] = z.Lp().jordan_chevalley(z.e_coords(zero));
                t.expect(e0s == z.e_coords(zero) && z.Lp().is_zero_coords(e0n),
                         "e_0 splits as (e_0, 0)");
                return t.result();
            });

        add("zassenhaus", "sigma-grading",
            "sigma(e_a) = xi^{-1} e_{xi a} is an automorphism of order p^n - 1 whose eigenvalue "
            "multiplicities are all 1 except xi^{-1} (multiplicity 2)",
            true, [](const VerifyConfig&) {
                Tally t;
                ZassenhausEAlgebra z = ZassenhausEAlgebra::build(5, 2, 2);
                SigmaReport rep = sigma_grading_check(z);
                t.expect(rep.automorphism, "sigma respects brackets");
                t.expect(rep.periodic, "sigma^{p^n - 1} = id");
                t.expect(rep.multiplicities, "eigenvalue multiplicity table");
                return t.result();
            });

        add("zassenhaus", "lie-g-dimension",
            "Lie(G) has basis {x^(i+1) d : i + 1 not a p-power}: dimension p^n - n with matching tangents",
            true, [](const VerifyConfig&) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                LieGReport rep = lie_g_check(ctx);
                t.expect(rep.tangents_match, "one-parameter tangents equal d_i");
                t.expect(rep.span_dim == rep.expected_dim && rep.expected_dim == 23,
                         "dim Lie(G) = 23, got " + std::to_string(rep.span_dim));
                return t.result();
            });

        add("zassenhaus", "separation-check",
            "V = T + k u meets N_sing only in 0 across all F_{25}-points (15625 of them)", true,
            [](const VerifyConfig& cfg) {
                Tally t;
                SeparationReport rep = singular_separation_check(5, 2, 2, cfg.workers);
                t.expect(rep.u_found, "sigma-fixed line found");
                t.expect(rep.u_toral, "u normalized toral");
                t.expect(rep.points == 15625, "point count");
                t.expect(rep.singular_nonzero == 0,
                         "V cap N_sing = {0}; offenders: " + std::to_string(rep.singular_nonzero));
                return t.result();
            });

        add("zassenhaus", "classifier",
            "regular/singular split by D^{p^{n-1}} mod L_(0); named instances and admissible invariance",
            true, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                const Fq& F = ctx->F();
                Prng rng = Prng::substream(cfg.seed, 704);
                // named: d + c d^p regular
                PEnvelopeElement reg = lp_from_poly(dp_one(ctx));
                reg.tails[0] = rng.field_element(F);
                NilpotentClass c1 = classify_nilpotent(reg);
                t.expect(c1.regular, "d + c d^p is regular");
                // named: anything in L_(1) is singular
                PEnvelopeElement sing = lp_from_poly(dp_monomial(ctx, 2, F.one()));
                NilpotentClass c2 = classify_nilpotent(sing);
                t.expect(!c2.regular, "L_(1) elements are singular");
                // named: d^{p^{n-1}} + x^(p^n - p^{n-1}) sum_{eta >= 2} nu_eta x^(eta) d
                PEnvelopeElement mixed = lp_partial_power(ctx, 1);
                mixed.poly = dp_add(dp_monomial(ctx, 22, F.from_int(2)), dp_monomial(ctx, 23, F.from_int(1)));
                if (lp_is_nilpotent(mixed)) {
                    NilpotentClass c3 = classify_nilpotent(mixed);
                    t.expect(!c3.regular, "mu_0 = mu_1 = 0 branch is singular");
                }
                // invariance under 200 seeded conjugations
                uint32_t tested = 0;
                while (tested < 200 && t.ok) {
                    PEnvelopeElement D = random_lp(rng, ctx);
                    if (!lp_is_nilpotent(D)) continue;
                    ++tested;
                    NilpotentClass before = classify_nilpotent(D);
                    AdmissibleAutomorphism Phi = random_admissible(rng, ctx);
                    PEnvelopeElement D2 = admissible_apply_lp(Phi, D);
                    t.expect(lp_is_nilpotent(D2), "conjugate stays nilpotent");
                    NilpotentClass after = classify_nilpotent(D2);
                    t.expect(before.regular == after.regular, "class is G-invariant");
                }
                // nilpotency bound: D^{p^n} = 0 on sampled nilpotents
                for (int it = 0; it < 50; ++it) {
                    PEnvelopeElement D = random_lp(rng, ctx);
                    if (!lp_is_nilpotent(D)) continue;
                    t.expect(lp_is_zero(lp_pth_iter(D, 2)), "nilpotency index bound n");
                }
                // the beta_0 != 0 branch: sampled nilpotents d^{p^{n-1}} + beta_0 d + g d
                // have D^{p^{n-1}} nonzero, square-zero, and outside L_(0)
                uint32_t branch = 0;
                while (branch < 25) {
                    PEnvelopeElement D = lp_partial_power(ctx, 1);
                    D.poly = dp_add(dp_scalar(ctx, rng.nonzero_field_element(F)),
                                    random_dp(rng, ctx, true));
                    if (!lp_is_nilpotent(D)) continue;
                    ++branch;
                    PEnvelopeElement W = lp_pth(D);  // n = 2: the p^{n-1}-th power
                    t.expect(!lp_is_zero(W), "witness power nonzero on the beta_0 branch");
                    t.expect(lp_is_zero(lp_pth(W)), "witness power is square-zero");
                    t.expect(!lp_in_L0(W), "witness power outside L_(0)");
                }
                return t.result();
            });

        add("zassenhaus", "embedding-checks",
            "the digit bijection intertwines products and brackets; iota(d) is the signed chained "
            "derivation; centralizer dimensions",
            false, [](const VerifyConfig& cfg) {
                Tally t;
                ShapePtr src = make_shape(1, {2}, ext_field_make(5, 1));
                ShapePtr dst = make_shape(2, {1, 1}, ext_field_make(5, 1));
                const Fq& F = src->F();
                Prng rng = Prng::substream(cfg.seed, 705);
                for (int it = 0; it < 20 && t.ok; ++it) {
                    DPElement a = random_dp(rng, src), b = random_dp(rng, src);
                    t.expect(iota_poly(dp_mul(a, b), dst) == dp_mul(iota_poly(a, dst), iota_poly(b, dst)),
                             "algebra isomorphism");
                }
                PEnvelopeElement d = lp_from_poly(dp_one(src));
                DerivationElement img = iota_embed(d, dst);
                DerivationElement expect(dst);
                expect.part(0) = dp_one(dst);
                expect.part(1) = dp_neg(plain_monomial(dst, {4, 0}));  // -x_1^{p-1} d_2
                t.expect(img == expect, "iota(d) = d_1 - x_1^{p-1} d_2");
                // image of the reduced unit-led form:
                // iota(d + sum l_i x^(p^i - 1) d) = iota(d) + sum (-1)^i l_i x_1^{p-1}..x_i^{p-1} d_1
                for (int it = 0; it < 5 && t.ok; ++it) {
                    FieldElement l1 = rng.field_element(F), l2 = rng.field_element(F);
                    PEnvelopeElement red = lp_from_poly(dp_add(
                        dp_one(src),
                        dp_add(dp_monomial(src, 4, l1), dp_monomial(src, 24, l2))));
                    DerivationElement lhs = iota_embed(red, dst);
                    DerivationElement rhs = expect;
                    rhs.part(0) = dp_add(rhs.part(0),
                                         dp_scale(plain_monomial(dst, {4, 0}), F.neg(l1)));
                    rhs.part(0) = dp_add(rhs.part(0), dp_scale(plain_monomial(dst, {4, 4}), l2));
                    t.expect(lhs == rhs, "iota image of the reduced unit-led form");
                }
                for (int it = 0; it < 10 && t.ok; ++it) {
                    PEnvelopeElement A = random_lp(rng, src), B = random_lp(rng, src);
                    t.expect(iota_embed(lp_bracket(A, B), dst) ==
                                 witt_bracket(iota_embed(A, dst), iota_embed(B, dst)),
                             "iota is a Lie homomorphism");
                    WittRealization W(dst);
                    t.expect(lp_is_nilpotent(A) == W.is_nilpotent(iota_embed(A, dst)),
                             "nilpotency transfers through iota");
                }
                // centralizers of d + sum l_i d^{p^i}: dim 1 in L, dim n in L_p
                PEnvelopeElement D = lp_from_poly(dp_one(src));
                D.tails[0] = rng.field_element(F);
                const uint64_t q = src->dim();
                auto coords = [&](const PEnvelopeElement& A) {
                    std::vector<FieldElement> v(q + 1, F.zero());
                    for (const auto& [rank, c] : A.poly.terms()) v[rank] = c;
                    v[q] = A.tails[0];
                    return v;
                };
                {
                    FqMatrix M(F, q + 1, q);
                    for (uint64_t j = 0; j < q; ++j) {
                        auto col = coords(lp_bracket(D, lp_from_poly(dp_monomial(src, j, F.one()))));
                        for (uint64_t i = 0; i <= q; ++i) M.at(i, j) = col[i];
                    }
                    t.expect(M.kernel().cols() == 1, "centralizer in L has dimension 1");
                }
                {
                    FqMatrix M(F, q + 1, q + 1);
                    for (uint64_t j = 0; j <= q; ++j) {
                        PEnvelopeElement bj = j < q ? lp_from_poly(dp_monomial(src, j, F.one()))
                                                    : lp_partial_power(src, 1);
                        auto col = coords(lp_bracket(D, bj));
                        for (uint64_t i = 0; i <= q; ++i) M.at(i, j) = col[i];
                    }
                    t.expect(M.kernel().cols() == 2, "centralizer in L_p has dimension n");
                }
                return t.result();
            });

        add("zassenhaus", "brute-force-w11",
            "all 3125 elements of W(1;1): direct nilpotency count equals the psi_0-vanishing count; "
            "the nilpotent set is conical",
            true, [](const VerifyConfig&) {
                Tally t;
                BruteReport rep = brute_force_w11(5);
                t.expect(rep.relation_holds, "D^{[p]} = psi_0(D) D for every element");
                t.expect(rep.direct == rep.psi_zero,
                         "counts disagree: direct " + std::to_string(rep.direct) + " vs psi " +
                             std::to_string(rep.psi_zero));
                t.expect(rep.conical, "nilpotent set closed under scaling");
                t.expect(rep.total == 3125, "full enumeration");
                return t.result();
            });

        add("zassenhaus", "reduction-roundtrips",
            "100 seeded round trips for each reduction: demushkin (m=2), premet (n=2), yao-shu and "
            "tyurin (n=2), semidirect (m=2, s=1)",
            true, [](const VerifyConfig& cfg) {
                Tally t;
                const uint32_t rounds = 100;
                // demushkin
                {
                    ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                    Prng rng = Prng::substream(cfg.seed, 706);
                    for (uint32_t it = 0; it < rounds && t.ok; ++it) {
                        DerivationElement z = random_outside_w0(rng, ctx);
                        DemushkinResult r = demushkin_reduce(z);
                        t.expect(apply_chain_truncated(ctx, r.chain, z) == r.form, "demushkin replay");
                    }
                }
                // premet
                {
                    ShapePtr ctx = make_shape(2, {1, 1}, ext_field_make(5, 1));
                    Prng rng = Prng::substream(cfg.seed, 707);
                    DerivationElement D = chained_derivation(ctx, 2);
                    for (uint32_t it = 0; it < rounds && t.ok; ++it) {
                        TruncatedAutomorphism sigma = random_truncated(rng, ctx);
                        DerivationElement y = sigma.conjugate(D);
                        PremetResult r = premet_regular_reduce(y);
                        t.expect(r.regular, "premet conjugate regular");
                        t.expect(apply_chain_truncated(ctx, r.chain, y) == r.form && r.form == D,
                                 "premet replay");
                    }
                }
                // yao-shu and tyurin
                {
                    ShapePtr ctx = make_shape(1, {2}, ext_field_make(5, 1));
                    const Fq& F = ctx->F();
                    Prng rng = Prng::substream(cfg.seed, 708);
                    for (uint32_t it = 0; it < rounds && t.ok; ++it) {
                        PEnvelopeElement D = lp_from_poly(
                            dp_add(dp_scalar(ctx, rng.nonzero_field_element(F)), random_dp(rng, ctx, true)));
                        auto r = yao_shu_reduce(D);
                        t.expect(apply_admissible_chain(r.chain, D) == r.form, "yao-shu replay");
                        for (const auto& [rank, c] : r.form.poly.terms()) {
                            (void)c;
                            t.expect(rank == 0 || rank == 4 || rank == 24, "yao-shu support");
                        }
                        PEnvelopeElement E = lp_partial_power(ctx, 1);
                        E.poly = dp_add(dp_scalar(ctx, rng.field_element(F)), random_dp(rng, ctx, true));
                        auto r2 = tyurin_reduce(E, 1);
                        t.expect(apply_admissible_chain(r2.chain, E) == r2.form, "tyurin replay");
                        for (const auto& [rank, c] : r2.form.poly.terms()) {
                            (void)c;
                            t.expect(rank == 0 || rank >= 20, "tyurin support");
                        }
                    }
                }
                // semidirect with ambient (sl2 (x) O(2;1)) |x W(2;1), s = 1
                {
                    SemidirectAlgebra L = make_sl2_witt_algebra(5, 2);
                    ShapePtr ctx = L.O();
                    const Fq& F = ctx->F();
                    Prng rng = Prng::substream(cfg.seed, 709);
                    DerivationElement d0 = chained_derivation(ctx, 1);
                    for (uint32_t it = 0; it < rounds && t.ok; ++it) {
                        DerivationElement u(ctx);
                        for (uint32_t i = 0; i < 2; ++i) {
                            for (uint64_t rank = 0; rank < ctx->dim(); ++rank) {
                                std::vector<uint32_t> a = ctx->index_of(rank);
                                if (a[1] == 0 || MultiIndex{a}.total_degree() < 5) continue;
                                if (rng.below(2) == 0) u.part(i).set_coeff(rank, rng.field_element(F));
                            }
                        }
                        SemiElement A = L.zero();
                        A.tail = deriv_add(deriv_scale(d0, rng.nonzero_field_element(F)), u);
                        for (size_t k = 0; k < 3; ++k) A.tensor[k] = random_sparse_dp(rng, ctx, 6, false);
                        auto r = L.semi_reduce(A);
                        t.expect(L.equal(L.apply_reduce_steps(r.steps, A), r.form), "semidirect replay");
                        t.expect(r.tail_form.s == 1, "detected head length");
                        // residual O(s;1)-support is only the top monomial x_1^{p-1}
                        for (size_t k = 0; k < 3 && t.ok; ++k) {
                            for (const auto& [rank, c] : r.form.tensor[k].terms()) {
                                (void)c;
                                std::vector<uint32_t> a = ctx->index_of(rank);
                                bool in_I = a[1] > 0;
                                t.expect(in_I || (a[0] == 4 && a[1] == 0), "semidirect residual shape");
                            }
                        }
                    }
                }
                return t.result();
            });

        return R;
    }();
    return registry;
}

VerifySummary run_verify(const VerifyConfig& cfg, const std::string& suite, std::ostream& out,
                         bool json) {
    VerifySummary summary;
    bool first = true;
    if (json) out << "{\"schema\":1,\"checks\":[";
    for (const auto& check : verify_registry()) {
        bool selected = suite == "all" || suite == check.suite ||
                        (suite == "acceptance" && check.acceptance);
        if (!selected) continue;
        CheckResult res;
        try {
            res = check.run(cfg);
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        ++summary.ran;
        if (!res.pass) ++summary.failed;
        if (json) {
            if (!first) out << ",";
            out << "{\"suite\":\"" << check.suite << "\",\"name\":\"" << check.name
                << "\",\"pass\":" << (res.pass ? "true" : "false") << ",\"detail\":\"" << res.detail
                << "\"}";
        } else {
            out << (res.pass ? "PASS" : "FAIL") << "  [" << check.suite << "] " << check.name << " — "
                << check.statement;
            if (!res.detail.empty()) out << "\n      " << res.detail;
            out << "\n";
        }
        first = false;
    }
    if (json) {
        out << "],\"ran\":" << summary.ran << ",\"failed\":" << summary.failed << "}\n";
    } else {
        out << (summary.failed == 0 ? "OK" : "FAILED") << ": " << (summary.ran - summary.failed) << "/"
            << summary.ran << " checks passed\n";
    }
    return summary;
}

}  // namespace modlie
