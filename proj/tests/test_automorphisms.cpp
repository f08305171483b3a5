#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modlie/automorphisms.hpp"
#include "modlie/prng.hpp"

using namespace modlie;

namespace {
ShapePtr O21() { return make_shape(2, {1, 1}, ext_field_make(5, 1)); }
ShapePtr O12() { return make_shape(1, {2}, ext_field_make(5, 1)); }
}  // namespace

TEST_CASE("truncated automorphism validation") {
    ShapePtr s = O21();
    const Fq& F = s->F();
    // image outside the maximal ideal
    CHECK_THROWS_AS(TruncatedAutomorphism::make(s, {dp_one(s), dp_var(s, 1)}), std::invalid_argument);
    // singular linear part
    CHECK_THROWS_AS(TruncatedAutomorphism::make(s, {dp_var(s, 0), dp_var(s, 0)}), std::invalid_argument);
    // composing with the inverse gives the identity
    auto sigma = TruncatedAutomorphism::make(
        s, {dp_add(dp_var(s, 0), dp_monomial(s, MultiIndex{{1, 1}}, F.one())),
            dp_add(dp_var(s, 1), dp_monomial(s, MultiIndex{{2, 0}}, F.from_int(3)))});
    auto composed = sigma.compose(sigma.inverse());
    for (uint32_t i = 0; i < 2; ++i) CHECK(composed.image(i) == dp_var(s, i));
}

TEST_CASE("chain steps and serialization") {
    ShapePtr s = O21();
    const Fq& F = s->F();
    AutoChain chain;
    chain.push_back(StepSwap{0, 1});
    chain.push_back(StepScale{0, F.from_int(3)});
    chain.push_back(StepShift{1, dp_var(s, 0)});
    std::string text = chain_to_string(chain, F);
    CHECK(text.find("swap(1,2)") != std::string::npos);
    CHECK(text.find("scale(1,3)") != std::string::npos);
    CHECK(text.find("shift(2,") != std::string::npos);
    // applying swap twice is the identity
    DerivationElement D = chained_derivation(s, 2);
    AutoChain twice = {StepSwap{0, 1}, StepSwap{0, 1}};
    CHECK(apply_chain_truncated(s, twice, D) == D);
    // admissible steps cannot run on W(m;1)
    AutoChain bad = {StepAdmissible{{F.one()}}};
    CHECK_THROWS_AS(apply_chain_truncated(s, bad, D), std::invalid_argument);
}

TEST_CASE("demushkin preconditions") {
    ShapePtr s = O21();
    DerivationElement inside(s);
    inside.part(0) = dp_var(s, 0);  // x_1 d_1 lies in W_(0)
    CHECK_THROWS_AS(demushkin_reduce(inside), std::invalid_argument);
    ShapePtr tall = make_shape(1, {2}, ext_field_make(5, 1));
    CHECK_THROWS_AS(demushkin_reduce(deriv_partial(tall, 0)), std::invalid_argument);
}

TEST_CASE("premet preconditions and caps") {
    ShapePtr s = O21();
    DerivationElement toral = deriv_monomial(s, MultiIndex{{1, 0}}, 0, s->F().one());
    CHECK_THROWS_AS(premet_regular_reduce(toral), std::invalid_argument);  // not nilpotent
    ShapePtr big = make_shape(4, {1, 1, 1, 1}, ext_field_make(5, 1));
    CHECK_THROWS_AS(premet_regular_reduce(deriv_partial(big, 0)), std::invalid_argument);  // m > 3
}

TEST_CASE("premet at n = 3 recovers the chained derivation") {
    ShapePtr s = make_shape(3, {1, 1, 1}, ext_field_make(5, 1));
    const Fq& F = s->F();
    DerivationElement D = chained_derivation(s, 3);
    Prng rng(31);
    // structured conjugate
    auto sigma = TruncatedAutomorphism::make(
        s, {dp_add(dp_var(s, 1), dp_monomial(s, MultiIndex{{0, 0, 2}}, F.from_int(2))),
            dp_var(s, 2), dp_var(s, 0)});
    DerivationElement y = sigma.conjugate(D);
    PremetResult r = premet_regular_reduce(y);
    CHECK(r.regular);
    CHECK(apply_chain_truncated(s, r.chain, y) == D);
    // random conjugates through full substitution automorphisms
    for (int it = 0; it < 3; ++it) {
        std::vector<DPElement> img;
        for (uint32_t i = 0; i < 3; ++i) {
            DPElement f(s);
            for (uint32_t j = 0; j < 3; ++j) {
                std::vector<uint32_t> e(3, 0);
                e[j] = 1;
                f.set_coeff(s->rank_of(e), rng.field_element(F));
            }
            for (int t2 = 0; t2 < 4; ++t2) {
                uint64_t rank = rng.below(s->dim());
                if (MultiIndex{s->index_of(rank)}.total_degree() >= 2) {
                    f.set_coeff(rank, rng.field_element(F));
                }
            }
            img.push_back(std::move(f));
        }
        TruncatedAutomorphism tau = [&] {
            try {
                return TruncatedAutomorphism::make(s, img);
            } catch (const std::invalid_argument&) {
                return TruncatedAutomorphism::identity(s);  // singular draw; skip
            }
        }();
        DerivationElement y2 = tau.conjugate(D);
        PremetResult r2 = premet_regular_reduce(y2);
        CHECK(r2.regular);
        CHECK(apply_chain_truncated(s, r2.chain, y2) == D);
    }
}

TEST_CASE("admissible coefficient validation") {
    ShapePtr s = O12();
    const Fq& F = s->F();
    std::vector<FieldElement> alphas(s->dim() - 1, F.zero());
    CHECK_THROWS_AS(AdmissibleAutomorphism::make(s, alphas), std::invalid_argument);  // alpha_1 = 0
    alphas[0] = F.one();
    alphas[4] = F.from_int(2);  // alpha_5 = alpha_p must vanish
    CHECK_THROWS_AS(AdmissibleAutomorphism::make(s, alphas), std::invalid_argument);
    alphas[4] = F.zero();
    alphas[6] = F.from_int(2);
    CHECK_NOTHROW(AdmissibleAutomorphism::make(s, alphas));
    CHECK_THROWS_AS(AdmissibleAutomorphism::one_term(s, 5, F.one()), std::invalid_argument);
    CHECK_THROWS_AS(AdmissibleAutomorphism::one_term(s, 1, F.one()), std::invalid_argument);
    CHECK_NOTHROW(AdmissibleAutomorphism::one_term(s, 7, F.one()));
    // only O(1;n)
    CHECK_THROWS_AS(AdmissibleAutomorphism::identity(O21()), std::invalid_argument);
}
