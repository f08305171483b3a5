#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modlie/divided_power.hpp"
#include "modlie/prng.hpp"

using namespace modlie;

namespace {
ShapePtr O11() { return make_shape(1, {1}, ext_field_make(5, 1)); }
ShapePtr O12() { return make_shape(1, {2}, ext_field_make(5, 1)); }
ShapePtr O21() { return make_shape(2, {1, 1}, ext_field_make(5, 1)); }
}  // namespace

TEST_CASE("shape and rank bookkeeping") {
    ShapePtr s = make_shape(2, {2, 1}, ext_field_make(5, 1));
    CHECK(s->dim() == 125);
    CHECK(s->radix(0) == 25);
    CHECK(s->radix(1) == 5);
    std::vector<uint32_t> a = {7, 3};
    CHECK(s->rank_of(a) == 7 + 3 * 25);
    CHECK(s->index_of(7 + 3 * 25) == a);
    CHECK_THROWS_AS(s->rank_of({25, 0}), std::out_of_range);
    CHECK_THROWS_AS(make_shape(0, {}, ext_field_make(5, 1)), std::invalid_argument);
    CHECK_THROWS_AS(make_shape(1, {0}, ext_field_make(5, 1)), std::invalid_argument);
    CHECK_THROWS_AS(make_shape(2, {1, 1}, ext_field_make(5, 1), 3), std::invalid_argument);
}

TEST_CASE("multiplication vanishing at the bounds") {
    ShapePtr s = O11();
    const Fq& F = s->F();
    // x^(3) x^(3) = C(6,3) x^(6) vanishes in O(1;1)
    CHECK(dp_mul(dp_monomial(s, 3, F.one()), dp_monomial(s, 3, F.one())).is_zero());
    ShapePtr s2 = O12();
    // in O(1;2) the same product survives with C(6,3) = 20 = 0 mod 5... it is 0 mod 5
    CHECK(dp_mul(dp_monomial(s2, 3, s2->F().one()), dp_monomial(s2, 3, s2->F().one())).is_zero());
    // but x^(1) x^(4) = C(5,1) x^(5) = 0 mod 5 while x^(2) x^(4) = C(6,2)x^(6) = 15 = 0;
    // x^(4) x^(4) = C(8,4) x^(8) = 70 = 0 mod 5; x^(1) x^(5) = C(6,1) = 6 = 1
    CHECK(dp_mul(dp_monomial(s2, 1, s2->F().one()), dp_monomial(s2, 5, s2->F().one())) ==
          dp_monomial(s2, 6, s2->F().one()));
}

TEST_CASE("shape mismatch and error paths") {
    ShapePtr a = O11(), b = O12();
    CHECK_THROWS_AS(dp_mul(dp_one(a), dp_one(b)), std::invalid_argument);
    CHECK_THROWS_AS(dp_filtration_degree(dp_zero(a)), std::domain_error);
    CHECK_THROWS_AS(dp_inverse(dp_var(a, 0)), std::domain_error);
    // divided powers: not O(1;n), nonzero constant term
    ShapePtr m2 = O21();
    CHECK_THROWS_AS(dp_divided_power(dp_var(m2, 0), 2), std::invalid_argument);
    CHECK_THROWS_AS(dp_divided_power(dp_one(a), 2), std::domain_error);
}

TEST_CASE("divided power degenerate and generator cases") {
    ShapePtr s = O12();
    const Fq& F = s->F();
    DPElement x = dp_var(s, 0);
    for (uint64_t r = 0; r < 25; ++r) {
        CHECK(dp_divided_power(x, r) == dp_monomial(s, r, F.one()));
    }
    CHECK(dp_divided_power(x, 25).is_zero());
    DPElement f = dp_add(x, dp_monomial(s, 7, F.from_int(2)));
    CHECK(dp_divided_power(f, 0) == dp_one(s));
    CHECK(dp_divided_power(f, 1) == f);
}

TEST_CASE("serialization round trip") {
    ShapePtr s = make_shape(2, {1, 1}, ext_field_make(5, 2));
    Prng rng(42);
    for (int it = 0; it < 10; ++it) {
        DPElement f(s);
        for (uint64_t r = 0; r < s->dim(); ++r) {
            if (rng.below(3) == 0) f.set_coeff(r, rng.field_element(s->F()));
        }
        CHECK(dp_parse(s, dp_to_string(f)) == f);
    }
    CHECK(dp_parse(s, dp_to_string(dp_zero(s))).is_zero());
    CHECK_THROWS_AS(dp_parse(s, "garbage"), std::invalid_argument);
    CHECK_THROWS_AS(dp_parse(O11(), dp_to_string(dp_one(s))), std::invalid_argument);
}

TEST_CASE("deglex requires a valid split") {
    ShapePtr s = make_shape(3, {1, 1, 1}, ext_field_make(5, 1));
    MultiIndex a{{1, 2, 3}};
    CHECK_THROWS_AS(deglex_pdeg(*s, a, 0), std::invalid_argument);
    CHECK_THROWS_AS(deglex_pdeg(*s, a, 4), std::invalid_argument);
    CHECK(deglex_pdeg(*s, a, 3) == 1 + 2 * 5 + 3 * 25);
    CHECK(deglex_pdeg(*s, a, 1) == 1 + 5 * (2 + 3));
}
