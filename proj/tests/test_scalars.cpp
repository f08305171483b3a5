#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modlie/scalars.hpp"

using namespace modlie;

TEST_CASE("primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(5));
    CHECK(is_prime_u64(7919));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(91));
}

TEST_CASE("p-adic digits") {
    CHECK(p_adic_digits(0, 5).digits.empty());
    CHECK(p_adic_digits(19, 5).digits == std::vector<uint32_t>{4, 3});
    // p^r - p^s has digit p-1 in positions s..r-1
    auto d = p_adic_digits(125 - 5, 5);
    CHECK(d.digits == std::vector<uint32_t>{0, 4, 4});
    uint64_t value = 0, pw = 1;
    for (uint32_t dig : d.digits) {
        value += dig * pw;
        pw *= 5;
    }
    CHECK(value == 120);
    CHECK_THROWS_AS(p_adic_digits(3, 4), std::invalid_argument);
}

TEST_CASE("binomials mod p") {
    CHECK(binom_mod_p(19, 4, 5) == 1);  // C(19,4) = 3876 = 775*5 + 1
    CHECK(binom_mod_p(7, 0, 5) == 1);
    CHECK(binom_mod_p(3, 5, 5) == 0);
    // congruence family C(p^r - p^s + i, p^r - p^s) = 1
    for (uint64_t i = 0; i <= 4; ++i) CHECK(binom_mod_p(20 + i, 20, 5) == 1);
    CHECK_THROWS_AS(binom_mod_p(4, 2, 6), std::invalid_argument);
}

TEST_CASE("BigNat and factorial ratios") {
    BigNat f = BigNat::factorial(30);
    CHECK(f.to_string() == "265252859812191058636308480000000");
    uint64_t check = 1;
    for (uint64_t i = 2; i <= 30; ++i) check = check * (i % 7919) % 7919;
    CHECK(f.mod_small(7919) == check);
    // divided power ratio: ((rs)! / (r!(s!)^r))
    CHECK(divided_power_ratio_mod_p(1, 3, 5) == 1);
    CHECK(divided_power_ratio_mod_p(2, 2, 5) == 3);   // 4!/(2! 2! 2!) = 3
    CHECK(divided_power_ratio_mod_p(5, 1, 5) == 1);   // 5!/5! = 1
    CHECK(divided_power_ratio_mod_p(2, 3, 5) == 0);   // 6!/(2! 6^2) = 10
    CHECK(divided_power_ratio_mod_p(2, 4, 5) == 0);   // 8!/(2! 24^2) = 35
    CHECK(divided_power_ratio_mod_p(3, 2, 7) == 1);   // 6!/(3! 2^3) = 15 = 2*7 + 1
}

TEST_CASE("field construction and arithmetic") {
    FieldSpec f5 = ext_field_make(5, 1);
    CHECK(f5.irr == std::vector<uint32_t>{0, 1});
    FieldSpec f25 = ext_field_make(5, 2);
    CHECK(f25.irr == std::vector<uint32_t>{1, 1, 1});  // X^2 + X + 1 over F_5
    CHECK(f25.q() == 25);

    Fq F(f25);
    FieldElement a = F.from_rank(7), b = F.from_rank(19);
    CHECK(F.mul(a, F.inv(a)) == F.one());
    CHECK(F.add(a, F.neg(a)) == F.zero());
    CHECK(F.rank(F.from_rank(13)) == 13);
    // Frobenius has order M
    CHECK(F.frobenius(F.frobenius(a)) == a);
    CHECK(F.pth_root(F.frobenius(b)) == b);
    // every nonzero element satisfies x^24 = 1
    for (uint64_t r = 1; r < 25; ++r) CHECK(F.pow(F.from_rank(r), 24) == F.one());

    CHECK_THROWS_AS(ext_field_make(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(ext_field_make(2, 1), std::invalid_argument);
}

TEST_CASE("field element serialization") {
    Fq F(ext_field_make(5, 2));
    FieldElement a = F.from_rank(17);
    CHECK(F.parse(F.to_string(a)) == a);
    FieldSpec s = ext_field_make(7, 2);
    CHECK(FieldSpec::parse(s.to_string()) == s);
}

TEST_CASE("irreducibility") {
    CHECK(is_irreducible_mod_p({1, 1, 1}, 5));        // X^2+X+1
    CHECK_FALSE(is_irreducible_mod_p({1, 0, 1}, 5));  // X^2+1 = (X-2)(X+2)
    CHECK(is_irreducible_mod_p({1, 1, 0, 1}, 5));     // X^3+X+1 has no roots mod 5
    CHECK_FALSE(is_irreducible_mod_p({1, 2, 3, 2, 1}, 5));  // (X^2+X+1)^2
}
