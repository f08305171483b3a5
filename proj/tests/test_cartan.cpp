#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modlie/cartan.hpp"
#include "modlie/prng.hpp"

using namespace modlie;

namespace {
ShapePtr O21() { return make_shape(2, {1, 1}, ext_field_make(5, 1)); }
ShapePtr O31() { return make_shape(3, {1, 1, 1}, ext_field_make(5, 1)); }
}  // namespace

TEST_CASE("derivation module structure") {
    ShapePtr s = O21();
    const Fq& F = s->F();
    Prng rng(5);
    DerivationElement D(s);
    for (uint32_t i = 0; i < 2; ++i) {
        for (uint64_t r = 0; r < s->dim(); ++r) D.part(i).set_coeff(r, rng.field_element(F));
    }
    DPElement f(s);
    for (uint64_t r = 0; r < s->dim(); ++r) f.set_coeff(r, rng.field_element(F));
    // module action and Leibniz
    DPElement g(s);
    for (uint64_t r = 0; r < s->dim(); ++r) g.set_coeff(r, rng.field_element(F));
    CHECK(witt_apply(D, dp_mul(f, g)) ==
          dp_add(dp_mul(witt_apply(D, f), g), dp_mul(f, witt_apply(D, g))));
    CHECK(witt_apply(deriv_module_mul(f, D), g) == dp_mul(f, witt_apply(D, g)));
}

TEST_CASE("filtration degrees") {
    ShapePtr s = O21();
    const Fq& F = s->F();
    CHECK(derivation_filtration_degree(deriv_partial(s, 0)) == -1);
    DerivationElement top = deriv_monomial(s, MultiIndex{{4, 4}}, 0, F.one());
    CHECK(derivation_filtration_degree(top) == 7);  // s(p-1) - 1 with s = 2
    CHECK_THROWS_AS(derivation_filtration_degree(deriv_zero(s)), std::domain_error);
    CHECK(deriv_in_standard_maximal(deriv_zero(s)));
    CHECK_FALSE(deriv_in_standard_maximal(deriv_partial(s, 1)));
}

TEST_CASE("hamiltonian and contact preconditions") {
    ShapePtr odd = O31();
    ShapePtr even = O21();
    CHECK_THROWS_AS(hamiltonian_D_H(dp_one(odd)), std::invalid_argument);
    CHECK_THROWS_AS(contact_D_K(dp_one(even)), std::invalid_argument);
    CHECK_THROWS_AS(special_D_ij(0, 5, dp_one(even)), std::out_of_range);
    ShapePtr p3 = make_shape(2, {1, 1}, ext_field_make(3, 1));
    CHECK_NOTHROW(hamiltonian_D_H(dp_one(p3)));
}

TEST_CASE("hamiltonian sign table") {
    HamiltonianIndex idx{2};  // m = 4, r = 2
    CHECK(idx.sigma(0) == 1);
    CHECK(idx.sigma(1) == 1);
    CHECK(idx.sigma(2) == -1);
    CHECK(idx.sigma(3) == -1);
    CHECK(idx.conj(0) == 2);
    CHECK(idx.conj(3) == 1);
}

TEST_CASE("derivation serialization") {
    ShapePtr s = O21();
    Prng rng(11);
    for (int it = 0; it < 10; ++it) {
        DerivationElement D(s);
        for (uint32_t i = 0; i < 2; ++i) {
            for (uint64_t r = 0; r < s->dim(); ++r) {
                if (rng.below(4) == 0) D.part(i).set_coeff(r, rng.field_element(s->F()));
            }
        }
        CHECK(deriv_parse(s, deriv_to_string(D)) == D);
    }
    CHECK_THROWS_AS(deriv_parse(s, "nonsense"), std::invalid_argument);
}

TEST_CASE("sl2 bracket table") {
    Sl2 s(ext_field_make(5, 1));
    const Fq& F = s.F();
    CHECK(s.bracket(s.E(), s.Fgen()) == s.H());
    CHECK(s.bracket(s.H(), s.E()) == s.scale(s.E(), F.from_int(2)));
    CHECK(s.bracket(s.H(), s.Fgen()) == s.scale(s.Fgen(), F.from_int(-2)));
    // Jacobi on random triples
    Prng rng(17);
    for (int it = 0; it < 30; ++it) {
        auto r = [&] { return s.make(rng.field_element(F), rng.field_element(F), rng.field_element(F)); };
        Sl2Element a = r(), b = r(), c = r();
        Sl2Element jac = s.add(s.bracket(a, s.bracket(b, c)),
                               s.add(s.bracket(b, s.bracket(c, a)), s.bracket(c, s.bracket(a, b))));
        CHECK(s.is_zero(jac));
    }
    FieldSpec f2{2, 1, {0, 1}};
    CHECK_THROWS_AS((Sl2{f2}), std::invalid_argument);  // needs p > 2
}
