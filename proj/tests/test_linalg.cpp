#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modlie/linalg.hpp"
#include "modlie/prng.hpp"

using namespace modlie;

namespace {
Fq F25() { return Fq(ext_field_make(5, 2)); }

FqMatrix random_matrix(Prng& rng, const Fq& F, size_t n) {
    FqMatrix M(F, n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) M.at(i, j) = rng.field_element(F);
    }
    return M;
}
}  // namespace

TEST_CASE("matrix basics") {
    Fq F = F25();
    FqMatrix I = FqMatrix::identity(F, 4);
    CHECK(I.rank() == 4);
    CHECK(I.pow(7) == I);
    Prng rng(0xABCDEF);
    FqMatrix A = random_matrix(rng, F, 5);
    FqMatrix B = random_matrix(rng, F, 5);
    CHECK(A.mul(B).transpose() == B.transpose().mul(A.transpose()));
    CHECK(A.add(B).sub(B) == A);
}

TEST_CASE("solve, kernel, inverse") {
    Fq F = F25();
    Prng rng(7);
    for (int it = 0; it < 20; ++it) {
        FqMatrix A = random_matrix(rng, F, 6);
        FqMatrix x(F, 6, 1);
        for (size_t i = 0; i < 6; ++i) x.at(i, 0) = rng.field_element(F);
        FqMatrix b = A.mul(x);
        auto sol = A.solve(b);
        REQUIRE(sol.has_value());
        CHECK(A.mul(*sol) == b);
        FqMatrix K = A.kernel();
        CHECK(K.cols() == 6 - A.rank());
        if (K.cols() > 0) CHECK(A.mul(K).is_zero());
        auto inv = A.inverse();
        if (inv) {
            CHECK(A.mul(*inv) == FqMatrix::identity(F, 6));
            CHECK(inv->mul(A) == FqMatrix::identity(F, 6));
        }
    }
    FqMatrix Z(F, 2, 2);
    FqMatrix rhs(F, 2, 1);
    rhs.at(0, 0) = F.one();
    CHECK_FALSE(Z.solve(rhs).has_value());
}

TEST_CASE("charpoly") {
    Fq F = F25();
    FqMatrix D(F, 3, 3);
    FieldElement a = F.from_rank(3), b = F.from_rank(7), c = F.from_rank(11);
    D.at(0, 0) = a;
    D.at(1, 1) = b;
    D.at(2, 2) = c;
    FqPoly chi = D.charpoly();
    REQUIRE(chi.size() == 4);
    FqPoly expect = poly_mul(F, poly_mul(F, {F.neg(a), F.one()}, {F.neg(b), F.one()}),
                             {F.neg(c), F.one()});
    CHECK(chi == expect);
    Prng rng(99);
    for (int it = 0; it < 10; ++it) {
        FqMatrix A = random_matrix(rng, F, 5);
        CHECK(poly_eval_matrix(A.charpoly(), A).is_zero());  // Cayley-Hamilton
    }
    FqMatrix N(F, 4, 4);
    for (size_t i = 0; i + 1 < 4; ++i) N.at(i, i + 1) = F.one();
    CHECK(N.is_nilpotent());
    FqPoly chiN = N.charpoly();
    for (size_t i = 0; i < 4; ++i) CHECK(F.is_zero(chiN[i]));
    CHECK(chiN[4] == F.one());
}

TEST_CASE("polynomial radical in characteristic p") {
    Fq F(ext_field_make(5, 1));
    FqPoly x = {F.zero(), F.one()};
    FqPoly xm1 = {F.from_int(-1), F.one()};
    FqPoly f = poly_mul(F, poly_mul(F, x, x), [&] {
        FqPoly r = {F.one()};
        for (int i = 0; i < 5; ++i) r = poly_mul(F, r, xm1);
        return r;
    }());
    FqPoly rad = poly_radical(F, f);
    CHECK(rad == poly_monic(F, poly_mul(F, x, xm1)));
    // p-th power factor: derivative vanishes identically
    Fq F2(ext_field_make(5, 2));
    FqPoly g = {F2.one(), F2.one(), F2.one()};
    FqPoly gp = {F2.one()};
    for (int i = 0; i < 5; ++i) gp = poly_mul(F2, gp, g);
    CHECK(poly_derivative(F2, gp).empty());
    CHECK(poly_radical(F2, gp) == poly_monic(F2, g));
}

TEST_CASE("jordan decomposition of matrices") {
    Fq F = F25();
    Prng rng(1234);
    for (int it = 0; it < 15; ++it) {
        FqMatrix A = random_matrix(rng, F, 6);
        JordanParts parts = jordan_decompose_matrix(A);
        CHECK(parts.semisimple.add(parts.nilpotent) == A);
        CHECK(parts.nilpotent.is_nilpotent());
        FqMatrix comm = parts.semisimple.mul(parts.nilpotent).sub(parts.nilpotent.mul(parts.semisimple));
        CHECK(comm.is_zero());
        // the semisimple part is annihilated by the squarefree radical
        FqPoly rad = poly_radical(F, parts.semisimple.charpoly());
        CHECK(poly_eval_matrix(rad, parts.semisimple).is_zero());
    }
}

TEST_CASE("span basis with tags") {
    Fq F = F25();
    SpanBasis span(F, 4, 3);
    auto vec = [&](std::initializer_list<int> v) {
        std::vector<FieldElement> r;
        for (int x : v) r.push_back(F.from_int(x));
        return r;
    };
    CHECK(span.insert_tagged(vec({1, 2, 0, 0}), vec({1, 0, 0})));
    CHECK(span.insert_tagged(vec({0, 1, 1, 0}), vec({0, 1, 0})));
    CHECK(span.insert_tagged(vec({0, 0, 0, 3}), vec({0, 0, 1})));
    CHECK_FALSE(span.insert_tagged(vec({1, 3, 1, 3}), vec({0, 0, 0})));
    CHECK(span.rank() == 3);
    auto combo = span.decompose_tagged(vec({2, 5, 1, 3}));
    REQUIRE(combo.has_value());
    CHECK((*combo)[0] == F.from_int(2));
    CHECK((*combo)[1] == F.from_int(1));
    CHECK((*combo)[2] == F.from_int(1));
    CHECK_FALSE(span.decompose_tagged(vec({0, 0, 1, 1})).has_value());
    CHECK(span.contains(vec({1, 2, 0, 0})));
    CHECK_FALSE(span.contains(vec({0, 0, 1, 0})));
}
