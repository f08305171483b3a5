#pragma once

#include <optional>
#include <vector>

#include "modlie/scalars.hpp"

namespace modlie {

// Dense matrix over F_q.  The field context is borrowed; it must outlive the
// matrix.
class FqMatrix {
public:
    FqMatrix() : F_(nullptr), rows_(0), cols_(0) {}
    FqMatrix(const Fq& F, size_t rows, size_t cols)
        : F_(&F), rows_(rows), cols_(cols), a_(rows * cols) {}

    static FqMatrix identity(const Fq& F, size_t n);

    const Fq& field() const { return *F_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    FieldElement& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const FieldElement& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const FqMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool is_zero() const;

    FqMatrix add(const FqMatrix& o) const;
    FqMatrix sub(const FqMatrix& o) const;
    FqMatrix mul(const FqMatrix& o) const;
    FqMatrix scale(const FieldElement& c) const;
    FqMatrix pow(uint64_t e) const;
    FqMatrix transpose() const;

    std::vector<FieldElement> apply(const std::vector<FieldElement>& v) const;  // matrix * column

    size_t rank() const;
    bool is_nilpotent() const;

    // Solves this * x = rhs (rhs has matching row count; solution columns per
    // rhs column).  Returns nullopt when inconsistent.  Free variables are 0.
    std::optional<FqMatrix> solve(const FqMatrix& rhs) const;
    std::optional<FqMatrix> inverse() const;

    // Basis of the right kernel, returned as columns.
    FqMatrix kernel() const;

    // Characteristic polynomial, monic, coefficients low degree first.
    std::vector<FieldElement> charpoly() const;

    std::vector<FieldElement> flatten() const { return a_; }

private:
    const Fq* F_;
    size_t rows_, cols_;
    std::vector<FieldElement> a_;
};

// Incremental row-echelon span tracker with deterministic pivoting (first
// nonzero coordinate).  Optionally tracks, per stored row, its expression as
// a combination of the inserted vectors, which makes repeated decomposition
// against a fixed basis cheap.
class SpanBasis {
public:
    SpanBasis() : F_(nullptr), width_(0), tag_width_(0) {}
    SpanBasis(const Fq& F, size_t width, size_t tag_width = 0)
        : F_(&F), width_(width), tag_width_(tag_width) {}

    // Returns true when v enlarged the span.
    bool insert(std::vector<FieldElement> v);
    bool insert_tagged(std::vector<FieldElement> v, std::vector<FieldElement> tag);
    bool contains(std::vector<FieldElement> v) const;
    // Reduces v against the basis in place; returns remaining vector (zero iff contained).
    std::vector<FieldElement> reduce(std::vector<FieldElement> v) const;
    // Expresses v over the insertion tags; nullopt when v is outside the span.
    std::optional<std::vector<FieldElement>> decompose_tagged(std::vector<FieldElement> v) const;
    size_t rank() const { return rows_.size(); }
    size_t width() const { return width_; }
    const std::vector<std::vector<FieldElement>>& rows() const { return rows_; }

private:
    const Fq* F_;
    size_t width_;
    size_t tag_width_;
    std::vector<std::vector<FieldElement>> rows_;  // echelonized, pivot normalized to 1
    std::vector<std::vector<FieldElement>> tags_;
    std::vector<size_t> pivots_;
};

// -------------------------------------------------------------------------
// Dense polynomials over F_q, low degree first.  Used by the additive Jordan
// decomposition.
// -------------------------------------------------------------------------

using FqPoly = std::vector<FieldElement>;

FqPoly poly_trim(const Fq& F, FqPoly f);
FqPoly poly_add(const Fq& F, const FqPoly& a, const FqPoly& b);
FqPoly poly_mul(const Fq& F, const FqPoly& a, const FqPoly& b);
FqPoly poly_mod(const Fq& F, FqPoly a, const FqPoly& m);
FqPoly poly_divexact(const Fq& F, const FqPoly& a, const FqPoly& b);
FqPoly poly_gcd(const Fq& F, FqPoly a, FqPoly b);  // monic result
FqPoly poly_derivative(const Fq& F, const FqPoly& f);
FqPoly poly_monic(const Fq& F, FqPoly f);

// Product of the distinct irreducible factors of f (f nonzero).  Correct in
// characteristic p, including p-th power factors.
FqPoly poly_radical(const Fq& F, FqPoly f);

FqMatrix poly_eval_matrix(const FqPoly& f, const FqMatrix& A);

// Additive Jordan decomposition A = S + N with S semisimple, N nilpotent,
// [S, N] = 0, both polynomial expressions in A (Chevalley iteration on the
// radical of the characteristic polynomial).
struct JordanParts {
    FqMatrix semisimple;
    FqMatrix nilpotent;
};
JordanParts jordan_decompose_matrix(const FqMatrix& A);

}  // namespace modlie
