#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>

#include "modlie/scalars.hpp"

namespace modlie {

// O(m;n): basis x^(a) with 0 <= a_i < p^{n_i}, dimension p^{n_1+...+n_m}.
struct AlgebraShape {
    uint32_t m = 0;
    std::vector<uint32_t> heights;  // n_i, size m
    FieldSpec field;
    std::optional<uint32_t> split;  // s for the |.|_p degree, 1 <= s <= m

    bool operator==(const AlgebraShape&) const = default;
};

// Shared context: shape plus field arithmetic plus mixed-radix rank tables.
class ShapeCtx {
public:
    explicit ShapeCtx(AlgebraShape shape);

    const AlgebraShape& shape() const { return shape_; }
    const Fq& F() const { return F_; }
    uint32_t m() const { return shape_.m; }
    uint32_t p() const { return F_.p(); }
    uint64_t dim() const { return dim_; }
    uint64_t radix(uint32_t i) const { return radix_[i]; }

    uint64_t rank_of(const std::vector<uint32_t>& a) const;
    std::vector<uint32_t> index_of(uint64_t rank) const;

    std::string shape_string() const;  // "O(m;n1,...,nm);<fieldspec>"

private:
    AlgebraShape shape_;
    Fq F_;
    std::vector<uint64_t> radix_;   // p^{n_i}
    std::vector<uint64_t> stride_;  // mixed-radix strides, low index fastest
    uint64_t dim_;
};

using ShapePtr = std::shared_ptr<const ShapeCtx>;

ShapePtr make_shape(uint32_t m, std::vector<uint32_t> heights, FieldSpec field,
                    std::optional<uint32_t> split = std::nullopt);
// O(m;1,...,1) over the prime field F_p.
ShapePtr make_truncated_shape(uint32_t m, uint32_t p, std::optional<uint32_t> split = std::nullopt);

struct MultiIndex {
    std::vector<uint32_t> a;

    uint32_t total_degree() const;
    bool operator==(const MultiIndex&) const = default;
};

// Element of O(m;n): sparse coefficient map keyed by the mixed-radix rank of
// the multi-index.  Zero coefficients are never stored.
class DPElement {
public:
    DPElement() = default;
    explicit DPElement(ShapePtr ctx) : ctx_(std::move(ctx)) {}

    const ShapePtr& ctx() const { return ctx_; }
    bool is_zero() const { return coeffs_.empty(); }
    size_t term_count() const { return coeffs_.size(); }
    const std::map<uint64_t, FieldElement>& terms() const { return coeffs_; }

    FieldElement coeff(uint64_t rank) const;
    FieldElement coeff(const MultiIndex& a) const;
    void set_coeff(uint64_t rank, const FieldElement& c);
    void add_coeff(uint64_t rank, const FieldElement& c);

    bool operator==(const DPElement& o) const { return coeffs_ == o.coeffs_; }

private:
    ShapePtr ctx_;
    std::map<uint64_t, FieldElement> coeffs_;
};

DPElement dp_zero(ShapePtr ctx);
DPElement dp_one(ShapePtr ctx);
DPElement dp_scalar(ShapePtr ctx, const FieldElement& c);
DPElement dp_monomial(ShapePtr ctx, const MultiIndex& a, const FieldElement& c);
DPElement dp_monomial(ShapePtr ctx, uint64_t rank, const FieldElement& c);
// x_i as an element (exponent 1 in variable i).
DPElement dp_var(ShapePtr ctx, uint32_t i);

DPElement dp_add(const DPElement& f, const DPElement& g);
DPElement dp_sub(const DPElement& f, const DPElement& g);
DPElement dp_neg(const DPElement& f);
DPElement dp_scale(const DPElement& f, const FieldElement& c);
DPElement dp_mul(const DPElement& f, const DPElement& g);
DPElement dp_pow(const DPElement& f, uint64_t e);  // iterated dp_mul

// i-th partial derivative (special derivation rule x^(a) -> x^(a - e_i)).
DPElement dp_partial(const DPElement& f, uint32_t i);

// f^(r) for f in the maximal ideal of O(1;n).
DPElement dp_divided_power(const DPElement& f, uint64_t r);

FieldElement dp_constant_term(const DPElement& f);
bool dp_in_maximal_ideal(const DPElement& f);

// Minimal total degree over the support.  Throws std::domain_error on zero.
uint32_t dp_filtration_degree(const DPElement& f);
// Same, with an "infinite" sentinel for the zero element.
std::optional<uint32_t> dp_filtration_degree_opt(const DPElement& f);

// Multiplicative inverse of a unit (nonzero constant term), by a Neumann
// series on the nilpotent part.
DPElement dp_inverse(const DPElement& f);

// |a|_p = sum_{i<=s} a_i p^{i-1} + p^s sum_{i>s} a_i (s = split index).
uint64_t deglex_pdeg(const ShapeCtx& ctx, const MultiIndex& a, uint32_t s);
// DegLex: compare |.|_p first, ties by lexicographic order with x_1 < x_2 < ...
// (compare the largest index where the tuples differ).
std::strong_ordering deglex_compare(const ShapeCtx& ctx, const MultiIndex& a, const MultiIndex& b,
                                    uint32_t s);

// Textual format: "<shape>|<rank>:<coeff>,<rank>:<coeff>,..."
std::string dp_to_string(const DPElement& f);
DPElement dp_parse(ShapePtr ctx, const std::string& text);

}  // namespace modlie
