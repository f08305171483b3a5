#pragma once

#include "modlie/cartan.hpp"
#include "modlie/linalg.hpp"

namespace modlie {

using Coords = std::vector<FieldElement>;

struct NotInSpanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// psi coefficients of the relation x^{[p]^{e+s}} = sum_i psi_i(x) x^{[p]^{e+i}}.
struct PsiCoefficients {
    uint32_t e = 0;
    uint32_t s = 0;
    std::vector<FieldElement> psi;
    bool found = false;
    // When no relation of the requested length exists: length at which the
    // iterated p-powers first become dependent (diagnostic only).
    std::optional<uint32_t> observed_relation_length;
};

// A Lie algebra realized by operator matrices on a faithful module.  Elements
// are coordinate vectors over a fixed matrix basis; brackets are commutators
// and the p-map is the operator p-th power followed by basis decomposition.
class MatrixAlgebra {
public:
    MatrixAlgebra() = default;

    // Basis matrices must be linearly independent.  When `check_closed` is
    // set, bracket closure is verified.
    static MatrixAlgebra from_basis(const Fq& F, std::vector<FqMatrix> basis, bool check_closed);
    // Closes the span of the generators under bracket and p-th power first.
    static MatrixAlgebra from_generators_p_closed(const Fq& F, const std::vector<FqMatrix>& gens);

    const Fq& F() const { return *F_; }
    size_t dim() const { return basis_.size(); }
    size_t module_dim() const { return module_dim_; }
    const FqMatrix& basis_matrix(size_t i) const { return basis_[i]; }

    Coords zero() const { return Coords(dim(), F_->zero()); }
    Coords unit(size_t i) const;
    bool is_zero_coords(const Coords& a) const;
    Coords add(const Coords& a, const Coords& b) const;
    Coords sub(const Coords& a, const Coords& b) const;
    Coords scale(const Coords& a, const FieldElement& c) const;

    FqMatrix realize(const Coords& a) const;
    Coords decompose(const FqMatrix& X) const;  // throws NotInSpanError
    bool in_span(const FqMatrix& X) const;

    Coords bracket(const Coords& a, const Coords& b) const;
    Coords pth_power(const Coords& a) const;
    Coords pth_power_iter(const Coords& a, uint32_t k) const;  // x^{[p]^k}

    // The p-1 terms s_i(a, b) of Jacobson's formula, from the t-polynomial
    // (ad(ta+b))^{p-1}(a) = sum i s_i t^{i-1}.
    std::vector<Coords> jacobson_si(const Coords& a, const Coords& b) const;

    bool is_nilpotent(const Coords& a) const;
    uint32_t nilpotency_index(const Coords& a) const;  // least K with a^{[p]^K} = 0

    // Additive Jordan decomposition inside the algebra.
    std::pair<Coords, Coords> jordan_chevalley(const Coords& a) const;
    bool is_semisimple(const Coords& a) const;

    // dim span{a^{[p]^i} : i >= 1} at stabilization.
    uint32_t semisimple_rank(const Coords& a) const;

    PsiCoefficients psi_relation(const Coords& a, uint32_t e, uint32_t s) const;

private:
    const Fq* F_ = nullptr;
    size_t module_dim_ = 0;
    std::vector<FqMatrix> basis_;
    SpanBasis span_;

    MatrixAlgebra(const Fq& F, size_t module_dim, size_t expected_dim)
        : F_(&F), module_dim_(module_dim), span_(F, module_dim * module_dim, expected_dim) {}
};

// Fixed-point p-closure of the span of the generators under bracket and p-th
// power.  Returns a deterministic basis (insertion order).
std::vector<FqMatrix> p_closure_operators(const Fq& F, const std::vector<FqMatrix>& gens);

// ---------------------------------------------------------------------------
// W(m;n) as operators on O(m;n)
// ---------------------------------------------------------------------------

// Operator matrix of D acting on O(m;n) in the monomial basis (rank order).
FqMatrix derivation_operator(const DerivationElement& D);
// Operator of multiplication... no: operator of an admissible basis; the Witt
// realization with basis x^(a) d_i ordered by (i, rank a).
class WittRealization {
public:
    explicit WittRealization(ShapePtr ctx);

    const ShapePtr& ctx() const { return ctx_; }
    const MatrixAlgebra& algebra() const { return alg_; }
    bool restricted() const { return restricted_; }

    Coords coords_of(const DerivationElement& D) const;
    DerivationElement element_of(const Coords& a) const;

    // Operator p-th power decomposed back into W(m;n).  Throws NotInSpanError
    // when the power escapes (possible only for non-restricted heights).
    DerivationElement pth_power(const DerivationElement& D) const;
    DerivationElement pth_power_iter(const DerivationElement& D, uint32_t k) const;
    bool is_nilpotent(const DerivationElement& D) const;
    uint32_t nilpotency_index(const DerivationElement& D) const;
    std::pair<DerivationElement, DerivationElement> jordan_chevalley(const DerivationElement& D) const;
    std::vector<DerivationElement> jacobson_si(const DerivationElement& D,
                                               const DerivationElement& E) const;

private:
    ShapePtr ctx_;
    MatrixAlgebra alg_;
    bool restricted_;
};

// Kernel of D on O(m;1) is exactly the constants.
bool is_regular_witt(const DerivationElement& D);

}  // namespace modlie
