#pragma once

#include "modlie/automorphisms.hpp"

namespace modlie {

// ---------------------------------------------------------------------------
// W(1;n)_p = W(1;n) + sum k d^{p^i}: f d plus tail scalars, dim p^n + (n-1).
// ---------------------------------------------------------------------------

struct PEnvelopeElement {
    ShapePtr ctx;                     // O(1;n)
    DPElement poly;                   // the f in f d
    std::vector<FieldElement> tails;  // coefficients of d^{p^i}, i = 1..n-1

    bool operator==(const PEnvelopeElement& o) const {
        return poly == o.poly && tails == o.tails;
    }
};

PEnvelopeElement lp_zero(ShapePtr ctx);
PEnvelopeElement lp_from_poly(DPElement f);
PEnvelopeElement lp_partial_power(ShapePtr ctx, uint32_t i);  // d^{p^i}, i = 0..n-1
PEnvelopeElement lp_add(const PEnvelopeElement& A, const PEnvelopeElement& B);
PEnvelopeElement lp_sub(const PEnvelopeElement& A, const PEnvelopeElement& B);
PEnvelopeElement lp_scale(const PEnvelopeElement& A, const FieldElement& c);
bool lp_is_zero(const PEnvelopeElement& A);

PEnvelopeElement lp_bracket(const PEnvelopeElement& A, const PEnvelopeElement& B);

// Operator on O(1;n).
FqMatrix lp_operator(const PEnvelopeElement& A);
// Operator p-th power decomposed by generator images (f from the image of x,
// tails from the images of x^(p^j)); throws NotInSpanError on residue.
PEnvelopeElement lp_pth(const PEnvelopeElement& A);
PEnvelopeElement lp_pth_iter(const PEnvelopeElement& A, uint32_t k);
bool lp_is_nilpotent(const PEnvelopeElement& A);

// Membership in L_(0): all tails zero and poly in the maximal ideal.
bool lp_in_L0(const PEnvelopeElement& A);
// Membership in L_(j) (j >= -1, tails count as outside for j >= 0).
bool lp_in_filtration(const PEnvelopeElement& A, int64_t j);

// Admissible automorphisms act on L_p:
//   Phi(g d)     = (y')^{-1} Phi(g) d,
//   Phi(d^{p^i}) = d^{p^i} - (y')^{-1} (d^{p^i} y) d.
PEnvelopeElement admissible_apply_lp(const AdmissibleAutomorphism& Phi, const PEnvelopeElement& A);

// "poly{...};tails{a1,...,a_{n-1}}"
std::string lp_to_string(const PEnvelopeElement& A);
PEnvelopeElement lp_parse(ShapePtr ctx, const std::string& text);

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

struct AdmissibleChain {
    std::vector<std::vector<FieldElement>> steps;  // alpha-vectors, applied left to right

    AutoChain as_auto_chain() const;
};

PEnvelopeElement apply_admissible_chain(const AdmissibleChain& chain, PEnvelopeElement A);

// D = alpha_0 d + f(x) d with alpha_0 != 0  ~>  d + sum l_i x^(p^i - 1) d.
struct YaoShuResult {
    AdmissibleChain chain;
    PEnvelopeElement form;
};
YaoShuResult yao_shu_reduce(const PEnvelopeElement& D);

// D = d^{p^t} + sum_{i<t} beta_i d^{p^i} + g(x) d, reduced by admissible
// automorphisms with identical linear part.  Residual support of the d
// coefficient: the constant, the invariant positions p^k - p^t (t < k < n,
// empty for n = 2), and the top block x^(p^n - p^t) h(x) with deg h < p^t.
struct TyurinResult {
    AdmissibleChain chain;
    PEnvelopeElement form;
};
TyurinResult tyurin_reduce(const PEnvelopeElement& D, uint32_t t);

// Regular <=> D^{p^{n-1}} outside L_(0); requires D^{p^n} = 0.
struct NilpotentClass {
    bool regular = false;
    PEnvelopeElement witness;  // D^{p^{n-1}}
    std::optional<YaoShuResult> toward_partial;  // for regular alpha_0 d + f d inputs
};
NilpotentClass classify_nilpotent(const PEnvelopeElement& D);

// Lie(G) tangent check: the one-parameter admissible families x -> x + t x^(i+1)
// (i + 1 not a power of p) have first-order derivative d_i, and those d_i span
// a space of dimension p^n - n.
struct LieGReport {
    uint32_t expected_dim = 0;
    uint32_t span_dim = 0;
    bool tangents_match = true;
    bool ok() const { return span_dim == expected_dim && tangents_match; }
};
LieGReport lie_g_check(ShapePtr ctx);

// ---------------------------------------------------------------------------
// The e_alpha presentation over F_q, q = p^n, inside F_{p^M}
// ---------------------------------------------------------------------------

class ZassenhausEAlgebra {
public:
    static ZassenhausEAlgebra build(uint32_t p, uint32_t n, uint32_t M);

    const Fq& F() const { return *F_; }
    uint32_t p() const { return F_->p(); }
    uint32_t n() const { return n_; }
    uint64_t q() const { return q_; }

    // subfield F_q inside F_{p^M}
    const std::vector<FieldElement>& subfield() const { return subfield_; }
    size_t subfield_index(const FieldElement& a) const;

    // L = span{e_alpha}: adjoint operators on L itself (q x q matrices).
    const FqMatrix& ad_e(size_t idx) const { return ad_e_.at(idx); }
    // L_p realization: basis e_0..e_{q-1} followed by the p-closure extras.
    const MatrixAlgebra& Lp() const { return Lp_; }
    size_t lp_dim() const { return Lp_.dim(); }

    Coords e_coords(size_t idx) const;  // e_alpha as an L_p element

    // sigma(e_alpha) = xi^{-1} e_{xi alpha} as a matrix on L.
    const FieldElement& xi() const { return xi_; }
    FqMatrix sigma_on_L() const;

private:
    std::shared_ptr<Fq> F_storage_;
    const Fq* F_ = nullptr;
    uint32_t n_ = 0;
    uint64_t q_ = 0;
    std::vector<FieldElement> subfield_;
    std::vector<FqMatrix> ad_e_;
    MatrixAlgebra Lp_;
    FieldElement xi_;
};

struct E0TorusReport {
    bool periodicity = false;     // e_0^{p^n} = e_0
    bool independent = false;     // e_0, ..., e_0^{p^{n-1}} independent
    uint32_t semisimple_rank = 0;
    bool abelian = false;
    bool ok() const { return periodicity && independent && abelian; }
};
E0TorusReport e0_torus(const ZassenhausEAlgebra& zalg);

struct SigmaReport {
    bool automorphism = false;        // sigma[x,y] = [sigma x, sigma y] on all basis pairs
    bool periodic = false;            // sigma^{p^n - 1} = id
    bool multiplicities = false;      // eigenvalue xi^{-1} twice, all others once
    bool ok() const { return automorphism && periodic && multiplicities; }
};
SigmaReport sigma_grading_check(const ZassenhausEAlgebra& zalg);

// The basis bijection x^(a) -> x^(a_0,...,a_{n-1}) (p-adic digits of a) is an
// algebra isomorphism O(1;n) -> O(n;1); conjugation by it embeds W(1;n)_p into
// W(n;1).  Used as a verification map for the reduction results.
DPElement iota_poly(const DPElement& f, ShapePtr target);
DerivationElement iota_embed(const PEnvelopeElement& A, ShapePtr target);

struct SeparationReport {
    uint64_t points = 0;            // |V(F_{p^M})|
    uint64_t nilpotent = 0;         // nonzero nilpotent points of V
    uint64_t singular_nonzero = 0;  // nonzero points in N_sing
    bool u_found = false;
    bool u_toral = false;
    bool ok() const { return u_found && u_toral && singular_nonzero == 0; }
};
SeparationReport singular_separation_check(uint32_t p, uint32_t n, uint32_t M, uint32_t workers = 1);

}  // namespace modlie
