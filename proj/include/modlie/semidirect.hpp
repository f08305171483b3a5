#pragma once

#include "modlie/automorphisms.hpp"

namespace modlie {

using SVec = std::vector<FieldElement>;  // element of S in basis coordinates

// Simple restricted Lie algebra given by structure constants, with the p-map
// recovered from the (faithful) adjoint representation.
class SAlgebra {
public:
    // c[i][j] = coordinates of [b_i, b_j].  Antisymmetry, Jacobi, and
    // ad(x^{[p]}) = (ad x)^p are validated.
    static SAlgebra from_structure_constants(FieldSpec field,
                                             std::vector<std::vector<SVec>> c);
    static SAlgebra sl2(uint32_t p);

    const Fq& F() const { return *F_; }
    size_t dim() const { return dim_; }
    const FqMatrix& ad(size_t i) const { return ad_.at(i); }

    SVec zero() const { return SVec(dim_, F_->zero()); }
    SVec unit(size_t i) const;
    bool is_zero(const SVec& x) const;
    SVec add(const SVec& x, const SVec& y) const;
    SVec scale(const SVec& x, const FieldElement& c) const;
    SVec bracket(const SVec& x, const SVec& y) const;
    SVec pth(const SVec& x) const;
    FqMatrix ad_of(const SVec& x) const;
    // Restricted p-power test through the adjoint realization.
    bool is_nilpotent(const SVec& x) const;

private:
    std::shared_ptr<Fq> F_storage_;
    const Fq* F_ = nullptr;
    size_t dim_ = 0;
    std::vector<std::vector<SVec>> c_;
    std::vector<FqMatrix> ad_;
    std::optional<MatrixAlgebra> adalg_;
};

// Element of L = (S (x) O(m;1)) |x D: one polynomial per S-basis vector plus
// a tail in the transitive subalgebra D.
struct SemiElement {
    std::vector<DPElement> tensor;
    DerivationElement tail;
};

class SemidirectAlgebra {
public:
    // Validates: O(m;1) shape over the same field as S; D a restricted,
    // bracket-closed, transitive subalgebra of W(m;1).
    static SemidirectAlgebra make(SAlgebra S, ShapePtr O, std::vector<DerivationElement> Dbasis);

    const SAlgebra& S() const { return S_; }
    const ShapePtr& O() const { return O_; }
    const Fq& F() const { return O_->F(); }
    const std::vector<DerivationElement>& D_basis() const { return Dbasis_; }
    size_t dim() const { return S_.dim() * O_->dim() + Dbasis_.size(); }
    const MatrixAlgebra& rep() const { return rep_; }

    SemiElement zero() const;
    SemiElement element(std::vector<DPElement> tensor, DerivationElement tail) const;
    SemiElement from_tensor(size_t s_index, const DPElement& f) const;
    SemiElement from_tail(const DerivationElement& d) const;
    bool equal(const SemiElement& A, const SemiElement& B) const;
    bool is_zero(const SemiElement& A) const;

    SemiElement add(const SemiElement& A, const SemiElement& B) const;
    SemiElement sub(const SemiElement& A, const SemiElement& B) const;
    SemiElement scale(const SemiElement& A, const FieldElement& c) const;

    // Structure-level bracket:
    //   [s_a (x) f, s_b (x) g] = [s_a, s_b] (x) fg,
    //   [s (x) f, d] = -s (x) d(f),  tails bracket in D.
    SemiElement bracket(const SemiElement& A, const SemiElement& B) const;

    // Operator p-th power on the faithful module S (x) O(m;1).
    SemiElement pth(const SemiElement& A) const;
    SemiElement pth_iter(const SemiElement& A, uint32_t k) const;
    bool is_nilpotent_direct(const SemiElement& A) const;

    Coords coords_of(const SemiElement& A) const;  // over rep() basis
    SemiElement element_of(const Coords& c) const;
    // Tail membership/decomposition over the registered D basis.
    Coords tail_coords(const DerivationElement& d) const;

    // exp(ad(s~ (x) f)); requires f in the maximal ideal or s~ nilpotent in S.
    ExpAdHandle exp_ad_tensor(const SVec& s, const DPElement& f) const;
    SemiElement apply_handle(const ExpAdHandle& H, const SemiElement& A) const;

    // Normal form data for tails z = lambda d_0 + u (chained head of length s,
    // u in (I d_1 + ... + I d_m) with all coefficient degrees >= p).
    struct TailForm {
        uint32_t s = 0;
        FieldElement lambda;
    };
    std::optional<TailForm> tail_normal_form(const DerivationElement& tail) const;

    struct ReduceStep {
        SVec s;
        DPElement f;
    };
    struct ReduceResult {
        std::vector<ReduceStep> steps;
        SemiElement form;   // s_0' (x) top + v' + tail
        SVec top_coeff;     // s_0'
        TailForm tail_form;
    };
    // Clears the O(s;1)-supported tensor monomials below the top one, smallest
    // |.|_p-degree first.
    ReduceResult semi_reduce(const SemiElement& A) const;
    SemiElement apply_reduce_steps(const std::vector<ReduceStep>& steps, SemiElement A) const;

    struct NilpotencyVerdict {
        bool direct = false;
        bool criterion = false;
        std::string branch;  // "socle-constant" or "reduced-top"
    };
    // Both routes must agree; disagreement raises std::logic_error.
    NilpotencyVerdict is_nilpotent(const SemiElement& A) const;

    std::string to_string(const SemiElement& A) const;
    SemiElement parse(const std::string& text) const;

private:
    SAlgebra S_;
    ShapePtr O_;
    std::vector<DerivationElement> Dbasis_;
    MatrixAlgebra rep_;
    SpanBasis tail_span_;  // Witt coordinates of the D basis, tagged

    SemidirectAlgebra(SAlgebra S, ShapePtr O) : S_(std::move(S)), O_(std::move(O)), tail_span_(O_->F(), 0) {}
};

// The Chapter-style ambient (sl_2 (x) O(m;1)) |x D with D = span{d} or W(m;1).
SemidirectAlgebra make_sl2_loop_algebra(uint32_t p);             // m = 1, D = k d
SemidirectAlgebra make_sl2_witt_algebra(uint32_t p, uint32_t m); // D = W(m;1)

}  // namespace modlie
