#pragma once

#include <variant>

#include "modlie/restricted.hpp"

namespace modlie {

// ---------------------------------------------------------------------------
// Automorphisms of O(m;1): x_i -> f_i with f_i in the maximal ideal and unit
// Jacobian.  Conjugation D^sigma = sigma . D . sigma^{-1} on W(m;1).
// ---------------------------------------------------------------------------

class TruncatedAutomorphism {
public:
    static TruncatedAutomorphism make(ShapePtr ctx, std::vector<DPElement> images);

    // elementary generators
    static TruncatedAutomorphism identity(ShapePtr ctx);
    static TruncatedAutomorphism swap_vars(ShapePtr ctx, uint32_t i, uint32_t j);
    static TruncatedAutomorphism scale_var(ShapePtr ctx, uint32_t i, const FieldElement& c);
    // x_i -> x_i + g (g in the maximal ideal, free of x_i or of higher degree;
    // validity is re-checked via the Jacobian)
    static TruncatedAutomorphism shift_var(ShapePtr ctx, uint32_t i, const DPElement& g);

    const ShapePtr& ctx() const { return ctx_; }
    const DPElement& image(uint32_t i) const { return img_.at(i); }
    const DPElement& inverse_image(uint32_t i) const { return inv_img_.at(i); }

    DPElement apply_poly(const DPElement& f) const;
    DPElement apply_inverse_poly(const DPElement& f) const;
    DerivationElement conjugate(const DerivationElement& D) const;

    TruncatedAutomorphism inverse() const;
    // (a.compose(b)) acts as first b, then a.
    TruncatedAutomorphism compose(const TruncatedAutomorphism& inner) const;

private:
    ShapePtr ctx_;
    std::vector<DPElement> img_, inv_img_;

    TruncatedAutomorphism() = default;
    static std::vector<DPElement> invert_images(ShapePtr ctx, const std::vector<DPElement>& img);
    DPElement substitute(const DPElement& f, const std::vector<DPElement>& images) const;
};

// ---------------------------------------------------------------------------
// Admissible automorphisms of O(1;n): Phi(x) = sum alpha_i x^(i) with
// alpha_1 != 0 and alpha_{p^j} = 0; they commute with the divided powers.
// ---------------------------------------------------------------------------

class AdmissibleAutomorphism {
public:
    // alphas[i] is the coefficient of x^(i+1); size p^n - 1.
    static AdmissibleAutomorphism make(ShapePtr ctx, std::vector<FieldElement> alphas);
    static AdmissibleAutomorphism identity(ShapePtr ctx);
    static AdmissibleAutomorphism scaling(ShapePtr ctx, const FieldElement& c);
    // Phi(x) = x + c x^(a), with a not a power of p.
    static AdmissibleAutomorphism one_term(ShapePtr ctx, uint32_t a, const FieldElement& c);

    const ShapePtr& ctx() const { return ctx_; }
    const std::vector<FieldElement>& alphas() const { return alpha_; }
    const DPElement& image_of_x() const { return y_; }
    const DPElement& yprime_inverse() const { return yprime_inv_; }

    DPElement apply_poly(const DPElement& f) const;
    AdmissibleAutomorphism inverse() const;
    AdmissibleAutomorphism compose(const AdmissibleAutomorphism& inner) const;

    // Image of x^(a); cached.
    const DPElement& image_power(uint64_t a) const { return images_.at(a); }

private:
    ShapePtr ctx_;
    std::vector<FieldElement> alpha_;
    DPElement y_, yprime_inv_;
    std::vector<DPElement> images_;  // x^(a) -> y^(a), a < p^n

    AdmissibleAutomorphism() = default;
};

// ---------------------------------------------------------------------------
// exp(ad u) on a matrix-realized algebra.  The handle conjugates by the
// truncated module exponential P = sum_{i<p} u^i / i! (u the faithful-module
// operator of the element, with u^p = 0 verified on construction), which is
// the inner automorphism the closed conjugation formulas describe; on the
// socle ideal it coincides with the truncated series of ad u.
// ---------------------------------------------------------------------------

class ExpAdHandle {
public:
    ExpAdHandle(const MatrixAlgebra& alg, const Coords& u);

    Coords apply(const Coords& a) const;
    Coords apply_inverse(const Coords& a) const;

private:
    const MatrixAlgebra* alg_;
    FqMatrix P_, Pinv_;  // module-space exponentials
};

// Matrix of ad(u) acting on algebra coordinates.
FqMatrix ad_matrix(const MatrixAlgebra& alg, const Coords& u);

// ---------------------------------------------------------------------------
// Reduction chains
// ---------------------------------------------------------------------------

struct StepSwap {
    uint32_t i, j;  // 1-based in serialization
};
struct StepScale {
    uint32_t i;
    FieldElement c;
};
struct StepShift {
    uint32_t i;
    DPElement g;
};
struct StepAdmissible {
    std::vector<FieldElement> alphas;
};
struct StepExpAd {
    std::string element;  // serialized element of the ambient algebra
};

using AutoStep = std::variant<StepSwap, StepScale, StepShift, StepAdmissible, StepExpAd>;
using AutoChain = std::vector<AutoStep>;

std::string chain_to_string(const AutoChain& chain, const Fq& F);
TruncatedAutomorphism chain_step_truncated(ShapePtr ctx, const AutoStep& step);
// Applies the chain steps left to right by conjugation.
DerivationElement apply_chain_truncated(ShapePtr ctx, const AutoChain& chain, DerivationElement D);

// Demushkin normal form: conjugates z (not in W(m;1)_(0)) to
// d_1 + x_1^{p-1} sum phi_i d_i with phi_i free of x_1.
struct DemushkinResult {
    AutoChain chain;
    DerivationElement form;
};
DemushkinResult demushkin_reduce(const DerivationElement& z);

// Conjugates a nilpotent y with y^{p^{n-1}} not in W(n;1)_(0) to the chained
// derivation d_1 + x_1^{p-1} d_2 + ... + x_1^{p-1}...x_{n-1}^{p-1} d_n.
struct PremetResult {
    bool regular = false;
    AutoChain chain;                  // valid when regular
    DerivationElement form;           // the target derivation
    DerivationElement witness_power;  // y^{p^{n-1}}
};
PremetResult premet_regular_reduce(const DerivationElement& y);

// The chained derivation d_1 + x_1^{p-1} d_2 + ... (s terms) on O(m;1).
DerivationElement chained_derivation(ShapePtr ctx, uint32_t s);

}  // namespace modlie
