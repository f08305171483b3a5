#pragma once

#include "modlie/divided_power.hpp"

namespace modlie {

// Element of W(m;n): D = sum f_i d_i with f_i in O(m;n).
class DerivationElement {
public:
    DerivationElement() = default;
    explicit DerivationElement(ShapePtr ctx);
    DerivationElement(ShapePtr ctx, std::vector<DPElement> parts);

    const ShapePtr& ctx() const { return ctx_; }
    uint32_t m() const { return ctx_->m(); }
    const DPElement& part(uint32_t i) const { return parts_.at(i); }
    DPElement& part(uint32_t i) { return parts_.at(i); }
    bool is_zero() const;

    bool operator==(const DerivationElement& o) const { return parts_ == o.parts_; }

private:
    ShapePtr ctx_;
    std::vector<DPElement> parts_;
};

DerivationElement deriv_zero(ShapePtr ctx);
// x^(a) d_i as an element.
DerivationElement deriv_monomial(ShapePtr ctx, const MultiIndex& a, uint32_t i, const FieldElement& c);
DerivationElement deriv_monomial(ShapePtr ctx, uint64_t rank, uint32_t i, const FieldElement& c);
// d_i
DerivationElement deriv_partial(ShapePtr ctx, uint32_t i);

DerivationElement deriv_add(const DerivationElement& D, const DerivationElement& E);
DerivationElement deriv_sub(const DerivationElement& D, const DerivationElement& E);
DerivationElement deriv_scale(const DerivationElement& D, const FieldElement& c);
// f * D, module action of O(m;n).
DerivationElement deriv_module_mul(const DPElement& f, const DerivationElement& D);

// D(f) by the special derivation rule.
DPElement witt_apply(const DerivationElement& D, const DPElement& f);

// Bracket via the basis formula
// [x^(a)d_i, x^(b)d_j] = C(a+b-e_i, a) x^(a+b-e_i) d_j - C(a+b-e_j, b) x^(a+b-e_j) d_i.
DerivationElement witt_bracket(const DerivationElement& D, const DerivationElement& E);

// Largest l with D in W(m;n)_(l); d_i has degree -1.  Throws on zero.
int64_t derivation_filtration_degree(const DerivationElement& D);
std::optional<int64_t> derivation_filtration_degree_opt(const DerivationElement& D);
bool deriv_in_standard_maximal(const DerivationElement& D);  // degree >= 0

DPElement divergence(const DerivationElement& D);

// f -> d_j(f) d_i - d_i(f) d_j  (image spans S(m;n) with the divergence-zero check).
DerivationElement special_D_ij(uint32_t i, uint32_t j, const DPElement& f);

// Hamiltonian data: sigma(j) = +1 for j <= r, -1 otherwise; j' = j -+ r.  All
// 1-based per the classical indexing, with accessors taking 0-based indices.
struct HamiltonianIndex {
    uint32_t r = 0;

    int sigma(uint32_t j0) const { return j0 < r ? 1 : -1; }          // j0 in [0, 2r)
    uint32_t conj(uint32_t j0) const { return j0 < r ? j0 + r : j0 - r; }
};

// m = 2r:  f -> sum sigma(i) d_i(f) d_{i'}
DerivationElement hamiltonian_D_H(const DPElement& f);
// {f,g} = D_H(f)(g)
DPElement poisson_bracket(const DPElement& f, const DPElement& g);

// m = 2r+1:  D_K(f) = sum_{j<=2r} (sigma(j) d_j(f) + x_{j'} d_{2r+1}(f)) d_{j'}
//                     + (2f - sum_{j<=2r} x_j d_j(f)) d_{2r+1}
DerivationElement contact_D_K(const DPElement& f);
// <f,g> = D_K(f)(g) - 2 g d_{2r+1}(f)
DPElement contact_bracket(const DPElement& f, const DPElement& g);

// Serialization: m blocks joined as "∂1=<dp>;∂2=<dp>;..."
std::string deriv_to_string(const DerivationElement& D);
DerivationElement deriv_parse(ShapePtr ctx, const std::string& text);

// ---------------------------------------------------------------------------
// sl_2 with basis (e, f, h): [e,f]=h, [h,e]=2e, [h,f]=-2f; p-th powers via the
// natural 2x2 matrix representation.
// ---------------------------------------------------------------------------

struct Sl2Element {
    FieldElement e, f, h;

    bool operator==(const Sl2Element&) const = default;
};

class Sl2 {
public:
    explicit Sl2(FieldSpec spec);

    const Fq& F() const { return F_; }
    Sl2Element zero() const { return {}; }
    Sl2Element make(const FieldElement& e, const FieldElement& f, const FieldElement& h) const;
    Sl2Element E() const;
    Sl2Element Fgen() const;
    Sl2Element H() const;

    Sl2Element add(const Sl2Element& x, const Sl2Element& y) const;
    Sl2Element scale(const Sl2Element& x, const FieldElement& c) const;
    Sl2Element bracket(const Sl2Element& x, const Sl2Element& y) const;
    Sl2Element pth(const Sl2Element& x) const;
    bool is_nilpotent(const Sl2Element& x) const;  // x^p == 0
    bool is_zero(const Sl2Element& x) const;

private:
    Fq F_;
};

}  // namespace modlie
