#include "modlie/cartan.hpp"

#include <sstream>

namespace modlie {

DerivationElement::DerivationElement(ShapePtr ctx) : ctx_(std::move(ctx)) {
    parts_.assign(ctx_->m(), DPElement(ctx_));
}

DerivationElement::DerivationElement(ShapePtr ctx, std::vector<DPElement> parts)
    : ctx_(std::move(ctx)), parts_(std::move(parts)) {
    if (parts_.size() != ctx_->m()) throw std::invalid_argument("DerivationElement: arity mismatch");
}

bool DerivationElement::is_zero() const {
    for (const auto& f : parts_) {
        if (!f.is_zero()) return false;
    }
    return true;
}

DerivationElement deriv_zero(ShapePtr ctx) { return DerivationElement(std::move(ctx)); }

DerivationElement deriv_monomial(ShapePtr ctx, const MultiIndex& a, uint32_t i, const FieldElement& c) {
    DerivationElement D(ctx);
    D.part(i) = dp_monomial(ctx, a, c);
    return D;
}

DerivationElement deriv_monomial(ShapePtr ctx, uint64_t rank, uint32_t i, const FieldElement& c) {
    DerivationElement D(ctx);
    D.part(i) = dp_monomial(ctx, rank, c);
    return D;
}

DerivationElement deriv_partial(ShapePtr ctx, uint32_t i) {
    return deriv_monomial(ctx, MultiIndex{std::vector<uint32_t>(ctx->m(), 0)}, i, ctx->F().one());
}

namespace {
void require_same_shape(const DerivationElement& D, const DerivationElement& E) {
    if (!D.ctx() || !E.ctx()) throw std::invalid_argument("derivation op: missing shape");
    if (D.ctx() != E.ctx() && !(D.ctx()->shape() == E.ctx()->shape())) {
        throw std::invalid_argument("derivation op: shape mismatch");
    }
}
}  // namespace

DerivationElement deriv_add(const DerivationElement& D, const DerivationElement& E) {
    require_same_shape(D, E);
    DerivationElement r(D.ctx());
    for (uint32_t i = 0; i < D.m(); ++i) r.part(i) = dp_add(D.part(i), E.part(i));
    return r;
}

DerivationElement deriv_sub(const DerivationElement& D, const DerivationElement& E) {
    require_same_shape(D, E);
    DerivationElement r(D.ctx());
    for (uint32_t i = 0; i < D.m(); ++i) r.part(i) = dp_sub(D.part(i), E.part(i));
    return r;
}

DerivationElement deriv_scale(const DerivationElement& D, const FieldElement& c) {
    DerivationElement r(D.ctx());
    for (uint32_t i = 0; i < D.m(); ++i) r.part(i) = dp_scale(D.part(i), c);
    return r;
}

DerivationElement deriv_module_mul(const DPElement& f, const DerivationElement& D) {
    DerivationElement r(D.ctx());
    for (uint32_t i = 0; i < D.m(); ++i) r.part(i) = dp_mul(f, D.part(i));
    return r;
}

DPElement witt_apply(const DerivationElement& D, const DPElement& f) {
    if (!(D.ctx()->shape() == f.ctx()->shape())) {
        throw std::invalid_argument("witt_apply: shape mismatch");
    }
    DPElement r(f.ctx());
    for (uint32_t i = 0; i < D.m(); ++i) {
        if (D.part(i).is_zero()) continue;
        r = dp_add(r, dp_mul(D.part(i), dp_partial(f, i)));
    }
    return r;
}

DerivationElement witt_bracket(const DerivationElement& D, const DerivationElement& E) {
    require_same_shape(D, E);
    const ShapeCtx& ctx = *D.ctx();
    const Fq& F = ctx.F();
    const uint64_t p = ctx.p();
    DerivationElement r(D.ctx());
    // coeff * C(a+b-e_drop, bottom) x^(a+b-e_drop) d_target, vanishing out of bounds
    auto add_term = [&](FieldElement coeff, const std::vector<uint32_t>& a,
                        const std::vector<uint32_t>& b, uint32_t drop,
                        const std::vector<uint32_t>& bottom, uint32_t target) {
        std::vector<uint32_t> s(ctx.m());
        uint64_t factor = 1;
        for (uint32_t k = 0; k < ctx.m(); ++k) {
            uint64_t sum = static_cast<uint64_t>(a[k]) + b[k];
            if (k == drop) {
                if (sum == 0) return;
                sum -= 1;
            }
            if (sum >= ctx.radix(k)) return;
            s[k] = static_cast<uint32_t>(sum);
            factor = factor * binom_mod_p(sum, bottom[k], p) % p;
            if (factor == 0) return;
        }
        r.part(target).add_coeff(ctx.rank_of(s), F.mul(coeff, F.from_int(static_cast<int64_t>(factor))));
    };
    for (uint32_t i = 0; i < ctx.m(); ++i) {
        for (const auto& [ra, ca] : D.part(i).terms()) {
            std::vector<uint32_t> a = ctx.index_of(ra);
            for (uint32_t j = 0; j < ctx.m(); ++j) {
                for (const auto& [rb, cb] : E.part(j).terms()) {
                    std::vector<uint32_t> b = ctx.index_of(rb);
                    FieldElement cab = F.mul(ca, cb);
                    add_term(cab, a, b, i, a, j);
                    add_term(F.neg(cab), a, b, j, b, i);
                }
            }
        }
    }
    return r;
}

std::optional<int64_t> derivation_filtration_degree_opt(const DerivationElement& D) {
    std::optional<int64_t> best;
    for (uint32_t i = 0; i < D.m(); ++i) {
        auto d = dp_filtration_degree_opt(D.part(i));
        if (d) {
            int64_t v = static_cast<int64_t>(*d) - 1;
            if (!best || v < *best) best = v;
        }
    }
    return best;
}

int64_t derivation_filtration_degree(const DerivationElement& D) {
    auto d = derivation_filtration_degree_opt(D);
    if (!d) throw std::domain_error("derivation_filtration_degree: zero element");
    return *d;
}

bool deriv_in_standard_maximal(const DerivationElement& D) {
    auto d = derivation_filtration_degree_opt(D);
    return !d || *d >= 0;
}

DPElement divergence(const DerivationElement& D) {
    DPElement r(D.ctx());
    for (uint32_t i = 0; i < D.m(); ++i) r = dp_add(r, dp_partial(D.part(i), i));
    return r;
}

DerivationElement special_D_ij(uint32_t i, uint32_t j, const DPElement& f) {
    const ShapePtr& ctx = f.ctx();
    if (i >= ctx->m() || j >= ctx->m()) throw std::out_of_range("special_D_ij: index out of range");
    DerivationElement r(ctx);
    r.part(i) = dp_partial(f, j);
    r.part(j) = dp_sub(r.part(j), dp_partial(f, i));
    if (i == j) return deriv_zero(ctx);
    return r;
}

DerivationElement hamiltonian_D_H(const DPElement& f) {
    const ShapePtr& ctx = f.ctx();
    if (ctx->m() % 2 != 0) throw std::invalid_argument("hamiltonian_D_H: m must be even");
    if (ctx->p() <= 2) throw std::invalid_argument("hamiltonian_D_H: requires p > 2");
    HamiltonianIndex idx{ctx->m() / 2};
    DerivationElement r(ctx);
    for (uint32_t i = 0; i < ctx->m(); ++i) {
        DPElement d = dp_partial(f, i);
        if (idx.sigma(i) < 0) d = dp_neg(d);
        r.part(idx.conj(i)) = dp_add(r.part(idx.conj(i)), d);
    }
    return r;
}

DPElement poisson_bracket(const DPElement& f, const DPElement& g) {
    return witt_apply(hamiltonian_D_H(f), g);
}

DerivationElement contact_D_K(const DPElement& f) {
    const ShapePtr& ctx = f.ctx();
    if (ctx->m() % 2 != 1 || ctx->m() < 3) {
        throw std::invalid_argument("contact_D_K: m must be odd and at least 3");
    }
    if (ctx->p() <= 2) throw std::invalid_argument("contact_D_K: requires p > 2");
    const uint32_t last = ctx->m() - 1;  // index 2r (0-based) of x_{2r+1}
    HamiltonianIndex idx{last / 2};
    DerivationElement r(ctx);
    DPElement dlast = dp_partial(f, last);
    DPElement last_coeff = dp_scale(f, ctx->F().from_int(2));
    for (uint32_t j = 0; j < last; ++j) {
        DPElement part = dp_partial(f, j);
        if (idx.sigma(j) < 0) part = dp_neg(part);
        part = dp_add(part, dp_mul(dp_var(ctx, idx.conj(j)), dlast));
        r.part(idx.conj(j)) = dp_add(r.part(idx.conj(j)), part);
        last_coeff = dp_sub(last_coeff, dp_mul(dp_var(ctx, j), dp_partial(f, j)));
    }
    r.part(last) = dp_add(r.part(last), last_coeff);
    return r;
}

DPElement contact_bracket(const DPElement& f, const DPElement& g) {
    const uint32_t last = f.ctx()->m() - 1;
    DPElement r = witt_apply(contact_D_K(f), g);
    DPElement corr = dp_mul(g, dp_partial(f, last));
    return dp_sub(r, dp_scale(corr, f.ctx()->F().from_int(2)));
}

std::string deriv_to_string(const DerivationElement& D) {
    std::ostringstream os;
    for (uint32_t i = 0; i < D.m(); ++i) {
        if (i) os << ";";
        os << "∂" << (i + 1) << "=" << dp_to_string(D.part(i));
    }
    return os.str();
}

DerivationElement deriv_parse(ShapePtr ctx, const std::string& text) {
    DerivationElement D(ctx);
    size_t pos = 0;
    const std::string marker = "∂";
    uint32_t seen = 0;
    while (pos < text.size()) {
        size_t start = text.find(marker, pos);
        if (start == std::string::npos) break;
        size_t eq = text.find('=', start);
        if (eq == std::string::npos) throw std::invalid_argument("deriv_parse: missing '='");
        uint32_t var = static_cast<uint32_t>(std::stoul(text.substr(start + marker.size(), eq - start - marker.size())));
        size_t end = text.find(";" + marker, eq);
        std::string block = end == std::string::npos ? text.substr(eq + 1) : text.substr(eq + 1, end - eq - 1);
        if (var < 1 || var > ctx->m()) throw std::invalid_argument("deriv_parse: variable out of range");
        D.part(var - 1) = dp_parse(ctx, block);
        ++seen;
        pos = end == std::string::npos ? text.size() : end + 1;
    }
    if (seen != ctx->m()) throw std::invalid_argument("deriv_parse: wrong number of blocks");
    return D;
}

// ---------------------------------------------------------------------------
// sl_2
// ---------------------------------------------------------------------------

Sl2::Sl2(FieldSpec spec) : F_(std::move(spec)) {
    if (F_.p() <= 2) throw std::invalid_argument("Sl2: requires p > 2");
}

Sl2Element Sl2::make(const FieldElement& e, const FieldElement& f, const FieldElement& h) const {
    return Sl2Element{e, f, h};
}

Sl2Element Sl2::E() const { return {F_.one(), F_.zero(), F_.zero()}; }
Sl2Element Sl2::Fgen() const { return {F_.zero(), F_.one(), F_.zero()}; }
Sl2Element Sl2::H() const { return {F_.zero(), F_.zero(), F_.one()}; }

Sl2Element Sl2::add(const Sl2Element& x, const Sl2Element& y) const {
    return {F_.add(x.e, y.e), F_.add(x.f, y.f), F_.add(x.h, y.h)};
}

Sl2Element Sl2::scale(const Sl2Element& x, const FieldElement& c) const {
    return {F_.mul(x.e, c), F_.mul(x.f, c), F_.mul(x.h, c)};
}

Sl2Element Sl2::bracket(const Sl2Element& x, const Sl2Element& y) const {
    // [e,f]=h, [h,e]=2e, [h,f]=-2f
    FieldElement two = F_.from_int(2);
    FieldElement e = F_.mul(two, F_.sub(F_.mul(x.h, y.e), F_.mul(y.h, x.e)));
    FieldElement f = F_.mul(two, F_.sub(F_.mul(y.h, x.f), F_.mul(x.h, y.f)));
    FieldElement h = F_.sub(F_.mul(x.e, y.f), F_.mul(y.e, x.f));
    return {e, f, h};
}

Sl2Element Sl2::pth(const Sl2Element& x) const {
    // p-th power of the matrix [[h, e], [f, -h]].
    const uint32_t p = F_.p();
    std::array<FieldElement, 4> M = {x.h, x.e, x.f, F_.neg(x.h)};
    std::array<FieldElement, 4> R = {F_.one(), F_.zero(), F_.zero(), F_.one()};
    uint32_t e = p;
    auto mul2 = [&](const std::array<FieldElement, 4>& A, const std::array<FieldElement, 4>& B) {
        return std::array<FieldElement, 4>{
            F_.add(F_.mul(A[0], B[0]), F_.mul(A[1], B[2])),
            F_.add(F_.mul(A[0], B[1]), F_.mul(A[1], B[3])),
            F_.add(F_.mul(A[2], B[0]), F_.mul(A[3], B[2])),
            F_.add(F_.mul(A[2], B[1]), F_.mul(A[3], B[3]))};
    };
    while (e) {
        if (e & 1) R = mul2(R, M);
        M = mul2(M, M);
        e >>= 1;
    }
    // R is traceless again (p-th power of a traceless 2x2 in char p).
    return {R[1], R[2], R[0]};
}

bool Sl2::is_nilpotent(const Sl2Element& x) const {
    Sl2Element xp = pth(x);
    return F_.is_zero(xp.e) && F_.is_zero(xp.f) && F_.is_zero(xp.h);
}

bool Sl2::is_zero(const Sl2Element& x) const {
    return F_.is_zero(x.e) && F_.is_zero(x.f) && F_.is_zero(x.h);
}

}  // namespace modlie
