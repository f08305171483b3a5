#include "modlie/automorphisms.hpp"

#include <sstream>

namespace modlie {

namespace {

void require_truncated(const ShapeCtx& ctx, const char* who) {
    for (uint32_t i = 0; i < ctx.m(); ++i) {
        if (ctx.shape().heights[i] != 1) {
            throw std::invalid_argument(std::string(who) + ": shape must be O(m;1)");
        }
    }
}

// f with every exponent of variable i equal to zero?
bool free_of_var(const DPElement& f, uint32_t i) {
    const ShapeCtx& ctx = *f.ctx();
    for (const auto& [rank, c] : f.terms()) {
        (void)c;
        if (ctx.index_of(rank)[i] != 0) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// TruncatedAutomorphism
// ---------------------------------------------------------------------------

DPElement TruncatedAutomorphism::substitute(const DPElement& f,
                                            const std::vector<DPElement>& images) const {
    const ShapeCtx& ctx = *ctx_;
    const Fq& F = ctx.F();
    DPElement r(ctx_);
    // x^(a) = prod x_i^{a_i} / a_i!  ->  prod images_i^{a_i} / a_i!
    for (const auto& [rank, c] : f.terms()) {
        std::vector<uint32_t> a = ctx.index_of(rank);
        DPElement term = dp_one(ctx_);
        FieldElement coef = c;
        for (uint32_t i = 0; i < ctx.m() && !term.is_zero(); ++i) {
            if (a[i] == 0) continue;
            int64_t fact = 1;
            for (uint32_t k = 2; k <= a[i]; ++k) fact = fact * k % ctx.p();
            coef = F.mul(coef, F.inv(F.from_int(fact)));
            term = dp_mul(term, dp_pow(images[i], a[i]));
        }
        r = dp_add(r, dp_scale(term, coef));
    }
    return r;
}

std::vector<DPElement> TruncatedAutomorphism::invert_images(ShapePtr ctx,
                                                            const std::vector<DPElement>& img) {
    const Fq& F = ctx->F();
    const uint32_t m = ctx->m();
    // Linear parts A_{ij} = coefficient of x_j in img_i; invertibility of A is
    // exactly the unit-Jacobian condition.
    FqMatrix A(F, m, m);
    for (uint32_t i = 0; i < m; ++i) {
        for (uint32_t j = 0; j < m; ++j) {
            std::vector<uint32_t> e(m, 0);
            e[j] = 1;
            A.at(i, j) = img[i].coeff(ctx->rank_of(e));
        }
    }
    auto Binv = A.inverse();
    if (!Binv) throw std::invalid_argument("TruncatedAutomorphism: Jacobian is not a unit");
    // g_j := sum_k B_{jk} x_k, then correct until g_j(img) == x_j exactly.
    std::vector<DPElement> g(m, dp_zero(ctx));
    for (uint32_t j = 0; j < m; ++j) {
        for (uint32_t k = 0; k < m; ++k) {
            g[j] = dp_add(g[j], dp_scale(dp_var(ctx, k), Binv->at(j, k)));
        }
    }
    TruncatedAutomorphism fwd;
    fwd.ctx_ = ctx;
    fwd.img_ = img;
    uint32_t max_deg = m * (ctx->p() - 1);
    for (uint32_t round = 0; round <= max_deg + 1; ++round) {
        bool clean = true;
        for (uint32_t j = 0; j < m; ++j) {
            DPElement err = dp_sub(fwd.substitute(g[j], img), dp_var(ctx, j));
            if (err.is_zero()) continue;
            clean = false;
            // delta = -err(g): pushes the error to strictly higher degree.
            g[j] = dp_sub(g[j], fwd.substitute(err, g));
        }
        if (clean) return g;
    }
    throw std::logic_error("TruncatedAutomorphism: inverse iteration failed to converge");
}

TruncatedAutomorphism TruncatedAutomorphism::make(ShapePtr ctx, std::vector<DPElement> images) {
    require_truncated(*ctx, "TruncatedAutomorphism");
    if (images.size() != ctx->m()) throw std::invalid_argument("TruncatedAutomorphism: arity mismatch");
    for (const auto& f : images) {
        if (!dp_in_maximal_ideal(f)) {
            throw std::invalid_argument("TruncatedAutomorphism: images must lie in the maximal ideal");
        }
    }
    TruncatedAutomorphism t;
    t.ctx_ = std::move(ctx);
    t.img_ = std::move(images);
    t.inv_img_ = invert_images(t.ctx_, t.img_);
    return t;
}

TruncatedAutomorphism TruncatedAutomorphism::identity(ShapePtr ctx) {
    std::vector<DPElement> img;
    for (uint32_t i = 0; i < ctx->m(); ++i) img.push_back(dp_var(ctx, i));
    return make(std::move(ctx), std::move(img));
}

TruncatedAutomorphism TruncatedAutomorphism::swap_vars(ShapePtr ctx, uint32_t i, uint32_t j) {
    std::vector<DPElement> img;
    for (uint32_t k = 0; k < ctx->m(); ++k) {
        uint32_t tgt = k == i ? j : (k == j ? i : k);
        img.push_back(dp_var(ctx, tgt));
    }
    return make(std::move(ctx), std::move(img));
}

TruncatedAutomorphism TruncatedAutomorphism::scale_var(ShapePtr ctx, uint32_t i, const FieldElement& c) {
    if (ctx->F().is_zero(c)) throw std::invalid_argument("TruncatedAutomorphism: zero scaling");
    std::vector<DPElement> img;
    for (uint32_t k = 0; k < ctx->m(); ++k) {
        DPElement v = dp_var(ctx, k);
        img.push_back(k == i ? dp_scale(v, c) : v);
    }
    return make(std::move(ctx), std::move(img));
}

TruncatedAutomorphism TruncatedAutomorphism::shift_var(ShapePtr ctx, uint32_t i, const DPElement& g) {
    std::vector<DPElement> img;
    for (uint32_t k = 0; k < ctx->m(); ++k) {
        DPElement v = dp_var(ctx, k);
        img.push_back(k == i ? dp_add(v, g) : v);
    }
    return make(std::move(ctx), std::move(img));
}

DPElement TruncatedAutomorphism::apply_poly(const DPElement& f) const { return substitute(f, img_); }

DPElement TruncatedAutomorphism::apply_inverse_poly(const DPElement& f) const {
    return substitute(f, inv_img_);
}

DerivationElement TruncatedAutomorphism::conjugate(const DerivationElement& D) const {
    // D^sigma (x_j) = sigma(D(sigma^{-1}(x_j)))
    DerivationElement r(ctx_);
    for (uint32_t j = 0; j < ctx_->m(); ++j) {
        r.part(j) = apply_poly(witt_apply(D, inv_img_[j]));
    }
    return r;
}

TruncatedAutomorphism TruncatedAutomorphism::inverse() const {
    TruncatedAutomorphism t;
    t.ctx_ = ctx_;
    t.img_ = inv_img_;
    t.inv_img_ = img_;
    return t;
}

TruncatedAutomorphism TruncatedAutomorphism::compose(const TruncatedAutomorphism& inner) const {
    std::vector<DPElement> img;
    for (uint32_t i = 0; i < ctx_->m(); ++i) {
        img.push_back(apply_poly(inner.img_[i]));
    }
    return make(ctx_, std::move(img));
}

// ---------------------------------------------------------------------------
// AdmissibleAutomorphism
// ---------------------------------------------------------------------------

AdmissibleAutomorphism AdmissibleAutomorphism::make(ShapePtr ctx, std::vector<FieldElement> alphas) {
    if (ctx->m() != 1) throw std::invalid_argument("AdmissibleAutomorphism: shape must be O(1;n)");
    const Fq& F = ctx->F();
    const uint64_t q = ctx->dim();  // p^n
    if (alphas.size() != q - 1) {
        throw std::invalid_argument("AdmissibleAutomorphism: need p^n - 1 coefficients");
    }
    if (F.is_zero(alphas[0])) {
        throw std::invalid_argument("AdmissibleAutomorphism: alpha_1 must be nonzero");
    }
    uint64_t pk = ctx->p();
    while (pk < q) {
        if (!F.is_zero(alphas[pk - 1])) {
            throw std::invalid_argument("AdmissibleAutomorphism: alpha_{p^j} must vanish");
        }
        pk *= ctx->p();
    }
    AdmissibleAutomorphism A;
    A.ctx_ = ctx;
    A.alpha_ = std::move(alphas);
    A.y_ = dp_zero(ctx);
    for (uint64_t i = 1; i < q; ++i) A.y_.add_coeff(i, A.alpha_[i - 1]);
    A.yprime_inv_ = dp_inverse(dp_partial(A.y_, 0));
    A.images_.resize(q);
    A.images_[0] = dp_one(ctx);
    for (uint64_t a = 1; a < q; ++a) {
        if (a % ctx->p() == 0) {
            A.images_[a] = dp_divided_power(A.y_, a);
        } else {
            // y^(a-1) y = C(a, 1) y^(a) = a y^(a)
            A.images_[a] = dp_scale(dp_mul(A.images_[a - 1], A.y_),
                                    F.inv(F.from_int(static_cast<int64_t>(a % ctx->p()))));
        }
    }
    return A;
}

AdmissibleAutomorphism AdmissibleAutomorphism::identity(ShapePtr ctx) {
    std::vector<FieldElement> a(ctx->dim() - 1, ctx->F().zero());
    a[0] = ctx->F().one();
    return make(std::move(ctx), std::move(a));
}

AdmissibleAutomorphism AdmissibleAutomorphism::scaling(ShapePtr ctx, const FieldElement& c) {
    std::vector<FieldElement> a(ctx->dim() - 1, ctx->F().zero());
    a[0] = c;
    return make(std::move(ctx), std::move(a));
}

AdmissibleAutomorphism AdmissibleAutomorphism::one_term(ShapePtr ctx, uint32_t a, const FieldElement& c) {
    std::vector<FieldElement> al(ctx->dim() - 1, ctx->F().zero());
    al[0] = ctx->F().one();
    if (a < 2 || a >= ctx->dim()) throw std::invalid_argument("AdmissibleAutomorphism: exponent out of range");
    al[a - 1] = ctx->F().add(al[a - 1], c);
    return make(std::move(ctx), std::move(al));
}

DPElement AdmissibleAutomorphism::apply_poly(const DPElement& f) const {
    DPElement r(ctx_);
    for (const auto& [rank, c] : f.terms()) {
        r = dp_add(r, dp_scale(images_[rank], c));
    }
    return r;
}

AdmissibleAutomorphism AdmissibleAutomorphism::inverse() const {
    // Solve sum_a beta_a y^(a) = x by triangular elimination on exponents.
    const Fq& F = ctx_->F();
    const uint64_t q = ctx_->dim();
    std::vector<FieldElement> beta(q - 1, F.zero());
    DPElement residual = dp_var(ctx_, 0);
    for (uint64_t e = 1; e < q; ++e) {
        FieldElement lead = images_[e].coeff(e);  // alpha_1^e, nonzero
        FieldElement b = F.mul(residual.coeff(e), F.inv(lead));
        beta[e - 1] = b;
        if (!F.is_zero(b)) residual = dp_sub(residual, dp_scale(images_[e], b));
    }
    if (!residual.is_zero()) throw std::logic_error("AdmissibleAutomorphism::inverse: elimination failed");
    return make(ctx_, std::move(beta));
}

AdmissibleAutomorphism AdmissibleAutomorphism::compose(const AdmissibleAutomorphism& inner) const {
    DPElement img = apply_poly(inner.y_);
    std::vector<FieldElement> alphas(ctx_->dim() - 1, ctx_->F().zero());
    for (const auto& [rank, c] : img.terms()) {
        if (rank == 0) throw std::logic_error("AdmissibleAutomorphism::compose: constant term");
        alphas[rank - 1] = c;
    }
    return make(ctx_, std::move(alphas));
}

// ---------------------------------------------------------------------------
// exp(ad)
// ---------------------------------------------------------------------------

FqMatrix ad_matrix(const MatrixAlgebra& alg, const Coords& u) {
    const Fq& F = alg.F();
    FqMatrix M(F, alg.dim(), alg.dim());
    for (size_t j = 0; j < alg.dim(); ++j) {
        Coords col = alg.bracket(u, alg.unit(j));
        for (size_t i = 0; i < alg.dim(); ++i) M.at(i, j) = col[i];
    }
    return M;
}

ExpAdHandle::ExpAdHandle(const MatrixAlgebra& alg, const Coords& u) : alg_(&alg) {
    const Fq& F = alg.F();
    const uint32_t p = F.p();
    FqMatrix U = alg.realize(u);
    if (!U.pow(p).is_zero()) {
        // u^{[p]} = 0 fails, and with it (ad u)^p = ad(u^{[p]}) in this
        // faithful realization; reject with the witness.
        throw std::domain_error("exp_ad: u^p != 0 in the faithful module");
    }
    size_t n = alg.module_dim();
    FqMatrix P = FqMatrix::identity(F, n);
    FqMatrix Pinv = P;
    FqMatrix term = FqMatrix::identity(F, n);
    FieldElement fact = F.one();
    for (uint32_t i = 1; i < p; ++i) {
        term = term.mul(U);
        fact = F.mul(fact, F.from_int(i));
        FqMatrix scaled = term.scale(F.inv(fact));
        P = P.add(scaled);
        if (i % 2 == 0) {
            Pinv = Pinv.add(scaled);
        } else {
            Pinv = Pinv.sub(scaled);
        }
    }
    if (!(P.mul(Pinv) == FqMatrix::identity(F, n))) {
        throw std::logic_error("exp_ad: exp(u) exp(-u) != id");
    }
    P_ = std::move(P);
    Pinv_ = std::move(Pinv);
}

Coords ExpAdHandle::apply(const Coords& a) const {
    return alg_->decompose(P_.mul(alg_->realize(a)).mul(Pinv_));
}

Coords ExpAdHandle::apply_inverse(const Coords& a) const {
    return alg_->decompose(Pinv_.mul(alg_->realize(a)).mul(P_));
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

std::string chain_to_string(const AutoChain& chain, const Fq& F) {
    std::ostringstream os;
    bool first = true;
    for (const auto& step : chain) {
        if (!first) os << "\n";
        first = false;
        if (const auto* s = std::get_if<StepSwap>(&step)) {
            os << "swap(" << (s->i + 1) << "," << (s->j + 1) << ")";
        } else if (const auto* s2 = std::get_if<StepScale>(&step)) {
            os << "scale(" << (s2->i + 1) << "," << F.to_string(s2->c) << ")";
        } else if (const auto* s3 = std::get_if<StepShift>(&step)) {
            os << "shift(" << (s3->i + 1) << "," << dp_to_string(s3->g) << ")";
        } else if (const auto* s4 = std::get_if<StepAdmissible>(&step)) {
            os << "admissible(";
            for (size_t k = 0; k < s4->alphas.size(); ++k) {
                if (k) os << ",";
                os << F.to_string(s4->alphas[k]);
            }
            os << ")";
        } else if (const auto* s5 = std::get_if<StepExpAd>(&step)) {
            os << "expad(" << s5->element << ")";
        }
    }
    return os.str();
}

TruncatedAutomorphism chain_step_truncated(ShapePtr ctx, const AutoStep& step) {
    if (const auto* s = std::get_if<StepSwap>(&step)) {
        return TruncatedAutomorphism::swap_vars(ctx, s->i, s->j);
    }
    if (const auto* s = std::get_if<StepScale>(&step)) {
        return TruncatedAutomorphism::scale_var(ctx, s->i, s->c);
    }
    if (const auto* s = std::get_if<StepShift>(&step)) {
        return TruncatedAutomorphism::shift_var(ctx, s->i, s->g);
    }
    throw std::invalid_argument("chain_step_truncated: step kind not valid for W(m;1)");
}

DerivationElement apply_chain_truncated(ShapePtr ctx, const AutoChain& chain, DerivationElement D) {
    for (const auto& step : chain) {
        D = chain_step_truncated(ctx, step).conjugate(D);
    }
    return D;
}

// ---------------------------------------------------------------------------
// Demushkin reduction
// ---------------------------------------------------------------------------

DerivationElement chained_derivation(ShapePtr ctx, uint32_t s) {
    require_truncated(*ctx, "chained_derivation");
    if (s < 1 || s > ctx->m()) throw std::invalid_argument("chained_derivation: bad length");
    const Fq& F = ctx->F();
    const uint32_t p = ctx->p();
    DerivationElement D(ctx);
    FieldElement coef = F.one();
    std::vector<uint32_t> a(ctx->m(), 0);
    for (uint32_t i = 0; i < s; ++i) {
        D.part(i) = dp_monomial(ctx, MultiIndex{a}, coef);
        a[i] = p - 1;
        coef = F.mul_int(coef, -1);  // (p-1)! = -1 per extra plain-power block
    }
    return D;
}

DemushkinResult demushkin_reduce(const DerivationElement& z) {
    const ShapePtr& ctx = z.ctx();
    require_truncated(*ctx, "demushkin_reduce");
    const Fq& F = ctx->F();
    const uint32_t m = ctx->m();
    const uint32_t p = ctx->p();
    if (deriv_in_standard_maximal(z)) {
        throw std::invalid_argument("demushkin_reduce: element lies in W(m;1)_(0)");
    }
    DemushkinResult out;
    DerivationElement cur = z;
    auto push = [&](AutoStep step) {
        cur = chain_step_truncated(ctx, step).conjugate(cur);
        out.chain.push_back(std::move(step));
    };
    // Bring a unit coefficient to d_1.
    uint32_t mu = m;
    for (uint32_t i = 0; i < m; ++i) {
        if (!F.is_zero(dp_constant_term(cur.part(i)))) {
            mu = i;
            break;
        }
    }
    if (mu == m) throw std::logic_error("demushkin_reduce: no unit coefficient");
    if (mu != 0) push(StepSwap{0, mu});
    // Normalize the constant to 1.
    FieldElement c0 = dp_constant_term(cur.part(0));
    if (!(c0 == F.one())) push(StepScale{0, c0});
    // Clear the constants of the remaining coefficients.
    for (uint32_t j = 1; j < m; ++j) {
        FieldElement cj = dp_constant_term(cur.part(j));
        if (!F.is_zero(cj)) {
            push(StepShift{j, dp_scale(dp_var(ctx, 0), cj)});
        }
    }
    // Degree sweep: clear every monomial of f_i (i-th coefficient) whose
    // x_1-exponent is at most p-2, low degrees first.  Conjugating by
    // x_j -> x_j + g (g of degree d+1) replaces f_j by f_j - d_1(g) up to
    // strictly higher-degree terms, so g = (offending part shifted by e_1)
    // clears degree d exactly.
    const uint32_t max_deg = m * (p - 1);
    for (uint32_t d = 1; d <= max_deg; ++d) {
        for (uint32_t j = 0; j < m; ++j) {
            DPElement g(ctx);
            for (const auto& [rank, c] : cur.part(j).terms()) {
                std::vector<uint32_t> a = ctx->index_of(rank);
                uint32_t deg = MultiIndex{a}.total_degree();
                if (deg != d || a[0] >= p - 1) continue;
                a[0] += 1;
                g.add_coeff(ctx->rank_of(a), c);
            }
            if (!g.is_zero()) push(StepShift{j, g});
        }
    }
    // Shape check: f_1 = 1 + x_1^{p-1} phi_1, f_i = x_1^{p-1} phi_i.
    for (uint32_t j = 0; j < m; ++j) {
        for (const auto& [rank, c] : cur.part(j).terms()) {
            (void)c;
            std::vector<uint32_t> a = ctx->index_of(rank);
            bool constant_one = j == 0 && MultiIndex{a}.total_degree() == 0;
            if (!constant_one && a[0] != p - 1) {
                throw std::logic_error("demushkin_reduce: sweep left an offending monomial");
            }
        }
    }
    out.form = cur;
    return out;
}

// ---------------------------------------------------------------------------
// Premet reduction
// ---------------------------------------------------------------------------

namespace {

// Splits off phi and alpha with psi = D0(phi) + alpha * x_1^{p-1}...x_{r}^{p-1}
// where D0 is the chained derivation on the first r variables and phi has zero
// constant term and involves only those variables.
struct PsiSplit {
    DPElement phi;
    FieldElement alpha;
};

PsiSplit split_against_chained(const ShapePtr& ctx, uint32_t r, const DPElement& psi) {
    const Fq& F = ctx->F();
    DerivationElement D0 = chained_derivation(ctx, r);
    // Unknowns: coefficients of phi on monomials in x_1..x_r with positive
    // degree, plus alpha.
    std::vector<uint64_t> monos;
    for (uint64_t rank = 0; rank < ctx->dim(); ++rank) {
        std::vector<uint32_t> a = ctx->index_of(rank);
        bool inside = true;
        for (uint32_t i = r; i < ctx->m(); ++i) inside &= a[i] == 0;
        if (inside && rank != 0) monos.push_back(rank);
    }
    std::vector<uint32_t> top(ctx->m(), 0);
    for (uint32_t i = 0; i < r; ++i) top[i] = ctx->p() - 1;
    uint64_t top_rank = ctx->rank_of(top);
    FqMatrix A(F, ctx->dim(), monos.size() + 1);
    for (size_t k = 0; k < monos.size(); ++k) {
        DPElement img = witt_apply(D0, dp_monomial(ctx, monos[k], F.one()));
        for (const auto& [rank, c] : img.terms()) A.at(rank, k) = c;
    }
    A.at(top_rank, monos.size()) = F.one();
    FqMatrix rhs(F, ctx->dim(), 1);
    for (const auto& [rank, c] : psi.terms()) rhs.at(rank, 0) = c;
    auto sol = A.solve(rhs);
    if (!sol) throw std::logic_error("premet_regular_reduce: psi split failed");
    PsiSplit out{dp_zero(ctx), sol->at(monos.size(), 0)};
    for (size_t k = 0; k < monos.size(); ++k) out.phi.set_coeff(monos[k], sol->at(k, 0));
    return out;
}

// Recursive Premet step on the first r variables; y must involve only them.
AutoChain premet_rec(const WittRealization& W, DerivationElement& y, uint32_t r) {
    const ShapePtr& ctx = y.ctx();
    const Fq& F = ctx->F();
    AutoChain chain;
    auto push = [&](AutoStep step) {
        y = chain_step_truncated(ctx, step).conjugate(y);
        chain.push_back(std::move(step));
    };
    auto append = [&](const AutoChain& sub) {
        for (const auto& step : sub) chain.push_back(step);
    };
    if (r == 1) {
        DemushkinResult dem = demushkin_reduce(y);
        if (!(dem.form == deriv_partial(ctx, 0))) {
            throw std::logic_error("premet_regular_reduce: nilpotent base case did not reach d_1");
        }
        y = dem.form;
        append(dem.chain);
        return chain;
    }
    // z = y^{p^{r-1}} satisfies z^p = 0, z not in W_(0): demushkin sends it to d_1.
    DerivationElement z = W.pth_power_iter(y, r - 1);
    DemushkinResult dem = demushkin_reduce(z);
    if (!(dem.form == deriv_partial(ctx, 0))) {
        throw std::logic_error("premet_regular_reduce: power stage did not reach d_1");
    }
    for (const auto& step : dem.chain) {
        y = chain_step_truncated(ctx, step).conjugate(y);
        chain.push_back(step);
    }
    push(StepSwap{0, r - 1});
    // Now y^{p^{r-1}} = d_r and y = y_1 + psi d_r with everything free of x_r.
    if (!(W.pth_power_iter(y, r - 1) == deriv_partial(ctx, r - 1))) {
        throw std::logic_error("premet_regular_reduce: conjugated power mismatch");
    }
    DPElement psi = y.part(r - 1);
    DerivationElement y1(ctx);
    for (uint32_t i = 0; i + 1 < r; ++i) y1.part(i) = y.part(i);
    for (uint32_t i = 0; i < r; ++i) {
        if (!free_of_var(y.part(i), r - 1)) {
            throw std::logic_error("premet_regular_reduce: centralizer form violated");
        }
    }
    for (uint32_t i = r; i < ctx->m(); ++i) {
        if (!y.part(i).is_zero()) throw std::logic_error("premet_regular_reduce: outside active variables");
    }
    // Recurse on y_1 in the first r-1 variables.
    DerivationElement reduced = y1;
    AutoChain sub = premet_rec(W, reduced, r - 1);
    for (const auto& step : sub) {
        y = chain_step_truncated(ctx, step).conjugate(y);
        chain.push_back(step);
    }
    // y = D0 + psi' d_r; write psi' = D0(phi) + alpha * top and clear.
    psi = y.part(r - 1);
    PsiSplit split = split_against_chained(ctx, r - 1, psi);
    if (F.is_zero(split.alpha)) {
        throw std::logic_error("premet_regular_reduce: degenerate top coefficient");
    }
    if (!split.phi.is_zero()) push(StepShift{r - 1, split.phi});
    // Scaling x_r by c divides the d_r coefficient by c; land on the divided
    // basis coefficient (-1)^{r-1} of the chained target.
    FieldElement target = (r - 1) % 2 == 0 ? F.one() : F.from_int(-1);
    FieldElement c = F.mul(split.alpha, F.inv(target));
    if (!(c == F.one())) push(StepScale{r - 1, c});
    if (!(y == chained_derivation(ctx, r))) {
        throw std::logic_error("premet_regular_reduce: final form mismatch");
    }
    return chain;
}

}  // namespace

PremetResult premet_regular_reduce(const DerivationElement& y) {
    const ShapePtr& ctx = y.ctx();
    require_truncated(*ctx, "premet_regular_reduce");
    const uint32_t n = ctx->m();
    if (n > 3) throw std::invalid_argument("premet_regular_reduce: supported only for m <= 3");
    WittRealization W(ctx);
    if (!W.is_nilpotent(y)) throw std::invalid_argument("premet_regular_reduce: element is not nilpotent");
    PremetResult out;
    out.witness_power = W.pth_power_iter(y, n - 1);
    out.form = chained_derivation(ctx, n);
    if (deriv_in_standard_maximal(out.witness_power)) {
        out.regular = false;  // singular orbit: y^{p^{n-1}} in W_(0)
        return out;
    }
    out.regular = true;
    DerivationElement work = y;
    out.chain = premet_rec(W, work, n);
    return out;
}

}  // namespace modlie
