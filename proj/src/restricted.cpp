#include "modlie/restricted.hpp"

namespace modlie {

MatrixAlgebra MatrixAlgebra::from_basis(const Fq& F, std::vector<FqMatrix> basis, bool check_closed) {
    if (basis.empty()) throw std::invalid_argument("MatrixAlgebra: empty basis");
    size_t n = basis.front().rows();
    MatrixAlgebra A(F, n, basis.size());
    for (size_t k = 0; k < basis.size(); ++k) {
        FqMatrix& B = basis[k];
        if (B.rows() != n || B.cols() != n) throw std::invalid_argument("MatrixAlgebra: basis shape mismatch");
        std::vector<FieldElement> tag(basis.size(), F.zero());
        tag[k] = F.one();
        if (!A.span_.insert_tagged(B.flatten(), std::move(tag))) {
            throw std::invalid_argument("MatrixAlgebra: basis is dependent");
        }
        A.basis_.push_back(std::move(B));
    }
    if (check_closed) {
        for (size_t i = 0; i < A.basis_.size(); ++i) {
            for (size_t j = i + 1; j < A.basis_.size(); ++j) {
                FqMatrix c = A.basis_[i].mul(A.basis_[j]).sub(A.basis_[j].mul(A.basis_[i]));
                if (!A.span_.contains(c.flatten())) {
                    throw std::invalid_argument("MatrixAlgebra: basis not bracket-closed");
                }
            }
        }
    }
    return A;
}

MatrixAlgebra MatrixAlgebra::from_generators_p_closed(const Fq& F, const std::vector<FqMatrix>& gens) {
    return from_basis(F, p_closure_operators(F, gens), false);
}

Coords MatrixAlgebra::unit(size_t i) const {
    Coords c = zero();
    c.at(i) = F_->one();
    return c;
}

bool MatrixAlgebra::is_zero_coords(const Coords& a) const {
    for (const auto& x : a) {
        if (!F_->is_zero(x)) return false;
    }
    return true;
}

Coords MatrixAlgebra::add(const Coords& a, const Coords& b) const {
    Coords r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = F_->add(a[i], b[i]);
    return r;
}

Coords MatrixAlgebra::sub(const Coords& a, const Coords& b) const {
    Coords r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = F_->sub(a[i], b[i]);
    return r;
}

Coords MatrixAlgebra::scale(const Coords& a, const FieldElement& c) const {
    Coords r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = F_->mul(a[i], c);
    return r;
}

FqMatrix MatrixAlgebra::realize(const Coords& a) const {
    if (a.size() != dim()) throw std::invalid_argument("MatrixAlgebra::realize: size mismatch");
    FqMatrix X(*F_, module_dim_, module_dim_);
    for (size_t k = 0; k < dim(); ++k) {
        if (F_->is_zero(a[k])) continue;
        X = X.add(basis_[k].scale(a[k]));
    }
    return X;
}

Coords MatrixAlgebra::decompose(const FqMatrix& X) const {
    auto combo = span_.decompose_tagged(X.flatten());
    if (!combo) throw NotInSpanError("MatrixAlgebra::decompose: operator not in algebra span");
    return std::move(*combo);
}

bool MatrixAlgebra::in_span(const FqMatrix& X) const { return span_.contains(X.flatten()); }

Coords MatrixAlgebra::bracket(const Coords& a, const Coords& b) const {
    FqMatrix A = realize(a), B = realize(b);
    return decompose(A.mul(B).sub(B.mul(A)));
}

Coords MatrixAlgebra::pth_power(const Coords& a) const {
    return decompose(realize(a).pow(F_->p()));
}

Coords MatrixAlgebra::pth_power_iter(const Coords& a, uint32_t k) const {
    Coords r = a;
    for (uint32_t i = 0; i < k; ++i) r = pth_power(r);
    return r;
}

std::vector<Coords> MatrixAlgebra::jacobson_si(const Coords& a, const Coords& b) const {
    const Fq& F = *F_;
    const uint32_t p = F.p();
    // v(t) = a; apply ad(t a + b) (p-1) times in the polynomial module
    // Coords[t]; then i * s_i = coefficient of t^{i-1}.
    std::vector<Coords> v(p, zero());
    v[0] = a;
    for (uint32_t step = 0; step < p - 1; ++step) {
        std::vector<Coords> w(p, zero());
        for (uint32_t d = 0; d < p; ++d) {
            if (is_zero_coords(v[d])) continue;
            Coords eb = bracket(b, v[d]);
            w[d] = add(w[d], eb);
            if (d + 1 < p) {
                Coords ea = bracket(a, v[d]);
                w[d + 1] = add(w[d + 1], ea);
            }
        }
        v = std::move(w);
    }
    std::vector<Coords> s(p, zero());  // s[i] holds s_i, index 0 unused
    for (uint32_t i = 1; i <= p - 1; ++i) {
        FieldElement inv = F.inv(F.from_int(i));
        s[i] = scale(v[i - 1], inv);
    }
    s.erase(s.begin());  // 1-based to 0-based: s[0] = s_1, ..., s[p-2] = s_{p-1}
    return s;
}

bool MatrixAlgebra::is_nilpotent(const Coords& a) const { return realize(a).is_nilpotent(); }

uint32_t MatrixAlgebra::nilpotency_index(const Coords& a) const {
    if (!is_nilpotent(a)) throw std::domain_error("nilpotency_index: element is not nilpotent");
    Coords x = a;
    uint32_t k = 0;
    while (!is_zero_coords(x)) {
        x = pth_power(x);
        ++k;
        if (k > 2 * dim() + 2) throw std::logic_error("nilpotency_index: failed to terminate");
    }
    return k;
}

std::pair<Coords, Coords> MatrixAlgebra::jordan_chevalley(const Coords& a) const {
    JordanParts parts = jordan_decompose_matrix(realize(a));
    Coords s = decompose(parts.semisimple);
    Coords n = sub(a, s);
    return {s, n};
}

bool MatrixAlgebra::is_semisimple(const Coords& a) const {
    auto [s, n] = jordan_chevalley(a);
    return is_zero_coords(n);
}

uint32_t MatrixAlgebra::semisimple_rank(const Coords& a) const {
    // The sequence a^{[p]^i} is eventually periodic with pre-period at most
    // dim; the stabilized span (the torus generated by the semisimple part)
    // is read off past that point.
    Coords x = a;
    for (size_t i = 0; i < dim() + 1; ++i) x = pth_power(x);
    SpanBasis span(*F_, dim());
    for (size_t i = 0; i < dim() + 1; ++i) {
        if (is_zero_coords(x)) break;
        span.insert(x);
        if (span.rank() >= dim()) break;
        x = pth_power(x);
    }
    return static_cast<uint32_t>(span.rank());
}

PsiCoefficients MatrixAlgebra::psi_relation(const Coords& a, uint32_t e, uint32_t s) const {
    PsiCoefficients out;
    out.e = e;
    out.s = s;
    const Fq& F = *F_;
    std::vector<Coords> powers(s + 1);
    Coords x = pth_power_iter(a, e);
    for (uint32_t i = 0; i <= s; ++i) {
        powers[i] = x;
        if (i < s) x = pth_power(x);
    }
    // Solve powers[s] = sum_i psi_i powers[i].
    FqMatrix Amat(F, dim(), s);
    FqMatrix rhs(F, dim(), 1);
    for (size_t r = 0; r < dim(); ++r) {
        for (uint32_t i = 0; i < s; ++i) Amat.at(r, i) = powers[i][r];
        rhs.at(r, 0) = powers[s][r];
    }
    auto sol = Amat.solve(rhs);
    if (sol) {
        out.found = true;
        out.psi.resize(s);
        for (uint32_t i = 0; i < s; ++i) out.psi[i] = sol->at(i, 0);
        return out;
    }
    // Diagnostic: find the first dependent length among iterated powers.
    SpanBasis span(F, dim());
    Coords y = pth_power_iter(a, e);
    for (uint32_t len = 1; len <= 2 * dim() + 2; ++len) {
        if (!span.insert(y)) {
            out.observed_relation_length = len - 1;
            break;
        }
        y = pth_power(y);
    }
    return out;
}

std::vector<FqMatrix> p_closure_operators(const Fq& F, const std::vector<FqMatrix>& gens) {
    if (gens.empty()) throw std::invalid_argument("p_closure_operators: no generators");
    size_t n = gens.front().rows();
    SpanBasis span(F, n * n);
    std::vector<FqMatrix> basis;
    auto try_insert = [&](const FqMatrix& X) {
        if (span.insert(X.flatten())) {
            basis.push_back(X);
            return true;
        }
        return false;
    };
    for (const auto& g : gens) try_insert(g);
    size_t processed_bracket = 0;
    size_t processed_pth = 0;
    while (processed_bracket < basis.size() || processed_pth < basis.size()) {
        if (processed_pth < basis.size()) {
            FqMatrix P = basis[processed_pth].pow(F.p());
            ++processed_pth;
            try_insert(P);
            continue;
        }
        size_t i = processed_bracket++;
        for (size_t j = 0; j < basis.size(); ++j) {
            FqMatrix c = basis[i].mul(basis[j]).sub(basis[j].mul(basis[i]));
            try_insert(c);
        }
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Witt realization
// ---------------------------------------------------------------------------

FqMatrix derivation_operator(const DerivationElement& D) {
    const ShapeCtx& ctx = *D.ctx();
    const Fq& F = ctx.F();
    FqMatrix M(F, ctx.dim(), ctx.dim());
    for (uint64_t col = 0; col < ctx.dim(); ++col) {
        DPElement img = witt_apply(D, dp_monomial(D.ctx(), col, F.one()));
        for (const auto& [rank, c] : img.terms()) M.at(rank, col) = c;
    }
    return M;
}

WittRealization::WittRealization(ShapePtr ctx) : ctx_(std::move(ctx)) {
    const Fq& F = ctx_->F();
    std::vector<FqMatrix> basis;
    basis.reserve(ctx_->m() * ctx_->dim());
    for (uint32_t i = 0; i < ctx_->m(); ++i) {
        for (uint64_t rank = 0; rank < ctx_->dim(); ++rank) {
            basis.push_back(derivation_operator(deriv_monomial(ctx_, rank, i, F.one())));
        }
    }
    alg_ = MatrixAlgebra::from_basis(F, std::move(basis), false);
    restricted_ = true;
    for (uint32_t i = 0; i < ctx_->m(); ++i) {
        if (ctx_->shape().heights[i] != 1) restricted_ = false;
    }
}

Coords WittRealization::coords_of(const DerivationElement& D) const {
    Coords c = alg_.zero();
    for (uint32_t i = 0; i < ctx_->m(); ++i) {
        for (const auto& [rank, v] : D.part(i).terms()) {
            c[i * ctx_->dim() + rank] = v;
        }
    }
    return c;
}

DerivationElement WittRealization::element_of(const Coords& a) const {
    DerivationElement D(ctx_);
    for (uint32_t i = 0; i < ctx_->m(); ++i) {
        for (uint64_t rank = 0; rank < ctx_->dim(); ++rank) {
            D.part(i).set_coeff(rank, a[i * ctx_->dim() + rank]);
        }
    }
    return D;
}

DerivationElement WittRealization::pth_power(const DerivationElement& D) const {
    // A special derivation is determined by its images of the variables, so
    // the decomposition of the operator power reads off m columns; the
    // reconstruction is then verified against the full power.
    FqMatrix P = derivation_operator(D).pow(ctx_->F().p());
    DerivationElement R(ctx_);
    for (uint32_t i = 0; i < ctx_->m(); ++i) {
        std::vector<uint32_t> e(ctx_->m(), 0);
        e[i] = 1;
        uint64_t col = ctx_->rank_of(e);
        for (uint64_t row = 0; row < ctx_->dim(); ++row) {
            R.part(i).set_coeff(row, P.at(row, col));
        }
    }
    if (!(derivation_operator(R) == P)) {
        throw NotInSpanError("WittRealization::pth_power: power escapes W(m;n)");
    }
    return R;
}

DerivationElement WittRealization::pth_power_iter(const DerivationElement& D, uint32_t k) const {
    DerivationElement r = D;
    for (uint32_t i = 0; i < k; ++i) r = pth_power(r);
    return r;
}

bool WittRealization::is_nilpotent(const DerivationElement& D) const {
    return derivation_operator(D).is_nilpotent();
}

uint32_t WittRealization::nilpotency_index(const DerivationElement& D) const {
    if (!is_nilpotent(D)) throw std::domain_error("nilpotency_index: element is not nilpotent");
    DerivationElement x = D;
    uint32_t k = 0;
    while (!x.is_zero()) {
        x = pth_power(x);
        ++k;
    }
    return k;
}

std::pair<DerivationElement, DerivationElement> WittRealization::jordan_chevalley(
    const DerivationElement& D) const {
    auto [s, n] = alg_.jordan_chevalley(coords_of(D));
    return {element_of(s), element_of(n)};
}

std::vector<DerivationElement> WittRealization::jacobson_si(const DerivationElement& D,
                                                            const DerivationElement& E) const {
    const Fq& F = ctx_->F();
    const uint32_t p = F.p();
    // (ad(tD+E))^{p-1}(D) = sum i s_i t^{i-1}, computed on t-degree slices.
    std::vector<DerivationElement> v(p, deriv_zero(ctx_));
    v[0] = D;
    for (uint32_t step = 0; step < p - 1; ++step) {
        std::vector<DerivationElement> w(p, deriv_zero(ctx_));
        for (uint32_t d = 0; d < p; ++d) {
            if (v[d].is_zero()) continue;
            w[d] = deriv_add(w[d], witt_bracket(E, v[d]));
            if (d + 1 < p) w[d + 1] = deriv_add(w[d + 1], witt_bracket(D, v[d]));
        }
        v = std::move(w);
    }
    std::vector<DerivationElement> s;
    s.reserve(p - 1);
    for (uint32_t i = 1; i <= p - 1; ++i) {
        s.push_back(deriv_scale(v[i - 1], F.inv(F.from_int(i))));
    }
    return s;
}

bool is_regular_witt(const DerivationElement& D) {
    const ShapeCtx& ctx = *D.ctx();
    for (uint32_t i = 0; i < ctx.m(); ++i) {
        if (ctx.shape().heights[i] != 1) throw std::invalid_argument("is_regular_witt: shape must be O(m;1)");
    }
    FqMatrix M = derivation_operator(D);
    return M.rank() == ctx.dim() - 1;
}

}  // namespace modlie
