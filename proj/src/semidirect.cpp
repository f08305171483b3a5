#include "modlie/semidirect.hpp"

#include <sstream>

namespace modlie {

// ---------------------------------------------------------------------------
// SAlgebra
// ---------------------------------------------------------------------------

SAlgebra SAlgebra::from_structure_constants(FieldSpec field, std::vector<std::vector<SVec>> c) {
    SAlgebra S;
    S.F_storage_ = std::make_shared<Fq>(std::move(field));
    S.F_ = S.F_storage_.get();
    const Fq& F = *S.F_;
    S.dim_ = c.size();
    S.c_ = std::move(c);
    const size_t d = S.dim_;
    for (const auto& row : S.c_) {
        if (row.size() != d) throw std::invalid_argument("SAlgebra: ragged structure constants");
        for (const auto& v : row) {
            if (v.size() != d) throw std::invalid_argument("SAlgebra: ragged structure constants");
        }
    }
    // antisymmetry
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) {
            for (size_t k = 0; k < d; ++k) {
                if (!(S.c_[i][j][k] == F.neg(S.c_[j][i][k]))) {
                    throw std::invalid_argument("SAlgebra: constants are not antisymmetric");
                }
            }
        }
    }
    // ad matrices
    for (size_t i = 0; i < d; ++i) {
        FqMatrix M(F, d, d);
        for (size_t j = 0; j < d; ++j) {
            for (size_t k = 0; k < d; ++k) M.at(k, j) = S.c_[i][j][k];
        }
        S.ad_.push_back(std::move(M));
    }
    // Jacobi on basis triples
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) {
            for (size_t k = 0; k < d; ++k) {
                SVec a = S.bracket(S.unit(i), S.bracket(S.unit(j), S.unit(k)));
                SVec b = S.bracket(S.unit(j), S.bracket(S.unit(k), S.unit(i)));
                SVec cc = S.bracket(S.unit(k), S.bracket(S.unit(i), S.unit(j)));
                for (size_t t = 0; t < d; ++t) {
                    if (!F.is_zero(F.add(a[t], F.add(b[t], cc[t])))) {
                        throw std::invalid_argument("SAlgebra: Jacobi identity fails");
                    }
                }
            }
        }
    }
    S.adalg_ = MatrixAlgebra::from_basis(F, S.ad_, true);
    // restrictedness on the basis: (ad b_i)^p stays in the span (checked by
    // decompose inside pth) and ad(b_i^{[p]}) = (ad b_i)^p by construction.
    for (size_t i = 0; i < d; ++i) (void)S.pth(S.unit(i));
    return S;
}

SAlgebra SAlgebra::sl2(uint32_t p) {
    if (p <= 2) throw std::invalid_argument("SAlgebra::sl2: requires p > 2");
    FieldSpec spec = ext_field_make(p, 1);
    Fq F(spec);
    auto vec = [&](int64_t e, int64_t f, int64_t h) {
        return SVec{F.from_int(e), F.from_int(f), F.from_int(h)};
    };
    // basis order (e, f, h)
    std::vector<std::vector<SVec>> c(3, std::vector<SVec>(3, vec(0, 0, 0)));
    c[0][1] = vec(0, 0, 1);   // [e,f] = h
    c[1][0] = vec(0, 0, -1);
    c[2][0] = vec(2, 0, 0);   // [h,e] = 2e
    c[0][2] = vec(-2, 0, 0);
    c[2][1] = vec(0, -2, 0);  // [h,f] = -2f
    c[1][2] = vec(0, 2, 0);
    return from_structure_constants(std::move(spec), std::move(c));
}

SVec SAlgebra::unit(size_t i) const {
    SVec v = zero();
    v.at(i) = F_->one();
    return v;
}

bool SAlgebra::is_zero(const SVec& x) const {
    for (const auto& c : x) {
        if (!F_->is_zero(c)) return false;
    }
    return true;
}

SVec SAlgebra::add(const SVec& x, const SVec& y) const {
    SVec r(dim_);
    for (size_t i = 0; i < dim_; ++i) r[i] = F_->add(x[i], y[i]);
    return r;
}

SVec SAlgebra::scale(const SVec& x, const FieldElement& c) const {
    SVec r(dim_);
    for (size_t i = 0; i < dim_; ++i) r[i] = F_->mul(x[i], c);
    return r;
}

SVec SAlgebra::bracket(const SVec& x, const SVec& y) const {
    SVec r = zero();
    for (size_t i = 0; i < dim_; ++i) {
        if (F_->is_zero(x[i])) continue;
        for (size_t j = 0; j < dim_; ++j) {
            if (F_->is_zero(y[j])) continue;
            FieldElement f = F_->mul(x[i], y[j]);
            for (size_t k = 0; k < dim_; ++k) {
                r[k] = F_->add(r[k], F_->mul(f, c_[i][j][k]));
            }
        }
    }
    return r;
}

FqMatrix SAlgebra::ad_of(const SVec& x) const {
    FqMatrix M(*F_, dim_, dim_);
    for (size_t i = 0; i < dim_; ++i) {
        if (F_->is_zero(x[i])) continue;
        M = M.add(ad_[i].scale(x[i]));
    }
    return M;
}

SVec SAlgebra::pth(const SVec& x) const {
    // ad(x^{[p]}) = (ad x)^p; S is simple and centerless, so this pins x^{[p]}.
    return adalg_->decompose(ad_of(x).pow(F_->p()));
}

bool SAlgebra::is_nilpotent(const SVec& x) const { return ad_of(x).is_nilpotent(); }

// ---------------------------------------------------------------------------
// SemidirectAlgebra
// ---------------------------------------------------------------------------

SemidirectAlgebra SemidirectAlgebra::make(SAlgebra S, ShapePtr O,
                                          std::vector<DerivationElement> Dbasis) {
    for (uint32_t i = 0; i < O->m(); ++i) {
        if (O->shape().heights[i] != 1) {
            throw std::invalid_argument("SemidirectAlgebra: base ring must be O(m;1)");
        }
    }
    if (!(O->F().spec() == S.F().spec())) {
        throw std::invalid_argument("SemidirectAlgebra: field mismatch between S and O(m;1)");
    }
    if (Dbasis.empty()) throw std::invalid_argument("SemidirectAlgebra: empty tail algebra");
    SemidirectAlgebra L(std::move(S), O);
    const Fq& F = O->F();
    const size_t dimS = L.S_.dim();
    const uint64_t dimO = O->dim();
    const uint32_t m = O->m();
    // D: independent, bracket-closed, p-closed, transitive
    WittRealization W(O);
    L.tail_span_ = SpanBasis(F, m * dimO, Dbasis.size());
    for (size_t k = 0; k < Dbasis.size(); ++k) {
        std::vector<FieldElement> tag(Dbasis.size(), F.zero());
        tag[k] = F.one();
        if (!L.tail_span_.insert_tagged(W.coords_of(Dbasis[k]), std::move(tag))) {
            throw std::invalid_argument("SemidirectAlgebra: dependent tail basis");
        }
    }
    for (size_t i = 0; i < Dbasis.size(); ++i) {
        for (size_t j = i + 1; j < Dbasis.size(); ++j) {
            if (!L.tail_span_.contains(W.coords_of(witt_bracket(Dbasis[i], Dbasis[j])))) {
                throw std::invalid_argument("SemidirectAlgebra: tail algebra not bracket-closed");
            }
        }
        if (!L.tail_span_.contains(W.coords_of(W.pth_power(Dbasis[i])))) {
            throw std::invalid_argument("SemidirectAlgebra: tail algebra not p-closed");
        }
    }
    // transitivity: D + W_(0) = W(m;1), i.e. the constant coefficient vectors
    // span F^m.
    {
        FqMatrix C(F, m, Dbasis.size());
        for (size_t k = 0; k < Dbasis.size(); ++k) {
            for (uint32_t i = 0; i < m; ++i) C.at(i, k) = dp_constant_term(Dbasis[k].part(i));
        }
        if (C.rank() != m) throw std::invalid_argument("SemidirectAlgebra: tail algebra is not transitive");
    }
    L.Dbasis_ = std::move(Dbasis);
    // Faithful module S (x) O(m;1); basis s_a (x) x^(b), index a*dimO + b.
    const size_t N = dimS * dimO;
    std::vector<FqMatrix> rep_basis;
    rep_basis.reserve(N + L.Dbasis_.size());
    for (size_t a = 0; a < dimS; ++a) {
        for (uint64_t b = 0; b < dimO; ++b) {
            FqMatrix M(F, N, N);
            // [s_a (x) x^(b), s_t (x) x^(c)] = [s_a, s_t] (x) x^(b) x^(c)
            for (size_t t = 0; t < dimS; ++t) {
                SVec br = L.S_.bracket(L.S_.unit(a), L.S_.unit(t));
                if (L.S_.is_zero(br)) continue;
                for (uint64_t cc = 0; cc < dimO; ++cc) {
                    DPElement prod = dp_mul(dp_monomial(O, b, F.one()), dp_monomial(O, cc, F.one()));
                    for (const auto& [rank, coef] : prod.terms()) {
                        for (size_t k = 0; k < dimS; ++k) {
                            if (F.is_zero(br[k])) continue;
                            M.at(k * dimO + rank, t * dimO + cc) =
                                F.add(M.at(k * dimO + rank, t * dimO + cc), F.mul(coef, br[k]));
                        }
                    }
                }
            }
            rep_basis.push_back(std::move(M));
        }
    }
    for (const auto& d : L.Dbasis_) {
        FqMatrix M(F, N, N);
        for (size_t t = 0; t < dimS; ++t) {
            for (uint64_t cc = 0; cc < dimO; ++cc) {
                DPElement img = witt_apply(d, dp_monomial(O, cc, F.one()));
                for (const auto& [rank, coef] : img.terms()) {
                    M.at(t * dimO + rank, t * dimO + cc) = coef;
                }
            }
        }
        rep_basis.push_back(std::move(M));
    }
    L.rep_ = MatrixAlgebra::from_basis(F, std::move(rep_basis), false);
    return L;
}

SemiElement SemidirectAlgebra::zero() const {
    SemiElement A;
    A.tensor.assign(S_.dim(), dp_zero(O_));
    A.tail = deriv_zero(O_);
    return A;
}

SemiElement SemidirectAlgebra::element(std::vector<DPElement> tensor, DerivationElement tail) const {
    if (tensor.size() != S_.dim()) throw std::invalid_argument("SemidirectAlgebra: tensor arity");
    (void)tail_coords(tail);  // membership check
    SemiElement A;
    A.tensor = std::move(tensor);
    A.tail = std::move(tail);
    return A;
}

SemiElement SemidirectAlgebra::from_tensor(size_t s_index, const DPElement& f) const {
    SemiElement A = zero();
    A.tensor.at(s_index) = f;
    return A;
}

SemiElement SemidirectAlgebra::from_tail(const DerivationElement& d) const {
    SemiElement A = zero();
    (void)tail_coords(d);
    A.tail = d;
    return A;
}

bool SemidirectAlgebra::equal(const SemiElement& A, const SemiElement& B) const {
    return A.tensor == B.tensor && A.tail == B.tail;
}

bool SemidirectAlgebra::is_zero(const SemiElement& A) const {
    for (const auto& f : A.tensor) {
        if (!f.is_zero()) return false;
    }
    return A.tail.is_zero();
}

SemiElement SemidirectAlgebra::add(const SemiElement& A, const SemiElement& B) const {
    SemiElement r = A;
    for (size_t i = 0; i < S_.dim(); ++i) r.tensor[i] = dp_add(A.tensor[i], B.tensor[i]);
    r.tail = deriv_add(A.tail, B.tail);
    return r;
}

SemiElement SemidirectAlgebra::sub(const SemiElement& A, const SemiElement& B) const {
    SemiElement r = A;
    for (size_t i = 0; i < S_.dim(); ++i) r.tensor[i] = dp_sub(A.tensor[i], B.tensor[i]);
    r.tail = deriv_sub(A.tail, B.tail);
    return r;
}

SemiElement SemidirectAlgebra::scale(const SemiElement& A, const FieldElement& c) const {
    SemiElement r = A;
    for (size_t i = 0; i < S_.dim(); ++i) r.tensor[i] = dp_scale(A.tensor[i], c);
    r.tail = deriv_scale(A.tail, c);
    return r;
}

SemiElement SemidirectAlgebra::bracket(const SemiElement& A, const SemiElement& B) const {
    const Fq& F = this->F();
    SemiElement r = zero();
    // tensor x tensor
    for (size_t a = 0; a < S_.dim(); ++a) {
        if (A.tensor[a].is_zero()) continue;
        for (size_t b = 0; b < S_.dim(); ++b) {
            if (B.tensor[b].is_zero()) continue;
            SVec br = S_.bracket(S_.unit(a), S_.unit(b));
            if (S_.is_zero(br)) continue;
            DPElement prod = dp_mul(A.tensor[a], B.tensor[b]);
            if (prod.is_zero()) continue;
            for (size_t k = 0; k < S_.dim(); ++k) {
                if (F.is_zero(br[k])) continue;
                r.tensor[k] = dp_add(r.tensor[k], dp_scale(prod, br[k]));
            }
        }
    }
    // [d_A, s (x) g] = s (x) d_A(g); [s (x) f, d_B] = -s (x) d_B(f)
    for (size_t b = 0; b < S_.dim(); ++b) {
        if (!B.tensor[b].is_zero()) {
            r.tensor[b] = dp_add(r.tensor[b], witt_apply(A.tail, B.tensor[b]));
        }
        if (!A.tensor[b].is_zero()) {
            r.tensor[b] = dp_sub(r.tensor[b], witt_apply(B.tail, A.tensor[b]));
        }
    }
    r.tail = witt_bracket(A.tail, B.tail);
    return r;
}

Coords SemidirectAlgebra::tail_coords(const DerivationElement& d) const {
    std::vector<FieldElement> v(O_->m() * O_->dim(), F().zero());
    for (uint32_t i = 0; i < O_->m(); ++i) {
        for (const auto& [rank, c] : d.part(i).terms()) v[i * O_->dim() + rank] = c;
    }
    auto combo = tail_span_.decompose_tagged(std::move(v));
    if (!combo) throw std::invalid_argument("SemidirectAlgebra: tail outside the registered subalgebra");
    return std::move(*combo);
}

Coords SemidirectAlgebra::coords_of(const SemiElement& A) const {
    const uint64_t dimO = O_->dim();
    Coords c = rep_.zero();
    for (size_t a = 0; a < S_.dim(); ++a) {
        for (const auto& [rank, v] : A.tensor[a].terms()) c[a * dimO + rank] = v;
    }
    Coords tc = tail_coords(A.tail);
    for (size_t k = 0; k < Dbasis_.size(); ++k) c[S_.dim() * dimO + k] = tc[k];
    return c;
}

SemiElement SemidirectAlgebra::element_of(const Coords& c) const {
    const uint64_t dimO = O_->dim();
    SemiElement A = zero();
    for (size_t a = 0; a < S_.dim(); ++a) {
        for (uint64_t rank = 0; rank < dimO; ++rank) {
            A.tensor[a].set_coeff(rank, c[a * dimO + rank]);
        }
    }
    for (size_t k = 0; k < Dbasis_.size(); ++k) {
        A.tail = deriv_add(A.tail, deriv_scale(Dbasis_[k], c[S_.dim() * dimO + k]));
    }
    return A;
}

SemiElement SemidirectAlgebra::pth(const SemiElement& A) const {
    return element_of(rep_.pth_power(coords_of(A)));
}

SemiElement SemidirectAlgebra::pth_iter(const SemiElement& A, uint32_t k) const {
    SemiElement r = A;
    for (uint32_t i = 0; i < k; ++i) r = pth(r);
    return r;
}

bool SemidirectAlgebra::is_nilpotent_direct(const SemiElement& A) const {
    return rep_.realize(coords_of(A)).is_nilpotent();
}

ExpAdHandle SemidirectAlgebra::exp_ad_tensor(const SVec& s, const DPElement& f) const {
    if (!dp_in_maximal_ideal(f) && !S_.is_nilpotent(s)) {
        throw std::domain_error(
            "exp_ad_tensor: need f in the maximal ideal or a nilpotent socle component");
    }
    SemiElement u = zero();
    for (size_t a = 0; a < S_.dim(); ++a) {
        if (!F().is_zero(s[a])) u.tensor[a] = dp_scale(f, s[a]);
    }
    return ExpAdHandle(rep_, coords_of(u));
}

SemiElement SemidirectAlgebra::apply_handle(const ExpAdHandle& H, const SemiElement& A) const {
    return element_of(H.apply(coords_of(A)));
}

std::optional<SemidirectAlgebra::TailForm> SemidirectAlgebra::tail_normal_form(
    const DerivationElement& tail) const {
    const Fq& F = this->F();
    const uint32_t m = O_->m();
    const uint32_t p = O_->p();
    FieldElement lambda = dp_constant_term(tail.part(0));
    if (F.is_zero(lambda)) return std::nullopt;
    for (uint32_t s = 1; s <= m; ++s) {
        DerivationElement u = deriv_sub(tail, deriv_scale(chained_derivation(O_, s), lambda));
        // u must lie in I d_1 + ... + I d_m (I generated by x_{s+1}..x_m) with
        // all coefficient degrees >= p.
        bool ok = true;
        for (uint32_t i = 0; i < m && ok; ++i) {
            for (const auto& [rank, c] : u.part(i).terms()) {
                (void)c;
                std::vector<uint32_t> a = O_->index_of(rank);
                bool in_ideal = false;
                for (uint32_t k = s; k < m; ++k) in_ideal |= a[k] > 0;
                uint32_t deg = MultiIndex{a}.total_degree();
                if (!in_ideal || deg < p) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return TailForm{s, lambda};
    }
    return std::nullopt;
}

SemidirectAlgebra::ReduceResult SemidirectAlgebra::semi_reduce(const SemiElement& A) const {
    const Fq& F = this->F();
    auto form = tail_normal_form(A.tail);
    if (!form) {
        throw std::invalid_argument("semi_reduce: tail is not in the chained normal form");
    }
    const uint32_t s = form->s;
    const uint32_t p = O_->p();
    ReduceResult out;
    out.tail_form = *form;
    SemiElement cur = A;
    // top monomial x_1^{p-1} ... x_s^{p-1}
    std::vector<uint32_t> top(O_->m(), 0);
    for (uint32_t i = 0; i < s; ++i) top[i] = p - 1;
    const uint64_t top_rank = O_->rank_of(top);
    // Monomial lives in O(s;1) when the exponents of x_{s+1}..x_m vanish.
    auto in_Os = [&](const std::vector<uint32_t>& a) {
        for (uint32_t k = s; k < O_->m(); ++k) {
            if (a[k] > 0) return false;
        }
        return true;
    };
    auto pdeg = [&](const std::vector<uint32_t>& a) {
        return deglex_pdeg(*O_, MultiIndex{a}, s);
    };
    uint64_t last_cleared = 0;
    bool first = true;
    for (;;) {
        // smallest |.|_p-degree tensor monomial supported in O(s;1), excluding top
        std::optional<uint64_t> bestK;
        uint64_t best_rank = 0;
        for (size_t a = 0; a < S_.dim(); ++a) {
            for (const auto& [rank, c] : cur.tensor[a].terms()) {
                (void)c;
                if (rank == top_rank) continue;
                std::vector<uint32_t> idx = O_->index_of(rank);
                if (!in_Os(idx)) continue;
                uint64_t K = pdeg(idx);
                if (!bestK || K < *bestK) {
                    bestK = K;
                    best_rank = rank;
                }
            }
        }
        if (!bestK) break;
        if (!first && *bestK <= last_cleared) {
            throw std::logic_error("semi_reduce: |.|_p-degree failed to increase");
        }
        first = false;
        last_cleared = *bestK;
        // clearing polynomial: the unique monomial with z(f) proportional to
        // x^(A_K); drop the leading (p-1)-block and raise the next exponent.
        std::vector<uint32_t> aK = O_->index_of(best_rank);
        uint32_t r = 0;
        while (r < s && aK[r] == p - 1) ++r;
        if (r >= s) throw std::logic_error("semi_reduce: top monomial escaped the filter");
        std::vector<uint32_t> fa(O_->m(), 0);
        fa[r] = aK[r] + 1;
        for (uint32_t k = r + 1; k < s; ++k) fa[k] = aK[k];
        DPElement f = dp_monomial(O_, MultiIndex{fa}, F.one());
        FieldElement c = witt_apply(cur.tail, f).coeff(best_rank);
        if (F.is_zero(c)) throw std::logic_error("semi_reduce: clearing coefficient vanished");
        SVec sA(S_.dim(), F.zero());
        for (size_t a = 0; a < S_.dim(); ++a) sA[a] = cur.tensor[a].coeff(best_rank);
        SVec stilde = S_.scale(sA, F.inv(c));
        ExpAdHandle H = exp_ad_tensor(stilde, f);
        cur = apply_handle(H, cur);
        for (size_t a = 0; a < S_.dim(); ++a) {
            if (!F.is_zero(cur.tensor[a].coeff(best_rank))) {
                throw std::logic_error("semi_reduce: clearing step failed");
            }
        }
        out.steps.push_back(ReduceStep{std::move(stilde), std::move(f)});
    }
    if (!(cur.tail == A.tail)) throw std::logic_error("semi_reduce: tail drifted");
    out.top_coeff.assign(S_.dim(), F.zero());
    for (size_t a = 0; a < S_.dim(); ++a) out.top_coeff[a] = cur.tensor[a].coeff(top_rank);
    out.form = std::move(cur);
    return out;
}

SemiElement SemidirectAlgebra::apply_reduce_steps(const std::vector<ReduceStep>& steps,
                                                  SemiElement A) const {
    for (const auto& step : steps) {
        A = apply_handle(exp_ad_tensor(step.s, step.f), A);
    }
    return A;
}

SemidirectAlgebra::NilpotencyVerdict SemidirectAlgebra::is_nilpotent(const SemiElement& A) const {
    const Fq& F = this->F();
    NilpotencyVerdict v;
    v.direct = is_nilpotent_direct(A);
    bool tail_nilpotent = derivation_operator(A.tail).is_nilpotent();
    if (deriv_in_standard_maximal(A.tail)) {
        v.branch = "socle-constant";
        // D' = sum s_i (x) f_i + d with d in W_(0): nilpotent iff d nilpotent
        // and the constant socle coefficient is nilpotent in S.
        SVec s0(S_.dim(), F.zero());
        for (size_t a = 0; a < S_.dim(); ++a) s0[a] = dp_constant_term(A.tensor[a]);
        v.criterion = tail_nilpotent && S_.is_nilpotent(s0);
    } else {
        v.branch = "reduced-top";
        if (!tail_nilpotent) {
            v.criterion = false;
        } else {
            ReduceResult red = semi_reduce(A);
            v.criterion = S_.is_nilpotent(red.top_coeff);
        }
    }
    if (v.direct != v.criterion) {
        throw std::logic_error("semidirect nilpotency: direct and criterion verdicts disagree");
    }
    return v;
}

std::string SemidirectAlgebra::to_string(const SemiElement& A) const {
    std::ostringstream os;
    os << "tensor{";
    bool started = false;
    for (size_t a = 0; a < S_.dim(); ++a) {
        if (A.tensor[a].is_zero()) continue;
        if (started) os << ",";
        started = true;
        os << a << "=" << dp_to_string(A.tensor[a]);
    }
    os << "};tail{" << deriv_to_string(A.tail) << "}";
    return os.str();
}

SemiElement SemidirectAlgebra::parse(const std::string& text) const {
    auto t0 = text.find("tensor{");
    auto t1 = text.find("};tail{");
    if (t0 != 0 || t1 == std::string::npos || text.back() != '}') {
        throw std::invalid_argument("SemidirectAlgebra::parse: malformed element");
    }
    SemiElement A = zero();
    std::string tensor = text.substr(7, t1 - 7);
    size_t pos = 0;
    while (pos < tensor.size()) {
        size_t eq = tensor.find('=', pos);
        if (eq == std::string::npos) throw std::invalid_argument("parse: malformed tensor block");
        size_t idx = std::stoul(tensor.substr(pos, eq - pos));
        // the poly block ends before the next ",<digits>=" or the end
        size_t end = tensor.size();
        size_t scan = eq + 1;
        while (scan < tensor.size()) {
            if (tensor[scan] == ',') {
                size_t probe = scan + 1;
                while (probe < tensor.size() && isdigit(tensor[probe])) ++probe;
                if (probe > scan + 1 && probe < tensor.size() && tensor[probe] == '=') {
                    end = scan;
                    break;
                }
            }
            ++scan;
        }
        A.tensor.at(idx) = dp_parse(O_, tensor.substr(eq + 1, end - eq - 1));
        pos = end == tensor.size() ? end : end + 1;
    }
    std::string tail = text.substr(t1 + 7, text.size() - t1 - 8);
    A.tail = deriv_parse(O_, tail);
    (void)tail_coords(A.tail);
    return A;
}

SemidirectAlgebra make_sl2_loop_algebra(uint32_t p) {
    SAlgebra S = SAlgebra::sl2(p);
    ShapePtr O = make_truncated_shape(1, p);
    std::vector<DerivationElement> D = {deriv_partial(O, 0)};
    return SemidirectAlgebra::make(std::move(S), std::move(O), std::move(D));
}

SemidirectAlgebra make_sl2_witt_algebra(uint32_t p, uint32_t m) {
    SAlgebra S = SAlgebra::sl2(p);
    ShapePtr O = make_truncated_shape(m, p);
    std::vector<DerivationElement> D;
    for (uint32_t i = 0; i < m; ++i) {
        for (uint64_t rank = 0; rank < O->dim(); ++rank) {
            D.push_back(deriv_monomial(O, rank, i, O->F().one()));
        }
    }
    return SemidirectAlgebra::make(std::move(S), std::move(O), std::move(D));
}

}  // namespace modlie
