#include "modlie/divided_power.hpp"

#include <sstream>

namespace modlie {

ShapeCtx::ShapeCtx(AlgebraShape shape) : shape_(std::move(shape)), F_(shape_.field) {
    if (shape_.m == 0 || shape_.heights.size() != shape_.m) {
        throw std::invalid_argument("ShapeCtx: bad variable count");
    }
    radix_.resize(shape_.m);
    stride_.resize(shape_.m);
    dim_ = 1;
    for (uint32_t i = 0; i < shape_.m; ++i) {
        if (shape_.heights[i] == 0) throw std::invalid_argument("ShapeCtx: heights must be positive");
        uint64_t r = 1;
        for (uint32_t k = 0; k < shape_.heights[i]; ++k) r *= F_.p();
        radix_[i] = r;
        stride_[i] = dim_;
        dim_ *= r;
    }
    if (shape_.split && (*shape_.split < 1 || *shape_.split > shape_.m)) {
        throw std::invalid_argument("ShapeCtx: split index out of range");
    }
}

uint64_t ShapeCtx::rank_of(const std::vector<uint32_t>& a) const {
    if (a.size() != shape_.m) throw std::invalid_argument("ShapeCtx::rank_of: arity mismatch");
    uint64_t r = 0;
    for (uint32_t i = 0; i < shape_.m; ++i) {
        if (a[i] >= radix_[i]) throw std::out_of_range("ShapeCtx::rank_of: exponent out of bounds");
        r += stride_[i] * a[i];
    }
    return r;
}

std::vector<uint32_t> ShapeCtx::index_of(uint64_t rank) const {
    std::vector<uint32_t> a(shape_.m);
    for (uint32_t i = 0; i < shape_.m; ++i) {
        a[i] = static_cast<uint32_t>(rank % radix_[i]);
        rank /= radix_[i];
    }
    return a;
}

std::string ShapeCtx::shape_string() const {
    std::ostringstream os;
    os << "O(" << shape_.m << ";";
    for (uint32_t i = 0; i < shape_.m; ++i) {
        if (i) os << ",";
        os << shape_.heights[i];
    }
    os << ");" << shape_.field.to_string();
    return os.str();
}

ShapePtr make_shape(uint32_t m, std::vector<uint32_t> heights, FieldSpec field,
                    std::optional<uint32_t> split) {
    AlgebraShape s;
    s.m = m;
    s.heights = std::move(heights);
    s.field = std::move(field);
    s.split = split;
    return std::make_shared<ShapeCtx>(std::move(s));
}

ShapePtr make_truncated_shape(uint32_t m, uint32_t p, std::optional<uint32_t> split) {
    return make_shape(m, std::vector<uint32_t>(m, 1), ext_field_make(p, 1), split);
}

uint32_t MultiIndex::total_degree() const {
    uint32_t d = 0;
    for (uint32_t c : a) d += c;
    return d;
}

FieldElement DPElement::coeff(uint64_t rank) const {
    auto it = coeffs_.find(rank);
    return it == coeffs_.end() ? FieldElement{} : it->second;
}

FieldElement DPElement::coeff(const MultiIndex& a) const { return coeff(ctx_->rank_of(a.a)); }

void DPElement::set_coeff(uint64_t rank, const FieldElement& c) {
    if (ctx_ == nullptr) throw std::logic_error("DPElement: no shape");
    if (rank >= ctx_->dim()) throw std::out_of_range("DPElement::set_coeff: rank out of range");
    if (ctx_->F().is_zero(c)) {
        coeffs_.erase(rank);
    } else {
        coeffs_[rank] = c;
    }
}

void DPElement::add_coeff(uint64_t rank, const FieldElement& c) {
    set_coeff(rank, ctx_->F().add(coeff(rank), c));
}

DPElement dp_zero(ShapePtr ctx) { return DPElement(std::move(ctx)); }

DPElement dp_one(ShapePtr ctx) {
    DPElement f(ctx);
    f.set_coeff(0, ctx->F().one());
    return f;
}

DPElement dp_scalar(ShapePtr ctx, const FieldElement& c) {
    DPElement f(ctx);
    f.set_coeff(0, c);
    return f;
}

DPElement dp_monomial(ShapePtr ctx, const MultiIndex& a, const FieldElement& c) {
    DPElement f(ctx);
    f.set_coeff(ctx->rank_of(a.a), c);
    return f;
}

DPElement dp_monomial(ShapePtr ctx, uint64_t rank, const FieldElement& c) {
    DPElement f(ctx);
    f.set_coeff(rank, c);
    return f;
}

DPElement dp_var(ShapePtr ctx, uint32_t i) {
    std::vector<uint32_t> a(ctx->m(), 0);
    a.at(i) = 1;
    return dp_monomial(ctx, MultiIndex{a}, ctx->F().one());
}

namespace {

void require_same_shape(const DPElement& f, const DPElement& g) {
    if (!f.ctx() || !g.ctx()) throw std::invalid_argument("DPElement op: missing shape");
    if (f.ctx() != g.ctx() && !(f.ctx()->shape() == g.ctx()->shape())) {
        throw std::invalid_argument("DPElement op: shape mismatch");
    }
}

}  // namespace

DPElement dp_add(const DPElement& f, const DPElement& g) {
    require_same_shape(f, g);
    DPElement r = f;
    for (const auto& [rank, c] : g.terms()) r.add_coeff(rank, c);
    return r;
}

DPElement dp_sub(const DPElement& f, const DPElement& g) {
    require_same_shape(f, g);
    DPElement r = f;
    const Fq& F = f.ctx()->F();
    for (const auto& [rank, c] : g.terms()) r.add_coeff(rank, F.neg(c));
    return r;
}

DPElement dp_neg(const DPElement& f) { return dp_sub(dp_zero(f.ctx()), f); }

DPElement dp_scale(const DPElement& f, const FieldElement& c) {
    DPElement r(f.ctx());
    const Fq& F = f.ctx()->F();
    if (F.is_zero(c)) return r;
    for (const auto& [rank, v] : f.terms()) r.set_coeff(rank, F.mul(v, c));
    return r;
}

DPElement dp_mul(const DPElement& f, const DPElement& g) {
    require_same_shape(f, g);
    const ShapeCtx& ctx = *f.ctx();
    const Fq& F = ctx.F();
    const uint64_t p = ctx.p();
    DPElement r(f.ctx());
    for (const auto& [ra, ca] : f.terms()) {
        std::vector<uint32_t> a = ctx.index_of(ra);
        for (const auto& [rb, cb] : g.terms()) {
            std::vector<uint32_t> b = ctx.index_of(rb);
            // x^(a) x^(b) = prod_i C(a_i+b_i, a_i) x^(a+b), vanishing beyond bounds
            uint64_t factor = 1;
            bool ok = true;
            std::vector<uint32_t> s(ctx.m());
            for (uint32_t i = 0; i < ctx.m() && ok; ++i) {
                uint64_t sum = static_cast<uint64_t>(a[i]) + b[i];
                if (sum >= ctx.radix(i)) {
                    ok = false;
                    break;
                }
                s[i] = static_cast<uint32_t>(sum);
                factor = factor * binom_mod_p(sum, a[i], p) % p;
            }
            if (!ok || factor == 0) continue;
            FieldElement c = F.mul(ca, cb);
            c = F.mul(c, F.from_int(static_cast<int64_t>(factor)));
            r.add_coeff(ctx.rank_of(s), c);
        }
    }
    return r;
}

DPElement dp_pow(const DPElement& f, uint64_t e) {
    DPElement r = dp_one(f.ctx());
    for (uint64_t i = 0; i < e; ++i) r = dp_mul(r, f);
    return r;
}

DPElement dp_partial(const DPElement& f, uint32_t i) {
    const ShapeCtx& ctx = *f.ctx();
    if (i >= ctx.m()) throw std::out_of_range("dp_partial: variable index");
    DPElement r(f.ctx());
    for (const auto& [rank, c] : f.terms()) {
        std::vector<uint32_t> a = ctx.index_of(rank);
        if (a[i] == 0) continue;
        a[i] -= 1;
        r.add_coeff(ctx.rank_of(a), c);
    }
    return r;
}

FieldElement dp_constant_term(const DPElement& f) { return f.coeff(0); }

bool dp_in_maximal_ideal(const DPElement& f) { return f.ctx()->F().is_zero(f.coeff(0)); }

DPElement dp_divided_power(const DPElement& f, uint64_t r) {
    const ShapePtr& ctx = f.ctx();
    if (ctx->m() != 1) throw std::invalid_argument("dp_divided_power: shape must be O(1;n)");
    if (!dp_in_maximal_ideal(f)) {
        throw std::domain_error("dp_divided_power: argument must have zero constant term");
    }
    const Fq& F = ctx->F();
    if (r == 0) return dp_one(ctx);
    if (r == 1) return f;
    // f = sum c_t x^(s_t); expand (t1 + ... + tk)^(r) = sum over compositions,
    // with (c x^(s))^(j) = c^j ((js)!/(j!(s!)^j)) x^(js).
    std::vector<DPElement> H(r + 1, dp_zero(ctx));
    H[0] = dp_one(ctx);
    const uint64_t bound = ctx->dim();
    for (const auto& [rank, c] : f.terms()) {
        uint64_t s = rank;  // exponent of the single variable
        std::vector<DPElement> next(r + 1, dp_zero(ctx));
        for (uint64_t l = 0; l <= r; ++l) {
            if (H[l].is_zero()) continue;
            for (uint64_t j = 0; l + j <= r; ++j) {
                if (j > 0 && j * s >= bound) break;
                // term^(j)
                DPElement tp;
                if (j == 0) {
                    tp = dp_one(ctx);
                } else {
                    uint32_t ratio = divided_power_ratio_mod_p(j, s, ctx->p());
                    if (ratio == 0) continue;
                    FieldElement coef = F.mul(F.pow(c, j), F.from_int(ratio));
                    tp = dp_monomial(ctx, j * s, coef);
                }
                next[l + j] = dp_add(next[l + j], dp_mul(H[l], tp));
            }
        }
        H = std::move(next);
    }
    return H[r];
}

uint32_t dp_filtration_degree(const DPElement& f) {
    auto d = dp_filtration_degree_opt(f);
    if (!d) throw std::domain_error("dp_filtration_degree: zero element");
    return *d;
}

std::optional<uint32_t> dp_filtration_degree_opt(const DPElement& f) {
    if (f.is_zero()) return std::nullopt;
    const ShapeCtx& ctx = *f.ctx();
    std::optional<uint32_t> best;
    for (const auto& [rank, c] : f.terms()) {
        uint32_t d = MultiIndex{ctx.index_of(rank)}.total_degree();
        if (!best || d < *best) best = d;
    }
    return best;
}

DPElement dp_inverse(const DPElement& f) {
    const Fq& F = f.ctx()->F();
    FieldElement c0 = dp_constant_term(f);
    if (F.is_zero(c0)) throw std::domain_error("dp_inverse: not a unit");
    FieldElement c0inv = F.inv(c0);
    // f = c0 (1 - u) with u nilpotent; f^{-1} = c0^{-1} sum u^k.
    DPElement u = dp_sub(dp_one(f.ctx()), dp_scale(f, c0inv));
    DPElement acc = dp_one(f.ctx());
    DPElement pw = dp_one(f.ctx());
    for (uint64_t k = 0; k < f.ctx()->dim(); ++k) {
        pw = dp_mul(pw, u);
        if (pw.is_zero()) break;
        acc = dp_add(acc, pw);
    }
    return dp_scale(acc, c0inv);
}

uint64_t deglex_pdeg(const ShapeCtx& ctx, const MultiIndex& a, uint32_t s) {
    if (s < 1 || s > ctx.m()) throw std::invalid_argument("deglex_pdeg: invalid split");
    if (a.a.size() != ctx.m()) throw std::invalid_argument("deglex_pdeg: arity mismatch");
    uint64_t deg = 0;
    uint64_t pk = 1;
    for (uint32_t i = 0; i < s; ++i) {
        deg += a.a[i] * pk;
        pk *= ctx.p();
    }
    for (uint32_t i = s; i < ctx.m(); ++i) deg += pk * a.a[i];
    return deg;
}

std::strong_ordering deglex_compare(const ShapeCtx& ctx, const MultiIndex& a, const MultiIndex& b,
                                    uint32_t s) {
    uint64_t da = deglex_pdeg(ctx, a, s);
    uint64_t db = deglex_pdeg(ctx, b, s);
    if (da != db) return da <=> db;
    // Lexicographic tie-break: compare at the largest index where they differ.
    for (uint32_t i = ctx.m(); i-- > 0;) {
        if (a.a[i] != b.a[i]) return a.a[i] <=> b.a[i];
    }
    return std::strong_ordering::equal;
}

std::string dp_to_string(const DPElement& f) {
    const ShapeCtx& ctx = *f.ctx();
    std::ostringstream os;
    os << ctx.shape_string() << "|";
    bool first = true;
    for (const auto& [rank, c] : f.terms()) {
        if (!first) os << ",";
        first = false;
        os << rank << ":" << ctx.F().to_string(c);
    }
    return os.str();
}

DPElement dp_parse(ShapePtr ctx, const std::string& text) {
    auto bar = text.find('|');
    if (bar == std::string::npos) throw std::invalid_argument("dp_parse: missing shape separator");
    std::string shape_part = text.substr(0, bar);
    if (shape_part != ctx->shape_string()) {
        throw std::invalid_argument("dp_parse: shape mismatch: " + shape_part);
    }
    DPElement f(ctx);
    std::string body = text.substr(bar + 1);
    if (body.empty()) return f;
    // Terms are comma separated; coefficients may themselves contain commas
    // (M residues).  A new term starts at a token containing ':'.
    std::vector<std::string> tokens;
    {
        std::istringstream is(body);
        std::string tok;
        while (std::getline(is, tok, ',')) tokens.push_back(tok);
    }
    size_t i = 0;
    const uint32_t M = ctx->F().deg();
    while (i < tokens.size()) {
        auto colon = tokens[i].find(':');
        if (colon == std::string::npos) throw std::invalid_argument("dp_parse: malformed term");
        uint64_t rank = std::stoull(tokens[i].substr(0, colon));
        std::string coeff = tokens[i].substr(colon + 1);
        for (uint32_t k = 1; k < M; ++k) {
            if (i + k >= tokens.size()) throw std::invalid_argument("dp_parse: truncated coefficient");
            coeff += "," + tokens[i + k];
        }
        f.set_coeff(rank, ctx->F().parse(coeff));
        i += M;
    }
    return f;
}

}  // namespace modlie
