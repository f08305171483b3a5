#include "modlie/linalg.hpp"

#include <stdexcept>

namespace modlie {

FqMatrix FqMatrix::identity(const Fq& F, size_t n) {
    FqMatrix I(F, n, n);
    for (size_t i = 0; i < n; ++i) I.at(i, i) = F.one();
    return I;
}

bool FqMatrix::is_zero() const {
    for (const auto& e : a_) {
        if (!F_->is_zero(e)) return false;
    }
    return true;
}

FqMatrix FqMatrix::add(const FqMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("FqMatrix::add: shape mismatch");
    FqMatrix r(*F_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->add(a_[i], o.a_[i]);
    return r;
}

FqMatrix FqMatrix::sub(const FqMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("FqMatrix::sub: shape mismatch");
    FqMatrix r(*F_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->sub(a_[i], o.a_[i]);
    return r;
}

FqMatrix FqMatrix::mul(const FqMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("FqMatrix::mul: shape mismatch");
    FqMatrix r(*F_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t k = 0; k < cols_; ++k) {
            const FieldElement& aik = at(i, k);
            if (F_->is_zero(aik)) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                r.at(i, j) = F_->add(r.at(i, j), F_->mul(aik, o.at(k, j)));
            }
        }
    }
    return r;
}

FqMatrix FqMatrix::scale(const FieldElement& c) const {
    FqMatrix r(*F_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->mul(a_[i], c);
    return r;
}

FqMatrix FqMatrix::pow(uint64_t e) const {
    if (rows_ != cols_) throw std::invalid_argument("FqMatrix::pow: square matrix required");
    FqMatrix r = identity(*F_, rows_);
    FqMatrix base = *this;
    while (e) {
        if (e & 1) r = r.mul(base);
        base = base.mul(base);
        e >>= 1;
    }
    return r;
}

FqMatrix FqMatrix::transpose() const {
    FqMatrix r(*F_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    }
    return r;
}

std::vector<FieldElement> FqMatrix::apply(const std::vector<FieldElement>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("FqMatrix::apply: size mismatch");
    std::vector<FieldElement> r(rows_, F_->zero());
    for (size_t i = 0; i < rows_; ++i) {
        FieldElement acc = F_->zero();
        for (size_t j = 0; j < cols_; ++j) {
            if (!F_->is_zero(at(i, j)) && !F_->is_zero(v[j])) {
                acc = F_->add(acc, F_->mul(at(i, j), v[j]));
            }
        }
        r[i] = acc;
    }
    return r;
}

namespace {

// Row echelon of [A | B] in place; returns pivot columns of the A-part.
struct Echelon {
    FqMatrix m;
    std::vector<size_t> pivot_cols;
    std::vector<size_t> pivot_rows;
};

Echelon echelonize(const Fq& F, FqMatrix m, size_t a_cols) {
    Echelon e{std::move(m), {}, {}};
    size_t row = 0;
    for (size_t col = 0; col < a_cols && row < e.m.rows(); ++col) {
        size_t piv = row;
        while (piv < e.m.rows() && F.is_zero(e.m.at(piv, col))) ++piv;
        if (piv == e.m.rows()) continue;
        if (piv != row) {
            for (size_t j = 0; j < e.m.cols(); ++j) std::swap(e.m.at(piv, j), e.m.at(row, j));
        }
        FieldElement inv = F.inv(e.m.at(row, col));
        for (size_t j = 0; j < e.m.cols(); ++j) e.m.at(row, j) = F.mul(e.m.at(row, j), inv);
        for (size_t i = 0; i < e.m.rows(); ++i) {
            if (i == row || F.is_zero(e.m.at(i, col))) continue;
            FieldElement f = e.m.at(i, col);
            for (size_t j = 0; j < e.m.cols(); ++j) {
                e.m.at(i, j) = F.sub(e.m.at(i, j), F.mul(f, e.m.at(row, j)));
            }
        }
        e.pivot_cols.push_back(col);
        e.pivot_rows.push_back(row);
        ++row;
    }
    return e;
}

}  // namespace

size_t FqMatrix::rank() const {
    Echelon e = echelonize(*F_, *this, cols_);
    return e.pivot_cols.size();
}

bool FqMatrix::is_nilpotent() const {
    if (rows_ != cols_) throw std::invalid_argument("FqMatrix::is_nilpotent: square matrix required");
    FqMatrix m = *this;
    size_t covered = 1;
    while (covered < rows_) {
        m = m.mul(m);
        covered *= 2;
        if (m.is_zero()) return true;
    }
    return m.is_zero();
}

std::optional<FqMatrix> FqMatrix::solve(const FqMatrix& rhs) const {
    if (rhs.rows_ != rows_) throw std::invalid_argument("FqMatrix::solve: shape mismatch");
    FqMatrix aug(*F_, rows_, cols_ + rhs.cols_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        for (size_t j = 0; j < rhs.cols_; ++j) aug.at(i, cols_ + j) = rhs.at(i, j);
    }
    Echelon e = echelonize(*F_, std::move(aug), cols_);
    // Consistency: rows with zero A-part must have zero B-part.
    for (size_t i = 0; i < rows_; ++i) {
        bool a_zero = true;
        for (size_t j = 0; j < cols_ && a_zero; ++j) a_zero = F_->is_zero(e.m.at(i, j));
        if (!a_zero) continue;
        for (size_t j = 0; j < rhs.cols_; ++j) {
            if (!F_->is_zero(e.m.at(i, cols_ + j))) return std::nullopt;
        }
    }
    FqMatrix x(*F_, cols_, rhs.cols_);
    for (size_t k = 0; k < e.pivot_cols.size(); ++k) {
        size_t col = e.pivot_cols[k], row = e.pivot_rows[k];
        for (size_t j = 0; j < rhs.cols_; ++j) x.at(col, j) = e.m.at(row, cols_ + j);
    }
    return x;
}

std::optional<FqMatrix> FqMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("FqMatrix::inverse: square matrix required");
    auto x = solve(identity(*F_, rows_));
    if (!x) return std::nullopt;
    // solve() leaves free variables at zero; invertibility means full rank.
    if (mul(*x) == identity(*F_, rows_)) return x;
    return std::nullopt;
}

FqMatrix FqMatrix::kernel() const {
    Echelon e = echelonize(*F_, *this, cols_);
    std::vector<bool> is_pivot(cols_, false);
    for (size_t c : e.pivot_cols) is_pivot[c] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < cols_; ++c) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }
    FqMatrix ker(*F_, cols_, free_cols.size());
    for (size_t k = 0; k < free_cols.size(); ++k) {
        size_t fc = free_cols[k];
        ker.at(fc, k) = F_->one();
        for (size_t t = 0; t < e.pivot_cols.size(); ++t) {
            ker.at(e.pivot_cols[t], k) = F_->neg(e.m.at(e.pivot_rows[t], fc));
        }
    }
    return ker;
}

std::vector<FieldElement> FqMatrix::charpoly() const {
    if (rows_ != cols_) throw std::invalid_argument("FqMatrix::charpoly: square matrix required");
    const Fq& F = *F_;
    const size_t n = rows_;
    if (n == 0) return {F.one()};
    // Reduce to Hessenberg form by similarity, then expand the recurrence.
    FqMatrix H = *this;
    for (size_t col = 0; col + 2 < n; ++col) {
        size_t piv = col + 1;
        while (piv < n && F.is_zero(H.at(piv, col))) ++piv;
        if (piv == n) continue;
        if (piv != col + 1) {
            for (size_t j = 0; j < n; ++j) std::swap(H.at(piv, j), H.at(col + 1, j));
            for (size_t i = 0; i < n; ++i) std::swap(H.at(i, piv), H.at(i, col + 1));
        }
        FieldElement inv = F.inv(H.at(col + 1, col));
        for (size_t i = col + 2; i < n; ++i) {
            if (F.is_zero(H.at(i, col))) continue;
            FieldElement f = F.mul(H.at(i, col), inv);
            for (size_t j = 0; j < n; ++j) H.at(i, j) = F.sub(H.at(i, j), F.mul(f, H.at(col + 1, j)));
            for (size_t j = 0; j < n; ++j) H.at(j, col + 1) = F.add(H.at(j, col + 1), F.mul(f, H.at(j, i)));
        }
    }
    // p_0 = 1, p_k(x) = (x - H[k-1][k-1]) p_{k-1}(x)
    //                  - sum_{i=1}^{k-1} H[k-1-i][k-1] (prod of subdiagonals) p_{k-1-i}(x)
    std::vector<FqPoly> p(n + 1);
    p[0] = {F.one()};
    for (size_t k = 1; k <= n; ++k) {
        FqPoly xp(p[k - 1].size() + 1, F.zero());
        for (size_t t = 0; t < p[k - 1].size(); ++t) {
            xp[t + 1] = F.add(xp[t + 1], p[k - 1][t]);
            xp[t] = F.sub(xp[t], F.mul(H.at(k - 1, k - 1), p[k - 1][t]));
        }
        FieldElement prod = F.one();
        for (size_t i = 1; i < k; ++i) {
            prod = F.mul(prod, H.at(k - i, k - i - 1));
            if (F.is_zero(prod)) break;
            FieldElement coef = F.mul(H.at(k - 1 - i, k - 1), prod);
            if (F.is_zero(coef)) continue;
            for (size_t t = 0; t < p[k - 1 - i].size(); ++t) {
                xp[t] = F.sub(xp[t], F.mul(coef, p[k - 1 - i][t]));
            }
        }
        p[k] = std::move(xp);
    }
    return p[n];
}

// ---------------------------------------------------------------------------
// SpanBasis
// ---------------------------------------------------------------------------

std::vector<FieldElement> SpanBasis::reduce(std::vector<FieldElement> v) const {
    const Fq& F = *F_;
    for (size_t k = 0; k < rows_.size(); ++k) {
        const FieldElement& c = v[pivots_[k]];
        if (F.is_zero(c)) continue;
        FieldElement f = c;
        for (size_t j = 0; j < width_; ++j) v[j] = F.sub(v[j], F.mul(f, rows_[k][j]));
    }
    return v;
}

bool SpanBasis::insert(std::vector<FieldElement> v) {
    return insert_tagged(std::move(v), std::vector<FieldElement>(tag_width_, F_->zero()));
}

bool SpanBasis::insert_tagged(std::vector<FieldElement> v, std::vector<FieldElement> tag) {
    if (v.size() != width_) throw std::invalid_argument("SpanBasis::insert: width mismatch");
    if (tag.size() != tag_width_) throw std::invalid_argument("SpanBasis::insert: tag width mismatch");
    const Fq& F = *F_;
    for (size_t k = 0; k < rows_.size(); ++k) {
        FieldElement c = v[pivots_[k]];
        if (F.is_zero(c)) continue;
        for (size_t j = 0; j < width_; ++j) v[j] = F.sub(v[j], F.mul(c, rows_[k][j]));
        for (size_t j = 0; j < tag_width_; ++j) tag[j] = F.sub(tag[j], F.mul(c, tags_[k][j]));
    }
    size_t piv = width_;
    for (size_t j = 0; j < width_; ++j) {
        if (!F.is_zero(v[j])) {
            piv = j;
            break;
        }
    }
    if (piv == width_) return false;
    FieldElement inv = F.inv(v[piv]);
    for (auto& e : v) e = F.mul(e, inv);
    for (auto& e : tag) e = F.mul(e, inv);
    // Back-substitute into existing rows to keep reduced form.
    for (size_t k = 0; k < rows_.size(); ++k) {
        FieldElement c = rows_[k][piv];
        if (F.is_zero(c)) continue;
        for (size_t j = 0; j < width_; ++j) rows_[k][j] = F.sub(rows_[k][j], F.mul(c, v[j]));
        for (size_t j = 0; j < tag_width_; ++j) tags_[k][j] = F.sub(tags_[k][j], F.mul(c, tag[j]));
    }
    // Keep rows ordered by pivot for determinism.
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    tags_.insert(tags_.begin() + pos, std::move(tag));
    pivots_.insert(pivots_.begin() + pos, piv);
    return true;
}

bool SpanBasis::contains(std::vector<FieldElement> v) const {
    v = reduce(std::move(v));
    for (const auto& e : v) {
        if (!F_->is_zero(e)) return false;
    }
    return true;
}

std::optional<std::vector<FieldElement>> SpanBasis::decompose_tagged(
    std::vector<FieldElement> v) const {
    const Fq& F = *F_;
    std::vector<FieldElement> combo(tag_width_, F.zero());
    for (size_t k = 0; k < rows_.size(); ++k) {
        FieldElement c = v[pivots_[k]];
        if (F.is_zero(c)) continue;
        for (size_t j = 0; j < width_; ++j) v[j] = F.sub(v[j], F.mul(c, rows_[k][j]));
        for (size_t j = 0; j < tag_width_; ++j) combo[j] = F.add(combo[j], F.mul(c, tags_[k][j]));
    }
    for (const auto& e : v) {
        if (!F.is_zero(e)) return std::nullopt;
    }
    return combo;
}

// ---------------------------------------------------------------------------
// Polynomials over F_q
// ---------------------------------------------------------------------------

FqPoly poly_trim(const Fq& F, FqPoly f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
    return f;
}

FqPoly poly_add(const Fq& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    return poly_trim(F, std::move(r));
}

FqPoly poly_mul(const Fq& F, const FqPoly& a, const FqPoly& b) {
    if (a.empty() || b.empty()) return {};
    FqPoly r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return poly_trim(F, std::move(r));
}

FqPoly poly_monic(const Fq& F, FqPoly f) {
    f = poly_trim(F, std::move(f));
    if (f.empty()) return f;
    FieldElement inv = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, inv);
    return f;
}

FqPoly poly_mod(const Fq& F, FqPoly a, const FqPoly& m) {
    FqPoly mm = poly_trim(F, m);
    if (mm.empty()) throw std::invalid_argument("poly_mod: zero modulus");
    FieldElement lead_inv = F.inv(mm.back());
    a = poly_trim(F, std::move(a));
    while (a.size() >= mm.size()) {
        FieldElement f = F.mul(a.back(), lead_inv);
        size_t shift = a.size() - mm.size();
        for (size_t i = 0; i < mm.size(); ++i) {
            a[shift + i] = F.sub(a[shift + i], F.mul(f, mm[i]));
        }
        a = poly_trim(F, std::move(a));
        if (a.empty()) break;
    }
    return a;
}

FqPoly poly_divexact(const Fq& F, const FqPoly& a, const FqPoly& b) {
    FqPoly aa = poly_trim(F, a), bb = poly_trim(F, b);
    if (bb.empty()) throw std::invalid_argument("poly_divexact: zero divisor");
    if (aa.empty()) return {};
    if (aa.size() < bb.size()) throw std::invalid_argument("poly_divexact: not divisible");
    FieldElement lead_inv = F.inv(bb.back());
    FqPoly q(aa.size() - bb.size() + 1, F.zero());
    while (aa.size() >= bb.size()) {
        FieldElement f = F.mul(aa.back(), lead_inv);
        size_t shift = aa.size() - bb.size();
        q[shift] = f;
        for (size_t i = 0; i < bb.size(); ++i) aa[shift + i] = F.sub(aa[shift + i], F.mul(f, bb[i]));
        aa = poly_trim(F, std::move(aa));
        if (aa.empty()) break;
    }
    if (!aa.empty()) throw std::invalid_argument("poly_divexact: not divisible");
    return q;
}

FqPoly poly_gcd(const Fq& F, FqPoly a, FqPoly b) {
    a = poly_trim(F, std::move(a));
    b = poly_trim(F, std::move(b));
    while (!b.empty()) {
        FqPoly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, std::move(a));
}

FqPoly poly_derivative(const Fq& F, const FqPoly& f) {
    if (f.size() <= 1) return {};
    FqPoly r(f.size() - 1, F.zero());
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = F.mul_int(f[i], static_cast<int64_t>(i));
    return poly_trim(F, std::move(r));
}

FqPoly poly_radical(const Fq& F, FqPoly f) {
    f = poly_monic(F, std::move(f));
    if (f.empty()) throw std::invalid_argument("poly_radical: zero polynomial");
    const uint32_t p = F.p();
    FqPoly result = {F.one()};
    while (f.size() > 1) {
        FqPoly d = poly_derivative(F, f);
        if (d.empty()) {
            // f = g(T^p) = (h(T))^p with h obtained by p-th roots of coefficients.
            FqPoly h((f.size() - 1) / p + 1, F.zero());
            for (size_t i = 0; i < f.size(); ++i) {
                if (i % p == 0) {
                    h[i / p] = F.pth_root(f[i]);
                } else if (!F.is_zero(f[i])) {
                    throw std::logic_error("poly_radical: derivative zero but coefficients off p-grid");
                }
            }
            f = std::move(h);
            continue;
        }
        FqPoly g = poly_gcd(F, f, d);
        FqPoly w = poly_divexact(F, f, g);  // squarefree-ish cofactor
        // fold w into result without duplicate factors
        FqPoly dup = poly_gcd(F, result, w);
        result = poly_mul(F, result, poly_divexact(F, w, dup));
        f = std::move(g);
    }
    return poly_monic(F, std::move(result));
}

FqMatrix poly_eval_matrix(const FqPoly& f, const FqMatrix& A) {
    const Fq& F = A.field();
    size_t n = A.rows();
    FqMatrix r(F, n, n);
    // Horner
    for (size_t k = f.size(); k-- > 0;) {
        r = r.mul(A);
        for (size_t i = 0; i < n; ++i) r.at(i, i) = F.add(r.at(i, i), f[k]);
    }
    return r;
}

JordanParts jordan_decompose_matrix(const FqMatrix& A) {
    const Fq& F = A.field();
    const size_t n = A.rows();
    FqPoly chi = A.charpoly();
    FqPoly sigma = poly_radical(F, chi);
    FqPoly dsigma = poly_derivative(F, sigma);
    FqMatrix z = A;
    size_t guard = 0;
    for (;;) {
        FqMatrix s = poly_eval_matrix(sigma, z);
        if (s.is_zero()) break;
        FqMatrix ds = poly_eval_matrix(dsigma, z);
        auto inv = ds.inverse();
        if (!inv) throw std::logic_error("jordan_decompose_matrix: non-invertible derivative");
        z = z.sub(s.mul(*inv));
        if (++guard > 2 * n + 4) throw std::logic_error("jordan_decompose_matrix: iteration failed to converge");
    }
    JordanParts parts{z, A.sub(z)};
    return parts;
}

}  // namespace modlie
