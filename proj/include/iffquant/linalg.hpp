/**
 * @file linalg.hpp
 * @brief Exact dense and sparse linear algebra over the rationals.
 *
 * Dense matrices carry the small solves (echelon forms, kernels, inverses,
 * characteristic polynomials); the sparse type carries the large structured
 * operators (module actions, Casimir operators) where only products and
 * matrix-vector applications are needed. All pivoting is by lowest index so
 * every result is deterministic.
 */
#pragma once

#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polynomial.hpp"
#include "rational.hpp"

namespace iffquant {

using Vec = std::vector<Rational>;

inline bool vec_is_zero(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_scale(const Rational& s, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

class DenseMat {
public:
    DenseMat() : rows_(0), cols_(0) {}
    DenseMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static DenseMat identity(int n) {
        DenseMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Rational& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const DenseMat& a, const DenseMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const DenseMat& a, const DenseMat& b) { return !(a == b); }

    friend DenseMat operator+(const DenseMat& a, const DenseMat& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        DenseMat r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
        return r;
    }
    friend DenseMat operator-(const DenseMat& a, const DenseMat& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        DenseMat r(a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
        return r;
    }
    friend DenseMat operator*(const Rational& s, const DenseMat& m) {
        DenseMat r(m.rows_, m.cols_);
        for (size_t i = 0; i < m.a_.size(); ++i) r.a_[i] = s * m.a_[i];
        return r;
    }
    friend DenseMat operator*(const DenseMat& a, const DenseMat& b) {
        assert(a.cols_ == b.rows_);
        DenseMat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rational& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const Rational& bkj = b.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }

    Vec apply(const Vec& v) const {
        assert(static_cast<int>(v.size()) == cols_);
        Vec r(rows_, Rational(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    DenseMat transpose() const {
        DenseMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Rational trace() const {
        assert(rows_ == cols_);
        Rational t(0);
        for (int i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    Vec row(int r) const {
        Vec v(cols_);
        for (int j = 0; j < cols_; ++j) v[j] = at(r, j);
        return v;
    }
    Vec col(int c) const {
        Vec v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = at(i, c);
        return v;
    }
    void set_col(int c, const Vec& v) {
        assert(static_cast<int>(v.size()) == rows_);
        for (int i = 0; i < rows_; ++i) at(i, c) = v[i];
    }

    static DenseMat from_columns(const std::vector<Vec>& cols) {
        if (cols.empty()) return DenseMat(0, 0);
        DenseMat m(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
        for (size_t c = 0; c < cols.size(); ++c) m.set_col(static_cast<int>(c), cols[c]);
        return m;
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int p = -1;
            for (int i = r; i < rows_; ++i)
                if (!at(i, c).is_zero()) { p = i; break; }
            if (p < 0) continue;
            if (p != r)
                for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
            const Rational inv = at(r, c).inverse();
            for (int j = c; j < cols_; ++j) at(r, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == r || at(i, c).is_zero()) continue;
                const Rational f = at(i, c);
                for (int j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        DenseMat m = *this;
        return static_cast<int>(m.rref().size());
    }

    /// Basis of the null space, as columns in reduced deterministic form.
    DenseMat kernel() const {
        DenseMat m = *this;
        std::vector<int> pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int p : pivots) is_pivot[p] = true;
        std::vector<Vec> cols;
        for (int c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            Vec v(cols_, Rational(0));
            v[c] = Rational(1);
            for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), c);
            cols.push_back(std::move(v));
        }
        if (cols.empty()) return DenseMat(cols_, 0);
        return from_columns(cols);
    }

    /// Solves A x = b; nullopt when inconsistent. Free variables are set to 0.
    std::optional<Vec> solve(const Vec& b) const {
        assert(static_cast<int>(b.size()) == rows_);
        DenseMat aug(rows_, cols_ + 1);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        std::vector<int> pivots = aug.rref();
        if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
        Vec x(cols_, Rational(0));
        for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), cols_);
        return x;
    }

    std::optional<DenseMat> inverse() const {
        assert(rows_ == cols_);
        DenseMat aug(rows_, 2 * cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = Rational(1);
        }
        std::vector<int> pivots = aug.rref();
        if (static_cast<int>(pivots.size()) != rows_) return std::nullopt;
        for (int r = 0; r < rows_; ++r)
            if (pivots[r] != r) return std::nullopt;
        DenseMat inv(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

    /// Characteristic polynomial det(xI - A), by the division-free Berkowitz
    /// algorithm. Intended for small matrices.
    QPoly charpoly() const {
        assert(rows_ == cols_);
        const int n = rows_;
        if (n == 0) return QPoly::one();
        // Berkowitz: iteratively build the coefficient vector via Toeplitz products.
        std::vector<Rational> poly{Rational(1)}; // coefficients, descending powers
        for (int k = 0; k < n; ++k) {
            // Principal leading (k+1)x(k+1) submatrix A_{k+1}; partition:
            // a = A[k][k], R = row A[k][0..k-1], C = col A[0..k-1][k], M = A_k.
            std::vector<Rational> t(k + 2);
            t[0] = Rational(1);
            t[1] = -at(k, k);
            if (k > 0) {
                Vec c(k);
                for (int i = 0; i < k; ++i) c[i] = at(i, k);
                Vec mc = c;
                for (int j = 2; j <= k + 1; ++j) {
                    // t[j] = - R . M^{j-2} c
                    Rational dot(0);
                    for (int i = 0; i < k; ++i) dot += at(k, i) * mc[i];
                    t[j] = -dot;
                    if (j <= k) {
                        Vec next(k, Rational(0));
                        for (int i = 0; i < k; ++i) {
                            if (mc[i].is_zero()) continue;
                            for (int r = 0; r < k; ++r)
                                if (!at(r, i).is_zero()) next[r] += at(r, i) * mc[i];
                        }
                        mc = std::move(next);
                    }
                }
            }
            std::vector<Rational> next(poly.size() + 1, Rational(0));
            for (size_t i = 0; i < poly.size(); ++i)
                for (size_t j = 0; j < t.size() && i + j < next.size(); ++j)
                    next[i + j] += poly[i] * t[j];
            poly = std::move(next);
        }
        // Convert descending to ascending order.
        std::vector<Rational> asc(poly.rbegin(), poly.rend());
        return QPoly(std::move(asc));
    }

private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

/// Row-compressed sparse matrix; entries within each row sorted by column.
class SparseMat {
public:
    using Entry = std::pair<int, Rational>;

    SparseMat() : rows_(0), cols_(0) {}
    SparseMat(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {}

    static SparseMat identity(int n) {
        SparseMat m(n, n);
        for (int i = 0; i < n; ++i) m.row_[i].emplace_back(i, Rational(1));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<Entry>& row_entries(int r) const { return row_[r]; }

    void add_entry(int r, int c, const Rational& v) {
        if (v.is_zero()) return;
        auto& row = row_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, int col) { return e.first < col; });
        if (it != row.end() && it->first == c) {
            it->second += v;
            if (it->second.is_zero()) row.erase(it);
        } else {
            row.insert(it, {c, v});
        }
    }

    size_t nnz() const {
        size_t n = 0;
        for (const auto& r : row_) n += r.size();
        return n;
    }

    bool is_zero() const { return nnz() == 0; }

    friend bool operator==(const SparseMat& a, const SparseMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ == b.row_;
    }
    friend bool operator!=(const SparseMat& a, const SparseMat& b) { return !(a == b); }

    Vec apply(const Vec& v) const {
        assert(static_cast<int>(v.size()) == cols_);
        Vec r(rows_, Rational(0));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, x] : row_[i])
                if (!v[c].is_zero()) r[i] += x * v[c];
        return r;
    }

    friend SparseMat operator*(const SparseMat& a, const SparseMat& b) {
        assert(a.cols_ == b.rows_);
        SparseMat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            std::map<int, Rational> acc;
            for (const auto& [k, av] : a.row_[i])
                for (const auto& [j, bv] : b.row_[k]) acc[j] += av * bv;
            auto& out = r.row_[i];
            for (auto& [j, v] : acc)
                if (!v.is_zero()) out.emplace_back(j, std::move(v));
        }
        return r;
    }

    friend SparseMat operator+(const SparseMat& a, const SparseMat& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        SparseMat r = a;
        for (int i = 0; i < b.rows_; ++i)
            for (const auto& [c, v] : b.row_[i]) r.add_entry(i, c, v);
        return r;
    }
    friend SparseMat operator-(const SparseMat& a, const SparseMat& b) {
        SparseMat r = a;
        for (int i = 0; i < b.rows_; ++i)
            for (const auto& [c, v] : b.row_[i]) r.add_entry(i, c, -v);
        return r;
    }
    friend SparseMat operator*(const Rational& s, const SparseMat& m) {
        SparseMat r(m.rows_, m.cols_);
        if (s.is_zero()) return r;
        for (int i = 0; i < m.rows_; ++i)
            for (const auto& [c, v] : m.row_[i]) r.row_[i].emplace_back(c, s * v);
        return r;
    }

    DenseMat to_dense() const {
        DenseMat d(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : row_[i]) d.at(i, c) = v;
        return d;
    }

    static SparseMat from_dense(const DenseMat& d) {
        SparseMat m(d.rows(), d.cols());
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j)
                if (!d.at(i, j).is_zero()) m.row_[i].emplace_back(j, d.at(i, j));
        return m;
    }

private:
    int rows_, cols_;
    std::vector<std::vector<Entry>> row_;
};

/// Reduced column echelon basis of the column space of `cols`, with pivot
/// rows chosen in increasing index order. Returns (basis, pivot_rows).
inline std::pair<DenseMat, std::vector<int>> column_space_basis(const DenseMat& cols) {
    DenseMat t = cols.transpose();
    std::vector<int> pivots = t.rref();
    DenseMat basis(cols.rows(), static_cast<int>(pivots.size()));
    for (size_t r = 0; r < pivots.size(); ++r)
        for (int j = 0; j < cols.rows(); ++j) basis.at(j, static_cast<int>(r)) = t.at(static_cast<int>(r), j);
    return {basis, pivots};
}

namespace detail {

/// Minimal polynomial of the vector v under M (monic generator of the ideal
/// of polynomials p with p(M)v = 0), via incremental elimination on the
/// Krylov chain.
inline QPoly local_min_poly(const SparseMat& M, const Vec& v0) {
    const int n = M.cols();
    // Echelon store: rows with pivot bookkeeping, plus the combination that
    // produced each stored vector as polynomial coefficients over the chain.
    std::vector<Vec> reduced;            // reduced chain vectors
    std::vector<int> pivot_of;           // pivot index per reduced vector
    std::vector<std::vector<Rational>> combo; // combination over powers
    Vec v = v0;
    int power = 0;
    for (;;) {
        // Reduce v against the store, tracking the combination.
        Vec w = v;
        std::vector<Rational> cmb(static_cast<size_t>(power) + 1, Rational(0));
        cmb[power] = Rational(1);
        for (size_t k = 0; k < reduced.size(); ++k) {
            const Rational& lead = w[pivot_of[k]];
            if (lead.is_zero()) continue;
            const Rational f = lead;
            w = vec_sub(w, vec_scale(f, reduced[k]));
            for (size_t j = 0; j < combo[k].size(); ++j) {
                if (j >= cmb.size()) cmb.resize(j + 1, Rational(0));
                cmb[j] -= f * combo[k][j];
            }
        }
        int piv = -1;
        for (int i = 0; i < n; ++i)
            if (!w[i].is_zero()) { piv = i; break; }
        if (piv < 0) {
            // Dependency found: cmb gives the monic generator (leading power).
            return QPoly(std::move(cmb)).monic();
        }
        const Rational inv = w[piv].inverse();
        w = vec_scale(inv, w);
        for (auto& c : cmb) c *= inv;
        reduced.push_back(std::move(w));
        pivot_of.push_back(piv);
        combo.push_back(std::move(cmb));
        v = M.apply(v);
        ++power;
    }
}

inline Vec poly_apply(const QPoly& p, const SparseMat& M, const Vec& v) {
    Vec acc(v.size(), Rational(0));
    for (int i = p.degree(); i >= 0; --i) {
        acc = M.apply(acc);
        const Rational c = p.coeff(i);
        if (!c.is_zero())
            for (size_t j = 0; j < v.size(); ++j) acc[j] += c * v[j];
    }
    return acc;
}

} // namespace detail

/// Exact minimal polynomial of a square matrix. Deterministic and certified:
/// the result annihilates every standard basis vector by construction.
inline QPoly minimal_polynomial(const SparseMat& M) {
    assert(M.rows() == M.cols());
    const int n = M.rows();
    QPoly mu = QPoly::one();
    for (int i = 0; i < n; ++i) {
        Vec e(n, Rational(0));
        e[i] = Rational(1);
        if (mu.degree() > 0 && vec_is_zero(detail::poly_apply(mu, M, e))) continue;
        QPoly local = detail::local_min_poly(M, e);
        mu = QPoly::lcm(mu, local);
    }
    return mu;
}

inline QPoly minimal_polynomial(const DenseMat& M) {
    return minimal_polynomial(SparseMat::from_dense(M));
}

/// Evaluates p(M) densely (Horner). Intended for small matrices.
inline DenseMat poly_eval_matrix(const QPoly& p, const DenseMat& M) {
    assert(M.rows() == M.cols());
    const int n = M.rows();
    DenseMat acc(n, n);
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * M;
        const Rational c = p.coeff(i);
        if (!c.is_zero()) acc = acc + c * DenseMat::identity(n);
    }
    return acc;
}

} // namespace iffquant
