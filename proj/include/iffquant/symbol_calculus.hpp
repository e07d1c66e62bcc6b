/**
 * @file symbol_calculus.hpp
 * @brief The degree-lowering map gamma, the flat Casimir operator, its exact
 *        spectral decomposition, tree subspaces and the criticality detector.
 *
 * gamma is implemented twice on purpose: once from its defining double sum
 * and once through the first-slot recursion gamma(h)(x0 (x) T) =
 * rho_{r*}([h,x0]) T + x0 (x) gamma(h) T. Tests assert the two agree.
 *
 * The flat Casimir is
 *     C = -1/2 rho(E) + 1/(2d) rho(E)^2 + sum_j rho(A_j) rho(A_j^*),
 * taken with the Killing-dual pairs of the algebra. Spectral components are
 * keyed by monic irreducible factors of its (squarefree) minimal polynomial,
 * which keeps everything rational even when eigenvalues are not.
 */
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lie_core.hpp"
#include "linalg.hpp"
#include "poly_factor.hpp"
#include "polynomial.hpp"
#include "representations.hpp"

namespace iffquant {

// ------------------------------------------------------------------ gamma ---

namespace symcal_detail {

inline void require_g1(const GradedAlgebra& alg, const AlgebraElement& h) {
    if (static_cast<int>(h.size()) != alg.dim_g())
        throw std::invalid_argument("gamma: element dimension mismatch");
    for (int a = 0; a < alg.dim_g(); ++a)
        if (!h[a].is_zero() && alg.grading[a] != 1)
            throw std::invalid_argument("gamma: element is not in g_1");
}

/// g_0 slot coordinates of a g_0-valued algebra element.
inline std::vector<Rational> g0_coords(const GradedAlgebra& alg, const AlgebraElement& x) {
    std::vector<Rational> c(alg.g0_count());
    for (int t = 0; t < alg.g0_count(); ++t) c[t] = x[alg.g0_index(t)];
    return c;
}

} // namespace symcal_detail

/// rho_{r*}(B) applied to a coordinate vector of degree `deg`, computed
/// slot-by-slot from the module actions (no precomputed matrices).
inline Vec rho_r_apply(const GradedAlgebra& alg, const Representation& V1,
                       const Representation& V2, int deg, const AlgebraElement& B,
                       const Vec& T) {
    const int homdim = V1.dim * V2.dim;
    const DenseMat ad = ad_on_gm1(alg, B);
    const DenseMat m1 = rep_action(alg, V1, B);
    int nwords = 1;
    for (int t = 0; t < deg; ++t) nwords *= alg.d;
    Vec out(T.size(), Rational(0));
    std::vector<int> w(deg);
    for (int widx = 0; widx < nwords; ++widx) {
        int tmp = widx;
        for (int t = deg - 1; t >= 0; --t) {
            w[t] = tmp % alg.d;
            tmp /= alg.d;
        }
        for (int h = 0; h < homdim; ++h) {
            const Rational& c = T[static_cast<size_t>(widx) * homdim + h];
            if (c.is_zero()) continue;
            const int r = h / V1.dim, col = h % V1.dim;
            for (int slot = 0; slot < deg; ++slot) {
                int stride = 1;
                for (int t = slot + 1; t < deg; ++t) stride *= alg.d;
                for (int s = 0; s < alg.d; ++s) {
                    const Rational& cf = ad.at(s, w[slot]);
                    if (cf.is_zero()) continue;
                    const int widx2 = widx + (s - w[slot]) * stride;
                    out[static_cast<size_t>(widx2) * homdim + h] += c * cf;
                }
            }
            for (int c2 = 0; c2 < V1.dim; ++c2)
                if (!m1.at(col, c2).is_zero())
                    out[static_cast<size_t>(widx) * homdim + r * V1.dim + c2] -=
                        c * m1.at(col, c2);
        }
    }
    return out;
}

/// gamma(h) from the defining double sum: drop one slot into the gl part,
/// or contract a pair of slots through [[h, x_i], x_j].
inline Vec gamma_apply(const SymbolSpace& sp, const AlgebraElement& h, const Vec& T) {
    symcal_detail::require_g1(sp.alg, h);
    const int k = sp.degree;
    const int homdim = sp.homdim;
    const int lower_dim = (k == 0) ? 0 : sp.dim / sp.alg.d;
    Vec out(lower_dim, Rational(0));
    if (k == 0) return out;
    // cache [h, e_i] and its gl precompositions / g_{-1} actions
    std::vector<AlgebraElement> he(sp.alg.d);
    std::vector<DenseMat> m1_he(sp.alg.d), ad_he(sp.alg.d);
    for (int i = 0; i < sp.alg.d; ++i) {
        he[i] = bracket(sp.alg, h, sp.alg.basis_element(sp.alg.idx_e(i)));
        m1_he[i] = rep_action(sp.alg, sp.V1, he[i]);
        ad_he[i] = ad_on_gm1(sp.alg, he[i]);
    }
    const int nwords = sp.word_count();
    for (int widx = 0; widx < nwords; ++widx) {
        bool any = false;
        for (int hidx = 0; hidx < homdim; ++hidx)
            if (!T[static_cast<size_t>(widx) * homdim + hidx].is_zero()) {
                any = true;
                break;
            }
        if (!any) continue;
        const std::vector<int> w = sp.unrank_word(widx);
        for (int hidx = 0; hidx < homdim; ++hidx) {
            const Rational& c = T[static_cast<size_t>(widx) * homdim + hidx];
            if (c.is_zero()) continue;
            const int r = hidx / sp.V1.dim, col = hidx % sp.V1.dim;
            for (int i = 0; i < k; ++i) {
                std::vector<int> wi;
                wi.reserve(k - 1);
                for (int t = 0; t < k; ++t)
                    if (t != i) wi.push_back(w[t]);
                int rank = 0;
                for (int v : wi) rank = rank * sp.alg.d + v;
                // - (drop slot i) (x) l o rho_1([h, x_i])
                const DenseMat& m1 = m1_he[w[i]];
                for (int c2 = 0; c2 < sp.V1.dim; ++c2)
                    if (!m1.at(col, c2).is_zero())
                        out[static_cast<size_t>(rank) * homdim + r * sp.V1.dim + c2] -=
                            c * m1.at(col, c2);
                // + (drop slot i, send x_j to [[h,x_i],x_j]) (x) l, for j > i
                for (int j = i + 1; j < k; ++j) {
                    const int jj = j - 1; // slot j shifts left once i is dropped
                    int stride = 1;
                    for (int t = jj + 1; t < k - 1; ++t) stride *= sp.alg.d;
                    const DenseMat& ad = ad_he[w[i]];
                    for (int s = 0; s < sp.alg.d; ++s) {
                        const Rational& cf = ad.at(s, w[j]);
                        if (cf.is_zero()) continue;
                        const int rank2 = rank + (s - w[j]) * stride;
                        out[static_cast<size_t>(rank2) * homdim + hidx] += c * cf;
                    }
                }
            }
        }
    }
    return out;
}

/// gamma(h) through the first-slot recursion; an independent code path used
/// to cross-check gamma_apply.
inline Vec gamma_apply_recursive(const GradedAlgebra& alg, const Representation& V1,
                                 const Representation& V2, int k, const AlgebraElement& h,
                                 const Vec& T) {
    symcal_detail::require_g1(alg, h);
    const int homdim = V1.dim * V2.dim;
    if (k == 0) return Vec();
    int tail_dim = homdim; // dimension of the degree-(k-1) space
    for (int t = 0; t < k - 1; ++t) tail_dim *= alg.d;
    Vec out(tail_dim, Rational(0));
    for (int s = 0; s < alg.d; ++s) {
        // slice T_s: first slot equal to e_s
        Vec ts(tail_dim, Rational(0));
        bool nonzero = false;
        for (int idx = 0; idx < tail_dim; ++idx) {
            ts[idx] = T[static_cast<size_t>(s) * tail_dim + idx];
            if (!ts[idx].is_zero()) nonzero = true;
        }
        if (!nonzero) continue;
        const AlgebraElement hs = bracket(alg, h, alg.basis_element(alg.idx_e(s)));
        // rho_{r*}([h, e_s]) T_s contributes at degree k-1
        Vec term = rho_r_apply(alg, V1, V2, k - 1, hs, ts);
        for (int idx = 0; idx < tail_dim; ++idx) out[idx] += term[idx];
        // e_s (x) gamma(h) T_s contributes in the s-block of degree k-1
        if (k >= 2) {
            Vec inner = gamma_apply_recursive(alg, V1, V2, k - 1, h, ts);
            const int inner_dim = static_cast<int>(inner.size());
            for (int idx = 0; idx < inner_dim; ++idx)
                out[static_cast<size_t>(s) * inner_dim + idx] += inner[idx];
        }
    }
    return out;
}

/// Matrix of gamma(h) from degree k to degree k-1 in the indexed bases.
inline SparseMat gamma_matrix(const SymbolSpace& sp, const AlgebraElement& h) {
    symcal_detail::require_g1(sp.alg, h);
    const int lower_dim = (sp.degree == 0) ? 0 : sp.dim / sp.alg.d;
    SparseMat g(lower_dim, sp.dim);
    if (sp.degree == 0) return g;
    Vec unit(sp.dim, Rational(0));
    for (int col = 0; col < sp.dim; ++col) {
        unit[col] = Rational(1);
        Vec image = gamma_apply(sp, h, unit);
        for (int row = 0; row < lower_dim; ++row)
            if (!image[row].is_zero()) g.add_entry(row, col, image[row]);
        unit[col] = Rational(0);
    }
    return g;
}

/// Fills sp.gamma with the maps gamma(eps^i), i = 1..d.
inline void attach_gamma(SymbolSpace& sp) {
    sp.gamma.clear();
    sp.gamma.reserve(sp.alg.d);
    for (int i = 0; i < sp.alg.d; ++i)
        sp.gamma.push_back(gamma_matrix(sp, sp.alg.basis_element(sp.alg.idx_eps(i))));
}

// ----------------------------------------------------------- flat Casimir ---

/// Action of a g_0 element as a sparse matrix, over a chosen variant family.
inline SparseMat sparse_action(const SymbolSpace& sp, const AlgebraElement& X,
                               const std::vector<SparseMat>& variant) {
    SparseMat m(sp.dim, sp.dim);
    for (int t = 0; t < sp.alg.g0_count(); ++t) {
        const Rational& c = X[sp.alg.g0_index(t)];
        if (!c.is_zero()) m = m + c * variant[t];
    }
    return m;
}

inline SparseMat cflat_matrix(const SymbolSpace& sp) {
    const GradedAlgebra& alg = sp.alg;
    const SparseMat& euler = sp.rho_star[0];
    SparseMat c = Rational(-1, 2) * euler + Rational(1, 2 * alg.d) * (euler * euler);
    for (int j = 0; j < alg.dim_h0; ++j) {
        const SparseMat dual_action = sparse_action(sp, alg.dual[alg.idx_A(j)], sp.rho_star);
        c = c + sp.rho_star[1 + j] * dual_action;
    }
    return c;
}

/// Minimal polynomial of the flat Casimir, computed blockwise over the joint
/// weight decomposition of a split Cartan set when one is available.
inline QPoly cflat_minimal_polynomial(const SymbolSpace& sp, const SparseMat& cflat) {
    const GradedAlgebra& alg = sp.alg;
    const CartanSet cs = cartan_set(alg);
    bool usable = !cs.elements.empty();
    WeightBasis w1, w2;
    if (usable) {
        try {
            w1 = rep_weight_basis(alg, sp.V1.desc, cs);
            w2 = rep_weight_basis(alg, sp.V2.desc, cs);
            usable = weight_basis_valid(alg, sp.V1, cs, w1) && weight_basis_valid(alg, sp.V2, cs, w2);
        } catch (const std::exception&) {
            usable = false;
        }
    }
    if (!usable) return minimal_polynomial(cflat);

    const int r = static_cast<int>(cs.elements.size());
    const WeightBasis& ws = cs.standard;
    const int k = sp.degree;
    // Assemble the Kronecker change of basis on the symbol space and the
    // joint weight of each new basis vector.
    SparseMat P(sp.dim, sp.dim), Pinv(sp.dim, sp.dim);
    std::vector<std::vector<Rational>> weight(sp.dim, std::vector<Rational>(r));
    const int nwords = sp.word_count();
    for (int widx = 0; widx < nwords; ++widx) {
        const std::vector<int> w = sp.unrank_word(widx);
        for (int row2 = 0; row2 < sp.V2.dim; ++row2)
            for (int col1 = 0; col1 < sp.V1.dim; ++col1) {
                const int col = widx * sp.homdim + sp.hom_index(row2, col1);
                for (int t = 0; t < r; ++t) {
                    Rational acc = w2.weights[row2][t] - w1.weights[col1][t];
                    for (int slot = 0; slot < k; ++slot) acc += ws.weights[w[slot]][t];
                    weight[col][t] = acc;
                }
                // expand the product of columns of the slot/hom factors
                std::vector<std::pair<int, Rational>> terms{{0, Rational(1)}};
                for (int slot = 0; slot < k; ++slot) {
                    std::vector<std::pair<int, Rational>> next;
                    for (const auto& [base, coeff] : terms)
                        for (int s = 0; s < alg.d; ++s)
                            if (!ws.P.at(s, w[slot]).is_zero())
                                next.emplace_back(base * alg.d + s, coeff * ws.P.at(s, w[slot]));
                    terms = std::move(next);
                }
                for (const auto& [wordrank, coeff] : terms)
                    for (int s2 = 0; s2 < sp.V2.dim; ++s2)
                        for (int s1 = 0; s1 < sp.V1.dim; ++s1) {
                            const Rational v =
                                coeff * w2.P.at(s2, row2) * w1.Pinv.at(col1, s1);
                            if (!v.is_zero())
                                P.add_entry(wordrank * sp.homdim + sp.hom_index(s2, s1), col, v);
                        }
                // inverse transform
                std::vector<std::pair<int, Rational>> iterms{{0, Rational(1)}};
                for (int slot = 0; slot < k; ++slot) {
                    std::vector<std::pair<int, Rational>> next;
                    for (const auto& [base, coeff] : iterms)
                        for (int s = 0; s < alg.d; ++s)
                            if (!ws.Pinv.at(w[slot], s).is_zero())
                                next.emplace_back(base * alg.d + s,
                                                  coeff * ws.Pinv.at(w[slot], s));
                    iterms = std::move(next);
                }
                for (const auto& [wordrank, coeff] : iterms)
                    for (int s2 = 0; s2 < sp.V2.dim; ++s2)
                        for (int s1 = 0; s1 < sp.V1.dim; ++s1) {
                            const Rational v =
                                coeff * w2.Pinv.at(row2, s2) * w1.P.at(s1, col1);
                            if (!v.is_zero())
                                Pinv.add_entry(col, wordrank * sp.homdim + sp.hom_index(s2, s1),
                                               v);
                        }
            }
    }
    const SparseMat conj = Pinv * cflat * P;
    // Group indices by joint weight; the conjugated Casimir must be block
    // diagonal over the groups because it commutes with the Cartan set.
    std::map<std::vector<Rational>, std::vector<int>> blocks;
    for (int i = 0; i < sp.dim; ++i) blocks[weight[i]].push_back(i);
    std::vector<int> block_of(sp.dim);
    {
        int bi = 0;
        for (const auto& [wt, idxs] : blocks) {
            for (int i : idxs) block_of[i] = bi;
            ++bi;
        }
    }
    for (int i = 0; i < sp.dim; ++i)
        for (const auto& [j, v] : conj.row_entries(i))
            if (block_of[i] != block_of[j])
                throw std::logic_error("cflat_minimal_polynomial: operator is not block diagonal "
                                       "over the Cartan weights");
    QPoly mu = QPoly::one();
    for (const auto& [wt, idxs] : blocks) {
        const int bn = static_cast<int>(idxs.size());
        std::vector<int> local(sp.dim, -1);
        for (int t = 0; t < bn; ++t) local[idxs[t]] = t;
        SparseMat sub(bn, bn);
        for (int t = 0; t < bn; ++t)
            for (const auto& [j, v] : conj.row_entries(idxs[t])) sub.add_entry(t, local[j], v);
        mu = QPoly::lcm(mu, minimal_polynomial(sub));
    }
    return mu;
}

inline QPoly cflat_minimal_polynomial(const SymbolSpace& sp) {
    return cflat_minimal_polynomial(sp, cflat_matrix(sp));
}

// --------------------------------------------------------- spectral split ---

struct SpectralComponent {
    QPoly factor;                       ///< monic irreducible over Q
    std::optional<Rational> eigenvalue; ///< set when the factor is linear
    DenseMat basis;                     ///< columns span the component
    std::vector<int> pivot_rows;        ///< unit rows of the reduced basis
    DenseMat projection;                ///< exact projection onto the component
    int dim = 0;
};

struct SpectralDecomposition {
    QPoly minpoly;
    QPoly charpoly;
    std::vector<SpectralComponent> components;
};

struct NonSemisimpleError : std::runtime_error {
    explicit NonSemisimpleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Exact spectral decomposition of a semisimple matrix. Components are the
/// kernels of the irreducible factors of the minimal polynomial evaluated at
/// the matrix; the input is rejected when the minimal polynomial is not
/// squarefree.
inline SpectralDecomposition spectral_split(const DenseMat& m,
                                            std::optional<QPoly> minpoly_hint = std::nullopt) {
    if (m.rows() != m.cols()) throw std::invalid_argument("spectral_split: matrix not square");
    const int n = m.rows();
    SpectralDecomposition dec;
    dec.minpoly = minpoly_hint ? *minpoly_hint : minimal_polynomial(m);
    if (!dec.minpoly.is_squarefree())
        throw NonSemisimpleError("spectral_split: minimal polynomial is not squarefree");
    const Factorization fac = factor_rational(dec.minpoly);
    dec.charpoly = QPoly::one();
    int total = 0;
    for (const auto& [f, mult] : fac.factors) {
        if (mult != 1) throw NonSemisimpleError("spectral_split: repeated factor");
        SpectralComponent comp;
        comp.factor = f;
        if (f.degree() == 1) comp.eigenvalue = -f.coeff(0);
        const DenseMat fm = poly_eval_matrix(f, m);
        DenseMat ker = fm.kernel();
        auto [basis, pivots] = column_space_basis(ker);
        comp.basis = std::move(basis);
        comp.pivot_rows = std::move(pivots);
        comp.dim = comp.basis.cols();
        // Projection: CRT idempotent g with g = 1 mod f, g = 0 mod minpoly/f.
        const QPoly rest = dec.minpoly / f;
        auto [g, s, t] = QPoly::ext_gcd(f, rest);
        if (g.degree() != 0)
            throw std::logic_error("spectral_split: factors not coprime");
        comp.projection = poly_eval_matrix(t * rest, m);
        total += comp.dim;
        dec.components.push_back(std::move(comp));
    }
    if (total != n)
        throw NonSemisimpleError("spectral_split: component dimensions do not fill the space");
    // characteristic polynomial = product of factors with multiplicity
    // dim/deg, valid exactly because the matrix is semisimple.
    dec.charpoly = QPoly::one();
    for (const auto& comp : dec.components) {
        if (comp.dim % comp.factor.degree() != 0)
            throw std::logic_error("spectral_split: component dimension not divisible");
        for (int e = 0; e < comp.dim / comp.factor.degree(); ++e)
            dec.charpoly = dec.charpoly * comp.factor;
    }
    return dec;
}

// ------------------------------------------------------------ symbol tower ---

/// Spaces of every degree 0..k with gamma maps attached; the shared substrate
/// for tree subspaces, the recursion and the quantization map.
struct SymbolTower {
    std::vector<SymbolSpace> spaces; // index = degree

    const SymbolSpace& at(int degree) const { return spaces.at(degree); }
    int top_degree() const { return static_cast<int>(spaces.size()) - 1; }
};

inline SymbolTower build_symbol_tower(const GradedAlgebra& alg, const Representation& V1,
                                      const Representation& V2, int k) {
    SymbolTower tower;
    tower.spaces.reserve(k + 1);
    for (int j = 0; j <= k; ++j) {
        SymbolSpace sp = symbol_space(alg, V1, V2, j);
        attach_gamma(sp);
        tower.spaces.push_back(std::move(sp));
    }
    return tower;
}

// ---------------------------------------------------------- tree subspaces ---

struct TreeSubspace {
    int level = 0;               ///< lives at degree (top - level)
    DenseMat basis;              ///< reduced column echelon basis
    std::vector<int> pivot_rows; ///< unit rows of the reduced basis
    int dim() const { return basis.cols(); }
};

/// Iterated gamma(g_1)-images of a component at the tower's degree `k`.
/// Level 0 is the component itself; levels beyond `k` are zero.
inline std::vector<TreeSubspace> tree_subspaces(const SymbolTower& tower, int k,
                                                const SpectralComponent& component,
                                                int l_max) {
    std::vector<TreeSubspace> out;
    TreeSubspace root;
    root.level = 0;
    root.basis = component.basis;
    root.pivot_rows = component.pivot_rows;
    out.push_back(root);
    DenseMat cur = component.basis;
    for (int l = 1; l <= l_max; ++l) {
        if (l > k || cur.cols() == 0) {
            TreeSubspace empty;
            empty.level = l;
            empty.basis = DenseMat((l <= k) ? tower.at(k - l).dim : 0, 0);
            out.push_back(empty);
            cur = out.back().basis;
            continue;
        }
        const SymbolSpace& sp = tower.at(k - l + 1); // gamma maps degree k-l+1 -> k-l
        std::vector<Vec> cols;
        for (int i = 0; i < sp.alg.d; ++i)
            for (int c = 0; c < cur.cols(); ++c) {
                Vec v = sp.gamma[i].apply(cur.col(c));
                if (!vec_is_zero(v)) cols.push_back(std::move(v));
            }
        TreeSubspace ts;
        ts.level = l;
        if (cols.empty()) {
            ts.basis = DenseMat(tower.at(k - l).dim, 0);
        } else {
            auto [basis, pivots] = column_space_basis(DenseMat::from_columns(cols));
            ts.basis = std::move(basis);
            ts.pivot_rows = std::move(pivots);
        }
        cur = ts.basis;
        out.push_back(std::move(ts));
    }
    return out;
}

/// Matrix of an operator restricted to an invariant subspace given by a
/// reduced column echelon basis. Throws when the subspace is not invariant.
inline DenseMat restrict_operator(const SparseMat& op, const DenseMat& basis,
                                  const std::vector<int>& pivot_rows) {
    const int r = basis.cols();
    DenseMat image(basis.rows(), r);
    for (int c = 0; c < r; ++c) image.set_col(c, op.apply(basis.col(c)));
    DenseMat out(r, r);
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < r; ++c) out.at(i, c) = image.at(pivot_rows[i], c);
    // invariance certificate: basis * out == image
    for (int c = 0; c < r; ++c) {
        Vec recon = basis.apply(out.col(c));
        if (recon != image.col(c))
            throw std::logic_error("restrict_operator: subspace is not invariant");
    }
    return out;
}

// ------------------------------------------------------------- criticality ---

struct ComponentRecord {
    int degree = 0; ///< symbol degree whose symmetric part carries the component
    QPoly factor;
    std::optional<Rational> eigenvalue;
    int dim = 0;                                     ///< dimension inside S^degree
    std::vector<std::pair<int, QPoly>> tree_spectra; ///< (level, charpoly of restriction)
    bool critical = false;
};

struct CriticalityReport {
    AlgebraSignature algebra;
    RepDescriptor v1, v2;
    int k = 0;
    std::vector<ComponentRecord> components;
    bool overall_critical = false;
};

/// Spectral decomposition of the flat Casimir restricted to the symmetric
/// subspace S^degree, with component bases embedded into the full tensor
/// power.
inline SpectralDecomposition symmetric_cflat_split(const SymbolTower& tower, int degree) {
    const SymbolSpace& sp = tower.at(degree);
    const SparseMat cflat = cflat_matrix(sp);
    const SparseMat embed = embed_symmetric_matrix(sp);
    const SparseMat restr = restrict_symmetric_matrix(sp);
    const DenseMat msym = (restr * cflat * embed).to_dense();
    SpectralDecomposition dec = spectral_split(msym);
    // re-express component bases inside the full tensor power
    const DenseMat embed_dense = embed.to_dense();
    for (auto& comp : dec.components) {
        auto [basis, pivots] = column_space_basis(embed_dense * comp.basis);
        comp.basis = std::move(basis);
        comp.pivot_rows = std::move(pivots);
    }
    return dec;
}

/// Detects critical representation pairs: a component at some degree <= k is
/// critical when its eigenvalue factor reappears in the spectrum of the flat
/// Casimir restricted to a tree level l >= 1.
inline CriticalityReport criticality_report(const GradedAlgebra& alg, const Representation& V1,
                                            const Representation& V2, int k) {
    CriticalityReport rep;
    rep.algebra = alg.signature;
    rep.v1 = V1.desc;
    rep.v2 = V2.desc;
    rep.k = k;
    const SymbolTower tower = build_symbol_tower(alg, V1, V2, k);
    std::vector<SparseMat> cflats;
    for (int j = 0; j <= k; ++j) cflats.push_back(cflat_matrix(tower.at(j)));
    for (int j = 0; j <= k; ++j) {
        const SpectralDecomposition dec = symmetric_cflat_split(tower, j);
        for (const auto& comp : dec.components) {
            ComponentRecord rec;
            rec.degree = j;
            rec.factor = comp.factor;
            rec.eigenvalue = comp.eigenvalue;
            rec.dim = comp.dim;
            const auto trees = tree_subspaces(tower, j, comp, j);
            for (const auto& ts : trees) {
                if (ts.level == 0) continue;
                if (ts.dim() == 0) {
                    rec.tree_spectra.emplace_back(ts.level, QPoly::one());
                    continue;
                }
                const DenseMat restr =
                    restrict_operator(cflats[j - ts.level], ts.basis, ts.pivot_rows);
                const QPoly cp = restr.charpoly();
                if (QPoly::divmod(cp, rec.factor).second.is_zero()) rec.critical = true;
                rec.tree_spectra.emplace_back(ts.level, cp);
            }
            rep.overall_critical = rep.overall_critical || rec.critical;
            rep.components.push_back(std::move(rec));
        }
    }
    return rep;
}

// ------------------------------------------------------ identity battery ---

/// Exact matrix verification of the commutation identities of gamma and the
/// flat Casimir on a degree-k space, plus the semisimplicity certificate.
inline StructureReport verify_identities(const SymbolSpace& top) {
    StructureReport rep;
    const GradedAlgebra& alg = top.alg;
    const int k = top.degree;
    auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
        rep.checks.push_back({name, pass, detail});
    };
    SymbolSpace lower = symbol_space(alg, top.V1, top.V2, std::max(k - 1, 0));
    SymbolSpace topc = top;
    if (topc.gamma.empty()) attach_gamma(topc);
    attach_gamma(lower);

    // alpha(A) gamma(h) = gamma([A,h]) + gamma(h) alpha(A), alpha = rho or rho_r
    {
        bool ok_rho = true, ok_rho_r = true;
        for (int t = 0; t < alg.g0_count() && (ok_rho || ok_rho_r); ++t) {
            const AlgebraElement A = alg.basis_element(alg.g0_index(t));
            for (int i = 0; i < alg.d; ++i) {
                const AlgebraElement h = alg.basis_element(alg.idx_eps(i));
                const AlgebraElement ah = bracket(alg, A, h);
                const SparseMat gam_h = topc.gamma[i];
                const SparseMat gam_ah = gamma_matrix(topc, ah);
                if (k >= 1) {
                    const SparseMat lhs = lower.rho_star[t] * gam_h;
                    const SparseMat rhs = gam_ah + gam_h * topc.rho_star[t];
                    if (lhs != rhs) ok_rho = false;
                    const SparseMat lhs_r = lower.rho_r_star[t] * gam_h;
                    const SparseMat rhs_r = gam_ah + gam_h * topc.rho_r_star[t];
                    if (lhs_r != rhs_r) ok_rho_r = false;
                }
            }
        }
        add("equivariance_rho", ok_rho);
        add("equivariance_rho_r", ok_rho_r);
    }
    // rho = rho_2 + rho_r and the two commute
    {
        bool split_ok = true, commute_ok = true;
        for (int t = 0; t < alg.g0_count(); ++t)
            if (topc.rho_star[t] != topc.rho_2_star[t] + topc.rho_r_star[t]) split_ok = false;
        for (int s = 0; s < alg.g0_count() && commute_ok; ++s)
            for (int t = 0; t < alg.g0_count(); ++t)
                if (topc.rho_2_star[s] * topc.rho_r_star[t] !=
                    topc.rho_r_star[t] * topc.rho_2_star[s]) {
                    commute_ok = false;
                    break;
                }
        add("rho_splits", split_ok);
        add("rho_2_commutes_rho_r", commute_ok);
    }
    // [gamma(h), gamma(h')] = 0
    {
        bool ok = true;
        if (k >= 2) {
            for (int i = 0; i < alg.d && ok; ++i)
                for (int j = i + 1; j < alg.d; ++j) {
                    if (lower.gamma[j] * topc.gamma[i] != lower.gamma[i] * topc.gamma[j]) {
                        ok = false;
                        break;
                    }
                }
        }
        add("gamma_commutes", ok);
    }
    // C gamma(h) - gamma(h) C = 2 sum_i gamma(eps^i) rho([h, e_i])
    {
        bool ok = true;
        const SparseMat ctop = cflat_matrix(topc);
        const SparseMat clow = cflat_matrix(lower);
        if (k >= 1) {
            for (int hi = 0; hi < alg.d && ok; ++hi) {
                const AlgebraElement h = alg.basis_element(alg.idx_eps(hi));
                const SparseMat gam = topc.gamma[hi];
                const SparseMat lhs = clow * gam - gam * ctop;
                SparseMat rhs(lhs.rows(), lhs.cols());
                for (int i = 0; i < alg.d; ++i) {
                    const AlgebraElement hei =
                        bracket(alg, h, alg.basis_element(alg.idx_e(i)));
                    rhs = rhs + topc.gamma[i] * sparse_action(topc, hei, topc.rho_star);
                }
                rhs = Rational(2) * rhs;
                if (lhs != rhs) ok = false;
            }
        }
        add("casimir_gamma_lemma", ok);
    }
    // flat Casimir commutes with the semisimple part of g_0
    {
        bool ok = true;
        const SparseMat ctop = cflat_matrix(topc);
        for (int j = 0; j < alg.dim_h0 && ok; ++j)
            if (ctop * topc.rho_star[1 + j] != topc.rho_star[1 + j] * ctop) ok = false;
        add("casimir_h0_equivariant", ok);
    }
    // semisimplicity certificate
    {
        bool ok = true;
        std::string detail;
        try {
            const QPoly mu = cflat_minimal_polynomial(topc);
            ok = mu.is_squarefree();
            if (!ok) detail = "minimal polynomial " + mu.to_string() + " is not squarefree";
        } catch (const std::exception& ex) {
            ok = false;
            detail = ex.what();
        }
        add("casimir_minpoly_squarefree", ok);
    }
    // symmetrization is equivariant
    {
        bool ok = true;
        const SparseMat s = symmetrize_matrix(topc);
        for (int t = 0; t < alg.g0_count() && ok; ++t)
            if (s * topc.rho_star[t] != topc.rho_star[t] * s) ok = false;
        add("symmetrizer_equivariant", ok);
    }
    return rep;
}

} // namespace iffquant
