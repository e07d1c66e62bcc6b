/**
 * @file flat_quantizer.hpp
 * @brief The flat model: polynomial sections, invariant differentiation as
 *        coordinate differentiation, the correction recursion, and the
 *        quantization map with its equivariance checker.
 *
 * Sections are polynomial maps R^d -> W with exact coefficients. On the flat
 * model the invariant derivative is the coordinate derivative, so the full
 * Casimir-like operator is C = C_flat + N with N = -2 sum_i gamma(eps^i) d_i.
 * A symbol valued in a spectral component with rational eigenvalue alpha is
 * corrected degree by degree through T_j = (alpha - C_flat)^{-1} N T_{j+1},
 * each solve restricted to the tree subspace of the component, and the
 * resulting operator is <T_hat, iterated derivatives>.
 *
 * The infinitesimal conformal action is derived from the matrix model: the
 * fundamental vector field is the chart derivative of the one-parameter
 * action on the projectivized model, and the action on sections adds the
 * position-dependent isotropy part of Ad along the chart section. One global
 * sign convention makes h -> L_h obey [L_h, L_h'] = -L_{[h,h']}; it is fixed
 * in conventions.hpp and asserted by tests.
 */
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "conventions.hpp"
#include "lie_core.hpp"
#include "representations.hpp"
#include "symbol_calculus.hpp"

namespace iffquant {

// -------------------------------------------------------- polynomial data ---

using Monomial = std::vector<unsigned>; ///< exponent vector, one slot per variable

inline int monomial_degree(const Monomial& m) {
    int s = 0;
    for (unsigned e : m) s += static_cast<int>(e);
    return s;
}

/// All exponent vectors of total degree <= max_degree, graded, then
/// lexicographic within a degree.
inline std::vector<Monomial> all_monomials(int nvars, int max_degree) {
    std::vector<Monomial> out;
    Monomial cur(nvars, 0);
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == nvars - 1) {
            cur[slot] = remaining;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[slot] = e;
            rec(slot + 1, remaining - e);
        }
    };
    for (int deg = 0; deg <= max_degree; ++deg) {
        if (nvars == 0) {
            out.push_back({});
            break;
        }
        rec(0, deg);
    }
    return out;
}

/// Polynomial-coefficient map R^nvars -> R^dim with exact coefficients.
/// Zero coefficient vectors are pruned eagerly.
struct PolyTensorField {
    int nvars = 0;
    int dim = 0;
    std::map<Monomial, Vec> terms;

    PolyTensorField() = default;
    PolyTensorField(int nvars_, int dim_) : nvars(nvars_), dim(dim_) {}

    static PolyTensorField constant(int nvars, Vec v) {
        PolyTensorField f(nvars, static_cast<int>(v.size()));
        f.add_term(Monomial(nvars, 0), v);
        return f;
    }
    static PolyTensorField monomial_field(int nvars, const Monomial& m, Vec v) {
        PolyTensorField f(nvars, static_cast<int>(v.size()));
        f.add_term(m, v);
        return f;
    }

    bool is_zero() const { return terms.empty(); }
    int coefficient_degree() const {
        int deg = -1;
        for (const auto& [m, v] : terms) deg = std::max(deg, monomial_degree(m));
        return deg;
    }

    void add_term(const Monomial& m, const Vec& v) {
        if (static_cast<int>(m.size()) != nvars || static_cast<int>(v.size()) != dim)
            throw std::invalid_argument("PolyTensorField: term shape mismatch");
        if (vec_is_zero(v)) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, v);
        } else {
            it->second = vec_add(it->second, v);
            if (vec_is_zero(it->second)) terms.erase(it);
        }
    }

    Vec coeff(const Monomial& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? Vec(dim, Rational(0)) : it->second;
    }

    friend PolyTensorField operator+(const PolyTensorField& a, const PolyTensorField& b) {
        if (a.nvars != b.nvars || a.dim != b.dim)
            throw std::invalid_argument("PolyTensorField: shape mismatch in +");
        PolyTensorField out = a;
        for (const auto& [m, v] : b.terms) out.add_term(m, v);
        return out;
    }
    friend PolyTensorField operator-(const PolyTensorField& a, const PolyTensorField& b) {
        return a + (Rational(-1) * b);
    }
    friend PolyTensorField operator*(const Rational& s, const PolyTensorField& f) {
        PolyTensorField out(f.nvars, f.dim);
        if (s.is_zero()) return out;
        for (const auto& [m, v] : f.terms) out.terms.emplace(m, vec_scale(s, v));
        return out;
    }
    friend bool operator==(const PolyTensorField& a, const PolyTensorField& b) {
        return a.nvars == b.nvars && a.dim == b.dim && a.terms == b.terms;
    }
    friend bool operator!=(const PolyTensorField& a, const PolyTensorField& b) {
        return !(a == b);
    }

    /// Pointwise application of a constant linear map.
    PolyTensorField mapped(const SparseMat& m) const {
        if (m.cols() != dim) throw std::invalid_argument("PolyTensorField: map shape mismatch");
        PolyTensorField out(nvars, m.rows());
        for (const auto& [mono, v] : terms) out.add_term(mono, m.apply(v));
        return out;
    }
    PolyTensorField mapped(const DenseMat& m) const {
        if (m.cols() != dim) throw std::invalid_argument("PolyTensorField: map shape mismatch");
        PolyTensorField out(nvars, m.rows());
        for (const auto& [mono, v] : terms) out.add_term(mono, m.apply(v));
        return out;
    }

    /// Multiplication by the monomial x^m.
    PolyTensorField shifted(const Monomial& m) const {
        PolyTensorField out(nvars, dim);
        for (const auto& [mono, v] : terms) {
            Monomial m2 = mono;
            for (int i = 0; i < nvars; ++i) m2[i] += m[i];
            out.terms.emplace(std::move(m2), v);
        }
        return out;
    }

    /// Exact evaluation at a rational point.
    Vec eval(const std::vector<Rational>& x) const {
        Vec out(dim, Rational(0));
        for (const auto& [mono, v] : terms) {
            Rational c(1);
            for (int i = 0; i < nvars; ++i)
                for (unsigned e = 0; e < mono[i]; ++e) c *= x[i];
            for (int j = 0; j < dim; ++j) out[j] += c * v[j];
        }
        return out;
    }
};

/// Formal partial derivative in the variable x^i (0-based).
inline PolyTensorField partial_derivative(const PolyTensorField& f, int i) {
    if (i < 0 || i >= f.nvars) throw std::invalid_argument("partial_derivative: bad variable");
    PolyTensorField out(f.nvars, f.dim);
    for (const auto& [mono, v] : f.terms) {
        if (mono[i] == 0) continue;
        Monomial m2 = mono;
        m2[i] -= 1;
        out.add_term(m2, vec_scale(Rational(static_cast<long>(mono[i])), v));
    }
    return out;
}

/// Product of a scalar field (dim 1) with a vector field.
inline PolyTensorField scalar_times(const PolyTensorField& s, const PolyTensorField& f) {
    if (s.dim != 1 || s.nvars != f.nvars)
        throw std::invalid_argument("scalar_times: shape mismatch");
    PolyTensorField out(f.nvars, f.dim);
    for (const auto& [ms, vs] : s.terms)
        for (const auto& [mf, vf] : f.terms) {
            Monomial m = ms;
            for (int i = 0; i < f.nvars; ++i) m[i] += mf[i];
            out.add_term(m, vec_scale(vs[0], vf));
        }
    return out;
}

/// Component i of a vector-valued field, as a scalar field.
inline PolyTensorField component_field(const PolyTensorField& f, int i) {
    PolyTensorField out(f.nvars, 1);
    for (const auto& [m, v] : f.terms)
        if (!v[i].is_zero()) out.add_term(m, Vec{v[i]});
    return out;
}

/// Invariant derivative in the flat trivialization: the stacked coordinate
/// derivatives, indexed (i, a) -> i*dim + a.
inline PolyTensorField invariant_derivative_flat(const PolyTensorField& f) {
    PolyTensorField out(f.nvars, f.nvars * f.dim);
    for (int i = 0; i < f.nvars; ++i) {
        const PolyTensorField di = partial_derivative(f, i);
        for (const auto& [m, v] : di.terms) {
            Vec big(out.dim, Rational(0));
            for (int a = 0; a < f.dim; ++a) big[static_cast<size_t>(i) * f.dim + a] = v[a];
            out.add_term(m, big);
        }
    }
    return out;
}

// ------------------------------------------------------------- operators ----

/// Differential operator with polynomial gl(V1,V2)-valued coefficients,
/// keyed by derivative multi-index. The coefficient field has dimension
/// dimV1*dimV2 with the hom indexing of SymbolSpace.
struct PolyDiffOperator {
    int nvars = 0;
    int v1dim = 0, v2dim = 0;
    std::map<Monomial, PolyTensorField> terms; // beta -> coefficient field

    int order() const {
        int o = 0;
        for (const auto& [b, f] : terms)
            if (!f.is_zero()) o = std::max(o, monomial_degree(b));
        return o;
    }

    void add(const Monomial& beta, const PolyTensorField& coeff) {
        auto it = terms.find(beta);
        if (it == terms.end()) {
            if (!coeff.is_zero()) terms.emplace(beta, coeff);
        } else {
            it->second = it->second + coeff;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    PolyTensorField apply(const PolyTensorField& f) const {
        if (f.dim != v1dim) throw std::invalid_argument("PolyDiffOperator: argument dimension");
        PolyTensorField out(nvars, v2dim);
        for (const auto& [beta, coeff] : terms) {
            PolyTensorField df = f;
            for (int i = 0; i < nvars; ++i)
                for (unsigned e = 0; e < beta[i]; ++e) df = partial_derivative(df, i);
            if (df.is_zero()) continue;
            for (const auto& [mc, vc] : coeff.terms)
                for (const auto& [mf, vf] : df.terms) {
                    Monomial m = mc;
                    for (int i = 0; i < nvars; ++i) m[i] += mf[i];
                    Vec v(v2dim, Rational(0));
                    for (int r = 0; r < v2dim; ++r)
                        for (int c = 0; c < v1dim; ++c) {
                            const Rational& l = vc[static_cast<size_t>(r) * v1dim + c];
                            if (!l.is_zero() && !vf[c].is_zero()) v[r] += l * vf[c];
                        }
                    out.add_term(m, v);
                }
        }
        return out;
    }

    friend bool operator==(const PolyDiffOperator& a, const PolyDiffOperator& b) {
        return a.nvars == b.nvars && a.v1dim == b.v1dim && a.v2dim == b.v2dim &&
               a.terms == b.terms;
    }
};

namespace quant_detail {

inline long word_orbit_size(const std::vector<int>& word, int d) {
    // multinomial k! / prod(counts!)
    std::vector<int> counts(d, 0);
    for (int v : word) counts[v]++;
    long num = 1;
    for (size_t i = 2; i <= word.size(); ++i) num *= static_cast<long>(i);
    for (int c : counts)
        for (int i = 2; i <= c; ++i) num /= i;
    return num;
}

inline Monomial word_to_beta(const std::vector<int>& word, int d) {
    Monomial beta(d, 0);
    for (int v : word) beta[v]++;
    return beta;
}

} // namespace quant_detail

/// Pairing of a correction chain against the iterated flat derivatives:
/// (sum_j <T_j, grad^j f>) as a V2-valued field. chain[j] is valued in the
/// degree-j space of the tower (or empty).
inline PolyTensorField q_omega(const SymbolTower& tower,
                               const std::vector<PolyTensorField>& chain,
                               const PolyTensorField& f) {
    const SymbolSpace& top = tower.at(tower.top_degree());
    const int d = top.alg.d;
    const int v1 = top.V1.dim, v2 = top.V2.dim;
    if (f.dim != v1) throw std::invalid_argument("q_omega: argument is not V1-valued");
    PolyTensorField out(d, v2);
    for (size_t j = 0; j < chain.size(); ++j) {
        const PolyTensorField& tj = chain[j];
        if (tj.is_zero()) continue;
        if (tj.dim != tower.at(static_cast<int>(j)).dim)
            throw std::invalid_argument("q_omega: chain entry has wrong target space");
        const SymbolSpace& spj = tower.at(static_cast<int>(j));
        // derivative cache per multi-index beta
        std::map<Monomial, PolyTensorField> dcache;
        auto derivative_for = [&](const Monomial& beta) -> const PolyTensorField& {
            auto it = dcache.find(beta);
            if (it != dcache.end()) return it->second;
            PolyTensorField df = f;
            for (int i = 0; i < d; ++i)
                for (unsigned e = 0; e < beta[i]; ++e) df = partial_derivative(df, i);
            return dcache.emplace(beta, std::move(df)).first->second;
        };
        const int nwords = spj.word_count();
        for (const auto& [mono, coords] : tj.terms) {
            for (int widx = 0; widx < nwords; ++widx) {
                bool any = false;
                for (int h = 0; h < spj.homdim; ++h)
                    if (!coords[static_cast<size_t>(widx) * spj.homdim + h].is_zero()) {
                        any = true;
                        break;
                    }
                if (!any) continue;
                const Monomial beta = quant_detail::word_to_beta(spj.unrank_word(widx), d);
                const PolyTensorField& df = derivative_for(beta);
                for (const auto& [mf, vf] : df.terms) {
                    Monomial m = mono;
                    for (int i = 0; i < d; ++i) m[i] += mf[i];
                    Vec v(v2, Rational(0));
                    bool nz = false;
                    for (int r = 0; r < v2; ++r)
                        for (int c = 0; c < v1; ++c) {
                            const Rational& l =
                                coords[static_cast<size_t>(widx) * spj.homdim + r * v1 + c];
                            if (!l.is_zero() && !vf[c].is_zero()) {
                                v[r] += l * vf[c];
                                nz = true;
                            }
                        }
                    if (nz) out.add_term(m, v);
                }
            }
        }
    }
    return out;
}

/// N = -2 sum_i gamma(eps^i) d_i, mapping degree-(j) fields to degree-(j-1)
/// fields on the flat model.
inline PolyTensorField n_omega_apply(const SymbolTower& tower, int degree,
                                     const PolyTensorField& t) {
    const SymbolSpace& sp = tower.at(degree);
    if (t.dim != sp.dim) throw std::invalid_argument("n_omega_apply: wrong target space");
    if (degree == 0) return PolyTensorField(t.nvars, 0);
    const int lower_dim = tower.at(degree - 1).dim;
    PolyTensorField out(t.nvars, lower_dim);
    for (int i = 0; i < sp.alg.d; ++i) {
        const PolyTensorField di = partial_derivative(t, i);
        if (di.is_zero()) continue;
        out = out + Rational(-2) * di.mapped(sp.gamma[i]);
    }
    return out;
}

// ------------------------------------------------ infinitesimal symmetries ---

/// Matrix of an algebra element in the defining model.
inline DenseMat model_matrix(const GradedAlgebra& alg, const AlgebraElement& h) {
    if (!alg.has_model())
        throw std::logic_error("model_matrix: algebra carries no matrix model");
    DenseMat m(alg.model_n, alg.model_n);
    for (int a = 0; a < alg.dim_g(); ++a)
        if (!h[a].is_zero()) m = m + h[a] * alg.model[a];
    return m;
}

/// Fundamental vector field of h on the flat chart, from the matrix model:
/// the chart derivative of t -> exp(t h) . x. Polynomial of degree <= 2.
inline PolyTensorField fundamental_vector_field(const GradedAlgebra& alg,
                                                const AlgebraElement& h) {
    if (!alg.has_model())
        throw std::logic_error("fundamental_vector_field: algebra carries no matrix model");
    const int d = alg.d, n = alg.model_n;
    // chart lift l(x) = exp(Y_x) . base as a polynomial n-vector
    PolyTensorField lift = PolyTensorField::constant(d, alg.base_point);
    PolyTensorField cur = lift;
    Rational factorial(1);
    for (int it = 1; it <= 3; ++it) {
        // apply Y_x = sum_i x_i model(e_i)
        PolyTensorField next(d, n);
        for (int i = 0; i < d; ++i) {
            Monomial xi(d, 0);
            xi[i] = 1;
            next = next + cur.mapped(SparseMat::from_dense(alg.model[alg.idx_e(i)])).shifted(xi);
        }
        factorial *= Rational(it);
        if (next.is_zero()) break;
        if (it == 3) throw std::logic_error("fundamental_vector_field: chart lift not nilpotent");
        lift = lift + factorial.inverse() * next;
        cur = std::move(next);
    }
    const PolyTensorField hl = lift.mapped(SparseMat::from_dense(model_matrix(alg, h)));
    const PolyTensorField norm = component_field(hl, alg.norm_row);
    PolyTensorField out(d, d);
    for (int i = 0; i < d; ++i) {
        PolyTensorField xi =
            component_field(hl, alg.chart_row0 + i) -
            scalar_times(PolyTensorField::monomial_field(d, [&] {
                             Monomial m(d, 0);
                             m[i] = 1;
                             return m;
                         }(), Vec{Rational(1)}),
                         norm);
        for (const auto& [m, v] : xi.terms) {
            Vec big(d, Rational(0));
            big[i] = v[0];
            out.add_term(m, big);
        }
    }
    return Rational(conventions::fundamental_field_sign) * out;
}

/// exp(-ad(Y_x)) h as an algebra-element-valued polynomial; the g_{-1} part
/// is the fundamental vector field, the g_0 part drives the section action.
inline PolyTensorField isotropy_decomposition(const GradedAlgebra& alg,
                                              const AlgebraElement& h) {
    const int d = alg.d, n = alg.dim_g();
    PolyTensorField acc = PolyTensorField::constant(d, h);
    PolyTensorField cur = acc;
    Rational sign(-1);
    Rational factorial(1);
    for (int it = 1; it <= 3; ++it) {
        PolyTensorField next(d, n);
        for (int i = 0; i < d; ++i) {
            Monomial xi(d, 0);
            xi[i] = 1;
            next = next +
                   cur.mapped(SparseMat::from_dense(ad_matrix(alg, alg.idx_e(i)))).shifted(xi);
        }
        if (next.is_zero()) break;
        if (it == 3) throw std::logic_error("isotropy_decomposition: series does not terminate");
        factorial *= Rational(it);
        acc = acc + (sign * factorial.inverse()) * next;
        sign = -sign;
        cur = std::move(next);
    }
    return acc;
}

namespace quant_detail {

/// Shared form of the section action: u.grad f - rho(w0(x)) f, where
/// u + w0 + (g_1 part) = exp(-ad Y_x) h and rho is supplied per g_0 slot.
template <class ActionAt>
PolyTensorField lie_action_impl(const GradedAlgebra& alg, const AlgebraElement& h,
                                const PolyTensorField& f, ActionAt&& action_at) {
    const PolyTensorField zeta = isotropy_decomposition(alg, h);
    PolyTensorField out(f.nvars, f.dim);
    for (int i = 0; i < alg.d; ++i) {
        const PolyTensorField ui = component_field(zeta, alg.idx_e(i));
        if (ui.is_zero()) continue;
        out = out + scalar_times(ui, partial_derivative(f, i));
    }
    for (int t = 0; t < alg.g0_count(); ++t) {
        const PolyTensorField wt = component_field(zeta, alg.g0_index(t));
        if (wt.is_zero()) continue;
        out = out - scalar_times(wt, action_at(t, f));
    }
    return Rational(conventions::section_action_sign) * out;
}

} // namespace quant_detail

/// Infinitesimal action of h in g on V-valued polynomial sections.
inline PolyTensorField lie_action_on_sections(const GradedAlgebra& alg, const AlgebraElement& h,
                                              const PolyTensorField& f,
                                              const Representation& rep) {
    if (f.dim != rep.dim) throw std::invalid_argument("lie_action_on_sections: dimension");
    return quant_detail::lie_action_impl(
        alg, h, f, [&](int t, const PolyTensorField& g) { return g.mapped(rep.action[t]); });
}

/// Infinitesimal action of h on symbol-space-valued polynomial sections.
inline PolyTensorField lie_action_on_sections(const GradedAlgebra& alg, const AlgebraElement& h,
                                              const PolyTensorField& f, const SymbolSpace& sp) {
    if (f.dim != sp.dim) throw std::invalid_argument("lie_action_on_sections: dimension");
    return quant_detail::lie_action_impl(
        alg, h, f, [&](int t, const PolyTensorField& g) { return g.mapped(sp.rho_star[t]); });
}

// ----------------------------------------------------------- quantization ---

struct CriticalPairError : std::runtime_error {
    explicit CriticalPairError(const std::string& msg) : std::runtime_error(msg) {}
};

struct HatResult {
    int k = 0;
    QPoly factor;
    Rational alpha;
    /// chain[j] = correction at degree j; chain[k] is the input symbol.
    std::vector<PolyTensorField> chain;
};

/// Precomputed quantization context for a representation pair at degree k:
/// the symbol tower, the spectral split of the flat Casimir on S^k, tree
/// subspaces and the restricted solvers of the recursion.
class Quantizer {
public:
    struct ComponentData {
        SpectralComponent component;  ///< basis embedded in the tensor power
        SparseMat ambient_projection; ///< acts on symmetric ambient vectors
        std::vector<TreeSubspace> trees;
        /// per level l >= 1: (alpha - C_restricted)^{-1}; absent when alpha is
        /// irrational or the level matrix is singular (critical pair).
        std::vector<std::optional<DenseMat>> solver;
        std::optional<Rational> alpha;
    };

    Quantizer(const GradedAlgebra& alg, const Representation& V1, const Representation& V2,
              int k)
        : tower_(build_symbol_tower(alg, V1, V2, k)), k_(k) {
        for (int j = 0; j <= k; ++j) cflats_.push_back(cflat_matrix(tower_.at(j)));
        const SymbolSpace& top = tower_.at(k);
        symmetrizer_ = symmetrize_matrix(top);
        const SparseMat embed = embed_symmetric_matrix(top);
        const SparseMat restr = restrict_symmetric_matrix(top);
        const DenseMat msym = (restr * cflat_matrix(top) * embed).to_dense();
        SpectralDecomposition dec = spectral_split(msym);
        minpoly_ = dec.minpoly;
        charpoly_ = dec.charpoly;
        const DenseMat embed_dense = embed.to_dense();
        for (auto& comp : dec.components) {
            ComponentData data;
            data.ambient_projection =
                SparseMat::from_dense(embed_dense * comp.projection) * restr;
            auto [basis, pivots] = column_space_basis(embed_dense * comp.basis);
            comp.basis = std::move(basis);
            comp.pivot_rows = std::move(pivots);
            data.component = comp;
            data.alpha = comp.eigenvalue;
            data.trees = tree_subspaces(tower_, k, data.component, k);
            data.solver.resize(k + 1);
            if (data.alpha) {
                for (int l = 1; l <= k; ++l) {
                    const TreeSubspace& ts = data.trees[l];
                    if (ts.dim() == 0) continue;
                    const DenseMat restricted =
                        restrict_operator(cflats_[k - l], ts.basis, ts.pivot_rows);
                    DenseMat shifted = Rational(-1) * restricted;
                    for (int i = 0; i < shifted.rows(); ++i) shifted.at(i, i) += *data.alpha;
                    data.solver[l] = shifted.inverse(); // nullopt <=> critical level
                }
            }
            components_.push_back(std::move(data));
        }
    }

    const SymbolTower& tower() const { return tower_; }
    const SymbolSpace& top() const { return tower_.at(k_); }
    int degree() const { return k_; }
    const QPoly& minpoly() const { return minpoly_; }
    const std::vector<ComponentData>& components() const { return components_; }

    bool is_symmetric(const PolyTensorField& t) const {
        for (const auto& [m, v] : t.terms)
            if (symmetrizer_.apply(v) != v) return false;
        return true;
    }

    /// Splits a symmetric ambient symbol into its spectral component parts.
    std::vector<PolyTensorField> split_components(const PolyTensorField& t) const {
        std::vector<PolyTensorField> parts;
        PolyTensorField sum(t.nvars, t.dim);
        for (const auto& data : components_) {
            PolyTensorField p = t.mapped(data.ambient_projection);
            sum = sum + p;
            parts.push_back(std::move(p));
        }
        if (sum != t)
            throw std::logic_error("split_components: projections do not resum the symbol");
        return parts;
    }

    /// Correction recursion for a symbol valued in one spectral component.
    HatResult hat(size_t component_index, const PolyTensorField& t) const {
        const ComponentData& data = components_.at(component_index);
        if (t.dim != top().dim) throw std::invalid_argument("hat: wrong target space");
        if (!data.alpha)
            throw std::domain_error(
                "hat: component eigenvalue is irrational (factor " +
                data.component.factor.to_string() +
                "); the recursion is implemented for rational eigenvalues only");
        // membership of the input in the component, monomial by monomial
        for (const auto& [m, v] : t.terms) {
            Vec coords(data.component.dim);
            for (int i = 0; i < data.component.dim; ++i)
                coords[i] = v[data.component.pivot_rows[i]];
            if (data.component.basis.apply(coords) != v)
                throw std::invalid_argument("hat: symbol is not valued in the component");
        }
        HatResult res;
        res.k = k_;
        res.factor = data.component.factor;
        res.alpha = *data.alpha;
        res.chain.assign(k_ + 1, PolyTensorField());
        res.chain[k_] = t;
        for (int j = k_ - 1; j >= 0; --j) {
            const int level = k_ - j;
            const PolyTensorField rhs = n_omega_apply(tower_, j + 1, res.chain[j + 1]);
            const TreeSubspace& ts = data.trees[level];
            PolyTensorField tj(t.nvars, tower_.at(j).dim);
            if (ts.dim() == 0) {
                if (!rhs.is_zero())
                    throw std::logic_error("hat: correction escapes the zero tree level");
                res.chain[j] = std::move(tj);
                continue;
            }
            if (!data.solver[level])
                throw CriticalPairError(
                    "hat: (alpha - C) is singular on tree level " + std::to_string(level) +
                    " for eigenvalue " + res.alpha.to_string());
            const DenseMat& inv = *data.solver[level];
            for (const auto& [m, v] : rhs.terms) {
                Vec coords(ts.dim());
                for (int i = 0; i < ts.dim(); ++i) coords[i] = v[ts.pivot_rows[i]];
                if (ts.basis.apply(coords) != v)
                    throw std::logic_error("hat: correction escapes its tree level");
                tj.add_term(m, ts.basis.apply(inv.apply(coords)));
            }
            res.chain[j] = std::move(tj);
        }
        return res;
    }

    /// Full correction chain of a symmetric symbol: sum of the per-component
    /// recursions.
    std::vector<PolyTensorField> correction_chain(const PolyTensorField& t) const {
        if (!is_symmetric(t)) throw std::invalid_argument("quantize: symbol is not symmetric");
        std::vector<PolyTensorField> chain(k_ + 1);
        for (int j = 0; j <= k_; ++j) chain[j] = PolyTensorField(t.nvars, tower_.at(j).dim);
        const std::vector<PolyTensorField> parts = split_components(t);
        for (size_t c = 0; c < parts.size(); ++c) {
            if (parts[c].is_zero()) continue;
            const HatResult res = hat(c, parts[c]);
            for (int j = 0; j <= k_; ++j) chain[j] = chain[j] + res.chain[j];
        }
        return chain;
    }

    PolyTensorField quantize(const PolyTensorField& t, const PolyTensorField& f) const {
        return q_omega(tower_, correction_chain(t), f);
    }

    PolyDiffOperator build_operator(const PolyTensorField& t) const {
        const std::vector<PolyTensorField> chain = correction_chain(t);
        PolyDiffOperator op;
        op.nvars = top().alg.d;
        op.v1dim = top().V1.dim;
        op.v2dim = top().V2.dim;
        const int homdim = top().homdim;
        for (int j = 0; j <= k_; ++j) {
            const SymbolSpace& spj = tower_.at(j);
            for (const auto& [mono, coords] : chain[j].terms) {
                for (int widx = 0; widx < spj.word_count(); ++widx) {
                    Vec gl(homdim, Rational(0));
                    bool nz = false;
                    for (int h = 0; h < homdim; ++h) {
                        gl[h] = coords[static_cast<size_t>(widx) * homdim + h];
                        nz = nz || !gl[h].is_zero();
                    }
                    if (!nz) continue;
                    const Monomial beta =
                        quant_detail::word_to_beta(spj.unrank_word(widx), op.nvars);
                    op.add(beta, PolyTensorField::monomial_field(op.nvars, mono, gl));
                }
            }
        }
        return op;
    }

    /// Direct-substitution check: C_flat(T_j) + N(T_{j+1}) = alpha T_j for
    /// every degree. Returns true when the full chain is an exact
    /// eigenfunction of C = C_flat + N.
    bool verify_hat(const HatResult& res) const {
        for (int j = 0; j <= k_; ++j) {
            PolyTensorField lhs = res.chain[j].mapped(cflats_[j]);
            if (j + 1 <= k_) lhs = lhs + n_omega_apply(tower_, j + 1, res.chain[j + 1]);
            if (lhs != res.alpha * res.chain[j]) return false;
        }
        return true;
    }

    const SparseMat& cflat_at(int degree) const { return cflats_.at(degree); }

private:
    SymbolTower tower_;
    int k_;
    std::vector<SparseMat> cflats_;
    SparseMat symmetrizer_;
    QPoly minpoly_, charpoly_;
    std::vector<ComponentData> components_;
};

/// Principal symbol: the top-order coefficients, symmetrized back into the
/// tensor power of the operator's order.
inline PolyTensorField principal_symbol(const PolyDiffOperator& op) {
    const int k = op.order();
    const int d = op.nvars;
    const int homdim = op.v1dim * op.v2dim;
    int dim = homdim;
    for (int t = 0; t < k; ++t) dim *= d;
    PolyTensorField out(d, dim);
    for (const auto& [beta, coeff] : op.terms) {
        if (monomial_degree(beta) != k) continue;
        // enumerate the words with this content
        std::vector<int> word;
        for (int i = 0; i < d; ++i)
            for (unsigned e = 0; e < beta[i]; ++e) word.push_back(i);
        std::sort(word.begin(), word.end());
        const Rational inv_orbit = Rational(1, quant_detail::word_orbit_size(word, d));
        do {
            int rank = 0;
            for (int v : word) rank = rank * d + v;
            for (const auto& [m, gl] : coeff.terms) {
                Vec v(dim, Rational(0));
                for (int h = 0; h < homdim; ++h)
                    v[static_cast<size_t>(rank) * homdim + h] = inv_orbit * gl[h];
                out.add_term(m, v);
            }
        } while (std::next_permutation(word.begin(), word.end()));
    }
    return out;
}

// ------------------------------------------------------- top-level helpers ---

inline HatResult hat(const Quantizer& qz, size_t component_index, const PolyTensorField& t) {
    return qz.hat(component_index, t);
}

inline PolyTensorField quantize(const GradedAlgebra& alg, const Representation& V1,
                                const Representation& V2, int k, const PolyTensorField& t,
                                const PolyTensorField& f) {
    return Quantizer(alg, V1, V2, k).quantize(t, f);
}

inline PolyDiffOperator build_operator(const GradedAlgebra& alg, const Representation& V1,
                                       const Representation& V2, int k,
                                       const PolyTensorField& t) {
    return Quantizer(alg, V1, V2, k).build_operator(t);
}

/// Equivariance residual L_h(Q(T)f) - Q(L_h T)f - Q(T)(L_h f); identically
/// zero exactly when the quantization intertwines the infinitesimal action.
inline PolyTensorField check_equivariance(const Quantizer& qz, const PolyTensorField& t,
                                          const PolyTensorField& f, const AlgebraElement& h) {
    const GradedAlgebra& alg = qz.top().alg;
    const PolyTensorField qtf = qz.quantize(t, f);
    const PolyTensorField lhs = lie_action_on_sections(alg, h, qtf, qz.top().V2);
    const PolyTensorField lt = lie_action_on_sections(alg, h, t, qz.top());
    const PolyTensorField lf = lie_action_on_sections(alg, h, f, qz.top().V1);
    return lhs - qz.quantize(lt, f) - qz.quantize(t, lf);
}

} // namespace iffquant
