/**
 * @file oracle_ansatz.hpp
 * @brief Independent brute-force oracle for the quantization map.
 *
 * Ansatz: a translation-invariant operator map
 *
 *   Op(T) f = <embed(T), d^k f> + sum_{j<k} < M_j(d^{k-j} T), d^j f >
 *
 * with unknown constant linear maps M_j from (symmetric derivative
 * multi-index) x (symmetric symbol basis) x gl to (symmetric order-j
 * multi-index) x gl. Equivariance under every basis element of the algebra
 * is imposed as exact linear equations on the M_j at the operator level
 * (composing with the first-order section action symbolically, no test
 * functions involved). The solver reports existence and uniqueness and can
 * rebuild the effective operator for any polynomial symbol.
 *
 * This oracle never touches the gamma map, the flat Casimir or the
 * recursion; it shares only field/section plumbing with the library.
 */
#pragma once

#include <iffquant/flat_quantizer.hpp>

#include <map>
#include <optional>
#include <vector>

namespace iffquant::oracle {

struct FirstOrderAction {
    // L_h g = sum_i u_i(x) d_i g - W(x) g, W matrix-valued polynomial
    std::vector<PolyTensorField> u; // scalar fields, one per variable
    PolyTensorField w;              // dim = rep.dim * rep.dim, row-major matrix field
};

/// The section action of h on a module, split into transport and matrix part.
inline FirstOrderAction first_order_action(const GradedAlgebra& alg, const AlgebraElement& h,
                                           const Representation& rep) {
    FirstOrderAction act;
    const PolyTensorField zeta = isotropy_decomposition(alg, h);
    for (int i = 0; i < alg.d; ++i) act.u.push_back(component_field(zeta, alg.idx_e(i)));
    act.w = PolyTensorField(alg.d, rep.dim * rep.dim);
    for (int t = 0; t < alg.g0_count(); ++t) {
        const PolyTensorField wt = component_field(zeta, alg.g0_index(t));
        for (const auto& [m, v] : wt.terms) {
            Vec flat(static_cast<size_t>(rep.dim) * rep.dim, Rational(0));
            for (int r = 0; r < rep.dim; ++r)
                for (int c = 0; c < rep.dim; ++c)
                    flat[static_cast<size_t>(r) * rep.dim + c] = v[0] * rep.action[t].at(r, c);
            act.w.add_term(m, flat);
        }
    }
    // global sign convention matches lie_action_on_sections
    for (auto& ui : act.u) ui = Rational(conventions::section_action_sign) * ui;
    act.w = Rational(conventions::section_action_sign) * act.w;
    return act;
}

/// L_h D: first-order action composed on the output side of an operator.
inline PolyDiffOperator compose_action_left(const FirstOrderAction& act,
                                            const PolyDiffOperator& op) {
    PolyDiffOperator out;
    out.nvars = op.nvars;
    out.v1dim = op.v1dim;
    out.v2dim = op.v2dim;
    for (const auto& [beta, coeff] : op.terms) {
        for (int i = 0; i < op.nvars; ++i) {
            if (act.u[i].is_zero()) continue;
            out.add(beta, scalar_times(act.u[i], partial_derivative(coeff, i)));
            Monomial beta2 = beta;
            beta2[i] += 1;
            out.add(beta2, scalar_times(act.u[i], coeff));
        }
        // -(W . coeff): matrix product on the V2 side
        PolyTensorField wc(op.nvars, coeff.dim);
        for (const auto& [mw, vw] : act.w.terms)
            for (const auto& [mc, vc] : coeff.terms) {
                Monomial m = mw;
                for (int i = 0; i < op.nvars; ++i) m[i] += mc[i];
                Vec v(coeff.dim, Rational(0));
                for (int r = 0; r < op.v2dim; ++r)
                    for (int s = 0; s < op.v2dim; ++s) {
                        const Rational& wrs = vw[static_cast<size_t>(r) * op.v2dim + s];
                        if (wrs.is_zero()) continue;
                        for (int c = 0; c < op.v1dim; ++c)
                            v[static_cast<size_t>(r) * op.v1dim + c] +=
                                wrs * vc[static_cast<size_t>(s) * op.v1dim + c];
                    }
                wc.add_term(m, v);
            }
        out.add(beta, Rational(-1) * wc);
    }
    return out;
}

/// D L_h: first-order action composed on the input side, expanded by the
/// Leibniz rule through the derivative multi-indices.
inline PolyDiffOperator compose_action_right(const FirstOrderAction& act,
                                             const PolyDiffOperator& op) {
    PolyDiffOperator out;
    out.nvars = op.nvars;
    out.v1dim = op.v1dim;
    out.v2dim = op.v2dim;
    const int n = op.nvars;
    // enumerate gamma <= beta with multinomial factors
    auto for_each_sub = [&](const Monomial& beta, auto&& fn) {
        Monomial gamma(n, 0);
        std::function<void(int, Rational)> rec = [&](int slot, Rational binom) {
            if (slot == n) {
                fn(gamma, binom);
                return;
            }
            Rational b = binom;
            for (unsigned g = 0; g <= beta[slot]; ++g) {
                gamma[slot] = g;
                rec(slot + 1, b);
                // binomial(beta_slot, g+1) = binomial(beta_slot, g)*(beta-g)/(g+1)
                b = b * Rational(static_cast<long>(beta[slot] - g), static_cast<long>(g + 1));
            }
            gamma[slot] = 0;
        };
        rec(0, Rational(1));
    };
    for (const auto& [beta, coeff] : op.terms) {
        for (int i = 0; i < n; ++i) {
            if (act.u[i].is_zero()) continue;
            for_each_sub(beta, [&](const Monomial& gamma, const Rational& binom) {
                // d^gamma u_i  (zero for most gamma since deg u <= 2)
                PolyTensorField du = act.u[i];
                for (int t = 0; t < n; ++t)
                    for (unsigned e = 0; e < gamma[t]; ++e) du = partial_derivative(du, t);
                if (du.is_zero()) return;
                Monomial target = beta;
                for (int t = 0; t < n; ++t) target[t] -= gamma[t];
                target[i] += 1;
                out.add(target, binom * scalar_times(du, coeff));
            });
        }
        for_each_sub(beta, [&](const Monomial& gamma, const Rational& binom) {
            PolyTensorField dw = act.w;
            for (int t = 0; t < n; ++t)
                for (unsigned e = 0; e < gamma[t]; ++e) dw = partial_derivative(dw, t);
            if (dw.is_zero()) return;
            // coeff . dW: matrix product on the V1 side
            PolyTensorField cw(n, coeff.dim);
            for (const auto& [mc, vc] : coeff.terms)
                for (const auto& [mw, vw] : dw.terms) {
                    Monomial m = mc;
                    for (int t = 0; t < n; ++t) m[t] += mw[t];
                    Vec v(coeff.dim, Rational(0));
                    for (int r = 0; r < op.v2dim; ++r)
                        for (int s = 0; s < op.v1dim; ++s) {
                            const Rational& crs = vc[static_cast<size_t>(r) * op.v1dim + s];
                            if (crs.is_zero()) continue;
                            for (int c = 0; c < op.v1dim; ++c)
                                v[static_cast<size_t>(r) * op.v1dim + c] +=
                                    crs * vw[static_cast<size_t>(s) * op.v1dim + c];
                        }
                    cw.add_term(m, v);
                }
            Monomial target = beta;
            for (int t = 0; t < n; ++t) target[t] -= gamma[t];
            out.add(target, (-binom) * cw);
        });
    }
    return out;
}

/// Unknown layout and equation assembly for the ansatz solver.
class AnsatzSolver {
public:
    AnsatzSolver(const GradedAlgebra& alg, const Representation& V1, const Representation& V2,
                 int k)
        : alg_(alg), v1_(V1), v2_(V2), k_(k), homdim_(V1.dim * V2.dim) {
        for (int r = 0; r <= k; ++r) msets_.push_back(multiset_words(alg.d, r));
        // unknown offsets: per j < k, block of size |der(k-j)| * |sym(k)| * hom * |out(j)| * hom
        offsets_.assign(k + 1, 0);
        int total = 0;
        for (int j = 0; j < k; ++j) {
            offsets_[j] = total;
            total += block_size(j);
        }
        nunknowns_ = total;
    }

    int unknown_count() const { return nunknowns_; }

    struct Outcome {
        bool exists = false;
        bool unique = false;
        int solution_dim = -1; ///< affine solution space dimension when it exists
        Vec solution;          ///< one solution (free coordinates zero)
    };

    /// Imposes equivariance under every basis element of g on symbols
    /// T = (multiset basis) x (coefficient monomials of degree <= k) and
    /// solves the resulting exact linear system.
    Outcome solve() const {
        std::vector<Vec> rows; // width nunknowns_ + 1 (augmented)
        const auto tmonos = all_monomials(alg_.d, k_);
        const SymbolSpace top = symbol_space(alg_, v1_, v2_, k_);
        const SparseMat embed = embed_symmetric_matrix(top);
        const SparseMat restr = restrict_symmetric_matrix(top);
        std::vector<int> pivot_of(nunknowns_, -1); // row index holding each pivot
        std::vector<Vec> rref;
        bool inconsistent = false;
        auto insert_row = [&](Vec row) {
            for (size_t r = 0; r < rref.size(); ++r) {
                int p = -1;
                for (int c = 0; c <= nunknowns_; ++c)
                    if (!rref[r][c].is_zero()) { p = c; break; }
                const Rational& f = row[p];
                if (!f.is_zero()) row = vec_sub(row, vec_scale(f, rref[r]));
            }
            int p = -1;
            for (int c = 0; c <= nunknowns_; ++c)
                if (!row[c].is_zero()) { p = c; break; }
            if (p < 0) return;
            if (p == nunknowns_) {
                inconsistent = true;
                return;
            }
            row = vec_scale(row[p].inverse(), row);
            // keep reduced: eliminate p from earlier rows
            for (auto& r : rref)
                if (!r[p].is_zero()) r = vec_sub(r, vec_scale(r[p], row));
            rref.push_back(std::move(row));
        };

        for (int a = 0; a < alg_.dim_g() && !inconsistent; ++a) {
            const AlgebraElement h = alg_.basis_element(a);
            const FirstOrderAction act1 = first_order_action(alg_, h, v1_);
            const FirstOrderAction act2 = first_order_action(alg_, h, v2_);
            for (size_t b = 0; b < msets_[k_].size() * homdim_ && !inconsistent; ++b) {
                for (const auto& mono : tmonos) {
                    // symbol T = x^mono * (multiset basis b), in multiset coords
                    Vec sym(msets_[k_].size() * homdim_, Rational(0));
                    sym[b] = Rational(1);
                    const PolyTensorField t_amb = PolyTensorField::monomial_field(
                        alg_.d, mono, embed.apply(sym));
                    const PolyTensorField lt_amb =
                        lie_action_on_sections(alg_, h, t_amb, top);
                    // residual operator, affine in the unknowns:
                    //   L2 o Op(T) - Op(L T) - Op(T) o L1
                    AffineOperator rop = affine_op(t_amb, restr);
                    AffineOperator rop_lt = affine_op(lt_amb, restr);
                    AffineOperator residual;
                    residual.absorb(compose_affine_left(act2, rop), Rational(1));
                    residual.absorb(rop_lt, Rational(-1));
                    residual.absorb(compose_affine_right(act1, rop), Rational(-1));
                    residual.emit_rows(nunknowns_, rows);
                    for (auto& row : rows) {
                        insert_row(std::move(row));
                        if (inconsistent) break;
                    }
                    rows.clear();
                    if (inconsistent) break;
                }
            }
        }
        Outcome out;
        if (inconsistent) return out;
        out.exists = true;
        out.solution_dim = nunknowns_ - static_cast<int>(rref.size());
        out.unique = (out.solution_dim == 0);
        out.solution.assign(nunknowns_, Rational(0));
        for (const auto& r : rref) {
            int p = -1;
            for (int c = 0; c < nunknowns_; ++c)
                if (!r[c].is_zero()) { p = c; break; }
            if (p >= 0) out.solution[p] = r[nunknowns_];
        }
        return out;
    }

    /// Effective operator of a symbol field under a given unknown vector.
    PolyDiffOperator build_operator(const Vec& unknowns, const PolyTensorField& t_amb) const {
        const SymbolSpace top = symbol_space(alg_, v1_, v2_, k_);
        const SparseMat restr = restrict_symmetric_matrix(top);
        AffineOperator aff = affine_op(t_amb, restr);
        PolyDiffOperator op;
        op.nvars = alg_.d;
        op.v1dim = v1_.dim;
        op.v2dim = v2_.dim;
        for (const auto& [beta, parts] : aff.terms) {
            PolyTensorField coeff = parts.fixed;
            for (const auto& [u, field] : parts.linear)
                coeff = coeff + unknowns[u] * field;
            op.add(beta, coeff);
        }
        return op;
    }

private:
    /// Operator whose coefficients are affine functions of the unknowns.
    struct AffineCoeff {
        PolyTensorField fixed;
        std::map<int, PolyTensorField> linear; // unknown index -> field
    };
    struct AffineOperator {
        int nvars = 0, v1dim = 0, v2dim = 0;
        std::map<Monomial, AffineCoeff> terms;

        void add_fixed(const Monomial& beta, const PolyTensorField& f) {
            auto& c = slot(beta, f);
            c.fixed = c.fixed + f;
        }
        void add_linear(const Monomial& beta, int unknown, const PolyTensorField& f) {
            auto& c = slot(beta, f);
            auto it = c.linear.find(unknown);
            if (it == c.linear.end())
                c.linear.emplace(unknown, f);
            else
                it->second = it->second + f;
        }
        AffineCoeff& slot(const Monomial& beta, const PolyTensorField& like) {
            auto it = terms.find(beta);
            if (it == terms.end()) {
                AffineCoeff c;
                c.fixed = PolyTensorField(like.nvars, like.dim);
                it = terms.emplace(beta, std::move(c)).first;
            }
            return it->second;
        }
        void absorb(const AffineOperator& other, const Rational& scale) {
            for (const auto& [beta, c] : other.terms) {
                add_fixed(beta, scale * c.fixed);
                for (const auto& [u, f] : c.linear) add_linear(beta, u, scale * f);
            }
        }
        /// One equation row per (beta, monomial, coordinate).
        void emit_rows(int nunknowns, std::vector<Vec>& rows) const {
            for (const auto& [beta, c] : terms) {
                std::map<Monomial, std::map<int, std::map<int, Rational>>> grid;
                for (const auto& [m, v] : c.fixed.terms)
                    for (int i = 0; i < c.fixed.dim; ++i)
                        if (!v[i].is_zero()) grid[m][i][nunknowns] = v[i];
                for (const auto& [u, f] : c.linear)
                    for (const auto& [m, v] : f.terms)
                        for (int i = 0; i < f.dim; ++i)
                            if (!v[i].is_zero()) grid[m][i][u] = v[i];
                for (const auto& [m, per_coord] : grid)
                    for (const auto& [i, cols] : per_coord) {
                        Vec row(nunknowns + 1, Rational(0));
                        bool nz = false;
                        for (const auto& [col, val] : cols) {
                            // rhs carries the fixed part negated: A m + fixed = 0
                            row[col] = (col == nunknowns) ? -val : val;
                            nz = true;
                        }
                        if (nz) rows.push_back(std::move(row));
                    }
            }
        }
    };

    int der_count(int r) const { return static_cast<int>(msets_[r].size()); }
    int sym_count() const { return static_cast<int>(msets_[k_].size()); }
    int block_size(int j) const {
        return der_count(k_ - j) * sym_count() * homdim_ * der_count(j) * homdim_;
    }
    int unknown_index(int j, int der_in, int sym_b, int hom_in, int out_m, int hom_out) const {
        const int in = (der_in * sym_count() + sym_b) * homdim_ + hom_in;
        const int outi = out_m * homdim_ + hom_out;
        return offsets_[j] + in * (der_count(j) * homdim_) + outi;
    }

    static Monomial multiset_to_monomial(const std::vector<int>& mset, int d) {
        Monomial m(d, 0);
        for (int v : mset) m[v]++;
        return m;
    }

    /// gl composition helpers: hom index h = r*v1dim + c applied through the
    /// natural pairing; for operators the coefficient field carries gl coords.
    /// Builds Op(T) with unknown coefficients for a polynomial symbol T given
    /// in ambient coordinates.
    AffineOperator affine_op(const PolyTensorField& t_amb, const SparseMat& restr) const {
        AffineOperator out;
        out.nvars = alg_.d;
        out.v1dim = v1_.dim;
        out.v2dim = v2_.dim;
        const PolyTensorField t_sym = t_amb.mapped(restr); // multiset coords
        // fixed top term: <embed(T), d^k f> = sum_beta orbit(beta) c_beta l d^beta
        for (const auto& [m, coords] : t_sym.terms) {
            for (int b = 0; b < sym_count(); ++b) {
                const auto& mset = msets_[k_][b];
                Vec gl(homdim_, Rational(0));
                bool nz = false;
                for (int h = 0; h < homdim_; ++h) {
                    gl[h] = coords[static_cast<size_t>(b) * homdim_ + h];
                    nz = nz || !gl[h].is_zero();
                }
                if (!nz) continue;
                std::vector<int> word = mset;
                const Rational orbit(quant_detail::word_orbit_size(word, alg_.d));
                out.add_fixed(multiset_to_monomial(mset, alg_.d),
                              PolyTensorField::monomial_field(alg_.d, m, vec_scale(orbit, gl)));
            }
        }
        // unknown lower-order terms: M_j(d^{k-j} T)
        for (int j = 0; j < k_; ++j) {
            for (int der = 0; der < der_count(k_ - j); ++der) {
                const Monomial mu = multiset_to_monomial(msets_[k_ - j][der], alg_.d);
                // d^mu of the symbol coefficients
                PolyTensorField dt = t_sym;
                for (int i = 0; i < alg_.d; ++i)
                    for (unsigned e = 0; e < mu[i]; ++e) dt = partial_derivative(dt, i);
                if (dt.is_zero()) continue;
                for (const auto& [m, coords] : dt.terms)
                    for (int b = 0; b < sym_count(); ++b)
                        for (int hin = 0; hin < homdim_; ++hin) {
                            const Rational& c = coords[static_cast<size_t>(b) * homdim_ + hin];
                            if (c.is_zero()) continue;
                            for (int om = 0; om < der_count(j); ++om) {
                                const Monomial beta = multiset_to_monomial(msets_[j][om], alg_.d);
                                for (int hout = 0; hout < homdim_; ++hout) {
                                    Vec gl(homdim_, Rational(0));
                                    gl[hout] = c;
                                    out.add_linear(
                                        beta, unknown_index(j, der, b, hin, om, hout),
                                        PolyTensorField::monomial_field(alg_.d, m, gl));
                                }
                            }
                        }
            }
        }
        return out;
    }

    AffineOperator compose_affine_left(const FirstOrderAction& act,
                                       const AffineOperator& aff) const {
        AffineOperator out;
        out.nvars = aff.nvars;
        out.v1dim = aff.v1dim;
        out.v2dim = aff.v2dim;
        for (const auto& [beta, c] : aff.terms) {
            PolyDiffOperator one;
            one.nvars = aff.nvars;
            one.v1dim = aff.v1dim;
            one.v2dim = aff.v2dim;
            if (!c.fixed.is_zero()) {
                one.add(beta, c.fixed);
                const PolyDiffOperator comp = compose_action_left(act, one);
                for (const auto& [b2, f2] : comp.terms) out.add_fixed(b2, f2);
            }
            for (const auto& [u, f] : c.linear) {
                PolyDiffOperator oneu;
                oneu.nvars = aff.nvars;
                oneu.v1dim = aff.v1dim;
                oneu.v2dim = aff.v2dim;
                oneu.add(beta, f);
                const PolyDiffOperator comp = compose_action_left(act, oneu);
                for (const auto& [b2, f2] : comp.terms) out.add_linear(b2, u, f2);
            }
        }
        return out;
    }

    AffineOperator compose_affine_right(const FirstOrderAction& act,
                                        const AffineOperator& aff) const {
        AffineOperator out;
        out.nvars = aff.nvars;
        out.v1dim = aff.v1dim;
        out.v2dim = aff.v2dim;
        for (const auto& [beta, c] : aff.terms) {
            if (!c.fixed.is_zero()) {
                PolyDiffOperator one;
                one.nvars = aff.nvars;
                one.v1dim = aff.v1dim;
                one.v2dim = aff.v2dim;
                one.add(beta, c.fixed);
                const PolyDiffOperator comp = compose_action_right(act, one);
                for (const auto& [b2, f2] : comp.terms) out.add_fixed(b2, f2);
            }
            for (const auto& [u, f] : c.linear) {
                PolyDiffOperator oneu;
                oneu.nvars = aff.nvars;
                oneu.v1dim = aff.v1dim;
                oneu.v2dim = aff.v2dim;
                oneu.add(beta, f);
                const PolyDiffOperator comp = compose_action_right(act, oneu);
                for (const auto& [b2, f2] : comp.terms) out.add_linear(b2, u, f2);
            }
        }
        return out;
    }

    const GradedAlgebra& alg_;
    Representation v1_, v2_;
    int k_;
    int homdim_;
    std::vector<std::vector<std::vector<int>>> msets_; // per size r
    std::vector<int> offsets_;
    int nunknowns_ = 0;
};

} // namespace iffquant::oracle
