/**
 * @file lie_core.hpp
 * @brief Graded simple Lie algebras with exact structure constants.
 *
 * Builds so(p+1,q+1) (conformal) and sl(m+1,R) (projective) in a basis
 * (e_1..e_d | E | A_1..A_J | eps^1..eps^d) adapted to the grading
 * g = g_{-1} + g_0 + g_1, normalized so that the Killing-dual basis is
 * exactly (eps^i, E/2d, A_j^*, e_i). Everything downstream (module actions,
 * Casimir operators, the quantization recursion) reads only the structure
 * constants, the grading and the dual basis assembled here.
 */
#pragma once

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "rational.hpp"

namespace iffquant {

struct AlgebraSignature {
    enum class Kind { conformal, projective };
    Kind kind = Kind::conformal;
    int p = 0, q = 0; // conformal: form signature on R^m, m = p+q
    int m = 0;        // projective: sl(m+1)

    std::string to_string() const {
        std::ostringstream os;
        if (kind == Kind::conformal)
            os << "conformal(" << p << "," << q << ")";
        else
            os << "projective(" << m << ")";
        return os.str();
    }

    friend bool operator==(const AlgebraSignature& a, const AlgebraSignature& b) {
        return a.kind == b.kind && a.p == b.p && a.q == b.q && a.m == b.m;
    }
};

/// Coordinates over the algebra basis.
using AlgebraElement = Vec;

struct StructureCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct StructureReport {
    std::vector<StructureCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct GradedAlgebra {
    AlgebraSignature signature;
    int d = 0;      ///< dim g_{-1}
    int dim_h0 = 0; ///< dim of the semisimple part of g_0

    std::vector<std::string> labels; ///< basis labels, in storage order
    std::vector<int> grading;        ///< degree in {-1,0,1} per basis element

    /// bracket_table[a][b] = coordinates of [b_a, b_b]
    std::vector<std::vector<Vec>> bracket_table;

    DenseMat killing;      ///< Killing matrix K(b_a, b_b)
    std::vector<Vec> dual; ///< dual[a] = Killing-dual element of b_a

    // Matrix model data (absent on algebras restored from serialized form).
    std::vector<DenseMat> model; ///< basis matrices in the defining model
    int model_n = 0;
    Vec base_point;          ///< homogeneous coordinates of the chart origin
    int norm_row = 0;        ///< normalizing coordinate of the chart
    int chart_row0 = 0;      ///< chart coordinates live in rows [chart_row0, chart_row0+d)

    int dim_g() const { return 2 * d + 1 + dim_h0; }
    bool has_model() const { return !model.empty(); }

    int idx_e(int i) const { return i; }
    int idx_euler() const { return d; }
    int idx_A(int j) const { return d + 1 + j; }
    int idx_eps(int i) const { return d + 1 + dim_h0 + i; }

    /// g_0 basis enumeration: slot 0 is the Euler element, slots 1..dim_h0
    /// are the A_j. Returns the algebra-basis index.
    int g0_count() const { return 1 + dim_h0; }
    int g0_index(int t) const { return d + t; }

    AlgebraElement basis_element(int a) const {
        AlgebraElement v(dim_g(), Rational(0));
        v[a] = Rational(1);
        return v;
    }
};

inline AlgebraElement bracket(const GradedAlgebra& alg, const AlgebraElement& X,
                              const AlgebraElement& Y) {
    const int n = alg.dim_g();
    if (static_cast<int>(X.size()) != n || static_cast<int>(Y.size()) != n)
        throw std::invalid_argument("bracket: element dimension mismatch");
    AlgebraElement out(n, Rational(0));
    for (int a = 0; a < n; ++a) {
        if (X[a].is_zero()) continue;
        for (int b = 0; b < n; ++b) {
            if (Y[b].is_zero()) continue;
            const Rational f = X[a] * Y[b];
            const Vec& c = alg.bracket_table[a][b];
            for (int k = 0; k < n; ++k)
                if (!c[k].is_zero()) out[k] += f * c[k];
        }
    }
    return out;
}

/// Matrix of ad(b_a) on g in the algebra basis.
inline DenseMat ad_matrix(const GradedAlgebra& alg, int a) {
    const int n = alg.dim_g();
    DenseMat m(n, n);
    for (int b = 0; b < n; ++b)
        for (int k = 0; k < n; ++k) m.at(k, b) = alg.bracket_table[a][b][k];
    return m;
}

inline DenseMat ad_matrix(const GradedAlgebra& alg, const AlgebraElement& X) {
    const int n = alg.dim_g();
    DenseMat m(n, n);
    for (int a = 0; a < n; ++a) {
        if (X[a].is_zero()) continue;
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k)
                if (!alg.bracket_table[a][b][k].is_zero())
                    m.at(k, b) += X[a] * alg.bracket_table[a][b][k];
    }
    return m;
}

/// d x d matrix of ad(X)|g_{-1} in the basis (e_i), for X in g_0.
inline DenseMat ad_on_gm1(const GradedAlgebra& alg, const AlgebraElement& X) {
    DenseMat m(alg.d, alg.d);
    for (int a = 0; a < alg.dim_g(); ++a) {
        if (X[a].is_zero()) continue;
        for (int i = 0; i < alg.d; ++i) {
            const Vec& c = alg.bracket_table[a][alg.idx_e(i)];
            for (int s = 0; s < alg.d; ++s)
                if (!c[s].is_zero()) m.at(s, i) += X[a] * c[s];
        }
    }
    return m;
}

inline DenseMat ad_on_gm1_basis(const GradedAlgebra& alg, int a) {
    return ad_on_gm1(alg, alg.basis_element(a));
}

/// Trace of ad(b_a)|g_{-1}; the infinitesimal determinant weight.
inline Rational gm1_trace(const GradedAlgebra& alg, int a) {
    Rational t(0);
    for (int i = 0; i < alg.d; ++i) t += alg.bracket_table[a][alg.idx_e(i)][i];
    return t;
}

/// Killing form by brute force over the structure constants.
inline Rational killing_form(const GradedAlgebra& alg, const AlgebraElement& X,
                             const AlgebraElement& Y) {
    const int n = alg.dim_g();
    if (static_cast<int>(X.size()) != n || static_cast<int>(Y.size()) != n)
        throw std::invalid_argument("killing_form: element dimension mismatch");
    Rational acc(0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (!X[a].is_zero() && !Y[b].is_zero() && !alg.killing.at(a, b).is_zero())
                acc += X[a] * Y[b] * alg.killing.at(a, b);
    return acc;
}

namespace lie_detail {

inline DenseMat killing_matrix_from_constants(const GradedAlgebra& alg) {
    const int n = alg.dim_g();
    std::vector<DenseMat> ads;
    ads.reserve(n);
    for (int a = 0; a < n; ++a) ads.push_back(ad_matrix(alg, a));
    DenseMat k(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Rational tr(0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) tr += ads[a].at(i, j) * ads[b].at(j, i);
            k.at(a, b) = tr;
            k.at(b, a) = tr;
        }
    return k;
}

/// Fills bracket_table from the matrix model by decomposing commutators
/// over the flattened basis.
inline void structure_constants_from_model(GradedAlgebra& alg) {
    const int n = alg.dim_g();
    const int nn = alg.model_n * alg.model_n;
    DenseMat flat(nn, n);
    for (int a = 0; a < n; ++a)
        for (int r = 0; r < alg.model_n; ++r)
            for (int c = 0; c < alg.model_n; ++c)
                flat.at(r * alg.model_n + c, a) = alg.model[a].at(r, c);
    alg.bracket_table.assign(n, std::vector<Vec>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const DenseMat comm = alg.model[a] * alg.model[b] - alg.model[b] * alg.model[a];
            Vec rhs(nn);
            for (int r = 0; r < alg.model_n; ++r)
                for (int c = 0; c < alg.model_n; ++c) rhs[r * alg.model_n + c] = comm.at(r, c);
            auto sol = flat.solve(rhs);
            if (!sol) throw std::logic_error("lie_core: commutator escapes the basis span");
            // solve() is consistent only modulo free columns; the basis has
            // full column rank, so the solution is exact. Double-check.
            Vec back = flat.apply(*sol);
            if (back != rhs) throw std::logic_error("lie_core: commutator decomposition failed");
            alg.bracket_table[a][b] = std::move(*sol);
        }
}

inline void finalize(GradedAlgebra& alg);

} // namespace lie_detail

/// Solves K(b_a, x_b) = delta_ab and checks the dual-basis pattern
/// (eps^i, E/2d, A_j^* in h_0, e_i). Throws if the pattern is violated,
/// which signals a wrongly constructed basis.
inline std::vector<AlgebraElement> compute_dual_basis(const GradedAlgebra& alg) {
    const int n = alg.dim_g();
    auto kinv = alg.killing.inverse();
    if (!kinv) throw std::domain_error("compute_dual_basis: Killing form is degenerate");
    std::vector<AlgebraElement> dual(n);
    for (int b = 0; b < n; ++b) dual[b] = kinv->col(b);
    // Pattern checks.
    for (int i = 0; i < alg.d; ++i) {
        if (dual[alg.idx_e(i)] != alg.basis_element(alg.idx_eps(i)))
            throw std::logic_error("dual basis: dual(e_i) != eps^i");
        if (dual[alg.idx_eps(i)] != alg.basis_element(alg.idx_e(i)))
            throw std::logic_error("dual basis: dual(eps^i) != e_i");
    }
    {
        AlgebraElement expected(n, Rational(0));
        expected[alg.idx_euler()] = Rational(1, 2 * alg.d);
        if (dual[alg.idx_euler()] != expected)
            throw std::logic_error("dual basis: dual(E) != E/(2d)");
    }
    for (int j = 0; j < alg.dim_h0; ++j) {
        const AlgebraElement& v = dual[alg.idx_A(j)];
        for (int a = 0; a < n; ++a) {
            const bool in_h0 = a > alg.d && a < alg.d + 1 + alg.dim_h0;
            if (!in_h0 && !v[a].is_zero())
                throw std::logic_error("dual basis: dual(A_j) escapes h_0");
        }
    }
    return dual;
}

namespace lie_detail {

inline void finalize(GradedAlgebra& alg) {
    structure_constants_from_model(alg);
    alg.killing = killing_matrix_from_constants(alg);
    // One degree of freedom remains: rescale each eps^i so that
    // K(e_i, eps^j) = delta_i^j exactly.
    for (int i = 0; i < alg.d; ++i) {
        for (int j = 0; j < alg.d; ++j) {
            const Rational k = alg.killing.at(alg.idx_e(i), alg.idx_eps(j));
            if (i != j && !k.is_zero())
                throw std::logic_error("lie_core: K(e_i, eps^j) is not diagonal");
        }
        const Rational c = alg.killing.at(alg.idx_e(i), alg.idx_eps(i));
        if (c.is_zero()) throw std::logic_error("lie_core: K(e_i, eps^i) vanishes");
        alg.model[alg.idx_eps(i)] = c.inverse() * alg.model[alg.idx_eps(i)];
    }
    structure_constants_from_model(alg);
    alg.killing = killing_matrix_from_constants(alg);
    alg.dual = compute_dual_basis(alg);
}

} // namespace lie_detail

/// so(p+1,q+1) with its |1|-grading; d = p+q. Requires p+q >= 3.
inline GradedAlgebra build_conformal_algebra(int p, int q) {
    if (p < 0 || q < 0 || p + q < 3)
        throw std::invalid_argument("build_conformal_algebra: need p,q >= 0 and p+q >= 3");
    GradedAlgebra alg;
    alg.signature = {AlgebraSignature::Kind::conformal, p, q, 0};
    const int m = p + q;
    alg.d = m;
    alg.dim_h0 = m * (m - 1) / 2;
    const int n = m + 2;
    alg.model_n = n;
    const int dim = alg.dim_g();
    alg.labels.resize(dim);
    alg.grading.resize(dim);
    alg.model.assign(dim, DenseMat(n, n));
    auto J = [&](int a) { return (a < p) ? Rational(1) : Rational(-1); };
    // g_{-1}: e_i, matrix rows (0, 1+j) = J_jj v_j and (1+i, m+1) = v_i.
    for (int i = 0; i < m; ++i) {
        const int a = alg.idx_e(i);
        alg.labels[a] = "e_" + std::to_string(i + 1);
        alg.grading[a] = -1;
        alg.model[a].at(0, 1 + i) = J(i);
        alg.model[a].at(1 + i, m + 1) = Rational(1);
    }
    // Euler element.
    {
        const int a = alg.idx_euler();
        alg.labels[a] = "E";
        alg.grading[a] = 0;
        alg.model[a].at(0, 0) = Rational(-1);
        alg.model[a].at(m + 1, m + 1) = Rational(1);
    }
    // h_0 = so(p,q): generators J(E_ab - E_ba), lexicographic in (a,b).
    {
        int j = 0;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b, ++j) {
                const int idx = alg.idx_A(j);
                alg.labels[idx] = "A_" + std::to_string(j + 1);
                alg.grading[idx] = 0;
                alg.model[idx].at(1 + a, 1 + b) = J(a);
                alg.model[idx].at(1 + b, 1 + a) = -J(b);
            }
    }
    // g_1: eps^i (normalized later), rows (1+j, 0) = J_jj xi_j and (m+1, 1+i) = xi_i.
    for (int i = 0; i < m; ++i) {
        const int a = alg.idx_eps(i);
        alg.labels[a] = "eps^" + std::to_string(i + 1);
        alg.grading[a] = 1;
        alg.model[a].at(1 + i, 0) = J(i);
        alg.model[a].at(m + 1, 1 + i) = Rational(1);
    }
    alg.base_point.assign(n, Rational(0));
    alg.base_point[m + 1] = Rational(1);
    alg.norm_row = m + 1;
    alg.chart_row0 = 1;
    lie_detail::finalize(alg);
    return alg;
}

/// sl(m+1,R) with g_{-1} = R^m, g_0 = gl(m,R), g_1 = R^{m*}. Requires m >= 2.
inline GradedAlgebra build_projective_algebra(int m) {
    if (m < 2) throw std::invalid_argument("build_projective_algebra: need m >= 2");
    GradedAlgebra alg;
    alg.signature = {AlgebraSignature::Kind::projective, 0, 0, m};
    alg.d = m;
    alg.dim_h0 = m * m - 1;
    const int n = m + 1;
    alg.model_n = n;
    const int dim = alg.dim_g();
    alg.labels.resize(dim);
    alg.grading.resize(dim);
    alg.model.assign(dim, DenseMat(n, n));
    for (int i = 0; i < m; ++i) {
        const int a = alg.idx_e(i);
        alg.labels[a] = "e_" + std::to_string(i + 1);
        alg.grading[a] = -1;
        alg.model[a].at(i, m) = Rational(1);
    }
    // Embeds B in gl(m) as the traceless extension acting on g_{-1} by B.
    auto embed_g0 = [&](const DenseMat& B, DenseMat& out) {
        Rational tr(0);
        for (int i = 0; i < m; ++i) tr += B.at(i, i);
        const Rational shift = tr / Rational(m + 1);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) out.at(r, c) = B.at(r, c);
        for (int i = 0; i < m; ++i) out.at(i, i) -= shift;
        out.at(m, m) = -shift;
    };
    {
        const int a = alg.idx_euler();
        alg.labels[a] = "E";
        alg.grading[a] = 0;
        DenseMat B(m, m);
        for (int i = 0; i < m; ++i) B.at(i, i) = Rational(-1);
        embed_g0(B, alg.model[a]);
    }
    // h_0 = sl(m): off-diagonal units then simple-root diagonals.
    {
        int j = 0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                if (a == b) continue;
                const int idx = alg.idx_A(j);
                alg.labels[idx] = "A_" + std::to_string(j + 1);
                alg.grading[idx] = 0;
                DenseMat B(m, m);
                B.at(a, b) = Rational(1);
                embed_g0(B, alg.model[idx]);
                ++j;
            }
        for (int i = 0; i + 1 < m; ++i, ++j) {
            const int idx = alg.idx_A(j);
            alg.labels[idx] = "A_" + std::to_string(j + 1);
            alg.grading[idx] = 0;
            DenseMat B(m, m);
            B.at(i, i) = Rational(1);
            B.at(i + 1, i + 1) = Rational(-1);
            embed_g0(B, alg.model[idx]);
        }
    }
    for (int i = 0; i < m; ++i) {
        const int a = alg.idx_eps(i);
        alg.labels[a] = "eps^" + std::to_string(i + 1);
        alg.grading[a] = 1;
        alg.model[a].at(m, i) = Rational(1);
    }
    alg.base_point.assign(n, Rational(0));
    alg.base_point[m] = Rational(1);
    alg.norm_row = m;
    alg.chart_row0 = 0;
    lie_detail::finalize(alg);
    return alg;
}

inline AlgebraSignature parse_algebra_spec(const std::string& s) {
    auto open = s.find('(');
    auto close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw std::invalid_argument("algebra spec: expected name(args), got '" + s + "'");
    const std::string name = s.substr(0, open);
    const std::string args = s.substr(open + 1, close - open - 1);
    AlgebraSignature sig;
    if (name == "conformal") {
        sig.kind = AlgebraSignature::Kind::conformal;
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("algebra spec: conformal expects (p,q)");
        sig.p = std::stoi(args.substr(0, comma));
        sig.q = std::stoi(args.substr(comma + 1));
    } else if (name == "projective") {
        sig.kind = AlgebraSignature::Kind::projective;
        sig.m = std::stoi(args);
    } else {
        throw std::invalid_argument("algebra spec: unknown algebra '" + name + "'");
    }
    return sig;
}

inline GradedAlgebra build_algebra(const AlgebraSignature& sig) {
    if (sig.kind == AlgebraSignature::Kind::conformal)
        return build_conformal_algebra(sig.p, sig.q);
    return build_projective_algebra(sig.m);
}

/// Runs every algebraic identity the rest of the library relies on.
inline StructureReport verify_structure(const GradedAlgebra& alg) {
    StructureReport rep;
    const int n = alg.dim_g();
    auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
        rep.checks.push_back({name, pass, detail});
    };

    {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                for (int k = 0; k < n; ++k)
                    if (alg.bracket_table[a][b][k] != -alg.bracket_table[b][a][k]) {
                        ok = false;
                        break;
                    }
        add("antisymmetry", ok);
    }
    {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                for (int c = 0; c < n && ok; ++c) {
                    Vec s = vec_add(
                        bracket(alg, alg.bracket_table[a][b], alg.basis_element(c)),
                        vec_add(bracket(alg, alg.bracket_table[b][c], alg.basis_element(a)),
                                bracket(alg, alg.bracket_table[c][a], alg.basis_element(b))));
                    if (!vec_is_zero(s)) ok = false;
                }
        add("jacobi", ok);
    }
    {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b) {
                const int deg = alg.grading[a] + alg.grading[b];
                const Vec& c = alg.bracket_table[a][b];
                for (int k = 0; k < n; ++k) {
                    if (c[k].is_zero()) continue;
                    if (deg < -1 || deg > 1 || alg.grading[k] != deg) {
                        ok = false;
                        break;
                    }
                }
            }
        add("grading_closure", ok);
    }
    {
        bool ok = true;
        const int e = alg.idx_euler();
        for (int b = 0; b < n && ok; ++b) {
            Vec expect = vec_scale(Rational(alg.grading[b]), alg.basis_element(b));
            if (alg.bracket_table[e][b] != expect) ok = false;
        }
        add("euler_action", ok);
    }
    {
        bool ok = alg.killing.inverse().has_value();
        add("killing_nondegenerate", ok);
    }
    {
        bool ok = true;
        for (int i = 0; i < alg.d && ok; ++i)
            for (int j = 0; j < alg.d; ++j) {
                if (!alg.killing.at(alg.idx_e(i), alg.idx_e(j)).is_zero() ||
                    !alg.killing.at(alg.idx_eps(i), alg.idx_eps(j)).is_zero()) {
                    ok = false;
                    break;
                }
            }
        add("killing_isotropy", ok);
    }
    {
        bool ok = true;
        std::string detail;
        try {
            auto dual = compute_dual_basis(alg);
            AlgebraElement sum(n, Rational(0));
            for (int i = 0; i < alg.d; ++i)
                sum = vec_add(sum, bracket(alg, alg.basis_element(alg.idx_eps(i)),
                                           alg.basis_element(alg.idx_e(i))));
            AlgebraElement half_euler(n, Rational(0));
            half_euler[alg.idx_euler()] = Rational(1, 2);
            if (sum != half_euler) {
                ok = false;
                detail = "sum [eps^i, e_i] != E/2";
            }
        } catch (const std::exception& ex) {
            ok = false;
            detail = ex.what();
        }
        add("dual_pattern", ok, detail);
    }
    {
        // [eps^r, e_i] = (1/2d) delta_i^r E - sum_j a_{ji}^r A_j^*
        //             = (1/2d) delta_i^r E - sum_j a_{ji}^{*r} A_j
        bool ok = true;
        std::vector<DenseMat> a_mats, astar_mats;
        for (int j = 0; j < alg.dim_h0; ++j) {
            a_mats.push_back(ad_on_gm1_basis(alg, alg.idx_A(j)));
            astar_mats.push_back(ad_on_gm1(alg, alg.dual[alg.idx_A(j)]));
        }
        for (int r = 0; r < alg.d && ok; ++r)
            for (int i = 0; i < alg.d && ok; ++i) {
                const Vec& lhs = alg.bracket_table[alg.idx_eps(r)][alg.idx_e(i)];
                Vec rhs1(n, Rational(0)), rhs2(n, Rational(0));
                if (r == i) {
                    rhs1[alg.idx_euler()] = Rational(1, 2 * alg.d);
                    rhs2[alg.idx_euler()] = Rational(1, 2 * alg.d);
                }
                for (int j = 0; j < alg.dim_h0; ++j) {
                    rhs1 = vec_sub(rhs1, vec_scale(a_mats[j].at(r, i), alg.dual[alg.idx_A(j)]));
                    rhs2 = vec_sub(rhs2, vec_scale(astar_mats[j].at(r, i),
                                                   alg.basis_element(alg.idx_A(j))));
                }
                if (lhs != rhs1 || lhs != rhs2) ok = false;
            }
        add("bracket_eps_e_decomposition", ok);
    }
    {
        // [A_j, eps^r] = -sum_k a_{jk}^r eps^k, and the starred variant.
        bool ok = true;
        for (int j = 0; j < alg.dim_h0 && ok; ++j) {
            const DenseMat aj = ad_on_gm1_basis(alg, alg.idx_A(j));
            const DenseMat ajs = ad_on_gm1(alg, alg.dual[alg.idx_A(j)]);
            for (int r = 0; r < alg.d && ok; ++r) {
                Vec rhs(n, Rational(0)), rhs_star(n, Rational(0));
                for (int k = 0; k < alg.d; ++k) {
                    rhs[alg.idx_eps(k)] -= aj.at(r, k);
                    rhs_star[alg.idx_eps(k)] -= ajs.at(r, k);
                }
                if (alg.bracket_table[alg.idx_A(j)][alg.idx_eps(r)] != rhs) ok = false;
                if (bracket(alg, alg.dual[alg.idx_A(j)],
                            alg.basis_element(alg.idx_eps(r))) != rhs_star)
                    ok = false;
            }
        }
        add("bracket_A_eps", ok);
    }
    {
        // Casimir of the adjoint action with the dual pairs must be Id.
        DenseMat cas(n, n);
        for (int a = 0; a < n; ++a)
            cas = cas + ad_matrix(alg, a) * ad_matrix(alg, alg.dual[a]);
        add("casimir_adjoint_identity", cas == DenseMat::identity(n));
    }
    {
        // Stored Killing matrix agrees with the ad-trace recomputation.
        add("killing_consistency",
            alg.killing == lie_detail::killing_matrix_from_constants(alg));
    }
    return rep;
}

} // namespace iffquant
