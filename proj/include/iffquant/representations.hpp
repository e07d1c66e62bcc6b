/**
 * @file representations.hpp
 * @brief Finite-dimensional g_0-modules and symbol spaces.
 *
 * Modules are built functorially from two generators, the density twist and
 * the standard module g_{-1}, through dual/tensor/sym/ext. A symbol space of
 * degree k is the tensor power (x)^k g_{-1} tensored with gl(V1,V2); it
 * carries three commuting-by-construction actions rho_*, rho_{r*}, rho_{2*}
 * with rho_* = rho_{2*} + rho_{r*}. Symmetric symbols are embedded in the
 * full tensor power through an explicit symmetrization projector.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lie_core.hpp"
#include "linalg.hpp"

namespace iffquant {

// ------------------------------------------------------------ descriptors ---

struct DescriptorParseError : std::runtime_error {
    size_t column;
    DescriptorParseError(const std::string& msg, size_t col)
        : std::runtime_error(msg + " (column " + std::to_string(col + 1) + ")"), column(col) {}
};

struct RepDescriptor {
    enum class Kind { density, standard, dual, tensor, sym, ext };
    Kind kind = Kind::standard;
    Rational lambda;                 // density weight
    long z = 0;                      // integer determinant power
    int power = 0;                   // sym / ext exponent
    std::vector<RepDescriptor> args; // dual: 1 child, tensor: 2 children

    static RepDescriptor density(const Rational& lambda, long z = 0) {
        RepDescriptor d;
        d.kind = Kind::density;
        d.lambda = lambda;
        d.z = z;
        return d;
    }
    static RepDescriptor standard() {
        RepDescriptor d;
        d.kind = Kind::standard;
        return d;
    }
    static RepDescriptor dual(RepDescriptor inner) {
        RepDescriptor d;
        d.kind = Kind::dual;
        d.args.push_back(std::move(inner));
        return d;
    }
    static RepDescriptor tensor(RepDescriptor a, RepDescriptor b) {
        RepDescriptor d;
        d.kind = Kind::tensor;
        d.args.push_back(std::move(a));
        d.args.push_back(std::move(b));
        return d;
    }
    static RepDescriptor sym(int n, RepDescriptor inner) {
        RepDescriptor d;
        d.kind = Kind::sym;
        d.power = n;
        d.args.push_back(std::move(inner));
        return d;
    }
    static RepDescriptor ext(int n, RepDescriptor inner) {
        RepDescriptor d;
        d.kind = Kind::ext;
        d.power = n;
        d.args.push_back(std::move(inner));
        return d;
    }

    std::string to_string() const {
        std::ostringstream os;
        switch (kind) {
        case Kind::density:
            os << "density(" << lambda << "," << z << ")";
            break;
        case Kind::standard:
            os << "standard";
            break;
        case Kind::dual:
            os << "dual(" << args[0].to_string() << ")";
            break;
        case Kind::tensor:
            os << "tensor(" << args[0].to_string() << "," << args[1].to_string() << ")";
            break;
        case Kind::sym:
            os << "sym" << power << "(" << args[0].to_string() << ")";
            break;
        case Kind::ext:
            os << "ext" << power << "(" << args[0].to_string() << ")";
            break;
        }
        return os.str();
    }
};

namespace rep_detail {

class DescriptorParser {
public:
    explicit DescriptorParser(const std::string& s) : s_(s) {}

    RepDescriptor parse() {
        RepDescriptor d = parse_rep();
        skip_ws();
        if (pos_ != s_.size()) throw DescriptorParseError("trailing input", pos_);
        return d;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw DescriptorParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    std::string ident() {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) != 0))
            ++pos_;
        if (pos_ == start) throw DescriptorParseError("expected identifier", pos_);
        return s_.substr(start, pos_ - start);
    }
    long integer() {
        skip_ws();
        const size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
        if (pos_ == start) throw DescriptorParseError("expected integer", pos_);
        return std::stol(s_.substr(start, pos_ - start));
    }
    Rational rational() {
        const long num = integer();
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            const long den = integer();
            if (den == 0) throw DescriptorParseError("zero denominator", pos_);
            return Rational(num, den);
        }
        return Rational(num);
    }
    int small_power() {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
        if (pos_ == start) throw DescriptorParseError("expected power digit(s)", pos_);
        return std::stoi(s_.substr(start, pos_ - start));
    }

    RepDescriptor parse_rep() {
        const size_t at = pos_;
        const std::string name = ident();
        if (name == "standard") return RepDescriptor::standard();
        if (name == "density") {
            expect('(');
            const Rational lam = rational();
            expect(',');
            const long z = integer();
            expect(')');
            return RepDescriptor::density(lam, z);
        }
        if (name == "dual") {
            expect('(');
            RepDescriptor inner = parse_rep();
            expect(')');
            return RepDescriptor::dual(std::move(inner));
        }
        if (name == "tensor") {
            expect('(');
            RepDescriptor a = parse_rep();
            expect(',');
            RepDescriptor b = parse_rep();
            expect(')');
            return RepDescriptor::tensor(std::move(a), std::move(b));
        }
        if (name == "sym" || name == "ext") {
            const int n = small_power();
            expect('(');
            RepDescriptor inner = parse_rep();
            expect(')');
            return name == "sym" ? RepDescriptor::sym(n, std::move(inner))
                                 : RepDescriptor::ext(n, std::move(inner));
        }
        throw DescriptorParseError("unknown representation '" + name + "'", at);
    }

    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace rep_detail

inline RepDescriptor parse_descriptor(const std::string& s) {
    return rep_detail::DescriptorParser(s).parse();
}

// -------------------------------------------------------- representations ---

/// A g_0-module: one exact matrix per g_0 basis slot (slot 0 = Euler element,
/// slots 1..dim_h0 = A_j).
struct Representation {
    int dim = 0;
    std::vector<DenseMat> action;
    RepDescriptor desc;
    AlgebraSignature algebra; ///< the algebra the module was built over
};

inline Representation density_rep(const GradedAlgebra& alg, const Rational& lambda, long z = 0) {
    Representation rep;
    rep.dim = 1;
    rep.desc = RepDescriptor::density(lambda, z);
    rep.algebra = alg.signature;
    const Rational weight = lambda + Rational(z);
    rep.action.reserve(alg.g0_count());
    for (int t = 0; t < alg.g0_count(); ++t) {
        DenseMat m(1, 1);
        m.at(0, 0) = weight * gm1_trace(alg, alg.g0_index(t));
        rep.action.push_back(std::move(m));
    }
    return rep;
}

inline Representation standard_rep(const GradedAlgebra& alg) {
    Representation rep;
    rep.dim = alg.d;
    rep.desc = RepDescriptor::standard();
    rep.algebra = alg.signature;
    rep.action.reserve(alg.g0_count());
    for (int t = 0; t < alg.g0_count(); ++t)
        rep.action.push_back(ad_on_gm1_basis(alg, alg.g0_index(t)));
    return rep;
}

namespace rep_detail {

inline Representation dual_of(const Representation& r) {
    Representation rep;
    rep.dim = r.dim;
    rep.desc = RepDescriptor::dual(r.desc);
    rep.algebra = r.algebra;
    for (const auto& m : r.action) rep.action.push_back(Rational(-1) * m.transpose());
    return rep;
}

inline Representation tensor_of(const Representation& a, const Representation& b) {
    Representation rep;
    rep.dim = a.dim * b.dim;
    rep.desc = RepDescriptor::tensor(a.desc, b.desc);
    rep.algebra = a.algebra;
    for (size_t t = 0; t < a.action.size(); ++t) {
        DenseMat m(rep.dim, rep.dim);
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < b.dim; ++j) {
                const int col = i * b.dim + j;
                for (int s = 0; s < a.dim; ++s)
                    if (!a.action[t].at(s, i).is_zero())
                        m.at(s * b.dim + j, col) += a.action[t].at(s, i);
                for (int s = 0; s < b.dim; ++s)
                    if (!b.action[t].at(s, j).is_zero())
                        m.at(i * b.dim + s, col) += b.action[t].at(s, j);
            }
        rep.action.push_back(std::move(m));
    }
    return rep;
}

inline std::vector<std::vector<int>> sorted_words(int dim, int n, bool strict) {
    std::vector<std::vector<int>> out;
    std::vector<int> w(n, 0);
    if (n == 0) {
        out.push_back({});
        return out;
    }
    // lexicographic enumeration of (strictly) non-decreasing words
    std::function<void(int, int)> rec = [&](int slot, int from) {
        if (slot == n) {
            out.push_back(w);
            return;
        }
        for (int v = from; v < dim; ++v) {
            w[slot] = v;
            rec(slot + 1, strict ? v + 1 : v);
        }
    };
    rec(0, 0);
    return out;
}

/// Induced action on sym^n or ext^n of a module, on the monomial basis.
inline Representation power_of(const Representation& r, int n, bool ext) {
    if (n < 0) throw std::invalid_argument("power_of: negative power");
    Representation rep;
    rep.desc = ext ? RepDescriptor::ext(n, r.desc) : RepDescriptor::sym(n, r.desc);
    rep.algebra = r.algebra;
    const auto basis = sorted_words(r.dim, n, ext);
    rep.dim = static_cast<int>(basis.size());
    if (ext && rep.dim == 0)
        throw std::invalid_argument("power_of: ext power exceeds module dimension");
    auto rank_of = [&](std::vector<int> w, int& sign) -> int {
        sign = 1;
        // insertion sort, tracking parity for the exterior case
        for (size_t i = 1; i < w.size(); ++i)
            for (size_t j = i; j > 0 && w[j - 1] > w[j]; --j) {
                std::swap(w[j - 1], w[j]);
                sign = -sign;
            }
        if (ext)
            for (size_t i = 1; i < w.size(); ++i)
                if (w[i - 1] == w[i]) return -1;
        auto it = std::lower_bound(basis.begin(), basis.end(), w);
        return static_cast<int>(it - basis.begin());
    };
    for (size_t t = 0; t < r.action.size(); ++t) {
        DenseMat m(rep.dim, rep.dim);
        for (int b = 0; b < rep.dim; ++b) {
            const auto& w = basis[b];
            for (int slot = 0; slot < n; ++slot)
                for (int s = 0; s < r.dim; ++s) {
                    const Rational& c = r.action[t].at(s, w[slot]);
                    if (c.is_zero()) continue;
                    std::vector<int> w2 = w;
                    w2[slot] = s;
                    int sign = 1;
                    const int row = rank_of(std::move(w2), sign);
                    if (row >= 0) m.at(row, b) += Rational(ext ? sign : 1) * c;
                }
        }
        rep.action.push_back(std::move(m));
    }
    return rep;
}

} // namespace rep_detail

inline Representation build_rep(const GradedAlgebra& alg, const RepDescriptor& desc) {
    switch (desc.kind) {
    case RepDescriptor::Kind::density:
        return density_rep(alg, desc.lambda, desc.z);
    case RepDescriptor::Kind::standard:
        return standard_rep(alg);
    case RepDescriptor::Kind::dual:
        return rep_detail::dual_of(build_rep(alg, desc.args[0]));
    case RepDescriptor::Kind::tensor:
        return rep_detail::tensor_of(build_rep(alg, desc.args[0]), build_rep(alg, desc.args[1]));
    case RepDescriptor::Kind::sym:
        return rep_detail::power_of(build_rep(alg, desc.args[0]), desc.power, false);
    case RepDescriptor::Kind::ext:
        return rep_detail::power_of(build_rep(alg, desc.args[0]), desc.power, true);
    }
    throw std::invalid_argument("build_rep: unsupported descriptor");
}

inline Representation build_rep(const GradedAlgebra& alg, const std::string& descriptor) {
    return build_rep(alg, parse_descriptor(descriptor));
}

/// Matrix of the action of a g_0 element given by algebra coordinates.
inline DenseMat rep_action(const GradedAlgebra& alg, const Representation& rep,
                           const AlgebraElement& X) {
    DenseMat m(rep.dim, rep.dim);
    for (int t = 0; t < alg.g0_count(); ++t) {
        const Rational& c = X[alg.g0_index(t)];
        if (!c.is_zero()) m = m + c * rep.action[t];
    }
    return m;
}

/// Action of the parabolic subalgebra g_0 + g_1 on a g_0-module: the g_1
/// part acts by zero. Elements with a g_{-1} component are rejected.
inline DenseMat rho_prime_star(const GradedAlgebra& alg, const AlgebraElement& h,
                               const Representation& rep) {
    if (static_cast<int>(h.size()) != alg.dim_g())
        throw std::invalid_argument("rho_prime_star: element dimension mismatch");
    for (int i = 0; i < alg.d; ++i)
        if (!h[alg.idx_e(i)].is_zero())
            throw std::invalid_argument("rho_prime_star: element has a g_{-1} component");
    return rep_action(alg, rep, h);
}

/// Exact homomorphism check over all g_0 basis pairs.
inline bool check_homomorphism(const GradedAlgebra& alg, const Representation& rep) {
    for (int s = 0; s < alg.g0_count(); ++s)
        for (int t = 0; t < alg.g0_count(); ++t) {
            const AlgebraElement br =
                alg.bracket_table[alg.g0_index(s)][alg.g0_index(t)];
            const DenseMat lhs = rep_action(alg, rep, br);
            const DenseMat rhs = rep.action[s] * rep.action[t] - rep.action[t] * rep.action[s];
            if (lhs != rhs) return false;
        }
    return true;
}

// ----------------------------------------------------------- symbol space ---

/// Degree-k symbol space (x)^k g_{-1} (x) gl(V1,V2). Basis index is
/// word-major: idx = rank(word) * homdim + (r * dimV1 + c) where (r,c) is a
/// matrix unit of Hom(V1,V2), row-major over (V2-basis x V1-basis).
struct SymbolSpace {
    GradedAlgebra alg;
    Representation V1, V2;
    int degree = 0;
    int dim = 0;
    int homdim = 0;

    std::vector<SparseMat> rho_star;   ///< per g_0 slot
    std::vector<SparseMat> rho_r_star; ///< per g_0 slot
    std::vector<SparseMat> rho_2_star; ///< per g_0 slot
    /// Degree-lowering maps gamma(eps^i), one per i; filled by attach_gamma().
    std::vector<SparseMat> gamma;

    int word_count() const {
        int n = 1;
        for (int t = 0; t < degree; ++t) n *= alg.d;
        return n;
    }
    int rank_word(const std::vector<int>& w) const {
        int idx = 0;
        for (int v : w) idx = idx * alg.d + v;
        return idx;
    }
    std::vector<int> unrank_word(int idx) const {
        std::vector<int> w(degree);
        for (int t = degree - 1; t >= 0; --t) {
            w[t] = idx % alg.d;
            idx /= alg.d;
        }
        return w;
    }
    int index_of(const std::vector<int>& w, int hom) const { return rank_word(w) * homdim + hom; }
    int hom_index(int r, int c) const { return r * V1.dim + c; }

    /// Matrix of the action of a g_0 element, for a chosen variant.
    DenseMat action_of(const AlgebraElement& X, const std::vector<SparseMat>& variant) const {
        DenseMat m(dim, dim);
        for (int t = 0; t < alg.g0_count(); ++t) {
            const Rational& c = X[alg.g0_index(t)];
            if (!c.is_zero()) m = m + c * variant[t].to_dense();
        }
        return m;
    }
};

inline SymbolSpace symbol_space(const GradedAlgebra& alg, const Representation& V1,
                                const Representation& V2, int k) {
    if (k < 0) throw std::invalid_argument("symbol_space: negative degree");
    SymbolSpace sp;
    sp.alg = alg;
    sp.V1 = V1;
    sp.V2 = V2;
    sp.degree = k;
    sp.homdim = V1.dim * V2.dim;
    sp.dim = sp.word_count() * sp.homdim;
    if (!(V1.algebra == alg.signature) || !(V2.algebra == alg.signature) ||
        static_cast<int>(V1.action.size()) != alg.g0_count() ||
        static_cast<int>(V2.action.size()) != alg.g0_count())
        throw std::invalid_argument("symbol_space: module built over a different algebra");
    const int nwords = sp.word_count();
    for (int t = 0; t < alg.g0_count(); ++t) {
        const DenseMat ad = ad_on_gm1_basis(alg, alg.g0_index(t));
        const DenseMat& m1 = V1.action[t];
        const DenseMat& m2 = V2.action[t];
        SparseMat r2(sp.dim, sp.dim), rr(sp.dim, sp.dim);
        for (int widx = 0; widx < nwords; ++widx) {
            const std::vector<int> w = sp.unrank_word(widx);
            for (int r = 0; r < V2.dim; ++r)
                for (int c = 0; c < V1.dim; ++c) {
                    const int col = widx * sp.homdim + sp.hom_index(r, c);
                    // rho_{2*}: postcompose with the V2 action.
                    for (int r2i = 0; r2i < V2.dim; ++r2i)
                        if (!m2.at(r2i, r).is_zero())
                            r2.add_entry(widx * sp.homdim + sp.hom_index(r2i, c), col,
                                         m2.at(r2i, r));
                    // rho_{r*}: rotate tensor slots, precompose with -V1 action.
                    for (int slot = 0; slot < k; ++slot)
                        for (int s = 0; s < alg.d; ++s) {
                            const Rational& cf = ad.at(s, w[slot]);
                            if (cf.is_zero()) continue;
                            std::vector<int> w2 = w;
                            w2[slot] = s;
                            rr.add_entry(sp.rank_word(w2) * sp.homdim + sp.hom_index(r, c), col,
                                         cf);
                        }
                    for (int c2 = 0; c2 < V1.dim; ++c2)
                        if (!m1.at(c, c2).is_zero())
                            rr.add_entry(widx * sp.homdim + sp.hom_index(r, c2), col,
                                         -m1.at(c, c2));
                }
        }
        sp.rho_star.push_back(r2 + rr);
        sp.rho_2_star.push_back(std::move(r2));
        sp.rho_r_star.push_back(std::move(rr));
    }
    return sp;
}

// ---------------------------------------------------- symmetric structure ---

inline long multiset_count(int d, int k) {
    // C(d+k-1, k)
    long n = 1;
    for (int i = 1; i <= k; ++i) n = n * (d + k - i) / i;
    return n;
}

/// Non-decreasing words of length k over {0..d-1}, lexicographic.
inline std::vector<std::vector<int>> multiset_words(int d, int k) {
    return rep_detail::sorted_words(d, k, false);
}

/// Symmetrization projector on the degree-k space: average over all
/// permutations of the tensor slots.
inline SparseMat symmetrize_matrix(const SymbolSpace& sp) {
    const int k = sp.degree;
    SparseMat s(sp.dim, sp.dim);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    const Rational w(1, fact == 0 ? 1 : fact);
    const int nwords = sp.word_count();
    do {
        for (int widx = 0; widx < nwords; ++widx) {
            const std::vector<int> word = sp.unrank_word(widx);
            std::vector<int> pw(k);
            for (int t = 0; t < k; ++t) pw[t] = word[perm[t]];
            const int target = sp.rank_word(pw);
            for (int h = 0; h < sp.homdim; ++h)
                s.add_entry(target * sp.homdim + h, widx * sp.homdim + h, w);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return s;
}

inline Vec symmetrize(const SymbolSpace& sp, const Vec& t) {
    return symmetrize_matrix(sp).apply(t);
}

/// Embedding of symmetric coordinates (multiset-indexed) into the full
/// tensor power: each multiset basis vector is the sum of the words in its
/// permutation orbit.
inline SparseMat embed_symmetric_matrix(const SymbolSpace& sp) {
    const auto msets = multiset_words(sp.alg.d, sp.degree);
    SparseMat e(sp.dim, static_cast<int>(msets.size()) * sp.homdim);
    for (size_t b = 0; b < msets.size(); ++b) {
        std::vector<int> w = msets[b];
        std::sort(w.begin(), w.end());
        do {
            for (int h = 0; h < sp.homdim; ++h)
                e.add_entry(sp.rank_word(w) * sp.homdim + h,
                            static_cast<int>(b) * sp.homdim + h, Rational(1));
        } while (std::next_permutation(w.begin(), w.end()));
    }
    return e;
}

/// Left inverse of the embedding: reads the coordinate at the sorted word of
/// each multiset.
inline SparseMat restrict_symmetric_matrix(const SymbolSpace& sp) {
    const auto msets = multiset_words(sp.alg.d, sp.degree);
    SparseMat r(static_cast<int>(msets.size()) * sp.homdim, sp.dim);
    for (size_t b = 0; b < msets.size(); ++b)
        for (int h = 0; h < sp.homdim; ++h)
            r.add_entry(static_cast<int>(b) * sp.homdim + h,
                        sp.rank_word(msets[b]) * sp.homdim + h, Rational(1));
    return r;
}

inline Vec embed_symmetric(const SymbolSpace& sp, const Vec& sym_coords) {
    return embed_symmetric_matrix(sp).apply(sym_coords);
}

// -------------------------------------------------------- weight structure ---
//
// A split Cartan set of h_0 together with an exact basis of each module in
// which the Cartan acts diagonally. Operators commuting with h_0 (the flat
// Casimir in particular) become block diagonal over the joint weights, which
// keeps exact spectral work on large symbol spaces tractable.

struct WeightBasis {
    DenseMat P;    ///< columns = new basis vectors in old coordinates
    DenseMat Pinv; ///< inverse change of basis
    std::vector<std::vector<Rational>> weights; ///< per new basis vector, per Cartan slot
};

struct CartanSet {
    std::vector<AlgebraElement> elements; ///< commuting elements of h_0
    WeightBasis standard;                 ///< weight basis of g_{-1}
};

/// Split Cartan elements with an exact rational eigenbasis on g_{-1}.
inline CartanSet cartan_set(const GradedAlgebra& alg) {
    CartanSet cs;
    const int d = alg.d;
    if (alg.signature.kind == AlgebraSignature::Kind::conformal) {
        const int p = alg.signature.p, q = alg.signature.q;
        const int r = std::min(p, q);
        // h_0 generators J(E_ab - E_ba) are ordered lexicographically; the
        // hyperbolic pair (t, p+t) is diagonalized by e_t +- e_{p+t}.
        auto pair_index = [&](int a, int b) {
            int j = 0;
            for (int x = 0; x < d; ++x)
                for (int y = x + 1; y < d; ++y, ++j)
                    if (x == a && y == b) return j;
            return -1;
        };
        DenseMat P(d, d), Pinv(d, d);
        std::vector<std::vector<Rational>> w(d, std::vector<Rational>(r, Rational(0)));
        int col = 0;
        for (int t = 0; t < r; ++t) {
            cs.elements.push_back(alg.basis_element(alg.idx_A(pair_index(t, p + t))));
            P.at(t, col) = Rational(1);
            P.at(p + t, col) = Rational(1);
            Pinv.at(col, t) = Rational(1, 2);
            Pinv.at(col, p + t) = Rational(1, 2);
            w[col][t] = Rational(1);
            ++col;
            P.at(t, col) = Rational(1);
            P.at(p + t, col) = Rational(-1);
            Pinv.at(col, t) = Rational(1, 2);
            Pinv.at(col, p + t) = Rational(-1, 2);
            w[col][t] = Rational(-1);
            ++col;
        }
        for (int i = 0; i < d; ++i) {
            const bool paired = (i < r) || (i >= p && i < p + r);
            if (paired) continue;
            P.at(i, col) = Rational(1);
            Pinv.at(col, i) = Rational(1);
            ++col;
        }
        cs.standard = {std::move(P), std::move(Pinv), std::move(w)};
    } else {
        const int m = alg.signature.m;
        // Diagonal generators E_tt - E_{t+1,t+1} sit after the off-diagonal
        // units in the h_0 ordering; the e-basis is already a weight basis.
        const int offdiag = m * (m - 1); // off-diagonal units precede the diagonals
        std::vector<std::vector<Rational>> w(d, std::vector<Rational>(m - 1, Rational(0)));
        for (int t = 0; t + 1 < m; ++t) {
            cs.elements.push_back(alg.basis_element(alg.idx_A(offdiag + t)));
            w[t][t] = Rational(-1); // ad acts on g_{-1} by the matrix itself
            w[t + 1][t] = Rational(1);
        }
        // weights read from the actual action below; placeholder filled next
        DenseMat P = DenseMat::identity(d);
        DenseMat Pinv = DenseMat::identity(d);
        for (int t = 0; t + 1 < m; ++t) {
            const DenseMat a = ad_on_gm1(alg, cs.elements[t]);
            for (int i = 0; i < d; ++i) w[i][t] = a.at(i, i);
        }
        cs.standard = {std::move(P), std::move(Pinv), std::move(w)};
    }
    return cs;
}

namespace rep_detail {

/// Induced matrix of P on the monomial basis of sym^n / ext^n.
inline DenseMat induced_power_matrix(const DenseMat& P, int n, bool ext) {
    const int dim = P.rows();
    const auto basis = sorted_words(dim, n, ext);
    DenseMat out(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
    for (size_t col = 0; col < basis.size(); ++col) {
        // expand the product of the chosen columns of P
        std::vector<std::pair<std::vector<int>, Rational>> terms{{{}, Rational(1)}};
        for (int slot = 0; slot < n; ++slot) {
            std::vector<std::pair<std::vector<int>, Rational>> next;
            for (const auto& [word, coeff] : terms)
                for (int s = 0; s < dim; ++s) {
                    const Rational& c = P.at(s, basis[col][slot]);
                    if (c.is_zero()) continue;
                    std::vector<int> w2 = word;
                    int sign = 1;
                    // insert s keeping the word sorted
                    size_t pos = w2.size();
                    w2.push_back(s);
                    while (pos > 0 && w2[pos - 1] > w2[pos]) {
                        std::swap(w2[pos - 1], w2[pos]);
                        sign = -sign;
                        --pos;
                    }
                    if (ext && pos > 0 && w2[pos - 1] == w2[pos]) continue;
                    Rational nc = coeff * c;
                    if (ext && sign < 0) nc = -nc;
                    next.emplace_back(std::move(w2), std::move(nc));
                }
            terms = std::move(next);
        }
        for (const auto& [word, coeff] : terms) {
            auto it = std::lower_bound(basis.begin(), basis.end(), word);
            out.at(static_cast<int>(it - basis.begin()), static_cast<int>(col)) += coeff;
        }
    }
    return out;
}

} // namespace rep_detail

/// Weight basis of a functorially built module; follows the descriptor tree.
inline WeightBasis rep_weight_basis(const GradedAlgebra& alg, const RepDescriptor& desc,
                                    const CartanSet& cs) {
    const int r = static_cast<int>(cs.elements.size());
    switch (desc.kind) {
    case RepDescriptor::Kind::density: {
        WeightBasis wb;
        wb.P = DenseMat::identity(1);
        wb.Pinv = DenseMat::identity(1);
        wb.weights = {std::vector<Rational>(r, Rational(0))};
        return wb;
    }
    case RepDescriptor::Kind::standard:
        return cs.standard;
    case RepDescriptor::Kind::dual: {
        WeightBasis in = rep_weight_basis(alg, desc.args[0], cs);
        WeightBasis wb;
        wb.P = in.Pinv.transpose();
        wb.Pinv = in.P.transpose();
        wb.weights = in.weights;
        for (auto& w : wb.weights)
            for (auto& x : w) x = -x;
        return wb;
    }
    case RepDescriptor::Kind::tensor: {
        WeightBasis a = rep_weight_basis(alg, desc.args[0], cs);
        WeightBasis b = rep_weight_basis(alg, desc.args[1], cs);
        WeightBasis wb;
        const int da = a.P.rows(), db = b.P.rows();
        wb.P = DenseMat(da * db, da * db);
        wb.Pinv = DenseMat(da * db, da * db);
        wb.weights.resize(da * db);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < db; ++j) {
                const int col = i * db + j;
                for (int s = 0; s < da; ++s)
                    for (int t = 0; t < db; ++t) {
                        if (!a.P.at(s, i).is_zero() && !b.P.at(t, j).is_zero())
                            wb.P.at(s * db + t, col) = a.P.at(s, i) * b.P.at(t, j);
                        if (!a.Pinv.at(i, s).is_zero() && !b.Pinv.at(j, t).is_zero())
                            wb.Pinv.at(col, s * db + t) = a.Pinv.at(i, s) * b.Pinv.at(j, t);
                    }
                wb.weights[col].resize(r);
                for (int t = 0; t < r; ++t)
                    wb.weights[col][t] = a.weights[i][t] + b.weights[j][t];
            }
        return wb;
    }
    case RepDescriptor::Kind::sym:
    case RepDescriptor::Kind::ext: {
        const bool ext = desc.kind == RepDescriptor::Kind::ext;
        WeightBasis in = rep_weight_basis(alg, desc.args[0], cs);
        WeightBasis wb;
        wb.P = rep_detail::induced_power_matrix(in.P, desc.power, ext);
        wb.Pinv = rep_detail::induced_power_matrix(in.Pinv, desc.power, ext);
        const auto basis = rep_detail::sorted_words(in.P.rows(), desc.power, ext);
        wb.weights.resize(basis.size());
        for (size_t b = 0; b < basis.size(); ++b) {
            wb.weights[b].assign(r, Rational(0));
            for (int v : basis[b])
                for (int t = 0; t < r; ++t) wb.weights[b][t] += in.weights[v][t];
        }
        return wb;
    }
    }
    throw std::invalid_argument("rep_weight_basis: unsupported descriptor");
}

/// Validates a weight basis against the actual module action: the Cartan
/// elements must act diagonally with the recorded weights.
inline bool weight_basis_valid(const GradedAlgebra& alg, const Representation& rep,
                               const CartanSet& cs, const WeightBasis& wb) {
    if (wb.P.rows() != rep.dim) return false;
    if ((wb.P * wb.Pinv) != DenseMat::identity(rep.dim)) return false;
    for (size_t t = 0; t < cs.elements.size(); ++t) {
        const DenseMat act = rep_action(alg, rep, cs.elements[t]);
        DenseMat diag(rep.dim, rep.dim);
        for (int i = 0; i < rep.dim; ++i) diag.at(i, i) = wb.weights[i][t];
        if (act * wb.P != wb.P * diag) return false;
    }
    return true;
}

} // namespace iffquant
