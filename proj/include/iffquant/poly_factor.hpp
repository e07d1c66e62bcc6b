/**
 * @file poly_factor.hpp
 * @brief Exact factorization of rational polynomials into irreducibles.
 *
 * Pipeline: Yun squarefree split over Q, monic integerization, Berlekamp
 * factorization modulo a small prime, quadratic Hensel lifting past the
 * Mignotte bound, subset recombination. Inputs here are the characteristic
 * and minimal polynomials of exact operators, so degrees stay moderate.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polynomial.hpp"
#include "rational.hpp"

namespace iffquant {

namespace factor_detail {

// ---------------------------------------------------------------- mod p ---

using PPoly = std::vector<long>; // ascending coefficients in [0, p)

inline void ppoly_trim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int ppoly_deg(const PPoly& f) { return static_cast<int>(f.size()) - 1; }

inline long mod_pow(long b, long e, long p) {
    long r = 1 % p;
    b %= p;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline long mod_inv(long a, long p) { return mod_pow(a, p - 2, p); }

inline PPoly ppoly_mul(const PPoly& a, const PPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    ppoly_trim(r);
    return r;
}

inline std::pair<PPoly, PPoly> ppoly_divmod(const PPoly& a, const PPoly& b, long p) {
    PPoly r = a, q;
    ppoly_trim(r);
    const int db = ppoly_deg(b);
    if (db < 0) throw std::domain_error("ppoly: division by zero");
    if (ppoly_deg(r) >= db) q.assign(ppoly_deg(r) - db + 1, 0);
    const long inv = mod_inv(b.back(), p);
    while (ppoly_deg(r) >= db) {
        const int shift = ppoly_deg(r) - db;
        const long f = r.back() * inv % p;
        q[shift] = f;
        for (int i = 0; i <= db; ++i) {
            r[i + shift] = (r[i + shift] - f * b[i]) % p;
            if (r[i + shift] < 0) r[i + shift] += p;
        }
        ppoly_trim(r);
    }
    return {q, r};
}

inline PPoly ppoly_gcd(PPoly a, PPoly b, long p) {
    ppoly_trim(a);
    ppoly_trim(b);
    while (!b.empty()) {
        PPoly r = ppoly_divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const long inv = mod_inv(a.back(), p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

inline PPoly ppoly_deriv(const PPoly& f, long p) {
    PPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(static_cast<long>(i % p) * f[i] % p);
    ppoly_trim(r);
    return r;
}

/// x^e mod f over F_p.
inline PPoly ppoly_xpow_mod(long e, const PPoly& f, long p) {
    PPoly result{1};
    PPoly base = ppoly_divmod(PPoly{0, 1}, f, p).second;
    while (e > 0) {
        if (e & 1) result = ppoly_divmod(ppoly_mul(result, base, p), f, p).second;
        base = ppoly_divmod(ppoly_mul(base, base, p), f, p).second;
        e >>= 1;
    }
    return result;
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
inline std::vector<PPoly> berlekamp(const PPoly& f, long p) {
    const int n = ppoly_deg(f);
    if (n <= 1) return {f};
    // Frobenius matrix: column j holds x^{jp} mod f.
    std::vector<std::vector<long>> m(n, std::vector<long>(n, 0));
    PPoly xp = ppoly_xpow_mod(p, f, p);
    PPoly cur{1};
    for (int j = 0; j < n; ++j) {
        for (size_t i = 0; i < cur.size(); ++i) m[i][j] = cur[i];
        m[j][j] = (m[j][j] - 1 + p) % p;
        cur = ppoly_divmod(ppoly_mul(cur, xp, p), f, p).second;
    }
    // Kernel of (Frobenius - I); its dimension equals the factor count.
    std::vector<int> pivots;
    int rr = 0;
    for (int c = 0; c < n && rr < n; ++c) {
        int piv = -1;
        for (int i = rr; i < n; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[piv], m[rr]);
        const long inv = mod_inv(m[rr][c], p);
        for (int j = 0; j < n; ++j) m[rr][j] = m[rr][j] * inv % p;
        for (int i = 0; i < n; ++i) {
            if (i == rr || m[i][c] == 0) continue;
            const long fctr = m[i][c];
            for (int j = 0; j < n; ++j) {
                m[i][j] = (m[i][j] - fctr * m[rr][j]) % p;
                if (m[i][j] < 0) m[i][j] += p;
            }
        }
        pivots.push_back(c);
        ++rr;
    }
    std::vector<bool> is_piv(n, false);
    for (int c : pivots) is_piv[c] = true;
    std::vector<PPoly> kernel;
    for (int c = 0; c < n; ++c) {
        if (is_piv[c]) continue;
        PPoly v(n, 0);
        v[c] = 1;
        for (size_t r2 = 0; r2 < pivots.size(); ++r2)
            v[pivots[r2]] = (p - m[r2][c]) % p;
        ppoly_trim(v);
        kernel.push_back(std::move(v));
    }
    const size_t nfactors = kernel.size();
    std::vector<PPoly> factors{f};
    if (nfactors <= 1) return factors;
    for (const auto& v : kernel) {
        if (factors.size() >= nfactors) break;
        if (ppoly_deg(v) < 1) continue; // constant kernel vector splits nothing
        for (long s = 0; s < p && factors.size() < nfactors; ++s) {
            std::vector<PPoly> next;
            for (const auto& g : factors) {
                if (ppoly_deg(g) <= 1) {
                    next.push_back(g);
                    continue;
                }
                PPoly vs = v;
                vs[0] = ((vs[0] - s) % p + p) % p;
                ppoly_trim(vs);
                PPoly d = ppoly_gcd(g, ppoly_divmod(vs, g, p).second, p);
                if (ppoly_deg(d) > 0 && ppoly_deg(d) < ppoly_deg(g)) {
                    next.push_back(d);
                    next.push_back(ppoly_divmod(g, d, p).first);
                } else {
                    next.push_back(g);
                }
            }
            factors = std::move(next);
        }
    }
    if (factors.size() != nfactors)
        throw std::runtime_error("berlekamp: splitting did not reach the kernel count");
    return factors;
}

// ------------------------------------------------------------- integers ---

using ZPoly = std::vector<mpz_class>; // ascending

inline void zpoly_trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int zpoly_deg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

inline ZPoly zpoly_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    zpoly_trim(r);
    return r;
}

inline ZPoly zpoly_add(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    zpoly_trim(r);
    return r;
}

inline ZPoly zpoly_sub(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    zpoly_trim(r);
    return r;
}

inline mpz_class mod_sym(const mpz_class& a, const mpz_class& m) {
    mpz_class r = a % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

inline ZPoly zpoly_mod_sym(const ZPoly& f, const mpz_class& m) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = mod_sym(f[i], m);
    zpoly_trim(r);
    return r;
}

/// Division a = q*b + r with b monic; exact over Z.
inline std::pair<ZPoly, ZPoly> zpoly_divmod_monic(const ZPoly& a, const ZPoly& b) {
    ZPoly r = a, q;
    zpoly_trim(r);
    const int db = zpoly_deg(b);
    if (db < 0 || b.back() != 1) throw std::domain_error("zpoly: divisor must be monic");
    if (zpoly_deg(r) >= db) q.assign(zpoly_deg(r) - db + 1, mpz_class(0));
    while (zpoly_deg(r) >= db) {
        const int shift = zpoly_deg(r) - db;
        mpz_class f = r.back();
        q[shift] = f;
        for (int i = 0; i <= db; ++i) r[i + shift] -= f * b[i];
        zpoly_trim(r);
    }
    return {q, r};
}

struct HenselPair {
    ZPoly g, h, s, t;
};

/// One quadratic Hensel step: f = g*h and s*g + t*h = 1 (mod m) become the
/// same congruences mod m^2. g, h monic throughout.
inline HenselPair hensel_step(const ZPoly& f, const HenselPair& in, const mpz_class& m) {
    const mpz_class m2 = m * m;
    auto red = [&](const ZPoly& x) { return zpoly_mod_sym(x, m2); };
    const ZPoly e = red(zpoly_sub(f, zpoly_mul(in.g, in.h)));
    auto [q, r] = zpoly_divmod_monic(zpoly_mul(in.s, e), in.h);
    q = red(q);
    r = red(r);
    const ZPoly g1 = red(zpoly_add(in.g, zpoly_add(zpoly_mul(in.t, e), zpoly_mul(q, in.g))));
    const ZPoly h1 = red(zpoly_add(in.h, r));
    const ZPoly b =
        red(zpoly_sub(zpoly_add(zpoly_mul(in.s, g1), zpoly_mul(in.t, h1)), ZPoly{mpz_class(1)}));
    auto [c, d] = zpoly_divmod_monic(zpoly_mul(in.s, b), h1);
    c = red(c);
    d = red(d);
    const ZPoly s1 = red(zpoly_sub(in.s, d));
    const ZPoly t1 = red(zpoly_sub(in.t, zpoly_add(zpoly_mul(in.t, b), zpoly_mul(c, g1))));
    return {g1, h1, s1, t1};
}

/// Extended euclid over F_p for coprime (g, h): s*g + t*h = 1.
inline std::pair<PPoly, PPoly> ppoly_bezout(const PPoly& g, const PPoly& h, long p) {
    PPoly r0 = g, r1 = h;
    PPoly s0{1}, s1{}, t0{}, t1{1};
    ppoly_trim(r0);
    ppoly_trim(r1);
    while (!r1.empty()) {
        auto [q, r] = ppoly_divmod(r0, r1, p);
        auto comb = [&](const PPoly& a0, const PPoly& a1) {
            PPoly qa = ppoly_mul(q, a1, p);
            PPoly res(std::max(a0.size(), qa.size()), 0);
            for (size_t i = 0; i < a0.size(); ++i) res[i] = a0[i];
            for (size_t i = 0; i < qa.size(); ++i) res[i] = ((res[i] - qa[i]) % p + p) % p;
            ppoly_trim(res);
            return res;
        };
        PPoly s2 = comb(s0, s1), t2 = comb(t0, t1);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (ppoly_deg(r0) != 0) throw std::runtime_error("ppoly_bezout: inputs not coprime");
    const long inv = mod_inv(r0[0], p);
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    return {s0, t0};
}

inline ZPoly zpoly_from_ppoly(const PPoly& f, long p) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        long v = f[i] % p;
        if (2 * v > p) v -= p;
        r[i] = v;
    }
    zpoly_trim(r);
    return r;
}

/// Lifts the modular factorization f = prod(parts) mod p until the modulus
/// reaches `target`, returning one lifted (symmetric-residue) factor per part.
inline std::vector<ZPoly> hensel_lift_tree(const ZPoly& f, const std::vector<PPoly>& parts,
                                           long p, const mpz_class& target) {
    if (parts.size() == 1) return {f};
    const size_t half = parts.size() / 2;
    PPoly gp{1}, hp{1};
    for (size_t i = 0; i < half; ++i) gp = ppoly_mul(gp, parts[i], p);
    for (size_t i = half; i < parts.size(); ++i) hp = ppoly_mul(hp, parts[i], p);
    auto [sp, tp] = ppoly_bezout(gp, hp, p);
    HenselPair pair{zpoly_from_ppoly(gp, p), zpoly_from_ppoly(hp, p), zpoly_from_ppoly(sp, p),
                    zpoly_from_ppoly(tp, p)};
    mpz_class m(p);
    while (m < target) {
        pair = hensel_step(f, pair, m);
        m = m * m;
    }
    const std::vector<PPoly> left(parts.begin(), parts.begin() + half);
    const std::vector<PPoly> right(parts.begin() + half, parts.end());
    std::vector<ZPoly> out = hensel_lift_tree(pair.g, left, p, target);
    std::vector<ZPoly> rout = hensel_lift_tree(pair.h, right, p, target);
    out.insert(out.end(), rout.begin(), rout.end());
    return out;
}

inline bool is_prime_small(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Factors a monic squarefree integer polynomial into monic irreducibles.
inline std::vector<ZPoly> factor_monic_squarefree_int(const ZPoly& f) {
    const int n = zpoly_deg(f);
    if (n <= 1) return {f};
    auto reduce_mod = [&](long p) {
        PPoly fp(f.size());
        for (size_t i = 0; i < f.size(); ++i) {
            mpz_class c = f[i] % p;
            if (c < 0) c += p;
            fp[i] = c.get_si();
        }
        ppoly_trim(fp);
        return fp;
    };
    long p = 0;
    for (long cand = 3; cand < 100000; cand += 2) {
        if (!is_prime_small(cand)) continue;
        PPoly fp = reduce_mod(cand);
        if (ppoly_deg(fp) != n) continue;
        if (ppoly_deg(ppoly_gcd(fp, ppoly_deriv(fp, cand), cand)) == 0) {
            p = cand;
            break;
        }
    }
    if (p == 0) throw std::runtime_error("factor: no suitable prime found");
    std::vector<PPoly> modular = berlekamp(reduce_mod(p), p);
    if (modular.size() == 1) return {f};
    std::sort(modular.begin(), modular.end());
    // Bound on coefficients of any monic divisor of f.
    mpz_class height(0);
    for (const auto& c : f) {
        mpz_class a = abs(c);
        if (a > height) height = a;
    }
    const mpz_class bound = (mpz_class(1) << (n + 1)) * (n + 1) * height + 1;
    const mpz_class target = 2 * bound + 1;
    mpz_class modulus(p);
    while (modulus < target) modulus = modulus * modulus;
    std::vector<ZPoly> pool = hensel_lift_tree(f, modular, p, target);

    std::vector<ZPoly> result;
    ZPoly rem = f;
    size_t cs = 1;
    while (2 * cs <= pool.size()) {
        bool found = false;
        std::vector<size_t> pick(cs);
        // Lexicographic subsets of {0,..,pool.size()-1} of size cs.
        for (size_t i = 0; i < cs; ++i) pick[i] = i;
        for (;;) {
            ZPoly g{mpz_class(1)};
            for (size_t i : pick) g = zpoly_mod_sym(zpoly_mul(g, pool[i]), modulus);
            if (!g.empty() && g.back() == 1) {
                auto [q, r] = zpoly_divmod_monic(rem, g);
                if (r.empty()) {
                    result.push_back(g);
                    rem = std::move(q);
                    std::vector<ZPoly> next_pool;
                    for (size_t i = 0; i < pool.size(); ++i)
                        if (std::find(pick.begin(), pick.end(), i) == pick.end())
                            next_pool.push_back(pool[i]);
                    pool = std::move(next_pool);
                    found = true;
                    break;
                }
            }
            // advance combination
            int j = static_cast<int>(cs) - 1;
            while (j >= 0 && pick[j] == pool.size() - cs + j) --j;
            if (j < 0) break;
            ++pick[j];
            for (size_t l = j + 1; l < cs; ++l) pick[l] = pick[l - 1] + 1;
        }
        if (!found) ++cs;
    }
    if (zpoly_deg(rem) > 0) result.push_back(rem);
    std::sort(result.begin(), result.end(), [](const ZPoly& a, const ZPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return result;
}

} // namespace factor_detail

struct Factorization {
    Rational lead;                              ///< overall constant
    std::vector<std::pair<QPoly, int>> factors; ///< monic irreducible, multiplicity
};

/// Factors a rational polynomial into monic irreducible factors over Q.
inline Factorization factor_rational(const QPoly& f) {
    if (f.is_zero()) throw std::domain_error("factor_rational: zero polynomial");
    Factorization out;
    out.lead = f.lc();
    QPoly g = f.monic();
    if (g.degree() == 0) return out;
    for (const auto& [part, mult] : g.squarefree_decomposition()) {
        if (part.degree() == 0) continue;
        // Integerize: y = L*x turns a monic rational poly into a monic integer poly.
        mpz_class L(1);
        for (const auto& c : part.coeffs()) {
            mpz_class d = c.den(), gg;
            mpz_gcd(gg.get_mpz_t(), L.get_mpz_t(), d.get_mpz_t());
            L = L / gg * d;
        }
        const int n = part.degree();
        factor_detail::ZPoly zp(n + 1);
        for (int i = 0; i <= n; ++i) {
            mpz_class scale;
            mpz_pow_ui(scale.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(n - i));
            const Rational v = part.coeff(i) * Rational(scale);
            if (!v.is_integer()) throw std::logic_error("factor_rational: integerization failed");
            zp[i] = v.num();
        }
        for (const auto& zf : factor_detail::factor_monic_squarefree_int(zp)) {
            const int dg = factor_detail::zpoly_deg(zf);
            mpz_class ldg;
            mpz_pow_ui(ldg.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(dg));
            std::vector<Rational> coeffs(dg + 1);
            mpz_class lp(1);
            for (int i = 0; i <= dg; ++i) { // coefficient of x^i in zf(L*x)/L^dg
                coeffs[i] = Rational(zf[i] * lp, ldg);
                lp *= L;
            }
            out.factors.emplace_back(QPoly(std::move(coeffs)), mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        if (a.first.degree() == 1) return -a.first.coeff(0) < -b.first.coeff(0); // root order
        for (int i = a.first.degree(); i >= 0; --i)
            if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
        return a.second < b.second;
    });
    return out;
}

} // namespace iffquant
