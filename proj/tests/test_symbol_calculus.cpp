#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <iffquant/symbol_calculus.hpp>

using namespace iffquant;

namespace {

Vec rand_vec(std::mt19937_64& rng, int n) {
    Vec v(n);
    for (auto& x : v) x = Rational(static_cast<long>(rng() % 11) - 5);
    return v;
}

/// Rebuilds an algebra with its h_0 basis permuted; used to check that
/// reported criticality does not depend on the basis ordering.
GradedAlgebra permute_h0(const GradedAlgebra& alg, const std::vector<int>& perm) {
    GradedAlgebra out = alg;
    const int n = alg.dim_g();
    std::vector<int> sigma(n);
    for (int a = 0; a < n; ++a) sigma[a] = a;
    for (int j = 0; j < alg.dim_h0; ++j) sigma[alg.idx_A(j)] = alg.idx_A(perm[j]);
    for (int a = 0; a < n; ++a) {
        out.labels[sigma[a]] = alg.labels[a];
        out.grading[sigma[a]] = alg.grading[a];
        if (alg.has_model()) out.model[sigma[a]] = alg.model[a];
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k)
                out.bracket_table[sigma[a]][sigma[b]][sigma[k]] = alg.bracket_table[a][b][k];
    out.killing = lie_detail::killing_matrix_from_constants(out);
    out.dual = compute_dual_basis(out);
    return out;
}

} // namespace

TEST_CASE("gamma on degree zero and one") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation dens = density_rep(alg, Rational(2, 5));
    SECTION("degree zero maps to zero") {
        SymbolSpace sp0 = symbol_space(alg, dens, dens, 0);
        const Vec img = gamma_apply(sp0, alg.basis_element(alg.idx_eps(0)), Vec{Rational(1)});
        CHECK(img.empty());
        CHECK(gamma_matrix(sp0, alg.basis_element(alg.idx_eps(1))).is_zero());
    }
    SECTION("degree one reproduces the bracket composition") {
        SymbolSpace sp1 = symbol_space(alg, dens, dens, 1);
        for (int r = 0; r < alg.d; ++r)
            for (int i = 0; i < alg.d; ++i) {
                Vec t(sp1.dim, Rational(0));
                t[sp1.index_of({i}, 0)] = Rational(1);
                const Vec img = gamma_apply(sp1, alg.basis_element(alg.idx_eps(r)), t);
                // gamma(eps^r)(e_i (x) 1) = -rho_1([eps^r, e_i])
                const AlgebraElement br = bracket(alg, alg.basis_element(alg.idx_eps(r)),
                                                  alg.basis_element(alg.idx_e(i)));
                const Rational expected = -rep_action(alg, dens, br).at(0, 0);
                REQUIRE(img.size() == 1);
                CHECK(img[0] == expected);
            }
    }
    SECTION("non-g1 elements are rejected") {
        SymbolSpace sp1 = symbol_space(alg, dens, dens, 1);
        CHECK_THROWS_AS(gamma_apply(sp1, alg.basis_element(alg.idx_euler()), Vec(sp1.dim)),
                        std::invalid_argument);
    }
}

TEST_CASE("gamma: defining sum, recursion and matrix agree") {
    std::mt19937_64 rng(101);
    for (const auto& alg : {build_conformal_algebra(1, 2), build_conformal_algebra(2, 2)}) {
        const Representation v1 = build_rep(alg, "tensor(standard,density(1/4,0))");
        const Representation v2 = density_rep(alg, Rational(-1, 3));
        for (int k = 1; k <= 3; ++k) {
            SymbolSpace sp = symbol_space(alg, v1, v2, k);
            attach_gamma(sp);
            for (int trial = 0; trial < 6; ++trial) {
                const Vec t = rand_vec(rng, sp.dim);
                AlgebraElement h(alg.dim_g(), Rational(0));
                h[alg.idx_eps(static_cast<int>(rng() % alg.d))] = Rational(1);
                h[alg.idx_eps(static_cast<int>(rng() % alg.d))] += Rational(2);
                const Vec a = gamma_apply(sp, h, t);
                const Vec b = gamma_apply_recursive(alg, v1, v2, k, h, t);
                CHECK(a == b);
                const Vec c = gamma_matrix(sp, h).apply(t);
                CHECK(a == c);
            }
        }
    }
}

TEST_CASE("gamma linearity and rank bound") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation dens = density_rep(alg, Rational(1, 3));
    SymbolSpace sp = symbol_space(alg, dens, dens, 2);
    AlgebraElement zero(alg.dim_g(), Rational(0));
    CHECK(gamma_matrix(sp, zero).is_zero());
    const SparseMat g = gamma_matrix(sp, alg.basis_element(alg.idx_eps(0)));
    CHECK(g.rows() == sp.dim / alg.d);
    CHECK(g.to_dense().rank() <= sp.dim / alg.d);
}

TEST_CASE("identity battery on sample spaces") {
    for (const auto& alg : {build_conformal_algebra(1, 2), build_projective_algebra(2)}) {
        const Representation v1 = density_rep(alg, Rational(1, 3));
        const Representation v2 = density_rep(alg, Rational(1, 2));
        SymbolSpace sp = symbol_space(alg, v1, v2, 2);
        attach_gamma(sp);
        const StructureReport rep = verify_identities(sp);
        for (const auto& c : rep.checks) {
            INFO(alg.signature.to_string() << ": " << c.name << " " << c.detail);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("flat casimir basics") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    SECTION("degree zero equal densities: zero operator") {
        const Representation dens = density_rep(alg, Rational(1, 3));
        SymbolSpace sp0 = symbol_space(alg, dens, dens, 0);
        CHECK(cflat_matrix(sp0).is_zero());
    }
    SECTION("degree-zero value (d/2) delta (1+delta) on a density pair") {
        const Rational delta(1, 6);
        SymbolSpace sp0 = symbol_space(alg, density_rep(alg, Rational(1, 3)),
                                       density_rep(alg, Rational(1, 3) + delta), 0);
        const SparseMat c = cflat_matrix(sp0);
        CHECK(c.to_dense().at(0, 0) == Rational(alg.d, 2) * delta * (Rational(1) + delta));
    }
}

TEST_CASE("spectral split") {
    SECTION("identity matrix") {
        const SpectralDecomposition dec = spectral_split(DenseMat::identity(4));
        REQUIRE(dec.components.size() == 1);
        CHECK(dec.components[0].dim == 4);
        CHECK(dec.components[0].eigenvalue == Rational(1));
        CHECK(dec.components[0].projection == DenseMat::identity(4));
    }
    SECTION("diag(2,2,3)") {
        DenseMat d(3, 3);
        d.at(0, 0) = Rational(2);
        d.at(1, 1) = Rational(2);
        d.at(2, 2) = Rational(3);
        const SpectralDecomposition dec = spectral_split(d);
        REQUIRE(dec.components.size() == 2);
        CHECK(dec.components[0].dim == 2);
        CHECK(dec.components[1].dim == 1);
        CHECK(dec.charpoly == d.charpoly());
        // projections resolve the identity and are idempotent
        DenseMat sum(3, 3);
        for (const auto& c : dec.components) {
            CHECK(c.projection * c.projection == c.projection);
            sum = sum + c.projection;
        }
        CHECK(sum == DenseMat::identity(3));
    }
    SECTION("irrational eigenvalues keyed by factors") {
        DenseMat m(2, 2); // companion of x^2 - 2
        m.at(0, 1) = Rational(2);
        m.at(1, 0) = Rational(1);
        const SpectralDecomposition dec = spectral_split(m);
        REQUIRE(dec.components.size() == 1);
        CHECK(dec.components[0].factor == QPoly({-2, 0, 1}));
        CHECK_FALSE(dec.components[0].eigenvalue.has_value());
        CHECK(dec.components[0].dim == 2);
    }
    SECTION("non-semisimple input is rejected") {
        DenseMat j(2, 2);
        j.at(0, 0) = Rational(1);
        j.at(0, 1) = Rational(1);
        j.at(1, 1) = Rational(1);
        CHECK_THROWS_AS(spectral_split(j), NonSemisimpleError);
    }
    SECTION("flat casimir on k=1 standard pair fills the space") {
        const GradedAlgebra alg = build_conformal_algebra(1, 2);
        const Representation std_rep = standard_rep(alg);
        SymbolSpace sp = symbol_space(alg, std_rep, std_rep, 1);
        const SparseMat c = cflat_matrix(sp);
        const QPoly mu = cflat_minimal_polynomial(sp, c);
        const SpectralDecomposition dec = spectral_split(c.to_dense(), mu);
        int total = 0;
        for (const auto& comp : dec.components) total += comp.dim;
        CHECK(total == 27);
    }
}

TEST_CASE("blocked minimal polynomial matches the plain one") {
    const GradedAlgebra alg = build_conformal_algebra(2, 2);
    const Representation v1 = build_rep(alg, "tensor(standard,density(1/4,0))");
    const Representation v2 = density_rep(alg, Rational(3, 7));
    SymbolSpace sp = symbol_space(alg, v1, v2, 2);
    const SparseMat c = cflat_matrix(sp);
    CHECK(cflat_minimal_polynomial(sp, c) == minimal_polynomial(c));
}

TEST_CASE("tree subspaces") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation v1 = density_rep(alg, Rational(1, 3));
    const Representation v2 = density_rep(alg, Rational(5, 6));
    const int k = 2;
    const SymbolTower tower = build_symbol_tower(alg, v1, v2, k);
    const SpectralDecomposition dec = symmetric_cflat_split(tower, k);
    for (const auto& comp : dec.components) {
        const auto trees = tree_subspaces(tower, k, comp, k + 2);
        REQUIRE(trees.size() == static_cast<size_t>(k + 3));
        CHECK(trees[0].basis == comp.basis);
        for (const auto& ts : trees) {
            if (ts.level > k) CHECK(ts.dim() == 0); // gamma exhausts the degree
            if (ts.level >= 1 && ts.level <= k)
                CHECK(ts.dim() <= alg.d * trees[ts.level - 1].dim());
        }
    }
}

TEST_CASE("criticality detection") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Rational lam(1, 3);
    SECTION("degree zero is never critical") {
        const CriticalityReport rep = criticality_report(
            alg, density_rep(alg, lam), density_rep(alg, Rational(7, 2)), 0);
        CHECK_FALSE(rep.overall_critical);
        for (const auto& c : rep.components) CHECK(c.tree_spectra.empty());
    }
    SECTION("known critical and noncritical shifts at k=1") {
        // the single k=1 component collides with the degree-0 eigenvalue
        // exactly at shift -1 (for a nonzero source weight)
        const CriticalityReport bad = criticality_report(
            alg, density_rep(alg, lam), density_rep(alg, lam + Rational(-1)), 1);
        CHECK(bad.overall_critical);
        for (const Rational& delta : std::initializer_list<Rational>{Rational(0), Rational(1, 2), Rational(2)}) {
            const CriticalityReport good = criticality_report(
                alg, density_rep(alg, lam), density_rep(alg, lam + delta), 1);
            CHECK_FALSE(good.overall_critical);
        }
    }
    SECTION("k=2 critical set on a shift grid") {
        std::vector<std::string> found;
        for (int r = -12; r <= 6; ++r) {
            const Rational delta(r, 6);
            const CriticalityReport rep = criticality_report(
                alg, density_rep(alg, lam), density_rep(alg, lam + delta), 2);
            if (rep.overall_critical) found.push_back(delta.to_string());
        }
        CHECK(found == std::vector<std::string>{"-1", "-5/6", "-2/3"});
    }
    SECTION("invariant under h_0 relabeling") {
        const GradedAlgebra perm = permute_h0(alg, {2, 0, 1});
        CHECK(verify_structure(perm).all_pass());
        for (const Rational& delta : std::initializer_list<Rational>{Rational(-1), Rational(1, 2)}) {
            const CriticalityReport a = criticality_report(
                alg, density_rep(alg, lam), density_rep(alg, lam + delta), 1);
            const CriticalityReport b = criticality_report(
                perm, density_rep(perm, lam), density_rep(perm, lam + delta), 1);
            CHECK(a.overall_critical == b.overall_critical);
            REQUIRE(a.components.size() == b.components.size());
            for (size_t i = 0; i < a.components.size(); ++i) {
                CHECK(a.components[i].factor == b.components[i].factor);
                CHECK(a.components[i].dim == b.components[i].dim);
                CHECK(a.components[i].critical == b.components[i].critical);
            }
        }
    }
    SECTION("invariant under rescaling the module basis") {
        // conjugate the source module by an invertible diagonal map
        const Representation v1 = build_rep(alg, "tensor(standard,density(1/4,0))");
        Representation scaled = v1;
        DenseMat s(v1.dim, v1.dim), sinv(v1.dim, v1.dim);
        for (int i = 0; i < v1.dim; ++i) {
            s.at(i, i) = Rational(i + 2, 3);
            sinv.at(i, i) = Rational(3, i + 2);
        }
        for (auto& m : scaled.action) m = sinv * m * s;
        REQUIRE(check_homomorphism(alg, scaled));
        const Representation v2 = density_rep(alg, Rational(1, 2));
        const CriticalityReport a = criticality_report(alg, v1, v2, 1);
        const CriticalityReport b = criticality_report(alg, scaled, v2, 1);
        CHECK(a.overall_critical == b.overall_critical);
        REQUIRE(a.components.size() == b.components.size());
        for (size_t i = 0; i < a.components.size(); ++i) {
            CHECK(a.components[i].factor == b.components[i].factor);
            CHECK(a.components[i].critical == b.components[i].critical);
        }
    }
}

TEST_CASE("gamma is linear in the g_1 argument") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation v = build_rep(alg, "tensor(standard,density(1/5,0))");
    SymbolSpace sp = symbol_space(alg, v, v, 2);
    const AlgebraElement h1 = alg.basis_element(alg.idx_eps(0));
    const AlgebraElement h2 = alg.basis_element(alg.idx_eps(2));
    const AlgebraElement combo =
        vec_add(vec_scale(Rational(3), h1), vec_scale(Rational(-1, 2), h2));
    CHECK(gamma_matrix(sp, combo) ==
          Rational(3) * gamma_matrix(sp, h1) + Rational(-1, 2) * gamma_matrix(sp, h2));
}

TEST_CASE("identity battery degenerates gracefully at degree zero") {
    const GradedAlgebra alg = build_projective_algebra(2);
    SymbolSpace sp0 =
        symbol_space(alg, density_rep(alg, Rational(1, 3)), density_rep(alg, Rational(2, 3)), 0);
    const StructureReport rep = verify_identities(sp0);
    for (const auto& c : rep.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
}
