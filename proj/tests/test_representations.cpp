#include <catch2/catch_amalgamated.hpp>

#include <iffquant/representations.hpp>

using namespace iffquant;

TEST_CASE("density module") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation rep = density_rep(alg, Rational(1, 2), 1);
    CHECK(rep.dim == 1);
    // action of E = -(lambda+z) d
    CHECK(rep.action[0].at(0, 0) == Rational(-(3)) * Rational(3, 2));
    // h_0 acts by zero
    for (int j = 0; j < alg.dim_h0; ++j) CHECK(rep.action[1 + j].is_zero());
    CHECK(check_homomorphism(alg, rep));
    // trivial module
    const Representation triv = density_rep(alg, Rational(0), 0);
    for (const auto& m : triv.action) CHECK(m.is_zero());
}

TEST_CASE("standard module and functors") {
    const GradedAlgebra alg = build_conformal_algebra(2, 2);
    const Representation std_rep = standard_rep(alg);
    CHECK(std_rep.dim == alg.d);
    CHECK(std_rep.action[0] == Rational(-1) * DenseMat::identity(alg.d));
    CHECK(check_homomorphism(alg, std_rep));
    for (int j = 0; j < alg.dim_h0; ++j)
        CHECK(std_rep.action[1 + j] == ad_on_gm1_basis(alg, alg.idx_A(j)));

    const Representation dual_std = build_rep(alg, "dual(standard)");
    CHECK(dual_std.action[0] == DenseMat::identity(alg.d));
    CHECK(check_homomorphism(alg, dual_std));

    const Representation s2 = build_rep(alg, "sym2(standard)");
    CHECK(s2.dim == alg.d * (alg.d + 1) / 2);
    CHECK(check_homomorphism(alg, s2));

    const Representation e2 = build_rep(alg, "ext2(standard)");
    CHECK(e2.dim == alg.d * (alg.d - 1) / 2);
    CHECK(check_homomorphism(alg, e2));

    const Representation tens = build_rep(alg, "tensor(standard,density(-1/3,0))");
    CHECK(tens.dim == alg.d);
    CHECK(check_homomorphism(alg, tens));
    // Leibniz sum on the Euler element: -Id + (1/3) d Id = (d/3 - 1) Id
    CHECK(tens.action[0] ==
          (Rational(-1) + Rational(1, 3) * Rational(alg.d)) * DenseMat::identity(alg.d));
}

TEST_CASE("descriptor grammar") {
    CHECK(parse_descriptor("density(1/2,0)").to_string() == "density(1/2,0)");
    CHECK(parse_descriptor("tensor(standard,density(-1/3,0))").to_string() ==
          "tensor(standard,density(-1/3,0))");
    CHECK(parse_descriptor("sym2(standard)").to_string() == "sym2(standard)");
    CHECK(parse_descriptor("ext3(dual(standard))").to_string() == "ext3(dual(standard))");
    CHECK(parse_descriptor(" density( 1/2 , 0 ) ").to_string() == "density(1/2,0)");
    for (const char* bad : {"", "foo", "density(1/2)", "density(1/0,0)", "sym(standard)",
                            "tensor(standard)", "standard extra"}) {
        CHECK_THROWS_AS(parse_descriptor(bad), DescriptorParseError);
    }
    try {
        parse_descriptor("tensor(standard,bogus)");
        FAIL("expected parse error");
    } catch (const DescriptorParseError& ex) {
        CHECK(ex.column == 16); // 0-based offset of 'bogus'
    }
}

TEST_CASE("symbol space structure") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation v1 = density_rep(alg, Rational(1, 3));
    const Representation v2 = density_rep(alg, Rational(1, 2));

    SECTION("degree zero with equal densities is trivial") {
        const SymbolSpace sp = symbol_space(alg, v1, v1, 0);
        for (int t = 0; t < alg.g0_count(); ++t) CHECK(sp.rho_star[t].is_zero());
    }
    SECTION("dimensions and the rho split") {
        const SymbolSpace sp1 = symbol_space(alg, v1, v2, 1);
        CHECK(sp1.dim == alg.d * v1.dim * v2.dim);
        const Representation w1 = build_rep(alg, "tensor(standard,density(1/4,0))");
        const SymbolSpace sp2 = symbol_space(alg, w1, w1, 2);
        CHECK(sp2.dim == alg.d * alg.d * w1.dim * w1.dim);
        for (int t = 0; t < alg.g0_count(); ++t) {
            CHECK(sp2.rho_star[t] == sp2.rho_2_star[t] + sp2.rho_r_star[t]);
            for (int s = 0; s < alg.g0_count(); ++s)
                CHECK(sp2.rho_2_star[t] * sp2.rho_r_star[s] ==
                      sp2.rho_r_star[s] * sp2.rho_2_star[t]);
        }
    }
    SECTION("all three actions are homomorphisms") {
        const SymbolSpace sp = symbol_space(alg, standard_rep(alg), v2, 2);
        for (const auto* family : {&sp.rho_star, &sp.rho_r_star, &sp.rho_2_star}) {
            for (int s = 0; s < alg.g0_count(); ++s)
                for (int t = 0; t < alg.g0_count(); ++t) {
                    const AlgebraElement br =
                        alg.bracket_table[alg.g0_index(s)][alg.g0_index(t)];
                    SparseMat expected(sp.dim, sp.dim);
                    for (int u = 0; u < alg.g0_count(); ++u) {
                        const Rational& c = br[alg.g0_index(u)];
                        if (!c.is_zero()) expected = expected + c * (*family)[u];
                    }
                    CHECK((*family)[s] * (*family)[t] - (*family)[t] * (*family)[s] ==
                          expected);
                }
        }
    }
    SECTION("mixed algebras are rejected") {
        const GradedAlgebra other = build_projective_algebra(2);
        CHECK_THROWS_AS(symbol_space(alg, standard_rep(other), v2, 1), std::invalid_argument);
    }
}

TEST_CASE("symmetrization") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation v = density_rep(alg, Rational(2, 7));
    const SymbolSpace sp1 = symbol_space(alg, v, v, 1);
    CHECK(symmetrize_matrix(sp1) == SparseMat::identity(sp1.dim));
    const SymbolSpace sp2 = symbol_space(alg, v, v, 2);
    const SparseMat s = symmetrize_matrix(sp2);
    CHECK(s * s == s);
    for (int t = 0; t < alg.g0_count(); ++t)
        CHECK(s * sp2.rho_star[t] == sp2.rho_star[t] * s);
    const SparseMat embed = embed_symmetric_matrix(sp2);
    const SparseMat restr = restrict_symmetric_matrix(sp2);
    CHECK(restr * embed == SparseMat::identity(embed.cols()));
    // embedding lands in the symmetric subspace: S E = E
    CHECK(s * embed == embed);
    CHECK(embed.cols() == static_cast<int>(multiset_count(alg.d, 2)) * sp2.homdim);
}

TEST_CASE("parabolic action") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation dens = density_rep(alg, Rational(1, 4));
    // g_1 acts by zero
    CHECK(rho_prime_star(alg, alg.basis_element(alg.idx_eps(0)), dens).is_zero());
    // Euler on a density: scalar -(1/4) d
    const DenseMat e = rho_prime_star(alg, alg.basis_element(alg.idx_euler()), dens);
    CHECK(e.at(0, 0) == Rational(-3, 4));
    // linearity across g_0 + g_1
    AlgebraElement h(alg.dim_g(), Rational(0));
    h[alg.idx_A(0)] = Rational(1);
    h[alg.idx_eps(1)] = Rational(1);
    CHECK(rho_prime_star(alg, h, dens) ==
          rho_prime_star(alg, alg.basis_element(alg.idx_A(0)), dens));
    // g_{-1} component rejected
    AlgebraElement bad(alg.dim_g(), Rational(0));
    bad[alg.idx_e(0)] = Rational(1);
    CHECK_THROWS_AS(rho_prime_star(alg, bad, dens), std::invalid_argument);
}

TEST_CASE("weight bases diagonalize the Cartan set") {
    for (const auto& alg : {build_conformal_algebra(1, 2), build_conformal_algebra(2, 2),
                            build_projective_algebra(3)}) {
        const CartanSet cs = cartan_set(alg);
        CHECK_FALSE(cs.elements.empty());
        for (const char* desc :
             {"standard", "density(1/2,0)", "dual(standard)", "sym2(standard)",
              "ext2(standard)", "tensor(standard,density(-1/3,2))"}) {
            const Representation rep = build_rep(alg, desc);
            const WeightBasis wb = rep_weight_basis(alg, rep.desc, cs);
            INFO(alg.signature.to_string() << " " << desc);
            CHECK(weight_basis_valid(alg, rep, cs, wb));
        }
    }
}

TEST_CASE("only the combined determinant weight enters") {
    const GradedAlgebra alg = build_conformal_algebra(1, 2);
    const Representation a = density_rep(alg, Rational(1, 4), 2);
    const Representation b = density_rep(alg, Rational(9, 4), 0);
    CHECK(a.action == b.action);
}
