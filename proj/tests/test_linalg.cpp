#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <iffquant/linalg.hpp>

using namespace iffquant;

namespace {
DenseMat rand_mat(std::mt19937_64& rng, int n, int m) {
    DenseMat a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a.at(i, j) = Rational(static_cast<long>(rng() % 7) - 3);
    return a;
}
} // namespace

TEST_CASE("rref, kernel, solve, inverse") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 2 + static_cast<int>(rng() % 5);
        const DenseMat a = rand_mat(rng, n, m);
        const DenseMat ker = a.kernel();
        CHECK(ker.cols() == m - a.rank());
        for (int c = 0; c < ker.cols(); ++c) CHECK(vec_is_zero(a.apply(ker.col(c))));
        // consistent system: b in the column space
        Vec x0(m);
        for (int j = 0; j < m; ++j) x0[j] = Rational(static_cast<long>(rng() % 5) - 2);
        const Vec b = a.apply(x0);
        auto x = a.solve(b);
        REQUIRE(x.has_value());
        CHECK(a.apply(*x) == b);
    }
    SECTION("inconsistent system") {
        DenseMat a(2, 1);
        a.at(0, 0) = Rational(1);
        CHECK_FALSE(a.solve(Vec{Rational(0), Rational(1)}).has_value());
    }
    SECTION("inverse certificate") {
        std::mt19937_64 rng2(9);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 2 + static_cast<int>(rng2() % 4);
            DenseMat a = rand_mat(rng2, n, n);
            auto inv = a.inverse();
            if (!inv) continue;
            CHECK(a * *inv == DenseMat::identity(n));
            CHECK(*inv * a == DenseMat::identity(n));
        }
    }
}

TEST_CASE("characteristic polynomial") {
    DenseMat a(2, 2);
    a.at(0, 0) = Rational(2);
    a.at(0, 1) = Rational(1);
    a.at(1, 1) = Rational(3);
    CHECK(a.charpoly() == QPoly({6, -5, 1}));
    // trace/determinant read off a random 3x3
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const DenseMat m = rand_mat(rng, 3, 3);
        const QPoly cp = m.charpoly();
        CHECK(cp.degree() == 3);
        CHECK(cp.coeff(3) == Rational(1));
        CHECK(cp.coeff(2) == -m.trace());
        // Cayley-Hamilton
        CHECK(poly_eval_matrix(cp, m).is_zero());
    }
}

TEST_CASE("minimal polynomial is certified") {
    SECTION("diagonal") {
        DenseMat d(3, 3);
        d.at(0, 0) = Rational(2);
        d.at(1, 1) = Rational(2);
        d.at(2, 2) = Rational(3);
        CHECK(minimal_polynomial(d) == QPoly({6, -5, 1}));
    }
    SECTION("jordan block is caught") {
        DenseMat j(2, 2);
        j.at(0, 0) = Rational(1);
        j.at(0, 1) = Rational(1);
        j.at(1, 1) = Rational(1);
        const QPoly mu = minimal_polynomial(j);
        CHECK(mu == QPoly({1, -2, 1})); // (x-1)^2
        CHECK_FALSE(mu.is_squarefree());
    }
    SECTION("annihilates random matrices") {
        std::mt19937_64 rng(29);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const DenseMat m = rand_mat(rng, n, n);
            const QPoly mu = minimal_polynomial(m);
            CHECK(poly_eval_matrix(mu, m).is_zero());
            CHECK(QPoly::divmod(m.charpoly(), mu).second.is_zero());
        }
    }
}

TEST_CASE("column space basis is reduced and deterministic") {
    DenseMat cols(3, 4);
    cols.at(0, 0) = Rational(1);
    cols.at(1, 0) = Rational(2);
    cols.at(0, 1) = Rational(2);
    cols.at(1, 1) = Rational(4);
    cols.at(2, 2) = Rational(5);
    cols.at(2, 3) = Rational(1);
    auto [basis, pivots] = column_space_basis(cols);
    REQUIRE(basis.cols() == 2);
    CHECK(pivots == std::vector<int>{0, 2});
    // pivot rows are unit rows
    for (size_t r = 0; r < pivots.size(); ++r)
        for (int c = 0; c < basis.cols(); ++c)
            CHECK(basis.at(pivots[r], c) == (static_cast<int>(r) == c ? Rational(1) : Rational(0)));
}

TEST_CASE("sparse matrices agree with dense") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const DenseMat a = rand_mat(rng, 4, 5);
        const DenseMat b = rand_mat(rng, 5, 3);
        const SparseMat sa = SparseMat::from_dense(a);
        const SparseMat sb = SparseMat::from_dense(b);
        CHECK((sa * sb).to_dense() == a * b);
        CHECK((sa + sa).to_dense() == a + a);
        CHECK((Rational(3) * sa).to_dense() == Rational(3) * a);
        Vec v(5);
        for (auto& x : v) x = Rational(static_cast<long>(rng() % 5) - 2);
        CHECK(sa.apply(v) == a.apply(v));
    }
}
