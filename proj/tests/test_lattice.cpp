#include <catch2/catch_amalgamated.hpp>

#include <qorder/lattice.hpp>

#include "oracles.hpp"

#include <random>

using namespace qorder;

namespace {

QVec v2(long a, long b, long d = 1) { return {make_rat(a, d), make_rat(b, d)}; }

GramLattice zsqrt3() {  // Z + Z*sqrt(-3), coordinates over (1, sqrt(-3))
    QMat form = {{Rat(1), Rat(0)}, {Rat(0), Rat(3)}};
    return make_lattice(qmat_identity(2), form);
}

GramLattice z2() { return make_lattice(qmat_identity(2), qmat_identity(2)); }

GramLattice hurwitz_lattice() {
    QMat basis = {{Rat(1), Rat(0), Rat(0), Rat(0)},
                  {Rat(0), Rat(1), Rat(0), Rat(0)},
                  {Rat(0), Rat(0), Rat(1), Rat(0)},
                  {make_rat(1, 2), make_rat(1, 2), make_rat(1, 2), make_rat(1, 2)}};
    return make_lattice(basis, qmat_identity(4));
}

}  // namespace

TEST_CASE("hnf basis canonicalization") {
    QMat form1 = {{Rat(1)}};
    GramLattice L = hnf_basis({{Rat(2)}, {Rat(3)}}, form1);
    CHECK(L.basis == QMat{{Rat(1)}});

    // index-2 sublattice of Z^2; expected basis from integer row reduction:
    // {e1+e2, e1-e2, 2e2} spans rows of HNF [[1,1],[0,2]]
    GramLattice M = hnf_basis({v2(1, 1), v2(1, -1), v2(0, 2)}, qmat_identity(2));
    CHECK(M.basis == QMat{v2(1, 1), v2(0, 2)});
    CHECK(lattice_index(M, z2()) == 2);

    // unimodular shuffles of the Hurwitz basis give the identical canonical basis
    std::mt19937_64 rng(5);
    GramLattice H = hurwitz_lattice();
    QMat canon = hnf_rational(H.basis);
    for (int it = 0; it < 10; ++it) {
        QMat U = oracle::random_unimodular(4, rng);
        QMat shuffled = qmat_mul(U, H.basis);
        CHECK(qmat_equal(hnf_rational(shuffled), canon));
    }
    CHECK_THROWS(hnf_basis({v2(0, 0)}, qmat_identity(2)));
    // degenerate generators tolerated: zero vectors dropped, duplicates merged
    GramLattice D = hnf_basis({v2(0, 0), v2(1, 0), v2(1, 0), v2(0, 1)}, qmat_identity(2));
    CHECK(lattice_equal(D, z2()));
}

TEST_CASE("lattice sum") {
    GramLattice A = hnf_basis({v2(2, 0), v2(0, 2)}, qmat_identity(2));
    GramLattice B = hnf_basis({v2(3, 0), v2(0, 3)}, qmat_identity(2));
    CHECK(lattice_equal(lattice_sum(A, A), A));
    CHECK(lattice_equal(lattice_sum(A, B), z2()));  // gcd(2,3) = 1 in each coordinate
    GramLattice half = hnf_basis({v2(1, 0, 2)}, qmat_identity(2));
    GramLattice S = lattice_sum(z2(), make_lattice(QMat{v2(1, 0, 2), v2(0, 1)}, qmat_identity(2)));
    CHECK(S.basis == QMat{v2(1, 0, 2), v2(0, 1)});
    (void)half;
}

TEST_CASE("lattice index") {
    GramLattice Z2 = z2();
    CHECK(lattice_index(Z2, Z2) == 1);
    GramLattice L3 = hnf_basis({v2(3, 0), v2(0, 1)}, qmat_identity(2));
    CHECK(lattice_index(L3, Z2) == 3);
    CHECK_THROWS(lattice_index(Z2, L3));  // containment violated
}

TEST_CASE("closest points on the square lattice") {
    auto res = closest_points(z2(), {make_rat(1, 2), make_rat(1, 2)});
    CHECK(res.dist_sq == make_rat(1, 2));
    CHECK(res.points.size() == 4);
}

TEST_CASE("closest points on Z[sqrt(-3)]") {
    // target (1 + sqrt(-3))/2: equidistant from the four rectangle corners.
    // Expected values from the exhaustive box-search oracle.
    GramLattice L = zsqrt3();
    QVec target = {make_rat(1, 2), make_rat(1, 2)};
    auto [bd, bmins] = oracle::brute_cvp(L.gram, target);
    CHECK(bd == 1);
    CHECK(bmins.size() == 4);
    auto res = closest_points(L, target);
    CHECK(res.dist_sq == bd);
    CHECK(res.coeffs == bmins);
}

TEST_CASE("closest point at a lattice point") {
    auto res = closest_points(zsqrt3(), {Rat(2), Rat(-1)});
    CHECK(res.dist_sq == 0);
    CHECK(res.points.size() == 1);
}

TEST_CASE("cvp matches brute force on random lattices") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> rankd(1, 3), numd(-4, 4), dend(1, 3);
    for (int it = 0; it < 50; ++it) {
        size_t n = rankd(rng);
        QMat B = oracle::random_basis(n, rng);
        GramLattice L = make_lattice(B, qmat_identity(n));
        QVec t(n);
        for (auto& x : t) x = make_rat(numd(rng), dend(rng));
        auto [bd, bmins] = oracle::brute_cvp(L.gram, t);
        // library works in ambient coordinates; map target through the basis
        QVec amb(n, Rat(0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) amb[j] += t[i] * L.basis[i][j];
        auto res = closest_points(L, amb);
        CHECK(res.dist_sq == bd);
        CHECK(res.coeffs == bmins);
    }
}

TEST_CASE("successive minima") {
    auto prof = successive_minima(zsqrt3());
    CHECK(prof.lambdas_sq == std::vector<Rat>{Rat(1), Rat(3)});

    GramLattice Z4 = make_lattice(qmat_identity(4), qmat_identity(4));
    auto p4 = successive_minima(Z4);
    CHECK(p4.lambdas_sq == std::vector<Rat>{Rat(1), Rat(1), Rat(1), Rat(1)});

    auto ph = successive_minima(hurwitz_lattice());
    CHECK(ph.lambdas_sq == std::vector<Rat>{Rat(1), Rat(1), Rat(1), Rat(1)});
    // 24 unit vectors in the Hurwitz lattice
    CHECK(short_vectors(hurwitz_lattice(), Rat(1)).size() == 24);
}

TEST_CASE("covering radius of the square lattice") {
    auto rep = covering_radius(z2());
    CHECK(rep.covering_radius_sq == make_rat(1, 2));
    CHECK(rep.deep_holes.size() == 1);
    CHECK(rep.hole_coeffs[0] == QVec{make_rat(1, 2), make_rat(1, 2)});
}

TEST_CASE("covering radius of Z[sqrt(-3)] is exactly 1") {
    auto rep = covering_radius(zsqrt3());
    CHECK(rep.covering_radius_sq == 1);
    REQUIRE(rep.deep_holes.size() == 1);
    CHECK(rep.deep_holes[0] == QVec{make_rat(1, 2), make_rat(1, 2)});
}

TEST_CASE("covering radius of Z^4 (Lipschitz)") {
    GramLattice Z4 = make_lattice(qmat_identity(4), qmat_identity(4));
    auto rep = covering_radius(Z4);
    CHECK(rep.covering_radius_sq == 1);
    REQUIRE(rep.deep_holes.size() == 1);
    CHECK(rep.hole_coeffs[0] ==
          QVec{make_rat(1, 2), make_rat(1, 2), make_rat(1, 2), make_rat(1, 2)});
}

TEST_CASE("covering radius of the hexagonal lattice") {
    // Z[(1+sqrt(-3))/2]: mu^2 = 1/3 (triangle circumcenter)
    QMat basis = {{Rat(1), Rat(0)}, {make_rat(1, 2), make_rat(1, 2)}};
    QMat form = {{Rat(1), Rat(0)}, {Rat(0), Rat(3)}};
    auto rep = covering_radius(make_lattice(basis, form));
    CHECK(rep.covering_radius_sq == make_rat(1, 3));
    CHECK(rep.deep_holes.size() == 2);  // two triangle classes per cell
}

TEST_CASE("covering radius matches brute force on random lattices") {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> rankd(1, 3);
    for (int it = 0; it < 12; ++it) {
        size_t n = rankd(rng);
        QMat B = oracle::random_basis(n, rng, 2);
        GramLattice L = make_lattice(B, qmat_identity(n));
        auto [mu_sq, holes] = oracle::brute_covering(L.gram);
        auto rep = covering_radius(L);
        CHECK(rep.covering_radius_sq == mu_sq);
        CHECK(rep.hole_coeffs == holes);
    }
}

TEST_CASE("deep holes are genuine circumcenters") {
    // every hole is at distance >= mu from every lattice point, with equality
    // for at least rank+1 points
    std::mt19937_64 rng(303);
    for (int it = 0; it < 8; ++it) {
        size_t n = 1 + it % 3;
        GramLattice L = make_lattice(oracle::random_basis(n, rng, 2), qmat_identity(n));
        auto rep = covering_radius(L);
        for (auto& hole : rep.deep_holes) {
            auto res = closest_points(L, hole);
            CHECK(res.dist_sq == rep.covering_radius_sq);
            CHECK(res.points.size() >= n + 1);
        }
    }
}

TEST_CASE("covering radius invariances") {
    std::mt19937_64 rng(404);
    for (int it = 0; it < 10; ++it) {
        size_t n = 2 + it % 2;
        QMat B = oracle::random_basis(n, rng, 2);
        GramLattice L = make_lattice(B, qmat_identity(n));
        auto rep = covering_radius(L);
        // unimodular change of basis
        QMat U = oracle::random_unimodular(n, rng);
        GramLattice L2 = make_lattice(qmat_mul(U, B), qmat_identity(n));
        CHECK(covering_radius(L2).covering_radius_sq == rep.covering_radius_sq);
        // metric scaling by s^2 scales mu^2 by s^2
        QMat scaled_form = qmat_identity(n);
        for (size_t i = 0; i < n; ++i) scaled_form[i][i] = 9;
        GramLattice L3 = make_lattice(B, scaled_form);
        CHECK(covering_radius(L3).covering_radius_sq == 9 * rep.covering_radius_sq);
        // mu^2 >= lambda_rank^2 / 4
        auto prof = successive_minima(L);
        CHECK(rep.covering_radius_sq >= prof.lambdas_sq.back() / 4);
    }
}

TEST_CASE("minkowski check") {
    CHECK(minkowski_check(z2()));
    CHECK(minkowski_check(hurwitz_lattice()));
    std::mt19937_64 rng(505);
    for (int it = 0; it < 10; ++it) {
        QMat U = oracle::random_unimodular(3, rng);
        CHECK(minkowski_check(make_lattice(U, qmat_identity(3))));
    }
}
