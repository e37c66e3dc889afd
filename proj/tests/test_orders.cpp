#include <catch2/catch_amalgamated.hpp>

#include <qorder/orders.hpp>

#include "oracles.hpp"

#include <random>

using namespace qorder;

namespace {

const AlgebraDescriptor H11 = AlgebraDescriptor::quaternion(Rat(-1), Rat(-1));

QMat rows4(std::initializer_list<std::initializer_list<const char*>> rs) {
    QMat m;
    for (auto& r : rs) {
        QVec row;
        for (auto* s : r) row.push_back(parse_rat(s));
        m.push_back(row);
    }
    return m;
}

OrderLattice lipschitz() {
    return order_from_rows(H11, std::nullopt, rows4({{"1", "0", "0", "0"},
                                                     {"0", "1", "0", "0"},
                                                     {"0", "0", "1", "0"},
                                                     {"0", "0", "0", "1"}}));
}

OrderLattice hurwitz() {
    return order_from_rows(H11, std::nullopt, rows4({{"1", "0", "0", "0"},
                                                     {"0", "1", "0", "0"},
                                                     {"0", "0", "1", "0"},
                                                     {"1/2", "1/2", "1/2", "1/2"}}));
}

OrderLattice quad_order(long d, bool half) {
    AlgebraDescriptor K = AlgebraDescriptor::imaginary_quadratic(Rat(d));
    QMat rows = {{Rat(1), Rat(0)}, half ? QVec{make_rat(1, 2), make_rat(1, 2)} : QVec{Rat(0), Rat(1)}};
    return order_from_rows(K, std::nullopt, rows);
}

}  // namespace

TEST_CASE("validate accepts Lipschitz and Hurwitz") {
    CHECK_NOTHROW(lipschitz());
    CHECK_NOTHROW(hurwitz());
}

TEST_CASE("validate rejects ij/2 ring violation") {
    try {
        order_from_rows(H11, std::nullopt, rows4({{"1", "0", "0", "0"},
                                                  {"0", "1", "0", "0"},
                                                  {"0", "0", "1", "0"},
                                                  {"0", "0", "0", "1/2"}}));
        FAIL("expected not-closed");
    } catch (const order_error& e) {
        CHECK(e.kind == "not-closed");
    }
}

TEST_CASE("validate rejects basis without 1") {
    try {
        order_from_rows(H11, std::nullopt, rows4({{"2", "0", "0", "0"},
                                                  {"0", "1", "0", "0"},
                                                  {"0", "0", "1", "0"},
                                                  {"0", "0", "0", "1"}}));
        FAIL("expected missing-one");
    } catch (const order_error& e) {
        CHECK(e.kind == "missing-one");
    }
}

TEST_CASE("validate rejects rank-deficient basis") {
    try {
        order_from_rows(H11, std::nullopt, rows4({{"1", "0", "0", "0"},
                                                  {"0", "1", "0", "0"},
                                                  {"0", "2", "0", "0"},
                                                  {"0", "0", "0", "1"}}));
        FAIL("expected rank");
    } catch (const order_error& e) {
        CHECK(e.kind == "rank");
    }
}

TEST_CASE("reduced discriminants") {
    CHECK(reduced_discriminant(hurwitz()) == 2);
    CHECK(reduced_discriminant(lipschitz()) == 4);
    // maximal involution-stable order for the pair (2, -1) is the Hurwitz order
    InvolutionDescriptor inv = InvolutionDescriptor::orthogonal_ij(H11);
    OrderLattice Hs = order_from_rows(H11, inv, rows4({{"1", "0", "0", "0"},
                                                       {"0", "1", "0", "0"},
                                                       {"0", "0", "1", "0"},
                                                       {"1/2", "1/2", "1/2", "1/2"}}));
    CHECK(reduced_discriminant(Hs) == 2);
    CHECK(maximal_discriminant_target(Hs) == 2);
    CHECK(is_maximal(Hs));
}

TEST_CASE("index scaling of discriminants") {
    CHECK(lattice_index(lipschitz().lattice, hurwitz().lattice) == 2);
    CHECK(reduced_discriminant(lipschitz()) == 2 * reduced_discriminant(hurwitz()));
}

TEST_CASE("maximality flags") {
    CHECK(is_maximal(hurwitz()));
    CHECK_FALSE(is_maximal(lipschitz()));
    CHECK_FALSE(is_maximal(quad_order(3, false)));  // Z[sqrt(-3)]
    CHECK(is_maximal(quad_order(3, true)));         // Z[(1+sqrt(-3))/2]
    CHECK(is_maximal(quad_order(1, false)));        // Z[i]
    CHECK(is_maximal(quad_order(7, true)));
}

TEST_CASE("fixed sublattice") {
    InvolutionDescriptor inv = InvolutionDescriptor::orthogonal_ij(H11);
    OrderLattice L = order_from_rows(H11, inv, rows4({{"1", "0", "0", "0"},
                                                      {"0", "1", "0", "0"},
                                                      {"0", "0", "1", "0"},
                                                      {"0", "0", "0", "1"}}));
    FixedSublattice F = fixed_sublattice(L);
    CHECK(F.lattice.rank() == 3);
    QMat expected = {{Rat(1), Rat(0), Rat(0), Rat(0)},
                     {Rat(0), Rat(1), Rat(0), Rat(0)},
                     {Rat(0), Rat(0), Rat(1), Rat(0)}};
    CHECK(qmat_equal(hnf_rational(F.lattice.basis), expected));

    // Table 2 row: Z + Zi + Zj + Z(j+ij)/2 has fixed part Z + Zi + Zj
    AlgebraDescriptor H12 = AlgebraDescriptor::quaternion(Rat(-1), Rat(-2));
    InvolutionDescriptor inv12 = InvolutionDescriptor::orthogonal_ij(H12);
    OrderLattice O2 = order_from_rows(H12, inv12, rows4({{"1", "0", "0", "0"},
                                                         {"0", "1", "0", "0"},
                                                         {"0", "0", "1", "0"},
                                                         {"0", "0", "1/2", "1/2"}}));
    FixedSublattice F2 = fixed_sublattice(O2);
    CHECK(qmat_equal(hnf_rational(F2.lattice.basis), expected));

    // no involution: the order's own lattice
    FixedSublattice F3 = fixed_sublattice(lipschitz());
    CHECK(qmat_equal(F3.lattice.basis, lipschitz().lattice.basis));
}

TEST_CASE("involution stability is checked") {
    // conjugate the Hurwitz order by 1+i+j: still an order, no longer stable
    InvolutionDescriptor inv = InvolutionDescriptor::orthogonal_ij(H11);
    QuatElt g = vec_to_elt(H11, {Rat(1), Rat(1), Rat(1), Rat(0)});
    QMat rows;
    for (auto& b : hurwitz().basis) rows.push_back(elt_to_vec(multiply(multiply(g, b), inverse(g))));
    rows = hnf_rational(rows);
    CHECK_NOTHROW(order_from_rows(H11, std::nullopt, rows));  // valid as a plain order
    try {
        order_from_rows(H11, inv, rows);
        FAIL("expected stability rejection");
    } catch (const order_error& e) {
        CHECK(e.kind == "not-involution-stable");
    }
}

TEST_CASE("maximalize Lipschitz gives Hurwitz") {
    OrderLattice M = maximalize(lipschitz());
    CHECK(is_maximal(M));
    CHECK(lattice_equal(M.lattice, hurwitz().lattice));
    // already maximal: unchanged
    OrderLattice M2 = maximalize(hurwitz());
    CHECK(lattice_equal(M2.lattice, hurwitz().lattice));
}

TEST_CASE("maximalize the index-3 suborder from the dim-5 table") {
    // Z + 3Zi + Z(i-j) + Z(1+i+j+ij)/2
    OrderLattice O = order_from_rows(H11, std::nullopt, rows4({{"1", "0", "0", "0"},
                                                               {"0", "3", "0", "0"},
                                                               {"0", "1", "-1", "0"},
                                                               {"1/2", "1/2", "1/2", "1/2"}}));
    CHECK(lattice_index(O.lattice, hurwitz().lattice) == 3);
    OrderLattice M = maximalize(O);
    CHECK(is_maximal(M));
    CHECK(lattice_contains(M.lattice, O.lattice));
    CHECK(orders_isomorphic(M, hurwitz()));
}

TEST_CASE("maximalize a quadratic order") {
    OrderLattice M = maximalize(quad_order(3, false));
    CHECK(is_maximal(M));
    CHECK(lattice_equal(M.lattice, quad_order(3, true).lattice));
}

TEST_CASE("unit groups") {
    CHECK(unit_group(lipschitz()).elements.size() == 8);
    CHECK(unit_group(hurwitz()).elements.size() == 24);
    CHECK(unit_group(quad_order(3, false)).elements.size() == 2);
    CHECK(unit_group(quad_order(3, true)).elements.size() == 6);
    CHECK(unit_group(quad_order(1, false)).elements.size() == 4);
    auto U = unit_group(hurwitz());
    CHECK(unit_group_closed(hurwitz(), U));
}

TEST_CASE("orders_isomorphic basics") {
    CHECK(orders_isomorphic(lipschitz(), lipschitz()));
    CHECK(orders_isomorphic(hurwitz(), hurwitz()));
    CHECK_FALSE(orders_isomorphic(lipschitz(), hurwitz()));

    // conjugate of Lipschitz by a Hurwitz unit is isomorphic to Lipschitz
    QuatElt h = vec_to_elt(H11, {make_rat(1, 2), make_rat(1, 2), make_rat(1, 2), make_rat(1, 2)});
    OrderLattice L = lipschitz();
    QMat conj_rows;
    for (auto& b : L.basis) conj_rows.push_back(elt_to_vec(multiply(multiply(h, b), inverse(h))));
    OrderLattice Lc = order_from_rows(H11, std::nullopt, hnf_rational(conj_rows));
    CHECK(orders_isomorphic(Lc, L));
}

TEST_CASE("the two maximal involution-stable orders for (7,-7) are not isomorphic") {
    AlgebraDescriptor H17 = AlgebraDescriptor::quaternion(Rat(-1), Rat(-7));
    InvolutionDescriptor inv = InvolutionDescriptor::orthogonal_ij(H17);
    OrderLattice A = order_from_rows(H17, inv, rows4({{"1", "0", "0", "0"},
                                                      {"0", "1", "0", "0"},
                                                      {"0", "1/2", "1/2", "0"},
                                                      {"1/2", "0", "0", "1/2"}}));
    OrderLattice B = order_from_rows(H17, inv, rows4({{"1", "0", "0", "0"},
                                                      {"0", "1", "0", "0"},
                                                      {"1/2", "0", "1/2", "0"},
                                                      {"0", "1/2", "0", "1/2"}}));
    CHECK(is_maximal(A));
    CHECK(is_maximal(B));
    CHECK_FALSE(orders_isomorphic(A, B));
}

TEST_CASE("isomorphism is an equivalence on random conjugates") {
    std::mt19937_64 rng(77);
    std::vector<OrderLattice> orders;
    OrderLattice L = lipschitz();
    for (int k = 0; k < 3; ++k) {
        QuatElt g = oracle::random_element(H11, rng, 2, 1);
        if (g.is_zero()) g = QuatElt::one(H11);
        QMat rows;
        for (auto& b : L.basis) rows.push_back(elt_to_vec(multiply(multiply(g, b), inverse(g))));
        auto O = try_order(H11, std::nullopt, hnf_rational(rows));
        if (O) orders.push_back(*O);
    }
    orders.push_back(L);
    for (auto& A : orders) {
        CHECK(orders_isomorphic(A, A));  // reflexive
        for (auto& B : orders) {
            bool ab = orders_isomorphic(A, B);
            bool ba = orders_isomorphic(B, A);
            CHECK(ab == ba);  // symmetric
            CHECK(ab);        // all are conjugates of Lipschitz
        }
    }
}

TEST_CASE("fixed sublattice is pointwise fixed and contains 1") {
    AlgebraDescriptor H12 = AlgebraDescriptor::quaternion(Rat(-1), Rat(-2));
    InvolutionDescriptor inv = InvolutionDescriptor::orthogonal_ij(H12);
    OrderLattice O = order_from_rows(H12, inv, rows4({{"1", "0", "0", "0"},
                                                      {"0", "1", "0", "0"},
                                                      {"0", "0", "1", "0"},
                                                      {"0", "0", "1/2", "1/2"}}));
    FixedSublattice F = fixed_sublattice(O);
    CHECK(lattice_member(F.lattice, {Rat(1), Rat(0), Rat(0), Rat(0)}));
    for (auto& row : F.lattice.basis) {
        QuatElt e = vec_to_elt(H12, row);
        CHECK(apply_involution(inv, e) == e);
    }
}

TEST_CASE("ring closure") {
    // closure of {1, i, j, h} recovers the Hurwitz order
    QMat gens = {{Rat(1), Rat(0), Rat(0), Rat(0)},
                 {Rat(0), Rat(1), Rat(0), Rat(0)},
                 {Rat(0), Rat(0), Rat(1), Rat(0)},
                 {make_rat(1, 2), make_rat(1, 2), make_rat(1, 2), make_rat(1, 2)}};
    auto L = ring_closure(H11, gens);
    REQUIRE(L.has_value());
    CHECK(lattice_equal(*L, hurwitz().lattice));
    // i/2 is not integral: no order contains it
    QMat bad = {{Rat(1), Rat(0), Rat(0), Rat(0)}, {Rat(0), make_rat(1, 2), Rat(0), Rat(0)}};
    CHECK_FALSE(ring_closure(H11, bad).has_value());
}
