#pragma once

// Semi-Euclidean structure: coprimality, the division step, order
// classification (Euclidean / semi / neither), the matrix decomposition
// algorithm into triangular factors, and certificate verification for
// GL/SL and their twisted versions.

#include "orders.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qorder {

// 2x2 matrix over a quaternion algebra or quadratic field.
struct Mat2 {
    QuatElt a, b, c, d;

    static Mat2 identity(const AlgebraDescriptor& alg) {
        return {QuatElt::one(alg), QuatElt::zero(alg), QuatElt::zero(alg), QuatElt::one(alg)};
    }
    const AlgebraDescriptor& alg() const { return a.alg; }
    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool is_upper_triangular() const { return c.is_zero(); }
    bool is_lower_triangular() const { return b.is_zero(); }
    bool is_triangular() const { return is_upper_triangular() || is_lower_triangular(); }
};

inline Mat2 mat2_mul(const Mat2& X, const Mat2& Y) {
    return {multiply(X.a, Y.a) + multiply(X.b, Y.c), multiply(X.a, Y.b) + multiply(X.b, Y.d),
            multiply(X.c, Y.a) + multiply(X.d, Y.c), multiply(X.c, Y.b) + multiply(X.d, Y.d)};
}

// sigma-hat((a b; c d)) = (s(d) -s(b); -s(c) s(a)), with sigma the orthogonal
// involution in dim 4 and the identity in the commutative dim-3 case (where
// sigma-hat(M) M = det(M) * I).
inline Mat2 sigma_hat(const Mat2& M, const std::optional<InvolutionDescriptor>& inv) {
    auto s = [&](const QuatElt& x) { return inv ? apply_involution(*inv, x) : x; };
    return {s(M.d), -s(M.b), -s(M.c), s(M.a)};
}

enum class SlMembership { Sl, GlUnit, None };

struct SlMembershipResult {
    SlMembership kind = SlMembership::None;
    QuatElt unit;  // the central unit for GlUnit
};

namespace detail {

inline bool is_scalar_mat(const Mat2& M, QuatElt& scalar) {
    if (!M.b.is_zero() || !M.c.is_zero() || M.a != M.d) return false;
    scalar = M.a;
    return true;
}

// Inverse of M over the ambient algebra via the 8x8 (or 4x4) rational system,
// nullopt if singular.
inline std::optional<Mat2> mat2_inverse(const Mat2& M) {
    const AlgebraDescriptor& alg = M.alg();
    size_t n = ambient_dim(alg);
    // unknowns: coordinates of x, y, z, w in M^{-1} = (x y; z w); equations
    // from M * Inv = I, giving two independent systems for the columns.
    auto solve_column = [&](const QuatElt& r1, const QuatElt& r2) -> std::optional<std::pair<QuatElt, QuatElt>> {
        // solve a*x + b*z = r1, c*x + d*z = r2 for x, z
        QMat A = qmat_zero(2 * n, 2 * n);
        QVec rhs(2 * n);
        // multiplication by an element on the left is a linear map on coords
        auto fill = [&](const QuatElt& coef, size_t block_row, size_t block_col) {
            for (size_t k = 0; k < n; ++k) {
                QVec e(n, Rat(0));
                e[k] = 1;
                QuatElt prod = multiply(coef, vec_to_elt(alg, e));
                QVec pv = elt_to_vec(prod);
                for (size_t r = 0; r < n; ++r) A[block_row * n + r][block_col * n + k] = pv[r];
            }
        };
        fill(M.a, 0, 0);
        fill(M.b, 0, 1);
        fill(M.c, 1, 0);
        fill(M.d, 1, 1);
        QVec v1 = elt_to_vec(r1), v2 = elt_to_vec(r2);
        for (size_t r = 0; r < n; ++r) { rhs[r] = v1[r]; rhs[n + r] = v2[r]; }
        auto sol = qmat_solve(A, rhs);
        if (!sol) return std::nullopt;
        QVec xv(sol->begin(), sol->begin() + n), zv(sol->begin() + n, sol->end());
        return std::make_pair(vec_to_elt(alg, xv), vec_to_elt(alg, zv));
    };
    auto col1 = solve_column(QuatElt::one(alg), QuatElt::zero(alg));
    auto col2 = solve_column(QuatElt::zero(alg), QuatElt::one(alg));
    if (!col1 || !col2) return std::nullopt;
    return Mat2{col1->first, col2->first, col1->second, col2->second};
}

}  // namespace detail

// Membership in SL / GL for the group attached to the order's dimension:
// the sigma-hat condition in dims 3 and 4, invertibility over the order
// (Dieudonne determinant of reduced norm 1) in dim 5.
inline SlMembershipResult sl_sigma_membership(const Mat2& M, const OrderLattice& O) {
    SlMembershipResult res;
    res.unit = QuatElt::one(M.alg());
    for (const QuatElt* e : {&M.a, &M.b, &M.c, &M.d})
        if (!O.contains(*e)) return res;  // None
    if (O.dim() == 5) {
        auto inv = detail::mat2_inverse(M);
        if (!inv) return res;
        for (const QuatElt* e : {&inv->a, &inv->b, &inv->c, &inv->d})
            if (!O.contains(*e)) return res;
        res.kind = SlMembership::Sl;
        return res;
    }
    Mat2 S = sigma_hat(M, O.involution);
    Mat2 P = mat2_mul(S, M), Q = mat2_mul(M, S);
    QuatElt u = QuatElt::zero(M.alg()), v = QuatElt::zero(M.alg());
    if (!detail::is_scalar_mat(P, u) || !detail::is_scalar_mat(Q, v) || u != v) return res;
    if (u == QuatElt::one(M.alg())) {
        res.kind = SlMembership::Sl;
        return res;
    }
    // central unit of the order
    bool central = u.alg.is_quadratic() || u.is_scalar();
    if (central && reduced_norm(u) == 1 && O.contains(u)) {
        res.kind = SlMembership::GlUnit;
        res.unit = u;
    }
    return res;
}

// --- coprimality and division ------------------------------------------------

inline bool are_coprime(const QuatElt& a, const QuatElt& b, const OrderLattice& O) {
    if (!O.contains(a) || !O.contains(b))
        throw std::invalid_argument("are_coprime: elements outside the order");
    QMat gens;
    for (auto& e : O.basis) {
        gens.push_back(elt_to_vec(multiply(a, e)));
        gens.push_back(elt_to_vec(multiply(b, e)));
    }
    QMat H = hnf_rational(gens);
    return qmat_equal(H, hnf_rational(O.lattice.basis));
}

struct not_semi_euclidean_witness : std::runtime_error {
    QuatElt rho;
    Rat dist_sq;
    not_semi_euclidean_witness(QuatElt rho_, Rat d)
        : std::runtime_error("division impossible: target at squared distance " + rat_str(d) +
                             " > 1 from the division lattice"),
          rho(std::move(rho_)),
          dist_sq(std::move(d)) {}
};

struct classification_contradiction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct involution_branch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DivBranch { Interior, DeepHoleUnit };

struct DivisionResult {
    QuatElt q, r;
    DivBranch branch;
};

// Division step: a = b q + r with nrm(r) < nrm(b), q in the division lattice
// (the order itself, or its fixed part in dim 4).  rho = b^{-1} a; if rho is
// strictly inside a unit ball around the lattice the closest point serves as
// q; exactly on the boundary forces nrm(b) = 1 and the unit branch.
inline DivisionResult div_step(const QuatElt& a, const QuatElt& b, const OrderLattice& O) {
    if (b.is_zero()) throw std::invalid_argument("div_step: b = 0");
    if (!are_coprime(a, b, O)) throw std::invalid_argument("div_step: aO + bO != O");
    FixedSublattice F = fixed_sublattice(O);
    if (O.involution) {
        QuatElt ab = multiply(a, apply_involution(*O.involution, b));
        if (!lattice_member(F.lattice, elt_to_vec(ab)))
            throw involution_branch_error("div_step: a * b^dd is not in O^+");
    }
    QuatElt rho = multiply(inverse(b), a);
    auto res = closest_points(F.lattice, elt_to_vec(rho));
    if (res.dist_sq < 1) {
        // deterministic choice: lexicographically smallest coefficient vector
        QuatElt q = vec_to_elt(O.alg, res.points.front());
        QuatElt r = a - multiply(b, q);
        if (!(reduced_norm(r) < reduced_norm(b)))
            throw std::logic_error("div_step: contract nrm(r) < nrm(b) violated");
        return {q, r, DivBranch::Interior};
    }
    if (res.dist_sq == 1) {
        if (reduced_norm(b) != 1)
            throw classification_contradiction(
                "div_step: target on the unit boundary with nrm(b) = " + rat_str(reduced_norm(b)) +
                " != 1");
        QuatElt q = multiply(conjugate_standard(b), a);  // b^{-1} = conj(b) when nrm(b) = 1
        if (!O.contains(q)) throw classification_contradiction("div_step: unit-branch q outside O");
        if (O.involution && !lattice_member(F.lattice, elt_to_vec(q)))
            throw involution_branch_error("div_step: unit-branch q outside O^+");
        return {q, QuatElt::zero(O.alg), DivBranch::DeepHoleUnit};
    }
    throw not_semi_euclidean_witness(rho, res.dist_sq);
}

// --- classification -----------------------------------------------------------

enum class OrderClass { EuclideanByNorm, SemiEuclidean, NotSemiEuclidean };

inline const char* order_class_name(OrderClass c) {
    switch (c) {
        case OrderClass::EuclideanByNorm: return "euclidean-by-norm";
        case OrderClass::SemiEuclidean: return "semi-euclidean";
        case OrderClass::NotSemiEuclidean: return "not-semi-euclidean";
    }
    return "?";
}

struct ClassifyResult {
    OrderClass cls;
    DeepHoleReport holes;  // of the division lattice
    QMat holes_norm1;      // one norm-1 representative per hole class (mu^2 = 1 only)
    bool anomaly = false;  // a mu = 1 hole failed the norm-1 / superorder conditions
    std::string anomaly_detail;
    std::vector<OrderLattice> hole_superorders;  // one maximal (stable) order per hole
};

// Find a maximal (involution-stable) order containing both O and the element
// alpha; nullopt when the ring they generate is not an order.
inline std::optional<OrderLattice> maximal_order_containing(const OrderLattice& O,
                                                            const QuatElt& alpha) {
    QMat gens = O.lattice.basis;
    gens.push_back(elt_to_vec(alpha));
    if (O.involution) gens.push_back(elt_to_vec(apply_involution(*O.involution, alpha)));
    auto closed = ring_closure(O.alg, gens);
    if (!closed) return std::nullopt;
    auto R = try_order(O.alg, O.involution, closed->basis);
    if (!R) return std::nullopt;
    OrderLattice M = maximalize(*R);
    if (!is_maximal(M)) return std::nullopt;
    if (!lattice_contains(M.lattice, O.lattice)) return std::nullopt;
    if (!M.contains(alpha)) return std::nullopt;
    return M;
}

inline ClassifyResult classify_order(const OrderLattice& O) {
    ClassifyResult out;
    GramLattice Lambda = euclidean_target_lattice(O);
    out.holes = covering_radius(Lambda);
    const Rat& mu_sq = out.holes.covering_radius_sq;
    if (mu_sq < 1) {
        out.cls = OrderClass::EuclideanByNorm;
        return out;
    }
    if (mu_sq > 1) {
        out.cls = OrderClass::NotSemiEuclidean;
        return out;
    }
    // mu^2 = 1: semi iff every deep hole class has a norm-1 representative
    // lying in a maximal (stable) order containing O.  Each class always has
    // norm-1 representatives (translate by a closest lattice vector), so the
    // superorder condition carries the content; the norm check is kept as a
    // guard.
    out.cls = OrderClass::SemiEuclidean;
    for (auto& hole : out.holes.deep_holes) {
        auto res = closest_points(Lambda, hole);
        QuatElt alpha = vec_to_elt(O.alg, qvec_sub(hole, res.points.front()));
        out.holes_norm1.push_back(elt_to_vec(alpha));
        if (reduced_norm(alpha) != 1) {
            out.anomaly = true;
            out.anomaly_detail = "deep hole " + elt_str(alpha) + " has norm " +
                                 rat_str(reduced_norm(alpha)) + " != 1";
            return out;
        }
        auto sup = maximal_order_containing(O, alpha);
        if (!sup) {
            out.anomaly = true;
            out.anomaly_detail =
                "deep hole " + elt_str(alpha) + " lies in no maximal order containing O";
            return out;
        }
        out.hole_superorders.push_back(std::move(*sup));
    }
    return out;
}

// --- decomposition (triangular factorization) ---------------------------------

struct DecompositionCertificate {
    std::vector<Mat2> factors;  // product equals the decomposed matrix exactly
    bool sl_conjugation_applied = false;
};

inline Mat2 certificate_product(const DecompositionCertificate& cert, const AlgebraDescriptor& alg) {
    Mat2 P = Mat2::identity(alg);
    for (auto& f : cert.factors) P = mat2_mul(P, f);
    return P;
}

inline bool verify_certificate(const Mat2& M, const DecompositionCertificate& cert,
                               const OrderLattice& O) {
    for (auto& f : cert.factors) {
        if (!f.is_triangular()) return false;
        for (const QuatElt* e : {&f.a, &f.b, &f.c, &f.d})
            if (!O.contains(*e)) return false;
    }
    return certificate_product(cert, M.alg()) == M;
}

struct membership_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Triangular factorization by the semi-Euclidean algorithm.  The lower-left
// stathm values strictly decrease across division steps, which bounds the
// factor count; the descent is asserted on every run.
inline DecompositionCertificate decompose(const Mat2& M, const OrderLattice& O) {
    const AlgebraDescriptor& alg = M.alg();
    if (!(alg == O.alg)) throw std::invalid_argument("decompose: algebra mismatch");
    auto membership = sl_sigma_membership(M, O);
    if (membership.kind == SlMembership::None)
        throw membership_error("decompose: matrix is not in GL over the order");

    auto phi = [](const QuatElt& x) { return reduced_norm(x); };  // the stathm
    QuatElt one = QuatElt::one(alg), zero = QuatElt::zero(alg);
    Mat2 gamma = M;
    // gamma_fin = M * X_1 * ... * X_m, so M = gamma_fin * X_m^{-1} ... X_1^{-1}:
    // record one factor group per step and emit them in reverse order.
    std::vector<std::vector<Mat2>> steps;
    std::optional<Rat> last_d_phi;
    while (!gamma.c.is_zero()) {
        if (gamma.d.is_zero() || phi(gamma.c) < phi(gamma.d)) {
            // swap the lower entries; the three recorded factors multiply to
            // the swap matrix (0 1; 1 0), which is its own inverse
            Mat2 swap{zero, one, one, zero};
            gamma = mat2_mul(gamma, swap);
            steps.push_back({Mat2{one, one, zero, one}, Mat2{one, zero, -one, one},
                             Mat2{-one, one, zero, one}});
            if (gamma.c.is_zero()) break;
        }
        DivisionResult dv = div_step(gamma.c, gamma.d, O);  // c = d q + r
        // strict descent of the stathm of the divisor between division steps
        Rat dphi = phi(gamma.d);
        if (!(phi(gamma.c) >= dphi)) throw std::logic_error("decompose: swap invariant broken");
        if (last_d_phi && !(dphi < *last_d_phi))
            throw std::logic_error("decompose: stathm descent violated");
        last_d_phi = dphi;
        Mat2 step{one, zero, -dv.q, one};
        gamma = mat2_mul(gamma, step);
        if (gamma.c != dv.r) throw std::logic_error("decompose: residue mismatch");
        steps.push_back({Mat2{one, zero, dv.q, one}});
    }
    DecompositionCertificate cert;
    cert.factors.push_back(gamma);  // terminal upper-triangular factor
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        cert.factors.insert(cert.factors.end(), it->begin(), it->end());
    if (!verify_certificate(M, cert, O)) throw std::logic_error("decompose: product check failed");
    return cert;
}

// Rewrite a certificate so that every factor beyond a leading triangular one
// passes the SL test; diagonal unit corrections are migrated to the front and
// merged into the leading factor, preserving the product exactly.
inline DecompositionCertificate to_sl_factors(const DecompositionCertificate& cert,
                                              const OrderLattice& O) {
    if (cert.factors.empty()) return cert;
    const AlgebraDescriptor& alg = cert.factors.front().alg();
    Mat2 original = certificate_product(cert, alg);
    std::vector<Mat2> fs = cert.factors;
    bool changed = false;
    for (size_t i = 1; i < fs.size(); ++i) {
        auto mem = sl_sigma_membership(fs[i], O);
        if (mem.kind == SlMembership::Sl) continue;
        if (mem.kind == SlMembership::None)
            throw membership_error("to_sl_factors: factor outside GL over the order");
        QuatElt u = mem.unit;
        bool central = u.alg.is_quadratic() || u.is_scalar();
        if (!central)
            throw membership_error("to_sl_factors: non-central unit, normalization infeasible");
        // split f = D * f' with D = diag(u, 1); f' passes the SL test
        QuatElt uinv = inverse(u);
        fs[i] = Mat2{multiply(uinv, fs[i].a), multiply(uinv, fs[i].b), fs[i].c, fs[i].d};
        // migrate D to the front: each factor between the leading one and
        // position i becomes D^{-1} f D = (a, u^{-1} b; u c, d) for central u
        for (size_t k = i; k-- > 1;)
            fs[k] = Mat2{fs[k].a, multiply(uinv, fs[k].b), multiply(u, fs[k].c), fs[k].d};
        changed = true;
        // merge D into the leading factor: f0 * diag(u, 1)
        fs[0] = Mat2{multiply(fs[0].a, u), fs[0].b, multiply(fs[0].c, u), fs[0].d};
    }
    DecompositionCertificate out;
    out.factors = std::move(fs);
    out.sl_conjugation_applied = changed;
    if (certificate_product(out, alg) != original)
        throw std::logic_error("to_sl_factors: product changed");
    return out;
}

}  // namespace qorder
