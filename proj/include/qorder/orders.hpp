#pragma once

// Orders and involution-stable orders as lattices with ring structure:
// validation, reduced discriminants, maximality, fixed sublattices,
// enlargement to maximal orders, unit groups, isomorphism testing.

#include "lattice.hpp"
#include "qarith.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qorder {

struct order_error : std::runtime_error {
    std::string kind;  // "missing-one" | "not-closed" | "rank" | "not-involution-stable" | ...
    order_error(std::string kind_, const std::string& what_)
        : std::runtime_error(what_), kind(std::move(kind_)) {}
};

// Ambient coordinates: (1, i, j, ij) for quaternion algebras with the reduced
// norm form diag(1, -a, -b, ab); (1, sqrt(-d)) with diag(1, d) for the
// quadratic case.
inline QMat ambient_norm_form(const AlgebraDescriptor& alg) {
    if (alg.is_quadratic()) {
        QMat f = qmat_zero(2, 2);
        f[0][0] = 1;
        f[1][1] = -alg.b;  // b = -d
        return f;
    }
    QMat f = qmat_zero(4, 4);
    f[0][0] = 1;
    f[1][1] = -alg.a;
    f[2][2] = -alg.b;
    f[3][3] = alg.a * alg.b;
    return f;
}

inline size_t ambient_dim(const AlgebraDescriptor& alg) { return alg.is_quadratic() ? 2 : 4; }

inline QVec elt_to_vec(const QuatElt& u) {
    if (u.alg.is_quadratic()) return {u.x, u.z};
    return {u.x, u.y, u.z, u.t};
}

inline QuatElt vec_to_elt(const AlgebraDescriptor& alg, const QVec& v) {
    if (alg.is_quadratic()) return {alg, v[0], Rat(0), v[1], Rat(0)};
    return {alg, v[0], v[1], v[2], v[3]};
}

struct OrderLattice {
    AlgebraDescriptor alg;
    std::optional<InvolutionDescriptor> involution;
    std::vector<QuatElt> basis;  // rank elements; rank = 2 (quadratic) or 4
    GramLattice lattice;         // norm-form metric over the ambient coordinates

    size_t rank() const { return basis.size(); }
    int dim() const {
        if (alg.is_quadratic()) return 3;
        return involution ? 4 : 5;
    }
    bool contains(const QuatElt& u) const { return lattice_member(lattice, elt_to_vec(u)); }
};

namespace detail {

inline std::vector<QuatElt> rows_to_elts(const AlgebraDescriptor& alg, const QMat& rows) {
    std::vector<QuatElt> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.push_back(vec_to_elt(alg, r));
    return out;
}

}  // namespace detail

// Build and check an order from basis elements: full rank, contains 1,
// closed under multiplication on basis pairs (sufficient for ring closure),
// and stable under the involution when one is attached.
inline OrderLattice validate_order(const AlgebraDescriptor& alg,
                                   std::optional<InvolutionDescriptor> involution,
                                   const std::vector<QuatElt>& basis_elts) {
    size_t n = ambient_dim(alg);
    QMat rows;
    for (auto& e : basis_elts) {
        if (e.alg != alg) throw order_error("algebra-mismatch", "basis element in wrong algebra");
        rows.push_back(elt_to_vec(e));
    }
    if (rows.size() != n || qmat_rank(rows) != n)
        throw order_error("rank", "basis does not have full rank " + std::to_string(n));
    GramLattice L = make_lattice(rows, ambient_norm_form(alg));

    QVec one(n, Rat(0));
    one[0] = 1;
    if (!lattice_member(L, one)) throw order_error("missing-one", "order does not contain 1");

    for (size_t i = 0; i < basis_elts.size(); ++i)
        for (size_t j = 0; j < basis_elts.size(); ++j) {
            QuatElt p = multiply(basis_elts[i], basis_elts[j]);
            if (!lattice_member(L, elt_to_vec(p)))
                throw order_error("not-closed", "not multiplicatively closed: b" + std::to_string(i + 1) +
                                                    "*b" + std::to_string(j + 1) + " = " + elt_str(p) +
                                                    " outside the lattice");
        }
    if (involution) {
        if (alg.is_quadratic()) throw order_error("involution", "involution on a quadratic order");
        for (auto& e : basis_elts) {
            QuatElt img = apply_involution(*involution, e);
            if (!lattice_member(L, elt_to_vec(img)))
                throw order_error("not-involution-stable", "O is not involution-stable: " + elt_str(e) +
                                                               " maps outside");
        }
    }
    OrderLattice O;
    O.alg = alg;
    O.involution = std::move(involution);
    O.basis = basis_elts;
    O.lattice = std::move(L);
    return O;
}

inline OrderLattice order_from_rows(const AlgebraDescriptor& alg,
                                    std::optional<InvolutionDescriptor> inv, const QMat& rows) {
    return validate_order(alg, std::move(inv), detail::rows_to_elts(alg, rows));
}

// Non-throwing variant for bulk candidate filtering.
inline std::optional<OrderLattice> try_order(const AlgebraDescriptor& alg,
                                             std::optional<InvolutionDescriptor> inv,
                                             const QMat& rows) {
    try {
        return order_from_rows(alg, std::move(inv), rows);
    } catch (const order_error&) {
        return std::nullopt;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

// Canonicalize the basis (HNF) without re-validating.
inline OrderLattice canonicalize_order(const OrderLattice& O) {
    OrderLattice C = O;
    QMat H = hnf_rational(O.lattice.basis);
    C.lattice = make_lattice(H, O.lattice.form);
    C.basis = detail::rows_to_elts(O.alg, H);
    return C;
}

// Reduced discriminant: for quaternion orders, sqrt|det(trd(b_i b_j))|, an
// integer that scales by the index under sublattice passage.  For quadratic
// orders, |det(tr(b_i b_j))| = |disc| (which scales by the index squared).
inline Int reduced_discriminant(const OrderLattice& O) {
    size_t n = O.rank();
    QMat T = qmat_zero(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) T[i][j] = reduced_trace(multiply(O.basis[i], O.basis[j]));
    Rat det = qmat_det(T);
    if (det == 0) throw order_error("degenerate", "degenerate trace form");
    Rat a = abs(det);
    if (O.alg.is_quadratic()) {
        if (!is_integer(a)) throw order_error("degenerate", "non-integral quadratic discriminant");
        return num(a);
    }
    auto r = exact_sqrt(a);
    if (!r || !is_integer(*r))
        throw order_error("degenerate", "trace form determinant is not a perfect square");
    return num(*r);
}

// Reduced discriminant of a maximal order / maximal involution-stable order.
inline Int maximal_discriminant_target(const OrderLattice& O) {
    if (O.alg.is_quadratic()) {
        Int d = squarefree_part(-O.alg.b);
        return abs(quadratic_field_discriminant(d));
    }
    Int dH = algebra_discriminant(O.alg);
    if (!O.involution) return dH;
    Int m = abs(O.involution->disc);
    return lcm(dH, m);
}

inline bool is_maximal(const OrderLattice& O) {
    return reduced_discriminant(O) == maximal_discriminant_target(O);
}

struct FixedSublattice {
    GramLattice lattice;  // rank 3 inside the 4-dim ambient when an involution is present
    QMat coeff_basis;     // rows: coefficient vectors w.r.t. the parent basis
};

namespace detail {

// Unimodular U with a*U = (g, 0, ..., 0); used for integral kernels and for
// completing a primitive vector to a basis.
inline std::pair<Int, ZMat> gcd_transform(const ZVec& a) {
    size_t n = a.size();
    ZMat U(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;
    ZVec v = a;
    // sweep pairs (0, k), folding each coordinate into slot 0
    for (size_t k = 1; k < n; ++k) {
        if (v[k] == 0) continue;
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(), v[k].get_mpz_t());
        Int p = v[0] / g, q = v[k] / g;
        // columns 0 and k of U transform by [[s, -q],[t, p]] (det = s*p + t*q = 1)
        for (size_t r = 0; r < n; ++r) {
            Int c0 = U[r][0], ck = U[r][k];
            U[r][0] = c0 * s + ck * t;
            U[r][k] = -c0 * q + ck * p;
        }
        v[0] = g;
        v[k] = 0;
    }
    if (v[0] < 0) {
        for (size_t r = 0; r < n; ++r) U[r][0] = -U[r][0];
        v[0] = -v[0];
    }
    return {v[0], U};
}

}  // namespace detail

// Exact kernel lattice of x -> x^dd - x intersected with O.  With no
// involution this is O itself.
inline FixedSublattice fixed_sublattice(const OrderLattice& O) {
    if (!O.involution) {
        FixedSublattice F;
        F.lattice = O.lattice;
        F.coeff_basis = qmat_identity(O.rank());
        return F;
    }
    // x = sum c_i b_i is fixed iff its ij-coordinate vanishes:
    // sum c_i (b_i)_t = 0.  Clear denominators and take the integer kernel.
    size_t n = O.rank();
    ZVec a(n);
    Int D = 1;
    for (size_t i = 0; i < n; ++i) D = lcm(D, den(O.basis[i].t));
    for (size_t i = 0; i < n; ++i) a[i] = num(O.basis[i].t * Rat(D));
    auto [g, U] = detail::gcd_transform(a);
    if (g == 0) throw order_error("degenerate", "involution acts trivially");
    // kernel basis: columns 1..n-1 of U (as coefficient vectors)
    QMat coeffs;
    for (size_t c = 1; c < n; ++c) {
        QVec row(n);
        for (size_t r = 0; r < n; ++r) row[r] = Rat(U[r][c]);
        coeffs.push_back(std::move(row));
    }
    QMat amb;
    for (auto& c : coeffs) {
        QVec pt(O.lattice.dim(), Rat(0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < O.lattice.dim(); ++j) pt[j] += c[i] * O.lattice.basis[i][j];
        amb.push_back(std::move(pt));
    }
    FixedSublattice F;
    F.coeff_basis = hnf_rational(coeffs);
    QMat amb_h;
    for (auto& c : F.coeff_basis) {
        QVec pt(O.lattice.dim(), Rat(0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < O.lattice.dim(); ++j) pt[j] += c[i] * O.lattice.basis[i][j];
        amb_h.push_back(std::move(pt));
    }
    F.lattice = make_lattice(amb_h, O.lattice.form);
    return F;
}

// The lattice whose covering radius drives every Euclidean question:
// O itself in dims 3 and 5, the fixed sublattice O^+ in dim 4.
inline GramLattice euclidean_target_lattice(const OrderLattice& O) {
    return fixed_sublattice(O).lattice;
}

// --- ring closure -----------------------------------------------------------

// Smallest multiplicatively closed lattice containing the generators (which
// must include 1).  Fails (nullopt) if a non-integral element appears or the
// covolume falls below that of a maximal order, i.e. the generators do not
// lie in any common order.
inline std::optional<GramLattice> ring_closure(const AlgebraDescriptor& alg, const QMat& gens_in,
                                               int max_iter = 24) {
    QMat form = ambient_norm_form(alg);
    Rat covol_floor;  // covol^2 of a maximal order: (disc/4)^2; quadratic: |d_K|/4
    if (alg.is_quadratic()) {
        Int d = abs(quadratic_field_discriminant(squarefree_part(-alg.b)));
        covol_floor = Rat(d) / 4;
    } else {
        Rat d = Rat(algebra_discriminant(alg)) / 4;
        covol_floor = d * d;
    }
    QMat gens = gens_in;
    GramLattice L = hnf_basis(gens, form);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        std::vector<QuatElt> elts = detail::rows_to_elts(alg, L.basis);
        for (auto& e : elts)
            if (!is_integral(e)) return std::nullopt;
        QMat grown = L.basis;
        for (size_t i = 0; i < elts.size(); ++i)
            for (size_t j = 0; j < elts.size(); ++j) {
                QuatElt p = multiply(elts[i], elts[j]);
                if (!is_integral(p)) return std::nullopt;
                QVec v = elt_to_vec(p);
                if (L.rank() == ambient_dim(alg) && lattice_member(L, v)) continue;
                grown.push_back(v);
                changed = true;
            }
        if (!changed && L.rank() == ambient_dim(alg)) return L;
        if (!changed) return std::nullopt;  // stuck below full rank
        L = hnf_basis(grown, form);
        if (L.rank() == ambient_dim(alg) && covolume_sq(L) < covol_floor) return std::nullopt;
    }
    return std::nullopt;
}

// --- maximalization ---------------------------------------------------------

// Saturation at primes dividing disc(O)/disc(max): adjoin integral elements
// of (1/p)O that generate a strictly larger order; with an involution, the
// element and its image are adjoined together so stability is preserved.
inline OrderLattice maximalize(const OrderLattice& O) {
    OrderLattice cur = canonicalize_order(O);
    Int target = maximal_discriminant_target(O);
    size_t n = cur.rank();
    while (true) {
        Int disc = reduced_discriminant(cur);
        if (disc == target) return cur;
        bool enlarged = false;
        Int ratio = (disc % target == 0) ? Int(disc / target) : disc;
        for (const Int& p : primes_dividing(ratio)) {
            // enumerate nonzero classes c in (Z/p)^n
            std::vector<Int> c(n, 0);
            auto advance = [&]() {
                for (size_t i = 0; i < n; ++i) {
                    c[i] += 1;
                    if (c[i] < p) return true;
                    c[i] = 0;
                }
                return false;
            };
            while (advance()) {
                QVec xv(cur.lattice.dim(), Rat(0));
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < cur.lattice.dim(); ++j)
                        xv[j] += make_rat(c[i], 1) / Rat(p) * cur.lattice.basis[i][j];
                QuatElt x = vec_to_elt(cur.alg, xv);
                if (!is_integral(x)) continue;
                if (cur.contains(x)) continue;
                QMat gens = cur.lattice.basis;
                gens.push_back(xv);
                if (cur.involution) gens.push_back(elt_to_vec(apply_involution(*cur.involution, x)));
                auto closed = ring_closure(cur.alg, gens);
                if (!closed) continue;
                if (cur.involution) {
                    // closure of an involution-stable generating set is stable;
                    // re-check defensively.
                    bool stable = true;
                    for (auto& row : closed->basis) {
                        QuatElt e = vec_to_elt(cur.alg, row);
                        if (!lattice_member(*closed, elt_to_vec(apply_involution(*cur.involution, e)))) {
                            stable = false;
                            break;
                        }
                    }
                    if (!stable) continue;
                }
                OrderLattice next;
                next.alg = cur.alg;
                next.involution = cur.involution;
                next.lattice = *closed;
                next.basis = detail::rows_to_elts(cur.alg, closed->basis);
                if (reduced_discriminant(next) < disc) {
                    cur = canonicalize_order(next);
                    enlarged = true;
                    break;
                }
            }
            if (enlarged) break;
        }
        if (!enlarged) return cur;  // caller checks maximality; staying put is reported upstream
    }
}

// --- unit group --------------------------------------------------------------

struct UnitGroup {
    std::vector<QuatElt> elements;  // all norm-1 elements of the order
};

inline UnitGroup unit_group(const OrderLattice& O) {
    auto shorts = short_vectors(O.lattice, Rat(1));
    UnitGroup U;
    for (auto& [c, nsq] : shorts) {
        if (nsq != 1) continue;
        QVec amb(O.lattice.dim(), Rat(0));
        for (size_t i = 0; i < O.rank(); ++i)
            for (size_t j = 0; j < O.lattice.dim(); ++j) amb[j] += c[i] * O.lattice.basis[i][j];
        U.elements.push_back(vec_to_elt(O.alg, amb));
    }
    std::sort(U.elements.begin(), U.elements.end(), [](const QuatElt& a, const QuatElt& b) {
        return elt_to_vec(a) < elt_to_vec(b);
    });
    return U;
}

inline bool unit_group_closed(const OrderLattice& O, const UnitGroup& U) {
    auto member = [&](const QuatElt& x) {
        return std::find(U.elements.begin(), U.elements.end(), x) != U.elements.end();
    };
    if (!member(QuatElt::one(O.alg)) || !member(-QuatElt::one(O.alg))) return false;
    for (auto& a : U.elements) {
        if (!member(inverse(a))) return false;
        for (auto& b : U.elements)
            if (!member(multiply(a, b))) return false;
    }
    return true;
}

// --- isomorphism testing ------------------------------------------------------

namespace detail {

// Complete the coefficient vector of 1 to a basis of O so that the first
// basis vector is exactly 1.
inline QMat basis_starting_with_one(const OrderLattice& O) {
    size_t n = O.rank();
    auto c = span_coordinates(O.lattice, elt_to_vec(QuatElt::one(O.alg)));
    ZVec a(n);
    for (size_t i = 0; i < n; ++i) a[i] = num((*c)[i]);
    auto [g, U] = gcd_transform(a);
    if (g != 1) throw order_error("missing-one", "1 is not primitive in the order");
    // a*U = e_1, so the basis B' = U^{-1} B has coords(1, B') = a*U = e_1:
    // the first vector of B' is exactly 1.
    QMat Uq = qmat_zero(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) Uq[i][j] = Rat(U[i][j]);
    QMat rows = qmat_mul(*qmat_inverse(Uq), O.lattice.basis);
    return rows;
}

}  // namespace detail

// Isomorphisms from O1 onto O2: algebra isomorphisms carrying O1 to O2 (and
// intertwining the involutions when present), found by backtracking over
// norm-isometries that fix 1, are multiplicative on a basis, and map onto O2.
// Each is returned as the ambient coordinate matrix T with phi(x) = x * T on
// row vectors.  Requires both orders to live in the same algebra model.
inline std::vector<QMat> order_isomorphisms(const OrderLattice& O1, const OrderLattice& O2,
                                            size_t max_count = 1) {
    std::vector<QMat> found;
    if (O1.dim() != O2.dim()) return found;
    if (O1.involution.has_value() != O2.involution.has_value()) return found;
    if (O1.alg != O2.alg)
        throw order_error("model-mismatch",
                          "order_isomorphisms requires both orders in the same algebra model");
    if (O1.involution && !(O1.involution->norm_xi == O2.involution->norm_xi)) return found;
    if (reduced_discriminant(O1) != reduced_discriminant(O2)) return found;
    if (O1.alg.is_quadratic()) {  // same discriminant <=> same quadratic order
        found.push_back(qmat_identity(2));
        return found;
    }

    // basis of O1 beginning with 1
    QMat b1 = detail::basis_starting_with_one(O1);
    std::vector<QuatElt> src = detail::rows_to_elts(O1.alg, b1);
    GramLattice L1 = make_lattice(b1, O1.lattice.form);
    size_t n = src.size();

    // candidate images by norm
    std::vector<std::vector<QuatElt>> candidates(n);
    for (size_t i = 1; i < n; ++i) {
        Rat nn = reduced_norm(src[i]);
        for (auto& [c, nsq] : short_vectors(O2.lattice, nn)) {
            if (nsq != nn) continue;
            QVec amb(O2.lattice.dim(), Rat(0));
            for (size_t k = 0; k < O2.rank(); ++k)
                for (size_t j = 0; j < O2.lattice.dim(); ++j) amb[j] += c[k] * O2.lattice.basis[k][j];
            candidates[i].push_back(vec_to_elt(O2.alg, amb));
        }
    }
    std::vector<QuatElt> img(n, QuatElt::one(O1.alg));
    const QMat& form = O1.lattice.form;
    auto pair_inner = [&](const QuatElt& x, const QuatElt& y) {
        return form_inner(form, elt_to_vec(x), elt_to_vec(y));
    };
    auto accept = [&]() -> bool {
        // lattice equality: images must span exactly O2
        QMat rows;
        for (auto& e : img) rows.push_back(elt_to_vec(e));
        if (qmat_rank(rows) != n) return false;
        if (!qmat_equal(hnf_rational(rows), hnf_rational(O2.lattice.basis))) return false;
        // ring homomorphism on the basis
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                QuatElt p = multiply(src[i], src[j]);
                auto pc = span_coordinates(L1, elt_to_vec(p));
                QuatElt expect = QuatElt::zero(O1.alg);
                for (size_t k = 0; k < n; ++k) expect = expect + (*pc)[k] * img[k];
                if (multiply(img[i], img[j]) != expect) return false;
            }
        if (O1.involution) {
            for (size_t i = 0; i < n; ++i) {
                QuatElt s = apply_involution(*O1.involution, src[i]);
                auto sc = span_coordinates(L1, elt_to_vec(s));
                QuatElt expect = QuatElt::zero(O1.alg);
                for (size_t k = 0; k < n; ++k) expect = expect + (*sc)[k] * img[k];
                if (apply_involution(*O2.involution, img[i]) != expect) return false;
            }
        }
        // phi(x) = x * T with B1 * T = Img
        QMat T = qmat_mul(*qmat_inverse(b1), rows);
        found.push_back(std::move(T));
        return true;
    };
    auto backtrack = [&](auto&& self, size_t level) -> bool {
        if (level == n) {
            accept();
            return found.size() >= max_count;
        }
        for (auto& cand : candidates[level]) {
            bool ok = true;
            for (size_t k = 0; k < level; ++k)
                if (pair_inner(img[k], cand) != pair_inner(src[k], src[level])) { ok = false; break; }
            // traces must match for a ring map: trd is determined by the pairing
            if (ok && reduced_trace(cand) != reduced_trace(src[level])) ok = false;
            if (!ok) continue;
            img[level] = cand;
            if (self(self, level + 1)) return true;
        }
        return false;
    };
    backtrack(backtrack, 1);
    return found;
}

inline bool orders_isomorphic(const OrderLattice& O1, const OrderLattice& O2) {
    return !order_isomorphisms(O1, O2, 1).empty();
}

}  // namespace qorder
