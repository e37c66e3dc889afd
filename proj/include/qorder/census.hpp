#pragma once

// Censuses of (semi-)Euclidean orders: enumerate candidate algebras,
// involutions and orders within the search bounds, classify each by the
// covering-radius criterion, deduplicate up to isomorphism, and compare
// against golden reference tables.
//
// Enumeration strategy.  Every order O in scope has covering radius <= 1 for
// its division lattice, which pins down exact geometric data:
//   * 1 is a shortest vector, and the relevant successive minima are <= 2, so
//     O (and in dim 4 its fixed part) has a basis {1, b_2, ...} whose Gram
//     matrix has integer diagonal <= 4 (<= the configured bound) and
//     half-integer off-diagonal entries in a bounded range;
//   * the squared covolume is at most vol(unit ball)^2.
// All such Gram matrices are scanned directly; each is realized inside the
// model algebra by solving diagonal conics (the realization is unique up to
// conjugations that commute with the involution, by Witt transitivity of the
// rational orthogonal group, so one rational point per conic suffices); the
// realized lattices are filtered by ring closure and classified exactly.
// In dim 4, a candidate order is reconstructed from its fixed lattice L by
// adjoining a generator of the skew line and the possible half-integral
// mixed classes; the three pieces determine the order, and every stable
// order arises this way because 2x = (x + x^dd) + (x - x^dd).

#include "diophantine.hpp"
#include "euclid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <cmath>
#include <thread>
#include <vector>

namespace qorder {

struct SearchBounds {
    int dim = 5;
    Int max_disc_H;         // dim 5: disc < 120; dim 4: disc < 202; dim 3: |disc| <= 39
    Int max_norm_xi = 0;    // dim 4: squarefree |disc(involution)| < 202
    Rat max_basis_norm_sq;  // squared length of suborder basis vectors
    int workers = 1;

    static SearchBounds defaults(int dim) {
        SearchBounds b;
        b.dim = dim;
        if (dim == 3) {
            b.max_disc_H = 39;  // |disc| <= 4 pi^2
            b.max_basis_norm_sq = 4;
        } else if (dim == 4) {
            b.max_disc_H = 201;   // disc(H) <= 64 pi < 202
            b.max_norm_xi = 201;  // nrm(xi) under the same bound
            b.max_basis_norm_sq = 16;  // basis of elements of length <= 4 over O'
        } else if (dim == 5) {
            b.max_disc_H = 119;  // disc(H) < 120
            b.max_basis_norm_sq = 4;  // basis of elements of length <= 2
        } else {
            throw std::invalid_argument("SearchBounds: dim must be 3, 4 or 5");
        }
        return b;
    }

    // dim-5 suborder index bound 60/sqrt(D): index^2 * D <= 3600.
    bool index_ok_dim5(const Rat& index, const Int& D) const {
        return index * index * Rat(D) <= 3600;
    }
};

struct AlgebraTarget {
    AlgebraDescriptor alg;
    std::optional<InvolutionDescriptor> inv;
    Int disc_H;  // |d_K| for dim 3
    Int m = 0;   // |disc(involution)| for dim 4
};

struct CensusRecord {
    OrderLattice order;
    OrderClass cls = OrderClass::NotSemiEuclidean;
    bool maximal = false;
    bool anomaly = false;
    std::string anomaly_detail;
    Int disc_H;
    Int m = 0;  // 0 when no involution
    Int red_disc;
    Rat mu_sq;
    DeepHoleReport holes;               // of the division lattice
    QMat holes_norm1;                   // same classes, translated to norm-1 representatives
    std::vector<OrderLattice> hole_superorders;
};

// --- algebra and involution enumeration --------------------------------------

namespace census_detail {

inline bool pair_admissible(const Int& D, const Int& m) {
    // the quadratic field Q(sqrt(-m)) must embed into the algebra of
    // discriminant D: no prime dividing D may split in it
    for (const Int& p : primes_dividing(D)) {
        if (p == 2) {
            Int r = ((-m) % 8 + 8) % 8;
            if (r == 1) return false;
        } else {
            if (legendre_symbol(-m, p) == 1) return false;
        }
    }
    return true;
}

// Model (-g, -sqfree(m g)) with the required discriminant; every definite
// algebra containing xi of squarefree norm class m has such a model, so an
// ascending scan is exhaustive.
inline std::optional<AlgebraDescriptor> find_model(const Int& D, const Int& m, long gmax = 50000) {
    for (long g = 1; g <= gmax; ++g) {
        if (squarefree_part(Rat(g)) != g) continue;  // g squarefree
        Int beta = squarefree_part(Rat(m * g));
        AlgebraDescriptor alg = AlgebraDescriptor::quaternion(Rat(-g), Rat(-beta));
        if (algebra_discriminant(alg) == D) return alg;
    }
    return std::nullopt;
}

// One representative (a, b), |a| <= |b|, per discriminant class.
inline std::map<Int, AlgebraDescriptor> models_by_disc(const Int& max_disc, long range = 256) {
    std::map<Int, AlgebraDescriptor> out;
    for (long a = 1; a <= range; ++a) {
        if (squarefree_part(Rat(a)) != a) continue;
        for (long b = a; b <= range; ++b) {
            if (squarefree_part(Rat(b)) != b) continue;
            AlgebraDescriptor alg = AlgebraDescriptor::quaternion(Rat(-a), Rat(-b));
            Int D = algebra_discriminant(alg);
            if (D > max_disc) continue;
            out.try_emplace(D, alg);
        }
    }
    return out;
}

inline std::vector<Int> squarefree_up_to(const Int& bound) {
    std::vector<Int> out;
    for (Int n = 1; n <= bound; ++n)
        if (squarefree_part(Rat(n)) == n) out.push_back(n);
    return out;
}

}  // namespace census_detail

inline std::vector<AlgebraTarget> enumerate_algebras(const SearchBounds& bounds) {
    std::vector<AlgebraTarget> out;
    if (bounds.dim == 3) {
        for (const Int& d : census_detail::squarefree_up_to(bounds.max_disc_H)) {
            Int dk = abs(quadratic_field_discriminant(d));
            if (dk > bounds.max_disc_H) continue;
            AlgebraTarget t;
            t.alg = AlgebraDescriptor::imaginary_quadratic(Rat(d));
            t.disc_H = dk;
            out.push_back(std::move(t));
        }
        return out;
    }
    if (bounds.dim == 5) {
        auto models = census_detail::models_by_disc(bounds.max_disc_H);
        for (auto& [D, alg] : models) {
            AlgebraTarget t;
            t.alg = alg;
            t.disc_H = D;
            out.push_back(std::move(t));
        }
        return out;
    }
    // dim 4: pairs (disc(H), disc(involution)) with lcm <= 64 pi < 202
    Rat lcm_bound = 64 * pi_upper();  // certified upper bound on lcm(D, m)
    for (const Int& D : census_detail::squarefree_up_to(bounds.max_disc_H)) {
        if (primes_dividing(D).size() % 2 == 0) continue;  // definite: odd number of primes
        for (const Int& m : census_detail::squarefree_up_to(bounds.max_norm_xi)) {
            if (Rat(lcm(D, m)) > lcm_bound) continue;
            if (!census_detail::pair_admissible(D, m)) continue;
            auto model = census_detail::find_model(D, m);
            if (!model) {
                throw std::logic_error("enumerate_algebras: admissible pair (" + D.get_str() + "," +
                                       m.get_str() + ") has no model in range");
            }
            AlgebraTarget t;
            t.alg = *model;
            t.inv = InvolutionDescriptor::orthogonal_ij(*model);
            if (abs(t.inv->disc) != m)
                throw std::logic_error("enumerate_algebras: model involution class mismatch");
            t.disc_H = D;
            t.m = m;
            out.push_back(std::move(t));
        }
    }
    return out;
}

// --- gram scan and realization ------------------------------------------------

namespace census_detail {

// Candidate Gram matrices for a basis {1, b_2, .., b_r} of an integral
// lattice: G[0][0] = 1, G[0][j] in {0, 1/2}, integer diagonal n_j in
// [1, nmax] nondecreasing, half-integer off-diagonals bounded by
// Cauchy-Schwarz, determinant in (0, detmax].
inline std::vector<QMat> scan_grams(size_t r, long nmax, const Rat& detmax) {
    std::vector<QMat> out;
    std::vector<long> diag(r - 1);
    std::vector<long> offs;  // 2*G[i][j] over pairs 2 <= i < j (1-based among b's)
    size_t npairs = (r - 1) * (r - 2) / 2;
    std::vector<long> head(r - 1);  // 2*G[0][j] in {0, 1}

    QMat G = qmat_zero(r, r);
    G[0][0] = 1;
    auto emit = [&]() {
        for (size_t j = 1; j < r; ++j) {
            G[0][j] = G[j][0] = make_rat(head[j - 1], 2);
            G[j][j] = diag[j - 1];
        }
        size_t k = 0;
        for (size_t i = 1; i < r; ++i)
            for (size_t j = i + 1; j < r; ++j) G[i][j] = G[j][i] = make_rat(offs[k++], 2);
        // positive definite and determinant bound
        QMat M = G;
        Rat det = 1;
        for (size_t c = 0; c < r; ++c) {  // leading minors via elimination
            if (M[c][c] <= 0) return;
            det *= M[c][c];
            for (size_t rr = c + 1; rr < r; ++rr) {
                Rat f = M[rr][c] / M[c][c];
                for (size_t cc = c; cc < r; ++cc) M[rr][cc] -= f * M[c][cc];
            }
        }
        if (det > detmax) return;
        out.push_back(G);
    };

    std::function<void(size_t)> rec_off = [&](size_t k) {
        if (k == npairs) { emit(); return; }
        // pair index k corresponds to (i, j); bound 2|G_ij| < 2 sqrt(n_i n_j)
        size_t i = 1, j = 2, kk = k;
        for (i = 1; i < r; ++i) {
            size_t row_pairs = r - 1 - i;
            if (kk < row_pairs) { j = i + 1 + kk; break; }
            kk -= row_pairs;
        }
        long ni = diag[i - 1], nj = diag[j - 1];
        long lim = 2 * static_cast<long>(std::sqrt(static_cast<double>(ni) * nj)) + 1;
        while (Rat(lim) * Rat(lim) >= 4 * Rat(ni) * Rat(nj)) --lim;
        for (long v = -lim; v <= lim; ++v) {
            offs.push_back(v);
            rec_off(k + 1);
            offs.pop_back();
        }
    };
    std::function<void(size_t)> rec_diag = [&](size_t j) {
        if (j == r - 1) {
            std::function<void(size_t)> rec_head = [&](size_t h) {
                if (h == r - 1) { rec_off(0); return; }
                for (long v : {0L, 1L}) {
                    head[h] = v;
                    rec_head(h + 1);
                }
            };
            rec_head(0);
            return;
        }
        long lo = j == 0 ? 1 : diag[j - 1];
        for (long n = lo; n <= nmax; ++n) {
            diag[j] = n;
            rec_diag(j + 1);
        }
    };
    rec_diag(0);
    return out;
}

struct ConicCache {
    std::map<std::string, std::optional<std::pair<Rat, Rat>>> binary;
    std::map<std::string, std::optional<std::array<Rat, 3>>> ternary;

    std::optional<std::pair<Rat, Rat>> binary_point(const Rat& A, const Rat& B, const Rat& C) {
        std::string key = rat_str(A) + "|" + rat_str(B) + "|" + rat_str(C);
        auto it = binary.find(key);
        if (it == binary.end()) it = binary.emplace(key, solve_binary_conic(A, B, C)).first;
        return it->second;
    }
    std::optional<std::array<Rat, 3>> ternary_point(const Rat& A, const Rat& B, const Rat& C,
                                                    const Rat& D) {
        std::string key = rat_str(A) + "|" + rat_str(B) + "|" + rat_str(C) + "|" + rat_str(D);
        auto it = ternary.find(key);
        if (it == ternary.end()) it = ternary.emplace(key, solve_ternary_conic(A, B, C, D)).first;
        return it->second;
    }
};

// Realize a scanned Gram matrix as vectors in the fixed 3-space span(1,i,j)
// (rank 3) of the model algebra.  Returns basis rows in ambient coordinates.
inline std::optional<QMat> realize_gram_fixed(const AlgebraDescriptor& alg, const QMat& G,
                                              ConicCache& cache) {
    Rat A = -alg.a, B = -alg.b;  // pure norm form diag(A, B) on (y, z)
    QMat rows;
    rows.push_back({Rat(1), Rat(0), Rat(0), Rat(0)});
    // b2: scalar part G[0][1], pure norm c2
    Rat c2 = G[1][1] - G[0][1] * G[0][1];
    if (c2 <= 0) return std::nullopt;
    auto p2 = cache.binary_point(A, B, c2);
    if (!p2) return std::nullopt;
    QVec b2 = {G[0][1], p2->first, p2->second, Rat(0)};
    rows.push_back(b2);
    // b3: scalar part G[0][2]; pure part x with <p2, x> = beta, q(x) = c3
    Rat beta = G[1][2] - G[0][1] * G[0][2];
    Rat c3 = G[2][2] - G[0][2] * G[0][2];
    if (c3 <= 0) return std::nullopt;
    // orthogonal split: x = (beta/c2) p2 + w, w perp p2, q(w) = c3 - beta^2/c2
    Rat cw = c3 - beta * beta / c2;
    if (cw < 0) return std::nullopt;
    // the perp line in the plane: u = (-B z2, A y2) has q(u) = A B c2
    QVec u = {-B * p2->second, A * p2->first};
    Rat qu = A * u[0] * u[0] + B * u[1] * u[1];
    // need s with s^2 qu = cw
    Rat s2 = cw / qu;
    auto s = exact_sqrt(s2);
    if (!s) return std::nullopt;
    Rat f = beta / c2;
    QVec b3 = {G[0][2], f * p2->first + *s * u[0], f * p2->second + *s * u[1], Rat(0)};
    rows.push_back(b3);
    // exact verification of the realized Gram
    QMat form = ambient_norm_form(alg);
    QMat got = compute_gram(rows, form);
    if (!qmat_equal(got, G)) return std::nullopt;
    return rows;
}

// Realize a rank-4 Gram as a basis {1, b2, b3, b4} of a lattice in the model
// algebra; may return two chirality variants.
inline std::vector<QMat> realize_gram_full(const AlgebraDescriptor& alg, const QMat& G,
                                           ConicCache& cache) {
    std::vector<QMat> out;
    Rat A = -alg.a, B = -alg.b, C = -alg.a * -alg.b;  // pure form diag(A,B,C) on (y,z,t)
    auto pure_ip = [&](const QVec& x, const QVec& y) -> Rat {
        return A * x[0] * y[0] + B * x[1] * y[1] + C * x[2] * y[2];
    };
    // b2
    Rat c2 = G[1][1] - G[0][1] * G[0][1];
    if (c2 <= 0) return out;
    auto p2opt = cache.ternary_point(A, B, C, c2);
    if (!p2opt) return out;
    QVec p2 = {(*p2opt)[0], (*p2opt)[1], (*p2opt)[2]};
    // b3: <p2, x> = beta2, q(x) = c3
    Rat beta2 = G[1][2] - G[0][1] * G[0][2];
    Rat c3 = G[2][2] - G[0][2] * G[0][2];
    if (c3 <= 0) return out;
    Rat f3 = beta2 / c2;
    Rat cw3 = c3 - beta2 * beta2 / c2;
    if (cw3 < 0) return out;
    // rational basis of the plane perpendicular to p2 under diag(A,B,C)
    QVec u, v;
    {
        // pick two independent solutions of A p2_0 x0 + B p2_1 x1 + C p2_2 x2 = 0
        QVec n = {A * p2[0], B * p2[1], C * p2[2]};
        size_t piv = n[0] != 0 ? 0 : (n[1] != 0 ? 1 : 2);
        size_t o1 = (piv + 1) % 3, o2 = (piv + 2) % 3;
        u = QVec(3, Rat(0));
        u[o1] = 1;
        u[piv] = -n[o1] / n[piv];
        v = QVec(3, Rat(0));
        v[o2] = 1;
        v[piv] = -n[o2] / n[piv];
        // orthogonalize v against u
        Rat s = pure_ip(u, v) / pure_ip(u, u);
        for (size_t k = 0; k < 3; ++k) v[k] -= s * u[k];
    }
    Rat qu = pure_ip(u, u), qv = pure_ip(v, v);
    auto st = cw3 == 0 ? std::make_optional(std::make_pair(Rat(0), Rat(0)))
                       : cache.binary_point(qu, qv, cw3);
    if (!st) return out;
    QVec p3(3);
    for (size_t k = 0; k < 3; ++k) p3[k] = f3 * p2[k] + st->first * u[k] + st->second * v[k];
    // b4: <p2, x> = g2, <p3, x> = g3, q(x) = c4
    Rat g2 = G[1][3] - G[0][1] * G[0][3];
    Rat g3 = G[2][3] - G[0][2] * G[0][3];
    Rat c4 = G[3][3] - G[0][3] * G[0][3];
    if (c4 <= 0) return out;
    // solve in the basis (p2, p3, w) with w spanning the perp line
    QVec w;
    {
        // w = "cross product" against the diagonal form: solve two linear relations
        QVec n2 = {A * p2[0], B * p2[1], C * p2[2]};
        QVec n3 = {A * p3[0], B * p3[1], C * p3[2]};
        // kernel of the 2x3 system [n2; n3]
        w = {n2[1] * n3[2] - n2[2] * n3[1], n2[2] * n3[0] - n2[0] * n3[2],
             n2[0] * n3[1] - n2[1] * n3[0]};
        if (qvec_is_zero(w)) return out;
    }
    // x = a p2 + b p3 + s w; Gram of (p2, p3) is [[c2, beta23],[beta23, c3w]]
    Rat ip23 = pure_ip(p2, p3);
    QMat M2 = {{c2, ip23}, {ip23, pure_ip(p3, p3)}};
    auto ab = qmat_solve(M2, {g2, g3});
    if (!ab) return out;
    Rat qpart = (*ab)[0] * (*ab)[0] * M2[0][0] + 2 * (*ab)[0] * (*ab)[1] * M2[0][1] +
                (*ab)[1] * (*ab)[1] * M2[1][1];
    Rat cw4 = c4 - qpart;
    if (cw4 < 0) return out;
    Rat qw = pure_ip(w, w);
    Rat s2 = cw4 / qw;
    auto s = exact_sqrt(s2);
    if (!s) return out;
    QMat form = ambient_norm_form(alg);
    for (Rat sgn : std::vector<Rat>{*s, Rat(-*s)}) {
        QVec p4(3);
        for (size_t k = 0; k < 3; ++k) p4[k] = (*ab)[0] * p2[k] + (*ab)[1] * p3[k] + sgn * w[k];
        QMat rows = {{Rat(1), Rat(0), Rat(0), Rat(0)},
                     {G[0][1], p2[0], p2[1], p2[2]},
                     {G[0][2], p3[0], p3[1], p3[2]},
                     {G[0][3], p4[0], p4[1], p4[2]}};
        if (qmat_equal(compute_gram(rows, form), G)) out.push_back(rows);
        if (sgn == 0) break;
    }
    return out;
}

// Sublattice where the listed ambient coordinates vanish, computed through
// saturated integer kernels on coefficient space.
inline std::optional<QMat> coordinate_section_rows(const GramLattice& L,
                                                   const std::vector<size_t>& zero_coords) {
    QMat coeff = qmat_identity(L.rank());
    for (size_t zc : zero_coords) {
        // functional on current coefficient basis
        Int D = 1;
        QVec vals(coeff.size());
        for (size_t i = 0; i < coeff.size(); ++i) {
            Rat v = 0;
            for (size_t k = 0; k < L.rank(); ++k) v += coeff[i][k] * L.basis[k][zc];
            vals[i] = v;
            D = lcm(D, den(v));
        }
        ZVec a(coeff.size());
        bool all_zero = true;
        for (size_t i = 0; i < coeff.size(); ++i) {
            a[i] = num(vals[i] * Rat(D));
            if (a[i] != 0) all_zero = false;
        }
        if (all_zero) continue;
        auto [g, U] = detail::gcd_transform(a);
        QMat next;
        for (size_t c = 1; c < coeff.size(); ++c) {
            QVec row(L.rank(), Rat(0));
            for (size_t r2 = 0; r2 < coeff.size(); ++r2)
                for (size_t k = 0; k < L.rank(); ++k) row[k] += Rat(U[r2][c]) * coeff[r2][k];
            next.push_back(std::move(row));
        }
        coeff = std::move(next);
        if (coeff.empty()) return std::nullopt;
    }
    QMat rows;
    for (auto& c : coeff) {
        QVec pt(L.dim(), Rat(0));
        for (size_t k = 0; k < L.rank(); ++k)
            for (size_t j = 0; j < L.dim(); ++j) pt[j] += c[k] * L.basis[k][j];
        rows.push_back(std::move(pt));
    }
    return rows;
}

// all additive subgroups of (Z/2)^4 as lists of masks
inline const std::vector<std::vector<unsigned>>& f2_4_subgroups() {
    static const std::vector<std::vector<unsigned>> groups = [] {
        std::vector<std::vector<unsigned>> out;
        std::set<std::set<unsigned>> seen;
        // generate subgroups from all subsets of generators (size <= 4)
        for (unsigned g1 = 0; g1 < 16; ++g1)
            for (unsigned g2 = g1; g2 < 16; ++g2)
                for (unsigned g3 = g2; g3 < 16; ++g3)
                    for (unsigned g4 = g3; g4 < 16; ++g4) {
                        std::set<unsigned> grp = {0};
                        std::vector<unsigned> frontier = {0};
                        for (unsigned gen : {g1, g2, g3, g4}) {
                            std::set<unsigned> next;
                            for (unsigned x : grp) next.insert(x ^ gen);
                            grp.insert(next.begin(), next.end());
                        }
                        // close under addition
                        bool changed = true;
                        while (changed) {
                            changed = false;
                            std::vector<unsigned> elems(grp.begin(), grp.end());
                            for (unsigned x : elems)
                                for (unsigned y : elems)
                                    if (!grp.count(x ^ y)) { grp.insert(x ^ y); changed = true; }
                        }
                        if (seen.insert(grp).second) out.emplace_back(grp.begin(), grp.end());
                    }
        return out;
    }();
    return groups;
}

}  // namespace census_detail

// --- per-dimension candidate enumeration ---------------------------------------

namespace census_detail {

// certified: an order with division-lattice covering radius <= 1 has
// covol(Lambda) <= vol(B_rank); skip whole algebras that cannot meet it
inline Rat covol_sq_limit(size_t rank) {
    Rat pu = pi_upper();
    switch (rank) {
        case 2: return pu * pu;                          // vol(B_2) = pi
        case 3: return make_rat(16, 9) * pu * pu;        // 4 pi / 3
        case 4: return pu * pu * pu * pu / 4;            // pi^2 / 2
        default: throw std::logic_error("covol_sq_limit: bad rank");
    }
}

// dim 3: orders Z + Z f w_d of the imaginary quadratic field
inline std::vector<OrderLattice> candidates_dim3(const AlgebraTarget& t, const SearchBounds& b) {
    std::vector<OrderLattice> out;
    Int d = squarefree_part(-t.alg.b);
    Int dk = abs(quadratic_field_discriminant(d));
    bool half = ((-d) % 4 + 4) % 4 == 1;  // w = (1+sqrt(-d))/2 when -d = 1 mod 4
    for (Int f = 1;; ++f) {
        Int disc = f * f * dk;
        if (disc > b.max_disc_H) break;
        QVec w = half ? QVec{Rat(f) / 2, Rat(f) / 2} : QVec{Rat(0), Rat(f)};
        auto O = try_order(t.alg, std::nullopt, {{Rat(1), Rat(0)}, w});
        if (O) out.push_back(std::move(*O));
    }
    return out;
}

// dim 5: scan rank-4 Grams, realize, keep multiplicatively closed lattices
inline std::vector<OrderLattice> candidates_dim5(const AlgebraTarget& t, const SearchBounds& b) {
    std::vector<OrderLattice> out;
    // covol = red_disc / 4 >= disc_H / 4: certified skip when even the maximal
    // order is too sparse to cover
    if (Rat(t.disc_H) * Rat(t.disc_H) / 16 > covol_sq_limit(4)) return out;
    long nmax = static_cast<long>(num(Rat(floor_int(b.max_basis_norm_sq))).get_si());
    auto grams = scan_grams(4, nmax, covol_sq_limit(4));
    ConicCache cache;
    std::set<std::string> seen;
    for (auto& G : grams) {
        for (auto& rows : realize_gram_full(t.alg, G, cache)) {
            QMat H = hnf_rational(rows);
            std::string key = qmat_str(H);
            if (!seen.insert(key).second) continue;
            auto O = try_order(t.alg, std::nullopt, H);
            if (!O) continue;
            Rat index = Rat(reduced_discriminant(*O)) / Rat(t.disc_H);
            if (!is_integer(index)) continue;  // not inside a maximal order of this disc
            if (!b.index_ok_dim5(index, t.disc_H)) continue;
            out.push_back(std::move(*O));
        }
    }
    return out;
}

// dim 4: scan rank-3 fixed-lattice Grams, realize, extend by skew and mixed parts
inline std::vector<OrderLattice> candidates_dim4(const AlgebraTarget& t, const SearchBounds& b) {
    std::vector<OrderLattice> out;
    auto grams = scan_grams(3, 4, covol_sq_limit(3));
    ConicCache cache;
    std::set<std::string> seen_lambda, seen_order;
    const QMat form = ambient_norm_form(t.alg);
    for (auto& G : grams) {
        auto rows = realize_gram_fixed(t.alg, G, cache);
        if (!rows) continue;
        QMat lam_h = hnf_rational(*rows);
        if (!seen_lambda.insert(qmat_str(lam_h)).second) continue;
        GramLattice Lambda = make_lattice(lam_h, form);
        // the fixed lattice must already satisfy the covering criterion
        auto rep = covering_radius(Lambda);
        if (rep.covering_radius_sq > 1) continue;
        // ring generated by Lambda: skew line bound
        auto R = ring_closure(t.alg, lam_h);
        if (!R) continue;
        auto skew_rows = coordinate_section_rows(*R, {0, 1, 2});
        if (!skew_rows || skew_rows->size() != 1) continue;
        QVec s0 = (*skew_rows)[0];
        Rat nrm_s0 = form_norm(form, s0);
        for (Int k = 1; k * k <= num(nrm_s0); ++k) {
            if (!is_integer(nrm_s0 / Rat(k * k))) continue;
            QVec w0 = qvec_scale(Rat(1) / Rat(k), s0);
            QMat M0 = lam_h;
            M0.push_back(w0);
            GramLattice M0L = make_lattice(hnf_rational(M0), form);
            for (auto& subgroup : f2_4_subgroups()) {
                QMat gens = M0L.basis;
                for (unsigned mask : subgroup) {
                    if (mask == 0) continue;
                    QVec h(4, Rat(0));
                    for (size_t i = 0; i < 4; ++i)
                        if (mask & (1u << i)) h = qvec_add(h, M0L.basis[i]);
                    gens.push_back(qvec_scale(make_rat(1, 2), h));
                }
                QMat Hrows = hnf_rational(gens);
                if (!seen_order.insert(qmat_str(Hrows)).second) continue;
                GramLattice L = make_lattice(Hrows, form);
                // canonical parametrization: fixed part exactly Lambda, skew
                // part exactly Z w0
                auto fixed_rows = coordinate_section_rows(L, {3});
                if (!fixed_rows || fixed_rows->size() != 3) continue;
                if (!qmat_equal(hnf_rational(*fixed_rows), lam_h)) continue;
                auto skew2 = coordinate_section_rows(L, {0, 1, 2});
                if (!skew2 || skew2->size() != 1) continue;
                if (!qmat_equal(hnf_rational(*skew2), hnf_rational({w0}))) continue;
                auto O = try_order(t.alg, t.inv, Hrows);
                if (!O) continue;
                // paper bounds: index in the stable maximal order, basis length
                Int rd = reduced_discriminant(*O);
                if (Rat(rd) > 64 * pi_upper()) continue;
                auto prof = successive_minima(O->lattice);
                if (prof.lambdas_sq.back() > b.max_basis_norm_sq) continue;
                out.push_back(std::move(*O));
            }
        }
    }
    return out;
}

}  // namespace census_detail

// --- suborder enumeration (public operation) -----------------------------------

// All (stable) sub-orders of a maximal order having a basis {1, v_2, ..} of
// elements with nrm <= max_basis_norm_sq and index within the bounds.
inline std::vector<OrderLattice> enumerate_suborders(const OrderLattice& O_max,
                                                     const SearchBounds& bounds) {
    if (!is_maximal(O_max)) throw std::invalid_argument("enumerate_suborders: input not maximal");
    std::vector<OrderLattice> out;
    std::set<std::string> seen;
    const QMat form = O_max.lattice.form;

    auto push_candidate = [&](const QMat& rows) {
        QMat H = hnf_rational(rows);
        if (H.size() != O_max.rank()) return;
        if (!seen.insert(qmat_str(H)).second) return;
        auto O = try_order(O_max.alg, O_max.involution, H);
        if (!O) return;
        Rat index = lattice_index(O->lattice, O_max.lattice);
        if (O_max.dim() == 5 && !bounds.index_ok_dim5(index, reduced_discriminant(O_max))) return;
        if (O_max.dim() == 4 && Rat(reduced_discriminant(*O)) > 64 * pi_upper()) return;
        auto prof = successive_minima(O->lattice);
        if (prof.lambdas_sq.back() > bounds.max_basis_norm_sq) return;
        out.push_back(std::move(*O));
    };

    if (O_max.dim() == 3) {
        for (Int f = 1; f * f * reduced_discriminant(O_max) <= bounds.max_disc_H; ++f) {
            QMat rows = {O_max.lattice.basis[0], qvec_scale(Rat(f), O_max.lattice.basis[1])};
            push_candidate(rows);
        }
    } else if (O_max.dim() == 5) {
        auto shorts = short_vectors(O_max.lattice, bounds.max_basis_norm_sq);
        // up-to-sign representatives, excluding +-1
        QMat pool;
        QVec one_amb(4, Rat(0));
        one_amb[0] = 1;
        for (auto& [c, nsq] : shorts) {
            QVec amb(4, Rat(0));
            for (size_t i = 0; i < 4; ++i)
                for (size_t j = 0; j < 4; ++j) amb[j] += c[i] * O_max.lattice.basis[i][j];
            if (amb < QVec(4, Rat(0))) continue;  // keep one sign (lexicographic)
            if (amb == one_amb) continue;
            pool.push_back(amb);
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        size_t n = pool.size();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                for (size_t k = j + 1; k < n; ++k) {
                    QMat rows = {one_amb, pool[i], pool[j], pool[k]};
                    if (qmat_rank(rows) != 4) continue;
                    push_candidate(rows);
                }
    } else {
        // dim 4: fixed part, skew generator, mixed classes, all inside O_max
        FixedSublattice Fmax = fixed_sublattice(O_max);
        auto shorts = short_vectors(Fmax.lattice, bounds.max_basis_norm_sq);
        QMat pool;
        QVec one_amb(4, Rat(0));
        one_amb[0] = 1;
        for (auto& [c, nsq] : shorts) {
            QVec amb(4, Rat(0));
            for (size_t i = 0; i < 3; ++i)
                for (size_t j = 0; j < 4; ++j) amb[j] += c[i] * Fmax.lattice.basis[i][j];
            if (amb < QVec(4, Rat(0))) continue;
            if (amb == one_amb) continue;
            pool.push_back(amb);
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        auto skew_max = census_detail::coordinate_section_rows(O_max.lattice, {0, 1, 2});
        if (!skew_max || skew_max->size() != 1)
            throw std::logic_error("enumerate_suborders: no skew generator");
        for (size_t i = 0; i < pool.size(); ++i)
            for (size_t j = i + 1; j < pool.size(); ++j) {
                QMat lam = {one_amb, pool[i], pool[j]};
                if (qmat_rank(lam) != 3) continue;
                QMat lam_h = hnf_rational(lam);
                auto R = ring_closure(O_max.alg, lam_h);
                if (!R) continue;
                auto s_rows = census_detail::coordinate_section_rows(*R, {0, 1, 2});
                if (!s_rows || s_rows->size() != 1) continue;
                QVec s0 = (*s_rows)[0];
                Rat nrm_s0 = form_norm(form, s0);
                for (Int k = 1; k * k <= num(nrm_s0); ++k) {
                    if (!is_integer(nrm_s0 / Rat(k * k))) continue;
                    QVec w0 = qvec_scale(Rat(1) / Rat(k), s0);
                    if (!lattice_member(O_max.lattice, w0)) continue;
                    QMat M0 = lam_h;
                    M0.push_back(w0);
                    GramLattice M0L = make_lattice(hnf_rational(M0), form);
                    for (auto& subgroup : census_detail::f2_4_subgroups()) {
                        QMat gens = M0L.basis;
                        for (unsigned mask : subgroup) {
                            if (mask == 0) continue;
                            QVec h(4, Rat(0));
                            for (size_t b2 = 0; b2 < 4; ++b2)
                                if (mask & (1u << b2)) h = qvec_add(h, M0L.basis[b2]);
                            gens.push_back(qvec_scale(make_rat(1, 2), h));
                        }
                        QMat Hrows = hnf_rational(gens);
                        bool inside = true;
                        for (auto& row : Hrows)
                            if (!lattice_member(O_max.lattice, row)) { inside = false; break; }
                        if (!inside) continue;
                        push_candidate(Hrows);
                    }
                }
            }
    }
    std::sort(out.begin(), out.end(), [](const OrderLattice& A, const OrderLattice& B) {
        return qmat_str(A.lattice.basis) < qmat_str(B.lattice.basis);
    });
    return out;
}

// --- classification, records, dedup --------------------------------------------

// Storage hook for incremental census runs.
struct CensusStoreIface {
    virtual ~CensusStoreIface() = default;
    virtual std::optional<CensusRecord> load(const std::string& key) = 0;
    virtual void save(const std::string& key, const CensusRecord& rec) = 0;
};

inline std::string census_key(const AlgebraTarget& t, const OrderLattice& O) {
    return std::to_string(O.dim()) + "|" + t.alg.str() + "|m" + t.m.get_str() + "|" +
           qmat_str(hnf_rational(O.lattice.basis));
}

namespace census_detail {

inline CensusRecord classify_candidate(const AlgebraTarget& t, const OrderLattice& O) {
    CensusRecord rec;
    rec.order = O;
    rec.disc_H = t.disc_H;
    rec.m = t.m;
    rec.red_disc = reduced_discriminant(O);
    auto cls = classify_order(O);
    rec.cls = cls.cls;
    rec.anomaly = cls.anomaly;
    rec.anomaly_detail = cls.anomaly_detail;
    rec.holes = cls.holes;
    rec.mu_sq = cls.holes.covering_radius_sq;
    rec.maximal = is_maximal(O);
    rec.hole_superorders = cls.hole_superorders;
    rec.holes_norm1 = cls.holes_norm1;
    return rec;
}

}  // namespace census_detail

inline std::vector<CensusRecord> run_census(const SearchBounds& bounds,
                                            CensusStoreIface* store = nullptr) {
    std::vector<AlgebraTarget> targets = enumerate_algebras(bounds);
    struct Job {
        AlgebraTarget target;
        OrderLattice order;
    };
    std::vector<Job> jobs;
    for (auto& t : targets) {
        std::vector<OrderLattice> cands;
        if (bounds.dim == 3) cands = census_detail::candidates_dim3(t, bounds);
        else if (bounds.dim == 5) cands = census_detail::candidates_dim5(t, bounds);
        else cands = census_detail::candidates_dim4(t, bounds);
        for (auto& O : cands) jobs.push_back({t, std::move(O)});
    }

    std::vector<CensusRecord> recs(jobs.size());
    std::vector<char> keep(jobs.size(), 0);
    auto work = [&](size_t begin, size_t end) {
        for (size_t idx = begin; idx < end; ++idx) {
            const Job& job = jobs[idx];
            std::string key = census_key(job.target, job.order);
            std::optional<CensusRecord> cached;
            if (store) cached = store->load(key);
            CensusRecord rec = cached ? std::move(*cached)
                                      : census_detail::classify_candidate(job.target, job.order);
            if (store && !cached) store->save(key, rec);
            if (rec.mu_sq <= 1) {
                recs[idx] = std::move(rec);
                keep[idx] = 1;
            }
        }
    };
    int workers = std::max(1, bounds.workers);
    if (workers == 1 || store) {
        work(0, jobs.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (jobs.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            size_t begin = w * chunk, end = std::min(jobs.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<CensusRecord> kept;
    for (size_t i = 0; i < jobs.size(); ++i)
        if (keep[i]) kept.push_back(std::move(recs[i]));

    // canonical sort, then isomorphism dedup within invariant buckets
    auto sort_key = [](const CensusRecord& r) {
        return std::make_tuple(r.disc_H.get_str().size(), r.disc_H.get_str(), r.m.get_str(),
                               r.red_disc.get_str().size(), r.red_disc.get_str(),
                               qmat_str(r.order.lattice.basis));
    };
    std::sort(kept.begin(), kept.end(),
              [&](const CensusRecord& a, const CensusRecord& b) { return sort_key(a) < sort_key(b); });
    std::vector<CensusRecord> unique_recs;
    for (auto& r : kept) {
        bool dup = false;
        for (auto& u : unique_recs) {
            if (u.disc_H != r.disc_H || u.m != r.m || u.red_disc != r.red_disc ||
                u.mu_sq != r.mu_sq)
                continue;
            if (orders_isomorphic(u.order, r.order)) { dup = true; break; }
        }
        if (!dup) unique_recs.push_back(std::move(r));
    }
    return unique_recs;
}

// --- deep hole table ------------------------------------------------------------

struct DeepHoleRow {
    const CensusRecord* record;
    std::vector<QuatElt> holes;                  // norm-1 representatives
    std::vector<OrderLattice> superorders;       // containing maximal (stable) orders
};

inline std::vector<DeepHoleRow> deep_hole_table(const std::vector<CensusRecord>& records) {
    std::vector<DeepHoleRow> rows;
    for (auto& rec : records) {
        if (rec.mu_sq != 1) continue;
        DeepHoleRow row;
        row.record = &rec;
        for (size_t i = 0; i < rec.holes_norm1.size(); ++i) {
            QuatElt alpha = vec_to_elt(rec.order.alg, rec.holes_norm1[i]);
            if (reduced_norm(alpha) != 1)
                throw std::logic_error("deep_hole_table: non-norm-1 representative");
            row.holes.push_back(alpha);
            if (i < rec.hole_superorders.size()) row.superorders.push_back(rec.hole_superorders[i]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qorder
