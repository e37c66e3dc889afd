#pragma once

// Exact geometry of positive-definite rational lattices of rank <= 4:
// canonical bases, sums, indices, closest vectors, successive minima,
// covering radius and deep holes.
//
// The covering radius is computed through the Delaunay/Voronoi duality:
// the circumcenters of the Delaunay cells incident to the origin are
// exactly the vertices of the Voronoi cell, whose facets come from the
// Voronoi-relevant vectors (the +-unique minima of the nonzero classes
// of L/2L).  Everything is rational: facet equations are linear with
// rational data, so vertices and the squared covering radius are exact.

#include "matq.hpp"
#include "rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qorder {

struct GramLattice {
    QMat basis;  // rank x dim, rows are ambient coordinates of basis vectors
    QMat form;   // dim x dim symmetric positive-definite ambient inner product
    QMat gram;   // rank x rank, gram = basis * form * basis^T

    size_t rank() const { return basis.size(); }
    size_t dim() const { return basis.empty() ? 0 : basis[0].size(); }
};

inline QMat compute_gram(const QMat& basis, const QMat& form) {
    return qmat_mul(qmat_mul(basis, form), qmat_transpose(basis));
}

inline GramLattice make_lattice(QMat basis, QMat form) {
    GramLattice L;
    L.gram = compute_gram(basis, form);
    L.basis = std::move(basis);
    L.form = std::move(form);
    if (qmat_det(L.gram) <= 0) throw std::invalid_argument("lattice basis not positive definite");
    return L;
}

// Ambient inner product of two coordinate vectors.
inline Rat form_inner(const QMat& form, const QVec& u, const QVec& v) {
    Rat s = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) continue;
        for (size_t j = 0; j < v.size(); ++j) s += u[i] * form[i][j] * v[j];
    }
    return s;
}

inline Rat form_norm(const QMat& form, const QVec& u) { return form_inner(form, u, u); }

// Canonical (HNF) basis of the lattice generated by the given ambient vectors.
// Two generating sets give identical bases iff they span the same lattice.
inline GramLattice hnf_basis(const QMat& generators, const QMat& form) {
    QMat H = hnf_rational(generators);
    if (H.empty()) throw std::invalid_argument("hnf_basis: no nonzero generators");
    return make_lattice(std::move(H), form);
}

inline GramLattice lattice_sum(const GramLattice& A, const GramLattice& B) {
    if (A.dim() != B.dim() || !qmat_equal(A.form, B.form))
        throw std::invalid_argument("lattice_sum: ambient mismatch");
    QMat gens = A.basis;
    gens.insert(gens.end(), B.basis.begin(), B.basis.end());
    return hnf_basis(gens, A.form);
}

// Coefficients of an ambient point w.r.t. the lattice basis, if it lies in
// the rational span.
inline std::optional<QVec> span_coordinates(const GramLattice& L, const QVec& p) {
    // Solve c * basis = p, i.e. basis^T c^T = p^T.
    return qmat_solve(qmat_transpose(L.basis), p);
}

inline bool lattice_member(const GramLattice& L, const QVec& p) {
    auto c = span_coordinates(L, p);
    if (!c) return false;
    return std::all_of(c->begin(), c->end(), [](const Rat& x) { return is_integer(x); });
}

inline bool lattice_contains(const GramLattice& sup, const GramLattice& sub) {
    for (auto& row : sub.basis)
        if (!lattice_member(sup, row)) return false;
    return true;
}

inline bool lattice_equal(const GramLattice& A, const GramLattice& B) {
    return qmat_equal(hnf_rational(A.basis), hnf_rational(B.basis));
}

// |sup/sub| for sub a finite-index sublattice of sup.
inline Rat lattice_index(const GramLattice& sub, const GramLattice& sup) {
    if (sub.rank() != sup.rank()) throw std::invalid_argument("lattice_index: rank mismatch");
    if (!lattice_contains(sup, sub)) throw std::invalid_argument("lattice_index: not a sublattice");
    Rat dsub = qmat_det(compute_gram(sub.basis, sub.form));
    Rat dsup = qmat_det(sup.gram);
    auto idx = exact_sqrt(dsub / dsup);
    if (!idx) throw std::logic_error("lattice_index: determinant ratio not a square");
    return *idx;
}

// Squared covolume (determinant of the Gram matrix).
inline Rat covolume_sq(const GramLattice& L) { return qmat_det(L.gram); }

// --- exact enumeration (Fincke-Pohst over Q) -------------------------------

namespace detail {

struct LDL {
    QMat L;   // unit lower triangular
    QVec D;   // positive diagonal
};

inline LDL ldl_decompose(const QMat& G) {
    size_t n = G.size();
    LDL out{qmat_identity(n), QVec(n, Rat(0))};
    for (size_t i = 0; i < n; ++i) {
        Rat d = G[i][i];
        for (size_t k = 0; k < i; ++k) d -= out.D[k] * out.L[i][k] * out.L[i][k];
        if (d <= 0) throw std::invalid_argument("gram matrix not positive definite");
        out.D[i] = d;
        for (size_t j = i + 1; j < n; ++j) {
            Rat v = G[j][i];
            for (size_t k = 0; k < i; ++k) v -= out.D[k] * out.L[j][k] * out.L[i][k];
            out.L[j][i] = v / d;
        }
    }
    return out;
}

// Enumerate all integer vectors c with q(c - target) <= bound, where q is the
// quadratic form of G.  When shrink_to_min is set the bound tightens to the
// best value seen, and only minimizers survive.
struct Enumerator {
    const LDL& ldl;
    QVec target;
    Rat bound;
    bool shrink_to_min;
    bool skip_zero = false;  // for shortest-vector searches
    std::vector<std::pair<QVec, Rat>> hits;  // (integer coeffs as Rat, value)

    void run() {
        size_t n = ldl.D.size();
        ZVec c(n);
        recurse(n, Rat(0), c);
        if (shrink_to_min) {
            std::erase_if(hits, [&](auto& h) { return h.second != bound; });
        }
    }

    void recurse(size_t level, const Rat& partial, ZVec& c) {
        if (level == 0) {
            if (skip_zero && std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; }))
                return;
            QVec qc(c.size());
            for (size_t i = 0; i < c.size(); ++i) qc[i] = Rat(c[i]);
            if (shrink_to_min && partial < bound) {
                bound = partial;
                std::erase_if(hits, [&](auto& h) { return h.second > bound; });
            }
            hits.emplace_back(std::move(qc), partial);
            return;
        }
        size_t i = level - 1;
        // offset for coordinate i given already-fixed higher coordinates
        Rat off = -target[i];
        for (size_t j = i + 1; j < ldl.D.size(); ++j) off += (Rat(c[j]) - target[j]) * ldl.L[j][i];
        // need D[i] * (c_i + off)^2 <= bound - partial
        Rat quota = bound - partial;
        if (quota < 0) return;
        Rat radius_sq = quota / ldl.D[i];
        // c_i in [-off - r, -off + r]
        Int lo = ceil_int(-off) , hi = floor_int(-off);
        {
            // exact integer endpoints: need (c_i + off)^2 <= radius_sq
            Int r = ceil_sqrt(radius_sq);  // integer over-approximation
            lo = ceil_int(-off - Rat(r));
            hi = floor_int(-off + Rat(r));
        }
        // enumerate from the center outwards so shrinking bounds prune early
        Int center = round_nearest(-off);
        if (center < lo) center = lo;
        if (center > hi) center = hi;
        std::vector<Int> order;
        for (Int d = 0;; ++d) {
            bool any = false;
            if (center + d <= hi) { order.push_back(center + d); any = true; }
            if (d != 0 && center - d >= lo) { order.push_back(center - d); any = true; }
            if (!any) break;
        }
        for (const Int& ci : order) {
            Rat t = Rat(ci) + off;
            Rat val = partial + ldl.D[i] * t * t;
            if (val > bound) continue;
            c[i] = ci;
            recurse(i, val, c);
        }
    }
};

}  // namespace detail

// All lattice vectors (as integer coefficient vectors) with squared norm in
// (0, bound].  Includes both v and -v.
inline std::vector<std::pair<QVec, Rat>> short_vectors(const GramLattice& L, const Rat& bound_sq) {
    detail::LDL ldl = detail::ldl_decompose(L.gram);
    detail::Enumerator e{ldl, QVec(L.rank(), Rat(0)), bound_sq, false, true, {}};
    e.skip_zero = true;
    e.run();
    return std::move(e.hits);
}

struct ClosestResult {
    Rat dist_sq;
    std::vector<QVec> coeffs;  // integer coefficient vectors of all minimizers
    std::vector<QVec> points;  // the same minimizers in ambient coordinates
};

// Exact CVP returning all minimizers.  The target may lie outside the span;
// the orthogonal residual is handled exactly.
inline ClosestResult closest_points(const GramLattice& L, const QVec& target) {
    size_t r = L.rank();
    // Orthogonal projection onto the span: solve G c = basis * form * target.
    QVec rhs(r, Rat(0));
    for (size_t i = 0; i < r; ++i) rhs[i] = form_inner(L.form, L.basis[i], target);
    auto copt = qmat_solve(L.gram, rhs);
    if (!copt) throw std::logic_error("closest_points: singular gram");
    QVec proj_coeff = *copt;
    // residual^2 = |target|^2 - c^T G c
    Rat resid = form_norm(L.form, target);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) resid -= proj_coeff[i] * L.gram[i][j] * proj_coeff[j];

    detail::LDL ldl = detail::ldl_decompose(L.gram);
    // Babai rounding gives a valid starting bound.
    Rat start = 0;
    {
        QVec diff(r);
        for (size_t i = 0; i < r; ++i) diff[i] = Rat(round_nearest(proj_coeff[i])) - proj_coeff[i];
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) start += diff[i] * L.gram[i][j] * diff[j];
    }
    detail::Enumerator e{ldl, proj_coeff, start, true, false, {}};
    e.run();
    ClosestResult out;
    out.dist_sq = e.bound + resid;
    for (auto& [c, val] : e.hits) {
        out.coeffs.push_back(c);
        QVec pt(L.dim(), Rat(0));
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < L.dim(); ++j) pt[j] += c[i] * L.basis[i][j];
        out.points.push_back(std::move(pt));
    }
    // deterministic order: lexicographic by coefficient vector
    std::vector<size_t> idx(out.coeffs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return out.coeffs[x] < out.coeffs[y]; });
    ClosestResult sorted;
    sorted.dist_sq = out.dist_sq;
    for (size_t i : idx) {
        sorted.coeffs.push_back(out.coeffs[i]);
        sorted.points.push_back(out.points[i]);
    }
    return sorted;
}

struct MinimaProfile {
    std::vector<Rat> lambdas_sq;   // nondecreasing
    QMat witnesses;                // ambient coordinates, linearly independent
};

inline MinimaProfile successive_minima(const GramLattice& L) {
    size_t r = L.rank();
    Rat bound = 0;
    for (size_t i = 0; i < r; ++i) bound = std::max(bound, L.gram[i][i]);
    while (true) {
        auto vecs = short_vectors(L, bound);
        std::sort(vecs.begin(), vecs.end(), [](auto& a, auto& b) {
            return a.second != b.second ? a.second < b.second : a.first < b.first;
        });
        MinimaProfile prof;
        QMat chosen_coeffs;
        for (auto& [c, n] : vecs) {
            chosen_coeffs.push_back(c);
            if (qmat_rank(chosen_coeffs) < chosen_coeffs.size()) {
                chosen_coeffs.pop_back();
                continue;
            }
            prof.lambdas_sq.push_back(n);
            QVec amb(L.dim(), Rat(0));
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < L.dim(); ++j) amb[j] += c[i] * L.basis[i][j];
            prof.witnesses.push_back(std::move(amb));
            if (prof.lambdas_sq.size() == r) return prof;
        }
        bound *= 2;
    }
}

struct DeepHoleReport {
    Rat covering_radius_sq;
    QMat deep_holes;    // ambient coordinates, one representative per translation class
    QMat hole_coeffs;   // the same holes as basis coefficients, entries in [0,1)
};

namespace detail {

// Voronoi-relevant vectors as integer coefficient vectors: v is relevant iff
// +-v are the unique minima of the class v + 2L (Voronoi's criterion).
inline std::vector<QVec> relevant_vectors(const GramLattice& L) {
    size_t r = L.rank();
    std::vector<QVec> rel;
    // iterate over nonzero classes of L/2L
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        QVec half(r, Rat(0));
        for (size_t i = 0; i < r; ++i)
            if (mask & (1u << i)) half[i] = make_rat(1, 2);
        // minimize q(c - half) over integer c; coset vectors are 2(c - half)
        LDL ldl = ldl_decompose(L.gram);
        Rat start = 0;
        {
            QVec diff(r);
            for (size_t i = 0; i < r; ++i) diff[i] = Rat(round_nearest(half[i])) - half[i];
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < r; ++j) start += diff[i] * L.gram[i][j] * diff[j];
        }
        Enumerator e{ldl, half, start, true, false, {}};
        e.run();
        if (e.hits.size() != 2) continue;  // not +- a unique pair
        for (auto& [c, val] : e.hits) {
            QVec v(r);
            for (size_t i = 0; i < r; ++i) v[i] = 2 * (c[i] - half[i]);
            rel.push_back(std::move(v));
        }
    }
    std::sort(rel.begin(), rel.end());
    return rel;
}

}  // namespace detail

// Exact covering radius and deep holes.  The deep holes are the maximal-norm
// vertices of the Voronoi cell at the origin, i.e. the circumcenters of the
// maximal-circumradius Delaunay cells, deduplicated modulo the lattice.
inline DeepHoleReport covering_radius(const GramLattice& L) {
    size_t r = L.rank();
    auto rel = detail::relevant_vectors(L);
    // facet: <x, v>_G = q(v)/2 ; cell: <x, v>_G <= q(v)/2 for all relevant v
    auto inner = [&](const QVec& x, const QVec& v) {
        Rat s = 0;
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) s += x[i] * L.gram[i][j] * v[j];
        return s;
    };
    std::vector<Rat> halves(rel.size());
    for (size_t i = 0; i < rel.size(); ++i) halves[i] = inner(rel[i], rel[i]) / 2;

    std::vector<QVec> vertices;
    std::vector<size_t> subset(r);
    // enumerate r-subsets of facets
    auto process = [&](const std::vector<size_t>& S) {
        QMat A = qmat_zero(r, r);
        QVec b(r);
        for (size_t k = 0; k < r; ++k) {
            for (size_t j = 0; j < r; ++j) {
                Rat s = 0;
                for (size_t l = 0; l < r; ++l) s += L.gram[j][l] * rel[S[k]][l];
                A[k][j] = s;
            }
            b[k] = halves[S[k]];
        }
        auto x = qmat_solve(A, b);
        if (!x) return;
        for (size_t i = 0; i < rel.size(); ++i)
            if (inner(*x, rel[i]) > halves[i]) return;
        vertices.push_back(*x);
    };
    std::vector<size_t> idx;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (idx.size() == r) { process(idx); return; }
        for (size_t i = start; i + (r - idx.size()) <= rel.size(); ++i) {
            idx.push_back(i);
            self(self, i + 1);
            idx.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    if (vertices.empty()) throw std::logic_error("covering_radius: no Voronoi vertices found");

    Rat mu_sq = 0;
    for (auto& v : vertices) mu_sq = std::max(mu_sq, inner(v, v));

    // deep holes: maximal vertices, reduced mod Z^r and deduplicated
    std::vector<QVec> classes;
    for (auto& v : vertices) {
        if (inner(v, v) != mu_sq) continue;
        QVec red(r);
        for (size_t i = 0; i < r; ++i) {
            Rat f = v[i] - Rat(floor_int(v[i]));
            red[i] = f;
        }
        classes.push_back(red);
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    DeepHoleReport rep;
    rep.covering_radius_sq = mu_sq;
    for (auto& c : classes) {
        QVec amb(L.dim(), Rat(0));
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < L.dim(); ++j) amb[j] += c[i] * L.basis[i][j];
        rep.deep_holes.push_back(std::move(amb));
        rep.hole_coeffs.push_back(c);
    }
    return rep;
}

// Minkowski second theorem sanity check:
//   lambda_1 ... lambda_r * vol(B_1) >= 2^r / r! * covol .
// Evaluated on squares with certified rational bounds for the pi powers in
// vol(B_1)^2; returns the (certifiably correct) truth of the inequality.
inline bool minkowski_check(const GramLattice& L) {
    size_t r = L.rank();
    if (r < 1 || r > 4) throw std::invalid_argument("minkowski_check: rank 1..4 only");
    MinimaProfile prof = successive_minima(L);
    Rat prod_sq = 1;
    for (auto& l : prof.lambdas_sq) prod_sq *= l;
    Rat pl = pi_lower();
    Rat volB_sq_lower;  // lower bound of vol(B_1)^2 in rank r
    switch (r) {
        case 1: volB_sq_lower = 4; break;                       // vol = 2
        case 2: volB_sq_lower = pl * pl; break;                 // vol = pi
        case 3: volB_sq_lower = make_rat(16, 9) * pl * pl; break;  // vol = 4pi/3
        case 4: volB_sq_lower = pl * pl * pl * pl / 4; break;   // vol = pi^2/2
        default: return false;
    }
    Rat rfact = 1;
    for (size_t i = 2; i <= r; ++i) rfact *= Rat(static_cast<long>(i));
    Rat rhs_sq = Rat(Int(1) << (2 * r)) / (rfact * rfact) * covolume_sq(L);
    return prod_sq * volB_sq_lower >= rhs_sq;
}

}  // namespace qorder
