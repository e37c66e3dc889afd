#pragma once

// Independent oracles used to derive expected values for the test suite.
// These deliberately avoid the library's own computational paths:
//  - quaternion products via string rewriting of basis words,
//  - CVP by exhaustive box enumeration with a certified coefficient box,
//  - covering radius by exhaustive empty-circumsphere search over candidate
//    simplices in a certified neighborhood.

#include <qorder/lattice.hpp>
#include <qorder/qarith.hpp>

#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using namespace qorder;

// --- word-rewriting quaternion multiplication ------------------------------

// Multiply two basis words from {1,i,j,k} (k denotes ij) by rewriting:
// returns (coefficient, basis index).  Independent of QuatElt::multiply.
inline std::pair<Rat, int> word_product(int u, int v, const Rat& a, const Rat& b) {
    // table[u][v] built from the relations i*i=a, j*j=b, i*j=k, j*i=-k,
    // i*k = i*(i*j) = a*j, k*i = (i*j)*i = -(i*i)*j ... derived by hand once:
    struct Entry { int basis; int sa; int sb; int sign; };  // coeff = sign * a^sa * b^sb
    static const Entry table[4][4] = {
        /* 1 */ {{0,0,0,1},{1,0,0,1},{2,0,0,1},{3,0,0,1}},
        /* i */ {{1,0,0,1},{0,1,0,1},{3,0,0,1},{2,1,0,1}},
        /* j */ {{2,0,0,1},{3,0,0,-1},{0,0,1,1},{1,0,1,-1}},
        /* k */ {{3,0,0,1},{2,1,0,-1},{1,0,1,1},{0,1,1,-1}},
    };
    const Entry& e = table[u][v];
    Rat c = Rat(e.sign);
    for (int s = 0; s < e.sa; ++s) c *= a;
    for (int s = 0; s < e.sb; ++s) c *= b;
    return {c, e.basis};
}

inline QuatElt symbolic_multiply(const QuatElt& u, const QuatElt& v) {
    std::array<Rat, 4> uc = u.coords(), vc = v.coords(), out{Rat(0), Rat(0), Rat(0), Rat(0)};
    for (int p = 0; p < 4; ++p) {
        if (uc[p] == 0) continue;
        for (int q = 0; q < 4; ++q) {
            if (vc[q] == 0) continue;
            auto [c, w] = word_product(p, q, u.alg.a, u.alg.b);
            out[w] += uc[p] * vc[q] * c;
        }
    }
    return {u.alg, out[0], out[1], out[2], out[3]};
}

// --- brute-force CVP --------------------------------------------------------

// Independent Gram-Schmidt based Babai bound: any point of the span is within
// sqrt(sum |b_i*|^2)/2 of the lattice.
inline Rat babai_bound_sq(const QMat& gram) {
    size_t n = gram.size();
    QMat mu = qmat_identity(n);
    QVec d(n);
    Rat sum = 0;
    for (size_t i = 0; i < n; ++i) {
        Rat di = gram[i][i];
        for (size_t k = 0; k < i; ++k) di -= d[k] * mu[i][k] * mu[i][k];
        d[i] = di;
        for (size_t j = i + 1; j < n; ++j) {
            Rat v = gram[j][i];
            for (size_t k = 0; k < i; ++k) v -= d[k] * mu[j][k] * mu[i][k];
            mu[j][i] = v / di;
        }
        sum += di;
    }
    return sum / 4;
}

// All closest lattice points to a target given in *basis coordinates*.
// Exhaustive search over a certified box: |c_i - t_i| <= sqrt(B * (G^-1)_ii)
// for any c with q(c - t) <= B.
inline std::pair<Rat, std::vector<QVec>> brute_cvp(const QMat& gram, const QVec& t) {
    size_t n = gram.size();
    QMat ginv = *qmat_inverse(gram);
    // initial bound: rounding t
    QVec r0(n);
    for (size_t i = 0; i < n; ++i) r0[i] = Rat(round_nearest(t[i]));
    auto qval = [&](const QVec& c) {
        Rat s = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) s += (c[i] - t[i]) * gram[i][j] * (c[j] - t[j]);
        return s;
    };
    Rat best = qval(r0);
    std::vector<Int> lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
        Int rad = ceil_sqrt(best * ginv[i][i]);
        lo[i] = floor_int(t[i]) - rad;
        hi[i] = ceil_int(t[i]) + rad;
    }
    std::vector<QVec> mins;
    QVec c(n);
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == n) {
            Rat v = qval(c);
            if (v < best) { best = v; mins.clear(); }
            if (v == best) mins.push_back(c);
            return;
        }
        for (Int x = lo[i]; x <= hi[i]; ++x) { c[i] = Rat(x); self(self, i + 1); }
    };
    rec(rec, 0);
    std::sort(mins.begin(), mins.end());
    return {best, mins};
}

// --- brute-force covering radius -------------------------------------------

// Exhaustive Delaunay search: every Delaunay cell has a translate whose
// circumcenter lies in the half-open cell [0,1)^n (basis coordinates); its
// circumradius is at most the Babai bound, so its vertices are lattice points
// within that distance of the cell.  We enumerate all (n+1)-subsets of such
// points that are pairwise within twice the bound, compute circumcenters
// exactly, keep empty circumspheres with center in the box, and take the
// maximal radius.  Returns (mu^2, hole classes as reduced basis coordinates).
inline std::pair<Rat, std::vector<QVec>> brute_covering(const QMat& gram) {
    size_t n = gram.size();
    Rat mu_ub = babai_bound_sq(gram);  // squared upper bound
    QMat ginv = *qmat_inverse(gram);
    // lattice points within distance sqrt(mu_ub) of the box [0,1]^n:
    // coefficient range [-K_i, 1 + K_i] with K_i = ceil(sqrt(mu_ub*(G^-1)_ii)).
    std::vector<Int> lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
        Int K = ceil_sqrt(mu_ub * ginv[i][i]);
        lo[i] = -K;
        hi[i] = K + 1;
    }
    std::vector<QVec> pts;
    {
        QVec c(n);
        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == n) { pts.push_back(c); return; }
            for (Int x = lo[i]; x <= hi[i]; ++x) { c[i] = Rat(x); self(self, i + 1); }
        };
        rec(rec, 0);
    }
    auto ip = [&](const QVec& u, const QVec& v) {
        Rat s = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) s += u[i] * gram[i][j] * v[j];
        return s;
    };
    auto dist_sq = [&](const QVec& u, const QVec& v) {
        QVec d = qvec_sub(u, v);
        return ip(d, d);
    };
    size_t N = pts.size();
    std::vector<std::vector<size_t>> nbr(N);
    for (size_t i = 0; i < N; ++i)
        for (size_t j = i + 1; j < N; ++j)
            if (dist_sq(pts[i], pts[j]) <= 4 * mu_ub) nbr[i].push_back(j);

    Rat mu_sq = 0;
    std::vector<QVec> holes;
    std::vector<size_t> S;
    auto try_simplex = [&](const std::vector<size_t>& simp) {
        // circumcenter: 2 <x, p_j - p_0> = q(p_j) - q(p_0)
        QMat A = qmat_zero(n, n);
        QVec b(n);
        for (size_t k = 1; k <= n; ++k) {
            QVec dvec = qvec_sub(pts[simp[k]], pts[simp[0]]);
            for (size_t j = 0; j < n; ++j) {
                Rat s = 0;
                for (size_t l = 0; l < n; ++l) s += gram[j][l] * dvec[l];
                A[k - 1][j] = 2 * s;
            }
            b[k - 1] = ip(pts[simp[k]], pts[simp[k]]) - ip(pts[simp[0]], pts[simp[0]]);
        }
        auto x = qmat_solve(A, b);
        if (!x) return;
        for (size_t i = 0; i < n; ++i)
            if ((*x)[i] < 0 || (*x)[i] >= 1) return;  // anchor: center in [0,1)^n
        Rat rho = dist_sq(*x, pts[simp[0]]);
        if (rho > mu_ub) return;
        for (size_t i = 0; i < N; ++i)
            if (dist_sq(pts[i], *x) < rho) return;  // not empty
        if (rho > mu_sq) { mu_sq = rho; holes.clear(); }
        if (rho == mu_sq) holes.push_back(*x);
    };
    auto rec2 = [&](auto&& self, size_t start) -> void {
        if (S.size() == n + 1) { try_simplex(S); return; }
        size_t base = S.empty() ? 0 : S.back() + 1;
        for (size_t i = std::max(start, base); i < N; ++i) {
            bool ok = true;
            for (size_t s : S)
                if (dist_sq(pts[s], pts[i]) > 4 * mu_ub) { ok = false; break; }
            if (!ok) continue;
            S.push_back(i);
            self(self, i + 1);
            S.pop_back();
        }
    };
    rec2(rec2, 0);
    // reduce holes mod Z^n and dedup
    for (auto& h : holes)
        for (size_t i = 0; i < n; ++i) h[i] -= Rat(floor_int(h[i]));
    std::sort(holes.begin(), holes.end());
    holes.erase(std::unique(holes.begin(), holes.end()), holes.end());
    return {mu_sq, holes};
}

// --- random generators ------------------------------------------------------

inline QMat random_unimodular(size_t n, std::mt19937_64& rng, int steps = 12) {
    QMat U = qmat_identity(n);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int c = coef(rng);
        if (c == 0) continue;
        for (size_t k = 0; k < n; ++k) U[i][k] += Rat(c) * U[j][k];
    }
    return U;
}

// Random full-rank integer basis with small entries.
inline QMat random_basis(size_t n, std::mt19937_64& rng, int max_entry = 2) {
    std::uniform_int_distribution<int> coef(-max_entry, max_entry);
    while (true) {
        QMat B = qmat_zero(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) B[i][j] = Rat(coef(rng));
        if (qmat_det(B) != 0) return B;
    }
}

inline QuatElt random_element(const AlgebraDescriptor& alg, std::mt19937_64& rng, int max_num = 6,
                              int max_den = 2) {
    std::uniform_int_distribution<int> numd(-max_num, max_num);
    std::uniform_int_distribution<int> dend(1, max_den);
    auto r = [&] { return make_rat(numd(rng), dend(rng)); };
    if (alg.is_quadratic()) return {alg, r(), 0, r(), 0};
    return {alg, r(), r(), r(), r()};
}

}  // namespace oracle
