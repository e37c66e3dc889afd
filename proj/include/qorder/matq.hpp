#pragma once

// Dense rational vectors/matrices for the tiny sizes this library needs
// (ranks up to 4, ambient dimensions up to 4).  Includes exact Gaussian
// elimination and Hermite normal form over Z, extended to rational lattices
// via denominator scaling.

#include "rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qorder {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;  // row-major

inline QMat qmat_zero(size_t r, size_t c) { return QMat(r, QVec(c, Rat(0))); }

inline QMat qmat_identity(size_t n) {
    QMat m = qmat_zero(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline QVec qvec_add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline QVec qvec_sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline QVec qvec_scale(const Rat& c, const QVec& a) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool qvec_is_zero(const QVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

inline QMat qmat_mul(const QMat& A, const QMat& B) {
    size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    QMat C = qmat_zero(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (A[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
        }
    return C;
}

inline QVec qmat_apply(const QMat& A, const QVec& v) {
    QVec r(A.size(), Rat(0));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += A[i][j] * v[j];
    return r;
}

inline QMat qmat_transpose(const QMat& A) {
    if (A.empty()) return {};
    QMat T = qmat_zero(A[0].size(), A.size());
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
    return T;
}

inline Rat qmat_det(QMat A) {
    size_t n = A.size();
    Rat det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) { std::swap(A[piv], A[col]); det = -det; }
        det *= A[col][col];
        Rat inv = 1 / A[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (A[r][col] == 0) continue;
            Rat f = A[r][col] * inv;
            for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
        }
    }
    return det;
}

inline size_t qmat_rank(QMat A) {
    size_t rows = A.size(), cols = A.empty() ? 0 : A[0].size();
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && A[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[rank]);
        Rat inv = 1 / A[rank][col];
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][col] == 0) continue;
            Rat f = A[r][col] * inv;
            for (size_t c = col; c < cols; ++c) A[r][c] -= f * A[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Solve A x = b exactly; empty result if singular/inconsistent.
inline std::optional<QVec> qmat_solve(QMat A, QVec b) {
    size_t n = A.size();
    if (n == 0) return QVec{};
    size_t m = A[0].size();
    // Gaussian elimination with partial (first nonzero) pivoting.
    std::vector<size_t> pivot_col;
    size_t rank = 0;
    for (size_t col = 0; col < m && rank < n; ++col) {
        size_t piv = rank;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(A[piv], A[rank]);
        std::swap(b[piv], b[rank]);
        Rat inv = 1 / A[rank][col];
        for (size_t r = 0; r < n; ++r) {
            if (r == rank || A[r][col] == 0) continue;
            Rat f = A[r][col] * inv;
            for (size_t c = col; c < m; ++c) A[r][c] -= f * A[rank][c];
            b[r] -= f * b[rank];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (size_t r = rank; r < n; ++r)
        if (b[r] != 0) return std::nullopt;  // inconsistent
    if (rank < m) return std::nullopt;       // underdetermined: treat as failure
    QVec x(m, Rat(0));
    for (size_t r = 0; r < rank; ++r) x[pivot_col[r]] = b[r] / A[r][pivot_col[r]];
    return x;
}

inline std::optional<QMat> qmat_inverse(const QMat& A) {
    size_t n = A.size();
    QMat aug(n, QVec(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = A[i][j];
        aug[i][n + i] = 1;
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && aug[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(aug[piv], aug[col]);
        Rat inv = 1 / aug[col][col];
        for (size_t c = 0; c < 2 * n; ++c) aug[col][c] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            Rat f = aug[r][col];
            for (size_t c = 0; c < 2 * n; ++c) aug[r][c] -= f * aug[col][c];
        }
    }
    QMat inv = qmat_zero(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

// --- Hermite normal form over Z -------------------------------------------

using ZVec = std::vector<Int>;
using ZMat = std::vector<ZVec>;

// Row-style HNF: returns a basis in row echelon form with positive pivots and
// entries above each pivot reduced to [0, pivot).  Zero rows are dropped.
// Unique for a given row space, so it doubles as a lattice equality test.
inline ZMat hnf_rows(ZMat M) {
    size_t rows = M.size();
    if (rows == 0) return M;
    size_t cols = M[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // Euclidean reduction within column c, rows r..end.
        while (true) {
            size_t piv = rows;
            for (size_t i = r; i < rows; ++i) {
                if (M[i][c] == 0) continue;
                if (piv == rows || abs(M[i][c]) < abs(M[piv][c])) piv = i;
            }
            if (piv == rows) break;
            std::swap(M[piv], M[r]);
            if (M[r][c] < 0)
                for (auto& x : M[r]) x = -x;
            bool clean = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (M[i][c] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), M[i][c].get_mpz_t(), M[r][c].get_mpz_t());
                for (size_t j = 0; j < cols; ++j) M[i][j] -= q * M[r][j];
                if (M[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (M[r][c] == 0) continue;
        // Reduce entries above the pivot into [0, pivot).
        for (size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), M[i][c].get_mpz_t(), M[r][c].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) M[i][j] -= q * M[r][j];
        }
        ++r;
    }
    M.resize(r);
    return M;
}

// HNF basis of the rational lattice spanned by the given generators.
// Scales to a common denominator, runs integer HNF, scales back.
inline QMat hnf_rational(const QMat& gens) {
    if (gens.empty()) return {};
    size_t cols = gens[0].size();
    Int D = 1;
    for (auto& row : gens)
        for (auto& x : row) D = lcm(D, den(x));
    ZMat Z;
    for (auto& row : gens) {
        if (qvec_is_zero(row)) continue;
        ZVec zr(cols);
        for (size_t j = 0; j < cols; ++j) zr[j] = num(row[j] * Rat(D));
        Z.push_back(std::move(zr));
    }
    ZMat H = hnf_rows(std::move(Z));
    QMat out;
    for (auto& row : H) {
        QVec qr(cols);
        for (size_t j = 0; j < cols; ++j) qr[j] = make_rat(row[j], D);
        out.push_back(std::move(qr));
    }
    return out;
}

inline bool qmat_equal(const QMat& A, const QMat& B) {
    if (A.size() != B.size()) return false;
    for (size_t i = 0; i < A.size(); ++i)
        if (A[i] != B[i]) return false;
    return true;
}

inline std::string qmat_str(const QMat& A) {
    std::string s;
    for (auto& row : A) {
        for (size_t j = 0; j < row.size(); ++j) s += (j ? "," : "") + rat_str(row[j]);
        s += ";";
    }
    return s;
}

}  // namespace qorder
