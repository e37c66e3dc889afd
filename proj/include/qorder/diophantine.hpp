#pragma once

// Rational points on diagonal conics: decide solvability by Hilbert symbols
// (Hasse-Minkowski) and find points by bounded search justified by Holzer's
// theorem on small solutions of Legendre equations.

#include "qarith.hpp"
#include "rational.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>

namespace qorder {

// A y^2 + B z^2 = C over Q (A, B, C > 0) is solvable iff the homogeneous form
// (A/C) y^2 + (B/C) z^2 = w^2 is isotropic at every place, i.e. the Hilbert
// symbol (A/C, B/C)_p equals 1 at the finite primes dividing 2*num*den.
inline bool binary_represents(const Rat& A, const Rat& B, const Rat& C) {
    if (A <= 0 || B <= 0 || C <= 0)
        throw std::invalid_argument("binary_represents: need positive data");
    Rat u = A / C, v = B / C;
    Int primes = 2 * num(u) * den(u) * num(v) * den(v);
    for (const Int& p : primes_dividing(primes))
        if (hilbert_symbol(u, v, p) == -1) return false;
    return true;
}

namespace detail {

// Primitive solution of a y^2 + b z^2 = c w^2 for positive squarefree
// pairwise-coprime integers; by Holzer's theorem a solution exists with
// |z| <= sqrt(ac) and |w| <= sqrt(ab), so this search is exhaustive.
inline std::optional<std::array<Int, 3>> holzer_search(const Int& a, const Int& b, const Int& c) {
    Int wmax = isqrt_floor(Rat(a * b)) + 1;
    for (Int w = 1; w <= wmax; ++w) {
        Int rhs0 = c * w * w;
        for (Int z = 0; b * z * z <= rhs0; ++z) {
            Int rest = rhs0 - b * z * z;
            if (rest % a != 0) continue;
            auto y = exact_sqrt(Int(rest / a));
            if (y) return std::array<Int, 3>{*y, z, w};
        }
    }
    return std::nullopt;
}

// Rational (y, z) with a y^2 + b z^2 = c for positive integers a, b, c,
// assuming solvability; reduces to the coprime squarefree case step by step
// at the rational level.
inline std::pair<Rat, Rat> solve_binary_integer(Int a, Int b, Int c) {
    // strip square factors: a = a' s^2 -> y scales by 1/s
    auto square_part = [](const Int& n) {
        Int s = 1;
        for (auto& [p, e] : factorize(n))
            for (int k = 0; k + 1 < e; k += 2) s *= p;
        return s;
    };
    if (Int s = square_part(a); s > 1) {
        auto [y, z] = solve_binary_integer(a / (s * s), b, c);
        return {y / Rat(s), z};
    }
    if (Int s = square_part(b); s > 1) {
        auto [y, z] = solve_binary_integer(a, b / (s * s), c);
        return {y, z / Rat(s)};
    }
    if (Int s = square_part(c); s > 1) {
        auto [y, z] = solve_binary_integer(a, b, c / (s * s));
        return {Rat(s) * y, Rat(s) * z};
    }
    if (Int g = gcd(a, gcd(b, c)); g > 1) {
        return solve_binary_integer(a / g, b / g, c / g);
    }
    if (Int g = gcd(a, b); g > 1) {
        // p | a, b, not c: (a/g) Y^2 + (b/g) Z^2 = c g, then (y,z) = (Y/g, Z/g)...
        // check: a(Y/g)^2 + b(Z/g)^2 = [(a/g)Y^2 + (b/g)Z^2]/g = cg/g = c
        auto [Y, Z] = solve_binary_integer(a / g, b / g, c * g);
        return {Y / Rat(g), Z / Rat(g)};
    }
    if (Int g = gcd(a, c); g > 1) {
        // (a/g) Y^2 + (b g) Z^2 = c/g, then y = Y, z = g Z
        auto [Y, Z] = solve_binary_integer(a / g, b * g, c / g);
        return {Y, Rat(g) * Z};
    }
    if (Int g = gcd(b, c); g > 1) {
        auto [Y, Z] = solve_binary_integer(a * g, b / g, c / g);
        return {Rat(g) * Y, Z};
    }
    auto sol = holzer_search(a, b, c);
    if (!sol)
        throw std::logic_error("solve_binary_integer: certified-solvable conic with no small solution");
    auto [y0, z0, w0] = *sol;
    return {make_rat(y0, w0), make_rat(z0, w0)};
}

}  // namespace detail

// Find (y, z) with A y^2 + B z^2 = C exactly; nullopt iff unsolvable over Q.
// Deterministic: fixed reduction order and scan order.
inline std::optional<std::pair<Rat, Rat>> solve_binary_conic(const Rat& A, const Rat& B,
                                                             const Rat& C) {
    if (C == 0) return std::make_pair(Rat(0), Rat(0));
    if (!binary_represents(A, B, C)) return std::nullopt;
    Int L = lcm(lcm(den(A), den(B)), den(C));
    auto [y, z] = detail::solve_binary_integer(num(A * Rat(L)), num(B * Rat(L)), num(C * Rat(L)));
    if (A * y * y + B * z * z != C) throw std::logic_error("solve_binary_conic: scaling error");
    return std::make_pair(y, z);
}

// Find (y, z, t) with A y^2 + B z^2 + C t^2 = D (A, B, C > 0, D >= 0).
// Splits off t over a deterministic sequence of rationals and solves the
// remaining binary conic.  Callers that know a solution exists must treat
// nullopt as an anomaly to report.
inline std::optional<std::array<Rat, 3>> solve_ternary_conic(const Rat& A, const Rat& B,
                                                             const Rat& C, const Rat& D) {
    if (D == 0) return std::array<Rat, 3>{Rat(0), Rat(0), Rat(0)};
    for (long d = 1; d <= 8; ++d) {
        for (long n = 0; Rat(n * n) * C <= D * Rat(d * d); ++n) {
            if (gcd(Int(n), Int(d)) != 1) continue;
            Rat t = make_rat(n, d);
            Rat rest = D - C * t * t;
            if (rest < 0) break;
            if (rest == 0) return std::array<Rat, 3>{Rat(0), Rat(0), t};
            auto yz = solve_binary_conic(A, B, rest);
            if (yz) return std::array<Rat, 3>{yz->first, yz->second, t};
        }
    }
    return std::nullopt;
}

}  // namespace qorder
