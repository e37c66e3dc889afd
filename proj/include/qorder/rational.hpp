#pragma once

// Exact rational scalar type and small integer number-theory helpers.
// All arithmetic in this library is exact; no floating point is used
// anywhere a mathematical decision is made.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qorder {

using Int = mpz_class;
using Rat = mpq_class;

// mpq_class does not canonicalize on construction from (num, den).
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

inline Int num(const Rat& q) { return q.get_num(); }
inline Int den(const Rat& q) { return q.get_den(); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// Nearest integer to q; ties round down (deterministic).
inline Int round_nearest(const Rat& q) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Rat frac = q - Rat(fl);
    return frac > make_rat(1, 2) ? Int(fl + 1) : fl;
}

inline Int floor_int(const Rat& q) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return fl;
}

inline Int ceil_int(const Rat& q) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return c;
}

// floor(sqrt(q)) for q >= 0.
inline Int isqrt_floor(const Rat& q) {
    if (q < 0) throw std::domain_error("isqrt of negative");
    // floor(sqrt(n/d)) = floor(sqrt(n*d)/d)
    Int nd = q.get_num() * q.get_den();
    Int r;
    mpz_sqrt(r.get_mpz_t(), nd.get_mpz_t());
    return r / q.get_den();
}

inline Int ceil_sqrt(const Rat& q) {
    Int f = isqrt_floor(q);
    return (Rat(f * f) >= q) ? f : Int(f + 1);
}

inline std::optional<Int> exact_sqrt(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r == n) return r;
    return std::nullopt;
}

inline bool is_square(const Rat& q) {
    if (q < 0) return false;
    return exact_sqrt(num(q)).has_value() && exact_sqrt(den(q)).has_value();
}

inline std::optional<Rat> exact_sqrt(const Rat& q) {
    if (q < 0) return std::nullopt;
    auto n = exact_sqrt(num(q));
    auto d = exact_sqrt(den(q));
    if (n && d) return make_rat(*n, *d);
    return std::nullopt;
}

// Trial-division factorization; fine for the small integers the census meets.
inline std::vector<std::pair<Int, int>> factorize(Int n) {
    if (n < 0) n = -n;
    std::vector<std::pair<Int, int>> out;
    if (n <= 1) return out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Squarefree part of a nonzero rational, as an integer: the unique squarefree
// s with q = s * (rational square).
inline Int squarefree_part(const Rat& q) {
    if (q == 0) throw std::domain_error("squarefree part of zero");
    Int n = num(q) * den(q);
    int sign = n < 0 ? -1 : 1;
    if (n < 0) n = -n;
    Int s = 1;
    for (auto& [p, e] : factorize(n))
        if (e % 2 == 1) s *= p;
    return sign * s;
}

inline std::vector<Int> primes_dividing(const Int& n) {
    std::vector<Int> ps;
    for (auto& [p, e] : factorize(n)) ps.push_back(p);
    return ps;
}

inline std::vector<long> primes_up_to(long bound) {
    std::vector<bool> sieve(bound + 1, true);
    std::vector<long> out;
    for (long p = 2; p <= bound; ++p) {
        if (!sieve[p]) continue;
        out.push_back(p);
        for (long q = 2 * p; q <= bound; q += p) sieve[q] = false;
    }
    return out;
}

// (a/p) for odd prime p.
inline int legendre_symbol(const Int& a, const Int& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

// Rational interval bounds for pi, tight enough for every comparison in the
// census (the quantities compared are never within 1e-15 of the threshold).
inline Rat pi_lower() { return make_rat(Int("314159265358979323"), Int("100000000000000000")); }
inline Rat pi_upper() { return make_rat(Int("314159265358979324"), Int("100000000000000000")); }

// Parsing/formatting: rationals travel as "p/q" or "p" strings in all file
// formats, never as floats.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational string");
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational string: '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

}  // namespace qorder
