#pragma once

// Exact arithmetic for imaginary quadratic fields Q(sqrt(-d)) and rational
// definite quaternion algebras (a,b/Q), together with the standard involution
// and the orthogonal involution that negates ij.
//
// The quadratic case is carried as a degenerate quaternion: an element
// x + y*sqrt(-d) is stored with the sqrt(-d) coordinate in the j slot
// (i and ij coordinates identically zero), so every downstream module
// handles a single element type.

#include "rational.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qorder {

enum class AlgebraKind { ImaginaryQuadratic, Quaternion };

struct AlgebraDescriptor {
    AlgebraKind kind = AlgebraKind::Quaternion;
    Rat a;  // i^2 = a  (for the quadratic case: a = -d with j^2 = -d, i unused)
    Rat b;  // j^2 = b

    static AlgebraDescriptor quaternion(const Rat& a, const Rat& b) {
        if (a >= 0 || b >= 0) throw std::invalid_argument("definite quaternion algebra needs a<0, b<0");
        return {AlgebraKind::Quaternion, a, b};
    }
    // Q(sqrt(-d)): stored with j^2 = -d so the fixed 3-space conventions of
    // the dim-4 case degrade gracefully (elements live in span(1, j)).
    static AlgebraDescriptor imaginary_quadratic(const Rat& d) {
        if (d <= 0) throw std::invalid_argument("imaginary quadratic needs d > 0");
        return {AlgebraKind::ImaginaryQuadratic, Rat(-1), -d};
    }

    bool definite() const { return a < 0 && b < 0; }
    bool is_quadratic() const { return kind == AlgebraKind::ImaginaryQuadratic; }
    bool operator==(const AlgebraDescriptor& o) const {
        return kind == o.kind && a == o.a && b == o.b;
    }
    bool operator!=(const AlgebraDescriptor& o) const { return !(*this == o); }

    std::string str() const {
        if (is_quadratic()) return "Q(sqrt(" + rat_str(b) + "))";
        return "(" + rat_str(a) + "," + rat_str(b) + "/Q)";
    }
};

enum class InvolutionKind { Standard, OrthogonalIJ };

// Descriptor of the involution used for dim = 4.  In the convention fixed
// throughout, the orthogonal involution acts as the identity on span(1,i,j)
// and negates ij; xi = ij, nrm(xi) = a*b, and disc is the negative squarefree
// part of nrm(xi).
struct InvolutionDescriptor {
    InvolutionKind kind = InvolutionKind::OrthogonalIJ;
    Rat norm_xi;  // nrm(ij) = a*b in the chosen basis
    Int disc;     // negative squarefree integer

    static InvolutionDescriptor orthogonal_ij(const AlgebraDescriptor& alg) {
        if (alg.is_quadratic()) throw std::invalid_argument("orthogonal involution needs a quaternion algebra");
        InvolutionDescriptor inv;
        inv.kind = InvolutionKind::OrthogonalIJ;
        inv.norm_xi = alg.a * alg.b;
        inv.disc = -squarefree_part(inv.norm_xi);
        return inv;
    }
    bool operator==(const InvolutionDescriptor& o) const {
        return kind == o.kind && norm_xi == o.norm_xi && disc == o.disc;
    }
};

struct QuatElt {
    AlgebraDescriptor alg;
    // coordinates over the basis 1, i, j, ij
    Rat x, y, z, t;

    QuatElt() = default;
    QuatElt(const AlgebraDescriptor& alg_, Rat x_, Rat y_, Rat z_, Rat t_)
        : alg(alg_), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)), t(std::move(t_)) {
        if (alg.is_quadratic() && (y != 0 || t != 0))
            throw std::invalid_argument("quadratic element with i/ij coordinates");
    }

    static QuatElt zero(const AlgebraDescriptor& alg) { return {alg, 0, 0, 0, 0}; }
    static QuatElt one(const AlgebraDescriptor& alg) { return {alg, 1, 0, 0, 0}; }
    static QuatElt scalar(const AlgebraDescriptor& alg, const Rat& c) { return {alg, c, 0, 0, 0}; }

    bool is_zero() const { return x == 0 && y == 0 && z == 0 && t == 0; }
    bool is_scalar() const { return y == 0 && z == 0 && t == 0; }

    std::array<Rat, 4> coords() const { return {x, y, z, t}; }

    bool operator==(const QuatElt& o) const {
        return alg == o.alg && x == o.x && y == o.y && z == o.z && t == o.t;
    }
    bool operator!=(const QuatElt& o) const { return !(*this == o); }
};

inline void check_same_algebra(const QuatElt& u, const QuatElt& v) {
    if (u.alg != v.alg) throw std::invalid_argument("algebra descriptor mismatch");
}

inline QuatElt operator+(const QuatElt& u, const QuatElt& v) {
    check_same_algebra(u, v);
    return {u.alg, u.x + v.x, u.y + v.y, u.z + v.z, u.t + v.t};
}

inline QuatElt operator-(const QuatElt& u, const QuatElt& v) {
    check_same_algebra(u, v);
    return {u.alg, u.x - v.x, u.y - v.y, u.z - v.z, u.t - v.t};
}

inline QuatElt operator-(const QuatElt& u) { return {u.alg, -u.x, -u.y, -u.z, -u.t}; }

inline QuatElt operator*(const Rat& c, const QuatElt& u) {
    return {u.alg, c * u.x, c * u.y, c * u.z, c * u.t};
}

// Product under i^2 = a, j^2 = b, ij = -ji.
inline QuatElt multiply(const QuatElt& u, const QuatElt& v) {
    check_same_algebra(u, v);
    const Rat& a = u.alg.a;
    const Rat& b = u.alg.b;
    Rat x = u.x * v.x + a * u.y * v.y + b * u.z * v.z - a * b * u.t * v.t;
    Rat y = u.x * v.y + u.y * v.x - b * u.z * v.t + b * u.t * v.z;
    Rat z = u.x * v.z + u.z * v.x + a * u.y * v.t - a * u.t * v.y;
    Rat t = u.x * v.t + u.t * v.x + u.y * v.z - u.z * v.y;
    return {u.alg, x, y, z, t};
}

inline QuatElt operator*(const QuatElt& u, const QuatElt& v) { return multiply(u, v); }

// Standard involution x + yi + zj + tij -> x - yi - zj - tij.
inline QuatElt conjugate_standard(const QuatElt& u) { return {u.alg, u.x, -u.y, -u.z, -u.t}; }

// Orthogonal involution: fixes span(1,i,j), negates ij.
inline QuatElt apply_involution(const InvolutionDescriptor& inv, const QuatElt& u) {
    if (inv.kind == InvolutionKind::Standard) return conjugate_standard(u);
    return {u.alg, u.x, u.y, u.z, -u.t};
}

inline Rat reduced_norm(const QuatElt& u) {
    const Rat& a = u.alg.a;
    const Rat& b = u.alg.b;
    return u.x * u.x - a * u.y * u.y - b * u.z * u.z + a * b * u.t * u.t;
}

inline Rat reduced_trace(const QuatElt& u) { return 2 * u.x; }

inline std::pair<Rat, Rat> norm_trace(const QuatElt& u) {
    return {reduced_norm(u), reduced_trace(u)};
}

// An element is integral iff its reduced characteristic polynomial
// x^2 - tr*x + nrm has integer coefficients.
inline bool is_integral(const QuatElt& u) {
    return is_integer(reduced_trace(u)) && is_integer(reduced_norm(u));
}

inline QuatElt inverse(const QuatElt& u) {
    if (u.is_zero()) throw std::domain_error("division by zero quaternion");
    Rat n = reduced_norm(u);
    return make_rat(1, 1) / n * conjugate_standard(u);
}

inline QuatElt operator/(const QuatElt& u, const Rat& c) {
    if (c == 0) throw std::domain_error("division by zero scalar");
    Rat inv = 1 / c;
    return inv * u;
}

// Hilbert symbol (a, b)_p over Q; p = 0 denotes the infinite place.
inline int hilbert_symbol(Rat a, Rat b, const Int& p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert symbol needs nonzero arguments");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;

    // Strip squares: only the class of a, b mod squares matters.
    auto reduce = [](const Rat& q) -> Int { return squarefree_part(q); };
    Int A = reduce(a), B = reduce(b);

    auto val = [](Int& n, const Int& p) {
        int v = 0;
        while (n % p == 0) { n /= p; ++v; }
        return v;
    };

    if (p == 2) {
        Int u = A, v = B;
        int alpha = val(u, p), beta = val(v, p);
        auto eps = [](const Int& n) { return ((n - 1) / 2) % 2 != 0; };     // (n-1)/2 mod 2
        auto omega = [](const Int& n) { return ((n * n - 1) / 8) % 2 != 0; };  // (n^2-1)/8 mod 2
        bool e = (eps(u) && eps(v)) ^ (alpha % 2 != 0 && omega(v)) ^ (beta % 2 != 0 && omega(u));
        return e ? -1 : 1;
    }
    Int u = A, v = B;
    int alpha = val(u, p), beta = val(v, p);
    bool e = false;
    if (alpha % 2 != 0 && beta % 2 != 0 && ((p - 1) / 2) % 2 != 0) e = !e;
    if (beta % 2 != 0 && legendre_symbol(u, p) == -1) e = !e;
    if (alpha % 2 != 0 && legendre_symbol(v, p) == -1) e = !e;
    return e ? -1 : 1;
}

// Reduced discriminant of a definite quaternion algebra: the product of the
// finite primes where it ramifies.
inline Int algebra_discriminant(const AlgebraDescriptor& alg) {
    if (alg.is_quadratic()) throw std::invalid_argument("algebra_discriminant needs a quaternion algebra");
    if (!alg.definite()) throw std::invalid_argument("algebra_discriminant needs a definite algebra");
    // Ramified primes divide 2*num(a)*den(a)*num(b)*den(b).
    Int candidates = 2 * num(alg.a) * den(alg.a) * num(alg.b) * den(alg.b);
    Int disc = 1;
    for (const Int& p : primes_dividing(candidates))
        if (hilbert_symbol(alg.a, alg.b, p) == -1) disc *= p;
    return disc;
}

// Field discriminant of Q(sqrt(-d)), d > 0 squarefree: -d if -d = 1 mod 4, else -4d.
inline Int quadratic_field_discriminant(const Int& d) {
    Int md = -d;
    Int r = ((md % 4) + 4) % 4;
    return r == 1 ? md : 4 * md;
}

inline std::string elt_str(const QuatElt& u) {
    auto term = [](const Rat& c, const char* sym, bool& first) -> std::string {
        if (c == 0) return "";
        std::string s;
        if (!first && c > 0) s += "+";
        if (c == -1 && sym[0] != '\0') s += "-";
        else if (c != 1 || sym[0] == '\0') s += rat_str(c);
        s += sym;
        first = false;
        return s;
    };
    bool first = true;
    std::string s;
    s += term(u.x, "", first);
    s += term(u.y, "i", first);
    if (u.alg.is_quadratic()) s += term(u.z, "w", first);
    else s += term(u.z, "j", first);
    s += term(u.t, "ij", first);
    if (s.empty()) s = "0";
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const QuatElt& u) { return os << elt_str(u); }

}  // namespace qorder
