#pragma once

// Boundary geometry: the Moebius generators E, T, phi, psi acting on the
// boundary of hyperbolic space (exactly, over Q), their relations, dihedral
// angles between unit spheres centered at lattice points, and the lattice
// criterion for the reflection-translation group.

#include "euclid.hpp"

#include <variant>

namespace qorder {

// A point of the boundary model: C for dim 3, the fixed 3-space for dim 4,
// the full quaternion space for dim 5 -- or the point at infinity.
struct BoundaryPoint {
    bool infinite = false;
    QuatElt value;

    static BoundaryPoint infinity(const AlgebraDescriptor& alg) {
        return {true, QuatElt::zero(alg)};
    }
    static BoundaryPoint at(QuatElt v) { return {false, std::move(v)}; }
    bool operator==(const BoundaryPoint& o) const {
        if (infinite != o.infinite) return false;
        return infinite || value == o.value;
    }
};

enum class GenKind { E, T, Phi, Psi };

struct MoebiusGen {
    GenKind kind;
    QuatElt alpha;  // lattice element; ignored for Psi

    static MoebiusGen E(QuatElt a) { return {GenKind::E, std::move(a)}; }
    static MoebiusGen T(QuatElt a) { return {GenKind::T, std::move(a)}; }
    static MoebiusGen Phi(QuatElt a) { return {GenKind::Phi, std::move(a)}; }
    static MoebiusGen Psi(const AlgebraDescriptor& alg) { return {GenKind::Psi, QuatElt::zero(alg)}; }
};

// Exact evaluation; infinity is a value, not an error.
inline BoundaryPoint apply_gen(const MoebiusGen& g, const BoundaryPoint& z) {
    const AlgebraDescriptor& alg = g.kind == GenKind::Psi ? z.value.alg : g.alpha.alg;
    switch (g.kind) {
        case GenKind::E: {
            // z -> -z^{-1} - alpha;  E(0) = inf, E(inf) = -alpha
            if (z.infinite) return BoundaryPoint::at(-g.alpha);
            if (z.value.is_zero()) return BoundaryPoint::infinity(alg);
            return BoundaryPoint::at(-inverse(z.value) - g.alpha);
        }
        case GenKind::T: {
            if (z.infinite) return z;
            return BoundaryPoint::at(z.value + g.alpha);
        }
        case GenKind::Phi: {
            // z -> conj(z - alpha)^{-1} + alpha; phi(alpha) = inf, phi(inf) = alpha
            if (z.infinite) return BoundaryPoint::at(g.alpha);
            QuatElt w = z.value - g.alpha;
            if (w.is_zero()) return BoundaryPoint::infinity(alg);
            return BoundaryPoint::at(inverse(conjugate_standard(w)) + g.alpha);
        }
        case GenKind::Psi: {
            if (z.infinite) return z;
            return BoundaryPoint::at(-conjugate_standard(z.value));
        }
    }
    throw std::logic_error("apply_gen: bad kind");
}

inline BoundaryPoint apply_word(const std::vector<MoebiusGen>& word, BoundaryPoint z) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) z = apply_gen(*it, z);
    return z;
}

// The five relation identities linking T, phi, E and psi, verified pointwise
// and exactly on the given samples.  Both sides mapping a sample to infinity
// counts as agreement.
inline bool check_relations(const QuatElt& alpha, const QuatElt& beta,
                            const std::vector<BoundaryPoint>& samples) {
    const AlgebraDescriptor& alg = alpha.alg;
    QuatElt abar = conjugate_standard(alpha);
    using W = std::vector<MoebiusGen>;
    auto psi = MoebiusGen::Psi(alg);
    std::vector<std::pair<W, W>> identities = {
        // T_a phi_b = phi_{a+b} T_a
        {{MoebiusGen::T(alpha), MoebiusGen::Phi(beta)},
         {MoebiusGen::Phi(alpha + beta), MoebiusGen::T(alpha)}},
        // psi E_a = E_{-conj(a)} psi
        {{psi, MoebiusGen::E(alpha)}, {MoebiusGen::E(-abar), psi}},
        // psi E_a = phi_{conj(a)} T_{conj(a)}
        {{psi, MoebiusGen::E(alpha)}, {MoebiusGen::Phi(abar), MoebiusGen::T(abar)}},
        // psi phi_a = phi_{-conj(a)} psi
        {{psi, MoebiusGen::Phi(alpha)}, {MoebiusGen::Phi(-abar), psi}},
        // psi phi_a = E_{conj(a)} T_{-a}
        {{psi, MoebiusGen::Phi(alpha)}, {MoebiusGen::E(abar), MoebiusGen::T(-alpha)}},
        // psi T_a = T_{-conj(a)} psi
        {{psi, MoebiusGen::T(alpha)}, {MoebiusGen::T(-abar), psi}},
    };
    for (auto& [lhs, rhs] : identities)
        for (auto& z : samples)
            if (!(apply_word(lhs, z) == apply_word(rhs, z))) return false;
    return true;
}

enum class DihedralClass { PiOver3, PiOver2, Zero, Disjoint };

inline const char* dihedral_name(DihedralClass c) {
    switch (c) {
        case DihedralClass::PiOver3: return "pi/3";
        case DihedralClass::PiOver2: return "pi/2";
        case DihedralClass::Zero: return "0";
        case DihedralClass::Disjoint: return "disjoint";
    }
    return "?";
}

// Dihedral angle between unit spheres centered at lattice points whose
// squared distance is an integer: 1, 2, 3, 4 -> pi/3, pi/2, pi/3, 0.
inline DihedralClass dihedral_angle(const QuatElt& c1, const QuatElt& c2) {
    Rat d2 = reduced_norm(c1 - c2);
    if (!is_integer(d2))
        throw std::invalid_argument("dihedral_angle: squared center distance " + rat_str(d2) +
                                    " is not an integer");
    if (d2 == 0) throw std::invalid_argument("dihedral_angle: coincident centers");
    if (d2 == 1 || d2 == 3) return DihedralClass::PiOver3;
    if (d2 == 2) return DihedralClass::PiOver2;
    if (d2 == 4) return DihedralClass::Zero;
    return DihedralClass::Disjoint;
}

// The reflection-translation group is a lattice iff the covering radius of
// the division lattice is at most 1; the hole report is the evidence, and in
// the negative case the deep holes witness boundary regions outside every
// unit ball.
inline std::pair<bool, DeepHoleReport> k_is_lattice(const OrderLattice& O) {
    DeepHoleReport rep = covering_radius(euclidean_target_lattice(O));
    return {rep.covering_radius_sq <= 1, rep};
}

// Data for rendering and reasoning about F = R x (P x (0, inf)).
struct FundamentalDomainModel {
    GramLattice lambda;       // the translation lattice
    QMat parallelepiped;      // basis vectors spanning the cell P
    QMat sphere_centers;      // lattice points whose unit spheres meet a
                              // neighborhood of P (ambient coordinates)
    bool lattice_flag;        // K is a lattice <=> covering radius <= 1
    Rat covering_radius_sq;
};

inline FundamentalDomainModel fundamental_domain_model(const OrderLattice& O) {
    FundamentalDomainModel m;
    m.lambda = euclidean_target_lattice(O);
    m.parallelepiped = m.lambda.basis;
    DeepHoleReport rep = covering_radius(m.lambda);
    m.covering_radius_sq = rep.covering_radius_sq;
    m.lattice_flag = rep.covering_radius_sq <= 1;
    // lattice points within unit distance of the cell: coefficient box from
    // the dual Gram diagonal
    size_t r = m.lambda.rank();
    QMat ginv = *qmat_inverse(m.lambda.gram);
    std::vector<Int> lo(r), hi(r);
    for (size_t i = 0; i < r; ++i) {
        Int rad = ceil_sqrt(ginv[i][i]);
        lo[i] = -rad;
        hi[i] = rad + 1;
    }
    std::vector<Int> c(r);
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == r) {
            QVec pt(m.lambda.dim(), Rat(0));
            for (size_t k = 0; k < r; ++k)
                for (size_t j = 0; j < m.lambda.dim(); ++j) pt[j] += Rat(c[k]) * m.lambda.basis[k][j];
            m.sphere_centers.push_back(std::move(pt));
            return;
        }
        for (Int x = lo[i]; x <= hi[i]; ++x) {
            c[i] = x;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return m;
}

}  // namespace qorder
