// Dyadic periodic lattices, phase-space fields, and the scaled DFT.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace wrg {

using cplx = std::complex<double>;

// ===========================================================================
// geometry
// ===========================================================================
//
// A periodic lattice eps * {-r, ..., r-1}^d on the torus [-L, L)^d with
// L = eps * r. One refinement step halves eps and doubles r, keeping L
// fixed, so momentum modes of the coarse lattice sit inside the fine dual
// lattice at the same integer labels. Sites and modes are enumerated
// lexicographically with the most significant axis first; the integer
// offset a_j in [-r, r) is stored at position a_j + r along axis j.
// All wrap-around arithmetic is done on integer indices, never with
// floating-point modulo.

struct LatticeGeometry {
    int d = 1;
    double eps = 1.0;
    long r = 2;

    double L() const { return eps * static_cast<double>(r); }
    long side() const { return 2 * r; }
    long volume() const;

    long index_of(const std::vector<long>& a) const;
    std::vector<long> offsets_of(long index) const;

    // momentum component (pi / L) * b_j for an integer mode offset
    double k_component(long b_j) const;
    std::vector<double> k_vector(const std::vector<long>& b) const;

    bool same_torus(const LatticeGeometry& other) const;
};

// validates d >= 1, eps > 0, r a power of two with r >= 2
LatticeGeometry build_geometry(int d, double eps, long r);
LatticeGeometry refine(const LatticeGeometry& g, int steps);
// number of refinement steps from coarse to fine; throws if not nested
int refinement_steps(const LatticeGeometry& coarse, const LatticeGeometry& fine);

// ===========================================================================
// phase-space fields
// ===========================================================================
//
// A field carries a (q, p) pair over the lattice in one of two
// representations. The momentum representation stores
//     q_hat(k) = eps^{d/2} * sum_x q(x) e^{-i k.x}
// and likewise for p, so that refinement-invariant quantities keep their
// normalization across levels.

enum class Rep { real, momentum };

struct PhaseField {
    LatticeGeometry geo;
    Rep rep = Rep::real;
    std::vector<double> q, p;  // real representation, size volume()
    std::vector<cplx> qh, ph;  // momentum representation, size volume()
};

PhaseField make_real_field(const LatticeGeometry& g, std::vector<double> q,
                           std::vector<double> p);
PhaseField make_momentum_field(const LatticeGeometry& g, std::vector<cplx> qh,
                               std::vector<cplx> ph);
// independent unit normals in q and p (real representation)
PhaseField random_field(const LatticeGeometry& g, std::uint64_t seed);

PhaseField dft(const PhaseField& f);   // real -> momentum
PhaseField idft(const PhaseField& f);  // momentum -> real

// momentum-space values repeated periodically onto a finer dual lattice;
// input must already be in the momentum representation
PhaseField periodic_extension(const PhaseField& f, const LatticeGeometry& fine);

// lattice translation by an integer site vector (real representation only)
PhaseField translate(const PhaseField& f, const std::vector<long>& shift);

// symplectic form sigma(xi, eta) = eps^d sum_x [q_xi p_eta - p_xi q_eta];
// evaluated directly in whichever representation both arguments share
// (mixed-representation pairs are brought to momentum space first)
double symplectic_form(const PhaseField& xi, const PhaseField& eta);

PhaseField linear_combination(double a, const PhaseField& x, double b,
                              const PhaseField& y);
double sup_norm(const PhaseField& f);  // max over sites/modes and components

}  // namespace wrg
