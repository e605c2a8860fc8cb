// Scaling maps between dyadic lattice levels and the continuum embedding.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wrg/filters.hpp"
#include "wrg/lattice.hpp"

namespace wrg {

// ===========================================================================
// schemes
// ===========================================================================
//
//   wavelet           filter taps (haar or daubechies K), real or momentum
//   blockspin         indicator-kernel smearing; coefficientwise identical
//                     to the haar taps, kept as its own scheme because its
//                     state flows behave differently (marginal decay)
//   point             single-tap injection; scales the symplectic form by
//                     2^{d (N'-N)} instead of preserving it
//   momentum_cutoff   sharp restriction to the coarse momentum zone
//   momentum_transfer mode-label doubling with split q/p weights

enum class Scheme { wavelet, blockspin, point, momentum_cutoff, momentum_transfer };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct ScaleMap {
    Scheme scheme = Scheme::wavelet;
    FilterBank bank;  // real-kernel schemes only
    LatticeGeometry from, to;
    int steps = 1;
};

// bank is required for wavelet (haar/daubechies, matching dimension);
// blockspin and point build their kernels internally; momentum schemes
// carry no taps
ScaleMap make_scale_map(Scheme scheme, const LatticeGeometry& from, int steps,
                        const FilterBank* bank = nullptr);

// real-space application, one refinement step at a time:
//   out(2a + n) += 2^{d/2} (prod_j h_{n_j}) in(a)
// the momentum schemes delegate to their momentum form by dft conjugation;
// for the sharp cutoff the boundary mode -r has no surviving conjugate
// partner, so that delegation is exact only away from |b_j| = r
PhaseField step_real(const ScaleMap& map, const PhaseField& f);

// momentum-space application with the composite multiplier
//   2^{d M/2} prod_{n=1}^{M} m0(eps_{N+n} k)
// acting on the periodic extension (cutoff/transfer use their own forms)
PhaseField step_momentum(const ScaleMap& map, const PhaseField& f);

// representation-preserving driver
PhaseField apply(const ScaleMap& map, const PhaseField& f);

// ===========================================================================
// continuum embedding
// ===========================================================================
//
// R^N_inf: mode b of the source lattice becomes the continuum harmonic
//   q_hat(k_b) = eps^{d/2} phi_hat(eps k_b) q_hat_ext(b)
// on the box |b|_inf <= B. The neglected mass outside the box is bounded
// through the filter's decay certificate with the gamma_m weights of the
// downstream norm; if the bound is not below 1e-8 the cutoff is doubled
// until it is (or a hard cap is reached, which leaves tail_ok false).

struct ContinuumField {
    int d = 1;
    double L = 1.0;
    double m = 1.0;
    long B = 0;
    std::vector<cplx> qh, ph;  // (2B+1)^d box, offsets in [-B, B]
    double eps_source = 1.0;
    double tail_norm2 = 0.0;  // bound on the spectral mass beyond the box
    bool tail_ok = false;
    bool flagged = false;  // blockspin embedding: marginal p-channel decay

    long side() const { return 2 * B + 1; }
    long size() const;
    long index_of(const std::vector<long>& b) const;
    std::vector<long> offsets_of(long index) const;
    double k_component(long b_j) const;
};

// B_request = 0 selects the default cutoff r_N + 64; point and momentum
// schemes have no cascade scaling function and are rejected
ContinuumField embed_continuum(Scheme scheme, const FilterBank& bank,
                               const PhaseField& field, double m,
                               long B_request = 0);

// bound on the gamma_m-weighted spectral mass of an embedded field beyond
// the box |b|_inf <= B, from the per-axis envelope C (1 + |kappa_j|)^{-rho}
// of the decay certificate and channel sups of the source spectrum; the
// same bound caps the truncation of limit-state mode sums
double embedding_tail_bound(const DecayCertificate& cert, int d, double eps,
                            double L, double m, long B, double sup_q,
                            double sup_p);

// ===========================================================================
// circulant decomposition
// ===========================================================================
//
// A dense orthogonal kernel S on the fine lattice through which one
// refinement step factors: step_real = S o (even-site zero padding) o
// 2^{d/2}. On even-site columns S convolves with the low-pass taps,
// S(x', 2a) = prod_j h_{x'_j - 2a_j}; the odd-site columns carry the
// conjugate high-pass taps, completing the filter-bank synthesis operator
// so that S is invertible (the low-pass convolution alone has a singular
// symbol). Only the finite-tap schemes admit this; taps must not wrap
// around the torus.

struct MeraDecomposition {
    LatticeGeometry geo;         // fine lattice the kernel acts on
    std::vector<double> matrix;  // row-major, volume x volume
};

MeraDecomposition mera_decompose(Scheme scheme, const FilterBank& bank,
                                 const LatticeGeometry& fine);
PhaseField apply_mera(const MeraDecomposition& dec, const PhaseField& f);

// ===========================================================================
// support growth and covariance
// ===========================================================================

struct SupportGrowth {
    std::vector<std::pair<long, long>> fine;  // per-axis site-offset ranges
    double physical_growth = 0.0;             // max over axes, length units
    double bound = 0.0;                       // r_max eps_N (1 - 2^{-M})
    bool within_bound = false;
};

// coarse: per-axis closed ranges [a, b] of occupied site offsets (unwrapped)
SupportGrowth support_growth(const ScaleMap& map,
                             const std::vector<std::pair<long, long>>& coarse);

// sup-norm defect of R(tau_a xi) - tau_{2^M a}(R xi); vanishes for every
// scheme except momentum_transfer, which breaks lattice covariance
double translation_covariance_check(const ScaleMap& map, const PhaseField& f,
                                    const std::vector<long>& shift);

}  // namespace wrg
