// Refinement filters: tap construction, transfer symbols, cascade limits,
// and polynomial decay certificates.
#pragma once

#include <complex>
#include <vector>

#include "wrg/lattice.hpp"

namespace wrg {

// ===========================================================================
// filter banks
// ===========================================================================
//
// A bank holds the 1D taps of a refinement filter; d-dimensional kernels
// are tensor products of identical axis factors, so only the base taps are
// stored and the transfer symbol m0 multiplies over axes. Conventions:
//
//   * axis tap sum is sqrt(2)   (so the d-dim kernel sums to 2^{d/2})
//   * orthonormality: sum_n h_n conj(h_{n+2m}) = delta_{m,0}
//   * transfer symbol m0(kappa) = 2^{-1/2} sum_n h_n e^{-i n kappa}
//
// The `point` kind is the single tap sqrt(2) (m0 == 1); it deliberately
// violates orthonormality, which is why the associated scaling map rescales
// the symplectic form instead of preserving it. The `momentum_shell` kind
// carries complex taps tied to one target half-extent r' = r_{N+1}; its
// taps realize a sharp half-zone cutoff in momentum space.

enum class FilterKind { haar, daubechies, point, momentum_shell };

struct FilterBank {
    FilterKind kind = FilterKind::haar;
    int d = 1;
    int K = 1;    // vanishing moments (haar: 1; daubechies: K; others: 0)
    long n0 = 0;  // index of the first tap

    std::vector<double> taps;   // real kinds
    std::vector<cplx> ctaps;    // momentum_shell
    long shell_target_r = 0;    // momentum_shell: fine half-extent r_{N+1}

    // daubechies only: roots of the spectral factor inside the unit circle,
    // kept so the transfer ratio can be evaluated without 0/0 cancellation
    std::vector<cplx> minphase_roots;

    long tap_count() const {
        return static_cast<long>(kind == FilterKind::momentum_shell
                                     ? ctaps.size()
                                     : taps.size());
    }
    cplx tap(long n) const;  // h_n, zero outside the stored range
};

// K is required for daubechies (2 <= K <= 10); shell_target_r is required
// for momentum_shell. Identities are verified before the bank is returned.
FilterBank make_filter(FilterKind kind, int d, int K = 0, long shell_target_r = 0);

// throws std::runtime_error naming the first violated identity; the `point`
// kind is rejected (single tap sqrt(2) is not orthonormal)
void verify_filter_identities(const FilterBank& bank, double tol = 1e-12);

// ===========================================================================
// high-pass companions (d = 1 only)
// ===========================================================================

struct HighPassFilter {
    std::vector<double> taps;
    long n0 = 0;
};

// conjugate flip g_n = (-1)^n h_{1-n}, or the shifted variant
// g_n = (-1)^n h_{2K-1-n} supported on the same range as h
HighPassFilter high_pass(const FilterBank& bank, bool shifted = false);

// ===========================================================================
// transfer symbol, cascade, decay
// ===========================================================================

cplx transfer_m0_axis(const FilterBank& bank, double kappa);
// product over axes: m0(kappa_1) * ... * m0(kappa_d)
cplx transfer_m0(const FilterBank& bank, const std::vector<double>& kappa);

struct CascadeValue {
    cplx value;
    double truncation = 0.0;  // |P_{depth+1} - P_depth| style remainder bound
    int depth_used = 0;
};

// phi_hat(kappa) = prod_{n >= 1} m0(2^{-n} kappa); factors stop early once
// |m0 - 1| < 1e-16. momentum_shell has no scale-invariant cascade (taps are
// level-dependent) and is rejected.
CascadeValue cascade_phi_hat_axis(const FilterBank& bank, double kappa,
                                  int depth = 40);
CascadeValue cascade_phi_hat(const FilterBank& bank,
                             const std::vector<double>& kappa, int depth = 40);

// fitted envelope |phi_hat(kappa)| <= C (1 + |kappa|)^{-rho} per axis,
// C inflated by a factor 2 over the sampled maximum; cached per (kind, K).
// point returns {1, 0} (no decay); momentum_shell is rejected.
struct DecayCertificate {
    double C = 1.0;
    double rho = 0.0;
};
DecayCertificate certify_decay(const FilterBank& bank);

// ratio of m0 to its K-fold binomial factor ((1 + e^{-il})/2)^K, evaluated
// through the residual spectral factor so the zeros at l = pi cancel exactly
cplx transfer_ratio(const FilterBank& bank, double l);
double transfer_ratio_sup(const FilterBank& bank, long grid_points = 10000);

}  // namespace wrg
