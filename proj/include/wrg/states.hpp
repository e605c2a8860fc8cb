// Gaussian ground-state exponents, their flows under the scaling maps,
// limit states, and smeared two-point functions with continuum targets.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "wrg/filters.hpp"
#include "wrg/lattice.hpp"
#include "wrg/scalemaps.hpp"

namespace wrg {

// ===========================================================================
// mass schedule and dispersion relations
// ===========================================================================

// mu_N^2 = eps_N^2 m^2 + 2d. With this schedule the effective mass
// eps_N^{-2} (mu_N^2 - 2d) equals m^2 identically at every level, so the
// renormalization condition holds exactly instead of asymptotically; the
// momentum-transfer flow identity and all M = 0 base cases are then exact.
struct MassSchedule {
    double m = 1.0;
    int d = 1;

    double mu_squared(double eps) const { return eps * eps * (m * m) + 2.0 * d; }
};

// gamma(k), either the finite-difference lattice dispersion at spacing eps
// or the continuum one. The lattice flavor stores the effective mass
// squared eps^{-2}(mu^2 - 2d) directly: forming it once at construction
// keeps evaluation clear of the cancellation-prone subtraction mu^2 - 2d.
struct DispersionRelation {
    bool lattice = true;
    int d = 1;
    double eps = 1.0;     // ignored for the continuum flavor
    double m_eff2 = 1.0;  // lattice: eps^{-2}(mu^2 - 2d); continuum: m^2

    double gamma2(const std::vector<double>& k) const;
    double gamma(const std::vector<double>& k) const { return std::sqrt(gamma2(k)); }
};

DispersionRelation lattice_dispersion(const MassSchedule& schedule, double eps);
// from a raw lattice mass; requires mu^2 >= 2d
DispersionRelation lattice_dispersion_mu(double mu, double eps, int d);
DispersionRelation continuum_dispersion(double m, int d);

// ===========================================================================
// quasi-free exponents
// ===========================================================================

// omega(W(xi)) = exp(-E(xi)). `tail` bounds the neglected modes when the
// defining sum is infinite and was truncated at |b|_inf <= cutoff; finite
// sums report tail = 0, cutoff = 0. Scheme/level/step provenance is kept
// by the reports, not here.
struct QuasiFreeExponent {
    double value = 0.0;
    double tail = 0.0;
    long cutoff = 0;
};

// E = 1/4 (2r)^{-d} sum_k [ gamma(k)^{-1} |q_hat(k)|^2 + gamma(k) |p_hat(k)|^2 ]
// accumulated over ascending |b|_inf shells with compensated summation;
// errors when gamma vanishes anywhere on the zone (massless zero mode)
double ground_exponent(const PhaseField& xi, const DispersionRelation& disp);

// Exponent of the level-N state pushed through M refinement steps, with the
// fine mass mu_{N+M} from the schedule. The fine zone is enumerated through
// per-axis tables; no fine field is materialized.
//   wavelet/blockspin/point  1/4 (2r_N)^{-d} sum over the fine zone of
//                            |prod_{n=1..M} m0(eps_{N+n} k)|^2 weighted
//                            channel sums of the periodic extension
//                            (the point kernel has m0 == 1)
//   momentum_cutoff          the coarse zone with the fine dispersion
//   momentum_transfer        doubled mode labels with split q/p weights;
//                            equals the level-N ground exponent at mass
//                            2^{-M} m (tested, not assumed)
// bank as in make_scale_map; it is ignored for M = 0.
double flow_exponent(Scheme scheme, const FilterBank* bank, const PhaseField& xi,
                     const MassSchedule& schedule, int M);

// M -> infinity exponent.
//   wavelet           1/4 (2L)^{-d} eps^d sum_{|b|_inf <= cutoff} of
//                     |phi_hat(eps k_b)|^2 gamma_m-weighted channel sums of
//                     the periodic extension, plus a certified tail bound;
//                     requires cascade decay rho > (d+1)/2
//   momentum_cutoff   exact finite sum over the coarse zone with gamma_m
//   momentum_transfer the massless lattice vacuum (the schedule drives
//                     mu -> 0); requires q_hat(0) = 0, the k = 0 momentum
//                     term carries weight gamma = 0
//   blockspin/point   error: no limit state exists for these schemes; the
//                     two-point flows below are the meaningful limit objects
// k_cutoff = 0 selects the default r_N + 64.
QuasiFreeExponent limit_exponent(Scheme scheme, const FilterBank* bank,
                                 const PhaseField& xi, double m,
                                 long k_cutoff = 0);

// the same target evaluated literally on an embedded field:
// 1/4 (2L)^{-d} sum over the box of |gamma_m^{-1/2} q_hat_c + i gamma_m^{1/2}
// p_hat_c|^2, plus a quarter of the embedding's own tail bound; agreement
// with limit_exponent within the summed tails is the intertwining check
QuasiFreeExponent continuum_exponent_via_embedding(const ContinuumField& e);

// ===========================================================================
// test functions and smeared two-point flows
// ===========================================================================

// A smooth torus function given by finitely many Fourier coefficients
// fhat(j), |j|_inf <= jmax, f(x) = (2L)^{-d} sum_j fhat(j) e^{i k_j x}.
// Smearing against such a band is exact on every lattice whose zone
// contains it, so no quadrature error enters the flow values.
struct TestFunction {
    int d = 1;
    long jmax = 0;
    std::vector<cplx> coef;  // (2 jmax + 1)^d, lexicographic in [-jmax, jmax]^d

    long side() const { return 2 * jmax + 1; }
    long size() const;
    cplx coefficient(const std::vector<long>& j) const;  // 0 outside the band
    bool real_valued(double tol = 1e-12) const;  // coef(-j) == conj(coef(j))
};

TestFunction make_test_function(int d, long jmax, std::vector<cplx> coef);

enum class Channel { phi_phi, pi_pi, phi_pi };

std::string channel_name(Channel ch);
Channel parse_channel(const std::string& name);

// Two-point value of the step-M state in the channel, smeared with f and g.
// Block-spin smears through the level-N cell average eps^{-d} chi_{[0,eps)^d}
// (G_hat = eps^{-d} chi_hat fhat); point through the delta (G_hat = fhat).
// The band never aliases (jmax < r_N), so the fine-zone sum collapses to
//   phi-phi  1/2 (2r_N)^{-d} eps_N^{-1} sum_b gamma_{mu_{N+M}}(k_b)^{-1}
//            G_hat_f(-b) G_hat_g(b)
//   pi-pi    as above with eps_N^{+1} and gamma^{+1}
//   phi-pi   i/2 (2r_N)^{-d} sum_b G_hat_f(-b) G_hat_g(b)   (M-independent)
// `rescaled` multiplies raw by eps^{1-d} / eps^{-(1+d)} / eps^{-d}; those
// are the normalizations under which the values converge to
// two_point_limit as M and then N grow.
struct TwoPointValue {
    cplx raw{};
    cplx rescaled{};
};

TwoPointValue two_point_flow(Channel ch, Scheme scheme,
                             const LatticeGeometry& geo, const TestFunction& f,
                             const TestFunction& g, const MassSchedule& schedule,
                             int M);

// continuum target: 1/(2 (2L)^d) sum_j gamma_m(k_j)^{-1 or +1} fhat(-j) ghat(j)
// for phi-phi / pi-pi, and i/(2 (2L)^d) sum_j fhat(-j) ghat(j) for phi-pi;
// exact for band-limited test functions (no truncation)
cplx two_point_limit(Channel ch, int d, double L, const TestFunction& f,
                     const TestFunction& g, double m);

// Smearing vectors: momentum-representation phase-space vectors whose Weyl
// generators realize the smeared field (q-channel) and momentum (p-channel)
// operators of the level with spacing eps_level, sampled on geo. With
// a = (eps_level/geo.eps)^{d/2} the band coefficients are
//   field:     q_hat(b) = a eps_level^{-1/2} G_hat(k_b)
//   momentum:  p_hat(b) = a eps_level^{+1/2} G_hat(k_b)
// eps_level = 0 means geo.eps. Requires real-valued f and jmax < geo.r.
PhaseField phi_smearing(Scheme scheme, const LatticeGeometry& geo,
                        const TestFunction& f, double eps_level = 0.0);
PhaseField pi_smearing(Scheme scheme, const LatticeGeometry& geo,
                       const TestFunction& f, double eps_level = 0.0);

// The same two-point value assembled through the state identity: the step-M
// state is the fine ground state pulled back, so the value equals the
// polarization of the fine ground exponent on the level-N smearing vectors
// sampled at level N+M, plus the fixed (i/2) commutator term. A genuinely
// independent path (dense exponent evaluator, no collapsed sum); used as
// the projective-consistency cross-check on two_point_flow.
cplx two_point_via_state(Channel ch, Scheme scheme, const LatticeGeometry& geo,
                         const TestFunction& f, const TestFunction& g,
                         const MassSchedule& schedule, int M);

// ===========================================================================
// convergence reports
// ===========================================================================

struct FlowRow {
    int M = 0;
    double value = 0.0;        // exponent, or the channel's convergent part
    double defect = 0.0;       // |value - limit| (NaN when no limit exists)
    double consistency = 0.0;  // one-step state-identity defect (NaN: skipped)
};

// Defect semantics per scheme (exponent flavor):
//   wavelet/momentum_cutoff  |E(M) - limit.value|
//   momentum_transfer        |E(M) - ground exponent at mass 2^{-M} m|,
//                            the flow identity, expected ~1e-15 per row
//   blockspin/point          no limit: defects NaN, divergence_expected set
// The consistency column reports |E^{(N)}_M(xi) - E^{(N+1)}_{M-1}(R xi)|
// (rows M >= 1); the two-point flavor compares the collapsed flow value
// with two_point_via_state and skips rows whose fine volume would exceed
// an internal cap (recorded as NaN).
struct FlowReport {
    std::string label;  // "exponent" or the channel name
    Scheme scheme = Scheme::wavelet;
    int d = 1;
    double eps = 1.0;
    long r = 2;
    bool has_limit = false;
    bool divergence_expected = false;
    double limit = 0.0;
    double limit_tail = 0.0;
    std::vector<FlowRow> rows;
};

FlowReport convergence_report(Scheme scheme, const FilterBank* bank,
                              const PhaseField& xi, const MassSchedule& schedule,
                              int M_max, long k_cutoff = 0);

// two-point flavor; the tabulated value is Re for phi-phi / pi-pi and Im
// for phi-pi (the values are real resp. purely imaginary for real f, g)
FlowReport convergence_report(Channel ch, Scheme scheme,
                              const LatticeGeometry& geo, const TestFunction& f,
                              const TestFunction& g, const MassSchedule& schedule,
                              int M_max);

}  // namespace wrg
