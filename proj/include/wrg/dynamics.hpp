#pragma once

// ===========================================================================
// one-particle dynamics
// ===========================================================================
//
// Harmonic time evolutions on phase-space fields: the flow generated at a
// fixed lattice scale, its periodic extension to finer lattices, and the
// continuum flow; the defect between refining-then-evolving and
// embedding-then-evolving; exact Weyl commutator norms; and the
// harmonic-lattice quasi-locality bound with its scaling-limit velocity.

#include <cstddef>
#include <vector>

#include "wrg/filters.hpp"
#include "wrg/lattice.hpp"
#include "wrg/scalemaps.hpp"
#include "wrg/states.hpp"

namespace wrg {

// ===========================================================================
// evolutions
// ===========================================================================

enum class EvolutionKind { lattice, extended, continuum };

// tau_t acts mode by mode on a momentum-space pair,
//     q_hat -> cos(t g) q_hat - g sin(t g) p_hat,
//     p_hat -> cos(t g) p_hat + g^{-1} sin(t g) q_hat,        g = gamma(k),
// which is multiplication by e^{i t g} of z = g^{-1/2} q_hat + i g^{1/2}
// p_hat, so the symplectic form and the gamma-weighted spectral mass are
// conserved mode by mode. The flavors differ only in where gamma comes from:
//     lattice     the dispersion of the evolution's own lattice; the field
//                 must live on exactly that lattice
//     extended    the same dispersion read at the modes of any refinement
//                 of that lattice (the sin form is periodic, so evaluating
//                 it at finer modes IS the periodic extension)
//     continuum   gamma_m(k) = sqrt(k^2 + m^2) at the field's own modes
// Convention note: in the dimensionless lattice pair (eps^{-1/2} q_hat,
// eps^{1/2} p_hat) the off-diagonal entries pick up factors eps^{+-1}. We
// keep the continuum-normalized pair throughout, under which the evolving
// scale's ground-state exponent is an exact invariant of the motion.
struct Evolution {
    EvolutionKind kind = EvolutionKind::continuum;
    double t = 0.0;
    double m = 1.0;           // the mass behind `disp`
    LatticeGeometry base;     // lattice/extended: the generating lattice
    DispersionRelation disp;  // gamma used by the rotation
};

Evolution lattice_evolution(const LatticeGeometry& g,
                            const MassSchedule& schedule, double t);
Evolution extended_evolution(const LatticeGeometry& g,
                             const MassSchedule& schedule, double t);
Evolution continuum_evolution(double m, int d, double t);

// Momentum representation required; the lattice flavor insists on its own
// lattice and the extended flavor on a refinement of it (same torus).
PhaseField evolve(const Evolution& ev, const PhaseField& field);

// Continuum flavor only, and the masses must agree: the field's tail bound
// is stated for its own gamma_m weights, and exactly that flow conserves
// |z(k)| mode by mode, so the bound survives evolution unchanged.
ContinuumField evolve(const Evolution& ev, const ContinuumField& field);

// ===========================================================================
// convergence toward the continuum flow
// ===========================================================================

// A gamma_m-weighted spectral norm over the mode box |b|_inf <= box plus a
// bound on what the truncation missed.
struct TruncatedNorm {
    double value = 0.0;
    double tail = 0.0;
    long box = 0;
};

// || embed(tau^{fine}_t(refine xi)) - tau_t(embed xi) ||  in the norm
//     ||.||^2 = (2L)^{-d} sum_k |gamma_m^{-1/2} q_hat + i gamma_m^{1/2}
//     p_hat|^2,
// where refine runs `steps` wavelet refinements of xi's lattice, tau^{fine}
// is the finer lattice's own evolution, and tau_t the continuum flow. The
// sum is truncated at the common embedding box (at least k_cutoff, which
// must cover the finer lattice's modes: k_cutoff >= 2^steps r). The tail
// adds both embeddings' own bounds; evolving does not change them.
TruncatedNorm dynamics_defect(const PhaseField& xi, int steps, double t,
                              const MassSchedule& schedule,
                              const FilterBank& bank, long k_cutoff);

// t-independent envelope dominating dynamics_defect(...)^2 for every t and
// every steps >= 1, truncated over the same mode box:
//     4 eps^d (2L)^{-d} sum_k gamma_m |phi_hat(eps k)|^2
//         [ (gamma_m^{-1}|q_hat| + |p_hat|)^2 + (|p_hat| + m^{-1}|q_hat|)^2 ]
// with the periodic extension of xi's spectrum. The bracket weights use
// that the exact mass schedule keeps the lattice dispersion between m and
// gamma_m, so the usual interpolation constants enter at their sharp
// values 1.
double dynamics_defect_envelope(const PhaseField& xi,
                                const MassSchedule& schedule,
                                const FilterBank& bank, long box);

// rows M = 1..steps_max tabulate dynamics_defect at fixed t: value and
// defect both carry the truncated norm (the limit is 0), consistency the
// per-row tail bound; limit_tail keeps the largest row tail.
FlowReport dynamics_defect_report(const PhaseField& xi, int steps_max,
                                  double t, const MassSchedule& schedule,
                                  const FilterBank& bank, long k_cutoff);

// ===========================================================================
// quasi-locality
// ===========================================================================

// ||[W(xi), W(eta)]|| = |e^{-i sigma} - 1| = 2 |sin(sigma/2)| for Weyl
// operators over a symplectic form value sigma
double weyl_commutator_norm(double sigma_value);

// axis-aligned box of lattice sites, inclusive ends, offsets as used by
// LatticeGeometry (an end may stick out of [-r, r); sites are then read
// periodically)
struct SupportRegion {
    std::vector<long> lo, hi;
};

// exact nonzero box of a real-representation field (errors on momentum
// representation: spectra carry no sharp support)
SupportRegion field_support(const PhaseField& f);

// conservative image of a support box under `steps` refinements by the
// bank's taps: one step sends [lo, hi] to [2 lo + n0, 2 hi + n0 + len - 1]
// per axis (the real-space rule writes out(2a + n) from in(a))
SupportRegion map_support(const FilterBank& bank, const SupportRegion& s,
                          int steps);

// physical box [eps (lo + n0), eps (hi + n0 + len - 1)] per axis covering
// the embedded field's support: the cascade limit of the taps lives on
// [n0, n0 + len - 1] in lattice units
std::vector<double> embedded_support_box(const FilterBank& bank,
                                         const SupportRegion& s, double eps);

// periodic 1-distance between two physical boxes {lo0, hi0, lo1, hi1, ...}
// on the torus of side 2L: per-axis gap between intervals, summed
double box_distance_1(const std::vector<double>& a,
                      const std::vector<double>& b, double period);

// sup norm entering the quasi-locality bound:
//     eps^{d/2} sup_x |eps^{1/2} q(x) + i eps^{-1/2} p(x)|,
// the eps-weighted sup of the dimensionless pair. The kernel constants
// below are stated for exactly this normalization; keep them together.
double lr_sup_norm(const PhaseField& field);

// root of (x/2) e^{x/2} = 1/e, bisected to 1e-12; the decay parameter at
// which the two velocity branches below coincide, making the bound's
// propagation speed smallest
double lr_optimal_delta();

// scaling-limit velocity bound sqrt(d) max{2/delta, e^{delta/2 + 1}}
double lr_velocity(double delta, int d);

// C_N ||xi|| ||xi'|| sum_{x in X, y in Y}
//     exp[-(delta/eps)(d_1(x, y) - (c/2) max{2/delta, e^{delta/2+1}} |t|)]
// with c = sqrt(mu2 + 2d), C_N = 2 + c e^{delta/2} + 1/c, and d_1 the
// periodic 1-distance between sites. X, Y may be any boxes containing the
// supports; larger boxes only increase the bound. Axes factorize, so the
// double sum is evaluated as a product of per-axis sums.
double lr_bound_rhs(const LatticeGeometry& g, double mu2, double delta,
                    double t, const SupportRegion& X, const SupportRegion& Y,
                    double sup_xi, double sup_xi_prime);

// ===========================================================================
// causality scan
// ===========================================================================

struct CommutatorQuery {
    PhaseField xi, xi_prime;    // sources on the same torus (levels may differ)
    SupportRegion support, support_prime;  // exact site boxes on the sources
    std::vector<double> times;  // symmetric about 0, containing t = 0
    double delta = 0.0;         // decay parameter > 0
};

struct CausalityCell {
    double t = 0.0;
    int M = 0;
    double exact_norm = 0.0;
    double lr_bound = 0.0;
};

// Per scale M = M_lo..M_hi beyond the finer source level: push both fields
// to the common refined lattice, evolve the first by that lattice's own
// flow, and tabulate the exact commutator norm 2|sin(sigma/2)| against the
// quasi-locality bound. Report rows: value = sup_t exact, defect = min_t
// (bound - exact) (>= 0 exactly when the row is dominated), consistency =
// sup_t bound. bound_dominates covers every cell; decays_across_scales
// compares the last scale against the first at each clearance-respecting
// grid time (those with dist_1 > sqrt(d) * velocity * |t|). When the bound
// fails to dominate somewhere, the scan records it; the constants are
// never adjusted.
struct CausalityScan {
    FlowReport report;
    std::vector<CausalityCell> cells;  // scale-major, times inner
    double dist1 = 0.0;     // periodic 1-distance of the embedded supports
    double velocity = 0.0;  // lr_velocity(delta, d)
    bool bound_dominates = false;
    bool decays_across_scales = false;
};

// errors when the embedded supports overlap or touch (the scan needs a
// positive distance) or when the time grid is empty
CausalityScan causality_scan(const CommutatorQuery& query, int M_lo, int M_hi,
                             const MassSchedule& schedule,
                             const FilterBank& bank);

// ===========================================================================
// Hamiltonian convergence (sharp-cutoff scheme)
// ===========================================================================

// sup_{k in the g-zone} | gamma_{mu_{N+M}}(k) - gamma_m(k) |: the
// one-particle distance between the refined lattice dispersion and the
// continuum one over the fixed coarse momentum zone that the sharp-cutoff
// scheme keeps. Its vanishing in M drives the cutoff Hamiltonians'
// convergence.
double hamiltonian_sup_defect(const LatticeGeometry& g, int M,
                              const MassSchedule& schedule);

}  // namespace wrg
