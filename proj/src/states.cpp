#include "wrg/states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "wrg/numerics.hpp"

namespace wrg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double sq(double x) { return x * x; }

// fine lattices touched by the two-point consistency column may not exceed
// this volume; beyond it the report records NaN instead of the check
constexpr long kStateIdentityVolumeCap = 1L << 21;

// indices of the side^d box whose axis offsets run upward from lo, ordered
// by ascending |offset|_inf shell (stable within a shell), so mode sums
// accumulate from the origin outward as the compensated-summation contract
// requires
std::vector<long> shell_order(int d, long side, long lo) {
    long vol = 1;
    for (int j = 0; j < d; ++j) vol *= side;
    const long hi_abs = std::max(std::labs(lo), std::labs(lo + side - 1));
    std::vector<long> shell(vol);
    std::vector<long> count(hi_abs + 1, 0);
    for (long idx = 0; idx < vol; ++idx) {
        long rem = idx, s = 0;
        for (int j = 0; j < d; ++j) {
            const long digit = rem % side;
            rem /= side;
            s = std::max(s, std::labs(lo + digit));
        }
        shell[idx] = s;
        ++count[s];
    }
    std::vector<long> fill(hi_abs + 1, 0);
    for (long s = 1; s <= hi_abs; ++s) fill[s] = fill[s - 1] + count[s - 1];
    std::vector<long> order(vol);
    for (long idx = 0; idx < vol; ++idx) order[fill[shell[idx]]++] = idx;
    return order;
}

// axis digit of the wrapped offset, for periodic-extension lookups
long wrap_digit(long offset, long r) {
    long w = offset % (2 * r);
    if (w < -r) w += 2 * r;
    if (w >= r) w -= 2 * r;
    return w + r;
}

const PhaseField& momentum_view(const PhaseField& f, PhaseField& storage) {
    if (f.rep == Rep::momentum) return f;
    storage = dft(f);
    return storage;
}

}  // namespace

// ===========================================================================
// dispersion
// ===========================================================================

double DispersionRelation::gamma2(const std::vector<double>& k) const {
    if (static_cast<int>(k.size()) != d)
        throw std::runtime_error("dispersion: momentum dimension mismatch");
    double g2 = m_eff2;
    for (double kj : k)
        g2 += lattice ? sq(2.0 / eps * std::sin(0.5 * eps * kj)) : kj * kj;
    return g2;
}

DispersionRelation lattice_dispersion(const MassSchedule& schedule, double eps) {
    if (!(schedule.m > 0.0)) throw std::runtime_error("mass schedule needs m > 0");
    if (!(eps > 0.0)) throw std::runtime_error("lattice spacing must be positive");
    DispersionRelation disp;
    disp.lattice = true;
    disp.d = schedule.d;
    disp.eps = eps;
    // the schedule's mu_N^2 - 2d is eps^2 m^2 by construction; store m^2
    // itself rather than round-tripping through the subtraction
    disp.m_eff2 = schedule.m * schedule.m;
    return disp;
}

DispersionRelation lattice_dispersion_mu(double mu, double eps, int d) {
    if (!(eps > 0.0) || d < 1) throw std::runtime_error("bad lattice parameters");
    const double gap = mu * mu - 2.0 * d;
    if (gap < 0.0)
        throw std::runtime_error("lattice dispersion needs mu^2 >= 2d");
    DispersionRelation disp;
    disp.lattice = true;
    disp.d = d;
    disp.eps = eps;
    disp.m_eff2 = gap / (eps * eps);
    return disp;
}

DispersionRelation continuum_dispersion(double m, int d) {
    if (d < 1) throw std::runtime_error("bad dimension");
    DispersionRelation disp;
    disp.lattice = false;
    disp.d = d;
    disp.m_eff2 = m * m;
    return disp;
}

// ===========================================================================
// ground-state exponent
// ===========================================================================

double ground_exponent(const PhaseField& xi, const DispersionRelation& disp) {
    const LatticeGeometry& g = xi.geo;
    if (disp.d != g.d)
        throw std::runtime_error("ground exponent: dimension mismatch");
    if (!(disp.m_eff2 > 0.0))
        throw std::runtime_error(
            "dispersion vanishes at k = 0: massless modes leave the ground "
            "exponent undefined");
    PhaseField storage;
    const PhaseField& spec = momentum_view(xi, storage);

    // per-axis dispersion contributions over the zone digit t = b + r
    std::vector<double> s1(g.side());
    for (long t = 0; t < g.side(); ++t) {
        const double k = g.k_component(t - g.r);
        s1[t] = disp.lattice ? sq(2.0 / disp.eps * std::sin(0.5 * disp.eps * k))
                             : k * k;
    }

    const std::vector<long> order = shell_order(g.d, g.side(), -g.r);
    num::NeumaierSum acc_q, acc_p;
    for (long idx : order) {
        long rem = idx;
        double g2 = disp.m_eff2;
        for (int j = 0; j < g.d; ++j) {
            g2 += s1[rem % g.side()];
            rem /= g.side();
        }
        const double gam = std::sqrt(g2);
        acc_q.add(std::norm(spec.qh[idx]) / gam);
        acc_p.add(std::norm(spec.ph[idx]) * gam);
    }
    return 0.25 * std::pow(static_cast<double>(g.side()), -g.d) *
           (acc_q.value() + acc_p.value());
}

// ===========================================================================
// flow exponent
// ===========================================================================

double flow_exponent(Scheme scheme, const FilterBank* bank, const PhaseField& xi,
                     const MassSchedule& schedule, int M) {
    const LatticeGeometry& g = xi.geo;
    if (schedule.d != g.d)
        throw std::runtime_error("flow exponent: dimension mismatch");
    if (M < 0) throw std::runtime_error("flow exponent: M must be >= 0");
    if (M == 0) return ground_exponent(xi, lattice_dispersion(schedule, g.eps));

    PhaseField storage;
    const PhaseField& spec = momentum_view(xi, storage);
    const double m2 = schedule.m * schedule.m;
    const double eps_f = g.eps / static_cast<double>(1L << M);

    if (scheme == Scheme::momentum_cutoff) {
        // coarse zone, fine dispersion: the cutoff keeps the mode labels
        std::vector<double> s1(g.side());
        for (long t = 0; t < g.side(); ++t)
            s1[t] = sq(2.0 / eps_f *
                       std::sin(0.5 * eps_f * g.k_component(t - g.r)));
        num::NeumaierSum acc_q, acc_p;
        for (long idx : shell_order(g.d, g.side(), -g.r)) {
            long rem = idx;
            double g2 = m2;
            for (int j = 0; j < g.d; ++j) {
                g2 += s1[rem % g.side()];
                rem /= g.side();
            }
            const double gam = std::sqrt(g2);
            acc_q.add(std::norm(spec.qh[idx]) / gam);
            acc_p.add(std::norm(spec.ph[idx]) * gam);
        }
        return 0.25 * std::pow(static_cast<double>(g.side()), -g.d) *
               (acc_q.value() + acc_p.value());
    }

    if (scheme == Scheme::momentum_transfer) {
        // labels double, k_{2^M b} on the fine lattice; the split amplitudes
        // 2^{M(d+1)/2} on q and 2^{M(d-1)/2} on p enter squared
        const double stride = static_cast<double>(1L << M);
        const double wq = std::pow(2.0, static_cast<double>(M) * (g.d + 1));
        const double wp = std::pow(2.0, static_cast<double>(M) * (g.d - 1));
        std::vector<double> s1(g.side());
        for (long t = 0; t < g.side(); ++t)
            s1[t] = sq(2.0 / eps_f *
                       std::sin(0.5 * eps_f * stride * g.k_component(t - g.r)));
        num::NeumaierSum acc_q, acc_p;
        for (long idx : shell_order(g.d, g.side(), -g.r)) {
            long rem = idx;
            double g2 = m2;
            for (int j = 0; j < g.d; ++j) {
                g2 += s1[rem % g.side()];
                rem /= g.side();
            }
            const double gam = std::sqrt(g2);
            acc_q.add(wq * std::norm(spec.qh[idx]) / gam);
            acc_p.add(wp * std::norm(spec.ph[idx]) * gam);
        }
        const double side_f = static_cast<double>(g.side()) * stride;
        return 0.25 * std::pow(side_f, -g.d) * (acc_q.value() + acc_p.value());
    }

    // finite-kernel schemes share one enumeration of the fine zone; the map
    // validates the bank (block-spin supplies haar, point a unit transfer)
    const ScaleMap map = make_scale_map(scheme, g, M, bank);
    const FilterBank& eb = map.bank;
    const LatticeGeometry fine = map.to;
    const long side_f = fine.side();

    std::vector<double> s1(side_f), amp2(side_f);
    std::vector<long> wrap(side_f);
    for (long t = 0; t < side_f; ++t) {
        const long o = t - fine.r;
        const double k = fine.k_component(o);
        s1[t] = sq(2.0 / eps_f * std::sin(0.5 * eps_f * k));
        cplx prod = 1.0;
        for (int n = 1; n <= M; ++n)
            prod *= transfer_m0_axis(eb, g.eps / static_cast<double>(1L << n) * k);
        amp2[t] = std::norm(prod);
        wrap[t] = wrap_digit(o, g.r);
    }

    num::NeumaierSum acc_q, acc_p;
    for (long idx : shell_order(g.d, side_f, -fine.r)) {
        long rem = idx, coarse = 0, cstride = 1;
        double g2 = m2, w = 1.0;
        for (int j = 0; j < g.d; ++j) {
            const long t = rem % side_f;
            rem /= side_f;
            g2 += s1[t];
            w *= amp2[t];
            coarse += wrap[t] * cstride;
            cstride *= g.side();
        }
        const double gam = std::sqrt(g2);
        acc_q.add(w * std::norm(spec.qh[coarse]) / gam);
        acc_p.add(w * std::norm(spec.ph[coarse]) * gam);
    }
    // 2^{dM}/4 (2 r_{N+M})^{-d} == 1/4 (2 r_N)^{-d}
    return 0.25 * std::pow(static_cast<double>(g.side()), -g.d) *
           (acc_q.value() + acc_p.value());
}

// ===========================================================================
// limit exponents
// ===========================================================================

QuasiFreeExponent limit_exponent(Scheme scheme, const FilterBank* bank,
                                 const PhaseField& xi, double m, long k_cutoff) {
    const LatticeGeometry& g = xi.geo;
    if (!(m > 0.0)) throw std::runtime_error("limit exponent needs a mass m > 0");
    if (scheme == Scheme::blockspin || scheme == Scheme::point)
        throw std::runtime_error(
            scheme_name(scheme) +
            " flows define no limit state; the smeared two-point flows are "
            "the convergent objects for this scheme");

    PhaseField storage;
    const PhaseField& spec = momentum_view(xi, storage);

    if (scheme == Scheme::momentum_cutoff) {
        // exact finite sum: the coarse zone with the continuum dispersion
        std::vector<double> s1(g.side());
        for (long t = 0; t < g.side(); ++t) s1[t] = sq(g.k_component(t - g.r));
        num::NeumaierSum acc_q, acc_p;
        for (long idx : shell_order(g.d, g.side(), -g.r)) {
            long rem = idx;
            double g2 = m * m;
            for (int j = 0; j < g.d; ++j) {
                g2 += s1[rem % g.side()];
                rem /= g.side();
            }
            const double gam = std::sqrt(g2);
            acc_q.add(std::norm(spec.qh[idx]) / gam);
            acc_p.add(std::norm(spec.ph[idx]) * gam);
        }
        QuasiFreeExponent out;
        out.value = 0.25 * std::pow(static_cast<double>(g.side()), -g.d) *
                    (acc_q.value() + acc_p.value());
        return out;
    }

    if (scheme == Scheme::momentum_transfer) {
        // the schedule drives the mass to zero: the limit is the massless
        // lattice vacuum, defined only where the zero mode carries no q
        const long zero = g.index_of(std::vector<long>(g.d, 0));
        if (std::abs(spec.qh[zero]) != 0.0)
            throw std::runtime_error(
                "momentum-transfer limit is the massless lattice vacuum; a "
                "nonzero zero-mode q component has no finite exponent");
        std::vector<double> s1(g.side());
        for (long t = 0; t < g.side(); ++t)
            s1[t] = sq(2.0 / g.eps *
                       std::sin(0.5 * g.eps * g.k_component(t - g.r)));
        num::NeumaierSum acc_q, acc_p;
        for (long idx : shell_order(g.d, g.side(), -g.r)) {
            if (idx == zero) continue;  // gamma(0) = 0: q is zero, p weight 0
            long rem = idx;
            double g2 = 0.0;
            for (int j = 0; j < g.d; ++j) {
                g2 += s1[rem % g.side()];
                rem /= g.side();
            }
            const double gam = std::sqrt(g2);
            acc_q.add(std::norm(spec.qh[idx]) / gam);
            acc_p.add(std::norm(spec.ph[idx]) * gam);
        }
        QuasiFreeExponent out;
        out.value = 0.25 * std::pow(static_cast<double>(g.side()), -g.d) *
                    (acc_q.value() + acc_p.value());
        return out;
    }

    // wavelet: cascade-weighted box sum plus certified tail
    if (bank == nullptr)
        throw std::runtime_error("wavelet limit exponent needs a filter bank");
    if (bank->d != g.d)
        throw std::runtime_error("filter bank dimension mismatch");
    if (bank->kind == FilterKind::point || bank->kind == FilterKind::momentum_shell)
        throw std::runtime_error(
            "limit exponent needs a scaling-function filter (haar or "
            "daubechies)");
    const DecayCertificate cert = certify_decay(*bank);
    if (!(cert.rho > 0.5 * (g.d + 1)))
        throw std::runtime_error(
            "cascade decay exponent rho <= (d+1)/2: the limit norm does not "
            "converge for this filter in this dimension");

    const long B = k_cutoff > 0 ? k_cutoff : g.r + 64;
    if (B < g.r)
        throw std::runtime_error("limit cutoff must cover the source zone");
    const long bside = 2 * B + 1;

    std::vector<double> s1(bside), phi2(bside);
    std::vector<long> wrap(bside);
    for (long t = 0; t < bside; ++t) {
        const long o = t - B;
        const double k = kPi * static_cast<double>(o) / g.L();
        s1[t] = k * k;
        phi2[t] = std::norm(cascade_phi_hat_axis(*bank, g.eps * k).value);
        wrap[t] = wrap_digit(o, g.r);
    }

    double sup_q = 0.0, sup_p = 0.0;
    for (long i = 0; i < g.volume(); ++i) {
        sup_q = std::max(sup_q, std::abs(spec.qh[i]));
        sup_p = std::max(sup_p, std::abs(spec.ph[i]));
    }

    num::NeumaierSum acc_q, acc_p;
    for (long idx : shell_order(g.d, bside, -B)) {
        long rem = idx, coarse = 0, cstride = 1;
        double g2 = m * m, w = 1.0;
        for (int j = 0; j < g.d; ++j) {
            const long t = rem % bside;
            rem /= bside;
            g2 += s1[t];
            w *= phi2[t];
            coarse += wrap[t] * cstride;
            cstride *= g.side();
        }
        const double gam = std::sqrt(g2);
        acc_q.add(w * std::norm(spec.qh[coarse]) / gam);
        acc_p.add(w * std::norm(spec.ph[coarse]) * gam);
    }

    QuasiFreeExponent out;
    out.value = 0.25 * std::pow(2.0 * g.L(), -g.d) * std::pow(g.eps, g.d) *
                (acc_q.value() + acc_p.value());
    out.tail =
        0.25 * embedding_tail_bound(cert, g.d, g.eps, g.L(), m, B, sup_q, sup_p);
    out.cutoff = B;
    return out;
}

QuasiFreeExponent continuum_exponent_via_embedding(const ContinuumField& e) {
    std::vector<double> s1(e.side());
    for (long t = 0; t < e.side(); ++t) s1[t] = sq(e.k_component(t - e.B));

    num::NeumaierSum acc;
    for (long idx : shell_order(e.d, e.side(), -e.B)) {
        long rem = idx;
        double g2 = e.m * e.m;
        for (int j = 0; j < e.d; ++j) {
            g2 += s1[rem % e.side()];
            rem /= e.side();
        }
        const double ghalf = std::sqrt(std::sqrt(g2));  // gamma^{1/2}
        acc.add(std::norm(e.qh[idx] / ghalf + cplx(0.0, 1.0) * ghalf * e.ph[idx]));
    }
    QuasiFreeExponent out;
    out.value = 0.25 * std::pow(2.0 * e.L, -e.d) * acc.value();
    out.tail = 0.25 * e.tail_norm2;
    out.cutoff = e.B;
    return out;
}

// ===========================================================================
// test functions
// ===========================================================================

long TestFunction::size() const {
    long v = 1;
    for (int j = 0; j < d; ++j) v *= side();
    return v;
}

namespace {

long band_index(const TestFunction& f, const std::vector<long>& j) {
    long idx = 0;
    for (int a = 0; a < f.d; ++a) idx = idx * f.side() + (j[a] + f.jmax);
    return idx;
}

std::vector<long> band_offsets(const TestFunction& f, long idx) {
    std::vector<long> j(f.d);
    for (int a = f.d - 1; a >= 0; --a) {
        j[a] = idx % f.side() - f.jmax;
        idx /= f.side();
    }
    return j;
}

}  // namespace

cplx TestFunction::coefficient(const std::vector<long>& j) const {
    if (static_cast<int>(j.size()) != d)
        throw std::runtime_error("test function: offset dimension mismatch");
    for (long ja : j)
        if (std::labs(ja) > jmax) return cplx(0.0, 0.0);
    return coef[band_index(*this, j)];
}

bool TestFunction::real_valued(double tol) const {
    for (long idx = 0; idx < size(); ++idx) {
        std::vector<long> j = band_offsets(*this, idx);
        for (long& ja : j) ja = -ja;
        if (std::abs(coef[idx] - std::conj(coef[band_index(*this, j)])) > tol)
            return false;
    }
    return true;
}

TestFunction make_test_function(int d, long jmax, std::vector<cplx> coef) {
    if (d < 1) throw std::runtime_error("test function: dimension must be >= 1");
    if (jmax < 0) throw std::runtime_error("test function: jmax must be >= 0");
    TestFunction f;
    f.d = d;
    f.jmax = jmax;
    long expect = 1;
    for (int j = 0; j < d; ++j) expect *= 2 * jmax + 1;
    if (static_cast<long>(coef.size()) != expect)
        throw std::runtime_error("test function: coefficient count mismatch");
    f.coef = std::move(coef);
    return f;
}

std::string channel_name(Channel ch) {
    switch (ch) {
        case Channel::phi_phi: return "phi_phi";
        case Channel::pi_pi: return "pi_pi";
        case Channel::phi_pi: return "phi_pi";
    }
    throw std::runtime_error("unknown channel");
}

Channel parse_channel(const std::string& name) {
    if (name == "phi_phi") return Channel::phi_phi;
    if (name == "pi_pi") return Channel::pi_pi;
    if (name == "phi_pi") return Channel::phi_pi;
    throw std::runtime_error("unknown channel: " + name);
}

// ===========================================================================
// smeared two-point flows
// ===========================================================================

namespace {

void require_two_point_scheme(Scheme scheme) {
    if (scheme != Scheme::blockspin && scheme != Scheme::point)
        throw std::runtime_error(
            "smeared two-point flows are defined for the block-spin and "
            "point schemes");
}

// G_hat(k_b): the band coefficient times the cell-smearing symbol
//   blockspin: eps^{-d} prod_j (1 - e^{-i k_j eps}) / (i k_j)   (eps at k = 0)
//   point:     1
cplx smear_hat(Scheme scheme, const TestFunction& f, const std::vector<long>& b,
               double eps_cell, double L) {
    cplx v = f.coefficient(b);
    if (scheme == Scheme::point || v == cplx(0.0, 0.0)) return v;
    for (int a = 0; a < f.d; ++a) {
        const double k = kPi * static_cast<double>(b[a]) / L;
        if (k == 0.0) {
            v *= eps_cell;
        } else {
            v *= (1.0 - std::exp(cplx(0.0, -k * eps_cell))) / cplx(0.0, k);
        }
        v /= eps_cell;  // the eps^{-d} cell normalization, one axis at a time
    }
    return v;
}

struct ChannelTraits {
    int gamma_power = 0;     // -1, +1, 0
    double eps_power = 0.0;  // raw prefactor exponent of eps_N
    bool imaginary = false;  // phi-pi carries the i/2 commutator
};

ChannelTraits channel_traits(Channel ch) {
    switch (ch) {
        case Channel::phi_phi: return {-1, -1.0, false};
        case Channel::pi_pi: return {+1, +1.0, false};
        case Channel::phi_pi: return {0, 0.0, true};
    }
    throw std::runtime_error("unknown channel");
}

// rescaling exponent: eps^{1-d}, eps^{-(1+d)}, eps^{-d}
double rescale_power(Channel ch, int d) {
    switch (ch) {
        case Channel::phi_phi: return 1.0 - d;
        case Channel::pi_pi: return -(1.0 + d);
        case Channel::phi_pi: return -static_cast<double>(d);
    }
    throw std::runtime_error("unknown channel");
}

}  // namespace

TwoPointValue two_point_flow(Channel ch, Scheme scheme,
                             const LatticeGeometry& geo, const TestFunction& f,
                             const TestFunction& g, const MassSchedule& schedule,
                             int M) {
    require_two_point_scheme(scheme);
    if (f.d != geo.d || g.d != geo.d || schedule.d != geo.d)
        throw std::runtime_error("two-point flow: dimension mismatch");
    if (f.jmax >= geo.r || g.jmax >= geo.r)
        throw std::runtime_error(
            "two-point flow: the test-function band must fit inside the dual "
            "zone (jmax < r)");
    if (M < 0) throw std::runtime_error("two-point flow: M must be >= 0");

    const ChannelTraits tr = channel_traits(ch);
    const double eps_f = geo.eps / static_cast<double>(1L << M);
    const double m2 = schedule.m * schedule.m;

    // both bands must overlap at b and -b for a term to survive
    const long jm = std::min(f.jmax, g.jmax);
    const long bside = 2 * jm + 1;

    num::NeumaierSum re, im;
    for (long idx : shell_order(geo.d, bside, -jm)) {
        std::vector<long> b(geo.d), nb(geo.d);
        long rem = idx;
        double g2 = m2;
        for (int a = geo.d - 1; a >= 0; --a) {
            b[a] = rem % bside - jm;
            rem /= bside;
            nb[a] = -b[a];
            const double k = geo.k_component(b[a]);
            g2 += sq(2.0 / eps_f * std::sin(0.5 * eps_f * k));
        }
        double w = 1.0;
        if (tr.gamma_power == -1) w = 1.0 / std::sqrt(g2);
        if (tr.gamma_power == +1) w = std::sqrt(g2);
        const cplx term = w * smear_hat(scheme, f, nb, geo.eps, geo.L()) *
                          smear_hat(scheme, g, b, geo.eps, geo.L());
        re.add(term.real());
        im.add(term.imag());
    }

    cplx pref = 0.5 * std::pow(static_cast<double>(geo.side()), -geo.d) *
                std::pow(geo.eps, tr.eps_power);
    if (tr.imaginary) pref *= cplx(0.0, 1.0);

    TwoPointValue out;
    out.raw = pref * cplx(re.value(), im.value());
    out.rescaled = out.raw * std::pow(geo.eps, rescale_power(ch, geo.d));
    return out;
}

cplx two_point_limit(Channel ch, int d, double L, const TestFunction& f,
                     const TestFunction& g, double m) {
    if (f.d != d || g.d != d)
        throw std::runtime_error("two-point limit: dimension mismatch");
    if (!(L > 0.0) || !(m > 0.0))
        throw std::runtime_error("two-point limit needs L > 0 and m > 0");
    const ChannelTraits tr = channel_traits(ch);
    const long jm = std::min(f.jmax, g.jmax);
    const long bside = 2 * jm + 1;

    num::NeumaierSum re, im;
    for (long idx : shell_order(d, bside, -jm)) {
        std::vector<long> b(d), nb(d);
        long rem = idx;
        double g2 = m * m;
        for (int a = d - 1; a >= 0; --a) {
            b[a] = rem % bside - jm;
            rem /= bside;
            nb[a] = -b[a];
            g2 += sq(kPi * static_cast<double>(b[a]) / L);
        }
        double w = 1.0;
        if (tr.gamma_power == -1) w = 1.0 / std::sqrt(g2);
        if (tr.gamma_power == +1) w = std::sqrt(g2);
        const cplx term = w * f.coefficient(nb) * g.coefficient(b);
        re.add(term.real());
        im.add(term.imag());
    }
    cplx pref = 0.5 * std::pow(2.0 * L, -d);
    if (tr.imaginary) pref *= cplx(0.0, 1.0);
    return pref * cplx(re.value(), im.value());
}

// ===========================================================================
// smearing vectors and the state-identity evaluation
// ===========================================================================

namespace {

PhaseField smearing_vector(Scheme scheme, const LatticeGeometry& geo,
                           const TestFunction& f, double eps_level,
                           bool momentum_channel) {
    require_two_point_scheme(scheme);
    if (f.d != geo.d) throw std::runtime_error("smearing: dimension mismatch");
    if (f.jmax >= geo.r)
        throw std::runtime_error(
            "smearing: the test-function band must fit inside the dual zone");
    if (eps_level <= 0.0) eps_level = geo.eps;
    if (!f.real_valued())
        throw std::runtime_error("smearing vectors need real-valued test functions");

    const double amp = std::pow(eps_level / geo.eps, 0.5 * geo.d) *
                       std::pow(eps_level, momentum_channel ? 0.5 : -0.5);

    std::vector<cplx> qh(geo.volume(), cplx(0.0, 0.0));
    std::vector<cplx> ph(geo.volume(), cplx(0.0, 0.0));
    std::vector<cplx>& target = momentum_channel ? ph : qh;

    const long bside = f.side();
    for (long idx = 0; idx < f.size(); ++idx) {
        std::vector<long> b(geo.d);
        long rem = idx;
        for (int a = geo.d - 1; a >= 0; --a) {
            b[a] = rem % bside - f.jmax;
            rem /= bside;
        }
        target[geo.index_of(b)] =
            amp * smear_hat(scheme, f, b, eps_level, geo.L());
    }
    return make_momentum_field(geo, std::move(qh), std::move(ph));
}

}  // namespace

PhaseField phi_smearing(Scheme scheme, const LatticeGeometry& geo,
                        const TestFunction& f, double eps_level) {
    return smearing_vector(scheme, geo, f, eps_level, false);
}

PhaseField pi_smearing(Scheme scheme, const LatticeGeometry& geo,
                       const TestFunction& f, double eps_level) {
    return smearing_vector(scheme, geo, f, eps_level, true);
}

cplx two_point_via_state(Channel ch, Scheme scheme, const LatticeGeometry& geo,
                         const TestFunction& f, const TestFunction& g,
                         const MassSchedule& schedule, int M) {
    require_two_point_scheme(scheme);
    if (M < 0) throw std::runtime_error("two-point state identity: M >= 0");
    const LatticeGeometry fine = M == 0 ? geo : refine(geo, M);
    const DispersionRelation disp = lattice_dispersion(schedule, fine.eps);

    const PhaseField a = ch == Channel::pi_pi
                             ? pi_smearing(scheme, fine, f, geo.eps)
                             : phi_smearing(scheme, fine, f, geo.eps);
    const PhaseField b = ch == Channel::phi_phi
                             ? phi_smearing(scheme, fine, g, geo.eps)
                             : pi_smearing(scheme, fine, g, geo.eps);

    // <A B> = -d_t d_s [e^{-(i/2) t s sigma} e^{-E(t xi + s eta)}] at 0
    //       = [E(xi + eta) - E(xi) - E(eta)] + (i/2) sigma(xi, eta);
    // the check W(f, f) = 2 E(xi_f) pins the polarization factor
    const double ea = ground_exponent(a, disp);
    const double eb = ground_exponent(b, disp);
    const double eab = ground_exponent(linear_combination(1.0, a, 1.0, b), disp);
    return cplx(eab - ea - eb, 0.5 * symplectic_form(a, b));
}

// ===========================================================================
// convergence reports
// ===========================================================================

FlowReport convergence_report(Scheme scheme, const FilterBank* bank,
                              const PhaseField& xi, const MassSchedule& schedule,
                              int M_max, long k_cutoff) {
    if (M_max < 0) throw std::runtime_error("report: M_max must be >= 0");
    const LatticeGeometry& g = xi.geo;
    PhaseField storage;
    const PhaseField& spec = momentum_view(xi, storage);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    FlowReport rep;
    rep.label = "exponent";
    rep.scheme = scheme;
    rep.d = g.d;
    rep.eps = g.eps;
    rep.r = g.r;

    const bool transfer = scheme == Scheme::momentum_transfer;
    if (scheme == Scheme::wavelet || scheme == Scheme::momentum_cutoff) {
        const QuasiFreeExponent lim =
            limit_exponent(scheme, bank, spec, schedule.m, k_cutoff);
        rep.has_limit = true;
        rep.limit = lim.value;
        rep.limit_tail = lim.tail;
    } else if (!transfer) {
        rep.divergence_expected = true;  // block-spin / point exponents grow
    }

    // one-step pull-back for the projective-consistency column
    const ScaleMap one = make_scale_map(scheme, g, 1, bank);
    const PhaseField mapped = apply(one, spec);

    for (int M = 0; M <= M_max; ++M) {
        FlowRow row;
        row.M = M;
        row.value = flow_exponent(scheme, bank, spec, schedule, M);
        if (rep.has_limit) {
            row.defect = std::abs(row.value - rep.limit);
        } else if (transfer) {
            // the flow identity: the step-M state is the ground state at
            // mass 2^{-M} m on the same lattice
            MassSchedule halved = schedule;
            halved.m = schedule.m * std::pow(2.0, -M);
            row.defect = std::abs(
                row.value - ground_exponent(spec, lattice_dispersion(halved, g.eps)));
        } else {
            row.defect = nan;
        }
        row.consistency =
            M == 0 ? nan
                   : std::abs(row.value -
                              flow_exponent(scheme, bank, mapped, schedule, M - 1));
        rep.rows.push_back(row);
    }
    return rep;
}

FlowReport convergence_report(Channel ch, Scheme scheme,
                              const LatticeGeometry& geo, const TestFunction& f,
                              const TestFunction& g, const MassSchedule& schedule,
                              int M_max) {
    if (M_max < 0) throw std::runtime_error("report: M_max must be >= 0");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool imag_part = ch == Channel::phi_pi;

    FlowReport rep;
    rep.label = channel_name(ch);
    rep.scheme = scheme;
    rep.d = geo.d;
    rep.eps = geo.eps;
    rep.r = geo.r;
    rep.has_limit = true;
    const cplx lim = two_point_limit(ch, geo.d, geo.L(), f, g, schedule.m);
    rep.limit = imag_part ? lim.imag() : lim.real();

    const bool real_pair = f.real_valued() && g.real_valued();
    for (int M = 0; M <= M_max; ++M) {
        FlowRow row;
        row.M = M;
        const TwoPointValue v = two_point_flow(ch, scheme, geo, f, g, schedule, M);
        row.value = imag_part ? v.rescaled.imag() : v.rescaled.real();
        row.defect = std::abs(row.value - rep.limit);

        long double fine_vol = static_cast<long double>(geo.volume());
        for (int j = 0; j < geo.d * M; ++j) fine_vol *= 2.0L;
        if (real_pair && fine_vol <= static_cast<long double>(kStateIdentityVolumeCap)) {
            row.consistency = std::abs(
                v.raw - two_point_via_state(ch, scheme, geo, f, g, schedule, M));
        } else {
            row.consistency = nan;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace wrg
