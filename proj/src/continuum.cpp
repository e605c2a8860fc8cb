#include "wrg/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrg/numerics.hpp"

namespace wrg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr long double kEulerL =
    0.5772156649015328606065120900824024310422L;

double sq(double x) { return x * x; }

double gamma_m(double k, double m) { return std::sqrt(k * k + m * m); }

// |gamma^{-1/2} qhat + i gamma^{1/2} phat|^2 at one mode
double z_density(cplx qh, cplx ph, double gam) {
    const double rg = std::sqrt(gam);
    return std::norm(qh / rg + cplx{0.0, 1.0} * rg * ph);
}

// int_{s0}^inf x^a (1 + c x)^{-q} dx, bounded via x <= (1 + c x)/c;
// infinite unless q > a + 1
double tail_integral(double a, double q, double c, double s0) {
    if (q <= a + 1.0) return std::numeric_limits<double>::infinity();
    const double p = q - a - 1.0;
    return std::pow(c, -a) * std::pow(1.0 + c * s0, -p) / (c * p);
}

}  // namespace

// ===========================================================================
// compactly supported line fields
// ===========================================================================

CompactField make_compact_field(const FilterBank& bank, double eps, long lo,
                                std::vector<double> q,
                                std::vector<double> p) {
    if (bank.d != 1)
        throw std::runtime_error("compact line fields are one-dimensional");
    if (!(eps > 0.0))
        throw std::runtime_error("compact field: eps must be positive");
    if (q.size() != p.size() || q.empty())
        throw std::runtime_error("compact field: component size mismatch");
    CompactField f;
    f.eps = eps;
    f.lo = lo;
    f.q = std::move(q);
    f.p = std::move(p);
    f.bank = bank;
    return f;
}

namespace {

cplx window_sum(const std::vector<double>& v, double eps, long lo, double k) {
    num::NeumaierSum re, im;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0.0) continue;
        const double phase = -k * eps * double(lo + long(j));
        re.add(v[j] * std::cos(phase));
        im.add(v[j] * std::sin(phase));
    }
    return cplx{re.value(), im.value()};
}

}  // namespace

cplx compact_qhat(const CompactField& f, double k) {
    const cplx phi = cascade_phi_hat_axis(f.bank, f.eps * k).value;
    return std::sqrt(f.eps) * phi * window_sum(f.q, f.eps, f.lo, k);
}

cplx compact_phat(const CompactField& f, double k) {
    const cplx phi = cascade_phi_hat_axis(f.bank, f.eps * k).value;
    return std::sqrt(f.eps) * phi * window_sum(f.p, f.eps, f.lo, k);
}

double compact_support_radius(const CompactField& f) {
    const long hi = f.lo + long(f.q.size()) - 1 + f.bank.n0 +
                    f.bank.tap_count() - 1;
    const long lo = f.lo + f.bank.n0;
    return f.eps * double(std::max(std::labs(lo), std::labs(hi)));
}

// ===========================================================================
// one-particle norms
// ===========================================================================

NormValue norm_continuum(const ContinuumNormSpec& spec,
                         const ContinuumField& xi) {
    if (spec.volume != VolumeKind::finite)
        throw std::runtime_error(
            "a boxed mode set has no line integral; use a compact field for "
            "the infinite volume");
    if (spec.L != xi.L || spec.m != xi.m)
        throw std::runtime_error("norm spec does not match the field");
    if (spec.k_cutoff < 0 || spec.k_cutoff > xi.B)
        throw std::runtime_error(
            "insufficient coefficients: the field stores modes only up to "
            "its box");

    num::NeumaierSum inside, annulus;
    for (long idx = 0; idx < xi.size(); ++idx) {
        const std::vector<long> b = xi.offsets_of(idx);
        double k2 = 0.0;
        long binf = 0;
        for (long bj : b) {
            k2 += sq(xi.k_component(bj));
            binf = std::max(binf, std::labs(bj));
        }
        const std::size_t i = static_cast<std::size_t>(idx);
        const double dens =
            z_density(xi.qh[i], xi.ph[i], std::sqrt(k2 + xi.m * xi.m));
        (binf <= spec.k_cutoff ? inside : annulus).add(dens);
    }
    const double weight = std::pow(2.0 * xi.L, -xi.d);
    NormValue out;
    out.value = weight * inside.value();
    out.error = weight * annulus.value() + xi.tail_norm2;
    return out;
}

NormValue norm_continuum(const ContinuumNormSpec& spec,
                         const CompactField& xi) {
    if (!(spec.m > 0.0)) throw std::runtime_error("norm needs a mass m > 0");
    const DecayCertificate cert = certify_decay(xi.bank);
    double l1q = 0.0, l1p = 0.0;
    for (double v : xi.q) l1q += std::abs(v);
    for (double v : xi.p) l1p += std::abs(v);

    const auto density = [&](double k) {
        return z_density(compact_qhat(xi, k), compact_phat(xi, k),
                         gamma_m(k, spec.m));
    };

    NormValue out;
    if (spec.volume == VolumeKind::finite) {
        if (!(spec.L > 0.0))
            throw std::runtime_error("finite volume needs L > 0");
        if (spec.k_cutoff < 0)
            throw std::runtime_error("finite volume needs k_cutoff >= 0");
        num::NeumaierSum sum;
        for (long b = -spec.k_cutoff; b <= spec.k_cutoff; ++b)
            sum.add(density(kPi * double(b) / spec.L));
        out.value = sum.value() / (2.0 * spec.L);
        out.error = embedding_tail_bound(cert, 1, xi.eps, spec.L, spec.m,
                                         spec.k_cutoff, l1q, l1p);
    } else {
        if (!(spec.k_max > 0.0))
            throw std::runtime_error("infinite volume needs k_max > 0");
        const num::QuadResult quad = num::integrate_adaptive(
            density, -spec.k_max, spec.k_max, spec.quad_tol, 45);
        // analytic remainder from the certificate envelope:
        // density <= eps C^2 (1+eps k)^{-2 rho} (l1q^2/m + (m + k) l1p^2)
        const double t0 = tail_integral(0.0, 2.0 * cert.rho, xi.eps, spec.k_max);
        const double t1 = tail_integral(1.0, 2.0 * cert.rho, xi.eps, spec.k_max);
        const double tail = xi.eps * cert.C * cert.C *
                            ((l1q * l1q / spec.m + spec.m * l1p * l1p) * t0 +
                             l1p * l1p * t1) /
                            kPi;
        out.value = quad.value / (2.0 * kPi);
        out.error = quad.error / (2.0 * kPi) + tail;
    }
    return out;
}

FlowReport infinite_volume_defect(const CompactField& xi,
                                  const std::vector<double>& L_list,
                                  double m, double k_max) {
    if (L_list.empty())
        throw std::runtime_error("the volume ladder must not be empty");
    if (!(m > 0.0) || !(k_max > 0.0))
        throw std::runtime_error("the defect needs m > 0 and k_max > 0");
    double L_min = L_list.front();
    for (double L : L_list) {
        if (!(L > 0.0)) throw std::runtime_error("volumes must be positive");
        L_min = std::min(L_min, L);
    }
    if (compact_support_radius(xi) >= L_min)
        throw std::runtime_error(
            "the smeared support must fit inside the smallest torus");

    ContinuumNormSpec line;
    line.volume = VolumeKind::infinite;
    line.m = m;
    line.k_max = k_max;
    const NormValue limit = norm_continuum(line, xi);

    FlowReport rep;
    rep.label = "infinite_volume";
    rep.scheme = Scheme::wavelet;
    rep.d = 1;
    rep.eps = xi.eps;
    rep.r = 0;
    rep.has_limit = true;
    rep.limit = limit.value;
    rep.limit_tail = limit.error;
    int index = 0;
    for (double L : L_list) {
        ContinuumNormSpec torus;
        torus.volume = VolumeKind::finite;
        torus.m = m;
        torus.L = L;
        torus.k_cutoff = long(std::ceil(k_max * L / kPi));
        const NormValue nv = norm_continuum(torus, xi);
        FlowRow row;
        row.M = index++;
        row.value = nv.value;
        row.defect = std::abs(nv.value - limit.value);
        row.consistency = nv.error + limit.error;
        rep.rows.push_back(row);
    }
    return rep;
}

// ===========================================================================
// modified Bessel kernels
// ===========================================================================

namespace {

// ascending series (small z), carried in extended precision because the
// log and series parts cancel to ~e^{-2z} of their own size near z = 8
long double bessel_k0_series(long double z) {
    const long double t = z * z / 4.0L;
    long double i0 = 1.0L, term = 1.0L, h = 0.0L, sum = 0.0L;
    for (int j = 1; j <= 200; ++j) {
        term *= t / (long double)(j) / (long double)(j);
        h += 1.0L / (long double)(j);
        i0 += term;
        sum += term * h;
        if (term < 1e-26L * i0) break;
    }
    return -(std::log(z / 2.0L) + kEulerL) * i0 + sum;
}

long double bessel_k1_series(long double z) {
    const long double t = z * z / 4.0L;
    long double u = 0.5L * z;  // (z/2) (z^2/4)^j / (j! (j+1)!)
    long double i1 = u;
    long double hj = 0.0L, hj1 = 1.0L;
    long double sum = u * (hj + hj1 - 2.0L * kEulerL);
    for (int j = 1; j <= 200; ++j) {
        u *= t / (long double)(j) / (long double)(j + 1);
        hj += 1.0L / (long double)(j);
        hj1 += 1.0L / (long double)(j + 1);
        i1 += u;
        sum += u * (hj + hj1 - 2.0L * kEulerL);
        if (u < 1e-26L * i1) break;
    }
    return std::log(z / 2.0L) * i1 + 1.0L / z - 0.5L * sum;
}

// int_0^inf e^{-z cosh t} cosh(order t) dt via adaptive panels on the
// truncated range, with e^{-z} factored out for conditioning
double bessel_k_quad(int order, double z) {
    const double t_end = std::acosh(1.0 + 46.0 / z);
    const num::QuadResult q = num::integrate_adaptive(
        [&](double t) {
            const double ch = std::cosh(t);
            return std::exp(-z * (ch - 1.0)) * (order == 1 ? ch : 1.0);
        },
        0.0, t_end, 1e-13);
    return std::exp(-z) * q.value;
}

// large-z expansion; optimally truncated error ~ e^{-2z}, far below target
// for z >= 30
double bessel_k_asymptotic(int order, double z) {
    const double mu = 4.0 * double(order) * double(order);
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= 25; ++j) {
        const double odd = double(2 * j - 1);
        term *= (mu - odd * odd) / (8.0 * double(j) * z);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

}  // namespace

double bessel_k(int order, double z) {
    if (order != 0 && order != 1)
        throw std::runtime_error("bessel kernel: order must be 0 or 1");
    if (!(z > 0.0))
        throw std::runtime_error("bessel kernel: z must be positive");
    if (z < 8.0)
        return double(order == 0 ? bessel_k0_series((long double)z)
                                 : bessel_k1_series((long double)z));
    if (z < 30.0) return bessel_k_quad(order, z);
    return bessel_k_asymptotic(order, z);
}

// ===========================================================================
// Poisson defect of the Bessel kernels
// ===========================================================================

double bump_value(const BsplineBump& f, double x) {
    const double t = std::abs((x - f.c) / f.a);
    if (t >= 2.0) return 0.0;
    if (t <= 1.0) return (4.0 - 6.0 * t * t + 3.0 * t * t * t) / 6.0;
    const double w = 2.0 - t;
    return w * w * w / 6.0;
}

cplx bump_hat(const BsplineBump& f, double k) {
    const double x = f.a * k / 2.0;
    const double s = x == 0.0 ? 1.0 : std::sin(x) / x;
    const double mag = f.a * s * s * s * s;
    return mag * std::exp(cplx{0.0, -k * f.c});
}

namespace {

double image_kernel(double u, double L, double m, bool plus) {
    if (!(L > 0.0) || !(m > 0.0))
        throw std::runtime_error("image kernel needs L > 0 and m > 0");
    if (!(std::abs(u) < 2.0 * L))
        throw std::runtime_error(
            "image kernel evaluated at |u| >= 2L (on-site singularity)");
    num::NeumaierSum acc;
    for (long n = 1;; ++n) {
        const double za = 2.0 * L * double(n) - u;
        const double zb = 2.0 * L * double(n) + u;
        if (plus) {
            acc.add(-(m / za) * bessel_k(1, m * za));
            acc.add(-(m / zb) * bessel_k(1, m * zb));
        } else {
            acc.add(2.0 * bessel_k(0, m * za));
            acc.add(2.0 * bessel_k(0, m * zb));
        }
        // K_0, K_1 <= ~e^{-z} here; the remaining images are geometrically
        // smaller, so stop once the envelope clears 1e-15
        if (m * (2.0 * L * double(n) - std::abs(u)) > 34.0) break;
    }
    return acc.value();
}

struct ChannelValue {
    double value = 0.0;
    double error = 0.0;
};

// int_R gamma^{sign} Re[xi_hat conj(eta_hat)] dk minus the (pi/L)-weighted
// mode sum of the same density (both even in k for real bumps)
ChannelValue spectral_side(const BsplineBump& xi, const BsplineBump& eta,
                           double L, double m, int sign) {
    const double coef =
        256.0 / (std::pow(xi.a, 3.0) * std::pow(eta.a, 3.0));
    const double p = 7.0 - double(sign);
    // truncate where the k^{-8}/k^{-6} envelope tail drops below 1e-13
    const double k_max = std::pow(coef / (p * 1e-13), 1.0 / p);

    const auto h = [&](double k) {
        const double gam = gamma_m(k, m);
        const double w = sign < 0 ? 1.0 / gam : gam;
        return w * std::real(bump_hat(xi, k) * std::conj(bump_hat(eta, k)));
    };

    // panels aligned with the faster sinc oscillation
    const double step = kPi / std::max(xi.a, eta.a);
    std::vector<double> breaks;
    for (double b = 0.0; b < k_max; b += step) breaks.push_back(b);
    breaks.push_back(k_max);
    const num::QuadResult quad = num::integrate_panels(h, breaks, 1e-12);

    const long B = long(std::ceil(k_max * L / kPi));
    num::NeumaierSum lat;
    lat.add(h(0.0));
    for (long b = 1; b <= B; ++b) lat.add(2.0 * h(kPi * double(b) / L));

    const double tail = coef * std::pow(k_max, -p) / p;
    ChannelValue out;
    out.value = 2.0 * quad.value - (kPi / L) * lat.value();
    out.error = 2.0 * quad.error + 2.0 * tail;
    return out;
}

// double integral of the image kernel against the bumps, through the
// cross-correlation in the difference variable
ChannelValue kernel_side(const BsplineBump& xi, const BsplineBump& eta,
                         double L, double m, bool plus) {
    const double spread = 2.0 * (xi.a + eta.a);
    const double u_lo = xi.c - eta.c - spread;
    const double u_hi = xi.c - eta.c + spread;

    const auto corr = [&](double u) {
        const double y_lo = std::max(eta.c - 2.0 * eta.a, xi.c - 2.0 * xi.a - u);
        const double y_hi = std::min(eta.c + 2.0 * eta.a, xi.c + 2.0 * xi.a - u);
        if (y_hi <= y_lo) return 0.0;
        return num::integrate_adaptive(
                   [&](double y) {
                       return bump_value(xi, y + u) * bump_value(eta, y);
                   },
                   y_lo, y_hi, 1e-13)
            .value;
    };

    std::vector<double> breaks;
    for (int j = 0; j <= 8; ++j)
        breaks.push_back(u_lo + (u_hi - u_lo) * double(j) / 8.0);
    const num::QuadResult quad = num::integrate_panels(
        [&](double u) { return image_kernel(u, L, m, plus) * corr(u); },
        breaks, 1e-12);

    ChannelValue out;
    out.value = quad.value;
    out.error = quad.error + (u_hi - u_lo) * 1e-13 + 1e-13;
    return out;
}

}  // namespace

double poisson_kernel_minus(double u, double L, double m) {
    return image_kernel(u, L, m, false);
}

double poisson_kernel_plus(double u, double L, double m) {
    return image_kernel(u, L, m, true);
}

PoissonDefect poisson_defect_check(const BsplineBump& xi,
                                   const BsplineBump& eta, double L,
                                   double m) {
    if (!(L > 0.0) || !(m > 0.0))
        throw std::runtime_error("defect check needs L > 0 and m > 0");
    if (!(xi.a > 0.0) || !(eta.a > 0.0))
        throw std::runtime_error("bump widths must be positive");
    if (std::abs(xi.c) + 2.0 * xi.a >= L ||
        std::abs(eta.c) + 2.0 * eta.a >= L)
        throw std::runtime_error(
            "bump supports must lie compactly inside (-L, L)");

    const ChannelValue lm = spectral_side(xi, eta, L, m, -1);
    const ChannelValue lp = spectral_side(xi, eta, L, m, +1);
    const ChannelValue rm = kernel_side(xi, eta, L, m, false);
    const ChannelValue rp = kernel_side(xi, eta, L, m, true);

    PoissonDefect out;
    out.lhs_minus = lm.value;
    out.lhs_plus = lp.value;
    out.rhs_minus = rm.value;
    out.rhs_plus = rp.value;
    out.lhs_error = std::max(lm.error, lp.error);
    out.rhs_error = std::max(rm.error, rp.error);
    return out;
}

}  // namespace wrg
