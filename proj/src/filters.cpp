#include "wrg/filters.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "wrg/numerics.hpp"

namespace wrg {

namespace {

using cplxl = std::complex<long double>;

constexpr double kSqrt2 = 1.4142135623730950488;

// binomial coefficients as long double (exact for the ranges used here)
long double binomial(int n, int k) {
    long double v = 1.0L;
    for (int i = 1; i <= k; ++i)
        v = v * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return std::floor(v + 0.5L);
}

// ---------------------------------------------------------------------------
// Daubechies spectral factorization
// ---------------------------------------------------------------------------
//
// |m0(omega)|^2 = cos^{2K}(omega/2) P(sin^2(omega/2)) with
// P(y) = sum_{j<K} C(K-1+j, j) y^j. Substituting y = (2 - z - 1/z)/4 and
// clearing denominators gives the integer Laurent polynomial
//     A(z) = sum_j C(K-1+j, j) (-1)^j (z-1)^{2j} (4z)^{K-1-j},
// whose roots pair up as (z, 1/z). Keeping the K-1 roots inside the unit
// circle selects the extremal-phase family. Roots are seeded by a companion
// eigensolve in double precision and polished by Newton steps on the exact
// long-double coefficients.

std::vector<long double> halfband_coefficients(int K) {
    std::vector<long double> c(static_cast<std::size_t>(2 * K - 1), 0.0L);
    for (int j = 0; j < K; ++j) {
        long double base = binomial(K - 1 + j, j) * ((j % 2) ? -1.0L : 1.0L);
        for (int p = K - 1 - j; p > 0; --p) base *= 4.0L;
        // expand (z - 1)^{2j} and shift by z^{K-1-j}
        for (int i = 0; i <= 2 * j; ++i) {
            long double term =
                base * binomial(2 * j, i) * (((2 * j - i) % 2) ? -1.0L : 1.0L);
            c[static_cast<std::size_t>(i + K - 1 - j)] += term;
        }
    }
    return c;
}

cplxl horner(const std::vector<long double>& c, cplxl z) {
    cplxl acc(0.0L, 0.0L);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

cplxl horner_derivative(const std::vector<long double>& c, cplxl z) {
    cplxl acc(0.0L, 0.0L);
    for (std::size_t i = c.size(); i-- > 1;)
        acc = acc * z + c[i] * static_cast<long double>(i);
    return acc;
}

std::vector<cplx> minphase_roots_for(int K) {
    const auto coeffs = halfband_coefficients(K);
    const int deg = 2 * K - 2;
    if (deg == 0) return {};

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    const double lead = static_cast<double>(coeffs[static_cast<std::size_t>(deg)]);
    for (int i = 0; i < deg; ++i)
        companion(i, deg - 1) =
            -static_cast<double>(coeffs[static_cast<std::size_t>(i)]) / lead;
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("make_filter: companion eigensolve failed");

    std::vector<cplx> inside;
    for (int i = 0; i < deg; ++i) {
        cplxl z(solver.eigenvalues()(i).real(), solver.eigenvalues()(i).imag());
        for (int it = 0; it < 12; ++it) {
            cplxl dz = horner(coeffs, z) / horner_derivative(coeffs, z);
            z -= dz;
            if (std::abs(dz) < 1e-22L) break;
        }
        if (std::abs(z) < 1.0L)
            inside.emplace_back(static_cast<double>(z.real()),
                                static_cast<double>(z.imag()));
    }
    if (static_cast<int>(inside.size()) != K - 1)
        throw std::runtime_error(
            "make_filter: expected " + std::to_string(K - 1) +
            " spectral-factor roots inside the unit circle, found " +
            std::to_string(inside.size()));
    return inside;
}

std::vector<double> daubechies_taps(int K, std::vector<cplx>& roots) {
    // m0(z) = ((1+z)/2)^K prod_i (z - z_i)/(1 - z_i); taps are sqrt(2) times
    // the polynomial coefficients in z = e^{-i kappa}
    std::vector<cplxl> poly{cplxl(1.0L, 0.0L)};
    for (int i = 0; i < K; ++i) {
        std::vector<cplxl> next(poly.size() + 1, cplxl(0.0L, 0.0L));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j] * 0.5L;
            next[j + 1] += poly[j] * 0.5L;
        }
        poly = std::move(next);
    }
    for (const cplx& root : roots) {
        cplxl z_i(root.real(), root.imag());
        cplxl scale = 1.0L / (cplxl(1.0L, 0.0L) - z_i);
        std::vector<cplxl> next(poly.size() + 1, cplxl(0.0L, 0.0L));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j] * (-z_i);
            next[j + 1] += poly[j];
        }
        poly.resize(next.size());
        for (std::size_t j = 0; j < next.size(); ++j) poly[j] = next[j] * scale;
    }
    std::vector<double> taps(poly.size());
    long double sum = 0.0L;
    for (std::size_t j = 0; j < poly.size(); ++j) sum += poly[j].real();
    // normalize the tap sum to sqrt(2) exactly (absorbs rounding residue)
    const long double scale = std::sqrt(2.0L) / sum;
    for (std::size_t j = 0; j < poly.size(); ++j)
        taps[j] = static_cast<double>(poly[j].real() * scale);
    // conventional orientation: the large taps lead; reversing the taps
    // conjugate-reciprocates the polynomial, so the stored spectral-factor
    // roots must follow for transfer_ratio to describe the realized m0
    if (std::abs(taps[1]) < std::abs(taps[taps.size() - 2])) {
        std::reverse(taps.begin(), taps.end());
        for (cplx& z : roots) z = 1.0 / z;
    }
    return taps;
}

std::vector<cplx> shell_taps(long target_r) {
    // Dirichlet taps of the sharp half-zone cutoff, one axis:
    //   h_n = (sqrt(2) r')^{-1} [sin(pi n/2) / sin(pi n/(2r'))] e^{i pi n/(2r')}
    // for n in [-r', r'), with the removable limits h_0 = 2^{-1/2} and
    // h_n = 0 for even n != 0. The positive phase orientation makes the
    // realized symbol the indicator of the half-open window (-r'/2, r'/2]
    // in integer fine-mode labels.
    std::vector<cplx> taps(static_cast<std::size_t>(2 * target_r));
    const double rp = static_cast<double>(target_r);
    for (long n = -target_r; n < target_r; ++n) {
        std::size_t at = static_cast<std::size_t>(n + target_r);
        if (n == 0) {
            taps[at] = cplx(1.0 / kSqrt2, 0.0);
        } else if (n % 2 == 0) {
            taps[at] = cplx(0.0, 0.0);
        } else {
            double num = std::sin(M_PI * static_cast<double>(n) / 2.0);
            double den = std::sin(M_PI * static_cast<double>(n) / (2.0 * rp));
            double arg = M_PI * static_cast<double>(n) / (2.0 * rp);
            taps[at] = (num / den / (kSqrt2 * rp)) * cplx(std::cos(arg), std::sin(arg));
        }
    }
    return taps;
}

std::mutex g_cache_mutex;
std::map<int, std::pair<std::vector<double>, std::vector<cplx>>> g_daub_cache;

}  // namespace

// ===========================================================================
// bank construction
// ===========================================================================

cplx FilterBank::tap(long n) const {
    long i = n - n0;
    if (i < 0 || i >= tap_count()) return cplx(0.0, 0.0);
    if (kind == FilterKind::momentum_shell) return ctaps[static_cast<std::size_t>(i)];
    return cplx(taps[static_cast<std::size_t>(i)], 0.0);
}

FilterBank make_filter(FilterKind kind, int d, int K, long shell_target_r) {
    if (d < 1) throw std::invalid_argument("make_filter: dimension must be >= 1");
    FilterBank bank;
    bank.kind = kind;
    bank.d = d;
    switch (kind) {
        case FilterKind::haar:
            bank.K = 1;
            bank.n0 = 0;
            bank.taps = {1.0 / kSqrt2, 1.0 / kSqrt2};
            break;
        case FilterKind::daubechies: {
            if (K < 2 || K > 10)
                throw std::invalid_argument(
                    "make_filter: daubechies order K must lie in {2, ..., 10} (got " +
                    std::to_string(K) + ")");
            std::lock_guard<std::mutex> lock(g_cache_mutex);
            auto it = g_daub_cache.find(K);
            if (it == g_daub_cache.end()) {
                auto roots = minphase_roots_for(K);
                auto taps = daubechies_taps(K, roots);  // may reciprocate roots
                it = g_daub_cache.emplace(K, std::make_pair(taps, roots)).first;
            }
            bank.K = K;
            bank.n0 = 0;
            bank.taps = it->second.first;
            bank.minphase_roots = it->second.second;
            break;
        }
        case FilterKind::point:
            bank.K = 0;
            bank.n0 = 0;
            bank.taps = {kSqrt2};
            break;
        case FilterKind::momentum_shell: {
            if (shell_target_r < 2 || !num::is_power_of_two(shell_target_r))
                throw std::invalid_argument(
                    "make_filter: momentum_shell requires the target half-extent "
                    "r_{N+1} (a power of two >= 2)");
            bank.K = 0;
            bank.n0 = -shell_target_r;
            bank.ctaps = shell_taps(shell_target_r);
            bank.shell_target_r = shell_target_r;
            break;
        }
    }
    if (kind != FilterKind::point) verify_filter_identities(bank);
    return bank;
}

void verify_filter_identities(const FilterBank& bank, double tol) {
    if (bank.kind == FilterKind::point)
        throw std::runtime_error(
            "verify_filter_identities: the point filter (single tap sqrt(2)) is "
            "not orthonormal; its scaling map rescales the symplectic form");
    const long count = bank.tap_count();
    auto at = [&](long i) { return bank.tap(bank.n0 + i); };

    // sum_n h_n = sqrt(2) per axis
    cplx sum(0.0, 0.0);
    for (long i = 0; i < count; ++i) sum += at(i);
    if (std::abs(sum - cplx(kSqrt2, 0.0)) > tol)
        throw std::runtime_error(
            "filter identity violated: tap sum differs from sqrt(2) by " +
            std::to_string(std::abs(sum - cplx(kSqrt2, 0.0))));

    // sum_n h_{n+2m} conj(h_n) = delta_{m,0}; compactly supported taps
    // correlate on the line, while the full-period momentum_shell taps
    // correlate circularly on Z_{2r'}
    const bool circular = (bank.kind == FilterKind::momentum_shell);
    const long shifts = circular ? count / 2 : (count + 1) / 2;
    for (long m = 0; m < shifts; ++m) {
        cplx acc(0.0, 0.0);
        if (circular) {
            for (long i = 0; i < count; ++i) {
                long j = (i + 2 * m) % count;
                acc += bank.ctaps[static_cast<std::size_t>(j)] *
                       std::conj(bank.ctaps[static_cast<std::size_t>(i)]);
            }
        } else {
            for (long i = 0; i + 2 * m < count; ++i)
                acc += at(i + 2 * m) * std::conj(at(i));
        }
        double want = (m == 0) ? 1.0 : 0.0;
        if (std::abs(acc - want) > tol)
            throw std::runtime_error(
                "filter identity violated: orthonormality residual " +
                std::to_string(std::abs(acc - want)) + " at shift m = " +
                std::to_string(m));
    }
}

// ===========================================================================
// high-pass companions
// ===========================================================================

HighPassFilter high_pass(const FilterBank& bank, bool shifted) {
    if (bank.d != 1)
        throw std::invalid_argument("high_pass: defined for d = 1 banks");
    if (bank.kind == FilterKind::point)
        throw std::invalid_argument(
            "high_pass: the point filter is not orthonormal; no high-pass "
            "companion exists");
    if (bank.kind == FilterKind::momentum_shell)
        throw std::invalid_argument(
            "high_pass: momentum_shell taps are level-dependent; no fixed "
            "high-pass companion exists");
    const long len = bank.tap_count();
    HighPassFilter g;
    g.taps.resize(static_cast<std::size_t>(len));
    if (!shifted) {
        // g_n = (-1)^n h_{1-n}, support n in [1 - (len-1), 1]
        g.n0 = 2 - len;
        for (long i = 0; i < len; ++i) {
            long n = g.n0 + i;
            double sign = (((n % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
            g.taps[static_cast<std::size_t>(i)] =
                sign * bank.taps[static_cast<std::size_t>(1 - n - bank.n0)];
        }
    } else {
        // g_n = (-1)^n h_{len-1-n}, sharing the support of h
        g.n0 = bank.n0;
        for (long i = 0; i < len; ++i) {
            long n = g.n0 + i;
            double sign = (((n % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
            g.taps[static_cast<std::size_t>(i)] =
                sign * bank.taps[static_cast<std::size_t>(len - 1 - i)];
        }
    }
    return g;
}

// ===========================================================================
// transfer symbol and cascade
// ===========================================================================

cplx transfer_m0_axis(const FilterBank& bank, double kappa) {
    cplx acc(0.0, 0.0);
    const long count = bank.tap_count();
    for (long i = 0; i < count; ++i) {
        double arg = -static_cast<double>(bank.n0 + i) * kappa;
        acc += bank.tap(bank.n0 + i) * cplx(std::cos(arg), std::sin(arg));
    }
    return acc / kSqrt2;
}

cplx transfer_m0(const FilterBank& bank, const std::vector<double>& kappa) {
    if (static_cast<int>(kappa.size()) != bank.d)
        throw std::invalid_argument("transfer_m0: argument dimension mismatch");
    cplx v(1.0, 0.0);
    for (double kj : kappa) v *= transfer_m0_axis(bank, kj);
    return v;
}

CascadeValue cascade_phi_hat_axis(const FilterBank& bank, double kappa, int depth) {
    if (bank.kind == FilterKind::momentum_shell)
        throw std::invalid_argument(
            "cascade_phi_hat: momentum_shell taps are level-dependent and have "
            "no scale-invariant cascade limit");
    CascadeValue out;
    cplx prod(1.0, 0.0);
    double scale = 0.5;
    int n = 1;
    for (; n <= depth; ++n, scale *= 0.5) {
        cplx factor = transfer_m0_axis(bank, kappa * scale);
        if (std::abs(factor - cplx(1.0, 0.0)) < 1e-16) break;
        prod *= factor;
    }
    out.value = prod;
    out.depth_used = std::min(n, depth);
    // remainder estimate: next factor's distance from the identity
    out.truncation =
        std::abs(prod) * std::abs(transfer_m0_axis(bank, kappa * scale) - cplx(1.0, 0.0));
    return out;
}

CascadeValue cascade_phi_hat(const FilterBank& bank,
                             const std::vector<double>& kappa, int depth) {
    if (static_cast<int>(kappa.size()) != bank.d)
        throw std::invalid_argument("cascade_phi_hat: argument dimension mismatch");
    CascadeValue out;
    out.value = cplx(1.0, 0.0);
    for (double kj : kappa) {
        CascadeValue axis = cascade_phi_hat_axis(bank, kj, depth);
        // |prod (v_j + e_j) - prod v_j| <= sum e_j prod_{i != j} (|v_i| + e_i)
        out.truncation = out.truncation * (std::abs(axis.value) + axis.truncation) +
                         std::abs(out.value) * axis.truncation;
        out.value *= axis.value;
        out.depth_used = std::max(out.depth_used, axis.depth_used);
    }
    return out;
}

// ===========================================================================
// decay certificate
// ===========================================================================

namespace {

std::mutex g_decay_mutex;
std::map<std::pair<int, int>, DecayCertificate> g_decay_cache;

DecayCertificate fit_decay(const FilterBank& bank) {
    // |phi_hat| oscillates through sinc-like zeros, so blind log-grid
    // sampling aliases the envelope. Take the peak over a dense linear grid
    // inside each dyadic octave and fit the log-log slope across octaves.
    const int first_octave = 3, last_octave = 12;  // kappa in [8, 8192]
    const int per_octave = 96;
    std::vector<double> peak_x, peak_y;
    double c_max = 1.0;  // |phi_hat(0)| = 1 anchors the envelope
    for (int oct = first_octave; oct <= last_octave; ++oct) {
        double lo = std::pow(2.0, oct);
        double best = 0.0, best_kappa = lo;
        for (int i = 0; i < per_octave; ++i) {
            double kappa =
                lo * (1.0 + static_cast<double>(i) / static_cast<double>(per_octave));
            double mag = std::abs(cascade_phi_hat_axis(bank, kappa, 60).value);
            if (mag > best) {
                best = mag;
                best_kappa = kappa;
            }
        }
        peak_x.push_back(std::log1p(best_kappa));
        peak_y.push_back(std::log(std::max(best, 1e-300)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(peak_x.size());
    for (std::size_t i = 0; i < peak_x.size(); ++i) {
        sx += peak_x[i];
        sy += peak_y[i];
        sxx += peak_x[i] * peak_x[i];
        sxy += peak_x[i] * peak_y[i];
    }
    double rho = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (!(rho > 0.0)) rho = 0.0;

    for (std::size_t i = 0; i < peak_x.size(); ++i) {
        double kappa = std::expm1(peak_x[i]);
        c_max = std::max(c_max, std::exp(peak_y[i]) * std::pow(1.0 + kappa, rho));
    }
    return DecayCertificate{2.0 * c_max, rho};
}

}  // namespace

DecayCertificate certify_decay(const FilterBank& bank) {
    if (bank.kind == FilterKind::momentum_shell)
        throw std::invalid_argument(
            "certify_decay: momentum_shell has no cascade scaling function");
    if (bank.kind == FilterKind::point) return DecayCertificate{1.0, 0.0};
    auto key = std::make_pair(static_cast<int>(bank.kind), bank.K);
    std::lock_guard<std::mutex> lock(g_decay_mutex);
    auto it = g_decay_cache.find(key);
    if (it == g_decay_cache.end()) it = g_decay_cache.emplace(key, fit_decay(bank)).first;
    return it->second;
}

// ===========================================================================
// transfer ratio
// ===========================================================================

cplx transfer_ratio(const FilterBank& bank, double l) {
    if (bank.kind == FilterKind::point || bank.kind == FilterKind::momentum_shell)
        throw std::invalid_argument(
            "transfer_ratio: defined for the haar/daubechies families");
    // m0 = ((1+z)/2)^K B(z)/B(1) with z = e^{-il}; the ratio is B(z)/B(1)
    cplx z(std::cos(l), -std::sin(l));
    cplx num(1.0, 0.0), den(1.0, 0.0);
    for (const cplx& root : bank.minphase_roots) {
        num *= (z - root);
        den *= (cplx(1.0, 0.0) - root);
    }
    return num / den;
}

double transfer_ratio_sup(const FilterBank& bank, long grid_points) {
    double sup = 0.0;
    for (long i = 0; i < grid_points; ++i) {
        double l = -M_PI + 2.0 * M_PI * static_cast<double>(i) /
                              static_cast<double>(grid_points - 1);
        sup = std::max(sup, std::abs(transfer_ratio(bank, l)));
    }
    return sup;
}

}  // namespace wrg
