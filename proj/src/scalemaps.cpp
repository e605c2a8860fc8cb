#include "wrg/scalemaps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "wrg/numerics.hpp"

namespace wrg {

namespace {

const double kPi = 3.14159265358979323846;

bool same_lattice(const LatticeGeometry& a, const LatticeGeometry& b) {
    return a.d == b.d && a.r == b.r && a.eps == b.eps;
}

long wrap_offset(long v, long r) {
    const long side = 2 * r;
    long w = (v + r) % side;
    if (w < 0) w += side;
    return w - r;
}

// blockspin and point supply their own kernels; wavelet must bring one
FilterBank effective_bank(Scheme scheme, int d, const FilterBank* bank) {
    switch (scheme) {
        case Scheme::wavelet:
            if (bank == nullptr)
                throw std::runtime_error(
                    "wavelet scheme requires a filter bank");
            if (bank->kind != FilterKind::haar &&
                bank->kind != FilterKind::daubechies)
                throw std::runtime_error(
                    "wavelet scheme takes a haar or daubechies bank");
            if (bank->d != d)
                throw std::runtime_error(
                    "filter bank dimension does not match the lattice");
            return *bank;
        case Scheme::blockspin:
            // the indicator kernel, normalized to preserve the symplectic
            // form, has exactly the haar coefficients
            return make_filter(FilterKind::haar, d);
        case Scheme::point:
            return make_filter(FilterKind::point, d);
        default:
            return FilterBank{};  // momentum schemes carry no taps
    }
}

bool has_real_kernel(Scheme s) {
    return s == Scheme::wavelet || s == Scheme::blockspin ||
           s == Scheme::point;
}

}  // namespace

// ===========================================================================
// construction
// ===========================================================================

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::wavelet: return "wavelet";
        case Scheme::blockspin: return "blockspin";
        case Scheme::point: return "point";
        case Scheme::momentum_cutoff: return "momentum_cutoff";
        case Scheme::momentum_transfer: return "momentum_transfer";
    }
    throw std::runtime_error("unknown scheme value");
}

Scheme parse_scheme(const std::string& name) {
    if (name == "wavelet") return Scheme::wavelet;
    if (name == "blockspin") return Scheme::blockspin;
    if (name == "point") return Scheme::point;
    if (name == "momentum_cutoff") return Scheme::momentum_cutoff;
    if (name == "momentum_transfer") return Scheme::momentum_transfer;
    throw std::runtime_error(
        "unknown scheme '" + name +
        "' (expected wavelet, blockspin, point, momentum_cutoff, or "
        "momentum_transfer)");
}

ScaleMap make_scale_map(Scheme scheme, const LatticeGeometry& from, int steps,
                        const FilterBank* bank) {
    if (steps < 1) throw std::runtime_error("scale map needs steps >= 1");
    ScaleMap map;
    map.scheme = scheme;
    map.bank = effective_bank(scheme, from.d, bank);
    map.from = from;
    map.to = refine(from, steps);
    map.steps = steps;
    return map;
}

// ===========================================================================
// real-space steps
// ===========================================================================

namespace {

struct TapEntry {
    double w;
    std::vector<long> n;
};

// flatten the tensorized taps prod_j h_{n_j} once per step
std::vector<TapEntry> tensor_taps(const FilterBank& bank, int d) {
    const long len = bank.tap_count();
    std::vector<TapEntry> entries;
    entries.reserve(static_cast<std::size_t>(std::pow(double(len), d)));
    std::vector<long> digit(static_cast<std::size_t>(d), 0);
    while (true) {
        TapEntry e;
        e.w = 1.0;
        e.n.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            e.w *= bank.taps[static_cast<std::size_t>(digit[j])];
            e.n[static_cast<std::size_t>(j)] = bank.n0 + digit[j];
        }
        entries.push_back(std::move(e));
        int ax = d - 1;
        while (ax >= 0 && ++digit[ax] == len) digit[ax--] = 0;
        if (ax < 0) break;
    }
    return entries;
}

// out(2a + n) += 2^{d/2} (prod h_{n_j}) in(a), indices wrapped on the fine
// torus; organized per output site so the loop parallelizes without races
PhaseField one_step_real(const FilterBank& bank, const PhaseField& in) {
    const LatticeGeometry& g = in.geo;
    const LatticeGeometry f = refine(g, 1);
    const int d = g.d;
    const double scale = std::pow(2.0, 0.5 * d);
    const std::vector<TapEntry> taps = tensor_taps(bank, d);

    PhaseField out = make_real_field(
        f, std::vector<double>(static_cast<std::size_t>(f.volume()), 0.0),
        std::vector<double>(static_cast<std::size_t>(f.volume()), 0.0));

    num::parallel_for(f.volume(), [&](long lo, long hi) {
        std::vector<long> x(static_cast<std::size_t>(d));
        std::vector<long> a(static_cast<std::size_t>(d));
        for (long idx = lo; idx < hi; ++idx) {
            x = f.offsets_of(idx);
            double acc_q = 0.0, acc_p = 0.0;
            for (const TapEntry& e : taps) {
                bool hit = true;
                for (int j = 0; j < d; ++j) {
                    const long t = x[static_cast<std::size_t>(j)] -
                                   e.n[static_cast<std::size_t>(j)];
                    if (((t % 2) + 2) % 2 != 0) {
                        hit = false;
                        break;
                    }
                    a[static_cast<std::size_t>(j)] = wrap_offset(t / 2, g.r);
                }
                if (!hit) continue;
                const long src = g.index_of(a);
                acc_q += e.w * in.q[static_cast<std::size_t>(src)];
                acc_p += e.w * in.p[static_cast<std::size_t>(src)];
            }
            out.q[static_cast<std::size_t>(idx)] = scale * acc_q;
            out.p[static_cast<std::size_t>(idx)] = scale * acc_p;
        }
    });
    return out;
}

}  // namespace

PhaseField step_real(const ScaleMap& map, const PhaseField& f) {
    if (!same_lattice(f.geo, map.from))
        throw std::runtime_error("field lattice does not match the scale map");
    if (f.rep != Rep::real)
        throw std::runtime_error("step_real expects a real-representation field");
    if (map.scheme == Scheme::momentum_cutoff ||
        map.scheme == Scheme::momentum_transfer) {
        // the momentum schemes are defined spectrally; conjugate by the
        // transforms instead of pretending a finite tap set exists. For the
        // sharp cutoff the zone [-r, r) keeps the boundary mode -r but not
        // its conjugate partner +r, so the image of a real field fails to be
        // Hermitian there; taking the real part below projects that single
        // mode pair back, and the real-space application is exact only away
        // from |b_j| = r.
        return idft(step_momentum(map, dft(f)));
    }
    PhaseField cur = f;
    for (int s = 0; s < map.steps; ++s) cur = one_step_real(map.bank, cur);
    return cur;
}

// ===========================================================================
// momentum-space steps
// ===========================================================================

PhaseField step_momentum(const ScaleMap& map, const PhaseField& f) {
    if (!same_lattice(f.geo, map.from))
        throw std::runtime_error("field lattice does not match the scale map");
    if (f.rep != Rep::momentum)
        throw std::runtime_error(
            "step_momentum expects a momentum-representation field");

    const LatticeGeometry& g = map.from;
    const LatticeGeometry& fine = map.to;
    const int d = g.d;
    const int M = map.steps;
    const long vol = fine.volume();

    PhaseField out = make_momentum_field(
        fine, std::vector<cplx>(static_cast<std::size_t>(vol), cplx{0.0, 0.0}),
        std::vector<cplx>(static_cast<std::size_t>(vol), cplx{0.0, 0.0}));

    if (map.scheme == Scheme::momentum_cutoff) {
        // restriction of the periodic extension to the coarse zone is the
        // original spectrum on its own labels, zero elsewhere
        const double amp = std::pow(2.0, 0.5 * d * M);
        num::parallel_for(vol, [&](long lo, long hi) {
            std::vector<long> b(static_cast<std::size_t>(d));
            for (long idx = lo; idx < hi; ++idx) {
                b = fine.offsets_of(idx);
                bool inside = true;
                for (int j = 0; j < d; ++j)
                    if (b[static_cast<std::size_t>(j)] < -g.r ||
                        b[static_cast<std::size_t>(j)] >= g.r) {
                        inside = false;
                        break;
                    }
                if (!inside) continue;
                const long src = g.index_of(b);
                out.qh[static_cast<std::size_t>(idx)] =
                    amp * f.qh[static_cast<std::size_t>(src)];
                out.ph[static_cast<std::size_t>(idx)] =
                    amp * f.ph[static_cast<std::size_t>(src)];
            }
        });
        return out;
    }

    if (map.scheme == Scheme::momentum_transfer) {
        // R(q,p)(k') = (2^{(d+1)/2} q, 2^{(d-1)/2} p)(2^{-1} k'), iterated:
        // only labels divisible by 2^M survive
        const long stride = 1L << M;
        const double amp_q = std::pow(2.0, 0.5 * M * (d + 1));
        const double amp_p = std::pow(2.0, 0.5 * M * (d - 1));
        num::parallel_for(vol, [&](long lo, long hi) {
            std::vector<long> b(static_cast<std::size_t>(d));
            std::vector<long> src(static_cast<std::size_t>(d));
            for (long idx = lo; idx < hi; ++idx) {
                b = fine.offsets_of(idx);
                bool divisible = true;
                for (int j = 0; j < d; ++j) {
                    if (b[static_cast<std::size_t>(j)] % stride != 0) {
                        divisible = false;
                        break;
                    }
                    src[static_cast<std::size_t>(j)] =
                        b[static_cast<std::size_t>(j)] / stride;
                }
                if (!divisible) continue;
                const long s = g.index_of(src);
                out.qh[static_cast<std::size_t>(idx)] =
                    amp_q * f.qh[static_cast<std::size_t>(s)];
                out.ph[static_cast<std::size_t>(idx)] =
                    amp_p * f.ph[static_cast<std::size_t>(s)];
            }
        });
        return out;
    }

    // tap schemes: composite multiplier on the periodic extension; the taps
    // are the same on every axis, so one table per axis label suffices
    const double amp = std::pow(2.0, 0.5 * d * M);
    const long fside = fine.side();
    std::vector<cplx> mult1d(static_cast<std::size_t>(fside));
    for (long bj = -fine.r; bj < fine.r; ++bj) {
        cplx prod{1.0, 0.0};
        for (int n = 1; n <= M; ++n) {
            const double eps_n = g.eps / std::pow(2.0, n);
            const double kappa = eps_n * kPi * double(bj) / g.L();
            prod *= transfer_m0_axis(map.bank, kappa);
        }
        mult1d[static_cast<std::size_t>(bj + fine.r)] = prod;
    }

    num::parallel_for(vol, [&](long lo, long hi) {
        std::vector<long> b(static_cast<std::size_t>(d));
        std::vector<long> src(static_cast<std::size_t>(d));
        for (long idx = lo; idx < hi; ++idx) {
            b = fine.offsets_of(idx);
            cplx w{amp, 0.0};
            for (int j = 0; j < d; ++j) {
                w *= mult1d[static_cast<std::size_t>(
                    b[static_cast<std::size_t>(j)] + fine.r)];
                src[static_cast<std::size_t>(j)] =
                    wrap_offset(b[static_cast<std::size_t>(j)], g.r);
            }
            const long s = g.index_of(src);
            out.qh[static_cast<std::size_t>(idx)] =
                w * f.qh[static_cast<std::size_t>(s)];
            out.ph[static_cast<std::size_t>(idx)] =
                w * f.ph[static_cast<std::size_t>(s)];
        }
    });
    return out;
}

PhaseField apply(const ScaleMap& map, const PhaseField& f) {
    return f.rep == Rep::real ? step_real(map, f) : step_momentum(map, f);
}

// ===========================================================================
// continuum embedding
// ===========================================================================

long ContinuumField::size() const {
    long n = 1;
    for (int j = 0; j < d; ++j) n *= side();
    return n;
}

long ContinuumField::index_of(const std::vector<long>& b) const {
    if (static_cast<int>(b.size()) != d)
        throw std::runtime_error("mode offset dimension mismatch");
    long idx = 0;
    for (int j = 0; j < d; ++j) {
        const long bj = b[static_cast<std::size_t>(j)];
        if (bj < -B || bj > B)
            throw std::runtime_error("mode offset outside the box");
        idx = idx * side() + (bj + B);
    }
    return idx;
}

std::vector<long> ContinuumField::offsets_of(long index) const {
    std::vector<long> b(static_cast<std::size_t>(d));
    for (int j = d - 1; j >= 0; --j) {
        b[static_cast<std::size_t>(j)] = index % side() - B;
        index /= side();
    }
    return b;
}

double ContinuumField::k_component(long b_j) const {
    return kPi * double(b_j) / L;
}

namespace {

// integral comparison: int_{s0}^inf x^a (1 + c x)^{-q} dx, bounded by
// pulling x <= (1 + c x)/c; infinite unless q > a + 1
double tail_integral(double a, double q, double c, double s0) {
    if (q <= a + 1.0) return std::numeric_limits<double>::infinity();
    const double p = q - a - 1.0;
    return std::pow(c, -a) * std::pow(1.0 + c * s0, -p) / (c * p);
}

}  // namespace

double embedding_tail_bound(const DecayCertificate& cert, int d, double eps,
                            double L, double m, long B, double sup_q,
                            double sup_p) {
    if (d > 2)
        throw std::runtime_error(
            "embedding tail bound implemented for d <= 2");
    const double c = eps * kPi / L;
    const double two_rho = 2.0 * cert.rho;

    num::NeumaierSum sum_q, sum_p;
    const long s_stop = B + (d == 1 ? 50000 : 5000);
    long s = B + 1;
    for (; s <= s_stop; ++s) {
        const double cnt = std::pow(2.0 * s + 1.0, d) -
                           std::pow(2.0 * s - 1.0, d);
        const double env = std::pow(1.0 + c * double(s), -two_rho);
        const double gamma_hi = m + std::sqrt(double(d)) * kPi * double(s) / L;
        const double tq = cnt * env / m;
        const double tp = cnt * env * gamma_hi;
        sum_q.add(tq);
        sum_p.add(tp);
        if (tq < 1e-22 * (sum_q.value() + 1e-300) &&
            tp < 1e-22 * (sum_p.value() + 1e-300))
            break;
    }
    const double s_end = double(s);
    double rem_q, rem_p;
    if (d == 1) {
        rem_q = 2.0 / m * tail_integral(0.0, two_rho, c, s_end);
        rem_p = 2.0 * (m * tail_integral(0.0, two_rho, c, s_end) +
                       kPi / L * tail_integral(1.0, two_rho, c, s_end));
    } else {
        // shell count (2s+1)^2 - (2s-1)^2 = 8s
        rem_q = 8.0 / m * tail_integral(1.0, two_rho, c, s_end);
        rem_p = 8.0 * (m * tail_integral(1.0, two_rho, c, s_end) +
                       std::sqrt(2.0) * kPi / L *
                           tail_integral(2.0, two_rho, c, s_end));
    }
    const double pref =
        std::pow(2.0 * L, -d) * std::pow(eps, d) * std::pow(cert.C, 2 * d);
    return pref * (sup_q * sup_q * (sum_q.value() + rem_q) +
                   sup_p * sup_p * (sum_p.value() + rem_p));
}

ContinuumField embed_continuum(Scheme scheme, const FilterBank& bank,
                               const PhaseField& field, double m,
                               long B_request) {
    if (scheme == Scheme::point || scheme == Scheme::momentum_cutoff ||
        scheme == Scheme::momentum_transfer)
        throw std::runtime_error(
            "continuum embedding is defined through the cascade scaling "
            "function; the " + scheme_name(scheme) + " scheme has none");
    if (!(m > 0.0)) throw std::runtime_error("embedding needs a mass m > 0");

    const FilterBank eb = effective_bank(scheme, field.geo.d, &bank);
    const LatticeGeometry& g = field.geo;
    PhaseField spec = field.rep == Rep::momentum ? field : dft(field);

    double sup_q = 0.0, sup_p = 0.0;
    for (std::size_t i = 0; i < spec.qh.size(); ++i) {
        sup_q = std::max(sup_q, std::abs(spec.qh[i]));
        sup_p = std::max(sup_p, std::abs(spec.ph[i]));
    }

    const DecayCertificate cert = certify_decay(eb);
    const long cap = g.d == 1 ? 65536 : 2048;
    long B = B_request > 0 ? B_request : g.r + 64;
    if (B < g.r)
        throw std::runtime_error(
            "embedding cutoff must cover the source modes (B >= r)");

    double tail = embedding_tail_bound(cert, g.d, g.eps, g.L(), m, B, sup_q, sup_p);
    while (tail >= 1e-8 && std::isfinite(tail) && B < cap) {
        B = std::min(2 * B, cap);
        tail = embedding_tail_bound(cert, g.d, g.eps, g.L(), m, B, sup_q, sup_p);
    }

    ContinuumField out;
    out.d = g.d;
    out.L = g.L();
    out.m = m;
    out.B = B;
    out.eps_source = g.eps;
    out.tail_norm2 = tail;
    out.tail_ok = tail < 1e-8;
    out.flagged = scheme == Scheme::blockspin;
    out.qh.assign(static_cast<std::size_t>(out.size()), cplx{0.0, 0.0});
    out.ph.assign(static_cast<std::size_t>(out.size()), cplx{0.0, 0.0});

    // one cascade evaluation per axis label, shared across axes
    std::vector<cplx> phi1d(static_cast<std::size_t>(out.side()));
    num::parallel_for(out.side(), [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            const double kappa = g.eps * kPi * double(t - B) / g.L();
            phi1d[static_cast<std::size_t>(t)] =
                cascade_phi_hat_axis(eb, kappa).value;
        }
    });

    const double amp = std::pow(g.eps, 0.5 * g.d);
    num::parallel_for(out.size(), [&](long lo, long hi) {
        std::vector<long> src(static_cast<std::size_t>(g.d));
        for (long idx = lo; idx < hi; ++idx) {
            const std::vector<long> b = out.offsets_of(idx);
            cplx w{amp, 0.0};
            for (int j = 0; j < g.d; ++j) {
                const long bj = b[static_cast<std::size_t>(j)];
                w *= phi1d[static_cast<std::size_t>(bj + B)];
                src[static_cast<std::size_t>(j)] = wrap_offset(bj, g.r);
            }
            const long sidx = g.index_of(src);
            out.qh[static_cast<std::size_t>(idx)] =
                w * spec.qh[static_cast<std::size_t>(sidx)];
            out.ph[static_cast<std::size_t>(idx)] =
                w * spec.ph[static_cast<std::size_t>(sidx)];
        }
    });
    return out;
}

// ===========================================================================
// circulant decomposition
// ===========================================================================

MeraDecomposition mera_decompose(Scheme scheme, const FilterBank& bank,
                                 const LatticeGeometry& fine) {
    if (scheme != Scheme::wavelet && scheme != Scheme::blockspin)
        throw std::runtime_error(
            "the " + scheme_name(scheme) +
            " scheme has no finite orthogonal kernel to decompose");
    const FilterBank eb = effective_bank(scheme, fine.d, &bank);
    const long len = eb.tap_count();
    const long fside = fine.side();
    if (len > fside)
        throw std::runtime_error(
            "filter taps wrap around the torus; the circulant factor is not "
            "orthogonal at this lattice size");

    // Convolution by the low-pass taps alone has symbol sqrt(2) m0(theta),
    // which vanishes at the half-band frequency, so it cannot be inverted.
    // The even-site columns -- the only ones the zero-padding inclusion ever
    // meets -- carry the low-pass taps, and the odd-site columns carry the
    // conjugate high-pass companions; together the columns form the
    // orthogonal synthesis operator of the two-channel filter bank.
    const HighPassFilter hp = high_pass(
        eb.d == 1 ? eb : make_filter(eb.kind, 1, eb.kind == FilterKind::haar
                                                    ? 0
                                                    : eb.K));
    std::vector<double> h_res(static_cast<std::size_t>(fside), 0.0);
    std::vector<double> g_res(static_cast<std::size_t>(fside), 0.0);
    for (long i = 0; i < len; ++i) {
        long o = (eb.n0 + i) % fside;
        if (o < 0) o += fside;
        h_res[static_cast<std::size_t>(o)] += eb.taps[static_cast<std::size_t>(i)];
        long og = (hp.n0 + i) % fside;
        if (og < 0) og += fside;
        g_res[static_cast<std::size_t>(og)] += hp.taps[static_cast<std::size_t>(i)];
    }
    auto axis_entry = [&](long x, long y) {
        if ((((y % 2) + 2) % 2) == 0) {
            long o = (x - y) % fside;
            if (o < 0) o += fside;
            return h_res[static_cast<std::size_t>(o)];
        }
        long o = (x - (y - 1)) % fside;
        if (o < 0) o += fside;
        return g_res[static_cast<std::size_t>(o)];
    };

    const long vol = fine.volume();
    MeraDecomposition dec;
    dec.geo = fine;
    dec.matrix.assign(static_cast<std::size_t>(vol) *
                          static_cast<std::size_t>(vol),
                      0.0);
    num::parallel_for(vol, [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            const std::vector<long> x = fine.offsets_of(i);
            for (long j = 0; j < vol; ++j) {
                const std::vector<long> y = fine.offsets_of(j);
                double w = 1.0;
                for (int ax = 0; ax < fine.d; ++ax)
                    w *= axis_entry(x[static_cast<std::size_t>(ax)],
                                    y[static_cast<std::size_t>(ax)]);
                dec.matrix[static_cast<std::size_t>(i) *
                               static_cast<std::size_t>(vol) +
                           static_cast<std::size_t>(j)] = w;
            }
        }
    });
    return dec;
}

PhaseField apply_mera(const MeraDecomposition& dec, const PhaseField& f) {
    if (!same_lattice(f.geo, dec.geo))
        throw std::runtime_error("field lattice does not match the kernel");
    if (f.rep != Rep::real)
        throw std::runtime_error("the circulant kernel acts on real fields");
    const long vol = dec.geo.volume();
    PhaseField out = make_real_field(
        dec.geo, std::vector<double>(static_cast<std::size_t>(vol), 0.0),
        std::vector<double>(static_cast<std::size_t>(vol), 0.0));
    num::parallel_for(vol, [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            num::NeumaierSum aq, ap;
            const double* row =
                dec.matrix.data() + static_cast<std::size_t>(i) *
                                        static_cast<std::size_t>(vol);
            for (long j = 0; j < vol; ++j) {
                aq.add(row[j] * f.q[static_cast<std::size_t>(j)]);
                ap.add(row[j] * f.p[static_cast<std::size_t>(j)]);
            }
            out.q[static_cast<std::size_t>(i)] = aq.value();
            out.p[static_cast<std::size_t>(i)] = ap.value();
        }
    });
    return out;
}

// ===========================================================================
// support growth and covariance
// ===========================================================================

SupportGrowth support_growth(const ScaleMap& map,
                             const std::vector<std::pair<long, long>>& coarse) {
    if (!has_real_kernel(map.scheme))
        throw std::runtime_error(
            "support tracking applies to finite real-space kernels; the " +
            scheme_name(map.scheme) + " scheme has none");
    if (static_cast<int>(coarse.size()) != map.from.d)
        throw std::runtime_error("need one site range per axis");

    const long n_min = map.bank.n0;
    const long n_max = map.bank.n0 + map.bank.tap_count() - 1;
    const long M = map.steps;
    const long pow2 = 1L << M;
    const double eps = map.from.eps;
    const double eps_fine = map.to.eps;
    const double shrink = 1.0 - std::pow(2.0, -double(M));

    SupportGrowth out;
    out.bound = double(std::max(std::labs(n_min), std::labs(n_max))) * eps *
                shrink;
    for (const auto& [a, b] : coarse) {
        if (a > b) throw std::runtime_error("empty site range");
        const long af = pow2 * a + n_min * (pow2 - 1);
        const long bf = pow2 * b + n_max * (pow2 - 1);
        out.fine.emplace_back(af, bf);
        const double left = std::max(0.0, eps * double(a) - eps_fine * double(af));
        const double right = std::max(0.0, eps_fine * double(bf) - eps * double(b));
        out.physical_growth = std::max(out.physical_growth,
                                       std::max(left, right));
    }
    out.within_bound =
        out.physical_growth <= out.bound * (1.0 + 1e-12) + 1e-15;
    return out;
}

double translation_covariance_check(const ScaleMap& map, const PhaseField& f,
                                    const std::vector<long>& shift) {
    if (static_cast<int>(shift.size()) != map.from.d)
        throw std::runtime_error("need one shift component per axis");
    PhaseField base = f.rep == Rep::real ? f : idft(f);

    std::vector<long> fine_shift(shift.size());
    for (std::size_t j = 0; j < shift.size(); ++j)
        fine_shift[j] = shift[j] * (1L << map.steps);

    const PhaseField lhs = step_real(map, translate(base, shift));
    const PhaseField rhs = translate(step_real(map, base), fine_shift);
    return sup_norm(linear_combination(1.0, lhs, -1.0, rhs));
}

}  // namespace wrg
