#include "wrg/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wrg/numerics.hpp"

namespace wrg {

// ===========================================================================
// geometry
// ===========================================================================

long LatticeGeometry::volume() const { return num::ipow(side(), d); }

long LatticeGeometry::index_of(const std::vector<long>& a) const {
    if (static_cast<int>(a.size()) != d)
        throw std::invalid_argument("index_of: offset vector has wrong dimension");
    long idx = 0;
    for (int j = 0; j < d; ++j) {
        if (a[j] < -r || a[j] >= r)
            throw std::out_of_range("index_of: offset outside [-r, r)");
        idx = idx * side() + (a[j] + r);
    }
    return idx;
}

std::vector<long> LatticeGeometry::offsets_of(long index) const {
    if (index < 0 || index >= volume())
        throw std::out_of_range("offsets_of: index outside lattice");
    std::vector<long> a(static_cast<std::size_t>(d));
    for (int j = d - 1; j >= 0; --j) {
        a[static_cast<std::size_t>(j)] = index % side() - r;
        index /= side();
    }
    return a;
}

double LatticeGeometry::k_component(long b_j) const {
    return M_PI * static_cast<double>(b_j) / L();
}

std::vector<double> LatticeGeometry::k_vector(const std::vector<long>& b) const {
    std::vector<double> k(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) k[j] = k_component(b[j]);
    return k;
}

bool LatticeGeometry::same_torus(const LatticeGeometry& other) const {
    return d == other.d && L() == other.L();
}

LatticeGeometry build_geometry(int d, double eps, long r) {
    if (d < 1)
        throw std::invalid_argument(
            "build_geometry: dimension must satisfy d >= 1 (degenerate d = " +
            std::to_string(d) + " rejected)");
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("build_geometry: spacing eps must be positive");
    if (r < 2)
        throw std::invalid_argument(
            "build_geometry: half-extent r must be >= 2 (degenerate r = " +
            std::to_string(r) + " rejected)");
    if (!num::is_power_of_two(r))
        throw std::invalid_argument(
            "build_geometry: half-extent r must be a power of two (got " +
            std::to_string(r) + ")");
    LatticeGeometry g{d, eps, r};
    // keep (2r)^d addressable with a comfortable margin
    if (g.volume() > (1L << 30) || g.volume() <= 0)
        throw std::invalid_argument("build_geometry: lattice volume too large");
    return g;
}

LatticeGeometry refine(const LatticeGeometry& g, int steps) {
    if (steps < 0) throw std::invalid_argument("refine: steps must be >= 0");
    LatticeGeometry out = g;
    for (int i = 0; i < steps; ++i) {
        out.eps *= 0.5;
        out.r *= 2;
    }
    return build_geometry(out.d, out.eps, out.r);
}

int refinement_steps(const LatticeGeometry& coarse, const LatticeGeometry& fine) {
    if (coarse.d != fine.d)
        throw std::invalid_argument("refinement_steps: dimension mismatch");
    if (fine.r < coarse.r || fine.r % coarse.r != 0)
        throw std::invalid_argument("refinement_steps: lattices are not nested");
    long ratio = fine.r / coarse.r;
    if (!num::is_power_of_two(ratio))
        throw std::invalid_argument("refinement_steps: lattices are not nested");
    int steps = 0;
    while ((1L << steps) < ratio) ++steps;
    // the torus must be the same: eps_fine = eps_coarse / 2^steps exactly
    if (coarse.eps != std::ldexp(fine.eps, steps))
        throw std::invalid_argument("refinement_steps: tori differ");
    return steps;
}

// ===========================================================================
// field construction
// ===========================================================================

PhaseField make_real_field(const LatticeGeometry& g, std::vector<double> q,
                           std::vector<double> p) {
    if (static_cast<long>(q.size()) != g.volume() ||
        static_cast<long>(p.size()) != g.volume())
        throw std::invalid_argument("make_real_field: component size mismatch");
    PhaseField f;
    f.geo = g;
    f.rep = Rep::real;
    f.q = std::move(q);
    f.p = std::move(p);
    return f;
}

PhaseField make_momentum_field(const LatticeGeometry& g, std::vector<cplx> qh,
                               std::vector<cplx> ph) {
    if (static_cast<long>(qh.size()) != g.volume() ||
        static_cast<long>(ph.size()) != g.volume())
        throw std::invalid_argument("make_momentum_field: component size mismatch");
    PhaseField f;
    f.geo = g;
    f.rep = Rep::momentum;
    f.qh = std::move(qh);
    f.ph = std::move(ph);
    return f;
}

PhaseField random_field(const LatticeGeometry& g, std::uint64_t seed) {
    num::NormalDeviates rng(seed);
    std::vector<double> q(static_cast<std::size_t>(g.volume()));
    std::vector<double> p(q.size());
    for (auto& v : q) v = rng.draw();
    for (auto& v : p) v = rng.draw();
    return make_real_field(g, std::move(q), std::move(p));
}

// ===========================================================================
// DFT
// ===========================================================================
//
// Separable per-axis transforms. The phase e^{-i pi a b / r} depends only
// on (a*b) mod 2r, so one table of length 2r covers every axis pass. Direct
// O(side^2) lines are fine at the lattice sizes this engine targets; each
// output element accumulates over its line in a fixed order, so results do
// not depend on the thread budget.

namespace {

std::vector<cplx> phase_table(long r, int sign) {
    std::vector<cplx> tab(static_cast<std::size_t>(2 * r));
    for (long t = 0; t < 2 * r; ++t) {
        double arg = sign * M_PI * static_cast<double>(t) / static_cast<double>(r);
        tab[static_cast<std::size_t>(t)] = cplx(std::cos(arg), std::sin(arg));
    }
    return tab;
}

// one axis pass over every line of the array; sign = -1 forward, +1 inverse
void axis_transform(std::vector<cplx>& data, const LatticeGeometry& g, int axis,
                    int sign) {
    const long n = g.side();
    const long r = g.r;
    const long stride = num::ipow(n, g.d - 1 - axis);
    const long block = stride * n;
    const long lines = g.volume() / n;
    const auto tab = phase_table(r, sign);

    num::parallel_for(lines, [&](long lo, long hi) {
        std::vector<cplx> line(static_cast<std::size_t>(n));
        for (long li = lo; li < hi; ++li) {
            const long base = (li / stride) * block + (li % stride);
            for (long t = 0; t < n; ++t)
                line[static_cast<std::size_t>(t)] = data[base + t * stride];
            for (long bs = 0; bs < n; ++bs) {
                const long b = bs - r;
                cplx acc(0.0, 0.0);
                for (long as = 0; as < n; ++as) {
                    const long a = as - r;
                    long t = (a * b) % (2 * r);
                    if (t < 0) t += 2 * r;
                    acc += line[static_cast<std::size_t>(as)] *
                           tab[static_cast<std::size_t>(t)];
                }
                data[base + bs * stride] = acc;
            }
        }
    });
}

std::vector<cplx> transform_component(const std::vector<double>& in,
                                      const LatticeGeometry& g, double scale) {
    std::vector<cplx> data(in.begin(), in.end());
    for (int axis = 0; axis < g.d; ++axis) axis_transform(data, g, axis, -1);
    for (auto& v : data) v *= scale;
    return data;
}

}  // namespace

PhaseField dft(const PhaseField& f) {
    if (f.rep != Rep::real)
        throw std::invalid_argument("dft: field is already in momentum representation");
    const double scale = std::pow(f.geo.eps, 0.5 * f.geo.d);
    PhaseField out;
    out.geo = f.geo;
    out.rep = Rep::momentum;
    out.qh = transform_component(f.q, f.geo, scale);
    out.ph = transform_component(f.p, f.geo, scale);
    return out;
}

PhaseField idft(const PhaseField& f) {
    if (f.rep != Rep::momentum)
        throw std::invalid_argument("idft: field is already in real representation");
    const LatticeGeometry& g = f.geo;
    const double scale =
        1.0 / (std::pow(g.eps, 0.5 * g.d) * static_cast<double>(g.volume()));
    auto back = [&](const std::vector<cplx>& in) {
        std::vector<cplx> data = in;
        for (int axis = 0; axis < g.d; ++axis) axis_transform(data, g, axis, +1);
        std::vector<double> re(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) re[i] = data[i].real() * scale;
        return re;
    };
    PhaseField out;
    out.geo = g;
    out.rep = Rep::real;
    out.q = back(f.qh);
    out.p = back(f.ph);
    return out;
}

// ===========================================================================
// periodic extension / translation
// ===========================================================================

PhaseField periodic_extension(const PhaseField& f, const LatticeGeometry& fine) {
    if (f.rep != Rep::momentum)
        throw std::invalid_argument(
            "periodic_extension: input is in the real representation; apply dft "
            "first and extend in momentum space");
    refinement_steps(f.geo, fine);  // validates nesting
    const long rc = f.geo.r, nc = f.geo.side();
    const long nf = fine.side();
    std::vector<cplx> qh(static_cast<std::size_t>(fine.volume()));
    std::vector<cplx> ph(qh.size());
    const long vol = fine.volume();
    num::parallel_for(vol, [&](long lo, long hi) {
        std::vector<long> b(static_cast<std::size_t>(fine.d));
        for (long idx = lo; idx < hi; ++idx) {
            long rem = idx;
            long src = 0;
            for (int j = fine.d - 1; j >= 0; --j) {
                b[static_cast<std::size_t>(j)] = rem % nf - fine.r;
                rem /= nf;
            }
            for (int j = 0; j < fine.d; ++j) {
                long w = ((b[static_cast<std::size_t>(j)] % nc) + nc + rc) % nc - rc;
                src = src * nc + (w + rc);
            }
            qh[static_cast<std::size_t>(idx)] = f.qh[static_cast<std::size_t>(src)];
            ph[static_cast<std::size_t>(idx)] = f.ph[static_cast<std::size_t>(src)];
        }
    });
    return make_momentum_field(fine, std::move(qh), std::move(ph));
}

PhaseField translate(const PhaseField& f, const std::vector<long>& shift) {
    if (f.rep != Rep::real)
        throw std::invalid_argument(
            "translate: lattice translations act on the real representation");
    if (static_cast<int>(shift.size()) != f.geo.d)
        throw std::invalid_argument("translate: shift vector has wrong dimension");
    const LatticeGeometry& g = f.geo;
    const long n = g.side();
    std::vector<double> q(f.q.size()), p(f.p.size());
    std::vector<long> a(static_cast<std::size_t>(g.d));
    for (long idx = 0; idx < g.volume(); ++idx) {
        long rem = idx, src = 0;
        for (int j = g.d - 1; j >= 0; --j) {
            a[static_cast<std::size_t>(j)] = rem % n;  // stored offset a_j + r
            rem /= n;
        }
        for (int j = 0; j < g.d; ++j) {
            long s = ((a[static_cast<std::size_t>(j)] -
                       shift[static_cast<std::size_t>(j)]) % n + n) % n;
            src = src * n + s;
        }
        q[static_cast<std::size_t>(idx)] = f.q[static_cast<std::size_t>(src)];
        p[static_cast<std::size_t>(idx)] = f.p[static_cast<std::size_t>(src)];
    }
    return make_real_field(g, std::move(q), std::move(p));
}

// ===========================================================================
// symplectic form and norms
// ===========================================================================

namespace {

double symplectic_real(const PhaseField& xi, const PhaseField& eta) {
    num::NeumaierSum acc;
    for (std::size_t i = 0; i < xi.q.size(); ++i)
        acc.add(xi.q[i] * eta.p[i] - xi.p[i] * eta.q[i]);
    return std::pow(xi.geo.eps, xi.geo.d) * acc.value();
}

// Parseval transcription: eps^d sum_x (q p' - p q')
//   = (2r)^{-d} sum_k Re[ qh conj(ph') - ph conj(qh') ]
double symplectic_momentum(const PhaseField& xi, const PhaseField& eta) {
    num::NeumaierSum acc;
    for (std::size_t i = 0; i < xi.qh.size(); ++i) {
        acc.add((xi.qh[i] * std::conj(eta.ph[i])).real());
        acc.add(-(xi.ph[i] * std::conj(eta.qh[i])).real());
    }
    return acc.value() / static_cast<double>(xi.geo.volume());
}

}  // namespace

double symplectic_form(const PhaseField& xi, const PhaseField& eta) {
    if (xi.geo.d != eta.geo.d || xi.geo.r != eta.geo.r || xi.geo.eps != eta.geo.eps)
        throw std::invalid_argument("symplectic_form: fields live on different lattices");
    if (xi.rep == Rep::real && eta.rep == Rep::real)
        return symplectic_real(xi, eta);
    if (xi.rep == Rep::momentum && eta.rep == Rep::momentum)
        return symplectic_momentum(xi, eta);
    const PhaseField& a = (xi.rep == Rep::real) ? dft(xi) : xi;
    const PhaseField& b = (eta.rep == Rep::real) ? dft(eta) : eta;
    return symplectic_momentum(a, b);
}

PhaseField linear_combination(double a, const PhaseField& x, double b,
                              const PhaseField& y) {
    if (x.rep != y.rep)
        throw std::invalid_argument("linear_combination: representation mismatch");
    if (x.geo.d != y.geo.d || x.geo.r != y.geo.r || x.geo.eps != y.geo.eps)
        throw std::invalid_argument("linear_combination: lattice mismatch");
    PhaseField out = x;
    if (x.rep == Rep::real) {
        for (std::size_t i = 0; i < out.q.size(); ++i) {
            out.q[i] = a * x.q[i] + b * y.q[i];
            out.p[i] = a * x.p[i] + b * y.p[i];
        }
    } else {
        for (std::size_t i = 0; i < out.qh.size(); ++i) {
            out.qh[i] = a * x.qh[i] + b * y.qh[i];
            out.ph[i] = a * x.ph[i] + b * y.ph[i];
        }
    }
    return out;
}

double sup_norm(const PhaseField& f) {
    double m = 0.0;
    if (f.rep == Rep::real) {
        for (double v : f.q) m = std::max(m, std::abs(v));
        for (double v : f.p) m = std::max(m, std::abs(v));
    } else {
        for (const cplx& v : f.qh) m = std::max(m, std::abs(v));
        for (const cplx& v : f.ph) m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace wrg
