#include "wrg/numerics.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wrg::num {

// ===========================================================================
// threading
// ===========================================================================

int thread_budget() {
    static const int budget = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("WRG_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1 && v <= 1024) hw = static_cast<int>(v);
        }
        return hw;
    }();
    return budget;
}

void parallel_for(long n, const std::function<void(long, long)>& fn) {
    if (n <= 0) return;
    int threads = thread_budget();
    // small loops, or a single-thread budget: run inline
    if (threads <= 1 || n < 4096) {
        fn(0, n);
        return;
    }
    long chunks = std::min<long>(threads, n);
    long step = (n + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunks));
    for (long c = 0; c < chunks; ++c) {
        long lo = c * step;
        long hi = std::min(n, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// ===========================================================================
// Gauss-Legendre nodes
// ===========================================================================

namespace {

void build_gl15(std::vector<double>& xs, std::vector<double>& ws) {
    const int n = 15;
    xs.assign(n, 0.0);
    ws.assign(n, 0.0);
    for (int i = 1; i <= (n + 1) / 2; ++i) {
        // Chebyshev initial guess, Newton on the three-term recurrence
        long double x = std::cos(M_PIl * (i - 0.25L) / (n + 0.5L));
        long double pp = 0.0L;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L, p1 = x;
            for (int j = 2; j <= n; ++j) {
                long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0L);
            long double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        long double w = 2.0L / ((1.0L - x * x) * pp * pp);
        xs[i - 1] = static_cast<double>(-x);
        ws[i - 1] = static_cast<double>(w);
        xs[n - i] = static_cast<double>(x);
        ws[n - i] = static_cast<double>(w);
    }
}

std::vector<double> g_nodes, g_weights;
std::once_flag g_gl_once;

void ensure_gl() {
    std::call_once(g_gl_once, [] { build_gl15(g_nodes, g_weights); });
}

}  // namespace

const std::vector<double>& gl15_nodes() {
    ensure_gl();
    return g_nodes;
}

const std::vector<double>& gl15_weights() {
    ensure_gl();
    return g_weights;
}

double gl15_panel(const std::function<double(double)>& f, double a, double b) {
    const auto& xs = gl15_nodes();
    const auto& ws = gl15_weights();
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    NeumaierSum acc;
    for (std::size_t i = 0; i < xs.size(); ++i)
        acc.add(ws[i] * f(mid + half * xs[i]));
    return half * acc.value();
}

namespace {

void integrate_rec(const std::function<double(double)>& f, double a, double b,
                   double tol, int depth, int max_depth, double coarse,
                   QuadResult& out) {
    double mid = 0.5 * (a + b);
    double left = gl15_panel(f, a, mid);
    double right = gl15_panel(f, mid, b);
    double fine = left + right;
    double err = std::abs(fine - coarse);
    if (err <= tol || depth >= max_depth) {
        out.value += fine;
        out.error += err;
        out.panels += 2;
        return;
    }
    integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth, left, out);
    integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth, right, out);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b, double tol, int max_depth) {
    if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: a > b");
    QuadResult out;
    if (a == b) return out;
    integrate_rec(f, a, b, tol, 0, max_depth, gl15_panel(f, a, b), out);
    return out;
}

QuadResult integrate_panels(const std::function<double(double)>& f,
                            const std::vector<double>& breaks, double tol) {
    if (breaks.size() < 2)
        throw std::invalid_argument("integrate_panels: need >= 2 break points");
    QuadResult out;
    double per_panel = tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        QuadResult piece =
            integrate_adaptive(f, breaks[i], breaks[i + 1], per_panel);
        out.value += piece.value;
        out.error += piece.error;
        out.panels += piece.panels;
    }
    return out;
}

// ===========================================================================
// normal deviates
// ===========================================================================

double NormalDeviates::draw() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // map to (0, 1]; avoids log(0)
    auto unit = [this] {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    };
    double u1 = unit(), u2 = unit();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
}

}  // namespace wrg::num
