// Shared numerical utilities: compensated summation, deterministic
// parallel loops, Gauss-Legendre quadrature, portable normal deviates.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace wrg::num {

// ===========================================================================
// compensated (Neumaier) summation
// ===========================================================================

struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

// ===========================================================================
// integer helpers
// ===========================================================================

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

inline long ipow(long base, int e) {
    long v = 1;
    for (int i = 0; i < e; ++i) v *= base;
    return v;
}

// ===========================================================================
// deterministic parallel loop
// ===========================================================================
//
// Splits [0, n) into contiguous chunks handed to worker threads. Every
// output element must be computed independently inside fn, so the result
// is bitwise identical for any thread count. The budget is capped by the
// WRG_THREADS environment variable (default: hardware concurrency).

int thread_budget();
void parallel_for(long n, const std::function<void(long, long)>& fn);

// ===========================================================================
// Gauss-Legendre quadrature
// ===========================================================================
//
// 15-point rule on [-1, 1]; nodes computed once by Newton iteration on the
// Legendre recurrence. Adaptive driver bisects panels until the two-level
// Richardson estimate |I_fine - I_coarse| meets the local tolerance.

const std::vector<double>& gl15_nodes();
const std::vector<double>& gl15_weights();

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated two-level error estimates
    long panels = 0;
};

double gl15_panel(const std::function<double(double)>& f, double a, double b);
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b, double tol,
                              int max_depth = 40);
// convenience: adaptive over an ordered list of panel break points
QuadResult integrate_panels(const std::function<double(double)>& f,
                            const std::vector<double>& breaks, double tol);

// ===========================================================================
// portable normal deviates
// ===========================================================================
//
// Box-Muller on top of mt19937_64 so random fields are reproducible across
// standard libraries (std::normal_distribution is not pinned by the
// standard). Not performance critical.

class NormalDeviates {
public:
    explicit NormalDeviates(std::uint64_t seed) : eng_(seed) {}
    double draw();

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wrg::num
