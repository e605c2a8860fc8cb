#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracle_values.hpp"
#include "wrg/filters.hpp"

using namespace wrg;

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

TEST_CASE("daubechies taps match the independent factorization") {
    struct Case {
        int K;
        const double* ref;
        std::size_t len;
    };
    const Case cases[] = {
        {2, oracle::daub2_taps, 4},
        {3, oracle::daub3_taps, 6},
        {6, oracle::daub6_taps, 12},
    };
    for (const auto& c : cases) {
        auto bank = make_filter(FilterKind::daubechies, 1, c.K);
        REQUIRE(bank.taps.size() == c.len);
        for (std::size_t i = 0; i < c.len; ++i)
            CHECK(bank.taps[i] == doctest::Approx(c.ref[i]).epsilon(1e-13));
    }
}

TEST_CASE("daubechies K=2 closed form") {
    auto bank = make_filter(FilterKind::daubechies, 1, 2);
    const double s3 = std::sqrt(3.0);
    const double want[] = {(1 + s3) / (4 * kSqrt2), (3 + s3) / (4 * kSqrt2),
                           (3 - s3) / (4 * kSqrt2), (1 - s3) / (4 * kSqrt2)};
    for (int i = 0; i < 4; ++i)
        CHECK(bank.taps[static_cast<std::size_t>(i)] ==
              doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("filter identities hold for every admissible order") {
    CHECK_NOTHROW(verify_filter_identities(make_filter(FilterKind::haar, 1), 1e-12));
    for (int K = 2; K <= 10; ++K) {
        auto bank = make_filter(FilterKind::daubechies, 1, K);
        CHECK_NOTHROW(verify_filter_identities(bank, 1e-12));
        CHECK(bank.taps.size() == static_cast<std::size_t>(2 * K));
    }
    CHECK_THROWS_AS(make_filter(FilterKind::daubechies, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_filter(FilterKind::daubechies, 1, 11), std::invalid_argument);
    // the point tap pair (sqrt(2)) is deliberately not orthonormal
    auto point = make_filter(FilterKind::point, 1);
    CHECK_THROWS_WITH_AS(verify_filter_identities(point),
                         doctest::Contains("not orthonormal"), std::runtime_error);
}

TEST_CASE("momentum shell taps: structure and identities") {
    const long rp = 16;
    auto bank = make_filter(FilterKind::momentum_shell, 1, 0, rp);
    CHECK(bank.tap(0) == cplx(1.0 / kSqrt2, 0.0));
    for (long n = -rp; n < rp; ++n)
        if (n != 0 && n % 2 == 0) CHECK(std::abs(bank.tap(n)) == 0.0);
    // odd taps follow the Dirichlet magnitude profile
    for (long n : {1L, 3L, 5L}) {
        double want = 1.0 / (kSqrt2 * static_cast<double>(rp) *
                             std::abs(std::sin(M_PI * static_cast<double>(n) /
                                               (2.0 * static_cast<double>(rp)))));
        CHECK(std::abs(bank.tap(n)) == doctest::Approx(want).epsilon(1e-13));
        CHECK(std::abs(bank.tap(-n)) == doctest::Approx(want).epsilon(1e-13));
    }
    CHECK_NOTHROW(verify_filter_identities(bank, 1e-12));
    CHECK_THROWS_AS(make_filter(FilterKind::momentum_shell, 1, 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_filter(FilterKind::momentum_shell, 1, 0, 12),
                    std::invalid_argument);
}

TEST_CASE("momentum shell symbol is a sharp half-zone indicator") {
    const long rp = 16;
    auto bank = make_filter(FilterKind::momentum_shell, 1, 0, rp);
    // at the fine dual points kappa = pi b'/r', the symbol is 1 on the
    // half-open window (-r'/2, r'/2] and 0 outside it
    for (long b = -rp; b < rp; ++b) {
        cplx v = transfer_m0_axis(bank, M_PI * static_cast<double>(b) /
                                            static_cast<double>(rp));
        double want = (b > -rp / 2 && b <= rp / 2) ? 1.0 : 0.0;
        CHECK(std::abs(v - cplx(want, 0.0)) < 1e-12);
    }
}

TEST_CASE("high-pass companions are orthonormal and orthogonal to the bank") {
    for (bool shifted : {false, true}) {
        for (int K : {2, 6}) {
            auto bank = make_filter(FilterKind::daubechies, 1, K);
            auto g = high_pass(bank, shifted);
            REQUIRE(g.taps.size() == bank.taps.size());
            auto g_at = [&](long n) {
                long i = n - g.n0;
                return (i >= 0 && i < static_cast<long>(g.taps.size()))
                           ? g.taps[static_cast<std::size_t>(i)]
                           : 0.0;
            };
            auto h_at = [&](long n) {
                long i = n - bank.n0;
                return (i >= 0 && i < static_cast<long>(bank.taps.size()))
                           ? bank.taps[static_cast<std::size_t>(i)]
                           : 0.0;
            };
            double sum = 0.0;
            for (long n = g.n0; n < g.n0 + static_cast<long>(g.taps.size()); ++n)
                sum += g_at(n);
            CHECK(std::abs(sum) < 1e-12);  // mean annihilated
            for (long m = -K; m <= K; ++m) {
                double gg = 0.0, gh = 0.0;
                for (long n = -3 * K; n <= 3 * K; ++n) {
                    gg += g_at(n) * g_at(n + 2 * m);
                    gh += g_at(n) * h_at(n + 2 * m);
                }
                CHECK(gg == doctest::Approx(m == 0 ? 1.0 : 0.0).epsilon(1e-12));
                CHECK(std::abs(gh) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(high_pass(make_filter(FilterKind::point, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(high_pass(make_filter(FilterKind::momentum_shell, 1, 0, 8)),
                    std::invalid_argument);
}

TEST_CASE("haar cascade matches the closed form (1 - e^{-ik})/(ik)") {
    auto bank = make_filter(FilterKind::haar, 1);
    for (int i = 0; i <= 400; ++i) {
        double kappa = -20.0 + 40.0 * static_cast<double>(i) / 400.0;
        auto cas = cascade_phi_hat_axis(bank, kappa, 40);
        cplx want = (kappa == 0.0)
                        ? cplx(1.0, 0.0)
                        : (cplx(1.0, 0.0) - std::exp(cplx(0.0, -kappa))) /
                              cplx(0.0, kappa);
        CHECK(std::abs(cas.value - want) < 1e-10);
        CHECK(cas.truncation < 1e-10);
    }
}

TEST_CASE("cascade telescopes: phi(kappa) = m0(kappa/2) phi(kappa/2)") {
    for (int K : {0, 2, 6}) {  // 0 encodes haar
        auto bank = (K == 0) ? make_filter(FilterKind::haar, 1)
                             : make_filter(FilterKind::daubechies, 1, K);
        for (double kappa : {0.3, 1.7, 5.0, 19.0, 63.0}) {
            cplx lhs = cascade_phi_hat_axis(bank, kappa, 60).value;
            cplx rhs = transfer_m0_axis(bank, kappa / 2) *
                       cascade_phi_hat_axis(bank, kappa / 2, 60).value;
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("multi-axis cascade is the product of axis factors") {
    auto bank = make_filter(FilterKind::daubechies, 2, 3);
    auto joint = cascade_phi_hat(bank, {1.25, -4.5}, 40);
    auto ax = make_filter(FilterKind::daubechies, 1, 3);
    cplx want = cascade_phi_hat_axis(ax, 1.25, 40).value *
                cascade_phi_hat_axis(ax, -4.5, 40).value;
    CHECK(std::abs(joint.value - want) < 1e-13);
}

TEST_CASE("decay certificates bound the sampled cascade") {
    auto haar = make_filter(FilterKind::haar, 1);
    auto cert_h = certify_decay(haar);
    // haar scaling symbol is sinc(kappa/2); its peak envelope decays with
    // exponent exactly 1
    CHECK(cert_h.rho == doctest::Approx(1.0).epsilon(0.05));
    auto d2 = make_filter(FilterKind::daubechies, 1, 2);
    auto cert2 = certify_decay(d2);
    CHECK(cert2.rho > 1.0);  // strictly better than haar
    CHECK(cert2.rho < 2.0);
    auto d6 = make_filter(FilterKind::daubechies, 1, 6);
    auto cert6 = certify_decay(d6);
    CHECK(cert6.rho > 1.5);  // smooth enough for convergent p-channel tails
    for (const auto& pair : {std::make_pair(haar, cert_h), {d2, cert2}, {d6, cert6}}) {
        // spot checks include near-peak arguments (odd multiples of pi)
        for (double kappa : {0.5, 3.0, 17.0, 130.0, 1500.0, 3.0 * M_PI, 129.0 * M_PI}) {
            double mag = std::abs(cascade_phi_hat_axis(pair.first, kappa, 60).value);
            CHECK(mag <= pair.second.C * std::pow(1.0 + kappa, -pair.second.rho));
        }
    }
    CHECK(certify_decay(make_filter(FilterKind::point, 1)).rho == 0.0);
}

TEST_CASE("transfer ratio: removable zeros and the sup bound") {
    auto d2 = make_filter(FilterKind::daubechies, 1, 2);
    // near l = pi both m0 and the binomial factor vanish; the ratio stays
    // finite and matches the naive quotient away from the zero
    for (double l : {0.3, 1.1, 2.0, 2.9}) {
        cplx binom = std::pow((cplx(1.0, 0.0) + std::exp(cplx(0.0, -l))) / 2.0,
                              d2.K);
        cplx naive = transfer_m0_axis(d2, l) / binom;
        CHECK(std::abs(transfer_ratio(d2, l) - naive) < 1e-10);
    }
    CHECK(std::isfinite(std::abs(transfer_ratio(d2, M_PI))));
    CHECK(transfer_ratio_sup(d2) < std::pow(2.0, d2.K - 1));
    for (int K : {3, 6}) {
        auto bank = make_filter(FilterKind::daubechies, 1, K);
        CHECK(transfer_ratio_sup(bank) < std::pow(2.0, K - 1));
    }
    // haar: the ratio is identically 1 (sup exactly at the bound 2^0)
    auto haar = make_filter(FilterKind::haar, 1);
    CHECK(transfer_ratio_sup(haar) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tap accessor returns zero outside the support") {
    auto bank = make_filter(FilterKind::daubechies, 1, 2);
    CHECK(bank.tap(-1) == cplx(0.0, 0.0));
    CHECK(bank.tap(4) == cplx(0.0, 0.0));
    CHECK(bank.tap(0).real() == doctest::Approx(oracle::daub2_taps[0]));
}
