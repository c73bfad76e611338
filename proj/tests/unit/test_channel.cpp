#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "permwave/channel.hpp"
#include "permwave/rng.hpp"

using namespace permwave;

TEST_SUITE("channel") {

    TEST_CASE("jacobi eigendecomposition reconstructs random symmetric matrices") {
        Rng rng(3);
        for (std::size_t n : {2u, 3u, 5u, 8u}) {
            Matrix m(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j)
                    m(i, j) = m(j, i) = 2.0 * rng.next_double() - 1.0;
            const EigenDecomposition eig = jacobi_eigen_symmetric(m);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    double rec = 0.0;
                    for (std::size_t k = 0; k < n; ++k)
                        rec += eig.vectors(i, k) * eig.values[k] * eig.vectors(j, k);
                    CHECK(rec == doctest::Approx(m(i, j)).epsilon(1e-10).scale(1.0));
                }
            }
            for (std::size_t k = 0; k + 1 < n; ++k) CHECK(eig.values[k] >= eig.values[k + 1]);
        }
    }

    TEST_CASE("exponential correlation model, N=2: eigenvalues are 1 +- rho") {
        const ChannelModel m = build_model(ChannelKind::rayleigh, 2, 0.0, 0.5);
        CHECK(m.corr(0, 0) == 1.0);
        CHECK(m.corr(0, 1) == 0.5);
        CHECK(m.eig.values[0] == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(m.eig.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    }

    TEST_CASE("rho = 0 gives the identity; trace always equals N") {
        const ChannelModel id = build_model(ChannelKind::rayleigh, 3, 0.0, 0.0);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(id.corr(i, j) == (i == j ? 1.0 : 0.0));
        for (int n : {1, 2, 4, 6}) {
            const ChannelModel m =
                build_model(ChannelKind::rician, n, 2.0, 0.7);
            double trace = 0.0;
            for (double lam : m.eig.values) trace += lam;
            CHECK(trace == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
        }
    }

    TEST_CASE("huge K collapses the channel onto the LOS vector") {
        const ChannelModel m = build_model(ChannelKind::rician, 4, 1e9, 0.5);
        Rng rng(5);
        const auto h = sample_channel(m, rng);
        double dist = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) dist += std::norm(h[i] - m.los[i]);
        CHECK(std::sqrt(dist) < 1e-3);
    }

    TEST_CASE("average total gain is N and Rayleigh is zero mean") {
        const int n_draws = 100000;
        for (double k : {0.0, 2.5}) {
            const ChannelModel m = build_model(k > 0.0 ? ChannelKind::rician
                                                       : ChannelKind::rayleigh,
                                               2, k, 0.5);
            Rng rng(7);
            double gain = 0.0;
            std::complex<double> mean0(0.0, 0.0);
            for (int t = 0; t < n_draws; ++t) {
                const auto h = sample_channel(m, rng);
                for (const auto& v : h) gain += std::norm(v);
                mean0 += h[0];
            }
            CHECK(gain / n_draws == doctest::Approx(2.0).epsilon(0.02));
            if (k == 0.0) CHECK(std::abs(mean0) / n_draws < 0.02 * std::sqrt(2.0));
        }
    }

    TEST_CASE("scattered-component covariance recovers R_u / (K+1)") {
        const double k = 1.5;
        const ChannelModel m = build_model(ChannelKind::rician, 3, k, 0.6);
        Rng rng(11);
        const int n_draws = 100000;
        std::vector<std::complex<double>> cov(9, {0.0, 0.0});
        for (int t = 0; t < n_draws; ++t) {
            auto h = sample_channel(m, rng);
            for (std::size_t i = 0; i < 3; ++i) h[i] -= std::sqrt(k / (k + 1.0)) * m.los[i];
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) cov[i * 3 + j] += h[i] * std::conj(h[j]);
        }
        const double se = 3.0 / std::sqrt(static_cast<double>(n_draws));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                const std::complex<double> emp = cov[i * 3 + j] / static_cast<double>(n_draws);
                const double expected = m.corr(i, j) / (k + 1.0);
                CHECK(std::abs(emp - expected) < se);
            }
        }
    }

    TEST_CASE("same seed reproduces the same channel stream") {
        const ChannelModel m = build_model(ChannelKind::rician, 2, 0.8, 0.3);
        Rng a(99), b(99);
        for (int t = 0; t < 16; ++t) {
            const auto ha = sample_channel(m, a);
            const auto hb = sample_channel(m, b);
            CHECK(ha == hb);
        }
    }

    TEST_CASE("gain pdf/cdf closed forms, N=1 and normalisation") {
        const ChannelModel m = build_model(ChannelKind::rayleigh, 1, 0.0, 0.0);
        for (double x : {0.0, 0.4, 1.7, 5.0}) {
            CHECK(gain_pdf(m, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
            CHECK(gain_cdf(m, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
        }
        CHECK(gain_pdf(m, -0.5) == 0.0);
        // sum of partial-fraction weights is one: cdf(inf) = 1
        const ChannelModel m4 = build_model(ChannelKind::rayleigh, 4, 0.0, 0.55);
        const auto b = permwave::detail::rayleigh_gain_weights(m4);
        double sum = 0.0;
        for (double w : b) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("gain pdf matches a histogram of sampled gains") {
        const ChannelModel m = build_model(ChannelKind::rayleigh, 2, 0.0, 0.5);
        Rng rng(13);
        const int n_draws = 1000000;
        const double width = 0.1;
        std::vector<double> hist(100, 0.0);
        for (int t = 0; t < n_draws; ++t) {
            const auto h = sample_channel(m, rng);
            double g = 0.0;
            for (const auto& v : h) g += std::norm(v);
            const auto bin = static_cast<std::size_t>(g / width);
            if (bin < hist.size()) hist[bin] += 1.0;
        }
        for (std::size_t bin = 0; bin < hist.size(); ++bin) {
            const double density = hist[bin] / (n_draws * width);
            const double x = (bin + 0.5) * width;
            CHECK(std::abs(density - gain_pdf(m, x)) < 0.01);
        }
    }

    TEST_CASE("gain cdf is monotone from 0 to 1") {
        const ChannelModel m = build_model(ChannelKind::rayleigh, 3, 0.0, 0.4);
        CHECK(gain_cdf(m, 0.0) == 0.0);
        double prev = 0.0;
        for (int i = 1; i <= 400; ++i) {
            const double v = gain_cdf(m, i * 0.05);
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(prev > 0.999);
    }

    TEST_CASE("repeated eigenvalues: sampling works, gain distribution refuses") {
        const ChannelModel m = build_model(ChannelKind::rayleigh, 2, 0.0, 0.0);
        Rng rng(17);
        CHECK_NOTHROW(sample_channel(m, rng));
        CHECK_THROWS_AS(gain_pdf(m, 1.0), std::domain_error);
        CHECK_THROWS_AS(gain_cdf(m, 1.0), std::domain_error);
        const ChannelModel awgn = build_model(ChannelKind::awgn, 2, 0.0, 0.0);
        CHECK_THROWS_AS(gain_pdf(awgn, 1.0), std::domain_error);
        const auto h = sample_channel(awgn, rng);
        CHECK(h == std::vector<std::complex<double>>{{1.0, 0.0}, {1.0, 0.0}});
    }

    TEST_CASE("model construction validates its arguments") {
        CHECK_THROWS_AS(build_model(ChannelKind::rayleigh, 0, 0.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(build_model(ChannelKind::rayleigh, 2, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(build_model(ChannelKind::rician, 2, -0.1, 0.5), std::invalid_argument);
    }
}
