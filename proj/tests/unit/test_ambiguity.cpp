#include <doctest.h>

#include <cmath>
#include <complex>

#include "permwave/ambiguity.hpp"
#include "permwave/rng.hpp"
#include "support/numeric_caf.hpp"

using namespace permwave;

namespace {

WaveformSymbol random_symbol(const WaveformParams& p, Rng& rng) {
    const u128 total = total_waveforms(p);
    return encode_index(rng.uniform_below(static_cast<std::uint64_t>(total)) + 1, p);
}

// L = 8 phase sequence [3pi/4, 3pi/4, 3pi/4, pi/2, 3pi/4, pi/2, pi/4, pi/2]
// as digits of an M = 8 alphabet.
const std::vector<int> kFigPhases{3, 3, 3, 2, 3, 2, 1, 2};

}  // namespace

TEST_SUITE("ambiguity") {

    TEST_CASE("subpulse caf: origin value, support edge, zero-delay magnitude") {
        const double T = 0.7;
        CHECK(subpulse_caf(0.0, 0.0, T).real() == doctest::Approx(T).epsilon(1e-12));
        CHECK(std::abs(subpulse_caf(T, 1.3, T)) == 0.0);
        CHECK(std::abs(subpulse_caf(-T, 0.4, T)) == 0.0);
        const double w = 3.7 / T;
        CHECK(std::abs(subpulse_caf(0.0, w, T)) ==
              doctest::Approx(std::abs(2.0 * std::sin(w * T / 2.0) / w)).epsilon(1e-12));
    }

    TEST_CASE("subpulse caf small-omega series matches the exact expression") {
        const double T = 1.0;
        for (double tau : {-0.3, 0.0, 0.4}) {
            const double w = 0.9e-6 / T;  // series branch
            const auto series = subpulse_caf(tau, w, T);
            const std::complex<double> jw(0.0, w);
            const auto exact = tau < 0.0
                                   ? (std::polar(1.0, w * (tau + T)) - 1.0) / jw
                                   : (std::polar(1.0, w * T) - std::polar(1.0, w * tau)) / jw;
            // the exact route loses ~6 digits to cancellation here; the series
            // must sit inside that noise floor
            CHECK(std::abs(series - exact) < 1e-9);
            CHECK(std::abs(subpulse_caf(tau, 0.0, T)) ==
                  doctest::Approx(T - std::abs(tau)).epsilon(1e-12));
        }
    }

    TEST_CASE("matched filter peak is one for every symbol") {
        Rng rng(5);
        for (int L : {2, 5, 8}) {
            const WaveformParams p{L, 4, 1.0, 0.0, 1, 1.0};
            for (int t = 0; t < 5; ++t)
                CHECK(std::abs(caf(random_symbol(p, rng), p, 0.0, 0.0)) ==
                      doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("analytic caf matches numeric integration of the definition") {
        Rng rng(17);
        for (int t = 0; t < 10; ++t) {
            const int L = 4 + static_cast<int>(rng.uniform_below(5));
            const WaveformParams p{L, 4, 1.0, 0.0, 1, 1.0};
            const WaveformSymbol sym = random_symbol(p, rng);
            for (int q = 0; q < 10; ++q) {
                const double tau = (2.0 * rng.next_double() - 1.0) * p.duration();
                const double omega =
                    (2.0 * rng.next_double() - 1.0) * two_pi * p.n_step / p.T;
                const double analytic = std::abs(caf(sym, p, tau, omega));
                const double numeric =
                    std::abs(testsupport::numeric_caf(sym, p, tau, omega));
                CHECK(analytic == doctest::Approx(numeric).epsilon(1e-3).scale(0.05));
            }
        }
    }

    TEST_CASE("symmetry |A(-tau,-omega)| = |A(tau,omega)|") {
        const WaveformParams p{6, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(23);
        const WaveformSymbol sym = random_symbol(p, rng);
        for (int t = 0; t < 50; ++t) {
            const double tau = (2.0 * rng.next_double() - 1.0) * p.duration();
            const double omega = (2.0 * rng.next_double() - 1.0) * two_pi / p.T;
            CHECK(std::abs(caf(sym, p, tau, omega)) ==
                  doctest::Approx(std::abs(caf(sym, p, -tau, -omega))).epsilon(1e-9));
        }
    }

    TEST_CASE("zero-Doppler cut endpoints") {
        const WaveformParams p{4, 2, 1.0, 0.0, 1, 1.0};
        Rng rng(29);
        const WaveformSymbol sym = random_symbol(p, rng);
        const std::vector<double> taus{-p.duration(), 0.0, p.duration(), 1.5 * p.duration()};
        const auto cut = zero_doppler_cut(sym, p, taus);
        CHECK(cut[0] == 0.0);
        CHECK(cut[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cut[2] == 0.0);
        CHECK(cut[3] == 0.0);
    }

    TEST_CASE("phase modulation leaves the main-lobe curvature nearly unchanged") {
        WaveformParams p{8, 8, 1.0, 0.0, 1, 1.0};
        WaveformSymbol modulated;
        modulated.perm = {0, 1, 2, 3, 4, 5, 6, 7};
        modulated.phase_idx = kFigPhases;
        WaveformSymbol plain = modulated;
        plain.phase_idx.assign(8, 0);

        const double h = p.T / 50.0;
        const std::vector<double> taus{-h, 0.0, h};
        const auto cut_mod = zero_doppler_cut(modulated, p, taus);
        const auto cut_plain = zero_doppler_cut(plain, p, taus);
        // the cut around the origin moves by well under 1%
        CHECK(cut_mod[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cut_mod[0] == doctest::Approx(cut_plain[0]).epsilon(0.01));
        CHECK(cut_mod[2] == doctest::Approx(cut_plain[2]).epsilon(0.01));
        // the raw second difference carries the triangular-envelope kink
        // (identical for both waveforms) plus a small smooth part
        const double curv_mod = (cut_mod[0] - 2.0 * cut_mod[1] + cut_mod[2]) / (h * h);
        const double curv_plain = (cut_plain[0] - 2.0 * cut_plain[1] + cut_plain[2]) / (h * h);
        CHECK(curv_mod == doctest::Approx(curv_plain).epsilon(0.15));
    }

    TEST_CASE("zero-delay cut: closed form hits one at 0 and its first null") {
        const WaveformParams p{8, 4, 0.5, 0.0, 1, 1.0};
        const std::vector<double> omegas{0.0, two_pi / p.duration()};
        const auto cut = zero_delay_cut(p, omegas);
        CHECK(cut[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cut[1] < 1e-9);
    }

    TEST_CASE("zero-delay cut is symbol independent and equals the full caf") {
        const WaveformParams p{8, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(31);
        for (int s = 0; s < 5; ++s) {
            const WaveformSymbol sym = random_symbol(p, rng);
            for (int q = 0; q < 20; ++q) {
                const double omega = (2.0 * rng.next_double() - 1.0) * two_pi * 2.0 / p.T;
                const std::vector<double> grid{omega};
                const double closed = zero_delay_cut(p, grid)[0];
                CHECK(std::abs(std::abs(caf(sym, p, 0.0, omega)) - closed) < 1e-9);
            }
        }
    }

    TEST_CASE("surface rows agree with pointwise caf and are thread independent") {
        const WaveformParams p{5, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(37);
        const WaveformSymbol sym = random_symbol(p, rng);
        GridSpec grid = GridSpec::default_for(p, 64);
        const AmbiguitySurface a = ambiguity_surface(sym, p, grid, 1);
        const AmbiguitySurface b = ambiguity_surface(sym, p, grid, 4);
        CHECK(a.values == b.values);
        for (std::size_t i = 0; i < a.tau_grid.size(); i += 13) {
            for (std::size_t j = 0; j < a.omega_grid.size(); j += 17) {
                CHECK(a.at(i, j) ==
                      doctest::Approx(std::abs(caf(sym, p, a.tau_grid[i], a.omega_grid[j])))
                          .epsilon(1e-12));
            }
        }
    }

    TEST_CASE("peak sidelobe: below one, grid-refinement and shift robust") {
        const WaveformParams p{8, 1, 1.0, 0.0, 1, 1.0};
        const WaveformSymbol sym = encode_index(1, p);  // unmodulated linear stepped
        const ExclusionSpec excl = ExclusionSpec::default_for(p);
        const double psl = peak_sidelobe(sym, p, GridSpec::default_for(p, 512), excl);
        CHECK(psl < 1.0);
        CHECK(psl > 0.0);
        const double psl_fine = peak_sidelobe(sym, p, GridSpec::default_for(p, 2048), excl);
        CHECK(std::abs(psl - psl_fine) < 5e-3);  // 512-grid quantisation of the lobe peak
        GridSpec shifted = GridSpec::default_for(p, 512);
        const double dtau = (shifted.tau_max - shifted.tau_min) / (2.0 * (512 - 1));
        const double domega = (shifted.omega_max - shifted.omega_min) / (2.0 * (512 - 1));
        shifted.tau_min += dtau;
        shifted.tau_max += dtau;
        shifted.omega_min += domega;
        shifted.omega_max += domega;
        const double psl_shifted = peak_sidelobe(sym, p, shifted, excl);
        CHECK(std::abs(psl - psl_shifted) < 2e-2);
    }

    TEST_CASE("peak sidelobe rejects an all-covering exclusion") {
        const WaveformParams p{2, 1, 1.0, 0.0, 1, 1.0};
        const WaveformSymbol sym = encode_index(1, p);
        GridSpec grid = GridSpec::default_for(p, 16);
        ExclusionSpec everything{1e9, 1e9};
        CHECK_THROWS_AS(peak_sidelobe(sym, p, grid, everything), std::domain_error);
    }

    TEST_CASE("psl statistics are reproducible and worker-count independent") {
        const WaveformParams p{4, 4, 1.0, 0.0, 1, 1.0};
        const GridSpec grid = GridSpec::default_for(p, 96);
        const ExclusionSpec excl = ExclusionSpec::default_for(p);
        const PslStats one = psl_statistics(p, 6, 42, grid, excl, true, 1);
        const PslStats two = psl_statistics(p, 6, 42, grid, excl, true, 3);
        CHECK(one.samples == two.samples);
        CHECK(one.mean == two.mean);
        const PslStats single = psl_statistics(p, 1, 7, grid, excl, true, 1);
        const PslStats single_again = psl_statistics(p, 1, 7, grid, excl, true, 1);
        CHECK(single.samples == single_again.samples);
    }

    TEST_CASE("volume under |A|^2 over the full support is close to one") {
        const WaveformParams p{6, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(41);
        const WaveformSymbol sym = random_symbol(p, rng);
        GridSpec grid;
        grid.tau_min = -p.duration();
        grid.tau_max = p.duration();
        grid.n_tau = 768;
        grid.omega_min = -two_pi * p.L * p.delta_f() * 1.5;
        grid.omega_max = two_pi * p.L * p.delta_f() * 1.5;
        grid.n_omega = 1536;
        const AmbiguitySurface surf = ambiguity_surface(sym, p, grid, 2);
        const double dtau = (grid.tau_max - grid.tau_min) / (grid.n_tau - 1);
        const double domega = (grid.omega_max - grid.omega_min) / (grid.n_omega - 1);
        double volume = 0.0;
        for (double v : surf.values) volume += v * v;
        volume *= dtau * domega / two_pi;
        CHECK(volume == doctest::Approx(1.0).epsilon(0.10));
    }
}
