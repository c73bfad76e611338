#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "permwave/fisher.hpp"
#include "permwave/rng.hpp"

using namespace permwave;

namespace {

WaveformSymbol random_symbol(const WaveformParams& p, Rng& rng) {
    const u128 total = total_waveforms(p);
    return encode_index(rng.uniform_below(static_cast<std::uint64_t>(total)) + 1, p);
}

// positive-definite regime for the full bounds at L = 8, f0 = 0, n = 1
const FisherParams kWideBand{0.1, 1.0e6};

}  // namespace

TEST_SUITE("fisher") {

    TEST_CASE("J22 equals C L^2 T^2 / 12 for any symbol") {
        const WaveformParams p{8, 4, 0.5, 0.0, 1, 1.0};
        Rng rng(3);
        for (int t = 0; t < 20; ++t) {
            const Fim j = fim(random_symbol(p, rng), p, kWideBand);
            CHECK(j.j22 ==
                  doctest::Approx(kWideBand.C() * p.L * p.L * p.T * p.T / 12.0).epsilon(1e-15));
        }
    }

    TEST_CASE("unmodulated linear waveform: J11 = (2CB/LT)(L - (L-1) cos(w0 T))") {
        const WaveformParams p{8, 1, 1.0, 0.37, 1, 1.0};
        const Fim j = fim(encode_index(1, p), p, kWideBand);
        const double w0t = two_pi * p.f0 * p.T;
        const double expected = 2.0 * kWideBand.C() * kWideBand.bandwidth / (p.L * p.T) *
                                (p.L - (p.L - 1) * std::cos(w0t));
        CHECK(j.j11 == doctest::Approx(expected).epsilon(1e-14));
    }

    TEST_CASE("permuting tones changes only J12") {
        const WaveformParams p{6, 2, 1.0, 0.0, 1, 1.0};
        Rng rng(7);
        WaveformSymbol a = random_symbol(p, rng);
        WaveformSymbol b = a;
        std::swap(b.perm[0], b.perm[3]);
        b.index = decode_symbol(b, p);
        const Fim ja = fim(a, p, kWideBand);
        const Fim jb = fim(b, p, kWideBand);
        CHECK(ja.j11 == jb.j11);
        CHECK(ja.j22 == jb.j22);
        CHECK(ja.j12 != jb.j12);
    }

    TEST_CASE("crlb_full equals the diagonal of the explicit 2x2 FIM inverse") {
        const WaveformParams p{8, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(11);
        for (int t = 0; t < 50; ++t) {
            const WaveformSymbol sym = random_symbol(p, rng);
            const Fim j = fim(sym, p, kWideBand);
            const Crlb full = crlb_full(sym, p, kWideBand);
            const double det = j.det();
            REQUIRE(det > 0.0);
            CHECK(full.tau == doctest::Approx(j.j22 / det).epsilon(1e-10));
            CHECK(full.omega == doctest::Approx(j.j11 / det).epsilon(1e-10));
        }
    }

    TEST_CASE("unmodulated special case reduces to the closed stepped-waveform forms") {
        const WaveformParams p{8, 1, 1.0, 0.0, 1, 1.0};
        const WaveformSymbol sym = encode_index(1, p);
        const Crlb simple = crlb_simplified(sym, p, kWideBand);
        const double cinv = 1.0 / kWideBand.C();
        // w0 T = 0 so every cosine is 1: the cosine sum is L-1 and the tau
        // bound sits at its (finite) maximum C^-1 L T / (2B)
        CHECK(simple.tau ==
              doctest::Approx(cinv * p.L * p.T / (2.0 * kWideBand.bandwidth)).epsilon(1e-14));
        CHECK(simple.omega == doctest::Approx(12.0 * cinv / (p.L * p.L * p.T * p.T)).epsilon(1e-14));
        // with a nonzero f0 the closed form matches
        WaveformParams p2 = p;
        p2.f0 = 0.31;
        const Crlb s2 = crlb_simplified(encode_index(1, p2), p2, kWideBand);
        const double gap = p2.L - (p2.L - 1) * std::cos(two_pi * p2.f0 * p2.T);
        CHECK(s2.tau ==
              doctest::Approx(cinv * p2.L * p2.T / (2.0 * kWideBand.bandwidth * gap))
                  .epsilon(1e-14));
    }

    TEST_CASE("simplified bounds ignore the permutation entirely") {
        const WaveformParams p{6, 4, 1.0, 0.25, 1, 1.0};
        Rng rng(5);
        WaveformSymbol a = random_symbol(p, rng);
        WaveformSymbol b = a;
        std::reverse(b.perm.begin(), b.perm.end());
        b.index = decode_symbol(b, p);
        const Crlb ca = crlb_simplified(a, p, kWideBand);
        const Crlb cb = crlb_simplified(b, p, kWideBand);
        CHECK(ca.tau == cb.tau);
        CHECK(ca.omega == cb.omega);
    }

    TEST_CASE("simplified omega bound is symbol independent; doubling L shrinks it 4x") {
        const WaveformParams p{8, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(13);
        const Crlb ref = crlb_simplified(random_symbol(p, rng), p, kWideBand);
        for (int t = 0; t < 20; ++t) {
            const Crlb other = crlb_simplified(random_symbol(p, rng), p, kWideBand);
            CHECK(other.omega == ref.omega);  // bit identical
        }
        WaveformParams doubled = p;
        doubled.L = 16;
        const Crlb wide = crlb_simplified(encode_index(1, doubled), doubled, kWideBand);
        CHECK(wide.omega == doctest::Approx(ref.omega / 4.0).epsilon(1e-14));
    }

    TEST_CASE("full bounds dominate simplified bounds") {
        const WaveformParams p{8, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(17);
        for (int t = 0; t < 100; ++t) {
            const WaveformSymbol sym = random_symbol(p, rng);
            const Crlb full = crlb_full(sym, p, kWideBand);
            const Crlb simple = crlb_simplified(sym, p, kWideBand);
            CHECK(full.tau >= simple.tau * (1.0 - 1e-12));
            CHECK(full.omega >= simple.omega * (1.0 - 1e-12));
        }
    }

    TEST_CASE("the symbol minimising the simplified tau bound maximises the cosine gap") {
        const WaveformParams p{6, 4, 1.0, 0.125, 1, 1.0};
        Rng rng(19);
        double best_crlb = std::numeric_limits<double>::infinity();
        double best_gap = -1.0;
        u128 best_crlb_sym = 0, best_gap_sym = 0;
        for (int t = 0; t < 200; ++t) {
            const WaveformSymbol sym = random_symbol(p, rng);
            const double tau = crlb_simplified(sym, p, kWideBand).tau;
            double gap = 0.0;
            const double w0t = two_pi * p.f0 * p.T;
            for (int l = 0; l + 1 < p.L; ++l)
                gap += 1.0 -
                       std::cos(w0t + phase_radians(sym, p, l) - phase_radians(sym, p, l + 1));
            if (tau < best_crlb) {
                best_crlb = tau;
                best_crlb_sym = sym.index;
            }
            if (gap > best_gap) {
                best_gap = gap;
                best_gap_sym = sym.index;
            }
        }
        CHECK(best_crlb_sym == best_gap_sym);
    }

    TEST_CASE("zero-phase symbols maximise the simplified tau bound") {
        const WaveformParams p{8, 4, 1.0, 0.0, 1, 1.0};  // w0 T = 0
        const double max_tau = crlb_simplified(encode_index(1, p), p, kWideBand).tau;
        Rng rng(23);
        for (int t = 0; t < 100; ++t)
            CHECK(crlb_simplified(random_symbol(p, rng), p, kWideBand).tau <=
                  max_tau * (1.0 + 1e-12));
    }

    TEST_CASE("degenerate regimes raise errors or sentinels") {
        const WaveformParams p{8, 1, 1.0, 0.0, 1, 1.0};
        const WaveformSymbol sym = encode_index(1, p);
        // narrowband: coupling term dominates, information matrix indefinite
        const FisherParams narrow{0.1, 10.0};
        CHECK_THROWS_AS(crlb_full(sym, p, narrow), std::domain_error);
        CHECK(std::isfinite(crlb_simplified(sym, p, narrow).tau));
        CHECK_THROWS_AS(fim(sym, p, FisherParams{-1.0, 10.0}), std::invalid_argument);
    }
}
