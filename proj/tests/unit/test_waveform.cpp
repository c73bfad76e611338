#include <doctest.h>

#include <complex>

#include "permwave/rng.hpp"
#include "permwave/waveform.hpp"

using namespace permwave;

namespace {

/// Riemann inner product <a, b> = sum a[k] conj(b[k]) / fs on a shared grid.
std::complex<double> inner(const BasebandSignal& a, const BasebandSignal& b) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = 0; k < a.samples.size(); ++k)
        acc += a.samples[k] * std::conj(b.samples[k]);
    return acc / a.sample_rate;
}

WaveformSymbol random_symbol(const WaveformParams& p, Rng& rng) {
    const u128 total = total_waveforms(p);
    return encode_index(rng.uniform_below(static_cast<std::uint64_t>(total)) + 1, p);
}

}  // namespace

TEST_SUITE("waveform") {

    TEST_CASE("single subpulse is a constant-modulus tone with energy E") {
        const WaveformParams p{1, 1, 2.0, 0.0, 1, 3.0};
        const BasebandSignal sig = synthesize(encode_index(1, p), p, 32);
        const double expected_mod = std::sqrt(p.E / (p.L * p.T));
        double energy = 0.0;
        for (const auto& s : sig.samples) {
            CHECK(std::abs(s) == doctest::Approx(expected_mod).epsilon(1e-12));
            energy += std::norm(s);
        }
        energy /= sig.sample_rate;
        CHECK(energy == doctest::Approx(p.E).epsilon(1e-3));
    }

    TEST_CASE("energy does not depend on the symbol") {
        const WaveformParams p{4, 4, 0.5, 0.0, 1, 2.0};
        Rng rng(3);
        for (int t = 0; t < 10; ++t) {
            const BasebandSignal sig = synthesize(random_symbol(p, rng), p, 16);
            double energy = 0.0;
            for (const auto& s : sig.samples) energy += std::norm(s);
            energy /= sig.sample_rate;
            CHECK(energy == doctest::Approx(p.E).epsilon(1e-3));
        }
    }

    TEST_CASE("distinct tones are orthogonal over one subpulse") {
        // two single-subpulse waveforms on tones m/T and n/T, m != n
        WaveformParams pa{1, 1, 1.0, 0.0, 1, 1.0};
        WaveformParams pb = pa;
        pa.f0 = 1.0 / pa.T;
        pb.f0 = 3.0 / pb.T;
        WaveformSymbol single;
        single.perm = {0};
        single.phase_idx = {0};
        const BasebandSignal sa = synthesize(single, pa, 64);
        const BasebandSignal sb = synthesize(single, pb, 64);
        CHECK(std::abs(inner(sa, sb)) / pa.E < 1e-6);
    }

    TEST_CASE("symbol 1 at L=2, f0=0 starts at DC then runs one cycle per T") {
        const WaveformParams p{2, 1, 1.0, 0.0, 1, 1.0};
        const BasebandSignal sig = synthesize(encode_index(1, p), p, 32);
        const std::size_t half = sig.samples.size() / 2;
        for (std::size_t k = 0; k < half; ++k)
            CHECK(sig.samples[k].real() ==
                  doctest::Approx(std::sqrt(p.E / (p.L * p.T))).epsilon(1e-12));
        // subpulse 1: phase advances 2*pi over T, so the quarter point is +j-ish
        const std::size_t quarter = half + half / 4;
        CHECK(sig.samples[quarter].imag() > 0.0);
        CHECK(std::abs(sig.samples[half].imag()) < 1e-9);
    }

    TEST_CASE("sampled inner products match the analytic cosine sum") {
        const WaveformParams p{4, 4, 1.0, 0.0, 1, 1.0};
        Rng rng(11);
        for (int t = 0; t < 20; ++t) {
            const WaveformSymbol a = random_symbol(p, rng);
            const WaveformSymbol b = random_symbol(p, rng);
            const BasebandSignal sa = synthesize(a, p, 16);
            const BasebandSignal sb = synthesize(b, p, 16);
            double analytic = 0.0;
            for (int l = 0; l < p.L; ++l)
                if (a.perm[static_cast<std::size_t>(l)] == b.perm[static_cast<std::size_t>(l)])
                    analytic += std::cos(phase_radians(b, p, l) - phase_radians(a, p, l));
            analytic *= p.E / p.L;
            const double sampled = inner(sb, sa).real();
            CHECK(sampled == doctest::Approx(analytic).epsilon(1e-4).scale(p.E));
        }
    }

    TEST_CASE("to_basis restates the symbol with sqrt(E/L) amplitude") {
        const WaveformParams p{4, 4, 1.0, 0.0, 1, 2.0};
        const WaveformSymbol sym = encode_index(1, p);
        const BasisSymbolMatrix basis = to_basis(sym, p);
        for (int l = 0; l < p.L; ++l) {
            double col_energy = 0.0;
            for (int n = 0; n < p.L; ++n) col_energy += std::norm(basis.entry(n, l));
            CHECK(col_energy == doctest::Approx(p.E / p.L).epsilon(1e-12));
            CHECK(basis.entry(l, l) ==
                  std::complex<double>(std::sqrt(p.E / p.L), 0.0));  // identity, zero phase
        }
        CHECK(basis.perm == sym.perm);
        CHECK(basis.phase_idx == sym.phase_idx);
    }

    TEST_CASE("synthesize validates its arguments") {
        const WaveformParams p{2, 2, 1.0, 0.0, 1, 1.0};
        CHECK_THROWS_AS(synthesize(encode_index(1, p), p, 1), std::domain_error);
    }
}
