#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "permwave/assignment.hpp"
#include "permwave/codec.hpp"
#include "permwave/params.hpp"
#include "permwave/rng.hpp"
#include "permwave/waveform.hpp"

namespace permwave {

/// Matched-filter outputs of one received block: the projection of each
/// antenna's signal onto the L orthogonal tone dimensions of each subpulse.
/// Noiseless entry (a, n, l) is h_a * sqrt(E/L) * exp(j*theta_l) when
/// n == perm[l], zero otherwise; noise is i.i.d. CN(0, N0) per entry.
struct Observation {
    int antennas = 0;
    int L = 0;
    std::vector<std::complex<double>> proj;  // [(a*L + n)*L + l]

    std::complex<double>& at(int a, int tone, int subpulse) {
        return proj[(static_cast<std::size_t>(a) * static_cast<std::size_t>(L) +
                     static_cast<std::size_t>(tone)) *
                        static_cast<std::size_t>(L) +
                    static_cast<std::size_t>(subpulse)];
    }
    std::complex<double> at(int a, int tone, int subpulse) const {
        return proj[(static_cast<std::size_t>(a) * static_cast<std::size_t>(L) +
                     static_cast<std::size_t>(tone)) *
                        static_cast<std::size_t>(L) +
                    static_cast<std::size_t>(subpulse)];
    }
};

/// Statistically equivalent discrete model of r_c(t) = h s_i(t) + n(t) after
/// matched filtering: exact in distribution, independent of any oversampling.
inline Observation observe(const WaveformSymbol& sym, std::span<const std::complex<double>> h,
                           const WaveformParams& p, double n0, Rng& rng) {
    validate_symbol(sym, p);
    Observation obs;
    obs.antennas = static_cast<int>(h.size());
    obs.L = p.L;
    obs.proj.resize(h.size() * static_cast<std::size_t>(p.L) * static_cast<std::size_t>(p.L));
    const double amp = std::sqrt(p.E / p.L);
    const double noise_scale = std::sqrt(n0);
    for (int a = 0; a < obs.antennas; ++a) {
        for (int n = 0; n < p.L; ++n) {
            for (int l = 0; l < p.L; ++l) {
                std::complex<double> v = noise_scale > 0.0
                                             ? noise_scale * rng.complex_normal()
                                             : std::complex<double>(0.0, 0.0);
                if (sym.perm[static_cast<std::size_t>(l)] == n)
                    v += h[static_cast<std::size_t>(a)] *
                         std::polar(amp, phase_radians(sym, p, l));
                obs.at(a, n, l) = v;
            }
        }
    }
    return obs;
}

/// x_{m,l} entries of the (M*L) x L decision matrix: row m = tone*M + phase
/// holds Re{ exp(-j*theta_phase) * h^H (projection of tone at subpulse l) }.
struct CorrelationMatrix {
    int L = 0;
    int M = 0;
    std::vector<double> x;  // [(tone*M + phase)*L + l]

    double at(int row, int l) const {
        return x[static_cast<std::size_t>(row) * static_cast<std::size_t>(L) +
                 static_cast<std::size_t>(l)];
    }
    int rows() const { return M * L; }
};

inline CorrelationMatrix correlation_matrix(const Observation& obs,
                                            std::span<const std::complex<double>> h,
                                            const WaveformParams& p) {
    if (obs.L != p.L || obs.antennas != static_cast<int>(h.size()))
        throw std::domain_error("observation does not match params/channel");
    CorrelationMatrix cm;
    cm.L = p.L;
    cm.M = p.M;
    cm.x.resize(static_cast<std::size_t>(p.M) * static_cast<std::size_t>(p.L) *
                static_cast<std::size_t>(p.L));
    std::vector<double> cos_m(static_cast<std::size_t>(p.M)), sin_m(static_cast<std::size_t>(p.M));
    for (int m = 0; m < p.M; ++m) {
        cos_m[static_cast<std::size_t>(m)] = std::cos(two_pi * m / p.M);
        sin_m[static_cast<std::size_t>(m)] = std::sin(two_pi * m / p.M);
    }
    for (int n = 0; n < p.L; ++n) {
        for (int l = 0; l < p.L; ++l) {
            std::complex<double> combined(0.0, 0.0);
            for (int a = 0; a < obs.antennas; ++a)
                combined += std::conj(h[static_cast<std::size_t>(a)]) * obs.at(a, n, l);
            for (int m = 0; m < p.M; ++m) {
                // Re{ e^{-j theta_m} * combined }
                cm.x[(static_cast<std::size_t>(n) * static_cast<std::size_t>(p.M) +
                      static_cast<std::size_t>(m)) *
                         static_cast<std::size_t>(p.L) +
                     static_cast<std::size_t>(l)] =
                    combined.real() * cos_m[static_cast<std::size_t>(m)] +
                    combined.imag() * sin_m[static_cast<std::size_t>(m)];
            }
        }
    }
    return cm;
}

/// Per-block maxima over the M phase rows of each (tone, subpulse) block.
struct BlockMax {
    int L = 0;
    std::vector<double> y;        // [tone*L + l]
    std::vector<int> arg_row;     // row index within X achieving each maximum
};

inline BlockMax block_max(const CorrelationMatrix& cm) {
    BlockMax bm;
    bm.L = cm.L;
    bm.y.resize(static_cast<std::size_t>(cm.L) * static_cast<std::size_t>(cm.L));
    bm.arg_row.resize(bm.y.size());
    for (int n = 0; n < cm.L; ++n) {
        for (int l = 0; l < cm.L; ++l) {
            int best_row = n * cm.M;
            double best = cm.at(best_row, l);
            for (int m = 1; m < cm.M; ++m) {
                const double v = cm.at(n * cm.M + m, l);
                if (v > best) {
                    best = v;
                    best_row = n * cm.M + m;
                }
            }
            bm.y[static_cast<std::size_t>(n) * static_cast<std::size_t>(cm.L) +
                 static_cast<std::size_t>(l)] = best;
            bm.arg_row[static_cast<std::size_t>(n) * static_cast<std::size_t>(cm.L) +
                       static_cast<std::size_t>(l)] = best_row;
        }
    }
    return bm;
}

/// Block-max + assignment receiver: phase-maximise each (tone, subpulse)
/// block, pick the tone-to-subpulse permutation with the assignment solver,
/// then read the phase digit back from the winning row's offset within its
/// block. Exactly the ML decision, in O(L^2 M + L^3).
inline u128 detect_efficient(const Observation& obs, std::span<const std::complex<double>> h,
                             const WaveformParams& p) {
    const CorrelationMatrix cm = correlation_matrix(obs, h, p);
    const BlockMax bm = block_max(cm);
    const Assignment assignment = assign_max(bm.y, p.L);
    WaveformSymbol decided;
    decided.perm.resize(static_cast<std::size_t>(p.L));
    decided.phase_idx.resize(static_cast<std::size_t>(p.L));
    for (int l = 0; l < p.L; ++l) {
        const int tone = assignment.row_of_col[static_cast<std::size_t>(l)];
        decided.perm[static_cast<std::size_t>(l)] = tone;
        const int row = bm.arg_row[static_cast<std::size_t>(tone) * static_cast<std::size_t>(p.L) +
                                   static_cast<std::size_t>(l)];
        decided.phase_idx[static_cast<std::size_t>(l)] = row % p.M;
    }
    decided.index = decode_symbol(decided, p);
    return decided.index;
}

/// Brute-force ML: argmax over all M_T symbols of the additive per-subpulse
/// metric. Guarded to M_T <= 1e6; the efficient receiver computes the same
/// decision without the enumeration.
inline u128 detect_exhaustive(const Observation& obs, std::span<const std::complex<double>> h,
                              const WaveformParams& p) {
    const u128 total = total_waveforms(p);
    if (total > static_cast<u128>(1000000))
        throw std::domain_error(
            "detect_exhaustive: M_T exceeds 1e6; use detect_efficient instead");
    const CorrelationMatrix cm = correlation_matrix(obs, h, p);

    std::vector<int> perm(static_cast<std::size_t>(p.L));
    for (int l = 0; l < p.L; ++l) perm[static_cast<std::size_t>(l)] = l;
    std::vector<int> digits(static_cast<std::size_t>(p.L), 0);

    u128 best_index = 1;
    double best_metric = -std::numeric_limits<double>::infinity();
    u128 index = 1;
    // permutations iterate in lexicographic (rank) order; phase words count up
    do {
        digits.assign(static_cast<std::size_t>(p.L), 0);
        for (;;) {
            double metric = 0.0;
            for (int l = 0; l < p.L; ++l)
                metric += cm.at(perm[static_cast<std::size_t>(l)] * p.M +
                                    digits[static_cast<std::size_t>(l)],
                                l);
            if (metric > best_metric) {
                best_metric = metric;
                best_index = index;
            }
            ++index;
            int pos = p.L - 1;
            while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == p.M) {
                digits[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_index;
}

}  // namespace permwave
