#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "permwave/codec.hpp"
#include "permwave/parallel.hpp"
#include "permwave/params.hpp"
#include "permwave/rng.hpp"

namespace permwave {

namespace detail {

/// (exp(j*x) - 1) / (j*w) with x = w*u, stable for small |x|. The series
/// branch u*(1 + x/2 + x^2/6) avoids the cancellation in exp(j*x) - 1.
inline std::complex<double> expm1_over_jw(double w, double u) {
    const double x = w * u;
    if (std::abs(x) < 1e-6) {
        const std::complex<double> jx(0.0, x);
        return u * (1.0 + jx / 2.0 + jx * jx / 6.0);
    }
    const std::complex<double> num = std::polar(1.0, x) - 1.0;
    return {num.imag() / w, -num.real() / w};
}

}  // namespace detail

/// Complex ambiguity function of the unit rectangular subpulse of length T:
///   (exp(j*w*(tau+T)) - 1)/(j*w)   for -T < tau < 0
///   (exp(j*w*T) - exp(j*w*tau))/(j*w) for 0 <= tau < T
///   0 otherwise,
/// with the w -> 0 limit T - |tau|.
inline std::complex<double> subpulse_caf(double tau, double omega, double T) {
    if (tau <= -T || tau >= T) return {0.0, 0.0};
    if (tau < 0.0) return detail::expm1_over_jw(omega, tau + T);
    // (e^{jwT} - e^{jw tau})/(jw) = e^{jw tau} * (e^{jw(T-tau)} - 1)/(jw)
    return std::polar(1.0, omega * tau) * detail::expm1_over_jw(omega, T - tau);
}

/// Complex ambiguity function of a symbol under the unit-energy convention:
///   (1/LT) sum_{l,n} A_p(tau+(n-l)T, w-(w_n-w_l))
///                    * exp(j(w*l*T + w_n*(tau+(n-l)T) + theta_l - theta_n)).
/// Only subpulse offsets k = n-l with |tau + k*T| < T contribute.
inline std::complex<double> caf(const WaveformSymbol& sym, const WaveformParams& p, double tau,
                                double omega) {
    const double T = p.T;
    const int L = p.L;
    std::complex<double> acc(0.0, 0.0);
    const int k_first = static_cast<int>(std::floor(-tau / T)) - 1;
    for (int k = k_first; k <= k_first + 2; ++k) {
        const double tau_k = tau + k * T;
        if (tau_k <= -T || tau_k >= T) continue;
        const int l_lo = std::max(0, -k);
        const int l_hi = std::min(L - 1, L - 1 - k);
        for (int l = l_lo; l <= l_hi; ++l) {
            const int n = l + k;
            const double w_l = p.tone_omega(sym.perm[static_cast<std::size_t>(l)]);
            const double w_n = p.tone_omega(sym.perm[static_cast<std::size_t>(n)]);
            const double phase = omega * l * T + w_n * tau_k + phase_radians(sym, p, l) -
                                 phase_radians(sym, p, n);
            acc += subpulse_caf(tau_k, omega - (w_n - w_l), T) * std::polar(1.0, phase);
        }
    }
    return acc / (L * T);
}

inline std::vector<double> zero_doppler_cut(const WaveformSymbol& sym, const WaveformParams& p,
                                            std::span<const double> tau_grid) {
    std::vector<double> cut;
    cut.reserve(tau_grid.size());
    for (double tau : tau_grid) cut.push_back(std::abs(caf(sym, p, tau, 0.0)));
    return cut;
}

/// Zero-delay cut |A(0,w)| = |A_p(0,w)| * |sum_l exp(j*w*l*T)| / (LT).
/// Symbol independent: neither permutation nor phases enter.
inline std::vector<double> zero_delay_cut(const WaveformParams& p,
                                          std::span<const double> omega_grid) {
    std::vector<double> cut;
    cut.reserve(omega_grid.size());
    for (double omega : omega_grid) {
        std::complex<double> comb(0.0, 0.0);
        for (int l = 0; l < p.L; ++l) comb += std::polar(1.0, omega * l * p.T);
        cut.push_back(std::abs(subpulse_caf(0.0, omega, p.T) * comb) / (p.L * p.T));
    }
    return cut;
}

struct GridSpec {
    double tau_min = 0.0, tau_max = 0.0;
    int n_tau = 0;
    double omega_min = 0.0, omega_max = 0.0;
    int n_omega = 0;

    /// Default evaluation window: the full AF support, tau in [-LT, LT] and
    /// omega in [-2*pi*L*Delta_f, 2*pi*L*Delta_f] (all tone offsets plus one
    /// step of margin), 512 x 512 points.
    static GridSpec default_for(const WaveformParams& p, int n = 512) {
        GridSpec g;
        g.tau_min = -p.duration();
        g.tau_max = p.duration();
        g.omega_min = -two_pi * p.L * p.delta_f();
        g.omega_max = two_pi * p.L * p.delta_f();
        g.n_tau = g.n_omega = n;
        return g;
    }

    static std::vector<double> linspace(double lo, double hi, int n) {
        if (n < 2) throw std::domain_error("grid needs at least 2 points per axis");
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
        return v;
    }

    std::vector<double> tau_points() const { return linspace(tau_min, tau_max, n_tau); }
    std::vector<double> omega_points() const { return linspace(omega_min, omega_max, n_omega); }
};

/// Main-lobe region left out of peak-sidelobe searches: the rectangle
/// |tau| < tau_half_width AND |omega| < omega_half_width.
struct ExclusionSpec {
    double tau_half_width = 0.0;
    double omega_half_width = 0.0;

    /// The single-subpulse ambiguity envelope around the origin: |tau| < T
    /// and |omega| < 2*pi/T (the first envelope nulls on both axes). With
    /// this region the L = 8, M = 4 PSL means land on the reference values
    /// 0.326 (no phase modulation) and 0.303 (with it).
    static ExclusionSpec default_for(const WaveformParams& p) {
        return {p.T, two_pi / p.T};
    }

    bool excludes(double tau, double omega) const {
        return std::abs(tau) < tau_half_width && std::abs(omega) < omega_half_width;
    }
};

namespace detail {

/// Doppler phasor table exp(j*w*l*T), shared by every row of a surface scan.
struct DopplerTable {
    int L = 0;
    std::vector<std::complex<double>> cells;  // [l * n_omega + i]

    DopplerTable(const WaveformParams& p, std::span<const double> omega_grid) : L(p.L) {
        cells.resize(static_cast<std::size_t>(L) * omega_grid.size());
        for (int l = 0; l < L; ++l)
            for (std::size_t i = 0; i < omega_grid.size(); ++i)
                cells[static_cast<std::size_t>(l) * omega_grid.size() + i] =
                    std::polar(1.0, omega_grid[i] * l * p.T);
    }

    const std::complex<double>* row(int l, std::size_t n_omega) const {
        return cells.data() + static_cast<std::size_t>(l) * n_omega;
    }
};

/// |A(tau, w)| for one tau over the whole omega grid. Same arithmetic as
/// caf(), but the w-independent factor of every (l, n) term and the
/// exp(j*w*l*T) phasors are hoisted out of the inner loop.
inline void caf_row_abs(const WaveformSymbol& sym, const WaveformParams& p, double tau,
                        std::span<const double> omega_grid, const DopplerTable& table,
                        std::vector<std::complex<double>>& scratch, double* out_abs) {
    const double T = p.T;
    const int L = p.L;
    const std::size_t n = omega_grid.size();
    scratch.assign(n, {0.0, 0.0});

    const int k_first = static_cast<int>(std::floor(-tau / T)) - 1;
    for (int k = k_first; k <= k_first + 2; ++k) {
        const double tau_k = tau + k * T;
        if (tau_k <= -T || tau_k >= T) continue;
        const int l_lo = std::max(0, -k);
        const int l_hi = std::min(L - 1, L - 1 - k);
        for (int l = l_lo; l <= l_hi; ++l) {
            const int n_idx = l + k;
            const double w_l = p.tone_omega(sym.perm[static_cast<std::size_t>(l)]);
            const double w_n = p.tone_omega(sym.perm[static_cast<std::size_t>(n_idx)]);
            const std::complex<double> fixed =
                std::polar(1.0, w_n * tau_k + phase_radians(sym, p, l) -
                                    phase_radians(sym, p, n_idx));
            const double shift = w_n - w_l;
            const std::complex<double>* phasors = table.row(l, n);
            if (tau_k < 0.0) {
                const double u = tau_k + T;
                for (std::size_t i = 0; i < n; ++i)
                    scratch[i] += expm1_over_jw(omega_grid[i] - shift, u) * fixed * phasors[i];
            } else {
                const double v = T - tau_k;
                for (std::size_t i = 0; i < n; ++i) {
                    const double w = omega_grid[i] - shift;
                    scratch[i] += std::polar(1.0, w * tau_k) * expm1_over_jw(w, v) * fixed *
                                  phasors[i];
                }
            }
        }
    }
    const double norm = 1.0 / (L * T);
    for (std::size_t i = 0; i < n; ++i) out_abs[i] = std::abs(scratch[i]) * norm;
}

}  // namespace detail

/// |A(tau, w)| sampled on a grid, row-major over tau.
struct AmbiguitySurface {
    std::vector<double> tau_grid;
    std::vector<double> omega_grid;
    std::vector<double> values;  // [i_tau * n_omega + i_omega]
    double normalisation = 1.0;  // A(0,0) under the unit-energy convention

    double at(std::size_t i_tau, std::size_t i_omega) const {
        return values[i_tau * omega_grid.size() + i_omega];
    }
};

inline AmbiguitySurface ambiguity_surface(const WaveformSymbol& sym, const WaveformParams& p,
                                          const GridSpec& grid, unsigned threads = 1) {
    p.validate();
    validate_symbol(sym, p);
    AmbiguitySurface surf;
    surf.tau_grid = grid.tau_points();
    surf.omega_grid = grid.omega_points();
    surf.values.resize(surf.tau_grid.size() * surf.omega_grid.size());
    const detail::DopplerTable table(p, surf.omega_grid);
    parallel_for(surf.tau_grid.size(), threads, [&](std::size_t i) {
        thread_local std::vector<std::complex<double>> scratch;
        detail::caf_row_abs(sym, p, surf.tau_grid[i], surf.omega_grid, table, scratch,
                            surf.values.data() + i * surf.omega_grid.size());
    });
    return surf;
}

/// Largest |A| over grid points outside the main-lobe exclusion region,
/// with A(0,0) = 1 by the unit-energy convention.
inline double peak_sidelobe(const WaveformSymbol& sym, const WaveformParams& p,
                            const GridSpec& grid, const ExclusionSpec& excl) {
    const auto taus = grid.tau_points();
    const auto omegas = grid.omega_points();
    const detail::DopplerTable table(p, omegas);
    std::vector<std::complex<double>> scratch;
    std::vector<double> row(omegas.size());
    double peak = -1.0;
    bool any = false;
    for (double tau : taus) {
        detail::caf_row_abs(sym, p, tau, omegas, table, scratch, row.data());
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            if (excl.excludes(tau, omegas[i])) continue;
            any = true;
            peak = std::max(peak, row[i]);
        }
    }
    if (!any) throw std::domain_error("exclusion region covers the whole grid");
    return peak;
}

struct PslStats {
    std::vector<double> samples;  // one normalised PSL per drawn symbol
    double mean = 0.0;
};

/// Draws n_samples random symbols (uniform permutation; phases uniform over
/// the M-PSK alphabet, or all zero when random_phases is false) and computes
/// the PSL of each. Sample i uses the substream (seed, i), so results do not
/// depend on the worker count.
inline PslStats psl_statistics(const WaveformParams& p, int n_samples, std::uint64_t seed,
                               const GridSpec& grid, const ExclusionSpec& excl,
                               bool random_phases = true, unsigned threads = 1) {
    p.validate();
    if (n_samples < 1) throw std::domain_error("n_samples must be >= 1");
    PslStats stats;
    stats.samples.resize(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
        Rng rng = Rng::substream(seed, i);
        WaveformSymbol sym;
        sym.perm.resize(static_cast<std::size_t>(p.L));
        for (int l = 0; l < p.L; ++l) sym.perm[static_cast<std::size_t>(l)] = l;
        for (int l = p.L - 1; l > 0; --l)
            std::swap(sym.perm[static_cast<std::size_t>(l)],
                      sym.perm[rng.uniform_below(static_cast<std::uint64_t>(l) + 1)]);
        sym.phase_idx.assign(static_cast<std::size_t>(p.L), 0);
        if (random_phases && p.M > 1)
            for (int l = 0; l < p.L; ++l)
                sym.phase_idx[static_cast<std::size_t>(l)] =
                    static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(p.M)));
        stats.samples[i] = peak_sidelobe(sym, p, grid, excl);
    });
    double sum = 0.0;
    for (double v : stats.samples) sum += v;
    stats.mean = sum / static_cast<double>(n_samples);
    return stats;
}

}  // namespace permwave
