#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "permwave/channel.hpp"
#include "permwave/codec.hpp"
#include "permwave/params.hpp"
#include "permwave/quadrature.hpp"

namespace permwave {

/// Gaussian tail Q(x) = P[N(0,1) > x].
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Distance geometry of a symbol pair: d = number of subpulses where the
/// permutations differ, cos_sum = sum of cos(phase difference) over the
/// subpulses where they agree.
struct PairGeometry {
    int d = 0;
    double cos_sum = 0.0;

    static PairGeometry of(const WaveformSymbol& a, const WaveformSymbol& b,
                           const WaveformParams& p) {
        PairGeometry g;
        for (int l = 0; l < p.L; ++l) {
            if (a.perm[static_cast<std::size_t>(l)] != b.perm[static_cast<std::size_t>(l)]) {
                ++g.d;
            } else {
                const int dd = ((b.phase_idx[static_cast<std::size_t>(l)] -
                                 a.phase_idx[static_cast<std::size_t>(l)]) %
                                    p.M +
                                p.M) %
                               p.M;
                g.cos_sum += std::cos(two_pi * dd / p.M);
            }
        }
        return g;
    }
};

/// alpha_ik = sqrt( L N0 / (E (L - cos_sum)) ). Undefined for i = k.
inline double alpha_of_geometry(const PairGeometry& g, const WaveformParams& p, double n0) {
    const double gap = p.L - g.cos_sum;
    if (!(gap > 0.0))
        throw std::domain_error("alpha is undefined for identical symbols (zero distance)");
    return std::sqrt(p.L * n0 / (p.E * gap));
}

inline double alpha(const WaveformSymbol& a, const WaveformSymbol& b, const WaveformParams& p,
                    double n0) {
    return alpha_of_geometry(PairGeometry::of(a, b, p), p, n0);
}

/// AWGN pairwise error probability Q(sqrt(N)/alpha).
inline double pep_awgn(double alpha_ik, int antennas) {
    if (!(alpha_ik > 0.0) || antennas < 1) throw std::domain_error("pep_awgn: bad arguments");
    return q_function(std::sqrt(static_cast<double>(antennas)) / alpha_ik);
}

/// Correlated Rician PEP,
///   (1/pi) Int_0^{pi/2} prod_j [ 2(K+1) a^2 s^2 / (lam_j + 2(K+1) a^2 s^2) ]
///          * exp( -K sum_j |(V^H Delta)_j|^2 / (lam_j + 2(K+1) a^2 s^2) ) dtheta.
inline double pep_rician(double alpha_ik, const ChannelModel& m, double abs_tol = 1e-10) {
    if (m.kind != ChannelKind::rician && m.kind != ChannelKind::rayleigh)
        throw std::domain_error("pep_rician needs a fading channel model");
    const double k = m.rician_k;
    const auto los_sq = m.los_projection_sq();
    const auto& lam = m.eig.values;
    const double a2k = 2.0 * (k + 1.0) * alpha_ik * alpha_ik;
    auto integrand = [&](double theta) {
        const double s2 = std::sin(theta) * std::sin(theta);
        double value = 1.0;
        double expo = 0.0;
        for (std::size_t j = 0; j < lam.size(); ++j) {
            const double denom = lam[j] + a2k * s2;
            value *= a2k * s2 / denom;
            expo += los_sq[j] / denom;
        }
        return value * std::exp(-k * expo);
    };
    return integrate(integrand, 0.0, pi / 2.0, abs_tol) / pi;
}

/// Correlated Rayleigh PEP (the K = 0 special case):
///   (1/pi) Int_0^{pi/2} prod_j 2 a^2 s^2 / (lam_j + 2 a^2 s^2) dtheta.
inline double pep_rayleigh(double alpha_ik, std::span<const double> eigenvalues,
                           double abs_tol = 1e-10) {
    const double a2 = 2.0 * alpha_ik * alpha_ik;
    auto integrand = [&](double theta) {
        const double s2 = std::sin(theta) * std::sin(theta);
        double value = 1.0;
        for (double lam : eigenvalues) value *= a2 * s2 / (lam + a2 * s2);
        return value;
    };
    return integrate(integrand, 0.0, pi / 2.0, abs_tol) / pi;
}

/// PEP of a pair with distance alpha under the given channel.
inline double pep_for_channel(double alpha_ik, const ChannelModel& m) {
    switch (m.kind) {
        case ChannelKind::awgn: return pep_awgn(alpha_ik, m.antennas);
        case ChannelKind::rician: return pep_rician(alpha_ik, m);
        case ChannelKind::rayleigh: return pep_rayleigh(alpha_ik, m.eig.values);
    }
    throw std::logic_error("unknown channel kind");
}

/// One group of symbols sharing the same (d, cos_sum) distance to the
/// reference symbol (identity permutation, all-zero phases).
struct PairSignature {
    int d = 0;
    double cos_sum = 0.0;
    double multiplicity = 0.0;  // exact integer value
};

namespace detail {

/// Count of permutations of {0..L-1} with exactly c fixed points, by
/// exhaustive scan (L <= 8 keeps this under 41k permutations).
inline std::vector<u128> fixed_point_census(int L) {
    if (L > 8) throw std::domain_error("signature aggregation supports L <= 8");
    std::vector<u128> census(static_cast<std::size_t>(L) + 1, 0);
    std::vector<int> perm(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) perm[static_cast<std::size_t>(l)] = l;
    do {
        int fixed = 0;
        for (int l = 0; l < L; ++l)
            if (perm[static_cast<std::size_t>(l)] == l) ++fixed;
        ++census[static_cast<std::size_t>(fixed)];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return census;
}

inline void multisets_rec(int remaining, int next_digit, int M, std::vector<int>& counts,
                          const std::vector<double>& digit_cos, u128 multinomial_num,
                          u128 denom_acc, std::vector<std::pair<double, u128>>& out) {
    if (next_digit == M - 1) {
        counts[static_cast<std::size_t>(M - 1)] = remaining;
        double cs = 0.0;
        const u128 denom = denom_acc * factorial_u128(remaining);
        for (int m = 0; m < M; ++m)
            cs += counts[static_cast<std::size_t>(m)] * digit_cos[static_cast<std::size_t>(m)];
        out.emplace_back(cs, multinomial_num / denom);
        return;
    }
    for (int take = 0; take <= remaining; ++take) {
        counts[static_cast<std::size_t>(next_digit)] = take;
        multisets_rec(remaining - take, next_digit + 1, M, counts, digit_cos, multinomial_num,
                      denom_acc * factorial_u128(take), out);
    }
}

/// All (cos_sum, count) pairs of length-c digit words over {0..M-1}, grouped
/// by digit multiset; count is the multinomial coefficient.
inline std::vector<std::pair<double, u128>> phase_word_groups(int c, int M) {
    std::vector<std::pair<double, u128>> out;
    std::vector<double> digit_cos(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) digit_cos[static_cast<std::size_t>(m)] = std::cos(two_pi * m / M);
    if (M == 1) {
        out.emplace_back(static_cast<double>(c), 1);
        return out;
    }
    std::vector<int> counts(static_cast<std::size_t>(M), 0);
    multisets_rec(c, 0, M, counts, digit_cos, factorial_u128(c), 1, out);
    return out;
}

}  // namespace detail

/// Distance signatures of every symbol k != 1 relative to symbol 1, with
/// multiplicities. A permutation with c fixed points contributes groups
/// (d = L - c, cos_sum over the c matching positions); phases on non-matching
/// positions are free (factor M^d). The all-zero group of the identity
/// permutation is symbol 1 itself and is excluded.
inline std::vector<PairSignature> pair_signatures(const WaveformParams& p) {
    p.validate();
    const auto census = detail::fixed_point_census(p.L);
    std::vector<PairSignature> sigs;
    u128 accounted = 0;
    for (int c = 0; c <= p.L; ++c) {
        const u128 n_perms = census[static_cast<std::size_t>(c)];
        if (n_perms == 0) continue;
        const u128 free_words = pow_u128(static_cast<u128>(p.M), p.L - c);
        for (const auto& [cos_sum, count] : detail::phase_word_groups(c, p.M)) {
            u128 mult = n_perms * count * free_words;
            const bool is_reference = (c == p.L) && (cos_sum == static_cast<double>(p.L));
            if (is_reference) mult -= 1;  // drop symbol 1 itself
            if (mult == 0) continue;
            sigs.push_back({p.L - c, cos_sum, static_cast<double>(mult)});
            accounted += mult;
        }
    }
    if (accounted != total_waveforms(p) - 1)
        throw std::logic_error("pair signature multiplicities do not sum to M_T - 1");
    return sigs;
}

enum class UnionBoundMode { automatic, enumerate, aggregate };

/// Union bound sum_{k=2}^{M_T} P_1k. Enumeration walks all symbols (guarded
/// to M_T <= 1e6); aggregation groups by (d, cos_sum) signature and needs
/// L <= 8. Both give the same value where both run.
inline double union_bound(const WaveformParams& p, const ChannelModel& m, double n0,
                          UnionBoundMode mode = UnionBoundMode::automatic) {
    p.validate();
    const u128 total = total_waveforms(p);
    constexpr u128 enumerate_limit = 1000000;
    if (mode == UnionBoundMode::automatic)
        mode = total <= enumerate_limit ? UnionBoundMode::enumerate : UnionBoundMode::aggregate;

    if (mode == UnionBoundMode::enumerate) {
        if (total > enumerate_limit)
            throw std::domain_error("union_bound: M_T too large to enumerate; use aggregation");
        const WaveformSymbol ref = encode_index(1, p);
        double sum = 0.0;
        for (u128 k = 2; k <= total; ++k)
            sum += pep_for_channel(alpha(ref, encode_index(k, p), p, n0), m);
        return sum;
    }
    double sum = 0.0;
    for (const auto& sig : pair_signatures(p)) {
        const double a = std::sqrt(p.L * n0 / (p.E * (p.L - sig.cos_sum)));
        sum += sig.multiplicity * pep_for_channel(a, m);
    }
    return sum;
}

/// Nearest-neighbour approximation: 2L neighbours at alpha_NN for M > 2,
/// (2L^2 - L) at alpha = sqrt(L N0 / 2E) for M = 2.
inline double nn_approximation(const WaveformParams& p, const ChannelModel& m, double n0) {
    p.validate();
    if (p.M < 2)
        throw std::domain_error("nearest-neighbour approximation needs M >= 2");
    if (p.M > 2) {
        const double a = std::sqrt(p.L * n0 / (p.E * (1.0 - std::cos(two_pi / p.M))));
        return 2.0 * p.L * pep_for_channel(a, m);
    }
    const double a = std::sqrt(p.L * n0 / (2.0 * p.E));
    return (2.0 * p.L * p.L - p.L) * pep_for_channel(a, m);
}

struct GammaSearch {
    int coarse_points = 64;
    double rel_tol = 1e-4;
};

struct NewUpperBound {
    double value = 0.0;
    double gamma = 0.0;
};

namespace detail {

/// F(gamma) + sum over signatures of mult * Int_gamma^inf conditional-PEP
/// mass. The x-integral is closed form per (theta, lambda_j):
///   Int_gamma^inf e^{-x/(2 a^2 s^2)} (b_j/lam_j) e^{-x/lam_j} dx
///     = (b_j/lam_j) e^{-gamma c} / c,  c = 1/(2 a^2 s^2) + 1/lam_j.
inline double new_bound_value(double gamma, const std::vector<PairSignature>& sigs,
                              const WaveformParams& p, const ChannelModel& m,
                              const std::vector<double>& b, double n0) {
    const auto& lam = m.eig.values;
    double value = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j)
        value += b[j] * (1.0 - std::exp(-gamma / lam[j]));  // F(gamma)
    for (const auto& sig : sigs) {
        const double a2 = 2.0 * p.L * n0 / (p.E * (p.L - sig.cos_sum));  // 2 alpha^2
        auto integrand = [&](double theta) {
            const double s2 = std::sin(theta) * std::sin(theta);
            double acc = 0.0;
            for (std::size_t j = 0; j < lam.size(); ++j) {
                const double c = 1.0 / (a2 * s2) + 1.0 / lam[j];
                acc += b[j] / lam[j] * std::exp(-gamma * c) / c;
            }
            return acc;
        };
        value += sig.multiplicity * integrate(integrand, 0.0, pi / 2.0, 1e-10) / pi;
    }
    return value;
}

}  // namespace detail

/// Channel-gain-thresholded upper bound for correlated Rayleigh fading:
///   min_{gamma >= 0} { Pr[gain < gamma] + sum_k Pr[gain >= gamma] * cond. PEP }.
/// gamma = 0 recovers the plain union bound. The value is unimodal in gamma
/// (its derivative is f(gamma) * (1 - sum_k Q(sqrt(gamma)/alpha_k))), so the
/// search runs a coarse grid plus golden section over a bracket that covers
/// both the 99.99th gain percentile and the stationary point; at low SNR the
/// optimal threshold sits far beyond the percentile.
inline NewUpperBound new_upper_bound_rayleigh(const WaveformParams& p, const ChannelModel& m,
                                              double n0, GammaSearch search = {}) {
    p.validate();
    const auto b = detail::rayleigh_gain_weights(m);  // validates model
    const auto sigs = pair_signatures(p);

    // 99.99th percentile of the gain cdf by bisection
    double lo = 0.0, hi = 1.0;
    while (gain_cdf(m, hi) < 0.9999) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gain_cdf(m, mid) < 0.9999 ? lo : hi) = mid;
    }
    double gamma_hi = hi;

    // stationary point: sum_k mult_k Q(sqrt(gamma)/alpha_k) = 1 (monotone in gamma)
    auto q_sum = [&](double gamma) {
        double s = 0.0;
        for (const auto& sig : sigs) {
            const double a = std::sqrt(p.L * n0 / (p.E * (p.L - sig.cos_sum)));
            s += sig.multiplicity * q_function(std::sqrt(gamma) / a);
        }
        return s;
    };
    if (q_sum(0.0) > 1.0) {
        double slo = 0.0, shi = std::max(gamma_hi, 1.0);
        int guard = 0;
        while (q_sum(shi) > 1.0 && guard++ < 200) shi *= 2.0;
        for (int it = 0; it < 200 && (shi - slo) > 1e-9 * shi; ++it) {
            const double mid = 0.5 * (slo + shi);
            (q_sum(mid) > 1.0 ? slo : shi) = mid;
        }
        gamma_hi = std::max(gamma_hi, 1.5 * shi);
    }

    auto value_at = [&](double g) {
        return detail::new_bound_value(g, sigs, p, m, b, n0);
    };

    const int n = std::max(search.coarse_points, 2);
    int best_i = 0;
    double best_v = value_at(0.0);
    std::vector<double> grid_vals(static_cast<std::size_t>(n));
    grid_vals[0] = best_v;
    for (int i = 1; i < n; ++i) {
        const double g = gamma_hi * i / (n - 1);
        grid_vals[static_cast<std::size_t>(i)] = value_at(g);
        if (grid_vals[static_cast<std::size_t>(i)] < best_v) {
            best_v = grid_vals[static_cast<std::size_t>(i)];
            best_i = i;
        }
    }

    // golden-section inside the bracketing cells
    const double phi_inv = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = gamma_hi * std::max(best_i - 1, 0) / (n - 1);
    double d = gamma_hi * std::min(best_i + 1, n - 1) / (n - 1);
    double x1 = d - phi_inv * (d - a);
    double x2 = a + phi_inv * (d - a);
    double f1 = value_at(x1), f2 = value_at(x2);
    while ((d - a) > search.rel_tol * std::max(gamma_hi * 1e-3, d)) {
        if (f1 < f2) {
            d = x2;
            x2 = x1;
            f2 = f1;
            x1 = d - phi_inv * (d - a);
            f1 = value_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi_inv * (d - a);
            f2 = value_at(x2);
        }
    }
    const double gamma_best = 0.5 * (a + d);
    const double refined = value_at(gamma_best);
    if (refined < best_v) {
        best_v = refined;
        return {best_v, gamma_best};
    }
    return {best_v, gamma_hi * best_i / (n - 1)};
}

}  // namespace permwave
