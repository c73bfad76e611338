#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "permwave/codec.hpp"
#include "permwave/params.hpp"

namespace permwave {

/// Noise and bandwidth inputs of the local-accuracy bounds. B is the finite
/// bandwidth occupied by the rectangular subpulse; the closed forms assume
/// B*T is large.
struct FisherParams {
    double n0 = 1.0;  // noise PSD, normalised
    double bandwidth = 10.0;

    void validate() const {
        if (!(n0 > 0.0)) throw std::invalid_argument("FisherParams: N0 must be > 0");
        if (!(bandwidth > 0.0)) throw std::invalid_argument("FisherParams: B must be > 0");
    }

    /// C = 2 / (N0 (1 + N0)); always derived, never cached.
    double C() const { return 2.0 / (n0 * (1.0 + n0)); }
};

/// Symmetric 2x2 Fisher information matrix for (delay, Doppler).
struct Fim {
    double j11 = 0.0;
    double j12 = 0.0;  // = j21
    double j22 = 0.0;

    double det() const { return j11 * j22 - j12 * j12; }
};

/// Delay/Doppler error bounds, in s^2 and (rad/s)^2.
struct Crlb {
    double tau = 0.0;
    double omega = 0.0;
};

namespace detail {

/// sum_{l=0}^{L-2} cos(w0*T + theta_l - theta_{l+1})
inline double adjacent_phase_cos_sum(const WaveformSymbol& sym, const WaveformParams& p) {
    const double w0T = two_pi * p.f0 * p.T;
    double s = 0.0;
    for (int l = 0; l + 1 < p.L; ++l)
        s += std::cos(w0T + phase_radians(sym, p, l) - phase_radians(sym, p, l + 1));
    return s;
}

/// sum_{l=0}^{L-1} (2l+1) * w_l
inline double weighted_omega_sum(const WaveformSymbol& sym, const WaveformParams& p) {
    double s = 0.0;
    for (int l = 0; l < p.L; ++l)
        s += (2.0 * l + 1.0) * p.tone_omega(sym.perm[static_cast<std::size_t>(l)]);
    return s;
}

}  // namespace detail

/// FIM elements:
///   J11 = (2CB/LT) (L - sum cos(w0 T + theta_l - theta_{l+1}))
///   J12 = -(C T^2 / 2) sum (2l+1) w_l
///   J22 = C L^2 T^2 / 12
inline Fim fim(const WaveformSymbol& sym, const WaveformParams& p, const FisherParams& fp) {
    p.validate();
    fp.validate();
    validate_symbol(sym, p);
    const double C = fp.C();
    Fim j;
    j.j11 = 2.0 * C * fp.bandwidth / (p.L * p.T) * (p.L - detail::adjacent_phase_cos_sum(sym, p));
    j.j12 = -C * p.T * p.T / 2.0 * detail::weighted_omega_sum(sym, p);
    j.j22 = C * p.L * p.L * p.T * p.T / 12.0;
    return j;
}

/// Bounds including the delay-Doppler coupling term (the diagonal of the
/// explicit FIM inverse). Requires the 2x2 information matrix to be positive
/// definite, which needs B*T large enough to dominate the coupling.
inline Crlb crlb_full(const WaveformSymbol& sym, const WaveformParams& p,
                      const FisherParams& fp) {
    p.validate();
    fp.validate();
    validate_symbol(sym, p);
    const double C = fp.C();
    const double B = fp.bandwidth;
    const double L = p.L;
    const double T = p.T;
    const double gap = p.L - detail::adjacent_phase_cos_sum(sym, p);
    const double wsum = detail::weighted_omega_sum(sym, p);
    const double denom_tau = 2.0 * L * B * gap - 3.0 * T * T * T * wsum * wsum;
    if (!(denom_tau > 0.0))
        throw std::domain_error(
            "crlb_full: information matrix not positive definite for these (B, T, L); "
            "increase B*T or use crlb_simplified");
    Crlb out;
    out.tau = L * L * T / (C * denom_tau);
    out.omega = 24.0 * B * gap / (C * L * T * T * denom_tau);
    return out;
}

/// Looser bounds with the coupling term dropped:
///   CRLB_tau   = LT / (C 2B (L - sum cos(...)))
///   CRLB_omega = 12 / (C L^2 T^2)
/// When every cos term equals one (all-equal phases with w0*T a multiple of
/// 2*pi) the delay bound diverges; +infinity is returned for it.
inline Crlb crlb_simplified(const WaveformSymbol& sym, const WaveformParams& p,
                            const FisherParams& fp) {
    p.validate();
    fp.validate();
    validate_symbol(sym, p);
    const double C = fp.C();
    const double gap = p.L - detail::adjacent_phase_cos_sum(sym, p);
    Crlb out;
    out.omega = 12.0 / (C * p.L * p.L * p.T * p.T);
    out.tau = gap > 1e-12 ? p.L * p.T / (C * 2.0 * fp.bandwidth * gap)
                          : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace permwave
