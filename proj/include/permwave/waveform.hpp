#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "permwave/codec.hpp"
#include "permwave/params.hpp"

namespace permwave {

struct BasebandSignal {
    std::vector<std::complex<double>> samples;
    double sample_rate = 0.0;  // Hz
    double duration = 0.0;     // seconds, = L*T
};

/// Complex envelope of a symbol at time t. Each subpulse restarts its phase
/// reference: the exponent argument is 2*pi*f_l*(t - l*T) + theta_l.
inline std::complex<double> waveform_at(const WaveformSymbol& sym, const WaveformParams& p,
                                        double t) {
    if (t < 0.0 || t >= p.duration()) return {0.0, 0.0};
    int l = static_cast<int>(t / p.T);
    if (l >= p.L) l = p.L - 1;
    const double amp = std::sqrt(p.E / (p.L * p.T));
    const double arg = p.tone_omega(sym.perm[static_cast<std::size_t>(l)]) * (t - l * p.T) +
                       phase_radians(sym, p, l);
    return std::polar(amp, arg);
}

/// Samples the complex envelope at rate oversampling*L*n_step/T.
inline BasebandSignal synthesize(const WaveformSymbol& sym, const WaveformParams& p,
                                 int oversampling = 16) {
    p.validate();
    validate_symbol(sym, p);
    if (oversampling < 2) throw std::domain_error("oversampling factor must be >= 2");
    BasebandSignal sig;
    sig.sample_rate = static_cast<double>(oversampling) * p.L * p.n_step / p.T;
    sig.duration = p.duration();
    const std::size_t count =
        static_cast<std::size_t>(oversampling) * static_cast<std::size_t>(p.L) *
        static_cast<std::size_t>(p.L) * static_cast<std::size_t>(p.n_step);
    sig.samples.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        sig.samples.push_back(waveform_at(sym, p, static_cast<double>(k) / sig.sample_rate));
    return sig;
}

/// Orthogonal-basis view of a symbol: per subpulse l the only excited tone
/// dimension is perm[l], with coefficient sqrt(E/L)*exp(j*theta_l). This is
/// the sufficient-statistic domain the receiver works in.
struct BasisSymbolMatrix {
    int L = 0;
    int M = 0;
    double amplitude = 0.0;  // sqrt(E/L)
    std::vector<int> perm;
    std::vector<int> phase_idx;

    /// complex entry of the L x L one-hot matrix at (tone, subpulse)
    std::complex<double> entry(int tone, int subpulse) const {
        if (perm[static_cast<std::size_t>(subpulse)] != tone) return {0.0, 0.0};
        return std::polar(amplitude,
                          two_pi * phase_idx[static_cast<std::size_t>(subpulse)] / M);
    }
};

inline BasisSymbolMatrix to_basis(const WaveformSymbol& sym, const WaveformParams& p) {
    validate_symbol(sym, p);
    return BasisSymbolMatrix{p.L, p.M, std::sqrt(p.E / p.L), sym.perm, sym.phase_idx};
}

}  // namespace permwave
