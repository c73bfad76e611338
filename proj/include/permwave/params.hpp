#pragma once

#include <stdexcept>

#include "permwave/common.hpp"

namespace permwave {

/// Static design parameters of the waveform family.
///
/// L subpulses of duration T; tone l sits at f0 + n_step*l/T, so adjacent
/// tones are Delta f = n_step/T apart and stay orthogonal over one subpulse.
/// M is the PSK order and E the total waveform energy.
struct WaveformParams {
    int L = 8;
    int M = 4;
    double T = 1.0;
    double f0 = 0.0;
    int n_step = 1;
    double E = 1.0;

    void validate() const {
        if (L < 1) throw std::invalid_argument("WaveformParams: L must be >= 1");
        if (M < 1) throw std::invalid_argument("WaveformParams: M must be >= 1");
        if (!(T > 0.0)) throw std::invalid_argument("WaveformParams: T must be > 0");
        if (n_step < 1) throw std::invalid_argument("WaveformParams: n_step must be >= 1");
        if (!(E > 0.0)) throw std::invalid_argument("WaveformParams: E must be > 0");
    }

    double delta_f() const { return static_cast<double>(n_step) / T; }
    double duration() const { return L * T; }

    /// frequency of tone l (0-based), in Hz
    double tone_freq(int l) const { return f0 + static_cast<double>(n_step) * l / T; }
    /// frequency of tone l in rad/s
    double tone_omega(int l) const { return two_pi * tone_freq(l); }
};

}  // namespace permwave
