#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "permwave/common.hpp"
#include "permwave/linalg.hpp"
#include "permwave/rng.hpp"

namespace permwave {

enum class ChannelKind { awgn, rayleigh, rician };

inline std::string to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::awgn: return "awgn";
        case ChannelKind::rayleigh: return "rayleigh";
        case ChannelKind::rician: return "rician";
    }
    return "?";
}

/// Receive channel over N antennas:
///   h = sqrt(K/(K+1)) * Delta + sqrt(1/(K+1)) * R_u^{1/2} * u,
/// u ~ CN(0, I), R_u(i,j) = rho^|i-j| (exponential correlation), Delta the
/// unit-modulus LOS vector. Rayleigh is K = 0; AWGN fixes h = all-ones so
/// that h^H h = N. Immutable after construction.
struct ChannelModel {
    ChannelKind kind = ChannelKind::awgn;
    int antennas = 1;
    double rician_k = 0.0;
    double rho = 0.0;
    Matrix corr{0};                 // R_u
    Matrix corr_sqrt{0};            // V diag(sqrt(lambda)) V^T
    EigenDecomposition eig;         // of R_u, eigenvalues descending
    std::vector<std::complex<double>> los;  // Delta

    /// |(V^H Delta)_j|^2 for the Rician PEP integrand.
    std::vector<double> los_projection_sq() const {
        std::vector<double> out(static_cast<std::size_t>(antennas), 0.0);
        for (int j = 0; j < antennas; ++j) {
            std::complex<double> dot(0.0, 0.0);
            for (int i = 0; i < antennas; ++i)
                dot += eig.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                       los[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(j)] = std::norm(dot);
        }
        return out;
    }

    bool eigenvalues_distinct(double rel_gap = 1e-9) const {
        const double scale = eig.values.empty() ? 1.0 : std::abs(eig.values.front());
        for (std::size_t i = 0; i + 1 < eig.values.size(); ++i)
            if (std::abs(eig.values[i] - eig.values[i + 1]) <= rel_gap * scale) return false;
        return true;
    }

    std::string describe() const {
        std::string s = to_string(kind) + ",N=" + std::to_string(antennas);
        if (kind == ChannelKind::rician) s += ",K=" + std::to_string(rician_k);
        if (kind != ChannelKind::awgn) s += ",rho=" + std::to_string(rho);
        return s;
    }
};

/// Optional LOS steering: Delta_i = exp(j*pi*(i-1)*sin(angle)). angle = 0
/// gives the all-ones default.
inline ChannelModel build_model(ChannelKind kind, int antennas, double rician_k, double rho,
                                double los_steering_angle = 0.0) {
    if (antennas < 1) throw std::invalid_argument("channel: antennas must be >= 1");
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("channel: rho must be in [0, 1)");
    if (rician_k < 0.0) throw std::invalid_argument("channel: K must be >= 0");

    ChannelModel m;
    m.kind = kind;
    m.antennas = antennas;
    m.rician_k = kind == ChannelKind::rician ? rician_k : 0.0;
    m.rho = kind == ChannelKind::awgn ? 0.0 : rho;

    const auto n = static_cast<std::size_t>(antennas);
    m.corr = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.corr(i, j) = std::pow(m.rho, std::abs(static_cast<double>(i) -
                                                    static_cast<double>(j)));
    m.eig = jacobi_eigen_symmetric(m.corr);

    m.corr_sqrt = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += m.eig.vectors(i, k) * std::sqrt(std::max(0.0, m.eig.values[k])) *
                       m.eig.vectors(j, k);
            m.corr_sqrt(i, j) = acc;
        }

    m.los.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        m.los[i] = std::polar(1.0, pi * static_cast<double>(i) * std::sin(los_steering_angle));
    return m;
}

/// One block-fading channel draw.
inline std::vector<std::complex<double>> sample_channel(const ChannelModel& m, Rng& rng) {
    const auto n = static_cast<std::size_t>(m.antennas);
    std::vector<std::complex<double>> h(n);
    if (m.kind == ChannelKind::awgn) {
        for (auto& v : h) v = 1.0;
        return h;
    }
    std::vector<std::complex<double>> u(n);
    for (auto& v : u) v = rng.complex_normal();
    const double k = m.rician_k;
    const double los_scale = std::sqrt(k / (k + 1.0));
    const double scatter_scale = std::sqrt(1.0 / (k + 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> mixed(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) mixed += m.corr_sqrt(i, j) * u[j];
        h[i] = los_scale * m.los[i] + scatter_scale * mixed;
    }
    return h;
}

namespace detail {

/// Partial-fraction weights b_j = lambda_j^{N-1} * prod_{n != j} 1/(lambda_j - lambda_n)
/// of the correlated Rayleigh gain distribution. Requires pairwise distinct
/// eigenvalues.
inline std::vector<double> rayleigh_gain_weights(const ChannelModel& m) {
    if (m.kind != ChannelKind::rayleigh)
        throw std::domain_error("gain distribution is only available for Rayleigh models");
    if (!m.eigenvalues_distinct())
        throw std::domain_error(
            "gain distribution needs pairwise distinct correlation eigenvalues "
            "(rho = 0 with N > 1 is not supported)");
    const auto& lam = m.eig.values;
    std::vector<double> b(lam.size());
    for (std::size_t j = 0; j < lam.size(); ++j) {
        double w = std::pow(lam[j], static_cast<double>(lam.size()) - 1.0);
        for (std::size_t k = 0; k < lam.size(); ++k)
            if (k != j) w /= (lam[j] - lam[k]);
        b[j] = w;
    }
    return b;
}

}  // namespace detail

/// pdf of the total gain h^H h under correlated Rayleigh fading:
/// sum_j (b_j / lambda_j) exp(-x / lambda_j) for x >= 0.
inline double gain_pdf(const ChannelModel& m, double x) {
    const auto b = detail::rayleigh_gain_weights(m);
    if (x < 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j)
        acc += b[j] / m.eig.values[j] * std::exp(-x / m.eig.values[j]);
    return acc;
}

/// cdf of h^H h: sum_j b_j (1 - exp(-x / lambda_j)) for x >= 0.
inline double gain_cdf(const ChannelModel& m, double x) {
    const auto b = detail::rayleigh_gain_weights(m);
    if (x < 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j)
        acc += b[j] * (1.0 - std::exp(-x / m.eig.values[j]));
    return acc;
}

}  // namespace permwave
