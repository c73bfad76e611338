#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "permwave/bounds.hpp"
#include "permwave/channel.hpp"
#include "permwave/codec.hpp"
#include "permwave/parallel.hpp"
#include "permwave/params.hpp"
#include "permwave/receiver.hpp"
#include "permwave/rng.hpp"

namespace permwave {

enum class ReceiverKind { efficient, exhaustive, both };

inline std::string to_string(ReceiverKind k) {
    switch (k) {
        case ReceiverKind::efficient: return "efficient";
        case ReceiverKind::exhaustive: return "exhaustive";
        case ReceiverKind::both: return "both";
    }
    return "?";
}

/// One Monte Carlo measurement point. The SNR axis is the per-block average
/// received SNR, snr_db = 10*log10(E/N0); the channel is normalised so that
/// E[h^H h] = N.
struct BlerRecord {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double bler = 0.0;
    double ci95_half_width = 0.0;
    std::uint64_t seed = 0;
    std::string channel;
    std::string receiver;
};

/// 95% Wilson score interval half-width (safer than the normal approximation
/// at small error counts).
inline double wilson_half_width(std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) return 0.0;
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double denom = 1.0 + z * z / n;
    return z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
}

struct BlerConfig {
    WaveformParams params;
    ChannelModel channel;
    std::vector<double> snr_db;
    std::uint64_t max_trials = 1000000;
    std::uint64_t target_errors = 200;
    std::uint64_t seed = 1;
    ReceiverKind receiver = ReceiverKind::efficient;
    unsigned threads = 0;
};

namespace detail {

/// Block fading: one channel draw per transmitted block. Trial t of SNR
/// point s draws everything from the substream (seed, s, t); results are
/// therefore independent of scheduling and worker count.
inline bool run_trial(const BlerConfig& cfg, double n0, std::size_t snr_index,
                      std::uint64_t trial, std::uint64_t mt64) {
    Rng rng = Rng::substream(cfg.seed, snr_index, trial);
    const u128 index = static_cast<u128>(rng.uniform_below(mt64)) + 1;
    const WaveformSymbol sym = encode_index(index, cfg.params);
    const auto h = sample_channel(cfg.channel, rng);
    const Observation obs = observe(sym, h, cfg.params, n0, rng);

    u128 decided;
    if (cfg.receiver == ReceiverKind::efficient) {
        decided = detect_efficient(obs, h, cfg.params);
    } else if (cfg.receiver == ReceiverKind::exhaustive) {
        decided = detect_exhaustive(obs, h, cfg.params);
    } else {
        decided = detect_efficient(obs, h, cfg.params);
        const u128 brute = detect_exhaustive(obs, h, cfg.params);
        if (brute != decided) {
            std::ostringstream msg;
            msg << "receiver mismatch: snr_index=" << snr_index << " trial=" << trial
                << " sent=" << to_string(index) << " efficient=" << to_string(decided)
                << " exhaustive=" << to_string(brute) << " seed=" << cfg.seed;
            throw std::runtime_error(msg.str());
        }
    }
    return decided != index;
}

}  // namespace detail

/// Sweeps the SNR list; per point draws blocks until target_errors errors or
/// max_trials trials, whichever first. The stopping trial is located by a
/// scan in trial order, so the emitted record is exactly what a sequential
/// run would produce.
inline std::vector<BlerRecord> run_bler(const BlerConfig& cfg) {
    cfg.params.validate();
    if (cfg.max_trials < 1) throw std::invalid_argument("max_trials must be >= 1");
    const u128 total = total_waveforms(cfg.params);
    if (total > static_cast<u128>(~static_cast<std::uint64_t>(0)))
        throw std::domain_error("simulation supports M_T up to 2^64-1");
    const auto mt64 = static_cast<std::uint64_t>(total);
    if (cfg.receiver != ReceiverKind::efficient && total > static_cast<u128>(1000000))
        throw std::domain_error("exhaustive receiver needs M_T <= 1e6");

    constexpr std::uint64_t chunk = 2048;
    std::vector<BlerRecord> records;
    records.reserve(cfg.snr_db.size());

    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
        const double n0 = cfg.params.E * std::pow(10.0, -cfg.snr_db[s] / 10.0);
        std::uint64_t done = 0;
        std::uint64_t errors = 0;
        std::vector<char> flags(chunk);
        bool stopped = false;
        while (!stopped && done < cfg.max_trials) {
            const std::uint64_t batch = std::min(chunk, cfg.max_trials - done);
            parallel_for(batch, cfg.threads, [&](std::size_t i) {
                flags[i] = detail::run_trial(cfg, n0, s, done + i, mt64) ? 1 : 0;
            });
            for (std::uint64_t i = 0; i < batch; ++i) {
                if (flags[i]) ++errors;
                if (cfg.target_errors > 0 && errors >= cfg.target_errors) {
                    done += i + 1;
                    stopped = true;
                    break;
                }
            }
            if (!stopped) done += batch;
        }
        BlerRecord rec;
        rec.snr_db = cfg.snr_db[s];
        rec.trials = done;
        rec.errors = errors;
        rec.bler = done > 0 ? static_cast<double>(errors) / static_cast<double>(done) : 0.0;
        rec.ci95_half_width = wilson_half_width(errors, done);
        rec.seed = cfg.seed;
        rec.channel = cfg.channel.describe();
        rec.receiver = to_string(cfg.receiver);
        records.push_back(std::move(rec));
    }
    return records;
}

/// One analytic overlay curve of a reproduction bundle.
struct OverlayCurve {
    std::string name;
    std::vector<double> snr_db;
    std::vector<double> values;
};

struct SimCurve {
    std::string name;
    std::vector<BlerRecord> records;
};

struct ReproduceBundle {
    std::string figure;
    std::string scale;
    std::vector<SimCurve> simulations;
    std::vector<OverlayCurve> overlays;
};

namespace detail {

inline std::vector<double> snr_range(double start, double step, double stop) {
    std::vector<double> v;
    for (double x = start; x <= stop + 1e-9; x += step) v.push_back(x);
    return v;
}

}  // namespace detail

/// Desk-scale substitutes L = 4 where exhaustive enumeration of M_T is
/// needed; paper scale runs the L = 8, M = 4 setup with the analytic
/// overlays that stay tractable there (NN, and the new bound for Rayleigh).
inline ReproduceBundle reproduce_figure(const std::string& figure, const std::string& scale,
                                        std::uint64_t seed, unsigned threads = 0,
                                        std::uint64_t max_trials = 1000000,
                                        std::uint64_t target_errors = 200) {
    const bool desk = scale == "desk";
    if (!desk && scale != "paper")
        throw std::invalid_argument("scale must be 'desk' or 'paper'");

    WaveformParams p;
    p.L = desk ? 4 : 8;
    p.M = 4;

    ReproduceBundle bundle;
    bundle.figure = figure;
    bundle.scale = scale;

    auto simulate = [&](const ChannelModel& ch, const std::vector<double>& snrs,
                        const std::string& name) {
        BlerConfig cfg;
        cfg.params = p;
        cfg.channel = ch;
        cfg.snr_db = snrs;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.max_trials = max_trials;
        cfg.target_errors = target_errors;
        bundle.simulations.push_back({name, run_bler(cfg)});
    };
    auto overlay = [&](const std::string& name, const std::vector<double>& snrs, auto&& fn) {
        OverlayCurve c;
        c.name = name;
        c.snr_db = snrs;
        for (double snr : snrs) c.values.push_back(fn(p.E * std::pow(10.0, -snr / 10.0)));
        bundle.overlays.push_back(std::move(c));
    };

    if (figure == "awgn") {
        const auto snrs = detail::snr_range(0.0, 2.0, 20.0);
        for (int n : {2, 4}) {
            const ChannelModel ch = build_model(ChannelKind::awgn, n, 0.0, 0.0);
            simulate(ch, snrs, "sim_N" + std::to_string(n));
            if (desk)
                overlay("union_N" + std::to_string(n), snrs,
                        [&](double n0) { return union_bound(p, ch, n0); });
            overlay("nn_N" + std::to_string(n), snrs,
                    [&](double n0) { return nn_approximation(p, ch, n0); });
        }
    } else if (figure == "rician") {
        const auto snrs = detail::snr_range(0.0, 2.0, 20.0);
        for (double k : {0.25, 2.5, 10.0}) {
            const ChannelModel ch = build_model(ChannelKind::rician, 2, k, 0.5);
            std::ostringstream label;
            label << "K" << k;
            simulate(ch, snrs, "sim_" + label.str());
            overlay("nn_" + label.str(), snrs,
                    [&](double n0) { return nn_approximation(p, ch, n0); });
        }
    } else if (figure == "rayleigh") {
        const auto snrs = detail::snr_range(-5.0, 2.0, 15.0);
        for (int n : {2, 4}) {
            const ChannelModel ch = build_model(ChannelKind::rayleigh, n, 0.0, 0.5);
            simulate(ch, snrs, "sim_N" + std::to_string(n));
            overlay("new_upper_N" + std::to_string(n), snrs, [&](double n0) {
                return new_upper_bound_rayleigh(p, ch, n0).value;
            });
            overlay("nn_N" + std::to_string(n), snrs,
                    [&](double n0) { return nn_approximation(p, ch, n0); });
        }
    } else {
        throw std::invalid_argument("figure must be one of: awgn, rician, rayleigh");
    }
    return bundle;
}

}  // namespace permwave
