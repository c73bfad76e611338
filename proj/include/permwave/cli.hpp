#pragma once

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permwave/ambiguity.hpp"
#include "permwave/bounds.hpp"
#include "permwave/channel.hpp"
#include "permwave/codec.hpp"
#include "permwave/fisher.hpp"
#include "permwave/io.hpp"
#include "permwave/sim.hpp"
#include "permwave/waveform.hpp"

namespace permwave::cli {

inline constexpr const char* snr_definition =
    "snr_db = 10*log10(E/N0); channel normalised so that E[h^H h] = N";

namespace detail {

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) throw std::invalid_argument("empty entry in list: " + text);
        out.push_back(std::stoi(cell));
    }
    return out;
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

/// "start:step:stop" (inclusive) or a single value.
inline std::vector<double> parse_snr_range(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) return {std::stod(text)};
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("SNR range must be start:step:stop, got " + text);
    const double start = std::stod(text.substr(0, c1));
    const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double stop = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0)) throw std::invalid_argument("SNR step must be positive");
    std::vector<double> out;
    for (double x = start; x <= stop + 1e-9; x += step) out.push_back(x);
    return out;
}

struct WaveformFlags {
    int L = 8;
    int M = 4;
    double T = 1.0;
    double f0 = 0.0;
    int n_step = 1;
    double E = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--L", L, "subpulse / tone count")->capture_default_str();
        cmd->add_option("--M", M, "PSK order")->capture_default_str();
        cmd->add_option("--T", T, "subpulse duration [s]")->capture_default_str();
        cmd->add_option("--f0", f0, "first tone frequency [Hz]")->capture_default_str();
        cmd->add_option("--nstep", n_step, "tone spacing numerator n, Delta f = n/T [Hz]")
            ->capture_default_str();
        cmd->add_option("--E", E, "total waveform energy [J]")->capture_default_str();
    }

    WaveformParams params() const { return {L, M, T, f0, n_step, E}; }

    void to_json(nlohmann::json& j) const {
        j["L"] = L;
        j["M"] = M;
        j["T"] = T;
        j["f0"] = f0;
        j["nstep"] = n_step;
        j["E"] = E;
    }

    void to_argv(std::vector<std::string>& argv) const {
        argv.insert(argv.end(), {"--L", std::to_string(L), "--M", std::to_string(M), "--T",
                                 io::fmt(T), "--f0", io::fmt(f0), "--nstep",
                                 std::to_string(n_step), "--E", io::fmt(E)});
    }
};

struct SymbolFlags {
    std::string index = "1";
    std::string perm;
    std::string phases;

    void attach(CLI::App* cmd) {
        cmd->add_option("--index", index, "1-based message index")->capture_default_str();
        cmd->add_option("--perm", perm, "explicit tone permutation, e.g. 2,0,1,3");
        cmd->add_option("--phases", phases, "explicit phase digits (0..M-1 each)");
    }

    WaveformSymbol symbol(const WaveformParams& p) const {
        if (perm.empty() && phases.empty()) return encode_index(parse_u128(index), p);
        WaveformSymbol sym;
        sym.perm = perm.empty() ? std::vector<int>{} : parse_int_list(perm);
        if (sym.perm.empty())
            for (int l = 0; l < p.L; ++l) sym.perm.push_back(l);
        sym.phase_idx = phases.empty() ? std::vector<int>(static_cast<std::size_t>(p.L), 0)
                                       : parse_int_list(phases);
        sym.index = decode_symbol(sym, p);
        return sym;
    }

    void to_json(nlohmann::json& j, const WaveformParams& p) const {
        const WaveformSymbol sym = symbol(p);
        j["index"] = to_string(sym.index);
        j["perm"] = join_ints(sym.perm);
        j["phases"] = join_ints(sym.phase_idx);
    }
};

struct ChannelFlags {
    std::string kind = "awgn";
    int antennas = 2;
    double rician_k = 1.0;
    double rho = 0.5;
    double los_angle = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--channel", kind, "channel model: awgn | rayleigh | rician")
            ->check(CLI::IsMember({"awgn", "rayleigh", "rician"}))
            ->capture_default_str();
        cmd->add_option("--antennas,--N", antennas, "receive antenna count N")
            ->capture_default_str();
        cmd->add_option("--K", rician_k, "Rician factor (LOS/scatter power ratio)")
            ->capture_default_str();
        cmd->add_option("--rho", rho, "antenna correlation coefficient in [0,1)")
            ->capture_default_str();
        cmd->add_option("--los-angle", los_angle, "LOS steering angle [rad]; 0 = all-ones")
            ->capture_default_str();
    }

    ChannelModel model() const {
        ChannelKind k = kind == "awgn"      ? ChannelKind::awgn
                        : kind == "rician" ? ChannelKind::rician
                                           : ChannelKind::rayleigh;
        return build_model(k, antennas, k == ChannelKind::rician ? rician_k : 0.0,
                           k == ChannelKind::awgn ? 0.0 : rho, los_angle);
    }

    void to_json(nlohmann::json& j) const {
        j["channel"] = kind;
        j["antennas"] = antennas;
        j["K"] = rician_k;
        j["rho"] = rho;
        j["los_angle"] = los_angle;
    }

    void to_argv(std::vector<std::string>& argv) const {
        argv.insert(argv.end(),
                    {"--channel", kind, "--antennas", std::to_string(antennas), "--K",
                     io::fmt(rician_k), "--rho", io::fmt(rho), "--los-angle", io::fmt(los_angle)});
    }
};

/// Run manifest: the full resolved configuration, a git-style content hash of
/// it, and the list of emitted files. Re-running `permwave <argv_resolved>`
/// reproduces every output byte for byte.
inline void write_manifest(const std::string& out_prefix, const std::string& command,
                           const nlohmann::json& config, const std::vector<std::string>& argv,
                           const std::vector<std::string>& outputs) {
    nlohmann::json manifest;
    manifest["tool"] = "permwave";
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["argv_resolved"] = argv;
    manifest["config_hash"] = io::git_blob_hash(config.dump());
    manifest["outputs"] = outputs;
    manifest["snr_definition"] = snr_definition;
    io::write_text_file(out_prefix + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace detail

/// Entry point behind main(); returns the process exit code
/// (0 ok, 1 runtime failure, 2 usage error).
inline int run(int argc, const char* const* argv) {
    CLI::App app{
        "permwave: phase-modulated frequency-permutation waveforms - codec, ambiguity "
        "functions, CRLBs, fading-channel error bounds, ML receivers and Monte Carlo BLER"};
    app.require_subcommand(1);

    int exit_code = 0;
    std::ostream& outs = std::cout;

    // ---------------------------------------------------------------- encode
    auto* encode_cmd = app.add_subcommand("encode", "map a message index to a waveform symbol");
    auto enc_wf = std::make_shared<detail::WaveformFlags>();
    auto enc_index = std::make_shared<std::string>("1");
    enc_wf->attach(encode_cmd);
    encode_cmd->add_option("--index", *enc_index, "1-based message index")->capture_default_str();
    encode_cmd->callback([enc_wf, enc_index, &outs] {
        const WaveformParams p = enc_wf->params();
        const WaveformSymbol sym = encode_index(parse_u128(*enc_index), p);
        outs << "index " << to_string(sym.index) << "\n";
        outs << "perm " << detail::join_ints(sym.perm) << "\n";
        outs << "phases " << detail::join_ints(sym.phase_idx) << "\n";
    });

    // ---------------------------------------------------------------- decode
    auto* decode_cmd = app.add_subcommand("decode", "map a waveform symbol back to its index");
    auto dec_wf = std::make_shared<detail::WaveformFlags>();
    auto dec_perm = std::make_shared<std::string>();
    auto dec_phases = std::make_shared<std::string>();
    dec_wf->attach(decode_cmd);
    decode_cmd->add_option("--perm", *dec_perm, "tone permutation, e.g. 0,1,2,3")->required();
    decode_cmd->add_option("--phases", *dec_phases, "phase digits, e.g. 0,0,0,0")->required();
    decode_cmd->callback([dec_wf, dec_perm, dec_phases, &outs] {
        const WaveformParams p = dec_wf->params();
        WaveformSymbol sym;
        sym.perm = detail::parse_int_list(*dec_perm);
        sym.phase_idx = detail::parse_int_list(*dec_phases);
        outs << "index " << to_string(decode_symbol(sym, p)) << "\n";
    });

    // ----------------------------------------------------------------- synth
    auto* synth_cmd = app.add_subcommand("synth", "sample the complex baseband waveform to CSV");
    auto syn_wf = std::make_shared<detail::WaveformFlags>();
    auto syn_sym = std::make_shared<detail::SymbolFlags>();
    auto syn_os = std::make_shared<int>(16);
    auto syn_out = std::make_shared<std::string>();
    syn_wf->attach(synth_cmd);
    syn_sym->attach(synth_cmd);
    synth_cmd->add_option("--oversampling", *syn_os, "samples per tone cycle budget (>= 2)")
        ->capture_default_str();
    synth_cmd->add_option("--out", *syn_out, "output path prefix")->required();
    synth_cmd->callback([syn_wf, syn_sym, syn_os, syn_out] {
        const WaveformParams p = syn_wf->params();
        const WaveformSymbol sym = syn_sym->symbol(p);
        const BasebandSignal sig = synthesize(sym, p, *syn_os);
        io::Csv csv;
        csv.header({"t", "re", "im"});
        for (std::size_t k = 0; k < sig.samples.size(); ++k)
            csv.row({io::fmt(static_cast<double>(k) / sig.sample_rate),
                     io::fmt(sig.samples[k].real()), io::fmt(sig.samples[k].imag())});
        io::write_text_file(*syn_out + ".csv", csv.str());
        nlohmann::json config;
        syn_wf->to_json(config);
        syn_sym->to_json(config, p);
        config["oversampling"] = *syn_os;
        std::vector<std::string> argv_res{"synth"};
        syn_wf->to_argv(argv_res);
        argv_res.insert(argv_res.end(), {"--index", to_string(sym.index), "--oversampling",
                                         std::to_string(*syn_os), "--out", *syn_out});
        detail::write_manifest(*syn_out, "synth", config, argv_res, {*syn_out + ".csv"});
    });

    // -------------------------------------------------------------------- af
    auto* af_cmd = app.add_subcommand("af", "ambiguity surface |A(tau, omega)| to CSV");
    auto af_wf = std::make_shared<detail::WaveformFlags>();
    auto af_sym = std::make_shared<detail::SymbolFlags>();
    auto af_points = std::make_shared<int>(512);
    auto af_threads = std::make_shared<unsigned>(0);
    auto af_out = std::make_shared<std::string>();
    af_wf->attach(af_cmd);
    af_sym->attach(af_cmd);
    af_cmd->add_option("--grid-points", *af_points, "points per axis")->capture_default_str();
    af_cmd->add_option("--threads", *af_threads, "worker threads (0 = auto)")
        ->envname("PERMWAVE_THREADS")
        ->capture_default_str();
    af_cmd->add_option("--out", *af_out, "output path prefix")->required();
    af_cmd->callback([af_wf, af_sym, af_points, af_threads, af_out] {
        const WaveformParams p = af_wf->params();
        const WaveformSymbol sym = af_sym->symbol(p);
        const GridSpec grid = GridSpec::default_for(p, *af_points);
        const AmbiguitySurface surf = ambiguity_surface(sym, p, grid, *af_threads);
        io::Csv csv;
        csv.header({"tau", "omega", "value"});
        for (std::size_t i = 0; i < surf.tau_grid.size(); ++i)
            for (std::size_t j = 0; j < surf.omega_grid.size(); ++j)
                csv.row({io::fmt(surf.tau_grid[i]), io::fmt(surf.omega_grid[j]),
                         io::fmt(surf.at(i, j))});
        io::write_text_file(*af_out + ".csv", csv.str());
        nlohmann::json config;
        af_wf->to_json(config);
        af_sym->to_json(config, p);
        config["grid_points"] = *af_points;
        std::vector<std::string> argv_res{"af"};
        af_wf->to_argv(argv_res);
        argv_res.insert(argv_res.end(), {"--index", to_string(sym.index), "--grid-points",
                                         std::to_string(*af_points), "--out", *af_out});
        detail::write_manifest(*af_out, "af", config, argv_res, {*af_out + ".csv"});
    });

    // --------------------------------------------------------------- af-cuts
    auto* cuts_cmd = app.add_subcommand("af-cuts", "zero-Doppler and zero-delay cuts to CSV");
    auto cut_wf = std::make_shared<detail::WaveformFlags>();
    auto cut_sym = std::make_shared<detail::SymbolFlags>();
    auto cut_points = std::make_shared<int>(1024);
    auto cut_out = std::make_shared<std::string>();
    cut_wf->attach(cuts_cmd);
    cut_sym->attach(cuts_cmd);
    cuts_cmd->add_option("--points", *cut_points, "points per cut")->capture_default_str();
    cuts_cmd->add_option("--out", *cut_out, "output path prefix")->required();
    cuts_cmd->callback([cut_wf, cut_sym, cut_points, cut_out] {
        const WaveformParams p = cut_wf->params();
        const WaveformSymbol sym = cut_sym->symbol(p);
        const GridSpec grid = GridSpec::default_for(p, *cut_points);
        const auto taus = grid.tau_points();
        const auto omegas = grid.omega_points();
        const auto doppler_cut = zero_doppler_cut(sym, p, taus);
        const auto delay_cut = zero_delay_cut(p, omegas);
        io::Csv csv_d;
        csv_d.header({"tau", "value"});
        for (std::size_t i = 0; i < taus.size(); ++i)
            csv_d.row({io::fmt(taus[i]), io::fmt(doppler_cut[i])});
        io::write_text_file(*cut_out + "_zero_doppler.csv", csv_d.str());
        io::Csv csv_w;
        csv_w.header({"omega", "value"});
        for (std::size_t i = 0; i < omegas.size(); ++i)
            csv_w.row({io::fmt(omegas[i]), io::fmt(delay_cut[i])});
        io::write_text_file(*cut_out + "_zero_delay.csv", csv_w.str());
        nlohmann::json config;
        cut_wf->to_json(config);
        cut_sym->to_json(config, p);
        config["points"] = *cut_points;
        std::vector<std::string> argv_res{"af-cuts"};
        cut_wf->to_argv(argv_res);
        argv_res.insert(argv_res.end(), {"--index", to_string(sym.index), "--points",
                                         std::to_string(*cut_points), "--out", *cut_out});
        detail::write_manifest(*cut_out, "af-cuts", config, argv_res,
                               {*cut_out + "_zero_doppler.csv", *cut_out + "_zero_delay.csv"});
    });

    // ------------------------------------------------------------- psl-stats
    auto* psl_cmd =
        app.add_subcommand("psl-stats", "peak-sidelobe statistics over random waveforms");
    auto psl_wf = std::make_shared<detail::WaveformFlags>();
    auto psl_samples = std::make_shared<int>(2000);
    auto psl_seed = std::make_shared<std::uint64_t>(1);
    auto psl_points = std::make_shared<int>(512);
    auto psl_threads = std::make_shared<unsigned>(0);
    auto psl_no_phases = std::make_shared<bool>(false);
    auto psl_out = std::make_shared<std::string>();
    psl_wf->attach(psl_cmd);
    psl_cmd->add_option("--samples", *psl_samples, "number of random waveforms")
        ->capture_default_str();
    psl_cmd->add_option("--seed", *psl_seed, "RNG seed")->capture_default_str();
    psl_cmd->add_option("--grid-points", *psl_points, "points per grid axis")
        ->capture_default_str();
    psl_cmd->add_flag("--no-phase-modulation", *psl_no_phases,
                      "force all phases to zero (frequency permutation only)");
    psl_cmd->add_option("--threads", *psl_threads, "worker threads (0 = auto)")
        ->envname("PERMWAVE_THREADS")
        ->capture_default_str();
    psl_cmd->add_option("--out", *psl_out, "output path prefix")->required();
    psl_cmd->callback([psl_wf, psl_samples, psl_seed, psl_points, psl_threads, psl_no_phases,
                       psl_out] {
        const WaveformParams p = psl_wf->params();
        const GridSpec grid = GridSpec::default_for(p, *psl_points);
        const ExclusionSpec excl = ExclusionSpec::default_for(p);
        const PslStats stats = psl_statistics(p, *psl_samples, *psl_seed, grid, excl,
                                              !*psl_no_phases, *psl_threads);
        io::Csv csv;
        csv.header({"sample", "psl"});
        for (std::size_t i = 0; i < stats.samples.size(); ++i)
            csv.row({io::fmt(static_cast<std::uint64_t>(i)), io::fmt(stats.samples[i])});
        io::write_text_file(*psl_out + "_samples.csv", csv.str());

        std::vector<double> sorted = stats.samples;
        std::sort(sorted.begin(), sorted.end());
        nlohmann::json summary;
        summary["mean"] = stats.mean;
        summary["samples"] = *psl_samples;
        summary["phase_modulation"] = !*psl_no_phases;
        nlohmann::json levels = nlohmann::json::array();
        nlohmann::json probs = nlohmann::json::array();
        for (int i = 0; i <= 200; ++i) {
            const double level = i / 200.0;
            const auto count = std::upper_bound(sorted.begin(), sorted.end(), level) -
                               sorted.begin();
            levels.push_back(level);
            probs.push_back(static_cast<double>(count) / static_cast<double>(sorted.size()));
        }
        summary["cdf"] = {{"levels", levels}, {"probabilities", probs}};
        io::write_text_file(*psl_out + "_summary.json", summary.dump(2) + "\n");

        nlohmann::json config;
        psl_wf->to_json(config);
        config["samples"] = *psl_samples;
        config["seed"] = *psl_seed;
        config["grid_points"] = *psl_points;
        config["phase_modulation"] = !*psl_no_phases;
        std::vector<std::string> argv_res{"psl-stats"};
        psl_wf->to_argv(argv_res);
        argv_res.insert(argv_res.end(),
                        {"--samples", std::to_string(*psl_samples), "--seed",
                         std::to_string(*psl_seed), "--grid-points", std::to_string(*psl_points)});
        if (*psl_no_phases) argv_res.push_back("--no-phase-modulation");
        argv_res.insert(argv_res.end(), {"--out", *psl_out});
        detail::write_manifest(*psl_out, "psl-stats", config, argv_res,
                               {*psl_out + "_samples.csv", *psl_out + "_summary.json"});
    });

    // ------------------------------------------------------------------ crlb
    auto* crlb_cmd = app.add_subcommand("crlb", "delay/Doppler CRLBs over an SNR sweep");
    auto cr_wf = std::make_shared<detail::WaveformFlags>();
    auto cr_sym = std::make_shared<detail::SymbolFlags>();
    auto cr_bandwidth = std::make_shared<double>(0.0);
    auto cr_snr = std::make_shared<std::string>("0:2:20");
    auto cr_out = std::make_shared<std::string>();
    cr_wf->attach(crlb_cmd);
    cr_sym->attach(crlb_cmd);
    crlb_cmd->add_option("--B", *cr_bandwidth, "subpulse bandwidth [Hz] (0 = default 10/T)")
        ->capture_default_str();
    crlb_cmd->add_option("--snr", *cr_snr, "SNR sweep, start:step:stop [dB]; SNR = 1/N0")
        ->capture_default_str();
    crlb_cmd->add_option("--out", *cr_out, "output path prefix")->required();
    crlb_cmd->callback([cr_wf, cr_sym, cr_bandwidth, cr_snr, cr_out] {
        const WaveformParams p = cr_wf->params();
        const WaveformSymbol sym = cr_sym->symbol(p);
        const double bandwidth = *cr_bandwidth > 0.0 ? *cr_bandwidth : 10.0 / p.T;
        const auto snrs = detail::parse_snr_range(*cr_snr);
        bool full_valid = true;
        io::Csv csv("CRLB vs SNR; snr_db = 10*log10(1/N0)");
        csv.header({"snr_db", "crlb_tau_full", "crlb_tau_simpl", "crlb_omega_full",
                    "crlb_omega_simpl"});
        for (double snr : snrs) {
            const FisherParams fp{std::pow(10.0, -snr / 10.0), bandwidth};
            const Crlb simple = crlb_simplified(sym, p, fp);
            std::string tau_full, omega_full;
            try {
                const Crlb full = crlb_full(sym, p, fp);
                tau_full = io::fmt(full.tau);
                omega_full = io::fmt(full.omega);
            } catch (const std::domain_error&) {
                full_valid = false;
            }
            csv.row({io::fmt(snr), tau_full, io::fmt(simple.tau), omega_full,
                     io::fmt(simple.omega)});
        }
        if (!full_valid)
            std::cerr << "warning: full CRLB undefined at B*T = " << io::fmt(bandwidth * p.T)
                      << " (information matrix not positive definite); emitted empty fields\n";
        io::write_text_file(*cr_out + ".csv", csv.str());
        nlohmann::json config;
        cr_wf->to_json(config);
        cr_sym->to_json(config, p);
        config["B"] = bandwidth;
        config["snr"] = *cr_snr;
        std::vector<std::string> argv_res{"crlb"};
        cr_wf->to_argv(argv_res);
        argv_res.insert(argv_res.end(), {"--index", to_string(sym.index), "--B",
                                         io::fmt(bandwidth), "--snr", *cr_snr, "--out", *cr_out});
        detail::write_manifest(*cr_out, "crlb", config, argv_res, {*cr_out + ".csv"});
    });

    // ------------------------------------------------------------------ bler
    auto* bler_cmd = app.add_subcommand("bler", "Monte Carlo block error rate sweep");
    auto bl_wf = std::make_shared<detail::WaveformFlags>();
    auto bl_ch = std::make_shared<detail::ChannelFlags>();
    auto bl_snr = std::make_shared<std::string>("0:2:20");
    auto bl_seed = std::make_shared<std::uint64_t>(1);
    auto bl_max_trials = std::make_shared<std::uint64_t>(1000000);
    auto bl_target_errors = std::make_shared<std::uint64_t>(200);
    auto bl_receiver = std::make_shared<std::string>("efficient");
    auto bl_threads = std::make_shared<unsigned>(0);
    auto bl_out = std::make_shared<std::string>();
    bl_wf->attach(bler_cmd);
    bl_ch->attach(bler_cmd);
    bler_cmd->add_option("--snr", *bl_snr, "SNR sweep start:step:stop [dB]")
        ->capture_default_str();
    bler_cmd->add_option("--seed", *bl_seed, "RNG seed")->capture_default_str();
    bler_cmd->add_option("--max-trials", *bl_max_trials, "trial cap per SNR point")
        ->capture_default_str();
    bler_cmd->add_option("--target-errors", *bl_target_errors,
                         "stop a point after this many block errors (0 = never)")
        ->capture_default_str();
    bler_cmd->add_option("--receiver", *bl_receiver, "efficient | exhaustive | both")
        ->check(CLI::IsMember({"efficient", "exhaustive", "both"}))
        ->capture_default_str();
    bler_cmd->add_option("--threads", *bl_threads, "worker threads (0 = auto)")
        ->envname("PERMWAVE_THREADS")
        ->capture_default_str();
    bler_cmd->add_option("--out", *bl_out, "output path prefix")->required();
    bler_cmd->callback([bl_wf, bl_ch, bl_snr, bl_seed, bl_max_trials, bl_target_errors,
                        bl_receiver, bl_threads, bl_out] {
        BlerConfig cfg;
        cfg.params = bl_wf->params();
        cfg.channel = bl_ch->model();
        cfg.snr_db = detail::parse_snr_range(*bl_snr);
        cfg.seed = *bl_seed;
        cfg.max_trials = *bl_max_trials;
        cfg.target_errors = *bl_target_errors;
        cfg.threads = *bl_threads;
        cfg.receiver = *bl_receiver == "efficient"    ? ReceiverKind::efficient
                       : *bl_receiver == "exhaustive" ? ReceiverKind::exhaustive
                                                      : ReceiverKind::both;
        const auto records = run_bler(cfg);
        io::Csv csv(std::string("average received SNR: ") + snr_definition);
        csv.header({"snr_db", "trials", "errors", "bler", "ci95"});
        for (const auto& r : records)
            csv.row({io::fmt(r.snr_db), io::fmt(r.trials), io::fmt(r.errors), io::fmt(r.bler),
                     io::fmt(r.ci95_half_width)});
        io::write_text_file(*bl_out + ".csv", csv.str());
        nlohmann::json config;
        bl_wf->to_json(config);
        bl_ch->to_json(config);
        config["snr"] = *bl_snr;
        config["seed"] = *bl_seed;
        config["max_trials"] = *bl_max_trials;
        config["target_errors"] = *bl_target_errors;
        config["receiver"] = *bl_receiver;
        std::vector<std::string> argv_res{"bler"};
        bl_wf->to_argv(argv_res);
        bl_ch->to_argv(argv_res);
        argv_res.insert(argv_res.end(),
                        {"--snr", *bl_snr, "--seed", std::to_string(*bl_seed), "--max-trials",
                         std::to_string(*bl_max_trials), "--target-errors",
                         std::to_string(*bl_target_errors), "--receiver", *bl_receiver, "--out",
                         *bl_out});
        detail::write_manifest(*bl_out, "bler", config, argv_res, {*bl_out + ".csv"});
    });

    // ---------------------------------------------------------------- bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "analytic error bounds over an SNR sweep");
    auto bo_wf = std::make_shared<detail::WaveformFlags>();
    auto bo_ch = std::make_shared<detail::ChannelFlags>();
    auto bo_snr = std::make_shared<std::string>("0:2:20");
    auto bo_mode = std::make_shared<std::string>("auto");
    auto bo_out = std::make_shared<std::string>();
    bo_wf->attach(bounds_cmd);
    bo_ch->attach(bounds_cmd);
    bounds_cmd->add_option("--snr", *bo_snr, "SNR sweep start:step:stop [dB]")
        ->capture_default_str();
    bounds_cmd->add_option("--mode", *bo_mode, "union bound mode: auto | enumerate | aggregate")
        ->check(CLI::IsMember({"auto", "enumerate", "aggregate"}))
        ->capture_default_str();
    bounds_cmd->add_option("--out", *bo_out, "output path prefix")->required();
    bounds_cmd->callback([bo_wf, bo_ch, bo_snr, bo_mode, bo_out] {
        const WaveformParams p = bo_wf->params();
        const ChannelModel ch = bo_ch->model();
        const auto snrs = detail::parse_snr_range(*bo_snr);
        const UnionBoundMode mode = *bo_mode == "enumerate"   ? UnionBoundMode::enumerate
                                    : *bo_mode == "aggregate" ? UnionBoundMode::aggregate
                                                              : UnionBoundMode::automatic;
        bool union_ok = true, nn_ok = true, new_ok = true;
        io::Csv csv(std::string("average received SNR: ") + snr_definition);
        csv.header({"snr_db", "union", "nn", "new_upper"});
        for (double snr : snrs) {
            const double n0 = p.E * std::pow(10.0, -snr / 10.0);
            std::string u, nn, nb;
            try {
                u = io::fmt(union_bound(p, ch, n0, mode));
            } catch (const std::exception&) {
                union_ok = false;
            }
            try {
                nn = io::fmt(nn_approximation(p, ch, n0));
            } catch (const std::exception&) {
                nn_ok = false;
            }
            if (ch.kind == ChannelKind::rayleigh) {
                try {
                    nb = io::fmt(new_upper_bound_rayleigh(p, ch, n0).value);
                } catch (const std::exception&) {
                    new_ok = false;
                }
            }
            csv.row({io::fmt(snr), u, nn, nb});
        }
        if (!union_ok) std::cerr << "warning: union bound not computable; empty fields\n";
        if (!nn_ok) std::cerr << "warning: NN approximation not computable; empty fields\n";
        if (ch.kind == ChannelKind::rayleigh && !new_ok)
            std::cerr << "warning: new upper bound not computable; empty fields\n";
        io::write_text_file(*bo_out + ".csv", csv.str());
        nlohmann::json config;
        bo_wf->to_json(config);
        bo_ch->to_json(config);
        config["snr"] = *bo_snr;
        config["mode"] = *bo_mode;
        std::vector<std::string> argv_res{"bounds"};
        bo_wf->to_argv(argv_res);
        bo_ch->to_argv(argv_res);
        argv_res.insert(argv_res.end(), {"--snr", *bo_snr, "--mode", *bo_mode, "--out", *bo_out});
        detail::write_manifest(*bo_out, "bounds", config, argv_res, {*bo_out + ".csv"});
    });

    // ------------------------------------------------------------- reproduce
    auto* rep_cmd = app.add_subcommand(
        "reproduce", "rebuild a BLER figure bundle (simulation + analytic overlays)");
    auto rep_fig = std::make_shared<std::string>("awgn");
    auto rep_scale = std::make_shared<std::string>("desk");
    auto rep_seed = std::make_shared<std::uint64_t>(1);
    auto rep_threads = std::make_shared<unsigned>(0);
    auto rep_max_trials = std::make_shared<std::uint64_t>(1000000);
    auto rep_target_errors = std::make_shared<std::uint64_t>(200);
    auto rep_out = std::make_shared<std::string>();
    rep_cmd->add_option("--figure", *rep_fig, "awgn | rician | rayleigh")
        ->check(CLI::IsMember({"awgn", "rician", "rayleigh"}))
        ->capture_default_str();
    rep_cmd->add_option("--scale", *rep_scale, "desk (L=4) | paper (L=8)")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->capture_default_str();
    rep_cmd->add_option("--seed", *rep_seed, "RNG seed")->capture_default_str();
    rep_cmd->add_option("--max-trials", *rep_max_trials, "trial cap per SNR point")
        ->capture_default_str();
    rep_cmd->add_option("--target-errors", *rep_target_errors, "per-point stop criterion")
        ->capture_default_str();
    rep_cmd->add_option("--threads", *rep_threads, "worker threads (0 = auto)")
        ->envname("PERMWAVE_THREADS")
        ->capture_default_str();
    rep_cmd->add_option("--out", *rep_out, "output path prefix")->required();
    rep_cmd->callback([rep_fig, rep_scale, rep_seed, rep_threads, rep_max_trials,
                       rep_target_errors, rep_out] {
        const ReproduceBundle bundle = reproduce_figure(*rep_fig, *rep_scale, *rep_seed,
                                                        *rep_threads, *rep_max_trials,
                                                        *rep_target_errors);
        std::vector<std::string> outputs;
        for (const auto& simc : bundle.simulations) {
            io::Csv csv(std::string("average received SNR: ") + snr_definition);
            csv.header({"snr_db", "trials", "errors", "bler", "ci95"});
            for (const auto& r : simc.records)
                csv.row({io::fmt(r.snr_db), io::fmt(r.trials), io::fmt(r.errors),
                         io::fmt(r.bler), io::fmt(r.ci95_half_width)});
            const std::string path = *rep_out + "_" + bundle.figure + "_" + bundle.scale + "_" +
                                     simc.name + ".csv";
            io::write_text_file(path, csv.str());
            outputs.push_back(path);
        }
        if (!bundle.overlays.empty()) {
            io::Csv csv(std::string("average received SNR: ") + snr_definition);
            std::vector<std::string> head{"snr_db"};
            for (const auto& c : bundle.overlays) head.push_back(c.name);
            csv.header(head);
            for (std::size_t i = 0; i < bundle.overlays.front().snr_db.size(); ++i) {
                std::vector<std::string> row{io::fmt(bundle.overlays.front().snr_db[i])};
                for (const auto& c : bundle.overlays) row.push_back(io::fmt(c.values[i]));
                csv.row(row);
            }
            const std::string path =
                *rep_out + "_" + bundle.figure + "_" + bundle.scale + "_overlays.csv";
            io::write_text_file(path, csv.str());
            outputs.push_back(path);
        }
        nlohmann::json config;
        config["figure"] = *rep_fig;
        config["scale"] = *rep_scale;
        config["seed"] = *rep_seed;
        config["max_trials"] = *rep_max_trials;
        config["target_errors"] = *rep_target_errors;
        std::vector<std::string> argv_res{
            "reproduce",        "--figure",
            *rep_fig,           "--scale",
            *rep_scale,         "--seed",
            std::to_string(*rep_seed),
            "--max-trials",     std::to_string(*rep_max_trials),
            "--target-errors",  std::to_string(*rep_target_errors),
            "--out",            *rep_out};
        detail::write_manifest(*rep_out, "reproduce", config, argv_res, outputs);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("permwave");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace permwave::cli
