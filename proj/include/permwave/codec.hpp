#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "permwave/common.hpp"
#include "permwave/params.hpp"

namespace permwave {

/// One transmittable waveform: the 1-based message index together with the
/// frequency permutation (tone index per subpulse) and the per-subpulse PSK
/// phase digits. Phase of subpulse l is 2*pi*phase_idx[l]/M.
struct WaveformSymbol {
    u128 index = 0;
    std::vector<int> perm;
    std::vector<int> phase_idx;
};

inline double phase_radians(const WaveformSymbol& sym, const WaveformParams& p, int l) {
    return two_pi * sym.phase_idx[static_cast<std::size_t>(l)] / p.M;
}

inline u128 factorial_u128(int n) {
    u128 f = 1;
    for (int k = 2; k <= n; ++k) {
        if (!checked_mul(f, static_cast<u128>(k), f))
            throw std::overflow_error("factorial exceeds 128 bits");
    }
    return f;
}

inline u128 pow_u128(u128 base, int exp) {
    u128 r = 1;
    for (int k = 0; k < exp; ++k) {
        if (!checked_mul(r, base, r))
            throw std::overflow_error("power exceeds 128 bits");
    }
    return r;
}

/// Total number of distinct waveforms, M_T = L! * M^L.
inline u128 total_waveforms(const WaveformParams& p) {
    p.validate();
    u128 total;
    if (!checked_mul(factorial_u128(p.L), pow_u128(static_cast<u128>(p.M), p.L), total))
        throw std::overflow_error("L! * M^L exceeds 128 bits");
    return total;
}

/// floor(log2(M_T)), evaluated on the exact integer.
inline int bits_per_block(const WaveformParams& p) {
    return bit_length(total_waveforms(p)) - 1;
}

/// Factorial-number-system unranking: rank 0 is the identity permutation and
/// ranks enumerate permutations of {0..L-1} in lexicographic order.
inline std::vector<int> unrank_permutation(u128 rank, int L) {
    u128 radix = factorial_u128(L);
    if (rank >= radix) throw std::domain_error("permutation rank out of range");
    std::vector<int> remaining(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) remaining[static_cast<std::size_t>(i)] = i;
    std::vector<int> perm;
    perm.reserve(static_cast<std::size_t>(L));
    for (int pos = 0; pos < L; ++pos) {
        radix /= static_cast<u128>(L - pos);
        const auto digit = static_cast<std::size_t>(rank / radix);
        rank %= radix;
        perm.push_back(remaining[digit]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return perm;
}

/// Inverse of unrank_permutation (Lehmer code).
inline u128 rank_permutation(std::span<const int> perm) {
    const int L = static_cast<int>(perm.size());
    std::vector<bool> used(static_cast<std::size_t>(L), false);
    u128 rank = 0;
    u128 radix = factorial_u128(L);
    for (int pos = 0; pos < L; ++pos) {
        radix /= static_cast<u128>(L - pos);
        const int v = perm[static_cast<std::size_t>(pos)];
        int smaller_unused = 0;
        for (int x = 0; x < v; ++x)
            if (!used[static_cast<std::size_t>(x)]) ++smaller_unused;
        rank += static_cast<u128>(smaller_unused) * radix;
        used[static_cast<std::size_t>(v)] = true;
    }
    return rank;
}

/// Maps a 1-based message index onto (permutation, phase digits). The
/// permutation comes from the factoradic unranking of floor((i-1)/M^L); the
/// base-M digits of (i-1) mod M^L become the phases, most significant digit
/// on subpulse 0.
inline WaveformSymbol encode_index(u128 index, const WaveformParams& p) {
    const u128 total = total_waveforms(p);
    if (index < 1 || index > total)
        throw std::domain_error("message index out of range [1, M_T]");
    const u128 phase_space = pow_u128(static_cast<u128>(p.M), p.L);
    const u128 zero_based = index - 1;

    WaveformSymbol sym;
    sym.index = index;
    sym.perm = unrank_permutation(zero_based / phase_space, p.L);
    sym.phase_idx.assign(static_cast<std::size_t>(p.L), 0);
    u128 word = zero_based % phase_space;
    for (int l = p.L - 1; l >= 0; --l) {
        sym.phase_idx[static_cast<std::size_t>(l)] =
            static_cast<int>(word % static_cast<u128>(p.M));
        word /= static_cast<u128>(p.M);
    }
    return sym;
}

inline void validate_symbol(const WaveformSymbol& sym, const WaveformParams& p) {
    if (static_cast<int>(sym.perm.size()) != p.L ||
        static_cast<int>(sym.phase_idx.size()) != p.L)
        throw std::domain_error("symbol has wrong length for params");
    std::vector<bool> seen(static_cast<std::size_t>(p.L), false);
    for (int v : sym.perm) {
        if (v < 0 || v >= p.L) throw std::domain_error("tone index out of range");
        if (seen[static_cast<std::size_t>(v)]) throw std::domain_error("repeated tone in permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
    for (int d : sym.phase_idx)
        if (d < 0 || d >= p.M) throw std::domain_error("phase digit out of range");
}

/// Exact inverse of encode_index.
inline u128 decode_symbol(const WaveformSymbol& sym, const WaveformParams& p) {
    p.validate();
    validate_symbol(sym, p);
    u128 word = 0;
    for (int l = 0; l < p.L; ++l)
        word = word * static_cast<u128>(p.M) +
               static_cast<u128>(sym.phase_idx[static_cast<std::size_t>(l)]);
    return rank_permutation(sym.perm) * pow_u128(static_cast<u128>(p.M), p.L) + word + 1;
}

}  // namespace permwave
