#pragma once

#include "shiftlab/errors.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/seq.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace shiftlab {

struct WindowEstimate {
    std::size_t window = 0;
    Rational lo;
    Rational hi;
    std::string kind;

    bool exact() const { return lo == hi; }
};

// Shift metric 2^{-first disagreement}; 0 when the handles are provably the
// same sequence. search_cap bounds the disagreement hunt on sequences that
// are equal over long stretches.
inline Rational rho(const SymSequence& x, const SymSequence& y, std::size_t search_cap = (1u << 16)) {
    if (SymSequence::provably_equal(x, y)) return Rational(0);
    std::size_t limit = std::min({x.guaranteed_horizon(), y.guaranteed_horizon(), search_cap});
    std::size_t d = SymSequence::first_disagreement(x, y, limit);
    if (d == Bits::npos)
        throw horizon_error("rho: sequences agree on the compared horizon but equality is undecidable");
    return pow2(-static_cast<std::int64_t>(d));
}

struct RhoInfResult {
    Rational value;
    Rational tail_bound; // 2^{-truncation}, a priori
};

// Product-metric partial sum  sum_{n<t} rho(x_n, z_n) / 2^{n+1}.
inline RhoInfResult rho_inf_window(const std::vector<SymSequence>& xs,
                                   const std::vector<SymSequence>& zs, std::size_t truncation) {
    if (xs.size() < truncation || zs.size() < truncation)
        throw horizon_error("rho_inf_window: truncation beyond sequence horizons");
    Rational v(0);
    for (std::size_t n = 0; n < truncation; ++n)
        v += rho(xs[n], zs[n]) * pow2(-static_cast<std::int64_t>(n) - 1);
    return RhoInfResult{v, pow2(-static_cast<std::int64_t>(truncation))};
}

// dbar on a window: |{i < L : x_i != y_i}| / L, exact.
inline Rational dbar_window(const SymSequence& x, const SymSequence& y, std::size_t L) {
    if (L == 0) throw std::invalid_argument("dbar_window: L must be positive");
    if (L > x.guaranteed_horizon() || L > y.guaranteed_horizon())
        throw horizon_error("dbar_window: window beyond horizon");
    Word wx = x.window(0, L), wy = y.window(0, L);
    return Rational(Int(Bits::mismatch_count(wx, wy, L)), Int(L));
}

// First-disagreement offsets of (sigma^i x, sigma^i y) for i < L, searched
// within [i, L+B). unresolved entries are marked npos. The caller supplies
// sequences decidable on [0, L+B); if only [0, L) is available the lookahead
// is truncated and more terms come back unresolved.
struct DisagreementProfile {
    std::vector<std::size_t> offset; // offset[i] = first disagreement - i, or npos
    bool tails_equal = false;        // npos entries are exactly 0 when set
    std::size_t unresolved = 0;      // npos entries that are only "< 2^{-lookahead}"
    std::size_t scanned = 0;         // letters actually compared
};

inline DisagreementProfile disagreement_profile(const SymSequence& x, const SymSequence& y,
                                                std::size_t L, std::size_t lookahead) {
    std::size_t hx = x.guaranteed_horizon(), hy = y.guaranteed_horizon();
    if (L > hx || L > hy) throw horizon_error("disagreement_profile: window beyond horizon");
    std::size_t total = std::min({L + lookahead, hx, hy});
    Word wx = x.window(0, total), wy = y.window(0, total);

    DisagreementProfile p;
    p.scanned = total;
    p.offset.assign(L, Bits::npos);
    std::vector<std::size_t> nxt(total, Bits::npos);
    std::size_t next = Bits::npos;
    for (std::size_t i = total; i-- > 0;) {
        if (wx.get(i) != wy.get(i)) next = i;
        nxt[i] = next;
    }
    if (total == hx || total == hy)
        p.tails_equal = false; // ran out of horizon, nothing to prove
    else
        p.tails_equal = SymSequence::provably_equal(x.shifted(total), y.shifted(total));
    for (std::size_t i = 0; i < L; ++i) {
        if (nxt[i] != Bits::npos) p.offset[i] = nxt[i] - i;
        else if (!p.tails_equal) ++p.unresolved;
    }
    return p;
}

// dist_B^T window value  (1/L) sum_{i<L} rho(sigma^i x, sigma^i y).
// Per-term lookahead budget B; unresolved terms widen the interval by
// 2^{-B} each instead of erroring.
inline WindowEstimate dist_B_window(const SymSequence& x, const SymSequence& y, std::size_t L,
                                    std::size_t budget = 64) {
    if (L == 0) throw std::invalid_argument("dist_B_window: L must be positive");
    DisagreementProfile p = disagreement_profile(x, y, L, budget);
    // bucket the resolved exponents; they repeat heavily
    std::vector<std::pair<std::size_t, std::size_t>> buckets; // (exponent, count)
    {
        std::vector<std::size_t> es;
        es.reserve(L);
        for (std::size_t i = 0; i < L; ++i)
            if (p.offset[i] != Bits::npos) es.push_back(p.offset[i]);
        std::sort(es.begin(), es.end());
        for (std::size_t i = 0; i < es.size();) {
            std::size_t j = i;
            while (j < es.size() && es[j] == es[i]) ++j;
            buckets.emplace_back(es[i], j - i);
            i = j;
        }
    }
    Rational lo(0);
    for (auto& [e, c] : buckets) lo += Rational(Int(c)) * pow2(-static_cast<std::int64_t>(e));
    lo /= Int(L);
    Rational hi = lo + Rational(Int(p.unresolved)) * pow2(-static_cast<std::int64_t>(budget)) / Int(L);
    return WindowEstimate{L, lo, hi, "dist_B"};
}

// Window estimator of rho_B': least candidate epsilon from {d_j} cup
// {(j+1)/L} with |{i : d_i >= eps}| < eps*L (strict, matching the defining
// inequalities; the discretization costs at most +1/L against the true
// window infimum). Degenerate all-ones input returns 1, the diameter.
inline Rational rho_B_prime_from_distances(std::vector<Rational> d) {
    std::size_t L = d.size();
    if (L == 0) throw std::invalid_argument("rho_B_prime: empty window");
    std::sort(d.begin(), d.end()); // ascending
    auto count_geq = [&](const Rational& eps) {
        // first index with d >= eps
        std::size_t lo = 0, hi = L;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (d[mid] < eps) lo = mid + 1;
            else hi = mid;
        }
        return L - lo;
    };
    std::vector<Rational> cands;
    cands.reserve(2 * L + 1);
    for (auto& v : d) cands.push_back(v);
    for (std::size_t j = 0; j < L; ++j) cands.push_back(Rational(Int(j + 1), Int(L)));
    cands.push_back(Rational(1));
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (auto& eps : cands) {
        if (eps <= 0) continue;
        if (Rational(Int(count_geq(eps))) < eps * Int(L)) return eps;
    }
    return Rational(1);
}

// Entry-wise distances of two point sequences, then the estimator above.
inline Rational rho_B_prime_window(const std::vector<SymSequence>& xs,
                                   const std::vector<SymSequence>& zs, std::size_t L,
                                   std::size_t search_cap = (1u << 16)) {
    if (xs.size() < L || zs.size() < L)
        throw horizon_error("rho_B_prime_window: window beyond horizons");
    std::vector<Rational> d(L);
    for (std::size_t i = 0; i < L; ++i) d[i] = rho(xs[i], zs[i], search_cap);
    return rho_B_prime_from_distances(std::move(d));
}

// Same candidate-scan rule specialized to dyadic distance vectors
// d_i = 2^{-offset[i]} (npos meaning 0). Pure integer arithmetic.
inline Rational rho_B_prime_from_offsets(const std::vector<std::size_t>& offsets, std::size_t L) {
    if (L == 0 || offsets.size() < L) throw std::invalid_argument("rho_B_prime: bad window");
    std::size_t emax = 0;
    bool have = false;
    for (std::size_t i = 0; i < L; ++i)
        if (offsets[i] != Bits::npos) {
            emax = std::max(emax, offsets[i]);
            have = true;
        }
    if (!have) return Rational(1, static_cast<long>(L)); // grid floor over an all-zero window
    std::vector<std::size_t> cum(emax + 2, 0);           // cum[e] = #{i : offset_i <= e}
    for (std::size_t i = 0; i < L; ++i)
        if (offsets[i] != Bits::npos) ++cum[offsets[i]];
    for (std::size_t e = 1; e <= emax + 1; ++e) cum[e] += cum[e - 1];
    auto count_at_least_pow = [&](std::size_t e) { // #{d_i >= 2^-e}
        return cum[std::min(e, emax + 1)];
    };

    bool found_a = false;
    Rational best_a;
    for (std::size_t e = emax + 1; e-- > 0;) { // candidate values 2^-e, ascending
        bool occurs = cum[e] != (e ? cum[e - 1] : 0);
        if (!occurs) continue;
        std::size_t cnt = count_at_least_pow(e);
        bool ok = e >= 63 ? cnt == 0
                          : (static_cast<unsigned long long>(cnt) << e) < static_cast<unsigned long long>(L);
        if (ok) {
            best_a = pow2(-static_cast<std::int64_t>(e));
            found_a = true;
            break;
        }
    }

    bool found_b = false;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < L; ++j) { // grid candidates (j+1)/L, ascending
        // #{d_i >= (j+1)/L} = #{offset_i <= e*} with e* = floor(log2(L/(j+1)))
        std::size_t cnt;
        if (j + 1 > L) cnt = 0;
        else {
            std::size_t e = 0;
            while (e < 63 && ((static_cast<unsigned long long>(j + 1) << (e + 1))
                              <= static_cast<unsigned long long>(L)))
                ++e;
            cnt = count_at_least_pow(e);
        }
        if (cnt < j + 1) {
            best_j = j;
            found_b = true;
            break;
        }
    }

    Rational grid = found_b ? Rational(Int(best_j + 1), Int(L)) : Rational(1);
    if (found_a) return best_a < grid ? best_a : grid;
    return grid;
}

// Orbit-pair form: d_i = rho(sigma^i x, sigma^i y) with lookahead budget;
// unresolved terms are taken as 0 (they are below 2^{-budget}).
inline Rational rho_B_prime_orbits(const SymSequence& x, const SymSequence& y, std::size_t L,
                                   std::size_t budget = 64) {
    DisagreementProfile p = disagreement_profile(x, y, L, budget);
    return rho_B_prime_from_offsets(p.offset, L);
}

} // namespace shiftlab
