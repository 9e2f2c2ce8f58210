#pragma once

#include "shiftlab/index_set.hpp"
#include "shiftlab/metrics.hpp"
#include "shiftlab/sofic.hpp"

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace shiftlab {

// Finite-horizon sequence of points; entry n stands for the n-th term of a
// pseudo-orbit. The shift S acts by dropping the first entry.
struct PointSeq {
    std::vector<SymSequence> entries;

    std::size_t horizon() const { return entries.size(); }
    const SymSequence& operator[](std::size_t n) const { return entries[n]; }
};

struct POReport {
    std::string kind;
    std::size_t window = 0;
    bool verdict = false;
    std::optional<std::size_t> witness;                 // first violation, when tracked
    std::vector<std::pair<Rational, Rational>> curve;   // (parameter, density)
};

inline PointSeq orbit_of(const SymSequence& x, std::size_t horizon) {
    PointSeq ps;
    ps.entries.reserve(horizon);
    for (std::size_t n = 0; n < horizon; ++n) ps.entries.push_back(x.shifted(n));
    return ps;
}

namespace detail {

// smallest D with 2^-D < t  (resp. <=)
inline std::size_t depth_for_threshold(const Rational& t, bool strict) {
    if (t <= 0) throw std::invalid_argument("threshold must be positive");
    std::size_t d = 0;
    Rational v(1);
    while (strict ? !(v < t) : !(v <= t)) {
        v /= 2;
        if (++d > (1u << 20)) throw std::invalid_argument("threshold too small");
    }
    return d;
}

// decide rho(a, b) < t (strict) or <= t exactly, looking only as deep as the
// threshold requires
inline bool rho_less(const SymSequence& a, const SymSequence& b, const Rational& t, bool strict) {
    std::size_t depth = depth_for_threshold(t, strict);
    std::size_t avail = std::min(a.guaranteed_horizon(), b.guaranteed_horizon());
    std::size_t scan = std::min(depth, avail);
    std::size_t d = SymSequence::first_disagreement(a, b, scan);
    if (d != Bits::npos) {
        Rational v = pow2(-static_cast<std::int64_t>(d));
        return strict ? v < t : v <= t;
    }
    if (scan >= depth) return true; // rho <= 2^-depth which already beats t
    throw horizon_error("rho comparison undecidable within the guaranteed horizon");
}

inline Rational rho_exact(const SymSequence& a, const SymSequence& b,
                          std::size_t search_cap = (1u << 16)) {
    return rho(a, b, search_cap);
}

} // namespace detail

// rho(sigma(x_n), x_{n+1}) < delta for all n < L
inline POReport check_delta_po(const PointSeq& ps, const Rational& delta, std::size_t L) {
    if (L + 1 > ps.horizon()) throw horizon_error("check_delta_po: window beyond horizon");
    POReport r;
    r.kind = "delta_po";
    r.window = L;
    r.verdict = true;
    for (std::size_t n = 0; n < L; ++n) {
        if (!detail::rho_less(ps[n].shifted(1), ps[n + 1], delta, true)) {
            r.verdict = false;
            r.witness = n;
            break;
        }
    }
    return r;
}

// rho(sigma(x_n), x_{n+1}) <= schedule(n) for all n < L, a finite
// certificate for errors vanishing in the limit
inline POReport check_asymptotic_po(const PointSeq& ps, const std::vector<Rational>& schedule,
                                    std::size_t L) {
    if (L + 1 > ps.horizon() || L > schedule.size())
        throw horizon_error("check_asymptotic_po: window beyond declared horizons");
    for (std::size_t n = 0; n + 1 < L; ++n)
        if (schedule[n + 1] > schedule[n] || schedule[n] <= 0)
            throw std::invalid_argument("check_asymptotic_po: schedule must be positive nonincreasing");
    POReport r;
    r.kind = "asymptotic_po";
    r.window = L;
    r.verdict = true;
    for (std::size_t n = 0; n < L; ++n) {
        if (!detail::rho_less(ps[n].shifted(1), ps[n + 1], schedule[n], false)) {
            r.verdict = false;
            r.witness = n;
            break;
        }
    }
    return r;
}

// (1/n) sum_{i<n} rho(sigma(x_{i+k}), x_{i+k+1}) < delta for all n in [N, L]
// and k in [0, K]; both quantifier truncations are part of the report.
inline POReport check_delta_avg_po(const PointSeq& ps, const Rational& delta, std::size_t N,
                                   std::size_t K, std::size_t L) {
    if (N == 0) throw std::invalid_argument("check_delta_avg_po: N must be >= 1");
    if (N + K + L > ps.horizon()) throw horizon_error("check_delta_avg_po: window beyond horizon");
    std::size_t steps = L + K; // need errors e_0 .. e_{L+K-1}
    std::vector<Rational> prefix(steps + 1, Rational(0));
    for (std::size_t j = 0; j < steps; ++j)
        prefix[j + 1] = prefix[j] + detail::rho_exact(ps[j].shifted(1), ps[j + 1]);
    POReport r;
    r.kind = "delta_avg_po";
    r.window = L;
    r.verdict = true;
    for (std::size_t k = 0; k <= K && r.verdict; ++k)
        for (std::size_t n = N; n <= L; ++n) {
            Rational sum = prefix[k + n] - prefix[k];
            if (!(sum < delta * Int(n))) {
                r.verdict = false;
                r.witness = k; // offending shift offset
                break;
            }
        }
    return r;
}

// the set {n < L : rho(sigma(x_n), x_{n+1}) < eps}
inline IndexSet aapo_good_set(const PointSeq& ps, const Rational& eps, std::size_t L) {
    if (L + 1 > ps.horizon()) throw horizon_error("aapo_good_set: window beyond horizon");
    Bits w(L);
    for (std::size_t n = 0; n < L; ++n)
        if (detail::rho_less(ps[n].shifted(1), ps[n + 1], eps, true)) w.set(n);
    return IndexSet(std::move(w));
}

// density of the good set for each eps; verdict true iff all densities are
// at least 1 - tol
inline POReport check_aapo(const PointSeq& ps, const std::vector<Rational>& eps_list, std::size_t L,
                           const Rational& tol) {
    POReport r;
    r.kind = "aapo";
    r.window = L;
    r.verdict = true;
    for (const auto& eps : eps_list) {
        Rational dens = density_window(aapo_good_set(ps, eps, L), L);
        r.curve.emplace_back(eps, dens);
        if (dens < Rational(1) - tol) r.verdict = false;
    }
    return r;
}

// the set {n < L : max_{1<=j<=k} rho(x_{n+j}, sigma^j(x_n)) < eps}, the
// (eps, k) neighbourhood family standing in for open sets around the orbit
// space
inline IndexSet vague_good_set(const PointSeq& ps, const Rational& eps, std::size_t k,
                               std::size_t L) {
    if (L + k > ps.horizon()) throw horizon_error("vague_good_set: window beyond horizon");
    Bits w(L);
    for (std::size_t n = 0; n < L; ++n) {
        bool good = true;
        for (std::size_t j = 1; j <= k && good; ++j)
            good = detail::rho_less(ps[n + j], ps[n].shifted(j), eps, true);
        if (good) w.set(n);
    }
    return IndexSet(std::move(w));
}

inline POReport check_vague(const PointSeq& ps, const Rational& eps, std::size_t k, std::size_t L) {
    POReport r;
    r.kind = "vague";
    r.window = L;
    Rational dens = density_window(vague_good_set(ps, eps, k, L), L);
    r.curve.emplace_back(eps, dens);
    r.verdict = dens == 1;
    return r;
}

struct AvgPoParams {
    std::size_t m; // smallest m with 2^-m < delta/2
    std::size_t N; // smallest N with m/N < delta/2
};

// The two integers the word-to-pseudo-orbit construction derives from a
// target delta.
inline AvgPoParams avg_po_params_for_delta(const Rational& delta) {
    if (delta <= 0) throw std::invalid_argument("avg_po_params_for_delta: delta must be positive");
    Rational half = delta / 2;
    std::size_t m = 0;
    Rational v(1);
    while (!(v < half)) {
        v /= 2;
        ++m;
    }
    // smallest N with m/N < delta/2, i.e. N > 2m/delta
    Rational bound = Rational(Int(2 * m)) / delta;
    Int n = boost::multiprecision::numerator(bound) / boost::multiprecision::denominator(bound);
    std::size_t N = n.convert_to<std::size_t>() + 1;
    while (!(Rational(Int(m), Int(N)) < half)) ++N;
    return {m, N};
}

struct WordsToPoResult {
    PointSeq po;
    Rational delta_guarantee; // 2^{1-m} + 2m/N with N the shortest word length
    IndexSet exception_set;   // union of (n_i - m, n_i]
};

// The word-sequence-to-average-pseudo-orbit bridge: entry n is a point of X
// in the cylinder of the current word's suffix, completed by tracing the
// following words.
inline WordsToPoResult words_to_avg_po(const std::vector<Word>& words, std::size_t m,
                                       const SoficShift& x, std::size_t target_depth = 96) {
    if (words.empty()) throw std::invalid_argument("words_to_avg_po: no words");
    std::size_t N = Bits::npos, total = 0;
    for (const auto& w : words) {
        if (!member(x, w)) throw std::invalid_argument("words_to_avg_po: word not in L(X)");
        N = std::min(N, w.size());
        total += w.size();
    }
    Word whole;
    for (const auto& w : words) whole.append(w);

    WordsToPoResult res{{}, Rational(0), IndexSet()};
    res.po.entries.reserve(total);
    std::vector<std::size_t> starts; // n_i
    {
        std::size_t acc = 0;
        for (const auto& w : words) {
            starts.push_back(acc);
            acc += w.size();
        }
    }
    std::size_t wi = 0;
    for (std::size_t n = 0; n < total; ++n) {
        while (wi + 1 < words.size() && n >= starts[wi + 1]) ++wi;
        std::size_t word_end = starts[wi] + words[wi].size();
        Word suffix = whole.subbits(n, word_end - n);
        std::size_t tlen = std::min(target_depth, total - word_end);
        Word target = whole.subbits(word_end, tlen);
        res.po.entries.push_back(complete_tracing(x, suffix, target));
    }

    res.delta_guarantee = pow2(1 - static_cast<std::int64_t>(m)) +
                          Rational(Int(2 * m), Int(N));
    Bits e(total);
    for (std::size_t i = 1; i < starts.size(); ++i) {
        std::size_t hi = starts[i]; // indices (n_i - m, n_i]
        for (std::size_t d = 0; d < m && d < hi; ++d) e.set(hi - d);
    }
    res.exception_set = IndexSet(std::move(e));
    return res;
}

// Chops a delta-pseudo-orbit (delta <= 2^-m, i.e. consecutive entries
// overlap on m letters) into the words w_i = x^{(i-1)m}_{[0,m)}.
inline std::vector<Word> po_to_words(const PointSeq& ps, std::size_t m) {
    if (m == 0) throw std::invalid_argument("po_to_words: m must be >= 1");
    if (ps.horizon() < m) throw horizon_error("po_to_words: horizon shorter than m");
    for (std::size_t n = 0; n + 1 < ps.horizon(); ++n) {
        Word a = ps[n].window(1, m);
        Word b = ps[n + 1].window(0, m);
        if (a != b)
            throw std::invalid_argument("po_to_words: overlap condition fails at entry " +
                                        std::to_string(n));
    }
    std::vector<Word> out;
    for (std::size_t i = 0; (i + 1) * m <= ps.horizon(); ++i)
        out.push_back(ps[i * m].window(0, m));
    return out;
}

struct RepairResult {
    PointSeq repaired;
    IndexSet modified;
    std::size_t connector_length = 0; // longest connector inserted
};

// Replaces sparse bad junctions by connector paths on the (m+1)-block
// overlap graph, yielding entries that satisfy the m-overlap condition
// everywhere below L. Connector blocks are completed into points of X
// greedily.
inline RepairResult repair_aapo(const PointSeq& ps, const SoficShift& x, std::size_t m,
                                std::size_t L, std::size_t budget = (1u << 22)) {
    if (!is_chain_mixing(x, m, budget))
        throw std::invalid_argument("repair_aapo: presentation is not chain mixing at m");
    if (L + 1 > ps.horizon()) throw horizon_error("repair_aapo: window beyond horizon");

    auto blocks = enumerate_language(x, m + 1, budget);
    std::unordered_map<Bits, std::uint32_t, BitsHash> id;
    for (std::uint32_t i = 0; i < blocks.size(); ++i) id[blocks[i]] = i;
    std::vector<std::vector<std::uint32_t>> adj(blocks.size());
    for (std::uint32_t i = 0; i < blocks.size(); ++i) {
        Word suf = blocks[i].subbits(1, m);
        for (int a = 0; a < 2; ++a) {
            Word nxt = suf;
            nxt.push_back(a != 0);
            auto it = id.find(nxt);
            if (it != id.end()) adj[i].push_back(it->second);
        }
    }
    if (!detail::strongly_connected(adj))
        throw std::invalid_argument("repair_aapo: block graph is not strongly connected");

    auto block_of = [&](const SymSequence& s) {
        Word b = s.window(0, m + 1);
        auto it = id.find(b);
        if (it == id.end())
            throw std::invalid_argument("repair_aapo: entry block not in L(X)");
        return it->second;
    };
    auto overlap_ok = [&](const SymSequence& a, const SymSequence& b) {
        return a.window(1, m) == b.window(0, m);
    };

    RepairResult res;
    res.repaired.entries = ps.entries;
    Bits modified(L + 1);

    std::size_t n = 0;
    while (n < L) {
        if (overlap_ok(res.repaired[n], res.repaired[n + 1])) {
            ++n;
            continue;
        }
        std::uint32_t from = block_of(res.repaired[n]);
        // layered forward reachability: frontier[s] = blocks at exactly s edges
        std::size_t cap = 2 * blocks.size() + 4;
        std::vector<std::vector<char>> layers;
        layers.emplace_back(blocks.size(), 0);
        layers[0][from] = 1;
        std::size_t found_s = 0;
        for (std::size_t s = 1; s <= cap; ++s) {
            layers.emplace_back(blocks.size(), 0);
            for (std::uint32_t v = 0; v < blocks.size(); ++v)
                if (layers[s - 1][v])
                    for (auto t : adj[v]) layers[s][t] = 1;
            if (s >= 2 && n + s <= L) {
                std::uint32_t goal = block_of(res.repaired[n + s]);
                if (layers[s][goal]) {
                    found_s = s;
                    break;
                }
            }
            if (n + s > L) { // tail: walk anywhere to the window edge
                found_s = s;
                break;
            }
        }
        if (found_s == 0)
            throw std::invalid_argument("repair_aapo: no connector found within cap");

        std::size_t s = found_s;
        std::vector<std::uint32_t> path(s + 1);
        if (n + s <= L) {
            path[s] = block_of(res.repaired[n + s]);
        } else {
            // free endpoint: lowest reachable block
            for (std::uint32_t v = 0; v < blocks.size(); ++v)
                if (layers[s][v]) {
                    path[s] = v;
                    break;
                }
        }
        for (std::size_t t = s; t-- > 1;) {
            for (std::uint32_t v = 0; v < blocks.size(); ++v) {
                if (!layers[t][v]) continue;
                bool edge = false;
                for (auto u : adj[v])
                    if (u == path[t + 1]) edge = true;
                if (edge) {
                    path[t] = v;
                    break;
                }
            }
        }
        path[0] = from;
        for (std::size_t t = 1; t < s && n + t <= L; ++t) {
            res.repaired.entries[n + t] = complete_greedy(x, blocks[path[t]]);
            modified.set(n + t);
        }
        res.connector_length = std::max(res.connector_length, s - 1);
        n += s;
    }
    res.modified = IndexSet(std::move(modified));
    return res;
}

struct TraceVerdict {
    WindowEstimate value; // (1/L) sum rho(sigma^n z, x_n)
    std::vector<std::pair<Rational, Rational>> densities; // (eps, density of {rho < eps})
};

// The one report ASP / AASP / VSP verdicts read off: the window Besicovitch
// value of (orbit of z, x-bar) and the tracing densities per eps.
inline TraceVerdict trace_verdict(const PointSeq& ps, const SymSequence& z, std::size_t L,
                                  const std::vector<Rational>& eps_list, std::size_t budget = 64) {
    if (L > ps.horizon()) throw horizon_error("trace_verdict: window beyond horizon");
    std::vector<std::size_t> off(L, Bits::npos);
    std::size_t unresolved = 0;
    for (std::size_t n = 0; n < L; ++n) {
        const SymSequence zn = z.shifted(n);
        std::size_t avail = std::min(zn.guaranteed_horizon(), ps[n].guaranteed_horizon());
        std::size_t scan = std::min(avail, budget);
        std::size_t d = SymSequence::first_disagreement(zn, ps[n], scan);
        if (d != Bits::npos) off[n] = d;
        else if (!SymSequence::provably_equal(zn, ps[n]))
            ++unresolved; // only known to be below 2^-scan
    }
    TraceVerdict tv;
    Rational lo(0);
    for (std::size_t n = 0; n < L; ++n)
        if (off[n] != Bits::npos) lo += pow2(-static_cast<std::int64_t>(off[n]));
    lo /= Int(L);
    tv.value = WindowEstimate{L, lo, lo + Rational(Int(unresolved)) * pow2(-static_cast<std::int64_t>(budget)) / Int(L), "dist_B"};
    for (const auto& eps : eps_list) {
        if (!(pow2(-static_cast<std::int64_t>(budget)) < eps))
            throw std::invalid_argument("trace_verdict: eps below the resolution budget");
        std::size_t cnt = 0;
        for (std::size_t n = 0; n < L; ++n)
            if (off[n] == Bits::npos || pow2(-static_cast<std::int64_t>(off[n])) < eps) ++cnt;
        tv.densities.emplace_back(eps, Rational(Int(cnt), Int(L)));
    }
    return tv;
}

// Mostly-orbit generator with density-controlled junction errors; the
// workhorse for the equivalence experiments.
inline PointSeq gen_pseudo_orbit(const SoficShift& x, std::size_t horizon, double error_density,
                                 std::uint64_t seed, std::size_t depth = 64) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    PointSeq ps;
    ps.entries.reserve(horizon);
    SymSequence cur = complete_greedy(x, sample_word(x, depth, rng));
    std::size_t pos = 0;
    for (std::size_t n = 0; n < horizon; ++n) {
        if (n > 0 && coin(rng) < error_density) {
            cur = complete_greedy(x, sample_word(x, depth, rng));
            pos = 0;
        }
        ps.entries.push_back(cur.shifted(pos));
        ++pos;
    }
    return ps;
}

} // namespace shiftlab
