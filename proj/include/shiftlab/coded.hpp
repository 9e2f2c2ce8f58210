#pragma once

#include "shiftlab/certify.hpp"
#include "shiftlab/errors.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/word.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

namespace shiftlab {

// t(1), t(2), ... with t(n) >= 2
struct ParamSeq {
    std::vector<Int> t;

    static ParamSeq of(std::initializer_list<std::uint64_t> vals) {
        ParamSeq p;
        for (auto v : vals) p.t.emplace_back(v);
        return p;
    }

    const Int& at(std::size_t n) const { // 1-indexed
        if (n == 0 || n > t.size())
            throw std::invalid_argument("ParamSeq: t(" + std::to_string(n) + ") not supplied");
        if (t[n - 1] < 2) throw std::invalid_argument("ParamSeq: t(n) must be >= 2");
        return t[n - 1];
    }

    std::size_t supplied() const { return t.size(); }
};

struct LevelStats {
    Int s, l, k, tau_len;
};

namespace coded_detail {

inline std::size_t bit_length(const Int& v) {
    return v.is_zero() ? 0 : boost::multiprecision::msb(v) + 1;
}

inline bool is_power_of_two(const Int& v) {
    return !v.is_zero() && boost::multiprecision::lsb(v) == boost::multiprecision::msb(v);
}

// k^t with a fast path for powers of two; guards result size.
inline Int pow_guarded(const Int& k, const Int& t, std::size_t bit_budget) {
    if (is_power_of_two(k)) {
        Int e = Int(boost::multiprecision::msb(k)) * t;
        if (e > Int(bit_budget)) throw budget_error("code level stats: cardinality exceeds bit budget");
        return Int(1) << e.convert_to<unsigned>();
    }
    if (Int(bit_length(k)) * t > Int(bit_budget))
        throw budget_error("code level stats: cardinality exceeds bit budget");
    return pow_int(k, t.convert_to<std::uint64_t>());
}

} // namespace coded_detail

// Stats by the defining recurrences from B_1 = {0, 11}:
//   s(n+1) = t(n) s(n) + |tau(n)|,  l(n+1) = t(n) l(n) + |tau(n)|,
//   k(n+1) = k(n)^t(n),  |tau(n+1)| = k(n)^{t(n)-1} |tau(n)| (t(n) + k(n)).
// The cardinality recurrence counts choice tuples; tuples give distinct
// words because every level parses uniquely into B_1 blocks (B_1 is a
// prefix code and all level-n words contain the same number of blocks).
inline LevelStats level_stats(const ParamSeq& t, std::size_t n,
                              std::size_t bit_budget = (1u << 26)) {
    LevelStats st{Int(1), Int(2), Int(2), Int(3)};
    for (std::size_t lvl = 1; lvl < n; ++lvl) {
        const Int& tn = t.at(lvl);
        Int s2 = tn * st.s + st.tau_len;
        Int l2 = tn * st.l + st.tau_len;
        Int k_pow_m1 = coded_detail::pow_guarded(st.k, tn - 1, bit_budget);
        Int tau2 = k_pow_m1 * st.tau_len * (tn + st.k);
        Int k2 = k_pow_m1 * st.k;
        if (coded_detail::bit_length(tau2) > bit_budget || coded_detail::bit_length(l2) > bit_budget)
            throw budget_error("level_stats: stats exceed bit budget");
        st = LevelStats{std::move(s2), std::move(l2), std::move(k2), std::move(tau2)};
    }
    return st;
}

struct ConditionReport {
    bool c1, c2, c3, c4;
    bool all() const { return c1 && c2 && c3 && c4; }
};

// The four growth conditions on t(n), in exact cross-multiplied arithmetic.
// Condition (1) needs 2l(n) > 3s(n), which valid parameters maintain.
inline ConditionReport check_conditions(const LevelStats& st, const Int& t_n, std::size_t n) {
    Int gap = 2 * st.l - 3 * st.s;
    if (gap <= 0)
        throw ratio_violation_error("check_conditions: 2l(n) <= 3s(n); invalid parameter prefix");
    ConditionReport r{};
    r.c1 = t_n * gap > st.tau_len;
    r.c2 = t_n * (st.l - st.s) >= st.l;
    r.c3 = t_n * st.l >= 2 * st.s + 2 * st.l + 3 * st.tau_len;
    r.c4 = t_n * st.s > (3 * st.l + st.tau_len) * pow_int(Int(2), n);
    return r;
}

inline ConditionReport check_conditions(const ParamSeq& t, std::size_t n) {
    return check_conditions(level_stats(t, n), t.at(n), n);
}

// Smallest integer >= 2 making all four conditions true at level n.
inline Int min_valid_t(const LevelStats& st, std::size_t n) {
    Int gap = 2 * st.l - 3 * st.s;
    if (gap <= 0) throw ratio_violation_error("min_valid_t: 2l(n) <= 3s(n)");
    Int t1 = st.tau_len / gap + 1;                                   // strict
    Int t2 = ceil_div(st.l, st.l - st.s);
    Int t3 = ceil_div(2 * st.s + 2 * st.l + 3 * st.tau_len, st.l);
    Int t4 = (3 * st.l + st.tau_len) * pow_int(Int(2), n) / st.s + 1; // strict
    Int best(2);
    for (const Int* c : {&t1, &t2, &t3, &t4})
        if (*c > best) best = *c;
    return best;
}

inline Int min_valid_t(const ParamSeq& t_prefix, std::size_t n) {
    return min_valid_t(level_stats(t_prefix, n), n);
}

// One level of the word code: explicit (materialized, canonically ordered)
// or lazy (stats plus a pointer to the previous level).
class CodeLevel {
public:
    static std::shared_ptr<const CodeLevel> base() {
        auto lvl = std::make_shared<CodeLevel>();
        lvl->n_ = 1;
        lvl->stats_ = LevelStats{Int(1), Int(2), Int(2), Int(3)};
        lvl->words_ = std::make_shared<std::vector<Word>>(std::vector<Word>{word("0"), word("11")});
        lvl->index_words();
        return lvl;
    }

    // Explicit successor: every t-tuple of previous words plus tau, deduped
    // and sorted length-then-lex. Budgets cover tuple count and total symbols.
    static std::shared_ptr<const CodeLevel> next_explicit(std::shared_ptr<const CodeLevel> prev,
                                                          const Int& t,
                                                          std::size_t tuple_budget = (1u << 24),
                                                          std::size_t symbol_budget = (1u << 27)) {
        if (!prev->is_explicit()) throw budget_error("next_explicit: previous level is lazy");
        const auto& pw = prev->words();
        Int tuples = coded_detail::pow_guarded(Int(pw.size()), t, 64);
        if (tuples > Int(tuple_budget)) throw budget_error("next_explicit: tuple budget exceeded");
        std::size_t tn = t.convert_to<std::size_t>();
        Int max_symbols = tuples * (t * prev->stats_.l + prev->stats_.tau_len);
        if (max_symbols > Int(symbol_budget)) throw budget_error("next_explicit: symbol budget exceeded");

        Word tau = prev->tau();
        auto out = std::make_shared<std::vector<Word>>();
        out->reserve(tuples.convert_to<std::size_t>());
        std::vector<std::size_t> idx(tn, 0);
        while (true) {
            Word w;
            for (std::size_t j = 0; j < tn; ++j) w.append(pw[idx[j]]);
            w.append(tau);
            out->push_back(std::move(w));
            std::size_t j = tn;
            while (j > 0 && ++idx[j - 1] == pw.size()) idx[--j] = 0;
            if (j == 0) break;
        }
        std::sort(out->begin(), out->end(), Bits::len_lex_less);
        out->erase(std::unique(out->begin(), out->end()), out->end());

        auto lvl = std::make_shared<CodeLevel>();
        lvl->n_ = prev->n_ + 1;
        lvl->prev_ = std::move(prev);
        lvl->t_prev_ = t;
        lvl->words_ = std::move(out);
        lvl->stats_.k = Int(lvl->words_->size());
        lvl->stats_.s = Int(lvl->words_->front().size());
        lvl->stats_.l = Int(lvl->words_->back().size());
        Int total(0);
        for (const auto& w : *lvl->words_) total += Int(w.size());
        lvl->stats_.tau_len = total;
        lvl->index_words();
        return lvl;
    }

    static std::shared_ptr<const CodeLevel> next_lazy(std::shared_ptr<const CodeLevel> prev,
                                                      const Int& t,
                                                      std::size_t bit_budget = (1u << 26)) {
        auto lvl = std::make_shared<CodeLevel>();
        lvl->n_ = prev->n_ + 1;
        const LevelStats& p = prev->stats_;
        lvl->stats_.s = t * p.s + p.tau_len;
        lvl->stats_.l = t * p.l + p.tau_len;
        Int k_pow_m1 = coded_detail::pow_guarded(p.k, t - 1, bit_budget);
        lvl->stats_.k = k_pow_m1 * p.k;
        lvl->stats_.tau_len = k_pow_m1 * p.tau_len * (t + p.k);
        lvl->prev_ = std::move(prev);
        lvl->t_prev_ = t;
        return lvl;
    }

    std::size_t level() const { return n_; }
    const LevelStats& stats() const { return stats_; }
    bool is_explicit() const { return words_ != nullptr; }
    const std::shared_ptr<const CodeLevel>& prev() const { return prev_; }
    const Int& t_prev() const { return t_prev_; }

    const std::vector<Word>& words() const {
        if (!words_) throw budget_error("CodeLevel: level is lazy, words not materialized");
        return *words_;
    }

    bool contains(const Word& w) const {
        if (!words_) throw budget_error("CodeLevel: membership needs an explicit level");
        if (key_set_) {
            if (w.size() > 63) return false;
            return key_set_->count(key_of(w)) > 0;
        }
        return word_set_->count(w) > 0;
    }

    // tau(n): concatenation of all level-n words in canonical order
    Word tau() const {
        const auto& ws = words();
        Word t;
        for (const auto& w : ws) t.append(w);
        return t;
    }

    // A concrete word of exactly length m, built greedily through the
    // length-interval property. Lazy levels recurse into the previous level
    // and need its tau, so the previous level must be explicit.
    Word word_of_length(const Int& m) const {
        if (m < stats_.s || m > stats_.l)
            throw std::invalid_argument("word_of_length: length outside [s, l]");
        if (words_) {
            // canonical: first word of that length
            std::size_t len = m.convert_to<std::size_t>();
            auto it = std::lower_bound(words_->begin(), words_->end(), len,
                                       [](const Word& w, std::size_t v) { return w.size() < v; });
            return *it;
        }
        const auto& p = *prev_;
        std::size_t tn = t_prev_.convert_to<std::size_t>();
        Int rest = m - p.stats_.tau_len;
        Word out;
        for (std::size_t j = 0; j < tn; ++j) {
            Int blocks_left(tn - j - 1);
            Int hi = rest - blocks_left * p.stats_.s; // most this block may take
            Int lo = rest - blocks_left * p.stats_.l; // least it must take
            Int len = hi < p.stats_.l ? hi : p.stats_.l;
            Int low = lo > p.stats_.s ? lo : p.stats_.s;
            if (len < low) throw std::invalid_argument("word_of_length: infeasible split");
            out.append(p.word_of_length(len));
            rest -= len;
        }
        out.append(p.tau());
        return out;
    }

    Word sample(std::mt19937_64& rng) const {
        if (words_) return (*words_)[rng() % words_->size()];
        std::size_t tn = t_prev_.convert_to<std::size_t>();
        Word out;
        for (std::size_t j = 0; j < tn; ++j) out.append(prev_->sample(rng));
        out.append(prev_->tau());
        return out;
    }

private:
    static std::uint64_t key_of(const Word& w) {
        std::uint64_t v = 1; // length marker bit
        for (std::size_t i = w.size(); i-- > 0;) v = (v << 1) | (w.get(i) ? 1u : 0u);
        return v;
    }

    void index_words() {
        bool small = stats_.l <= 63;
        if (small) {
            auto ks = std::make_shared<std::unordered_set<std::uint64_t>>();
            ks->reserve(words_->size() * 2);
            for (const auto& w : *words_) ks->insert(key_of(w));
            key_set_ = std::move(ks);
        } else {
            auto ws = std::make_shared<std::unordered_set<Bits, BitsHash>>();
            ws->reserve(words_->size() * 2);
            for (const auto& w : *words_) ws->insert(w);
            word_set_ = std::move(ws);
        }
    }

    std::size_t n_ = 0;
    LevelStats stats_;
    std::shared_ptr<const std::vector<Word>> words_;
    std::shared_ptr<const CodeLevel> prev_;
    Int t_prev_;
    std::shared_ptr<const std::unordered_set<std::uint64_t>> key_set_;
    std::shared_ptr<const std::unordered_set<Bits, BitsHash>> word_set_;

public:
    CodeLevel() = default;
};

using CodeLevelPtr = std::shared_ptr<const CodeLevel>;

// Chain B_1 .. B_n, explicit as long as the budgets allow, lazy beyond.
inline std::vector<CodeLevelPtr> build_levels(const ParamSeq& t, std::size_t n,
                                              std::size_t tuple_budget = (1u << 24),
                                              std::size_t symbol_budget = (1u << 27)) {
    std::vector<CodeLevelPtr> chain{CodeLevel::base()};
    for (std::size_t lvl = 1; lvl < n; ++lvl) {
        const Int& tn = t.at(lvl);
        const CodeLevelPtr& prev = chain.back();
        bool go_explicit = prev->is_explicit();
        if (go_explicit) {
            Int kbits = Int(coded_detail::bit_length(prev->stats().k)) * tn;
            if (kbits > 40) go_explicit = false;
            else {
                Int tuples = pow_int(prev->stats().k, tn.convert_to<std::uint64_t>());
                if (tuples > Int(tuple_budget)) go_explicit = false;
                else if (tuples * (tn * prev->stats().l + prev->stats().tau_len) >
                         Int(symbol_budget))
                    go_explicit = false;
            }
        }
        chain.push_back(go_explicit ? CodeLevel::next_explicit(prev, tn, tuple_budget, symbol_budget)
                                    : CodeLevel::next_lazy(prev, tn));
    }
    return chain;
}

// Two or three words whose total length is |b1 b2| + alpha, via the
// length-interval property; the case split keeps every piece in [s, l].
inline std::vector<Word> connecting_words(const CodeLevel& level, const Word& b1, const Word& b2,
                                          const Int& alpha) {
    if (alpha <= 0 || alpha > level.stats().l)
        throw std::invalid_argument("connecting_words: alpha outside (0, l(n)]");
    const Int& s = level.stats().s;
    const Int& l = level.stats().l;
    Int total = Int(b1.size()) + Int(b2.size()) + alpha;
    std::vector<Word> out;
    auto split = [&](std::size_t pieces) {
        Int rest = total;
        for (std::size_t j = 0; j < pieces; ++j) {
            Int left(pieces - j - 1);
            Int hi = rest - left * s;
            Int len = hi < l ? hi : l;
            Int lo = rest - left * l;
            if (len < lo) len = lo;
            out.push_back(level.word_of_length(len));
            rest -= len;
        }
    };
    if (total <= 2 * l) split(2);
    else split(3);
    return out;
}

struct ParseResult {
    std::size_t alpha = 0;
    std::vector<std::size_t> boundaries; // block start positions, first == alpha
};

// Least alpha in [0, l(n)) such that the visible region of x decomposes
// greedily into level words; a trailing stretch shorter than l(n), where a
// cut block cannot be certified either way, is left unverified. Requires an
// explicit level.
inline ParseResult parse(const Word& x, const CodeLevel& level, std::size_t budget = (1u << 26)) {
    if (!level.is_explicit()) throw budget_error("parse: level is lazy");
    std::size_t s = level.stats().s.convert_to<std::size_t>();
    std::size_t l = level.stats().l.convert_to<std::size_t>();
    std::size_t n = x.size();
    if (n < 3 * l) throw parse_error("parse: prefix too short to certify blocks");
    if (static_cast<std::size_t>(n) * (l - s + 1) > budget)
        throw budget_error("parse: DP budget exceeded");

    // ok[pos]: the region [pos, n) decomposes, up to an unverifiable tail
    std::vector<char> ok(n + 1, 0);
    std::vector<std::size_t> step(n + 1, 0);
    for (std::size_t pos = n + 1; pos-- > 0;) {
        if (n - pos < l) {
            ok[pos] = 1;
            continue;
        }
        for (std::size_t len = s; len <= l && pos + len <= n; ++len) {
            if (!ok[pos + len]) continue;
            if (level.contains(x.subbits(pos, len))) {
                ok[pos] = 1;
                step[pos] = len;
                break; // shortest block first: deterministic greedy
            }
        }
    }
    for (std::size_t alpha = 0; alpha < l && alpha < n; ++alpha) {
        if (!ok[alpha]) continue;
        ParseResult r;
        r.alpha = alpha;
        std::size_t pos = alpha;
        while (step[pos] != 0) {
            r.boundaries.push_back(pos);
            pos += step[pos];
        }
        if (r.boundaries.size() < 3)
            continue; // not enough certified blocks at this alpha
        return r;
    }
    throw parse_error("parse: no decomposition found");
}

struct ApproxResult {
    Word w;                 // member of B_{n+1}
    std::size_t mismatches; // against x on [0, |w|)
    Int bound;              // 3 l(n) + |tau(n)|
};

// The close-word construction: replace the head by connecting words, copy
// blocks, append tau(n).
inline ApproxResult approx_word(const Word& x, const CodeLevel& level_n, const Int& t_n,
                                std::size_t parse_budget = (1u << 26)) {
    ParseResult pr = parse(x, level_n, parse_budget);
    std::size_t tn = t_n.convert_to<std::size_t>();
    std::size_t have = pr.boundaries.size();
    auto block = [&](std::size_t i) { // b_{i+1}
        std::size_t lo = pr.boundaries[i];
        std::size_t hi = i + 1 < have ? pr.boundaries[i + 1] : x.size();
        return x.subbits(lo, hi - lo);
    };
    if (have < tn + 1) throw parse_error("approx_word: prefix holds too few blocks");

    Word w;
    std::size_t copy_from, copy_count;
    if (pr.alpha == 0) {
        w.append(block(0));
        w.append(block(1));
        copy_from = 2;
        copy_count = tn - 2;
    } else {
        auto cs = connecting_words(level_n, block(0), block(1), Int(pr.alpha));
        if (cs.size() == 3 && tn < 3)
            throw parse_error("approx_word: three connecting words need t(n) >= 3");
        for (const auto& c : cs) w.append(c);
        copy_from = 2;
        copy_count = cs.size() == 2 ? tn - 2 : tn - 3;
    }
    for (std::size_t i = 0; i < copy_count; ++i) w.append(block(copy_from + i));
    w.append(level_n.tau());

    if (w.size() > x.size()) throw parse_error("approx_word: prefix shorter than the built word");
    ApproxResult res;
    res.mismatches = Bits::mismatch_count(x, w, w.size());
    res.bound = 3 * level_n.stats().l + level_n.stats().tau_len;
    res.w = std::move(w);
    return res;
}

struct ExtendResult {
    Word w;                         // member of B_m with u as prefix
    std::vector<CertCheck> checks;  // unconditional per-checkpoint bounds
    bool rate_bound_all = false;    // mism[|u|, l) <= l 2^{-n+2} for every l
    bool conditions_ok = false;     // conditions (1)-(4) held at the used levels
};

// Extension with a predetermined prefix: each appended block approximates x
// locally through the close-word construction one level down, then tau.
// The certificate always carries the unconditional block-sum bound; the
// geometric 2^{-n+2} rate is certified when the growth conditions hold
// (or when the caller waives them for toy parameters).
inline ExtendResult extend_word(const Word& u, const Word& x, std::size_t n, std::size_t m,
                                const std::vector<CodeLevelPtr>& chain, const ParamSeq& t,
                                bool waive_conditions = false,
                                std::size_t checkpoint_stride = 0) {
    if (n < 2) throw std::invalid_argument("extend_word: n must be >= 2");
    if (m <= n || m > chain.size()) throw std::invalid_argument("extend_word: need n < m <= built levels");

    bool conds = true;
    for (std::size_t lvl = n - 1; lvl < m; ++lvl) {
        try {
            conds = conds && check_conditions(chain[lvl - 1]->stats(), t.at(lvl), lvl).all();
        } catch (const ratio_violation_error&) {
            conds = false; // toy prefixes can break the ratio invariant
        }
    }
    if (!conds && !waive_conditions)
        throw std::invalid_argument("extend_word: growth conditions fail at a used level");

    Word w = u;
    // (position, bound increment) events for the unconditional bound;
    // increments fit 64 bits for any level this can materialize
    std::vector<std::pair<std::size_t, std::uint64_t>> events;
    for (std::size_t step = n; step < m; ++step) {
        const CodeLevel& lvl_prev = *chain[step - 2]; // level step-1, parse target
        const CodeLevel& lvl_cur = *chain[step - 1];  // level step
        std::uint64_t g = (3 * lvl_prev.stats().l + lvl_prev.stats().tau_len).convert_to<std::uint64_t>();
        std::size_t tn = t.at(step).convert_to<std::size_t>();
        std::size_t lmax = lvl_cur.stats().l.convert_to<std::size_t>();
        std::size_t window = lmax + 3 * lvl_prev.stats().l.convert_to<std::size_t>();
        for (std::size_t j = 2; j <= tn; ++j) {
            std::size_t off = w.size();
            if (off + window > x.size())
                throw horizon_error("extend_word: x prefix too short for the extension");
            events.emplace_back(off, g);
            auto ap = approx_word(x.subbits(off, window), lvl_prev, t.at(step - 1));
            w.append(ap.w);
        }
        events.emplace_back(w.size(), lvl_cur.stats().tau_len.convert_to<std::uint64_t>());
        w.append(lvl_cur.tau());
    }
    if (w.size() > x.size()) throw horizon_error("extend_word: x prefix shorter than the result");

    ExtendResult res;
    res.conditions_ok = conds;

    // one scan verifies both bounds at every l in [|u|, |w|)
    std::size_t u_len = u.size();
    std::size_t rate_exp = n - 2; // geometric rate: mism * 2^{n-2} <= l
    bool rate_all = true, uncond_all = true;
    std::uint64_t bound_cum = 0, mism = 0;
    std::size_t ev = 0;
    std::size_t stride = checkpoint_stride ? checkpoint_stride
                                           : std::max<std::size_t>(1, (w.size() - u_len) / 16);
    for (std::size_t pos = u_len; pos < w.size(); ++pos) {
        while (ev < events.size() && events[ev].first <= pos) bound_cum += events[ev++].second;
        if (x.get(pos) != w.get(pos)) ++mism;
        std::size_t l = pos + 1;
        if (rate_exp >= 63 ? mism > 0 : (mism << rate_exp) > l) rate_all = false;
        if (mism > bound_cum) uncond_all = false;
        if ((l - u_len) % stride == 0 || l == w.size()) {
            res.checks.push_back(make_check("extension_unconditional", static_cast<std::uint32_t>(n),
                                            u_len, l, Rational(Int(bound_cum)), Rational(Int(mism))));
            res.checks.push_back(make_check("extension_rate", static_cast<std::uint32_t>(n),
                                            u_len, l, Rational(Int(l), pow_int(Int(2), rate_exp)),
                                            Rational(Int(mism))));
        }
    }
    res.rate_bound_all = rate_all;
    if (!uncond_all)
        throw std::logic_error("extend_word: unconditional block bound violated"); // construction bug
    res.w = std::move(w);
    return res;
}

struct MinimalCertificate {
    std::vector<std::size_t> m_levels;     // m_j
    std::vector<std::size_t> alphas;       // |w^{(j)}|
    std::vector<std::size_t> k_thresholds; // verified Cauchy thresholds k_j
    std::vector<CertCheck> checks;         // gating inequalities
    std::vector<CertCheck> advisory;       // rate records when conditions are waived
    bool conditions_verified = false;
    bool complete = true;

    bool all_pass() const { return complete && all_checks_pass(checks); }
};

struct MinimalLimitParams {
    std::size_t window = 0;              // 0 -> min family prefix length
    bool waive_conditions = false;       // toy parameters
    std::vector<std::size_t> k_supplied; // Cauchy thresholds; discovered when empty
    std::size_t cauchy_tail_divisor = 4;
    std::size_t final_slack_count = 10;
    std::size_t max_level = 8;           // search cap for the m_j
};

struct MinimalLimit {
    Word w_prefix;
    MinimalCertificate cert;
};

namespace coded_detail {

inline std::size_t min_tail_threshold_pow2(const Bits& diff, std::size_t L, std::size_t rate_exp) {
    // minimal T with count(l) * 2^rate_exp < l for all l in [T, L]
    std::size_t last_violation = 0;
    std::uint64_t cum = 0;
    for (std::size_t l = 1; l <= L; ++l) {
        if (diff.get(l - 1)) ++cum;
        bool viol = rate_exp >= 63 ? cum > 0 : (cum << rate_exp) >= l;
        if (viol) last_violation = l;
    }
    return last_violation + 1 > L ? L + 1 : last_violation + 1;
}

} // namespace coded_detail

// The nested-prefix limit: pick levels m_j with s(m_j) > k_j, approximate
// x^{(1)} by a code word, then extend level by level tracing the deeper
// family members. Emits the growth and distance certificate.
inline MinimalLimit dbar_limit_minimal(const std::vector<Word>& family, const ParamSeq& t,
                                       const MinimalLimitParams& params = {}) {
    const std::size_t M = family.size();
    if (M == 0) throw std::invalid_argument("dbar_limit_minimal: empty family");
    std::size_t L = params.window;
    for (const auto& w : family) L = L == 0 ? w.size() : std::min(L, w.size());
    if (L == 0) throw std::invalid_argument("dbar_limit_minimal: empty window");

    MinimalCertificate cert;

    // windowed Cauchy thresholds k_j for consecutive pairs
    for (std::size_t j = 1; j < M; ++j) {
        Bits d = family[j - 1];
        d.resize(L);
        Bits o = family[j];
        o.resize(L);
        d ^= o;
        std::size_t T;
        if (j <= params.k_supplied.size()) {
            T = params.k_supplied[j - 1];
            std::size_t found = coded_detail::min_tail_threshold_pow2(d, L, j + 2);
            if (found > T)
                throw std::invalid_argument("dbar_limit_minimal: supplied k_" + std::to_string(j) +
                                            " does not witness the Cauchy condition");
        } else {
            T = coded_detail::min_tail_threshold_pow2(d, L, j + 2);
            if (T > L / params.cauchy_tail_divisor)
                throw std::invalid_argument("dbar_limit_minimal: Cauchy condition fails for pair (" +
                                            std::to_string(j) + "," + std::to_string(j + 1) + ")");
        }
        cert.k_thresholds.push_back(T);
    }
    // a final threshold for the deepest level reuses the last pair's scale
    std::size_t k_last = cert.k_thresholds.empty() ? 1 : cert.k_thresholds.back();

    // level chain, deep enough that s(m_j) clears each k_j but no deeper
    // than the supplied parameters allow
    std::size_t deepest = std::min(params.max_level, t.supplied() + 1);
    auto chain = build_levels(t, deepest);
    auto s_of = [&](std::size_t lvl) { return chain[lvl - 1]->stats().s; };
    std::vector<std::size_t> m(M + 1, 0);
    {
        std::size_t lvl = 4; // the construction starts at level >= 4
        for (std::size_t j = 1; j <= M; ++j) {
            std::size_t need = j <= cert.k_thresholds.size() ? cert.k_thresholds[j - 1] : k_last;
            if (j > 1) lvl = std::max(lvl, m[j - 1] + 1);
            while (lvl <= deepest && s_of(lvl) <= Int(need)) ++lvl;
            if (lvl > deepest) {
                cert.complete = false;
                return MinimalLimit{Word(), std::move(cert)};
            }
            m[j] = lvl;
            ++lvl;
        }
    }
    for (std::size_t j = 1; j <= M; ++j) cert.m_levels.push_back(m[j]);

    bool conds = true;
    for (std::size_t lvl = 1; lvl < m[M]; ++lvl) {
        try {
            conds = conds && check_conditions(chain[lvl - 1]->stats(), t.at(lvl), lvl).all();
        } catch (const ratio_violation_error&) {
            conds = false;
        }
    }
    cert.conditions_verified = conds;
    if (!conds && !params.waive_conditions)
        throw std::invalid_argument("dbar_limit_minimal: growth conditions fail; pass waive_conditions for toy runs");

    // w^(1) approximates x^(1) at level m_1
    Word x1 = family[0];
    x1.resize(L);
    auto ap = approx_word(x1, *chain[m[1] - 2], t.at(m[1] - 1));
    Word w = ap.w;
    cert.checks.push_back(make_check("close_word", static_cast<std::uint32_t>(m[1]), 0, w.size(),
                                     Rational(ap.bound), Rational(Int(ap.mismatches))));
    cert.alphas.push_back(w.size());

    // extensions tracing x^{(j+1)}
    for (std::size_t j = 1; j < M; ++j) {
        Word xn = family[j];
        xn.resize(L);
        auto ext = extend_word(w, xn, m[j], m[j + 1], chain, t, params.waive_conditions);
        w = ext.w;
        cert.alphas.push_back(w.size());
        auto& sink = conds ? cert.checks : cert.advisory;
        for (auto& c : ext.checks) {
            if (c.name == "extension_rate") sink.push_back(std::move(c));
            else cert.checks.push_back(std::move(c));
        }
        if (conds && !ext.rate_bound_all)
            cert.checks.push_back(make_check("extension_rate_all",
                                             static_cast<std::uint32_t>(m[j]), cert.alphas[j - 1],
                                             w.size(), Rational(0), Rational(1)));
    }

    // alpha growth
    for (std::size_t j = 1; j < cert.alphas.size(); ++j)
        cert.checks.push_back(make_check("alpha_growth", static_cast<std::uint32_t>(j), 0, 0,
                                         Rational(Int(cert.alphas[j])),
                                         Rational(Int(2 * cert.alphas[j - 1]))));

    // pairwise interpolation bound: mism(x^(n), x^(m)) < l 2^{-n-1} holds
    // from k_{m-1} on; recorded as discovered-threshold <= promised-threshold
    for (std::size_t a = 1; a < M; ++a)
        for (std::size_t b = a + 1; b <= M; ++b) {
            Bits d = family[a - 1];
            d.resize(L);
            Bits o = family[b - 1];
            o.resize(L);
            d ^= o;
            std::size_t promised = cert.k_thresholds[b - 2];
            std::size_t found = coded_detail::min_tail_threshold_pow2(d, L, a + 1);
            cert.checks.push_back(make_check("upper_bound_words", static_cast<std::uint32_t>(a),
                                             b, L, Rational(Int(promised)),
                                             Rational(Int(found))));
        }

    // final window distances: mism(x^(n), w, [0, L')) <= alpha_n + L' 2^{-n+2} + slack
    std::size_t Lp = std::min(L, w.size());
    for (std::size_t nidx = 1; nidx <= M; ++nidx) {
        Bits xn = family[nidx - 1];
        xn.resize(Lp);
        Bits ww = w;
        ww.resize(Lp);
        std::size_t act = Bits::mismatch_count(xn, ww, Lp);
        Rational bound = Rational(Int(cert.alphas[nidx - 1])) +
                         Rational(Int(Lp)) * pow2(2 - static_cast<std::int64_t>(nidx)) +
                         Int(params.final_slack_count);
        cert.checks.push_back(make_check("final_dbar", static_cast<std::uint32_t>(nidx), 0, Lp,
                                         bound / Int(Lp), Rational(Int(act), Int(Lp))));
    }

    return MinimalLimit{std::move(w), std::move(cert)};
}

} // namespace shiftlab
