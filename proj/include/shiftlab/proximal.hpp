#pragma once

#include "shiftlab/certify.hpp"
#include "shiftlab/index_set.hpp"
#include "shiftlab/metrics.hpp"
#include "shiftlab/sofic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shiftlab {

inline std::uint64_t pow10u(std::uint32_t n) {
    std::uint64_t r = 1;
    while (n--) r *= 10;
    return r;
}

struct ProximalLevel {
    std::uint32_t n;
    LabeledGraph graph;
};

// Level-n graph: 10^n vertices on a 0-labelled cycle, a 1-labelled chain
// v_k -> v_{k+1} for 1 <= k <= 10^n - 2^n, and one extra 0-edge from
// v_{10^n-2^n} to v_{10^n-2^n+2}, destination reduced mod 10^n (at n = 1
// the written index overflows the vertex range).
inline ProximalLevel build_Gn(std::uint32_t n, std::uint32_t level_cap = 6) {
    if (n == 0) throw std::invalid_argument("build_Gn: n must be >= 1");
    if (n > level_cap) throw budget_error("build_Gn: level beyond memory budget");
    std::uint64_t v = pow10u(n);
    std::uint64_t q = v - (1ULL << n);
    std::vector<LabeledGraph::Edge> es;
    es.reserve(2 * v);
    for (std::uint64_t k = 0; k < v; ++k)
        es.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>((k + 1) % v), 0});
    for (std::uint64_t k = 1; k <= q; ++k)
        es.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k + 1), 1});
    es.push_back({static_cast<std::uint32_t>(q), static_cast<std::uint32_t>((q + 2) % v), 0});
    return ProximalLevel{n, LabeledGraph(static_cast<std::uint32_t>(v), std::move(es))};
}

inline SoficShift z_shift(std::uint32_t n) {
    return SoficShift::from_graph(build_Gn(n).graph, "Z" + std::to_string(n));
}

// Subset stepping specialized to the level-n graph; thousands of times
// faster than the generic CSR walk on big levels.
class ZnStepper {
public:
    explicit ZnStepper(std::uint32_t n)
        : v_(pow10u(n)), q_(v_ - (1ULL << n)), chain_(Bits(v_)) {
        Bits c(v_);
        for (std::uint64_t k = 1; k <= q_; ++k) c.set(k);
        chain_ = std::move(c);
    }

    std::uint64_t vertex_count() const { return v_; }

    StateSet initial() const { return Bits::ones(v_); }

    StateSet step(const StateSet& s, bool letter) const {
        if (!letter) {
            StateSet t = s.rotl1();
            if (s.get(q_)) t.set((q_ + 2) % v_);
            return t;
        }
        StateSet t = s;
        t &= chain_;
        return t.shifted_up1();
    }

private:
    std::uint64_t v_, q_;
    Bits chain_;
};

// Per-factor NFA masks for Y_n = Z_1 cap ... cap Z_n; no product graph.
class YnMachine {
public:
    explicit YnMachine(std::uint32_t n, std::uint32_t level_cap = 6) {
        if (n == 0) throw std::invalid_argument("YnMachine: n must be >= 1");
        if (n > level_cap) throw budget_error("YnMachine: level beyond budget");
        for (std::uint32_t j = 1; j <= n; ++j) steppers_.emplace_back(j);
    }

    std::uint32_t level() const { return static_cast<std::uint32_t>(steppers_.size()); }

    std::vector<StateSet> initial() const {
        std::vector<StateSet> m;
        for (const auto& s : steppers_) m.push_back(s.initial());
        return m;
    }

    // false when some factor dies
    bool step(std::vector<StateSet>& masks, bool letter) const {
        bool alive = true;
        for (std::size_t j = 0; j < steppers_.size(); ++j) {
            masks[j] = steppers_[j].step(masks[j], letter);
            alive = alive && masks[j].any();
        }
        return alive;
    }

    bool member(const Word& w) const {
        auto m = initial();
        for (std::size_t i = 0; i < w.size(); ++i)
            if (!step(m, w.get(i))) return false;
        return true;
    }

    bool member(const Bits& w, std::size_t len) const {
        auto m = initial();
        for (std::size_t i = 0; i < len; ++i)
            if (!step(m, w.get(i))) return false;
        return true;
    }

private:
    std::vector<ZnStepper> steppers_;
};

inline bool member_Yn(const Word& w, std::uint32_t n, std::uint32_t level_cap = 6) {
    return YnMachine(n, level_cap).member(w);
}

// E_i = union over j >= i of {m : m mod 10^j >= 10^j - 2^j}, materialized on
// [0, L). Levels with 10^j - 2^j >= L contribute nothing.
inline IndexSet E_set(std::uint32_t i, std::size_t L) {
    if (i == 0) throw std::invalid_argument("E_set: i must be >= 1");
    Bits w(L);
    for (std::uint32_t j = i;; ++j) {
        if (j > 19) break;
        std::uint64_t v = pow10u(j);
        std::uint64_t q = v - (1ULL << j);
        if (q >= L) break;
        for (std::uint64_t base = 0; base < L; base += v)
            for (std::uint64_t m = base + q; m < base + v && m < L; ++m) w.set(m);
    }
    return IndexSet(std::move(w));
}

// Zeroes the E_n positions of a Y_n-admissible prefix; the result is
// evidence-checkable against every Y_m level within budget.
inline Word project_to_Z(const Word& y_prefix, std::uint32_t n, std::uint32_t level_cap = 6) {
    if (!member_Yn(y_prefix, n, level_cap))
        throw std::invalid_argument("project_to_Z: prefix not in L(Y_n)");
    Word out = y_prefix;
    out.and_not(E_set(n, y_prefix.size()).window());
    return out;
}

struct SyncZeroWord {
    std::size_t m = 0;
    SyncStatus status = SyncStatus::unknown;
    bool exact = false;
};

// Smallest m <= cap such that 0^m passes the synchronizing-word check for
// Y_n, together with the certification status. Levels whose product
// presentation is affordable get the exact check; beyond that only bounded
// evidence is possible and the status says so.
inline SyncZeroWord find_sync_zero_word(std::uint32_t n, std::size_t det_budget = 4096,
                                        std::size_t test_len = 8, std::size_t cap = 512,
                                        std::size_t product_budget = 4096) {
    std::uint64_t product_vertices = 1;
    for (std::uint32_t j = 1; j <= n; ++j) product_vertices *= pow10u(j);
    if (product_vertices <= product_budget) {
        std::vector<SoficShift> zs;
        for (std::uint32_t j = 1; j <= n; ++j) zs.push_back(z_shift(j));
        SoficShift yn = intersect(zs, product_budget);
        for (std::size_t m = 1; m <= cap; ++m) {
            SyncResult r = is_synchronizing(yn, zeros(m), det_budget, test_len);
            if (r.status == SyncStatus::yes) return {m, SyncStatus::yes, r.exact};
            if (r.status == SyncStatus::unknown) return {m, SyncStatus::unknown, false};
        }
        throw not_found_error("find_sync_zero_word: no m <= cap certified");
    }

    // bounded evidence only: test the defining implication over L(Y_n) words
    // of length <= test_len via per-factor masks
    YnMachine machine(n);
    auto reach = [&](const std::vector<StateSet>& from, const Word& w) {
        auto m = from;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (!machine.step(m, w.get(i))) return std::pair{m, false};
        return std::pair{m, true};
    };
    auto alive = [](const std::vector<StateSet>& m) {
        for (const auto& s : m)
            if (s.none()) return false;
        return true;
    };

    for (std::size_t m = 1; m <= cap; ++m) {
        Word u0 = zeros(m);
        auto reached = reach(machine.initial(), u0);
        const std::vector<StateSet>& fw = reached.first;
        if (!reached.second) continue;
        // enumerate reachable mask tuples by words of length <= test_len
        bool counterexample = false;
        std::vector<std::vector<StateSet>> frontier{machine.initial()};
        // joint DFS: follower containment of (full after u0) in (T after u0)
        auto contains = [&](std::vector<StateSet> a, std::vector<StateSet> b) {
            // does every word readable from a stay readable from b, up to test_len
            auto rec = [&](auto&& self, const std::vector<StateSet>& A,
                           const std::vector<StateSet>& B, std::size_t d) -> bool {
                if (d == test_len) return true;
                for (int l = 0; l < 2; ++l) {
                    auto na = A;
                    if (!machine.step(na, l != 0)) continue;
                    auto nb = B;
                    machine.step(nb, l != 0);
                    if (!alive(nb)) return false;
                    if (!self(self, na, nb, d + 1)) return false;
                }
                return true;
            };
            return rec(rec, a, b, 0);
        };
        auto dfs_u = [&](auto&& self, const std::vector<StateSet>& masks, std::size_t d) -> bool {
            auto [tw, okw] = reach(masks, u0);
            if (okw && !contains(fw, tw)) return false;
            if (d == test_len) return true;
            for (int l = 0; l < 2; ++l) {
                auto nm = masks;
                if (!machine.step(nm, l != 0)) continue;
                if (!self(self, nm, d + 1)) return false;
            }
            return true;
        };
        counterexample = !dfs_u(dfs_u, machine.initial(), 0);
        if (!counterexample) return {m, SyncStatus::unknown, false};
    }
    throw not_found_error("find_sync_zero_word: no m <= cap passed bounded evidence");
}

struct SpliceCertificate {
    std::size_t window = 0;                  // L used throughout
    std::vector<std::size_t> ells;           // ell_n for n = 2..M
    std::vector<std::size_t> sync_lens;      // m_n used, n = 2..M
    std::vector<SyncStatus> sync_status;     // discovery status per level
    std::vector<std::size_t> cauchy_from;    // verified thresholds per consecutive pair
    std::vector<CertCheck> checks;
    bool conditional_on_sync = false;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ProximalLimitParams {
    std::size_t window = 0;             // 0 -> min family prefix length
    std::uint32_t verify_level_cap = 5; // Y_n membership evidence up to here
    std::size_t sync_det_budget = 2048;
    std::size_t sync_test_len = 6;
    std::size_t sync_cap = 64;          // initial m_n search cap
    std::size_t cauchy_tail_divisor = 4; // thresholds must sit below L / this
    std::size_t final_slack_count = 10; // absolute mismatch slack at the final window
};

struct ProximalLimit {
    Word x_prefix;
    SpliceCertificate cert;
};

namespace detail {

// Minimal T such that count(l) * den < l * num for all l in [T, L], where
// count(l) = popcount of diff below l. Returns L+1 when even l = L fails.
inline std::size_t min_tail_threshold(const Bits& diff, std::size_t L, std::uint64_t num,
                                      std::uint64_t den) {
    std::size_t last_violation = 0;
    std::uint64_t cum = 0;
    for (std::size_t l = 1; l <= L; ++l) {
        if (diff.get(l - 1)) ++cum;
        if (cum * den >= l * num) last_violation = l;
    }
    return last_violation + 1 > L ? L + 1 : last_violation + 1;
}

} // namespace detail

// Splice limit: from a windowed-Cauchy family of Z-prefixes, build the
// limit prefix level by level through synchronizing 0-blocks, together
// with a certificate of every inequality the construction promises on
// the window.
inline ProximalLimit dbar_limit_proximal(const std::vector<Word>& family,
                                         const ProximalLimitParams& params = {}) {
    const std::size_t M = family.size();
    if (M == 0) throw std::invalid_argument("dbar_limit_proximal: empty family");
    std::size_t L = params.window;
    for (const auto& w : family) L = L == 0 ? w.size() : std::min(L, w.size());
    if (L == 0) throw std::invalid_argument("dbar_limit_proximal: empty window");
    for (std::size_t n = 0; n < M; ++n)
        if (family[n].size() < L)
            throw horizon_error("dbar_limit_proximal: prefix shorter than window");

    SpliceCertificate cert;
    cert.window = L;

    // membership preconditions x^{(n)} in L(Y_n), within the level cap
    for (std::size_t n = 1; n <= M; ++n) {
        std::uint32_t lvl = static_cast<std::uint32_t>(std::min<std::size_t>(n, params.verify_level_cap));
        YnMachine machine(lvl);
        if (!machine.member(family[n - 1], L))
            throw std::invalid_argument("dbar_limit_proximal: x^(" + std::to_string(n) +
                                        ") not in L(Y_" + std::to_string(lvl) + ")");
    }

    // windowed Cauchy condition, thresholds discovered and recorded
    for (std::size_t n = 1; n + 1 <= M; ++n) {
        Bits diff = family[n - 1];
        diff.resize(L);
        Bits other = family[n];
        other.resize(L);
        diff ^= other;
        std::uint64_t den = 1;
        for (std::size_t t = 0; t < n + 1; ++t) den *= 5;
        std::size_t T = detail::min_tail_threshold(diff, L, 1, den);
        if (T > L / params.cauchy_tail_divisor)
            throw std::invalid_argument(
                "dbar_limit_proximal: Cauchy condition fails for pair (" + std::to_string(n) +
                "," + std::to_string(n + 1) + "), needed threshold " + std::to_string(T));
        cert.cauchy_from.push_back(T);
    }

    // E sets and the zeroed family
    std::vector<IndexSet> e_sets;
    std::vector<Word> ys;
    for (std::size_t n = 1; n <= M; ++n) {
        e_sets.push_back(E_set(static_cast<std::uint32_t>(n), L));
        Word y = family[n - 1];
        y.resize(L);
        y.and_not(e_sets[n - 1].window());
        ys.push_back(std::move(y));
    }

    auto pow5 = [](std::size_t k) {
        std::uint64_t r = 1;
        while (k--) r *= 5;
        return r;
    };

    std::vector<Word> zs(M);
    zs[0] = ys[0];
    std::vector<std::size_t> ells(M + 1, 0); // ells[n] = ell_n, n >= 2
    std::vector<std::size_t> syncs(M + 1, 0);

    for (std::size_t n = 2; n <= M; ++n) {
        SyncZeroWord sw = find_sync_zero_word(static_cast<std::uint32_t>(n), params.sync_det_budget,
                                              params.sync_test_len, params.sync_cap);
        cert.sync_status.push_back(sw.status);
        if (sw.status != SyncStatus::yes) cert.conditional_on_sync = true;

        std::size_t m_n = sw.m;
        YnMachine verifier(static_cast<std::uint32_t>(
            std::min<std::size_t>(n, params.verify_level_cap)));
        bool placed = false;
        for (int attempt = 0; attempt < 10 && !placed; ++attempt, m_n *= 2) {
            // smallest ell_n passing the window conditions
            std::size_t ell = n > 2 ? 2 * ells[n - 1] : 1;
            ell = std::max(ell, ells[n - 1] + 1);
            ell = std::max<std::size_t>(ell, m_n * pow5(n) + 1); // |u_n|/ell < 5^-n

            Bits dyx = ys[n - 1];
            Bits x = family[n - 1];
            x.resize(L);
            dyx ^= x;
            ell = std::max(ell, detail::min_tail_threshold(dyx, L, 1, pow5(n - 1))); // cond (3)

            for (std::size_t j = 1; j < n; ++j) { // cond (4), all pairs (j, n)
                Bits d = family[j - 1];
                d.resize(L);
                Bits xn = family[n - 1];
                xn.resize(L);
                d ^= xn;
                ell = std::max(ell, detail::min_tail_threshold(d, L, 1, pow5(j)));
            }
            ell = std::max(ell, detail::min_tail_threshold(e_sets[n - 1].window(), L, 1,
                                                           pow5(n - 1))); // cond (5)

            if (ell + m_n >= L)
                throw budget_error("dbar_limit_proximal: level " + std::to_string(n) +
                                   " does not fit the window");

            // z^(n) = z^(n-1)[0, ell) u_n y^(n)[ell+m, L)
            Word z = zs[n - 2].subbits(0, ell);
            z.append(zeros(m_n));
            z.append(ys[n - 1].subbits(ell + m_n, L - ell - m_n));

            if (verifier.member(z, L)) {
                zs[n - 1] = std::move(z);
                ells[n] = ell;
                syncs[n] = m_n;
                placed = true;
            }
        }
        if (!placed)
            throw not_found_error("dbar_limit_proximal: no spliceable 0-block at level " +
                                  std::to_string(n));
        cert.ells.push_back(ells[n]);
        cert.sync_lens.push_back(syncs[n]);
    }

    const Word& x = zs[M - 1];

    // z^(n) is zero on E_n
    for (std::size_t n = 1; n <= M; ++n) {
        Bits onE = zs[n - 1];
        onE &= e_sets[n - 1].window();
        CertCheck c;
        c.name = "z_zero_on_E";
        c.level = static_cast<std::uint32_t>(n);
        c.range_lo = 0;
        c.range_hi = L;
        c.bound = Rational(0);
        c.actual = Rational(static_cast<long>(onE.popcount()));
        c.pass = onE.none();
        cert.checks.push_back(std::move(c));
    }

    // (zn_yn): mism(z^(n), y^(n)) over [ell_n, ell_{n+1}) <= |u_n|
    for (std::size_t n = 1; n <= M; ++n) {
        std::size_t lo = n >= 2 ? ells[n] : 0;
        std::size_t hi = n + 1 <= M ? ells[n + 1] : L;
        Bits d = zs[n - 1];
        d ^= ys[n - 1];
        std::size_t act = d.popcount_prefix(hi) - d.popcount_prefix(lo);
        CertCheck c;
        c.name = "zn_yn";
        c.level = static_cast<std::uint32_t>(n);
        c.range_lo = lo;
        c.range_hi = hi;
        c.bound = Rational(static_cast<long>(n >= 2 ? syncs[n] : 0));
        c.actual = Rational(static_cast<long>(act));
        c.pass = Rational(static_cast<long>(act)) <= c.bound;
        cert.checks.push_back(std::move(c));
    }

    // (dist_x_xn_ln): mism(x, x^(n)) over [ell_n, ell_{n+1}) <= ell_{n+1} 5^{-n+1} + |u_n|
    for (std::size_t n = 1; n < M; ++n) {
        std::size_t lo = n >= 2 ? ells[n] : 0;
        std::size_t hi = ells[n + 1];
        Bits d = x;
        Bits xn = family[n - 1];
        xn.resize(L);
        d ^= xn;
        std::size_t act = d.popcount_prefix(hi) - d.popcount_prefix(lo);
        CertCheck c;
        c.name = "dist_x_xn_ln";
        c.level = static_cast<std::uint32_t>(n);
        c.range_lo = lo;
        c.range_hi = hi;
        c.bound = Rational(Int(hi), Int(pow5(n - 1))) + Int(static_cast<long>(n >= 2 ? syncs[n] : 0));
        c.actual = Rational(static_cast<long>(act));
        c.pass = c.actual <= c.bound;
        cert.checks.push_back(std::move(c));
    }

    // (upperbound_sync_words): sum_{j=n}^{k-1} |u_j| <= ell_k 5^{-n}
    for (std::size_t n = 1; n < M; ++n)
        for (std::size_t k = n + 1; k <= M; ++k) {
            std::uint64_t s = 0;
            for (std::size_t j = std::max<std::size_t>(n, 2); j < k; ++j) s += syncs[j];
            CertCheck c;
            c.name = "upperbound_sync_words";
            c.level = static_cast<std::uint32_t>(n);
            c.range_lo = n;
            c.range_hi = k;
            c.bound = Rational(Int(ells[k]), Int(pow5(n)));
            c.actual = Rational(Int(s));
            c.pass = c.actual <= c.bound;
            cert.checks.push_back(std::move(c));
        }

    // final windowed bound: dbar(x, x^(n)) at L within 5^{-n+1} + slack/L
    for (std::size_t n = 1; n <= M; ++n) {
        Bits d = x;
        Bits xn = family[n - 1];
        xn.resize(L);
        d ^= xn;
        std::size_t act = d.popcount();
        CertCheck c;
        c.name = "final_dbar";
        c.level = static_cast<std::uint32_t>(n);
        c.range_lo = 0;
        c.range_hi = L;
        c.bound = Rational(Int(1), Int(pow5(n - 1))) +
                  Rational(Int(params.final_slack_count), Int(L));
        c.actual = Rational(Int(act), Int(L));
        c.pass = c.actual <= c.bound;
        cert.checks.push_back(std::move(c));
    }

    return ProximalLimit{x, std::move(cert)};
}

} // namespace shiftlab
