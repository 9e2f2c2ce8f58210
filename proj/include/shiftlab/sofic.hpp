#pragma once

#include "shiftlab/errors.hpp"
#include "shiftlab/seq.hpp"
#include "shiftlab/word.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace shiftlab {

using StateSet = Bits;

// Oriented {0,1}-labelled multigraph with per-label CSR adjacency.
class LabeledGraph {
public:
    struct Edge {
        std::uint32_t src, dst;
        std::uint8_t label;
    };

    LabeledGraph() = default;
    LabeledGraph(std::uint32_t vertex_count, std::vector<Edge> edges)
        : v_(vertex_count), edges_(std::move(edges)) {
        for (const auto& e : edges_)
            if (e.src >= v_ || e.dst >= v_ || e.label > 1)
                throw std::invalid_argument("LabeledGraph: edge out of range");
        build_csr();
    }

    std::uint32_t vertex_count() const { return v_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // targets of label-a edges leaving v
    std::pair<const std::uint32_t*, const std::uint32_t*> out(std::uint32_t v, int a) const {
        const auto& row = rows_[a];
        return {tgt_[a].data() + row[v], tgt_[a].data() + row[v + 1]};
    }

    std::size_t out_degree(std::uint32_t v) const {
        return (rows_[0][v + 1] - rows_[0][v]) + (rows_[1][v + 1] - rows_[1][v]);
    }

private:
    void build_csr() {
        for (int a = 0; a < 2; ++a) {
            rows_[a].assign(v_ + 1, 0);
            tgt_[a].clear();
        }
        for (const auto& e : edges_) ++rows_[e.label][e.src + 1];
        for (int a = 0; a < 2; ++a)
            for (std::uint32_t v = 0; v < v_; ++v) rows_[a][v + 1] += rows_[a][v];
        std::array<std::vector<std::uint32_t>, 2> fill = {rows_[0], rows_[1]};
        tgt_[0].resize(rows_[0][v_]);
        tgt_[1].resize(rows_[1][v_]);
        for (const auto& e : edges_) tgt_[e.label][fill[e.label][e.src]++] = e.dst;
    }

    std::uint32_t v_ = 0;
    std::vector<Edge> edges_;
    std::array<std::vector<std::uint32_t>, 2> rows_;
    std::array<std::vector<std::uint32_t>, 2> tgt_;
};

// Maximal subgraph in which every vertex lies on a bi-infinite path.
// Idempotent; throws empty_shift_error when nothing survives.
inline LabeledGraph trim(const LabeledGraph& g) {
    std::uint32_t n = g.vertex_count();
    std::vector<char> alive(n, 1);
    std::vector<std::size_t> outd(n, 0), ind(n, 0);
    for (const auto& e : g.edges()) {
        ++outd[e.src];
        ++ind[e.dst];
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (alive[v] && (outd[v] == 0 || ind[v] == 0)) {
                alive[v] = 0;
                changed = true;
                for (int a = 0; a < 2; ++a) {
                    auto [b, e] = g.out(v, a);
                    for (auto* p = b; p != e; ++p)
                        if (alive[*p]) --ind[*p];
                }
                for (const auto& ed : g.edges())
                    if (ed.dst == v && alive[ed.src]) --outd[ed.src];
            }
        }
    }
    std::vector<std::uint32_t> remap(n, UINT32_MAX);
    std::uint32_t m = 0;
    for (std::uint32_t v = 0; v < n; ++v)
        if (alive[v]) remap[v] = m++;
    if (m == 0) throw empty_shift_error("trim: no bi-infinite path");
    std::vector<LabeledGraph::Edge> kept;
    for (const auto& e : g.edges())
        if (alive[e.src] && alive[e.dst]) kept.push_back({remap[e.src], remap[e.dst], e.label});
    return LabeledGraph(m, std::move(kept));
}

// A sofic shift given by an essential (trimmed) presentation.
struct SoficShift {
    LabeledGraph graph;
    std::string name;

    static SoficShift from_graph(LabeledGraph g, std::string name) {
        return SoficShift{trim(g), std::move(name)};
    }
};

inline StateSet full_set(const LabeledGraph& g) { return Bits::ones(g.vertex_count()); }

inline StateSet step(const LabeledGraph& g, const StateSet& s, bool letter) {
    StateSet out(g.vertex_count());
    s.for_each_set([&](std::size_t v) {
        auto [b, e] = g.out(static_cast<std::uint32_t>(v), letter);
        for (auto* p = b; p != e; ++p) out.set(*p);
    });
    return out;
}

inline StateSet reach_after(const LabeledGraph& g, const Word& w, StateSet from) {
    for (std::size_t i = 0; i < w.size() && from.any(); ++i) from = step(g, from, w.get(i));
    return from;
}

inline bool member(const SoficShift& x, const Word& w) {
    return reach_after(x.graph, w, full_set(x.graph)).any();
}

// Exactly L_n(X), in lexicographic order. Throws budget_error when the DFS
// touches more than budget nodes.
inline std::vector<Word> enumerate_language(const SoficShift& x, std::size_t n,
                                            std::size_t budget = (1u << 22)) {
    std::vector<Word> out;
    std::size_t touched = 0;
    Word cur;
    auto rec = [&](auto&& self, const StateSet& s, std::size_t depth) -> void {
        if (++touched > budget) throw budget_error("enumerate_language: budget exceeded");
        if (depth == n) {
            out.push_back(cur);
            return;
        }
        for (int a = 0; a < 2; ++a) {
            StateSet t = step(x.graph, s, a != 0);
            if (t.any()) {
                cur.push_back(a != 0);
                self(self, t, depth + 1);
                cur.resize(depth);
            }
        }
    };
    rec(rec, full_set(x.graph), 0);
    return out;
}

inline std::unordered_set<Bits, BitsHash> language_set(const SoficShift& x, std::size_t n,
                                                       std::size_t budget = (1u << 22)) {
    auto v = enumerate_language(x, n, budget);
    return {v.begin(), v.end()};
}

// Uniform-ish random admissible word by a masked walk.
inline Word sample_word(const SoficShift& x, std::size_t n, std::mt19937_64& rng) {
    Word w;
    StateSet s = full_set(x.graph);
    for (std::size_t i = 0; i < n; ++i) {
        StateSet t0 = step(x.graph, s, false);
        StateSet t1 = step(x.graph, s, true);
        bool pick1;
        if (t0.any() && t1.any()) pick1 = rng() & 1;
        else pick1 = t1.any();
        w.push_back(pick1);
        s = pick1 ? std::move(t1) : std::move(t0);
    }
    return w;
}

struct HereditaryReport {
    std::vector<std::pair<Word, Word>> violations; // (w, w') with w' <= w, w' not in L
    std::size_t trials = 0;
};

// Samples w in L_n(X) and coordinate-wise-smaller w'; reports every w' that
// leaves the language. Empty report = no counterexample found.
inline HereditaryReport is_hereditary_sample(const SoficShift& x, std::size_t n,
                                             std::size_t trials, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    HereditaryReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Word w = sample_word(x, n, rng);
        Word w2 = w;
        for (std::size_t i = 0; i < n; ++i)
            if (w2.get(i) && (rng() & 1)) w2.set(i, false);
        if (!member(x, w2)) rep.violations.emplace_back(w, w2);
    }
    return rep;
}

namespace detail {

// Strong connectivity + aperiodicity of a digraph given as adjacency lists.
inline bool strongly_connected(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::size_t n = adj.size();
    if (n == 0) return false;
    auto bfs = [&](const std::vector<std::vector<std::uint32_t>>& a) {
        std::vector<char> seen(n, 0);
        std::deque<std::uint32_t> q{0};
        seen[0] = 1;
        std::size_t cnt = 1;
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            for (auto w : a[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++cnt;
                    q.push_back(w);
                }
        }
        return cnt == n;
    };
    if (!bfs(adj)) return false;
    std::vector<std::vector<std::uint32_t>> rev(n);
    for (std::uint32_t v = 0; v < n; ++v)
        for (auto w : adj[v]) rev[w].push_back(v);
    return bfs(rev);
}

// gcd of (level[u]+1-level[v]) over edges of a strongly connected digraph
inline std::uint64_t digraph_period(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::size_t n = adj.size();
    std::vector<std::int64_t> level(n, -1);
    std::deque<std::uint32_t> q{0};
    level[0] = 0;
    std::int64_t g = 0;
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        for (auto w : adj[v]) {
            if (level[w] < 0) {
                level[w] = level[v] + 1;
                q.push_back(w);
            } else {
                g = std::gcd(g, level[v] + 1 - level[w]);
            }
        }
    }
    return static_cast<std::uint64_t>(g < 0 ? -g : g);
}

} // namespace detail

// Chain mixing at resolution 2^{-m}: walks on the m-block graph whose edges
// glue overlapping blocks into admissible (m+1)-words. True iff that graph
// is strongly connected and aperiodic.
inline bool is_chain_mixing(const SoficShift& x, std::size_t m, std::size_t budget = (1u << 22)) {
    if (m == 0) throw std::invalid_argument("is_chain_mixing: m must be >= 1");
    auto blocks = enumerate_language(x, m, budget);
    auto glue_ok = language_set(x, m + 1, budget);
    std::unordered_map<Bits, std::uint32_t, BitsHash> id;
    for (std::uint32_t i = 0; i < blocks.size(); ++i) id[blocks[i]] = i;
    std::vector<std::vector<std::uint32_t>> adj(blocks.size());
    for (std::uint32_t i = 0; i < blocks.size(); ++i) {
        Word suffix = blocks[i].subbits(1, m - 1);
        for (int a = 0; a < 2; ++a) {
            Word nxt = suffix;
            nxt.push_back(a != 0);
            auto it = id.find(nxt);
            if (it == id.end()) continue;
            Word glued = blocks[i];
            glued.push_back(a != 0);
            if (glue_ok.count(glued)) adj[i].push_back(it->second);
        }
    }
    return detail::strongly_connected(adj) && detail::digraph_period(adj) == 1;
}

enum class SyncStatus { yes, no, unknown };

struct SyncResult {
    SyncStatus status = SyncStatus::unknown;
    // for status == no: words u, v witnessing uw, wv in L but uwv not in L
    std::optional<std::pair<Word, Word>> counterexample;
    bool exact = false;          // exact determinization completed
    std::size_t evidence_len = 0; // bounded mode: tested u, v up to this length
};

// Synchronizing-word check. Exact mode determinizes the reachable
// state-sets and decides follower-language equality by a containment
// search over pairs; it answers yes/no. If determinization would exceed
// det_budget, falls back to testing the defining implication for all
// |u|, |v| <= test_len, answering no (with a counterexample) or unknown.
inline SyncResult is_synchronizing(const SoficShift& x, const Word& w, std::size_t det_budget = 4096,
                                   std::size_t test_len = 10) {
    const LabeledGraph& g = x.graph;
    if (!member(x, w)) throw std::invalid_argument("is_synchronizing: w not in the language");
    StateSet full = full_set(g);
    StateSet fw = reach_after(g, w, full);

    // L(B) contains L(A)? BFS over pairs; B subseteq A is invariant.
    auto follower_contains = [&](const StateSet& a0, const StateSet& b0,
                                 std::size_t depth_cap, std::size_t pair_budget,
                                 Word* witness) -> std::optional<bool> {
        std::unordered_set<Bits, BitsHash> seen; // key: a concat b
        std::deque<std::tuple<StateSet, StateSet, Word, std::size_t>> q;
        q.emplace_back(a0, b0, Word(), 0);
        while (!q.empty()) {
            auto [a, b, path, d] = std::move(q.front());
            q.pop_front();
            for (int l = 0; l < 2; ++l) {
                StateSet na = step(g, a, l != 0);
                if (na.none()) continue;
                StateSet nb = step(g, b, l != 0);
                Word np = path;
                np.push_back(l != 0);
                if (nb.none()) {
                    if (witness) *witness = np;
                    return false;
                }
                if (d + 1 >= depth_cap) continue;
                Bits key = na;
                key.append(nb);
                if (seen.insert(key).second) {
                    if (seen.size() > pair_budget) return std::nullopt; // undecided
                    q.emplace_back(std::move(na), std::move(nb), std::move(np), d + 1);
                }
            }
        }
        return true;
    };

    // reachable determinization from the full set
    std::unordered_map<Bits, Word, BitsHash> reach; // subset -> a word leading to it
    bool det_complete = true;
    {
        std::deque<StateSet> q{full};
        reach[full] = Word();
        while (!q.empty()) {
            StateSet s = std::move(q.front());
            q.pop_front();
            for (int l = 0; l < 2; ++l) {
                StateSet t = step(g, s, l != 0);
                if (t.none() || reach.count(t)) continue;
                if (reach.size() >= det_budget) {
                    det_complete = false;
                    q.clear();
                    break;
                }
                Word path = reach[s];
                path.push_back(l != 0);
                reach[t] = std::move(path);
                q.push_back(t);
            }
        }
    }

    SyncResult res;
    if (det_complete) {
        bool undecided = false;
        for (const auto& [t, u] : reach) {
            StateSet tw = reach_after(g, w, t);
            if (tw.none()) continue;
            Word v;
            auto ok = follower_contains(fw, tw, static_cast<std::size_t>(-1), det_budget * 8, &v);
            if (!ok.has_value()) {
                undecided = true;
                break;
            }
            if (!*ok) {
                res.status = SyncStatus::no;
                res.counterexample = {u, v};
                res.exact = true;
                return res;
            }
        }
        if (!undecided) {
            res.status = SyncStatus::yes;
            res.exact = true;
            return res;
        }
    }

    // bounded fallback: reachable sets via words of length <= test_len only
    std::unordered_map<Bits, Word, BitsHash> shallow;
    std::deque<std::pair<StateSet, std::size_t>> q;
    q.emplace_back(full, 0);
    shallow[full] = Word();
    while (!q.empty()) {
        auto [s, d] = std::move(q.front());
        q.pop_front();
        if (d == test_len) continue;
        for (int l = 0; l < 2; ++l) {
            StateSet t = step(g, s, l != 0);
            if (t.none() || shallow.count(t)) continue;
            Word path = shallow[s];
            path.push_back(l != 0);
            shallow[t] = std::move(path);
            q.emplace_back(std::move(t), d + 1);
        }
    }
    for (const auto& [t, u] : shallow) {
        StateSet tw = reach_after(g, w, t);
        if (tw.none()) continue;
        Word v;
        auto ok = follower_contains(fw, tw, test_len, 1u << 20, &v);
        if (ok.has_value() && !*ok) {
            res.status = SyncStatus::no;
            res.counterexample = {u, v};
            return res;
        }
    }
    res.status = SyncStatus::unknown;
    res.evidence_len = test_len;
    return res;
}

struct TraceResult {
    Word traced;
    std::size_t mismatches = 0;
};

// Minimum-Hamming readable word: DP over (position, vertex). Tie-break:
// keep the target letter, then 0 over 1, then the lowest vertex id, so runs
// reproduce exactly.
inline TraceResult min_hamming_trace(const SoficShift& x, const Word& w,
                                     const StateSet* start_mask = nullptr) {
    const LabeledGraph& g = x.graph;
    const std::uint32_t V = g.vertex_count();
    const std::size_t L = w.size();
    constexpr std::uint32_t INF = UINT32_MAX / 2;
    std::vector<std::uint32_t> cost((L + 1) * V, INF);
    for (std::uint32_t v = 0; v < V; ++v) cost[L * V + v] = 0;
    for (std::size_t pos = L; pos-- > 0;) {
        bool target = w.get(pos);
        for (std::uint32_t v = 0; v < V; ++v) {
            std::uint32_t best = INF;
            for (int a = 0; a < 2; ++a) {
                std::uint32_t mis = (a != 0) != target;
                auto [b, e] = g.out(v, a);
                for (auto* p = b; p != e; ++p)
                    best = std::min(best, mis + cost[(pos + 1) * V + *p]);
            }
            cost[pos * V + v] = best;
        }
    }
    std::uint32_t v0 = UINT32_MAX, bestc = INF;
    for (std::uint32_t v = 0; v < V; ++v) {
        if (start_mask && !start_mask->get(v)) continue;
        if (cost[v] < bestc) {
            bestc = cost[v];
            v0 = v;
        }
    }
    if (v0 == UINT32_MAX) throw std::invalid_argument("min_hamming_trace: empty start mask");
    TraceResult res;
    res.mismatches = bestc;
    std::uint32_t v = v0;
    for (std::size_t pos = 0; pos < L; ++pos) {
        bool target = w.get(pos);
        std::uint32_t want = cost[pos * V + v];
        int best_letter = -1;
        std::uint32_t best_dst = UINT32_MAX;
        for (int phase = 0; phase < 3 && best_letter < 0; ++phase) {
            // phase 0: letter == target; phase 1: letter 0; phase 2: letter 1
            int a = phase == 0 ? (target ? 1 : 0) : (phase == 1 ? 0 : 1);
            if (phase == 1 && target == false) continue; // already tried as phase 0
            if (phase == 2 && target == true) continue;
            std::uint32_t mis = (a != 0) != target;
            auto [b, e] = g.out(v, a);
            for (auto* p = b; p != e; ++p)
                if (mis + cost[(pos + 1) * V + *p] == want)
                    best_dst = std::min(best_dst, *p), best_letter = a;
        }
        res.traced.push_back(best_letter != 0);
        v = best_dst;
    }
    return res;
}

// Canonical completion: read seed (must be admissible), then extend with the
// least letter that keeps the state set alive. The walk cycles on state
// sets, so the result is eventually periodic and decidable everywhere.
inline SymSequence complete_greedy(const SoficShift& x, const Word& seed,
                                   std::size_t step_budget = (1u << 16)) {
    StateSet s = reach_after(x.graph, seed, full_set(x.graph));
    if (s.none()) throw std::invalid_argument("complete_greedy: seed not in the language");
    std::unordered_map<Bits, std::size_t, BitsHash> seen;
    Word tail;
    while (true) {
        auto [it, fresh] = seen.emplace(s, tail.size());
        if (!fresh) {
            std::size_t start = it->second;
            Word prefix = seed;
            prefix.append(tail.subbits(0, start));
            Word period = tail.subbits(start, tail.size() - start);
            return SymSequence::periodic(std::move(prefix), std::move(period));
        }
        if (tail.size() > step_budget) throw budget_error("complete_greedy: step budget exceeded");
        StateSet t0 = step(x.graph, s, false);
        if (t0.any()) {
            tail.push_back(false);
            s = std::move(t0);
        } else {
            StateSet t1 = step(x.graph, s, true);
            tail.push_back(true);
            s = std::move(t1);
        }
    }
}

// Completion that must start with `prefix` and then follows `target` with
// minimum Hamming cost before settling into the greedy tail.
inline SymSequence complete_tracing(const SoficShift& x, const Word& prefix, const Word& target,
                                    std::size_t step_budget = (1u << 16)) {
    StateSet s = reach_after(x.graph, prefix, full_set(x.graph));
    if (s.none()) throw std::invalid_argument("complete_tracing: prefix not in the language");
    TraceResult tr = min_hamming_trace(x, target, &s);
    Word full_prefix = prefix;
    full_prefix.append(tr.traced);
    return complete_greedy(x, full_prefix, step_budget);
}

// Product presentation of the intersection, trimmed.
inline SoficShift intersect(const std::vector<SoficShift>& xs, std::size_t budget = (1u << 22)) {
    if (xs.empty()) throw std::invalid_argument("intersect: empty list");
    SoficShift acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const LabeledGraph& a = acc.graph;
        const LabeledGraph& b = xs[i].graph;
        std::uint64_t pv = static_cast<std::uint64_t>(a.vertex_count()) * b.vertex_count();
        if (pv > budget) throw budget_error("intersect: product vertex count exceeds budget");
        std::vector<LabeledGraph::Edge> es;
        for (const auto& ea : a.edges())
            for (const auto& eb : b.edges())
                if (ea.label == eb.label)
                    es.push_back({ea.src * b.vertex_count() + eb.src,
                                  ea.dst * b.vertex_count() + eb.dst, ea.label});
        acc = SoficShift::from_graph(LabeledGraph(static_cast<std::uint32_t>(pv), std::move(es)),
                                     acc.name + "&" + xs[i].name);
    }
    return acc;
}

// Presentation of the coded shift generated by `code`: one hub vertex, a
// labelled cycle through the hub per code word.
inline SoficShift sofic_from_code(const std::vector<Word>& code, std::string name) {
    std::uint32_t next = 1; // 0 is the hub
    std::vector<LabeledGraph::Edge> es;
    for (const Word& w : code) {
        if (w.empty()) throw std::invalid_argument("sofic_from_code: empty code word");
        std::uint32_t cur = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::uint32_t dst = (i + 1 == w.size()) ? 0 : next++;
            es.push_back({cur, dst, static_cast<std::uint8_t>(w.get(i))});
            cur = dst;
        }
    }
    return SoficShift::from_graph(LabeledGraph(next, std::move(es)), std::move(name));
}

} // namespace shiftlab
