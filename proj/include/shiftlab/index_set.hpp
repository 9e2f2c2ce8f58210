#pragma once

#include "shiftlab/bits.hpp"
#include "shiftlab/errors.hpp"
#include "shiftlab/rational.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace shiftlab {

// A subset of the naturals materialized on [0, horizon). Construction is
// eager: after it, the set is immutable and safe to share across workers.
// Operations that would look past the horizon throw instead of truncating.
class IndexSet {
public:
    IndexSet() = default;
    explicit IndexSet(Bits window) : window_(std::move(window)) {}

    static IndexSet from_predicate(const std::function<bool(std::uint64_t)>& pred,
                                   std::size_t horizon) {
        Bits w(horizon);
        for (std::size_t i = 0; i < horizon; ++i)
            if (pred(i)) w.set(i);
        return IndexSet(std::move(w));
    }

    static IndexSet all(std::size_t horizon) { return IndexSet(Bits::ones(horizon)); }
    static IndexSet none(std::size_t horizon) { return IndexSet(Bits(horizon)); }

    static IndexSet from_residues(std::uint64_t mod, const std::vector<std::uint64_t>& residues,
                                  std::size_t horizon) {
        Bits w(horizon);
        for (auto r : residues)
            for (std::uint64_t i = r; i < horizon; i += mod) w.set(i);
        return IndexSet(std::move(w));
    }

    static IndexSet from_positions(const std::vector<std::uint64_t>& pos, std::size_t horizon) {
        Bits w(horizon);
        for (auto p : pos)
            if (p < horizon) w.set(p);
        return IndexSet(std::move(w));
    }

    std::size_t horizon() const { return window_.size(); }

    bool member(std::size_t n) const {
        if (n >= horizon()) throw horizon_error("IndexSet: membership beyond horizon");
        return window_.get(n);
    }

    const Bits& window() const { return window_; }

    std::size_t count_below(std::size_t L) const {
        if (L > horizon()) throw horizon_error("IndexSet: count beyond horizon");
        return window_.popcount_prefix(L);
    }

private:
    Bits window_;
};

// |A cap [0,L)| / L, exact.
inline Rational density_window(const IndexSet& a, std::size_t L) {
    if (L == 0) throw std::invalid_argument("density_window: L must be positive");
    return Rational(Int(a.count_below(L)), Int(L));
}

// A - i = {n : n+i in A}; the decidable horizon shrinks by i.
inline IndexSet shifted_set(const IndexSet& a, std::size_t i) {
    std::size_t h = a.horizon() > i ? a.horizon() - i : 0;
    Bits w = a.window().shifted_down(i);
    w.resize(h);
    return IndexSet(std::move(w));
}

struct RunSetResult {
    IndexSet set;                  // G_k cap [0, L)
    std::size_t complement_count;  // |[0,L) \ G_k|
};

// G_k = {n : [n, n+k) subset G}, evaluated on [0, L). Needs G decidable on
// [0, L+k).
inline RunSetResult run_set(const IndexSet& g, std::size_t k, std::size_t L) {
    if (k == 0) throw std::invalid_argument("run_set: k must be >= 1");
    if (g.horizon() < L + k) throw horizon_error("run_set: G not decidable on [0, L+k)");
    Bits acc = g.window();
    for (std::size_t i = 1; i < k; ++i) acc &= g.window().shifted_down(i);
    acc.resize(L);
    std::size_t inside = acc.popcount();
    return RunSetResult{IndexSet(std::move(acc)), L - inside};
}

inline void dump_csv(const IndexSet& a, std::size_t L, std::ostream& os) {
    if (L > a.horizon()) throw horizon_error("dump_csv: window beyond horizon");
    os << "index,member\n";
    for (std::size_t i = 0; i < L; ++i) os << i << ',' << (a.window().get(i) ? 1 : 0) << '\n';
}

} // namespace shiftlab
