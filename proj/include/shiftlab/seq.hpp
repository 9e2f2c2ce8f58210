#pragma once

#include "shiftlab/errors.hpp"
#include "shiftlab/word.hpp"

#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

namespace shiftlab {

// One-sided infinite binary sequence handle: a finite prefix plus a
// continuation rule. Eventually-periodic handles are decidable at every
// index; prefix-only handles guarantee letters below their horizon and
// refuse beyond (horizon_error), never silently truncate.
//
// Handles are immutable; shifting shares the underlying storage.
class SymSequence {
public:
    static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

    SymSequence() : SymSequence(finite(Word())) {}

    static SymSequence periodic(Word prefix, Word period) {
        if (period.empty()) throw std::invalid_argument("SymSequence: empty period");
        return SymSequence(std::make_shared<Impl>(Impl{std::move(prefix), std::move(period), {}}), 0);
    }

    static SymSequence finite(Word prefix, std::string continuation_tag = {}) {
        return SymSequence(std::make_shared<Impl>(
                               Impl{std::move(prefix), Word(), std::move(continuation_tag)}),
                           0);
    }

    static SymSequence constant(bool letter) {
        Word p;
        p.push_back(letter);
        return periodic(Word(), p);
    }

    bool eventually_periodic() const { return !impl_->period.empty(); }

    std::size_t guaranteed_horizon() const {
        if (eventually_periodic()) return unbounded;
        std::size_t p = impl_->prefix.size();
        return p > offset_ ? p - offset_ : 0;
    }

    bool letter(std::size_t i) const {
        std::size_t j = offset_ + i;
        if (j < impl_->prefix.size()) return impl_->prefix.get(j);
        if (impl_->period.empty())
            throw horizon_error("SymSequence: letter beyond guaranteed horizon");
        return impl_->period.get((j - impl_->prefix.size()) % impl_->period.size());
    }

    SymSequence shifted(std::size_t k) const { return SymSequence(impl_, offset_ + k); }

    Word window(std::size_t from, std::size_t len) const {
        if (len > 0 && guaranteed_horizon() != unbounded && from + len > guaranteed_horizon())
            throw horizon_error("SymSequence: window beyond horizon");
        Word out(len);
        std::size_t j = offset_ + from;
        std::size_t pn = impl_->prefix.size();
        std::size_t i = 0;
        if (j < pn) {
            std::size_t take = std::min(len, pn - j);
            for (; i < take; ++i)
                if (impl_->prefix.get(j + i)) out.set(i);
            j += take;
        }
        if (i < len) {
            const Word& per = impl_->period;
            std::size_t q = per.size();
            std::size_t r = (j - pn) % q;
            for (; i < len; ++i) {
                if (per.get(r)) out.set(i);
                if (++r == q) r = 0;
            }
        }
        return out;
    }

    // True when both handles are eventually periodic and algebraically
    // identical. A prefix-only handle can never be proved equal to anything.
    static bool provably_equal(const SymSequence& a, const SymSequence& b,
                               std::size_t lcm_cap = (1u << 20)) {
        if (a.impl_ == b.impl_ && a.offset_ == b.offset_) return true;
        if (!a.eventually_periodic() || !b.eventually_periodic()) return false;
        std::size_t pa = a.effective_prefix_len(), pb = b.effective_prefix_len();
        std::size_t qa = a.impl_->period.size(), qb = b.impl_->period.size();
        std::size_t l = std::lcm(qa, qb);
        if (l > lcm_cap) throw horizon_error("SymSequence: period lcm exceeds comparison cap");
        std::size_t check = std::max(pa, pb) + l;
        for (std::size_t i = 0; i < check; ++i)
            if (a.letter(i) != b.letter(i)) return false;
        return true;
    }

    // First index < limit where the sequences differ; npos if they agree on
    // the whole compared range. Throws if limit exceeds either horizon.
    static std::size_t first_disagreement(const SymSequence& a, const SymSequence& b,
                                          std::size_t limit) {
        if (limit > a.guaranteed_horizon() || limit > b.guaranteed_horizon())
            throw horizon_error("first_disagreement: limit beyond horizon");
        Word wa = a.window(0, limit), wb = b.window(0, limit);
        return Bits::first_diff(wa, wb, limit);
    }

    const std::string& continuation_tag() const { return impl_->tag; }
    const Word& stored_prefix() const { return impl_->prefix; }
    const Word& stored_period() const { return impl_->period; }
    std::size_t offset() const { return offset_; }

private:
    struct Impl {
        Word prefix;
        Word period; // empty means prefix-only
        std::string tag;
    };

    SymSequence(std::shared_ptr<const Impl> impl, std::size_t offset)
        : impl_(std::move(impl)), offset_(offset) {}

    std::size_t effective_prefix_len() const {
        std::size_t p = impl_->prefix.size();
        return p > offset_ ? p - offset_ : 0;
    }

    std::shared_ptr<const Impl> impl_;
    std::size_t offset_ = 0;
};

} // namespace shiftlab
