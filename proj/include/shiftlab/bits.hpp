#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shiftlab {

// Dynamic bit string, LSB-first inside 64-bit blocks. Bit i is block i/64,
// position i%64. Tail bits past size() are kept zero by every mutator, so
// block-wise popcount/compare need no masking.
//
// Doubles as a binary word over {0,1} (letter i == bit i) and as a vertex
// set for the subset automaton constructions.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), blk_(blocks_for(n), 0) {}

    static Bits ones(std::size_t n) {
        Bits b(n);
        for (auto& w : b.blk_) w = ~0ULL;
        b.clear_tail();
        return b;
    }

    static Bits from_string(const std::string& s) {
        Bits b(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') b.set(i);
            else if (s[i] != '0') throw std::invalid_argument("Bits: letter must be 0 or 1");
        }
        return b;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for_each_set([&](std::size_t i) { s[i] = '1'; });
        return s;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const { return (blk_[i >> 6] >> (i & 63)) & 1ULL; }

    void set(std::size_t i, bool v = true) {
        if (v) blk_[i >> 6] |= 1ULL << (i & 63);
        else   blk_[i >> 6] &= ~(1ULL << (i & 63));
    }

    void push_back(bool v) {
        if ((n_ & 63) == 0) blk_.push_back(0);
        if (v) blk_[n_ >> 6] |= 1ULL << (n_ & 63);
        ++n_;
    }

    void resize(std::size_t n) {
        blk_.resize(blocks_for(n), 0);
        n_ = n;
        clear_tail();
    }

    // Appends other's bits after this word's letters.
    void append(const Bits& other) {
        std::size_t shift = n_ & 63;
        std::size_t old_blocks = blk_.size();
        n_ += other.n_;
        blk_.resize(blocks_for(n_), 0);
        if (shift == 0) {
            for (std::size_t j = 0; j < other.blk_.size(); ++j)
                blk_[old_blocks + j] = other.blk_[j];
        } else {
            std::size_t base = old_blocks - 1;
            for (std::size_t j = 0; j < other.blk_.size(); ++j) {
                blk_[base + j] |= other.blk_[j] << shift;
                if (base + j + 1 < blk_.size())
                    blk_[base + j + 1] |= other.blk_[j] >> (64 - shift);
            }
        }
        clear_tail();
    }

    // Letters [pos, pos+len).
    Bits subbits(std::size_t pos, std::size_t len) const {
        if (pos + len > n_) throw std::out_of_range("Bits::subbits");
        Bits out(len);
        std::size_t base = pos >> 6, shift = pos & 63;
        for (std::size_t j = 0; j < out.blk_.size(); ++j) {
            std::uint64_t w = blk_[base + j] >> shift;
            if (shift && base + j + 1 < blk_.size())
                w |= blk_[base + j + 1] << (64 - shift);
            out.blk_[j] = w;
        }
        out.clear_tail();
        return out;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : blk_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // Set bits below limit.
    std::size_t popcount_prefix(std::size_t limit) const {
        if (limit >= n_) return popcount();
        std::size_t full = limit >> 6, c = 0;
        for (std::size_t j = 0; j < full; ++j) c += static_cast<std::size_t>(std::popcount(blk_[j]));
        if (limit & 63) c += static_cast<std::size_t>(std::popcount(blk_[full] & ((1ULL << (limit & 63)) - 1)));
        return c;
    }

    bool any() const {
        for (auto w : blk_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    bool operator==(const Bits& o) const { return n_ == o.n_ && blk_ == o.blk_; }
    bool operator!=(const Bits& o) const { return !(*this == o); }

    Bits& operator|=(const Bits& o) { bin_op(o, [](std::uint64_t a, std::uint64_t b) { return a | b; }); return *this; }
    Bits& operator&=(const Bits& o) { bin_op(o, [](std::uint64_t a, std::uint64_t b) { return a & b; }); return *this; }
    Bits& operator^=(const Bits& o) { bin_op(o, [](std::uint64_t a, std::uint64_t b) { return a ^ b; }); return *this; }
    Bits& and_not(const Bits& o) { bin_op(o, [](std::uint64_t a, std::uint64_t b) { return a & ~b; }); return *this; }

    friend Bits operator|(Bits a, const Bits& b) { a |= b; return a; }
    friend Bits operator&(Bits a, const Bits& b) { a &= b; return a; }
    friend Bits operator^(Bits a, const Bits& b) { a ^= b; return a; }

    // Bit i -> bit i+1 mod size (cycle advance for the subset automaton).
    Bits rotl1() const {
        Bits out(n_);
        if (n_ == 0) return out;
        bool carry = get(n_ - 1);
        for (std::size_t j = 0; j < blk_.size(); ++j) {
            out.blk_[j] = blk_[j] << 1;
            if (j > 0) out.blk_[j] |= blk_[j - 1] >> 63;
        }
        out.clear_tail();
        if (carry) out.set(0);
        return out;
    }

    // Bit i -> bit i+1, overflow past size dropped.
    Bits shifted_up1() const {
        Bits out(n_);
        for (std::size_t j = 0; j < blk_.size(); ++j) {
            out.blk_[j] = blk_[j] << 1;
            if (j > 0) out.blk_[j] |= blk_[j - 1] >> 63;
        }
        out.clear_tail();
        return out;
    }

    // Bit i+k -> bit i, same size, tail zero-filled.
    Bits shifted_down(std::size_t k) const {
        Bits out(n_);
        if (k >= n_) return out;
        std::size_t base = k >> 6, shift = k & 63;
        for (std::size_t j = 0; j + base < blk_.size(); ++j) {
            std::uint64_t w = blk_[base + j] >> shift;
            if (shift && base + j + 1 < blk_.size())
                w |= blk_[base + j + 1] << (64 - shift);
            out.blk_[j] = w;
        }
        out.clear_tail();
        return out;
    }

    // First index in [0, limit) where the two differ, or npos. Both must
    // cover limit.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    static std::size_t first_diff(const Bits& a, const Bits& b, std::size_t limit) {
        std::size_t nb = (limit + 63) >> 6;
        for (std::size_t j = 0; j < nb; ++j) {
            std::uint64_t x = a.blk_[j] ^ b.blk_[j];
            if (j == nb - 1 && (limit & 63)) x &= (1ULL << (limit & 63)) - 1;
            if (x) return (j << 6) + static_cast<std::size_t>(std::countr_zero(x));
        }
        return npos;
    }

    // Hamming distance on [0, limit).
    static std::size_t mismatch_count(const Bits& a, const Bits& b, std::size_t limit) {
        std::size_t nb = (limit + 63) >> 6, c = 0;
        for (std::size_t j = 0; j < nb; ++j) {
            std::uint64_t x = a.blk_[j] ^ b.blk_[j];
            if (j == nb - 1 && (limit & 63)) x &= (1ULL << (limit & 63)) - 1;
            c += static_cast<std::size_t>(std::popcount(x));
        }
        return c;
    }

    std::size_t next_one(std::size_t from) const {
        if (from >= n_) return npos;
        std::size_t j = from >> 6;
        std::uint64_t w = blk_[j] & (~0ULL << (from & 63));
        while (true) {
            if (w) return (j << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++j >= blk_.size()) return npos;
            w = blk_[j];
        }
    }

    template <typename F>
    void for_each_set(F&& f) const {
        for (std::size_t j = 0; j < blk_.size(); ++j) {
            std::uint64_t w = blk_[j];
            while (w) {
                f((j << 6) + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    // Strict lexicographic order on letters; shorter word that is a prefix
    // of the longer compares less.
    static bool lex_less(const Bits& a, const Bits& b) {
        std::size_t m = a.n_ < b.n_ ? a.n_ : b.n_;
        std::size_t d = first_diff(a, b, m);
        if (d != npos) return !a.get(d) && b.get(d);
        return a.n_ < b.n_;
    }

    // Canonical enumeration order for code levels.
    static bool len_lex_less(const Bits& a, const Bits& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        return lex_less(a, b);
    }

    std::size_t hash() const {
        std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
        for (auto w : blk_) h = (h ^ w) * 0x100000001b3ULL;
        return h;
    }

private:
    static std::size_t blocks_for(std::size_t n) { return (n + 63) >> 6; }

    void clear_tail() {
        if (n_ & 63) blk_[n_ >> 6] &= (1ULL << (n_ & 63)) - 1;
        std::size_t need = blocks_for(n_);
        for (std::size_t j = need; j < blk_.size(); ++j) blk_[j] = 0;
    }

    template <typename Op>
    void bin_op(const Bits& o, Op op) {
        if (o.n_ != n_) throw std::invalid_argument("Bits: size mismatch");
        for (std::size_t j = 0; j < blk_.size(); ++j) blk_[j] = op(blk_[j], o.blk_[j]);
        clear_tail();
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> blk_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return b.hash(); }
};

} // namespace shiftlab
