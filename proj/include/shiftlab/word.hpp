#pragma once

#include "shiftlab/bits.hpp"

#include <string>

namespace shiftlab {

// A finite binary word is stored as a bit string; letter i is bit i.
using Word = Bits;

inline Word word(const std::string& s) { return Bits::from_string(s); }

inline Word zeros(std::size_t n) { return Word(n); }
inline Word ones_word(std::size_t n) { return Bits::ones(n); }

inline Word concat(const Word& u, const Word& v) {
    Word w = u;
    w.append(v);
    return w;
}

inline Word repeat(const Word& p, std::size_t times) {
    Word w;
    for (std::size_t i = 0; i < times; ++i) w.append(p);
    return w;
}

// Coordinate-wise order: u <= w iff u_i <= w_i everywhere (same length).
inline bool coordinatewise_leq(const Word& u, const Word& w) {
    if (u.size() != w.size()) return false;
    Word t = u;
    t &= w;
    return t == u;
}

} // namespace shiftlab
