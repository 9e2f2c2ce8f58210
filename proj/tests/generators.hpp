#pragma once

// synthetic-instance generators shared by the unit and acceptance suites

#include "shiftlab/coded.hpp"
#include "shiftlab/proximal.hpp"

#include <random>
#include <vector>

namespace shiftlab::testers {

// Random word of L(Y_n): a masked walk over the per-factor subset automata,
// picking 1 with the given bias whenever both letters stay alive.
inline Word sample_Yn_word(std::uint32_t n, std::size_t len, std::mt19937_64& rng,
                           double one_bias = 0.35) {
    YnMachine machine(n);
    auto masks = machine.initial();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Word w;
    for (std::size_t i = 0; i < len; ++i) {
        auto m0 = masks, m1 = masks;
        bool ok0 = machine.step(m0, false);
        bool ok1 = machine.step(m1, true);
        bool pick1;
        if (ok0 && ok1) pick1 = coin(rng) < one_bias;
        else pick1 = ok1;
        w.push_back(pick1);
        masks = pick1 ? std::move(m1) : std::move(m0);
    }
    return w;
}

// Windowed-Cauchy family for the proximal splice: a hereditary base word
// (admissible for Y_M, zeroed on E_M) perturbed per level by independently
// zeroing 1-positions, calibrated so consecutive members differ at density
// about a quarter of the 5^{-n-1} budget.
inline std::vector<Word> gen_proximal_family(std::size_t M, std::size_t L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Word base = sample_Yn_word(static_cast<std::uint32_t>(M), L, rng);
    base.and_not(E_set(static_cast<std::uint32_t>(M), L).window());
    double d1 = static_cast<double>(base.popcount()) / static_cast<double>(L);
    if (d1 <= 0) d1 = 1;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Word> family;
    double budget = 1.0;
    for (std::size_t n = 1; n <= M; ++n) {
        budget /= 5.0; // 5^-n
        double rate = budget / 5.0 / 4.0 / d1; // flip density ~ 5^-(n+1)/4
        Word x = base;
        base.for_each_set([&](std::size_t i) {
            if (coin(rng) < rate) x.set(i, false);
        });
        family.push_back(std::move(x));
    }
    return family;
}

struct MinimalFamilyInstance {
    std::vector<Word> family;
    std::vector<CodeLevelPtr> chain;
    ParamSeq t;
};

// Windowed-Cauchy family for the minimal construction at toy parameters:
// slot sequences over two same-length level-5 code words, agreeing on slot 0
// so the early window is clean and sparsely substituted beyond it.
inline MinimalFamilyInstance gen_minimal_family_toy(std::size_t M, std::size_t slots,
                                                    std::uint64_t seed) {
    MinimalFamilyInstance inst;
    inst.t = ParamSeq::of({2, 2, 2, 2, 2, 2});
    inst.chain = build_levels(inst.t, 5);
    const auto& lvl5 = *inst.chain[4];
    // two distinct level-5 words of equal length: different block splits
    Int mid = (lvl5.stats().s + lvl5.stats().l) / 2;
    Word wa = lvl5.word_of_length(mid);
    const auto& lvl4 = *inst.chain[3];
    Word wb;
    {
        // same total length through a different split over the two
        // level-4 blocks
        Int rest = mid - lvl4.stats().tau_len;
        Int b1 = rest / 2, b2 = rest - b1;
        Word alt = lvl4.word_of_length(b1 - 1);
        alt.append(lvl4.word_of_length(b2 + 1));
        alt.append(lvl4.tau());
        wb = std::move(alt);
    }
    if (wa.size() != wb.size() || wa == wb)
        throw std::logic_error("gen_minimal_family_toy: bad word pair");
    double h = static_cast<double>(Bits::mismatch_count(wa, wb, wa.size()));
    double block_frac = h / static_cast<double>(wa.size());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    double budget = 0.25; // 2^{-n-2} at n = 0
    for (std::size_t n = 1; n <= M; ++n) {
        budget /= 2; // 2^{-n-2}
        double rate = std::min(0.5, budget / 10.0 / block_frac);
        Word x;
        for (std::size_t sidx = 0; sidx < slots; ++sidx) {
            bool swap = sidx > 0 && coin(rng) < rate;
            x.append(swap ? wb : wa);
        }
        inst.family.push_back(std::move(x));
    }
    return inst;
}

} // namespace shiftlab::testers
