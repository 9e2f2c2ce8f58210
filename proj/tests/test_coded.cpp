#include <catch2/catch_amalgamated.hpp>

#include "shiftlab/coded.hpp"
#include "generators.hpp"
#include "testers.hpp"

#include <random>

using namespace shiftlab;

TEST_CASE("level_stats from B_1 = {0, 11}") {
    auto t19 = ParamSeq::of({19});
    auto base = level_stats(t19, 1);
    CHECK(base.s == 1);
    CHECK(base.l == 2);
    CHECK(base.k == 2);
    CHECK(base.tau_len == 3);

    auto toy = level_stats(ParamSeq::of({2}), 2);
    CHECK(toy.s == 5);
    CHECK(toy.l == 7);
    CHECK(toy.k == 4);
    CHECK(toy.tau_len == 24); // 5 + 6 + 6 + 7

    auto genuine = level_stats(t19, 2);
    CHECK(genuine.s == 22);
    CHECK(genuine.l == 41);
    CHECK(genuine.k == Int(1) << 19);
    CHECK(genuine.tau_len == 16515072);
}

TEST_CASE("stats recurrence agrees with explicit enumeration") {
    // toy chain through level 3: the tuple count really is the cardinality
    auto t = ParamSeq::of({2, 2});
    auto chain = build_levels(t, 3);
    REQUIRE(chain[1]->is_explicit());
    REQUIRE(chain[2]->is_explicit());
    auto lazy2 = level_stats(t, 2);
    auto lazy3 = level_stats(t, 3);
    CHECK(chain[1]->stats().k == lazy2.k);
    CHECK(chain[1]->stats().tau_len == lazy2.tau_len);
    CHECK(chain[2]->stats().k == lazy3.k); // 16 distinct words at level 3
    CHECK(chain[2]->stats().s == lazy3.s);
    CHECK(chain[2]->stats().l == lazy3.l);
    CHECK(chain[2]->stats().tau_len == lazy3.tau_len);
    CHECK(chain[2]->words().size() == 16);
}

TEST_CASE("next_level explicit words") {
    auto chain = build_levels(ParamSeq::of({2}), 2);
    const auto& w2 = chain[1]->words();
    REQUIRE(w2.size() == 4);
    std::multiset<std::size_t> lengths;
    for (const auto& w : w2) lengths.insert(w.size());
    CHECK(lengths == std::multiset<std::size_t>{5, 6, 6, 7});

    // every word ends with tau(1) = 011
    for (const auto& w : w2)
        CHECK(w.subbits(w.size() - 3, 3) == word("011"));

    // Fact: each B_1 word occurs inside each B_2 word
    for (const auto& w : w2) {
        bool has_zero = false, has_11 = false;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!w.get(i)) has_zero = true;
            if (i + 1 < w.size() && w.get(i) && w.get(i + 1)) has_11 = true;
        }
        CHECK(has_zero);
        CHECK(has_11);
    }
}

TEST_CASE("check_conditions at level 1") {
    auto stats1 = level_stats(ParamSeq::of({2}), 1);
    // thresholds 3 (strict), 2, 7.5, 18 (strict)
    auto at = [&](std::uint64_t tval) { return check_conditions(stats1, Int(tval), 1); };
    CHECK(at(19).all());
    auto r18 = at(18);
    CHECK(r18.c1);
    CHECK(r18.c2);
    CHECK(r18.c3);
    CHECK_FALSE(r18.c4); // exactly condition (4) fails
    auto r4 = at(4);
    CHECK(r4.c1);
    CHECK(r4.c2);
    CHECK_FALSE(r4.c3);
    auto r3 = at(3);
    CHECK_FALSE(r3.c1); // strict at the boundary
    auto r8 = at(8);
    CHECK(r8.c3); // 8 >= 7.5

    // invalid parameter prefix: toy t(1)=2 gives s(2)/l(2) = 5/7, ratio broken
    auto stats2 = level_stats(ParamSeq::of({2}), 2);
    CHECK_THROWS_AS(check_conditions(stats2, Int(100), 2), ratio_violation_error);
}

TEST_CASE("min_valid_t") {
    auto t_any = ParamSeq::of({2});
    CHECK(min_valid_t(level_stats(t_any, 1), 1) == 19);
    // monotone: anything at or above the minimum passes
    auto stats1 = level_stats(t_any, 1);
    for (std::uint64_t tv : {19ull, 25ull, 100ull})
        CHECK(check_conditions(stats1, Int(tv), 1).all());

    // level 2 with the genuine prefix: recompute the four thresholds directly
    auto stats2 = level_stats(ParamSeq::of({19}), 2);
    Int t2 = min_valid_t(stats2, 2);
    CHECK(check_conditions(stats2, t2, 2).all());
    CHECK_FALSE(check_conditions(stats2, t2 - 1, 2).all());
}

TEST_CASE("ratio invariants") {
    // valid parameters through level 3
    auto stats1 = level_stats(ParamSeq::of({2}), 1);
    Int t1 = min_valid_t(stats1, 1);
    ParamSeq valid;
    valid.t.push_back(t1);
    Int t2 = min_valid_t(level_stats(valid, 2), 2);
    valid.t.push_back(t2);
    for (std::size_t n = 1; n <= 3; ++n) {
        auto st = level_stats(valid, n);
        CHECK(2 * st.s >= st.l);      // s/l >= 1/2
        CHECK(3 * st.s < 2 * st.l);   // s/l < 2/3
    }
    // the toy violation witness: t(1)=2 gives s(2)/l(2) = 5/7 >= 2/3
    auto toy2 = level_stats(ParamSeq::of({2}), 2);
    CHECK(3 * toy2.s >= 2 * toy2.l);
}

TEST_CASE("length interval property and word_of_length") {
    auto chain = build_levels(ParamSeq::of({2, 2, 2, 2}), 5);
    // explicit levels: the length multiset covers exactly [s, l]
    for (std::size_t lvl : {2u, 3u, 4u}) {
        const auto& level = *chain[lvl - 1];
        std::set<std::size_t> lengths;
        for (const auto& w : level.words()) lengths.insert(w.size());
        std::size_t s = level.stats().s.convert_to<std::size_t>();
        std::size_t l = level.stats().l.convert_to<std::size_t>();
        for (std::size_t m = s; m <= l; ++m) REQUIRE(lengths.count(m));
        REQUIRE(*lengths.begin() == s);
        REQUIRE(*lengths.rbegin() == l);
    }
    // toy B_2: a word of length 6 exists and is returned
    CHECK(chain[1]->word_of_length(Int(6)).size() == 6);
    // extremes: all-minimal and all-maximal block choices
    CHECK(chain[1]->word_of_length(chain[1]->stats().s) == word("00011"));
    CHECK(chain[1]->word_of_length(chain[1]->stats().l) == word("1111011"));

    // lazy level: spot-check lengths across [s(5), l(5)]
    const auto& l5 = *chain[4];
    REQUIRE_FALSE(l5.is_explicit());
    for (const Int& m : {l5.stats().s, Int((l5.stats().s + l5.stats().l) / 2), l5.stats().l}) {
        Word w = l5.word_of_length(m);
        REQUIRE(Int(w.size()) == m);
        // structural sanity: ends with tau(4)
        Word tau4 = chain[3]->tau();
        REQUIRE(w.subbits(w.size() - tau4.size(), tau4.size()) == tau4);
    }
    CHECK_THROWS_AS(l5.word_of_length(l5.stats().l + 1), std::invalid_argument);
}

TEST_CASE("connecting_words") {
    auto chain = build_levels(ParamSeq::of({2}), 2);
    const auto& b1 = *chain[0];
    Word zero = word("0");

    auto c1 = connecting_words(b1, zero, zero, Int(1));
    std::size_t total1 = 0;
    for (const auto& c : c1) total1 += c.size();
    CHECK(total1 == 3); // |b1 b2| + alpha
    CHECK(c1.size() == 2);

    auto c2 = connecting_words(b1, zero, zero, Int(2));
    std::size_t total2 = 0;
    for (const auto& c : c2) total2 += c.size();
    CHECK(total2 == 4);
    CHECK(c2.size() == 2); // ("11", "11")
    CHECK(c2[0] == word("11"));
    CHECK(c2[1] == word("11"));

    // contract: total length always |b1 b2| + alpha, pieces are code words
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        const auto& ws = chain[0]->words();
        Word wa = ws[rng() % ws.size()], wb = ws[rng() % ws.size()];
        Int alpha(1 + rng() % 2);
        auto cs = connecting_words(b1, wa, wb, alpha);
        std::size_t total = 0;
        for (const auto& c : cs) {
            total += c.size();
            REQUIRE(b1.contains(c));
        }
        REQUIRE(Int(total) == Int(wa.size()) + Int(wb.size()) + alpha);
        REQUIRE((cs.size() == 2 || cs.size() == 3));
    }
}

TEST_CASE("parse") {
    auto chain = build_levels(ParamSeq::of({2, 2}), 3);
    const auto& lvl2 = *chain[1];

    Word block = word("00011");
    Word x = repeat(block, 6);
    auto pr = parse(x, lvl2);
    CHECK(pr.alpha == 0);
    for (std::size_t i = 0; i < pr.boundaries.size(); ++i) REQUIRE(pr.boundaries[i] == 5 * i);

    // every cut position recovers a consistent alpha
    for (std::size_t c = 0; c < 5; ++c) {
        Word shifted = x.subbits(c, x.size() - c);
        auto ps = parse(shifted, lvl2);
        REQUIRE(ps.alpha == (5 - c) % 5);
    }

    CHECK_THROWS_AS(parse(ones_word(20), lvl2), parse_error);
}

TEST_CASE("approx_word") {
    auto chain = build_levels(ParamSeq::of({2, 2}), 3);
    const auto& lvl1 = *chain[0];

    Word x = repeat(word("00011"), 5);
    auto ap = approx_word(x, lvl1, Int(2));
    CHECK(ap.bound == 9); // 3 l(1) + |tau(1)|
    CHECK(ap.mismatches == 0);
    CHECK(ap.w == word("00011"));
    CHECK(chain[1]->contains(ap.w));

    // corrupted head (keeping 1-runs even, so the level-1 parse survives)
    Word y = x;
    y.set(0, !y.get(0));
    y.set(1, !y.get(1));
    auto ap2 = approx_word(y, lvl1, Int(2));
    CHECK(ap2.mismatches > 0);
    CHECK(Int(ap2.mismatches) <= ap2.bound);
    CHECK(chain[1]->contains(ap2.w));

    // randomized: approximations of shifted code streams keep the bound
    std::mt19937_64 rng(31);
    const auto& w2 = chain[1]->words();
    for (int t = 0; t < 1000; ++t) {
        Word stream;
        while (stream.size() < 40) stream.append(w2[rng() % w2.size()]);
        std::size_t cut = rng() % 5;
        Word xx = stream.subbits(cut, stream.size() - cut);
        for (int flips = rng() % 3; flips-- > 0;) {
            std::size_t p = rng() % 6;
            xx.set(p, !xx.get(p));
        }
        try {
            auto ap3 = approx_word(xx, lvl1, Int(2));
            REQUIRE(Int(ap3.mismatches) <= ap3.bound);
            REQUIRE(chain[1]->contains(ap3.w));
        } catch (const parse_error&) {
            // flips can make the visible head unparseable; that is a
            // legitimate refusal, not a bound violation
        }
    }
}

TEST_CASE("extend_word at toy levels") {
    auto t = ParamSeq::of({2, 2, 2, 2});
    auto chain = build_levels(t, 5);

    // x follows a fixed level-4 stream; extension from its leading block
    const auto& lvl4 = *chain[3];
    Word base = lvl4.word_of_length(lvl4.stats().s);
    Word x = repeat(base, 270); // long enough for a level-5 extension

    // pick u = the actual leading level-3 block of the stream
    auto pr = parse(x.subbits(0, 4000), *chain[2]);
    Word u;
    REQUIRE(pr.alpha == 0);
    u = x.subbits(0, pr.boundaries[1]);
    REQUIRE(chain[2]->contains(u));

    auto ext = extend_word(u, x, 3, 4, chain, t, /*waive=*/true);
    CHECK(ext.w.size() >= chain[3]->stats().s.convert_to<std::size_t>());
    CHECK(ext.w.subbits(0, u.size()) == u);
    CHECK(all_checks_pass(ext.checks));
    for (const auto& c : ext.checks)
        if (c.name == "extension_unconditional") REQUIRE(c.pass);

    // chain two steps
    auto ext2 = extend_word(u, x, 3, 5, chain, t, /*waive=*/true);
    CHECK(ext2.w.subbits(0, u.size()) == u);
    for (const auto& c : ext2.checks)
        if (c.name == "extension_unconditional") REQUIRE(c.pass);

    // conditions are rightly rejected without the waiver at toy parameters
    CHECK_THROWS_AS(extend_word(u, x, 3, 4, chain, t, /*waive=*/false), std::invalid_argument);
}

TEST_CASE("dbar_limit_minimal on a constant family") {
    auto t = ParamSeq::of({2, 2, 2, 2, 2});
    auto chain = build_levels(t, 5);
    Word omega = chain[4]->word_of_length(chain[4]->stats().s); // all-minimal choices
    Word x = repeat(omega, 2);
    std::vector<Word> family{x, x};
    MinimalLimitParams params;
    params.waive_conditions = true;
    auto res = dbar_limit_minimal(family, t, params);
    REQUIRE(res.cert.complete);
    CHECK(res.cert.m_levels == std::vector<std::size_t>{4, 5});
    CHECK(res.cert.all_pass());
    // the trace follows the common point exactly
    CHECK(Bits::mismatch_count(res.w_prefix, x, res.w_prefix.size()) == 0);
}

TEST_CASE("dbar_limit_minimal on synthetic toy families") {
    for (std::uint64_t seed : {71ull, 72ull}) {
        auto inst = testers::gen_minimal_family_toy(2, 2, seed);
        MinimalLimitParams params;
        params.waive_conditions = true;
        auto res = dbar_limit_minimal(inst.family, inst.t, params);
        REQUIRE(res.cert.complete);
        REQUIRE(res.cert.all_pass());
        REQUIRE(res.cert.alphas.size() == 2);
        CHECK(res.cert.alphas[1] >= 2 * res.cert.alphas[0]);
        // certificate final distances are small in absolute terms too
        for (const auto& c : res.cert.checks)
            if (c.name == "final_dbar") CHECK(c.actual <= c.bound);
    }
}

TEST_CASE("dbar_limit_minimal rejects a non-Cauchy family") {
    auto t = ParamSeq::of({2, 2, 2, 2, 2});
    auto chain = build_levels(t, 5);
    Word omega = chain[4]->word_of_length(chain[4]->stats().s);
    Word x = repeat(omega, 2);
    Word y = x;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 150000; ++i) {
        std::size_t p = rng() % y.size();
        y.set(p, !y.get(p));
    }
    MinimalLimitParams params;
    params.waive_conditions = true;
    CHECK_THROWS_AS(dbar_limit_minimal({x, y}, t, params), std::invalid_argument);
}

TEST_CASE("genuine-parameter close words keep their certificate bound") {
    ParamSeq genuine;
    genuine.t.push_back(Int(19));
    auto chain = build_levels(genuine, 2);
    REQUIRE(chain[1]->is_explicit());
    REQUIRE(chain[1]->words().size() == (1u << 19));

    std::mt19937_64 rng(190);
    const auto& w2 = chain[1]->words();
    for (int trial = 0; trial < 10; ++trial) {
        // random stream of genuine B_2 words, random cut, corrupted head
        Word stream;
        while (stream.size() < 160) stream.append(w2[rng() % w2.size()]);
        std::size_t cut = rng() % 2;
        Word x = stream.subbits(cut, stream.size() - cut);
        if (rng() & 1) { // even-run-preserving corruption
            x.set(0, !x.get(0));
            x.set(1, !x.get(1));
        }
        try {
            auto ap = approx_word(x, *chain[0], genuine.at(1));
            REQUIRE(Int(ap.mismatches) <= ap.bound); // 3 l(1) + |tau(1)| = 9
            REQUIRE(chain[1]->contains(ap.w));
        } catch (const parse_error&) {
            // corrupted heads may refuse to parse; never a bound violation
        }
    }
}
