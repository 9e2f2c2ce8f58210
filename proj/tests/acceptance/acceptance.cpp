// Acceptance suite: one line per criterion, exit nonzero on any failure.

#include "shiftlab/coded.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/metrics.hpp"
#include "shiftlab/proximal.hpp"
#include "shiftlab/pseudo_orbit.hpp"

#include "../generators.hpp"
#include "../testers.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace shiftlab;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. E-set densities at L = 10^6 within the construction's bound; the
//    documented i = 1, L = 100 window value is exact.
Outcome criterion_esets() {
    auto t0 = Clock::now();
    std::ostringstream os;
    bool pass = true;
    if (density_window(E_set(1, 100), 100) != Rational(22, 100)) {
        pass = false;
        os << "E_1 density at 100 is off; ";
    }
    std::uint64_t denom = 4;
    for (std::uint32_t i = 1; i <= 4; ++i) {
        auto es = E_set(i, 1000000);
        Rational d = density_window(es, 1000000);
        if (d > Rational(1, static_cast<long>(denom))) {
            pass = false;
            os << "E_" << i << " density " << to_string(d) << " > 1/" << denom << "; ";
        }
        denom *= 5;
    }
    double el = seconds_since(t0);
    if (el >= 5.0) {
        pass = false;
        os << "took " << el << "s (budget 5s); ";
    }
    os << std::fixed << std::setprecision(2) << el << "s";
    return {pass, os.str()};
}

// 2. Z_1 word facts, exhaustive nesting of Y_2 in Y_1, hereditary sampling.
Outcome criterion_proximal_facts() {
    auto t0 = Clock::now();
    std::ostringstream os;
    bool pass = true;
    auto z1 = z_shift(1);
    if (!member(z1, ones_word(8)) || member(z1, ones_word(9))) {
        pass = false;
        os << "1^8/1^9 membership wrong; ";
    }
    auto y2 = intersect({z_shift(1), z_shift(2)});
    for (std::size_t k = 1; k <= 12 && pass; ++k) {
        for (const auto& w : enumerate_language(y2, k))
            if (!member(z1, w)) {
                pass = false;
                os << "nesting fails at k=" << k << "; ";
                break;
            }
    }
    auto rep = is_hereditary_sample(y2, 12, 10000, 20260810);
    if (!rep.violations.empty()) {
        pass = false;
        os << rep.violations.size() << " hereditary counterexamples; ";
    }
    double el = seconds_since(t0);
    if (el >= 30.0) {
        pass = false;
        os << "took " << el << "s (budget 30s); ";
    }
    os << std::fixed << std::setprecision(2) << el << "s";
    return {pass, os.str()};
}

// 3. Coded-level numbers: base stats, the minimal t, the exact failing
//    condition at t = 18, and the toy length multiset.
Outcome criterion_coded_numbers() {
    std::ostringstream os;
    bool pass = true;
    auto t19 = ParamSeq::of({19});
    auto st1 = level_stats(t19, 1);
    if (!(st1.s == 1 && st1.l == 2 && st1.k == 2 && st1.tau_len == 3)) {
        pass = false;
        os << "base stats wrong; ";
    }
    if (min_valid_t(st1, 1) != 19) {
        pass = false;
        os << "min_valid_t(1) != 19; ";
    }
    auto c18 = check_conditions(st1, Int(18), 1);
    if (!(c18.c1 && c18.c2 && c18.c3 && !c18.c4)) {
        pass = false;
        os << "t=18 does not fail exactly condition (4); ";
    }
    auto toy = build_levels(ParamSeq::of({2}), 2);
    std::multiset<std::size_t> lens;
    for (const auto& w : toy[1]->words()) lens.insert(w.size());
    if (lens != std::multiset<std::size_t>{5, 6, 6, 7}) {
        pass = false;
        os << "toy length multiset wrong; ";
    }
    auto st2 = level_stats(ParamSeq::of({2}), 2);
    if (!(st2.s == 5 && st2.l == 7)) {
        pass = false;
        os << "toy recurrence wrong; ";
    }
    os << "thresholds and multisets verified";
    return {pass, os.str()};
}

// 4. Ratio window 1/2 <= s/l < 2/3 under valid parameters through level 3;
//    the toy t(1)=2 witness 5/7 breaks the 2/3 bound at level 2.
Outcome criterion_ratios() {
    std::ostringstream os;
    bool pass = true;
    ParamSeq valid;
    valid.t.push_back(min_valid_t(level_stats(valid, 1), 1));
    valid.t.push_back(min_valid_t(level_stats(valid, 2), 2));
    for (std::size_t n = 1; n <= 3; ++n) {
        auto st = level_stats(valid, n);
        if (!(2 * st.s >= st.l && 3 * st.s < 2 * st.l)) {
            pass = false;
            os << "ratio fails at n=" << n << "; ";
        }
    }
    auto toy2 = level_stats(ParamSeq::of({2}), 2);
    if (!(3 * toy2.s >= 2 * toy2.l && toy2.s == 5 && toy2.l == 7)) {
        pass = false;
        os << "toy 5/7 witness missing; ";
    }
    os << "t(1)=" << valid.t[0].str() << ", t(2)=" << valid.t[1].str();
    return {pass, os.str()};
}

// 5. Metric sandwich suite at L = 10^4 over 10^3 random eventually-periodic
//    pairs: the two dbar/dist_B inequalities with the re-derived constant,
//    and both rho_B' inequalities, in exact arithmetic.
Outcome criterion_sandwich() {
    auto t0 = Clock::now();
    std::ostringstream os;
    const std::size_t L = 10000, B = 64;
    std::mt19937_64 rng(0x5eedu);
    std::size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = testers::random_eventually_periodic(rng);
        auto y = testers::random_eventually_periodic(rng);
        Rational db = dbar_window(x, y, L);
        auto est = dist_B_window(x, y, L, B);
        if (!(db <= est.lo)) ++violations;
        std::size_t ext = Bits::mismatch_count(x.window(0, L + B), y.window(0, L + B), L + B);
        Rational upper = Rational(Int(2 * ext), Int(L)) + pow2(-64);
        if (!(est.hi <= upper)) ++violations;
        Rational mean = est.lo;
        Rational r = rho_B_prime_orbits(x, y, L, B);
        Rational slack(1, L);
        if (r > slack && !((r - slack) * (r - slack) <= mean)) ++violations;
        if (!(mean <= 2 * r)) ++violations;
    }
    bool pass = violations == 0;
    if (violations) os << violations << " violations; ";
    double el = seconds_since(t0);
    if (el >= 60.0) {
        pass = false;
        os << "took " << el << "s (budget 60s); ";
    }
    os << "1000 pairs, " << std::fixed << std::setprecision(2) << el << "s";
    return {pass, os.str()};
}

// 6. The AAPO -> vague window implication as a literal set inclusion on
//    generated pseudo-orbits over Z_1.
Outcome criterion_aapo_vague() {
    std::ostringstream os;
    auto z1 = z_shift(1);
    const std::size_t L = 1000;
    std::size_t violations = 0, instances = 0;
    double densities[3] = {0.0, 0.01, 0.1};
    for (int trial = 0; trial < 100; ++trial) {
        double dens = densities[trial % 3];
        auto ps = gen_pseudo_orbit(z1, L + 16, dens, 777 + trial);
        for (std::size_t a : {2u, 4u})
            for (std::size_t k : {2u, 4u, 8u}) {
                ++instances;
                Rational eps = pow2(-static_cast<std::int64_t>(a));
                Rational delta = pow2(-static_cast<std::int64_t>(a + k));
                auto good = aapo_good_set(ps, delta, L + k);
                auto runs = run_set(good, k, L);
                auto vague = vague_good_set(ps, eps, k, L);
                Bits leftover = runs.set.window();
                leftover.and_not(vague.window());
                if (!leftover.none()) ++violations;
            }
    }
    bool pass = violations == 0;
    os << instances << " inclusion instances, " << violations << " violations";
    return {pass, os.str()};
}

// 7. The word bridges: guarantee arithmetic (m, N) = (3, 13) at delta = 1/2,
//    exact-orbit round trips, and the average-pseudo-orbit guarantee on 100
//    random admissible families.
Outcome criterion_bridges() {
    std::ostringstream os;
    bool pass = true;
    auto z1 = z_shift(1);

    auto pr = avg_po_params_for_delta(Rational(1, 2));
    if (!(pr.m == 3 && pr.N == 13)) {
        pass = false;
        os << "parameter arithmetic off; ";
    }

    std::mt19937_64 rng(20250607);
    // round trip on exact orbits
    for (int t = 0; t < 10; ++t) {
        auto x = complete_greedy(z1, sample_word(z1, 48, rng));
        auto orbit = orbit_of(x, 41);
        auto words = po_to_words(orbit, 8);
        auto rebuilt = words_to_avg_po(words, 3, z1);
        for (std::size_t n = 0; n < rebuilt.po.horizon(); ++n) {
            std::size_t word_end = ((n / 8) + 1) * 8;
            if (rebuilt.po[n].window(0, word_end - n) != x.window(n, word_end - n)) {
                pass = false;
                os << "round trip mismatch; ";
                break;
            }
        }
        if (!pass) break;
    }

    std::size_t failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Word> words;
        std::size_t nwords = 6 + rng() % 5;
        for (std::size_t i = 0; i < nwords; ++i)
            words.push_back(sample_word(z1, 13 + rng() % 8, rng));
        auto r = words_to_avg_po(words, 3, z1);
        std::size_t K = 4, L = r.po.horizon() - K - 14;
        if (!check_delta_avg_po(r.po, r.delta_guarantee, 13, K, L).verdict) ++failures;
    }
    if (failures) {
        pass = false;
        os << failures << " families fail their own guarantee; ";
    }
    os << "100 families at the (3, 13) guarantee";
    return {pass, os.str()};
}

// 8. Completeness constructors: synthetic Cauchy families through both
//    splice certificates, plus the genuine-parameter close-word and
//    extension run at t(1) = 19.
Outcome criterion_constructors() {
    auto t0 = Clock::now();
    std::ostringstream os;
    bool pass = true;

    // (a) proximal, 20 families at L = 1e5
    std::size_t cert_failures = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto family = testers::gen_proximal_family(4, 100000, 42000 + trial);
        try {
            auto res = dbar_limit_proximal(family);
            if (!res.cert.all_pass()) ++cert_failures;
        } catch (const std::exception& e) {
            ++cert_failures;
        }
    }
    if (cert_failures) {
        pass = false;
        os << cert_failures << "/20 proximal certificates failed; ";
    }

    // (b) minimal at toy parameters
    std::size_t toy_failures = 0;
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = testers::gen_minimal_family_toy(2, 2, 9100 + trial);
        MinimalLimitParams params;
        params.waive_conditions = true;
        try {
            auto res = dbar_limit_minimal(inst.family, inst.t, params);
            if (!res.cert.all_pass()) ++toy_failures;
            bool growth = true;
            for (std::size_t j = 1; j < res.cert.alphas.size(); ++j)
                growth = growth && res.cert.alphas[j] >= 2 * res.cert.alphas[j - 1];
            if (!growth) ++toy_failures;
        } catch (const std::exception&) {
            ++toy_failures;
        }
    }
    if (toy_failures) {
        pass = false;
        os << toy_failures << "/10 toy minimal runs failed; ";
    }

    // genuine parameters through B_2: close word and one extension level
    try {
        ParamSeq genuine;
        genuine.t.push_back(Int(19));
        genuine.t.push_back(min_valid_t(level_stats(genuine, 2), 2));
        auto chain = build_levels(genuine, 3);
        if (!chain[1]->is_explicit()) throw std::logic_error("B_2 should be explicit");
        Word w2min = chain[1]->word_of_length(chain[1]->stats().s);
        Word x2 = repeat(w2min, 4);
        auto ap = approx_word(x2, *chain[0], genuine.at(1));
        if (!(Int(ap.mismatches) <= ap.bound) || !chain[1]->contains(ap.w)) {
            pass = false;
            os << "genuine close-word certificate failed; ";
        }
        Word w3min = chain[2]->word_of_length(chain[2]->stats().s);
        std::size_t need = chain[2]->stats().l.convert_to<std::size_t>() + 256;
        Word x3 = w3min;
        while (x3.size() < need) x3.append(w3min);
        auto ext = extend_word(w2min, x3, 2, 3, chain, genuine);
        bool ok = ext.conditions_ok && ext.rate_bound_all;
        for (const auto& c : ext.checks)
            if (c.name == "extension_unconditional" && !c.pass) ok = false;
        if (!ok) {
            pass = false;
            os << "genuine extension certificate failed; ";
        }
        os << "genuine |w3| = " << ext.w.size() << "; ";
    } catch (const std::exception& e) {
        pass = false;
        os << "genuine run: " << e.what() << "; ";
    }

    double el = seconds_since(t0);
    if (el >= 600.0) {
        pass = false;
        os << "took " << el << "s (budget 600s); ";
    }
    os << std::fixed << std::setprecision(1) << el << "s";
    return {pass, os.str()};
}

// 9. Tracing concatenations of admissible words: the mismatch density is
//    nonincreasing in the word-length floor, up to one adjacent inversion.
Outcome criterion_shadowing_curve() {
    std::ostringstream os;
    auto z1 = z_shift(1);
    std::mt19937_64 rng(31337);
    const std::size_t target = 512;
    std::vector<std::size_t> floors = {4, 8, 16, 32};
    std::vector<double> mean_density(floors.size(), 0.0);
    for (int trial = 0; trial < 50; ++trial) {
        for (std::size_t fi = 0; fi < floors.size(); ++fi) {
            Word w;
            while (w.size() < target) w.append(sample_word(z1, floors[fi], rng));
            auto tr = min_hamming_trace(z1, w);
            mean_density[fi] += static_cast<double>(tr.mismatches) / static_cast<double>(w.size());
        }
    }
    for (auto& d : mean_density) d /= 50.0;
    std::size_t inversions = 0;
    for (std::size_t i = 0; i + 1 < mean_density.size(); ++i)
        if (mean_density[i + 1] > mean_density[i] + 1e-12) ++inversions;
    bool pass = inversions <= 1;
    os << "densities";
    for (auto d : mean_density) os << ' ' << std::setprecision(4) << d;
    os << ", inversions " << inversions;
    return {pass, os.str()};
}

// 10. Tracer optimality against brute force over the full language slice.
Outcome criterion_tracer_oracle() {
    std::ostringstream os;
    auto z1 = z_shift(1);
    std::mt19937_64 rng(64206);
    std::size_t failures = 0;
    std::vector<std::vector<Word>> langs(13);
    for (std::size_t n = 1; n <= 12; ++n) langs[n] = enumerate_language(z1, n);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 12;
        Word target = testers::random_word(rng, n);
        std::size_t best = n + 1;
        for (const auto& cand : langs[n])
            best = std::min(best, Bits::mismatch_count(cand, target, n));
        auto res = min_hamming_trace(z1, target);
        if (res.mismatches != best || !member(z1, res.traced)) ++failures;
    }
    bool pass = failures == 0;
    os << "200 targets, " << failures << " failures";
    return {pass, os.str()};
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"e-set densities", criterion_esets},
        {"proximal graph facts", criterion_proximal_facts},
        {"coded-level numbers", criterion_coded_numbers},
        {"ratio invariants", criterion_ratios},
        {"metric sandwich suite", criterion_sandwich},
        {"aapo-vague window consistency", criterion_aapo_vague},
        {"word bridge round-trips", criterion_bridges},
        {"completeness constructors", criterion_constructors},
        {"dbar-shadowing curve", criterion_shadowing_curve},
        {"tracer optimality oracle", criterion_tracer_oracle},
    };
    int failures = 0;
    int idx = 0;
    for (const auto& e : entries) {
        ++idx;
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::cout << "criterion " << idx << " (" << e.name << "): " << (o.pass ? "PASS" : "FAIL")
                  << " — " << o.detail << "\n";
        if (!o.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << " (" << (10 - failures)
              << "/10)\n";
    return failures == 0 ? 0 : 1;
}
