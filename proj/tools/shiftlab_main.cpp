// shiftlab: workbench CLI for binary shift spaces — pseudometric window
// estimators, sofic presentations and checks, pseudo-orbit machinery, and
// the two completeness constructions.

#include "shiftlab/io.hpp"
#include "shiftlab/parallel.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace shiftlab;
namespace fs = std::filesystem;

namespace {

std::size_t env_budget(std::size_t fallback) {
    if (const char* v = std::getenv("SHIFTLAB_BUDGET")) return std::stoull(v);
    return fallback;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        // allow 2^-k shorthand and plain integers
        auto caret = s.find("2^");
        if (caret == 0) return pow2(std::stoll(s.substr(2)));
        return Rational(Int(s));
    }
    return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

ParamSeq parse_params(const std::string& s) {
    ParamSeq t;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) t.t.emplace_back(Int(item));
    return t;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for write: " + path);
    return file;
}

std::vector<Word> read_family(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("family dir is empty: " + dir);
    std::vector<Word> family;
    for (const auto& p : files) {
        SymSequence s = read_sequence(p.string());
        std::size_t h = s.guaranteed_horizon();
        if (h == SymSequence::unbounded) h = s.stored_prefix().size() + s.stored_period().size();
        family.push_back(s.window(0, h));
    }
    return family;
}

SoficShift shift_from_file(const std::string& path, const std::string& name) {
    return SoficShift::from_graph(read_graph(path), name);
}

struct ErrorJson {
    int code;
    std::string kind, message;
};

int fail(const std::string& kind, const std::string& message) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cout << j.dump() << "\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shiftlab: binary shift space workbench"};
    app.require_subcommand(1);
    std::size_t jobs = 1;
    app.add_option("--jobs", jobs, "worker count for window sweeps");

    // ---- metrics ----
    auto* metrics = app.add_subcommand("metrics", "pseudometric window estimators");
    metrics->require_subcommand(1);
    std::string m_a, m_b, m_out, m_L = "1000";
    std::size_t m_budget = 64;
    for (const char* verb : {"rho", "dbar", "distb", "rhobp"}) {
        auto* c = metrics->add_subcommand(verb);
        c->add_option("--a", m_a, "first sequence file")->required();
        c->add_option("--b", m_b, "second sequence file")->required();
        if (std::string(verb) != "rho") c->add_option("--L", m_L, "window length(s), comma separated");
        if (std::string(verb) != "dbar") c->add_option("--budget", m_budget, "per-term lookahead");
        c->add_option("--out", m_out, "output CSV (default stdout)");
    }

    // ---- sofic ----
    auto* sofic = app.add_subcommand("sofic", "labeled-graph presentations");
    sofic->require_subcommand(1);
    std::string s_graph, s_word, s_out;
    std::size_t s_n = 4, s_budget_opt = 0, s_detb = 4096, s_testlen = 8, s_m = 2, s_trials = 1000;
    std::uint64_t s_seed = 1;
    {
        auto* c = sofic->add_subcommand("member");
        c->add_option("--graph", s_graph)->required();
        c->add_option("--word", s_word)->required();
        c = sofic->add_subcommand("enum");
        c->add_option("--graph", s_graph)->required();
        c->add_option("--n", s_n)->required();
        c->add_option("--budget", s_budget_opt);
        c->add_option("--out", s_out);
        c = sofic->add_subcommand("chainmix");
        c->add_option("--graph", s_graph)->required();
        c->add_option("--m", s_m)->required();
        c = sofic->add_subcommand("sync");
        c->add_option("--graph", s_graph)->required();
        c->add_option("--word", s_word)->required();
        c->add_option("--det-budget", s_detb);
        c->add_option("--test-len", s_testlen);
        c = sofic->add_subcommand("trace");
        c->add_option("--graph", s_graph)->required();
        c->add_option("--word", s_word)->required();
        c = sofic->add_subcommand("hereditary");
        c->add_option("--graph", s_graph)->required();
        c->add_option("--n", s_n);
        c->add_option("--trials", s_trials);
        c->add_option("--seed", s_seed);
    }

    // ---- po ----
    auto* po = app.add_subcommand("po", "pseudo-orbit checkers and bridges");
    po->require_subcommand(1);
    std::string p_po, p_graph, p_out, p_delta = "1/4", p_eps = "1/4", p_words, p_z, p_sched;
    std::size_t p_L = 100, p_N = 1, p_K = 4, p_k = 2, p_m = 3;
    double p_density = 0.01;
    std::uint64_t p_seed = 1;
    std::string p_tol = "0";
    {
        auto* c = po->add_subcommand("check");
        std::string kind;
        c->add_option("--kind", kind, "delta|asymptotic|avg|aapo|vague")->required();
        c->add_option("--po", p_po)->required();
        c->add_option("--delta", p_delta);
        c->add_option("--eps", p_eps, "epsilon or comma list for aapo");
        c->add_option("--schedule", p_sched, "comma list for asymptotic");
        c->add_option("--L", p_L);
        c->add_option("--N", p_N);
        c->add_option("--K", p_K);
        c->add_option("--k", p_k);
        c->add_option("--tol", p_tol);
        c->add_option("--out", p_out);
        c = po->add_subcommand("gen");
        c->add_option("--graph", p_graph)->required();
        c->add_option("--L", p_L);
        c->add_option("--density", p_density);
        c->add_option("--seed", p_seed);
        c->add_option("--out", p_out);
        c = po->add_subcommand("words2po");
        c->add_option("--graph", p_graph)->required();
        c->add_option("--words", p_words, "file with one word per line")->required();
        c->add_option("--m", p_m);
        c->add_option("--out", p_out);
        c = po->add_subcommand("po2words");
        c->add_option("--po", p_po)->required();
        c->add_option("--m", p_m);
        c->add_option("--out", p_out);
        c = po->add_subcommand("repair");
        c->add_option("--po", p_po)->required();
        c->add_option("--graph", p_graph)->required();
        c->add_option("--m", p_m);
        c->add_option("--L", p_L);
        c->add_option("--out", p_out);
        c = po->add_subcommand("verdict");
        c->add_option("--po", p_po)->required();
        c->add_option("--z", p_z, "tracing point sequence file")->required();
        c->add_option("--L", p_L);
        c->add_option("--eps", p_eps, "comma list");
        c->add_option("--out", p_out);
    }

    // ---- proximal ----
    auto* prox = app.add_subcommand("proximal", "the graph family, E sets and the splice limit");
    prox->require_subcommand(1);
    std::string x_word, x_out, x_cert, x_family, x_seq;
    std::uint32_t x_n = 1, x_i = 1;
    std::size_t x_L = 100, x_window = 0;
    {
        auto* c = prox->add_subcommand("build");
        c->add_option("--n", x_n)->required();
        c->add_option("--out", x_out)->required();
        c = prox->add_subcommand("member");
        c->add_option("--n", x_n)->required();
        c->add_option("--word", x_word)->required();
        c = prox->add_subcommand("eset");
        c->add_option("--i", x_i)->required();
        c->add_option("--L", x_L)->required();
        c->add_option("--out", x_out);
        c = prox->add_subcommand("project");
        c->add_option("--n", x_n)->required();
        c->add_option("--in", x_seq, "sequence file")->required();
        c->add_option("--L", x_L, "prefix length to project");
        c->add_option("--out", x_out);
        c = prox->add_subcommand("limit");
        c->add_option("--family", x_family, "directory of sequence files")->required();
        c->add_option("--out", x_out);
        c->add_option("--cert", x_cert);
        c->add_option("--window", x_window);
    }

    // ---- coded ----
    auto* coded = app.add_subcommand("coded", "the word-code construction");
    coded->require_subcommand(1);
    std::string c_t = "2", c_out, c_cert, c_x, c_u, c_family, c_mode = "auto", c_b1, c_b2;
    std::size_t c_n = 1, c_m = 0, c_len = 0, c_alpha = 1;
    bool c_waive = false;
    {
        auto* c = coded->add_subcommand("stats");
        c->add_option("--t", c_t, "comma separated t(1),t(2),...");
        c->add_option("--n", c_n)->required();
        c = coded->add_subcommand("mint");
        c->add_option("--t", c_t, "prefix t(1)..t(n-1), unused for n = 1");
        c->add_option("--n", c_n)->required();
        c = coded->add_subcommand("build");
        c->add_option("--t", c_t);
        c->add_option("--n", c_n)->required();
        c->add_option("--mode", c_mode, "explicit|lazy|auto");
        c->add_option("--out", c_out);
        c = coded->add_subcommand("word");
        c->add_option("--t", c_t);
        c->add_option("--n", c_n)->required();
        c->add_option("--len", c_len)->required();
        c->add_option("--out", c_out);
        c = coded->add_subcommand("connect");
        c->add_option("--t", c_t);
        c->add_option("--n", c_n)->required();
        c->add_option("--b1", c_b1)->required();
        c->add_option("--b2", c_b2)->required();
        c->add_option("--alpha", c_alpha)->required();
        c = coded->add_subcommand("approx");
        c->add_option("--t", c_t);
        c->add_option("--x", c_x, "sequence file")->required();
        c->add_option("--n", c_n)->required();
        c = coded->add_subcommand("extend");
        c->add_option("--t", c_t);
        c->add_option("--u", c_u, "word (01 text)")->required();
        c->add_option("--x", c_x, "sequence file")->required();
        c->add_option("--n", c_n)->required();
        c->add_option("--m", c_m)->required();
        c->add_flag("--waive-conditions", c_waive);
        c->add_option("--cert", c_cert);
        c = coded->add_subcommand("limit");
        c->add_option("--t", c_t)->required();
        c->add_option("--family", c_family)->required();
        c->add_option("--cert", c_cert);
        c->add_option("--out", c_out);
        c->add_flag("--waive-conditions", c_waive);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        // ---------------- metrics ----------------
        if (metrics->parsed()) {
            SymSequence a = read_sequence(m_a), b = read_sequence(m_b);
            std::ofstream file;
            std::ostream& os = open_out(file, m_out);
            std::vector<std::size_t> windows = parse_size_list(m_L);
            std::vector<WindowEstimate> rows(windows.size());
            if (metrics->get_subcommand("rho")->parsed()) {
                Rational r = rho(a, b);
                os << "L,value_low,value_high,kind\n0," << to_string(r) << ',' << to_string(r)
                   << ",rho\n";
                return 0;
            }
            if (metrics->get_subcommand("dbar")->parsed()) {
                parallel_for(windows.size(), jobs, [&](std::size_t i) {
                    Rational v = dbar_window(a, b, windows[i]);
                    rows[i] = WindowEstimate{windows[i], v, v, "dbar"};
                });
            } else if (metrics->get_subcommand("distb")->parsed()) {
                parallel_for(windows.size(), jobs, [&](std::size_t i) {
                    rows[i] = dist_B_window(a, b, windows[i], m_budget);
                });
            } else {
                parallel_for(windows.size(), jobs, [&](std::size_t i) {
                    Rational v = rho_B_prime_orbits(a, b, windows[i], m_budget);
                    rows[i] = WindowEstimate{windows[i], v, v, "rho_B_prime"};
                });
            }
            write_estimate_csv(os, rows);
            return 0;
        }

        // ---------------- sofic ----------------
        if (sofic->parsed()) {
            std::size_t budget = s_budget_opt ? s_budget_opt : env_budget(1u << 22);
            SoficShift x = shift_from_file(s_graph, "x");
            if (sofic->get_subcommand("member")->parsed()) {
                bool in = member(x, word(s_word));
                std::cout << (in ? "true" : "false") << "\n";
                return in ? 0 : 0;
            }
            if (sofic->get_subcommand("enum")->parsed()) {
                std::ofstream file;
                std::ostream& os = open_out(file, s_out);
                for (const auto& w : enumerate_language(x, s_n, budget)) os << w.to_string() << "\n";
                return 0;
            }
            if (sofic->get_subcommand("chainmix")->parsed()) {
                std::cout << (is_chain_mixing(x, s_m, budget) ? "true" : "false") << "\n";
                return 0;
            }
            if (sofic->get_subcommand("sync")->parsed()) {
                auto r = is_synchronizing(x, word(s_word), s_detb, s_testlen);
                nlohmann::json j;
                j["status"] = r.status == SyncStatus::yes ? "yes"
                              : r.status == SyncStatus::no ? "no" : "unknown";
                j["exact"] = r.exact;
                if (r.counterexample) {
                    j["u"] = r.counterexample->first.to_string();
                    j["v"] = r.counterexample->second.to_string();
                }
                if (r.status == SyncStatus::unknown) j["evidence_len"] = r.evidence_len;
                std::cout << j.dump() << "\n";
                return 0;
            }
            if (sofic->get_subcommand("trace")->parsed()) {
                auto r = min_hamming_trace(x, word(s_word));
                nlohmann::json j;
                j["traced"] = r.traced.to_string();
                j["mismatches"] = r.mismatches;
                std::cout << j.dump() << "\n";
                return 0;
            }
            if (sofic->get_subcommand("hereditary")->parsed()) {
                auto rep = is_hereditary_sample(x, s_n, s_trials, s_seed);
                nlohmann::json j;
                j["trials"] = rep.trials;
                j["violations"] = rep.violations.size();
                if (!rep.violations.empty()) {
                    j["w"] = rep.violations[0].first.to_string();
                    j["w_sub"] = rep.violations[0].second.to_string();
                }
                std::cout << j.dump() << "\n";
                return 0;
            }
        }

        // ---------------- po ----------------
        if (po->parsed()) {
            std::ofstream file;
            if (po->get_subcommand("gen")->parsed()) {
                SoficShift x = shift_from_file(p_graph, "x");
                PointSeq ps = gen_pseudo_orbit(x, p_L, p_density, p_seed);
                std::ostream& os = open_out(file, p_out);
                os << pointseq_to_string(ps);
                return 0;
            }
            if (po->get_subcommand("check")->parsed()) {
                PointSeq ps = read_pointseq(p_po);
                std::string kind = po->get_subcommand("check")->get_option("--kind")->as<std::string>();
                POReport rep;
                if (kind == "delta") rep = check_delta_po(ps, parse_rational(p_delta), p_L);
                else if (kind == "asymptotic") {
                    std::vector<Rational> sched = parse_rational_list(p_sched);
                    rep = check_asymptotic_po(ps, sched, p_L);
                } else if (kind == "avg")
                    rep = check_delta_avg_po(ps, parse_rational(p_delta), p_N, p_K, p_L);
                else if (kind == "aapo")
                    rep = check_aapo(ps, parse_rational_list(p_eps), p_L, parse_rational(p_tol));
                else if (kind == "vague")
                    rep = check_vague(ps, parse_rational(p_eps), p_k, p_L);
                else
                    return fail("invalid-argument", "unknown check kind: " + kind);
                if (!p_out.empty()) {
                    std::ostream& os = open_out(file, p_out);
                    if (kind == "aapo" || kind == "vague") {
                        os << "eps,k,density\n";
                        for (auto& [eps, dens] : rep.curve)
                            os << to_string(eps) << ',' << (kind == "vague" ? p_k : 0) << ','
                               << to_string(dens) << "\n";
                    } else {
                        os << "n,error\n";
                        std::size_t upto = std::min(p_L, ps.horizon() - 1);
                        for (std::size_t n = 0; n < upto; ++n)
                            os << n << ',' << to_string(rho(ps[n].shifted(1), ps[n + 1])) << "\n";
                    }
                }
                nlohmann::json j;
                j["kind"] = rep.kind;
                j["window"] = rep.window;
                j["verdict"] = rep.verdict;
                if (rep.witness) j["witness"] = *rep.witness;
                auto curve = nlohmann::json::array();
                for (auto& [k, v] : rep.curve) curve.push_back({to_string(k), to_string(v)});
                j["curve"] = std::move(curve);
                std::cout << j.dump() << "\n";
                return rep.verdict ? 0 : 0;
            }
            if (po->get_subcommand("words2po")->parsed()) {
                SoficShift x = shift_from_file(p_graph, "x");
                std::ifstream wf(p_words);
                if (!wf) throw std::runtime_error("cannot open: " + p_words);
                std::vector<Word> words;
                std::string line;
                while (std::getline(wf, line))
                    if (!line.empty() && line[0] != '#') words.push_back(word(line));
                auto r = words_to_avg_po(words, p_m, x);
                std::ostream& os = open_out(file, p_out);
                os << "#delta_guarantee=" << to_string(r.delta_guarantee) << ";exceptions="
                   << r.exception_set.count_below(r.exception_set.horizon()) << "\n";
                os << pointseq_to_string(r.po);
                return 0;
            }
            if (po->get_subcommand("po2words")->parsed()) {
                PointSeq ps = read_pointseq(p_po);
                auto words = po_to_words(ps, p_m);
                std::ostream& os = open_out(file, p_out);
                for (const auto& w : words) os << w.to_string() << "\n";
                return 0;
            }
            if (po->get_subcommand("repair")->parsed()) {
                PointSeq ps = read_pointseq(p_po);
                SoficShift x = shift_from_file(p_graph, "x");
                auto r = repair_aapo(ps, x, p_m, p_L);
                std::ostream& os = open_out(file, p_out);
                os << "#modified=" << r.modified.count_below(std::min(p_L, r.modified.horizon()))
                   << ";connector=" << r.connector_length << "\n";
                os << pointseq_to_string(r.repaired);
                return 0;
            }
            if (po->get_subcommand("verdict")->parsed()) {
                PointSeq ps = read_pointseq(p_po);
                SymSequence z = read_sequence(p_z);
                auto tv = trace_verdict(ps, z, p_L, parse_rational_list(p_eps));
                nlohmann::json j;
                j["value_low"] = to_string(tv.value.lo);
                j["value_high"] = to_string(tv.value.hi);
                auto dens = nlohmann::json::array();
                for (auto& [e, d] : tv.densities) dens.push_back({to_string(e), to_string(d)});
                j["densities"] = std::move(dens);
                std::cout << j.dump() << "\n";
                return 0;
            }
        }

        // ---------------- proximal ----------------
        if (prox->parsed()) {
            std::ofstream file;
            if (prox->get_subcommand("build")->parsed()) {
                write_graph(x_out, build_Gn(x_n).graph);
                return 0;
            }
            if (prox->get_subcommand("member")->parsed()) {
                std::cout << (member_Yn(word(x_word), x_n) ? "true" : "false") << "\n";
                return 0;
            }
            if (prox->get_subcommand("eset")->parsed()) {
                std::ostream& os = open_out(file, x_out);
                dump_csv(E_set(x_i, x_L), x_L, os);
                return 0;
            }
            if (prox->get_subcommand("project")->parsed()) {
                SymSequence s = read_sequence(x_seq);
                std::size_t len = x_L ? x_L : s.guaranteed_horizon();
                Word out = project_to_Z(s.window(0, len), x_n);
                std::ostream& os = open_out(file, x_out);
                os << "#prefix=" << out.size() << ";continuation=auto:projected\n"
                   << out.to_string() << "\n";
                return 0;
            }
            if (prox->get_subcommand("limit")->parsed()) {
                auto family = read_family(x_family);
                ProximalLimitParams params;
                params.window = x_window;
                auto res = dbar_limit_proximal(family, params);
                if (!x_out.empty()) {
                    std::ofstream xf(x_out, std::ios::binary);
                    xf << "#prefix=" << res.x_prefix.size() << ";continuation=auto:limit\n"
                       << res.x_prefix.to_string() << "\n";
                }
                nlohmann::json j = splice_cert_to_json(res.cert);
                if (!x_cert.empty()) {
                    std::ofstream cf(x_cert, std::ios::binary);
                    cf << j.dump(2) << "\n";
                } else {
                    std::cout << j.dump() << "\n";
                }
                return res.cert.all_pass() ? 0 : 2;
            }
        }

        // ---------------- coded ----------------
        if (coded->parsed()) {
            std::ofstream file;
            ParamSeq t = parse_params(c_t);
            if (coded->get_subcommand("stats")->parsed()) {
                auto st = level_stats(t, c_n);
                nlohmann::json j;
                j["s"] = st.s.str();
                j["l"] = st.l.str();
                j["k"] = st.k.str();
                j["tau_len"] = st.tau_len.str();
                std::cout << j.dump() << "\n";
                return 0;
            }
            if (coded->get_subcommand("mint")->parsed()) {
                std::cout << min_valid_t(level_stats(t, c_n), c_n).str() << "\n";
                return 0;
            }
            if (coded->get_subcommand("build")->parsed()) {
                auto chain = build_levels(t, c_n);
                const auto& lvl = *chain[c_n - 1];
                if (c_mode == "explicit" && !lvl.is_explicit())
                    return fail("budget-error", "level too large to materialize");
                std::ostream& os = open_out(file, c_out);
                if (lvl.is_explicit()) os << code_level_to_string(lvl, t);
                else {
                    os << "#level=" << c_n << ";lazy=1;s=" << lvl.stats().s.str()
                       << ";l=" << lvl.stats().l.str() << ";k=" << lvl.stats().k.str() << "\n";
                }
                return 0;
            }
            if (coded->get_subcommand("word")->parsed()) {
                auto chain = build_levels(t, c_n);
                Word w = chain[c_n - 1]->word_of_length(Int(c_len));
                std::ostream& os = open_out(file, c_out);
                os << w.to_string() << "\n";
                return 0;
            }
            if (coded->get_subcommand("connect")->parsed()) {
                auto chain = build_levels(t, c_n);
                auto cs = connecting_words(*chain[c_n - 1], word(c_b1), word(c_b2), Int(c_alpha));
                for (const auto& c : cs) std::cout << c.to_string() << "\n";
                return 0;
            }
            if (coded->get_subcommand("approx")->parsed()) {
                auto chain = build_levels(t, c_n + 1);
                SymSequence xs = read_sequence(c_x);
                std::size_t len = xs.guaranteed_horizon();
                if (len == SymSequence::unbounded)
                    len = 4 * chain[c_n - 1]->stats().l.convert_to<std::size_t>() + 64;
                auto r = approx_word(xs.window(0, len), *chain[c_n - 1], t.at(c_n));
                nlohmann::json j;
                j["w"] = r.w.to_string();
                j["mismatches"] = r.mismatches;
                j["bound"] = r.bound.str();
                std::cout << j.dump() << "\n";
                return 0;
            }
            if (coded->get_subcommand("extend")->parsed()) {
                auto chain = build_levels(t, c_m);
                SymSequence xs = read_sequence(c_x);
                std::size_t len = xs.guaranteed_horizon();
                if (len == SymSequence::unbounded)
                    len = chain[c_m - 1]->stats().l.convert_to<std::size_t>() +
                          4 * chain[c_m - 2]->stats().l.convert_to<std::size_t>();
                auto r = extend_word(word(c_u), xs.window(0, len), c_n, c_m, chain, t, c_waive);
                nlohmann::json j;
                j["w_len"] = r.w.size();
                j["rate_bound_all"] = r.rate_bound_all;
                j["conditions_ok"] = r.conditions_ok;
                auto checks = nlohmann::json::array();
                for (const auto& c : r.checks) checks.push_back(check_to_json(c));
                j["checks"] = std::move(checks);
                if (!c_cert.empty()) {
                    std::ofstream cf(c_cert, std::ios::binary);
                    cf << j.dump(2) << "\n";
                } else
                    std::cout << j.dump() << "\n";
                return 0;
            }
            if (coded->get_subcommand("limit")->parsed()) {
                auto family = read_family(c_family);
                MinimalLimitParams params;
                params.waive_conditions = c_waive;
                auto res = dbar_limit_minimal(family, t, params);
                if (!c_out.empty()) {
                    std::ofstream xf(c_out, std::ios::binary);
                    xf << "#prefix=" << res.w_prefix.size() << ";continuation=auto:limit\n"
                       << res.w_prefix.to_string() << "\n";
                }
                nlohmann::json j = minimal_cert_to_json(res.cert);
                if (!c_cert.empty()) {
                    std::ofstream cf(c_cert, std::ios::binary);
                    cf << j.dump(2) << "\n";
                } else
                    std::cout << j.dump() << "\n";
                return res.cert.all_pass() ? 0 : 2;
            }
        }
    } catch (const std::invalid_argument& e) {
        return fail("invalid-argument", e.what());
    } catch (const horizon_error& e) {
        return fail("horizon-error", e.what());
    } catch (const budget_error& e) {
        return fail("budget-error", e.what());
    } catch (const parse_error& e) {
        return fail("parse-error", e.what());
    } catch (const not_found_error& e) {
        return fail("not-found", e.what());
    } catch (const empty_shift_error& e) {
        return fail("empty-shift", e.what());
    } catch (const ratio_violation_error& e) {
        return fail("ratio-violation", e.what());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
