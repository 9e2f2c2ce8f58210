#pragma once

#include "shiftlab/coded.hpp"
#include "shiftlab/proximal.hpp"
#include "shiftlab/pseudo_orbit.hpp"
#include "shiftlab/sofic.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace shiftlab {

// ---- sequence files -------------------------------------------------------
// one sequence per file:
//   #prefix=<len>;continuation=<periodic:p|auto:id>
//   <prefix as 0/1 text>

inline std::string sequence_to_string(const SymSequence& s, std::size_t prefix_len = 0) {
    std::ostringstream os;
    if (s.eventually_periodic()) {
        // normalize against the handle's offset; past the prefix, a window of
        // one period length is the (suitably rotated) period
        std::size_t stored = s.stored_prefix().size();
        std::size_t pn = std::max(prefix_len, stored > s.offset() ? stored - s.offset() : 0);
        Word pre = s.window(0, pn);
        Word period = s.window(pn, s.stored_period().size());
        os << "#prefix=" << pre.size() << ";continuation=periodic:" << period.to_string() << "\n";
        os << pre.to_string() << "\n";
    } else {
        std::size_t pn = s.guaranteed_horizon();
        Word pre = s.window(0, pn);
        std::string tag = s.continuation_tag().empty() ? "none" : s.continuation_tag();
        os << "#prefix=" << pre.size() << ";continuation=auto:" << tag << "\n";
        os << pre.to_string() << "\n";
    }
    return os.str();
}

inline SymSequence sequence_from_string(const std::string& text) {
    std::istringstream is(text);
    std::string header, body;
    if (!std::getline(is, header) || header.rfind("#prefix=", 0) != 0)
        throw parse_error("sequence file: missing #prefix header");
    std::getline(is, body);
    auto semi = header.find(';');
    if (semi == std::string::npos) throw parse_error("sequence file: malformed header");
    std::size_t plen = std::stoull(header.substr(8, semi - 8));
    const std::string cont_key = ";continuation=";
    auto cpos = header.find(cont_key);
    if (cpos == std::string::npos) throw parse_error("sequence file: missing continuation");
    std::string cont = header.substr(cpos + cont_key.size());
    if (body.size() != plen) throw parse_error("sequence file: prefix length mismatch");
    Word prefix = Bits::from_string(body);
    if (cont.rfind("periodic:", 0) == 0) {
        std::string p = cont.substr(9);
        if (p.empty()) throw parse_error("sequence file: empty period");
        return SymSequence::periodic(std::move(prefix), Bits::from_string(p));
    }
    if (cont.rfind("auto:", 0) == 0)
        return SymSequence::finite(std::move(prefix), cont.substr(5));
    throw parse_error("sequence file: unknown continuation kind");
}

inline void write_sequence(const std::string& path, const SymSequence& s,
                           std::size_t prefix_len = 0) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << sequence_to_string(s, prefix_len);
}

inline SymSequence read_sequence(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return sequence_from_string(ss.str());
}

// ---- labeled graph JSON ----------------------------------------------------
// {"vertices": V, "edges": [[src, dst, label], ...]}

inline nlohmann::json graph_to_json(const LabeledGraph& g) {
    nlohmann::json j;
    j["vertices"] = g.vertex_count();
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.src, e.dst, e.label});
    j["edges"] = std::move(edges);
    return j;
}

inline LabeledGraph graph_from_json(const nlohmann::json& j) {
    std::uint32_t v = j.at("vertices").get<std::uint32_t>();
    std::vector<LabeledGraph::Edge> es;
    for (const auto& e : j.at("edges"))
        es.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(),
                      e.at(2).get<std::uint8_t>()});
    return LabeledGraph(v, std::move(es));
}

inline void write_graph(const std::string& path, const LabeledGraph& g) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << graph_to_json(g).dump(2) << "\n";
}

inline LabeledGraph read_graph(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    f >> j;
    return graph_from_json(j);
}

// ---- point sequence files ---------------------------------------------------
// one entry per line: <prefix text> <periodic:p|auto:id>

inline std::string pointseq_to_string(const PointSeq& ps, std::size_t prefix_len = 64) {
    std::ostringstream os;
    for (const auto& e : ps.entries) {
        if (e.eventually_periodic()) {
            std::size_t stored = e.stored_prefix().size();
            std::size_t pn = std::max(prefix_len, stored > e.offset() ? stored - e.offset() : 0);
            os << e.window(0, pn).to_string() << " periodic:"
               << e.window(pn, e.stored_period().size()).to_string() << "\n";
        } else {
            std::size_t pn = e.guaranteed_horizon();
            os << e.window(0, pn).to_string() << " auto:"
               << (e.continuation_tag().empty() ? "none" : e.continuation_tag()) << "\n";
        }
    }
    return os.str();
}

inline PointSeq pointseq_from_string(const std::string& text) {
    PointSeq ps;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue; // metadata lines
        auto sp = line.find(' ');
        if (sp == std::string::npos) throw parse_error("pointseq file: malformed line");
        Word prefix = Bits::from_string(line.substr(0, sp));
        std::string cont = line.substr(sp + 1);
        if (cont.rfind("periodic:", 0) == 0)
            ps.entries.push_back(
                SymSequence::periodic(std::move(prefix), Bits::from_string(cont.substr(9))));
        else if (cont.rfind("auto:", 0) == 0)
            ps.entries.push_back(SymSequence::finite(std::move(prefix), cont.substr(5)));
        else
            throw parse_error("pointseq file: unknown continuation");
    }
    return ps;
}

inline void write_pointseq(const std::string& path, const PointSeq& ps,
                           std::size_t prefix_len = 64) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << pointseq_to_string(ps, prefix_len);
}

inline PointSeq read_pointseq(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return pointseq_from_string(ss.str());
}

// ---- code level files -------------------------------------------------------
// #level=n;t=<comma separated>
// one word per line

inline std::string code_level_to_string(const CodeLevel& lvl, const ParamSeq& t) {
    std::ostringstream os;
    os << "#level=" << lvl.level() << ";t=";
    for (std::size_t i = 0; i + 1 < lvl.level(); ++i) {
        if (i) os << ',';
        os << t.at(i + 1);
    }
    os << "\n";
    for (const auto& w : lvl.words()) os << w.to_string() << "\n";
    return os.str();
}

// ---- certificates ------------------------------------------------------------

inline nlohmann::json check_to_json(const CertCheck& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["level"] = c.level;
    j["range"] = {c.range_lo, c.range_hi};
    j["bound"] = to_string(c.bound);
    j["actual"] = to_string(c.actual);
    j["bound_float"] = to_double(c.bound);
    j["actual_float"] = to_double(c.actual);
    j["pass"] = c.pass;
    return j;
}

inline nlohmann::json splice_cert_to_json(const SpliceCertificate& cert) {
    nlohmann::json j;
    j["window"] = cert.window;
    j["ells"] = cert.ells;
    j["sync_lens"] = cert.sync_lens;
    j["cauchy_from"] = cert.cauchy_from;
    auto status = nlohmann::json::array();
    for (auto s : cert.sync_status)
        status.push_back(s == SyncStatus::yes ? "yes" : (s == SyncStatus::no ? "no" : "unknown"));
    j["sync_status"] = std::move(status);
    j["conditional_on_sync"] = cert.conditional_on_sync;
    auto checks = nlohmann::json::array();
    for (const auto& c : cert.checks) checks.push_back(check_to_json(c));
    j["checks"] = std::move(checks);
    j["all_pass"] = cert.all_pass();
    return j;
}

inline nlohmann::json minimal_cert_to_json(const MinimalCertificate& cert) {
    nlohmann::json j;
    j["m_levels"] = cert.m_levels;
    j["alphas"] = cert.alphas;
    j["k_thresholds"] = cert.k_thresholds;
    j["conditions_verified"] = cert.conditions_verified;
    j["complete"] = cert.complete;
    auto checks = nlohmann::json::array();
    for (const auto& c : cert.checks) checks.push_back(check_to_json(c));
    j["checks"] = std::move(checks);
    auto adv = nlohmann::json::array();
    for (const auto& c : cert.advisory) adv.push_back(check_to_json(c));
    j["advisory"] = std::move(adv);
    j["all_pass"] = cert.all_pass();
    return j;
}

// ---- CSV ----------------------------------------------------------------------

inline void write_estimate_csv(std::ostream& os, const std::vector<WindowEstimate>& rows) {
    os << "L,value_low,value_high,kind\n";
    for (const auto& r : rows)
        os << r.window << ',' << to_string(r.lo) << ',' << to_string(r.hi) << ',' << r.kind << '\n';
}

inline void write_density_csv(std::ostream& os,
                              const std::vector<std::tuple<Rational, std::size_t, Rational>>& rows) {
    os << "eps,k,density\n";
    for (const auto& [eps, k, dens] : rows)
        os << to_string(eps) << ',' << k << ',' << to_string(dens) << '\n';
}

} // namespace shiftlab
