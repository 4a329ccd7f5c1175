#pragma once

#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stabcat/ambient.hpp"
#include "stabcat/errors.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/torsion.hpp"
#include "stabcat/windowed.hpp"

namespace stabcat::io {

using nlohmann::json;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline int to_int(const std::string& s, const std::string& what) {
    static const std::regex re(R"(-?\d+)");
    if (!std::regex_match(s, re)) throw parse_error("expected an integer for " + what + ", got '" + s + "'");
    return std::stoi(s);
}

inline std::pair<int, int> range(const std::string& s, const std::string& what) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw parse_error(what + " must look like a..b, got '" + s + "'");
    return {to_int(s.substr(0, dots), what), to_int(s.substr(dots + 2), what)};
}

} // namespace detail

// tube:N, an:N, p1:window=a..b[:points=N], x2:window=a..b[:points=N],
// kronecker:window=K[:depth=D][:points=N]
inline ambient parse_ambient(const std::string& spec) {
    auto parts = detail::split(spec, ':');
    if (parts.empty() || parts[0].empty()) throw parse_error("empty ambient spec");
    const std::string& fam = parts[0];
    if (fam == "tube" || fam == "an") {
        if (parts.size() < 2) throw parse_error(fam + " needs a rank, e.g. " + fam + ":3");
        int n = detail::to_int(parts[1], "rank");
        if (n < 1) throw parse_error("rank must be positive in '" + spec + "'");
        if (fam == "an") {
            if (parts.size() != 2) throw parse_error("unexpected options in '" + spec + "'");
            return make_an_ambient(n);
        }
        if (parts.size() == 2) return make_tube_ambient(n);
        if (parts.size() == 3 && parts[2].rfind("maxlen=", 0) == 0)
            return make_truncated_tube_ambient(n, detail::to_int(parts[2].substr(7), "maxlen"));
        throw parse_error("unexpected options in '" + spec + "'");
    }
    std::map<std::string, std::string> opt;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string::npos) throw parse_error("option '" + parts[i] + "' needs key=value");
        std::string k = parts[i].substr(0, eq);
        if (opt.count(k)) throw parse_error("option '" + k + "' given twice");
        opt[k] = parts[i].substr(eq + 1);
    }
    auto take = [&](const std::string& k, const std::string& dflt) {
        auto it = opt.find(k);
        std::string v = it == opt.end() ? dflt : it->second;
        if (it != opt.end()) opt.erase(it);
        return v;
    };
    auto finish = [&](ambient a) {
        if (!opt.empty()) throw parse_error("unknown option '" + opt.begin()->first + "' for " + fam);
        return a;
    };
    if (fam == "p1" || fam == "x2") {
        std::string w = take("window", "");
        if (w.empty()) throw parse_error(fam + " needs window=a..b");
        auto [lo, hi] = detail::range(w, "window");
        int pts = detail::to_int(take("points", "3"), "points");
        if (pts < 1) throw parse_error("points must be positive");
        return finish(fam == "p1" ? windowed::make_p1_ambient(lo, hi, pts) : windowed::make_x2_ambient(lo, hi, pts));
    }
    if (fam == "kronecker") {
        std::string w = take("window", "");
        if (w.empty()) throw parse_error("kronecker needs window=K");
        int K = detail::to_int(w, "window");
        int D = detail::to_int(take("depth", "6"), "depth");
        int pts = detail::to_int(take("points", "3"), "points");
        if (pts < 1) throw parse_error("points must be positive");
        return finish(windowed::make_kronecker_ambient(K, D, pts));
    }
    throw parse_error("unknown ambient family '" + fam + "' (expected tube, an, p1, x2 or kronecker)");
}

// Accepts carrier names plus the usual shorthands: S_j^(t), S_j, Sj^{(t)} on
// tubes; S_i, P_i, I_i and M[a,b] on A_n. Returns the canonical name, which
// may be a scope object beyond the carrier (long tube objects).
inline std::string canonical_name(const ambient& amb, const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ') s += c;
    if (amb.index.count(s) || amb.scope_index.count(s)) return s;
    std::smatch m;
    if (amb.family == "tube" || amb.family == "tube-truncated") {
        static const std::regex re(R"(S_?\{?(\d+)\}?(?:\^\{?\((\d+)\)\}?)?(?:@(\d+))?)");
        if (std::regex_match(s, m, re)) {
            if (m[3].matched && std::stoi(m[3]) != amb.rank)
                throw parse_error("'" + raw + "' names a tube of rank " + m[3].str() + " inside " + amb.spec);
            int j = std::stoi(m[1]);
            int t = m[2].matched ? std::stoi(m[2]) : 1;
            if (j >= amb.rank || t < 1) throw parse_error("'" + raw + "' is not an object of " + amb.spec);
            std::string name = tube::to_string(tube::make(amb.rank, j, t));
            if (amb.index.count(name) || amb.scope_index.count(name)) return name;
            throw window_error("'" + raw + "' lies beyond the lengths modelled by " + amb.spec);
        }
    } else if (amb.family == "an") {
        const int n = amb.rank;
        static const std::regex alias(R"(([SPI])_?\{?(\d+)\}?(?:@A(\d+))?)");
        static const std::regex interval(R"(M\[(\d+),(\d+)\](?:@A(\d+))?)");
        int a = 0, b = 0;
        if (std::regex_match(s, m, alias)) {
            int i = std::stoi(m[2]);
            char k = m[1].str()[0];
            a = k == 'I' ? 1 : i;
            b = k == 'S' ? i : (k == 'P' ? n : i);
        } else if (std::regex_match(s, m, interval)) {
            a = std::stoi(m[1]);
            b = std::stoi(m[2]);
        } else {
            throw parse_error("cannot read '" + raw + "' as an object of " + amb.spec);
        }
        if (m[3].matched && std::stoi(m[3]) != n) throw parse_error("'" + raw + "' belongs to A" + m[3].str());
        if (a < 1 || b > n || a > b) throw parse_error("'" + raw + "' is not an interval of " + amb.spec);
        return interval::to_string(interval::make(n, a, b));
    }
    throw parse_error("'" + raw + "' is not an object of " + amb.spec);
}

// Carrier index; long tube objects resolve to their representative.
inline int resolve(const ambient& amb, const std::string& raw) {
    std::string name = canonical_name(amb, raw);
    if (auto it = amb.index.find(name); it != amb.index.end()) return it->second;
    int r = amb.scope[amb.find_scope(name)].rep;
    if (r < 0) throw window_error("'" + raw + "' has no representative in " + amb.spec);
    return r;
}

inline bits resolve_set(const ambient& amb, const std::vector<std::string>& names) {
    bits b = 0;
    for (auto& n : names) b |= bit(resolve(amb, n));
    return b;
}

inline json names_json(const ambient& amb, bits b) { return json(amb.names(b)); }

// ---- stability data ------------------------------------------------------

inline json to_json(const ambient& amb, const stability_data& sd) {
    json j;
    j["ambient"] = amb.spec;
    json order = json::array();
    json pieces = json::object();
    for (std::size_t i = 0; i < sd.size(); ++i) {
        order.push_back(sd.order[i].str());
        pieces[sd.order[i].str()] = names_json(amb, sd.pieces[i]);
    }
    j["order"] = order;
    j["pieces"] = pieces;
    return j;
}

// Pieces list members; "closure": true means they list generators instead.
inline stability_data stability_from_json(const ambient& amb, const json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("pieces"))
        throw parse_error("stability data needs \"order\" and \"pieces\"");
    if (j.contains("ambient") && j["ambient"].get<std::string>() != amb.spec)
        throw precondition_error("data is for " + j["ambient"].get<std::string>() + ", not " + amb.spec);
    bool gens = j.value("closure", false);
    stability_data sd;
    std::set<std::string> seen;
    for (auto& p : j["order"]) {
        if (!p.is_string()) throw parse_error("phases in \"order\" must be strings");
        std::string key = p.get<std::string>();
        phase ph = phase::parse(key);
        if (!seen.insert(ph.str()).second) throw parse_error("phase '" + key + "' listed twice");
        if (!j["pieces"].contains(key)) throw parse_error("no piece for phase '" + key + "'");
        bits b = resolve_set(amb, j["pieces"][key].get<std::vector<std::string>>());
        sd.order.push_back(ph);
        sd.pieces.push_back(gens ? closure(amb, b) : b);
    }
    if (j["pieces"].size() != sd.order.size()) throw parse_error("\"pieces\" has phases missing from \"order\"");
    return sd;
}

// ---- torsion pairs -------------------------------------------------------

inline json to_json(const ambient& amb, const torsion_pair& tp) {
    return json{{"ambient", amb.spec}, {"T", names_json(amb, tp.T)}, {"F", names_json(amb, tp.F)}};
}

inline torsion_pair torsion_from_json(const ambient& amb, const json& j) {
    if (!j.is_object() || !j.contains("T") || !j.contains("F")) throw parse_error("torsion pair needs \"T\" and \"F\"");
    if (j.contains("ambient") && j["ambient"].get<std::string>() != amb.spec)
        throw precondition_error("pair is for " + j["ambient"].get<std::string>() + ", not " + amb.spec);
    torsion_pair tp{resolve_set(amb, j["T"].get<std::vector<std::string>>()),
                    resolve_set(amb, j["F"].get<std::vector<std::string>>())};
    if (j.value("closure", false)) tp = {closure(amb, tp.T), closure(amb, tp.F)};
    return tp;
}

// ---- reports -------------------------------------------------------------

inline json to_json(const hn_result& r) {
    json steps = json::array();
    for (auto& [ph, fac] : r.steps) steps.push_back({{"phase", ph.str()}, {"factor", fac}});
    return json{{"object", r.object}, {"steps", steps}, {"count", r.count}};
}

inline json to_json(const validation_report& r) {
    json hv = json::array();
    for (auto& [x, y] : r.hom_violations) hv.push_back({x, y});
    return json{{"valid", r.valid},     {"hom_violations", hv},  {"hn_failures", r.hn_failures},
                {"overlaps", r.overlaps}, {"unclosed", r.unclosed}, {"scope", r.scope},
                {"window_verified", r.window_verified}};
}

inline json to_json(const torsion_report& r) {
    json hw = json::array();
    for (auto& [a, b] : r.hom_witnesses) hw.push_back({a, b});
    return json{{"valid", r.valid},
                {"T_is_left_perp", r.T_is_left_perp},
                {"F_is_right_perp", r.F_is_right_perp},
                {"hom_witnesses", hw},
                {"decomposition_failures", r.decomposition_failures},
                {"quotient_escapes", r.quotient_escapes},
                {"sub_escapes", r.sub_escapes}};
}

// ---- files ---------------------------------------------------------------

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json(const std::string& path) {
    std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << text;
}

} // namespace stabcat::io
