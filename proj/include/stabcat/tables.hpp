#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stabcat/io.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/torsion.hpp"
#include "stabcat/windowed.hpp"

namespace stabcat::tables {

// ---- display -------------------------------------------------------------

inline std::string display(const ambient& amb, int i) {
    const std::string& name = amb.carrier[i];
    if (amb.family == "an") {
        int a = 0, b = 0;
        std::sscanf(name.c_str(), "M[%d,%d]", &a, &b);
        if (a == b) return "S_" + std::to_string(a);
        if (b == amb.rank) return "P_" + std::to_string(a);
        if (a == 1) return "I_" + std::to_string(b);
        return name.substr(0, name.find('@'));
    }
    if (amb.family == "tube") {
        int j = 0, t = 0;
        std::sscanf(name.c_str(), "S%d^(%d)", &j, &t);
        return t == 1 ? "S_" + std::to_string(j) : "S_" + std::to_string(j) + "^(" + std::to_string(t) + ")";
    }
    return name;
}

// Greedy minimal generating set, dropping long objects first.
inline bits generators(const ambient& amb, bits s) {
    bits g = s;
    std::vector<int> order;
    for_each_bit(s, [&](int i) { order.push_back(i); });
    std::reverse(order.begin(), order.end());
    for (int i : order) {
        bits trial = g & ~bit(i);
        if (closure(amb, trial) == s) g = trial;
    }
    return g;
}

inline std::string angle(const ambient& amb, bits s) {
    std::string out = "⟨";
    bool first = true;
    for_each_bit(generators(amb, s), [&](int i) {
        if (!first) out += ", ";
        out += display(amb, i);
        first = false;
    });
    return out + "⟩";
}

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// "⟨S_1, M[1,2]⟩" -> closure of the listed objects
inline bits parse_angle(const ambient& amb, const std::string& cell) {
    std::string s = trim(cell);
    const std::string open = "⟨", close = "⟩";
    if (s.rfind(open, 0) != 0 || s.size() < open.size() + close.size() ||
        s.compare(s.size() - close.size(), close.size(), close) != 0)
        throw parse_error("expected ⟨...⟩, got '" + cell + "'");
    s = s.substr(open.size(), s.size() - open.size() - close.size());
    std::vector<std::string> names;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            names.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) names.push_back(trim(cur));
    return closure(amb, io::resolve_set(amb, names));
}

inline std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto at = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, at == std::string::npos ? std::string::npos : at - pos)));
        if (at == std::string::npos) break;
        pos = at + sep.size();
    }
    return out;
}

inline std::string key_of(const ambient& amb, bits b) {
    std::string out;
    for (auto& n : amb.names(b)) out += n + ",";
    return "{" + out + "}";
}

// ---- tables --------------------------------------------------------------

struct row {
    std::string key;
    std::vector<std::string> cells;
};

struct generated {
    std::vector<std::string> header;
    std::vector<row> rows;
    std::vector<std::string> facts;
};

struct table_def {
    std::string name;
    std::string title;
    std::string ambient_spec;
    std::function<generated(const ambient&, int jobs)> build;
    std::function<std::string(const ambient&, const std::vector<std::string>&)> key;  // golden cells -> key
};

inline std::string render(const table_def& def, const generated& g) {
    std::ostringstream out;
    out << "## " << def.title << "\n\n";
    out << "ambient: " << def.ambient_spec << "\n\n";
    out << "|";
    for (auto& h : g.header) out << " " << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < g.header.size(); ++i) out << "---|";
    out << "\n";
    for (auto& r : g.rows) {
        out << "|";
        for (auto& c : r.cells) out << " " << c << " |";
        out << "\n";
    }
    if (!g.facts.empty()) out << "\n";
    for (auto& f : g.facts) out << f << "\n";
    return out.str();
}

namespace detail {

inline std::string torsion_key(const ambient& amb, const torsion_pair& tp) {
    return key_of(amb, tp.T) + "|" + key_of(amb, tp.F);
}

inline generated dynkin_torsion(const ambient& amb, int jobs) {
    generated g;
    g.header = {"T", "F"};
    auto pairs = non_trivial(amb, enumerate_torsion_pairs(amb, false, jobs));
    for (auto& tp : pairs) g.rows.push_back({torsion_key(amb, tp), {angle(amb, tp.T), angle(amb, tp.F)}});
    g.facts.push_back("non-trivial pairs: " + std::to_string(pairs.size()));
    return g;
}

inline std::string torsion_golden_key(const ambient& amb, const std::vector<std::string>& c) {
    if (c.size() != 2) throw parse_error("torsion rows need two cells");
    return key_of(amb, parse_angle(amb, c[0])) + "|" + key_of(amb, parse_angle(amb, c[1]));
}

inline std::string pieces_cell(const ambient& amb, const std::vector<bits>& pieces) {
    std::string out;
    for (std::size_t i = 0; i < pieces.size(); ++i) out += (i ? " < " : "") + angle(amb, pieces[i]);
    return out;
}

inline std::string pieces_key(const ambient& amb, const std::vector<bits>& pieces) {
    std::string out;
    for (auto b : pieces) out += key_of(amb, b) + "<";
    return out;
}

inline std::vector<bits> parse_pieces(const ambient& amb, const std::string& cell) {
    std::vector<bits> out;
    for (auto& p : split_on(cell, " < ")) out.push_back(parse_angle(amb, p));
    return out;
}

inline std::string histogram(const std::map<std::size_t, int>& h) {
    std::string out;
    for (auto& [k, v] : h) out += (out.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(v);
    return out;
}

inline std::string set_cell(const std::set<std::string>& s) {
    std::string out;
    for (auto& x : s) out += (out.empty() ? "" : ", ") + x;
    return "{" + out + "}";
}

inline std::string status(bool ok) { return ok ? "valid" : "INVALID"; }

inline row windowed_pair_row(const ambient& amb, const std::string& label, const std::string& params, const torsion_pair& tp) {
    bool ok = validate_torsion_pair(amb, tp).valid && !is_trivial(amb, tp);
    row r;
    r.cells = {label, params, std::to_string(popcount(tp.T & amb.checked)), std::to_string(popcount(tp.F & amb.checked)),
               status(ok)};
    for (auto& c : r.cells) r.key += c + "|";
    return r;
}

inline std::string text_key(const ambient&, const std::vector<std::string>& c) {
    std::string k;
    for (auto& x : c) k += x + "|";
    return k;
}

} // namespace detail

inline std::vector<table_def> all_tables() {
    using namespace detail;
    std::vector<table_def> t;
    t.push_back({"a2-torsion", "Non-trivial torsion pairs in mod-A2", "an:2", dynkin_torsion, torsion_golden_key});
    t.push_back({"a3-torsion", "Non-trivial torsion pairs in mod-A3", "an:3", dynkin_torsion, torsion_golden_key});
    t.push_back({"a3-finest", "Finest stability data on mod-A3", "an:3",
                 [](const ambient& amb, int jobs) {
                     generated g;
                     g.header = {"phases", "pieces (ascending)"};
                     std::map<std::size_t, int> hist;
                     auto all = enumerate_finest(amb, {false, true, jobs});
                     for (auto& sd : all) {
                         ++hist[sd.size()];
                         g.rows.push_back({std::to_string(sd.size()) + "|" + pieces_key(amb, sd.pieces),
                                           {std::to_string(sd.size()), pieces_cell(amb, sd.pieces)}});
                     }
                     g.facts.push_back("classes: " + std::to_string(all.size()));
                     g.facts.push_back("histogram: " + histogram(hist));
                     return g;
                 },
                 [](const ambient& amb, const std::vector<std::string>& c) {
                     if (c.size() != 2) throw parse_error("a3-finest rows need two cells");
                     auto p = parse_pieces(amb, c[1]);
                     return std::to_string(p.size()) + "|" + pieces_key(amb, p);
                 }});
    t.push_back({"t3-finest", "Finest stability data on T3 up to tau", "tube:3",
                 [](const ambient& amb, int jobs) {
                     generated g;
                     g.header = {"phases", "pieces (ascending)", "orbit"};
                     auto all = enumerate_finest(amb, {false, true, jobs});
                     auto classes = dedupe_tau(amb, all);
                     for (auto& sd : classes) {
                         auto canon = tau_canonical(amb, sd);
                         std::string orbit = std::to_string(tau_orbit_size(amb, sd));
                         g.rows.push_back({pieces_key(amb, canon) + "|" + orbit,
                                           {std::to_string(sd.size()), pieces_cell(amb, sd.pieces), orbit}});
                     }
                     g.facts.push_back("classes up to tau: " + std::to_string(classes.size()));
                     g.facts.push_back("total: " + std::to_string(all.size()));
                     return g;
                 },
                 [](const ambient& amb, const std::vector<std::string>& c) {
                     if (c.size() != 3) throw parse_error("t3-finest rows need three cells");
                     stability_data sd = numbered(parse_pieces(amb, c[1]));
                     return pieces_key(amb, tau_canonical(amb, sd)) + "|" + trim(c[2]);
                 }});
    t.push_back({"t3-torsion", "Non-trivial torsion pairs in T3 up to tau", "tube:3",
                 [](const ambient& amb, int jobs) {
                     generated g;
                     g.header = {"type", "T", "F"};
                     auto cls = classify_tube_torsion_pairs(amb, true);
                     std::vector<torsion_pair> by_class;
                     for (auto& c : cls) {
                         if (c.kind == "trivial") continue;
                         by_class.push_back(c.tp);
                         g.rows.push_back({c.kind + "|" + torsion_key(amb, tau_canonical(amb, c.tp)),
                                           {c.kind, angle(amb, c.tp.T), angle(amb, c.tp.F)}});
                     }
                     sort_unique(by_class);
                     auto brute = non_trivial(amb, enumerate_torsion_pairs(amb, true, jobs));
                     auto cuts = non_trivial(amb, torsion_pairs_from_finest(amb, true, jobs));
                     g.facts.push_back("non-trivial pairs up to tau: " + std::to_string(brute.size()));
                     g.facts.push_back(std::string("brute force, classifier and cuts agree: ") +
                                       (brute == by_class && brute == cuts ? "yes" : "no"));
                     return g;
                 },
                 [](const ambient& amb, const std::vector<std::string>& c) {
                     if (c.size() != 3) throw parse_error("t3-torsion rows need three cells");
                     torsion_pair tp{parse_angle(amb, c[1]), parse_angle(amb, c[2])};
                     return trim(c[0]) + "|" + torsion_key(amb, tau_canonical(amb, tp));
                 }});
    t.push_back({"kron-torsion", "Non-trivial torsion pairs in mod of the Kronecker algebra", "kronecker:window=6:depth=6:points=3",
                 [](const ambient& amb, int) {
                     generated g;
                     g.header = {"row", "parameters", "T in window", "F in window", "status"};
                     for (auto P : std::vector<std::set<std::string>>{{}, {"0"}, {"0", "1"}, {"0", "1", "λ"}})
                         g.rows.push_back(windowed_pair_row(amb, "I", "P = " + set_cell(P), windowed::kron_table_pair(amb, 1, P)));
                     for (int row : {2, 3})
                         for (int n : {1, 2, 5})
                             g.rows.push_back(windowed_pair_row(amb, row == 2 ? "II" : "III", "n = " + std::to_string(n),
                                                                windowed::kron_table_pair(amb, row, {}, n)));
                     g.rows.push_back(windowed_pair_row(amb, "IV", "-", windowed::kron_table_pair(amb, 4)));
                     g.facts.push_back("WINDOW-VERIFIED");
                     return g;
                 },
                 text_key});
    t.push_back({"p1-torsion", "Non-trivial torsion pairs in coh P1", "p1:window=-5..5:points=3",
                 [](const ambient& amb, int) {
                     generated g;
                     g.header = {"row", "parameters", "T in window", "F in window", "status"};
                     for (auto P : std::vector<std::set<std::string>>{{"0"}, {"0", "1"}, {"0", "1", "λ"}})
                         g.rows.push_back(windowed_pair_row(amb, "I", "P = " + set_cell(P), windowed::p1_points_pair(amb, P)));
                     for (int n : {-3, 0, 3})
                         g.rows.push_back(windowed_pair_row(amb, "II", "n = " + std::to_string(n), windowed::p1_degree_pair(amb, n)));
                     g.facts.push_back("WINDOW-VERIFIED");
                     return g;
                 },
                 text_key});
    t.push_back({"x2-finest", "Finest stability data on coh X(2)", "x2:window=-4..4:points=3",
                 [](const ambient& amb, int) {
                     generated g;
                     g.header = {"family", "parameters", "phases", "status", "finest", "finer than slope"};
                     auto slope = windowed::x2_slope(amb);
                     auto add = [&](windowed::x2_family f, int m, const std::string& params) {
                         auto sd = windowed::x2_finest(amb, f, m);
                         row r;
                         r.cells = {windowed::to_string(f), params, std::to_string(sd.size()), status(is_valid(amb, sd)),
                                    is_finest(amb, sd).finest ? "yes" : "no",
                                    is_coarser(amb, slope, sd).has_value() ? "yes" : "no"};
                         for (auto& c : r.cells) r.key += c + "|";
                         g.rows.push_back(r);
                     };
                     add(windowed::x2_family::full, 0, "-");
                     add(windowed::x2_family::lm, 0, "m = 0");
                     add(windowed::x2_family::lm, 2, "m = 2");
                     add(windowed::x2_family::coset, 0, "-");
                     g.facts.push_back("WINDOW-VERIFIED");
                     return g;
                 },
                 text_key});
    t.push_back({"x2-torsion", "Non-trivial torsion pairs in coh X(2)", "x2:window=-4..4:points=3",
                 [](const ambient& amb, int) {
                     generated g;
                     g.header = {"row", "parameters", "T in window", "F in window", "status"};
                     using S = std::set<std::string>;
                     for (auto P : std::vector<S>{{"0"}, {"inf"}, {"0", "inf"}, {"0", "1", "λ", "inf"}})
                         g.rows.push_back(windowed_pair_row(amb, "I", "P = " + set_cell(P), windowed::x2_table_pair(amb, 1, P)));
                     for (int row : {2, 3})
                         for (auto Q : std::vector<S>{{}, {"0"}, {"0", "1", "λ"}})
                             g.rows.push_back(windowed_pair_row(amb, row == 2 ? "II" : "III", "Q = " + set_cell(Q),
                                                                windowed::x2_table_pair(amb, row, {}, Q)));
                     for (int row : {4, 5})
                         for (int s : {0, 2})
                             g.rows.push_back(windowed_pair_row(amb, row == 4 ? "IV" : "V", "shift = " + std::to_string(s) + "c",
                                                                windowed::x2_table_pair(amb, row, {}, {}, s)));
                     g.rows.push_back(windowed_pair_row(amb, "VI", "-", windowed::x2_table_pair(amb, 6)));
                     g.facts.push_back("WINDOW-VERIFIED");
                     return g;
                 },
                 text_key});
    return t;
}

inline std::vector<std::string> names() {
    std::vector<std::string> out;
    for (auto& t : all_tables()) out.push_back(t.name);
    return out;
}

inline const table_def& find(const std::vector<table_def>& defs, const std::string& name) {
    for (auto& d : defs)
        if (d.name == name) return d;
    std::string known;
    for (auto& d : defs) known += (known.empty() ? "" : ", ") + d.name;
    throw parse_error("unknown table '" + name + "' (known: " + known + ")");
}

inline std::string generate(const std::string& name, int jobs = 1) {
    auto defs = all_tables();
    auto& def = find(defs, name);
    ambient amb = io::parse_ambient(def.ambient_spec);
    return render(def, def.build(amb, jobs));
}

struct verdict {
    bool match = false;
    std::string markdown;            // regenerated table
    std::vector<std::string> diff;   // "- golden line" / "+ generated line"
};

// Golden files: an HTML comment header, then markdown. Table rows are
// compared by key (semantic for Dynkin and tube tables), other lines as text.
inline verdict verify(const std::string& name, const std::string& golden, int jobs = 1) {
    auto defs = all_tables();
    auto& def = find(defs, name);
    ambient amb = io::parse_ambient(def.ambient_spec);
    generated g = def.build(amb, jobs);
    verdict v;
    v.markdown = render(def, g);

    std::map<std::string, std::string> gold_rows, gen_rows;
    std::set<std::string> gold_text, gen_text;
    bool in_comment = false, seen_header = false;
    std::istringstream in(golden);
    std::string line;
    while (std::getline(in, line)) {
        std::string s = trim(line);
        if (in_comment) {
            if (s.find("-->") != std::string::npos) in_comment = false;
            continue;
        }
        if (s.rfind("<!--", 0) == 0) {
            in_comment = s.find("-->") == std::string::npos;
            continue;
        }
        if (s.empty()) continue;
        if (s[0] != '|') {
            gold_text.insert(s);
            continue;
        }
        if (s.find("---") != std::string::npos) continue;
        if (!seen_header) {
            seen_header = true;
            gold_text.insert(s);
            continue;
        }
        auto cells = split_on(s.substr(1, s.size() - 2), "|");
        gold_rows[def.key(amb, cells)] = s;
    }
    {
        std::istringstream gen(v.markdown);
        bool header = false;
        while (std::getline(gen, line)) {
            std::string s = trim(line);
            if (s.empty() || (s[0] == '|' && s.find("---") != std::string::npos)) continue;
            if (s[0] != '|' || !header) {
                if (s[0] == '|') header = true;
                gen_text.insert(s);
            }
        }
        for (auto& r : g.rows) {
            std::string s = "|";
            for (auto& c : r.cells) s += " " + c + " |";
            gen_rows[r.key] = s;
        }
    }
    for (auto& [k, s] : gold_rows)
        if (!gen_rows.count(k)) v.diff.push_back("- " + s);
    for (auto& [k, s] : gen_rows)
        if (!gold_rows.count(k)) v.diff.push_back("+ " + s);
    for (auto& s : gold_text)
        if (!gen_text.count(s)) v.diff.push_back("- " + s);
    for (auto& s : gen_text)
        if (!gold_text.count(s)) v.diff.push_back("+ " + s);
    v.match = v.diff.empty();
    return v;
}

} // namespace stabcat::tables
