#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabcat/io.hpp"
#include "stabcat/oracle.hpp"
#include "stabcat/oracle_suites.hpp"
#include "stabcat/parallel.hpp"
#include "stabcat/stability.hpp"
#include "stabcat/tables.hpp"
#include "stabcat/torsion.hpp"
#include "stabcat/windowed.hpp"

#ifndef STABCAT_GOLDEN_DIR
#define STABCAT_GOLDEN_DIR "tests/golden"
#endif

using namespace stabcat;
using nlohmann::json;

namespace {

int jobs = 0;
bool as_json = false;

int njobs() { return jobs > 0 ? jobs : default_jobs(); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string window_note(const ambient& amb) {
    if (!amb.windowed) return "";
    return "WINDOW-VERIFIED (" + amb.spec + ")";
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

void print_data(const ambient& amb, const stability_data& sd) {
    for (std::size_t i = sd.size(); i-- > 0;)
        std::cout << "  " << sd.order[i].str() << ": " << join(amb.names(sd.pieces[i])) << "\n";
}

// ---- validate ------------------------------------------------------------

int cmd_validate(const std::string& spec, const std::string& file) {
    ambient amb = io::parse_ambient(spec);
    json j = io::read_json(file);
    if (j.contains("T")) {
        auto tp = io::torsion_from_json(amb, j);
        auto rep = validate_torsion_pair(amb, tp);
        if (as_json) {
            json out = io::to_json(rep);
            out["window_verified"] = amb.windowed;
            print_json(out);
        } else {
            std::cout << "torsion pair: " << (rep.valid ? "valid" : "INVALID") << "\n";
            for (auto& [a, b] : rep.hom_witnesses) std::cout << "  Hom(" << a << ", " << b << ") != 0\n";
            if (!rep.T_is_left_perp) std::cout << "  T is not the left perpendicular of F\n";
            if (!rep.F_is_right_perp) std::cout << "  F is not the right perpendicular of T\n";
            for (auto& x : rep.decomposition_failures) std::cout << "  no T-by-F decomposition: " << x << "\n";
            for (auto& x : rep.quotient_escapes) std::cout << "  quotient leaves T: " << x << "\n";
            for (auto& x : rep.sub_escapes) std::cout << "  subobject leaves F: " << x << "\n";
            if (amb.windowed) std::cout << window_note(amb) << "\n";
        }
        return rep.valid ? 0 : 1;
    }
    auto sd = io::stability_from_json(amb, j);
    auto rep = validate(amb, sd);
    if (as_json) {
        print_json(io::to_json(rep));
    } else {
        std::cout << "stability data: " << (rep.valid ? "valid" : "INVALID") << " (" << sd.size() << " phases)\n";
        std::cout << "  checked: " << rep.scope << "\n";
        for (auto& [a, b] : rep.hom_violations) std::cout << "  Hom from higher to lower phase: " << a << " -> " << b << "\n";
        for (auto& x : rep.hn_failures) std::cout << "  no HN filtration: " << x << "\n";
        for (auto& x : rep.overlaps) std::cout << "  in two phases: " << x << "\n";
        for (auto& x : rep.unclosed) std::cout << "  piece not closed: " << x << "\n";
        if (amb.windowed) std::cout << window_note(amb) << "\n";
    }
    return rep.valid ? 0 : 1;
}

// ---- hn ------------------------------------------------------------------

int cmd_hn(const std::string& spec, const std::string& file, const std::string& object) {
    ambient amb = io::parse_ambient(spec);
    auto sd = io::stability_from_json(amb, io::read_json(file));
    auto r = hn_filtration(amb, sd, io::canonical_name(amb, object));
    if (as_json) {
        print_json(io::to_json(r));
    } else {
        std::cout << "HN filtration of " << r.object << " (" << r.count << " decreasing chain"
                  << (r.count == 1 ? "" : "s") << "):\n";
        for (auto& [ph, fac] : r.steps) std::cout << "  phase " << ph.str() << ": " << join(fac, " + ") << "\n";
        if (amb.windowed) std::cout << window_note(amb) << "\n";
    }
    return r.count == 1 ? 0 : 1;
}

// ---- finest --------------------------------------------------------------

stability_data windowed_family(const ambient& amb, const std::string& family, const std::vector<std::string>& point_order,
                               int m) {
    auto order = point_order.empty() ? amb.points : point_order;
    if (amb.family == "p1") {
        if (family == "slope") return windowed::p1_slope(amb);
        if (family.empty() || family == "points") return windowed::p1_finest(amb, order);
    } else if (amb.family == "kronecker") {
        if (family.empty() || family == "preprojective") return windowed::kron_finest_preprojective(amb, order);
        if (family == "simples") return windowed::kron_finest_simples(amb);
    } else if (amb.family == "x2") {
        if (family == "slope") return windowed::x2_slope(amb);
        std::vector<std::string> torsion;
        if (!point_order.empty()) {
            torsion = {"inf0", "inf1/2", "inf1"};
            torsion.insert(torsion.end(), point_order.begin(), point_order.end());
        }
        if (family.empty() || family == "full") return windowed::x2_finest(amb, windowed::x2_family::full, m, torsion);
        if (family == "lm") return windowed::x2_finest(amb, windowed::x2_family::lm, m, torsion);
        if (family == "coset") return windowed::x2_finest(amb, windowed::x2_family::coset, m, torsion);
    }
    throw parse_error("unknown family '" + family + "' for " + amb.spec);
}

int report_finest(const ambient& amb, const stability_data& sd) {
    auto rep = validate(amb, sd);
    auto fr = is_finest(amb, sd);
    if (as_json) {
        json j = io::to_json(amb, sd);
        j["valid"] = rep.valid;
        j["finest"] = fr.finest;
        if (fr.witness) {
            auto& [ph, a, b] = *fr.witness;
            j["witness"] = {{"phase", ph.str()}, {"from", a}, {"to", b}};
        }
        j["window_verified"] = amb.windowed;
        print_json(j);
    } else {
        std::cout << (rep.valid ? "valid" : "INVALID") << ", " << (fr.finest ? "finest" : "not finest") << ", "
                  << sd.size() << " phases\n";
        if (fr.witness) {
            auto& [ph, a, b] = *fr.witness;
            std::cout << "  Hom(" << a << ", " << b << ") = 0 inside phase " << ph.str() << "\n";
        }
        print_data(amb, sd);
        if (amb.windowed) std::cout << window_note(amb) << "\n";
    }
    return rep.valid && fr.finest ? 0 : 1;
}

int cmd_finest(const std::string& spec, bool upto_tau, const std::string& file, const std::string& family,
               const std::vector<std::string>& point_order, int m, bool unrestricted) {
    ambient amb = io::parse_ambient(spec);
    if (!file.empty()) return report_finest(amb, io::stability_from_json(amb, io::read_json(file)));
    if (amb.windowed) return report_finest(amb, windowed_family(amb, family, point_order, m));
    auto all = enumerate_finest(amb, {false, !unrestricted, njobs()});
    auto shown = upto_tau ? dedupe_tau(amb, all) : all;
    if (as_json) {
        json arr = json::array();
        for (auto& sd : shown) {
            json j = io::to_json(amb, sd);
            if (upto_tau) j["orbit"] = tau_orbit_size(amb, sd);
            arr.push_back(j);
        }
        print_json(json{{"ambient", amb.spec}, {"count", shown.size()}, {"total", all.size()}, {"data", arr}});
    } else {
        std::cout << shown.size() << " finest stability data" << (upto_tau ? " up to tau" : "")
                  << " (" << all.size() << " in total)\n";
        for (std::size_t k = 0; k < shown.size(); ++k) {
            std::cout << "#" << k + 1 << ": " << shown[k].size() << " phases";
            if (upto_tau) std::cout << ", orbit " << tau_orbit_size(amb, shown[k]);
            std::cout << "\n";
            print_data(amb, shown[k]);
        }
    }
    return 0;
}

// ---- torsion -------------------------------------------------------------

int cmd_torsion(const std::string& spec, const std::string& method, bool upto_tau, bool include_trivial) {
    ambient amb = io::parse_ambient(spec);
    if (amb.windowed) throw precondition_error("torsion enumeration is not available on windowed ambients; use validate");
    std::vector<torsion_pair> pairs;
    std::map<std::pair<bits, bits>, std::string> kinds;
    if (method == "brute") {
        pairs = enumerate_torsion_pairs(amb, upto_tau, njobs());
    } else if (method == "cuts") {
        pairs = torsion_pairs_from_finest(amb, upto_tau, njobs());
    } else if (method == "classify") {
        for (auto& c : classify_tube_torsion_pairs(amb, upto_tau)) {
            pairs.push_back(c.tp);
            kinds[{c.tp.T, c.tp.F}] = c.kind;
        }
        sort_unique(pairs);
    } else {
        throw parse_error("unknown method '" + method + "' (brute, classify or cuts)");
    }
    if (!include_trivial) pairs = non_trivial(amb, pairs);
    if (as_json) {
        json arr = json::array();
        for (auto& tp : pairs) {
            json j = io::to_json(amb, tp);
            if (kinds.count({tp.T, tp.F})) j["type"] = kinds[{tp.T, tp.F}];
            arr.push_back(j);
        }
        print_json(json{{"ambient", amb.spec}, {"method", method}, {"count", pairs.size()}, {"pairs", arr}});
    } else {
        std::cout << pairs.size() << (include_trivial ? "" : " non-trivial") << " torsion pairs"
                  << (upto_tau ? " up to tau" : "") << " (" << method << ")\n";
        for (auto& tp : pairs) {
            std::string k = kinds.count({tp.T, tp.F}) ? " [" + kinds[{tp.T, tp.F}] + "]" : "";
            std::cout << "  T = " << tables::angle(amb, tp.T) << "  F = " << tables::angle(amb, tp.F) << k << "\n";
        }
    }
    return 0;
}

// ---- refine / compare ----------------------------------------------------

int cmd_refine(const std::string& spec, const std::string& file) {
    ambient amb = io::parse_ambient(spec);
    auto sd = io::stability_from_json(amb, io::read_json(file));
    auto rep = validate(amb, sd);
    if (!rep.valid) throw precondition_error("input stability data is not valid; run validate for details");
    auto out = refine_to_finest(amb, sd);
    if (as_json) {
        print_json(io::to_json(amb, out));
    } else {
        std::cout << "refined " << sd.size() << " -> " << out.size() << " phases\n";
        print_data(amb, out);
        if (amb.windowed) std::cout << window_note(amb) << "\n";
    }
    return 0;
}

int cmd_compare(const std::string& spec, const std::string& coarse_file, const std::string& fine_file) {
    ambient amb = io::parse_ambient(spec);
    auto coarse = io::stability_from_json(amb, io::read_json(coarse_file));
    auto fine = io::stability_from_json(amb, io::read_json(fine_file));
    auto map = is_coarser(amb, coarse, fine);
    bool eq = equivalent(canonicalize(coarse), canonicalize(fine));
    if (as_json) {
        json j{{"finer", map.has_value()}, {"equivalent", eq}, {"window_verified", amb.windowed}};
        if (map) {
            json r = json::object();
            for (std::size_t i = 0; i < map->size(); ++i) r[fine.order[i].str()] = coarse.order[(*map)[i]].str();
            j["projection"] = r;
        }
        print_json(j);
    } else {
        std::cout << "second is " << (map ? "" : "NOT ") << "finer than the first" << (eq ? " (equivalent)" : "") << "\n";
        if (map)
            for (std::size_t i = 0; i < map->size(); ++i)
                std::cout << "  " << fine.order[i].str() << " -> " << coarse.order[(*map)[i]].str() << "\n";
        if (amb.windowed) std::cout << window_note(amb) << "\n";
    }
    return map ? 0 : 1;
}

// ---- verify-table --------------------------------------------------------

int cmd_verify_table(const std::string& name, const std::string& dir, bool print) {
    std::vector<std::string> names = name == "all" ? tables::names() : std::vector<std::string>{name};
    auto defs = tables::all_tables();
    for (auto& n : names) tables::find(defs, n);
    bool ok = true;
    for (auto& n : names) {
        if (print) {
            std::cout << tables::generate(n, njobs());
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        auto v = tables::verify(n, io::read_text(dir + "/" + n + ".md"), njobs());
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && v.match;
        std::ostringstream t;
        t.precision(3);
        t << std::fixed << secs;
        std::cout << n << ": " << (v.match ? "match" : "MISMATCH") << " (" << t.str() << " s)\n";
        for (auto& d : v.diff) std::cout << "  " << d << "\n";
    }
    return ok ? 0 : 1;
}


// ---- oracle-check --------------------------------------------------------

int cmd_oracle_check(const std::string& suite, const std::vector<int>& fields) {
    static const std::vector<std::string> known{"hom", "middle-terms", "closure", "ar", "fields", "kronecker"};
    std::vector<std::string> run = suite == "all" ? known : std::vector<std::string>{suite};
    if (std::find(known.begin(), known.end(), run.front()) == known.end())
        throw parse_error("unknown suite '" + suite + "' (hom, middle-terms, closure, ar, fields, kronecker or all)");
    bool ok = true;
    json out = json::array();
    for (auto& s : run) {
        std::vector<int> ps = s == "fields" ? std::vector<int>{0} : fields;
        for (int p : ps) {
            auto t0 = std::chrono::steady_clock::now();
            oracle::tally t;
            if (s == "hom") t = oracle::suite_hom(p, 4, njobs());
            if (s == "middle-terms") t = oracle::suite_middle(p, 3, 6);
            if (s == "closure") t = oracle::suite_closure(p, {2, 3}, 6);
            if (s == "ar") t = oracle::suite_ar(p, 3, 4);
            if (s == "fields") t = oracle::suite_fields(3, 4);
            if (s == "kronecker") t = oracle::suite_kronecker(p);
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ok = ok && t.mismatches == 0;
            std::string label = s + (p ? " GF(" + std::to_string(p) + ")" : " GF(2,3,5)");
            if (as_json) {
                out.push_back({{"suite", s}, {"field", p}, {"checks", t.checks}, {"mismatches", t.mismatches}, {"examples", t.examples}});
            } else {
                std::ostringstream ts;
                ts.precision(2);
                ts << std::fixed << secs;
                std::cout << label << ": " << t.checks << " checks, " << t.mismatches << " mismatches (" << ts.str() << " s)\n";
                for (auto& e : t.examples) std::cout << "  " << e << "\n";
            }
        }
    }
    if (as_json) print_json(out);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stabcat: stability data and torsion pairs on small abelian categories"};
    app.require_subcommand(1);
    app.add_option("--jobs,-j", jobs, "worker threads (default: hardware concurrency)");
    app.add_flag("--json", as_json, "emit JSON");

    std::string spec, data, object, method = "brute", family, coarse, fine, table, golden = STABCAT_GOLDEN_DIR, suite;
    bool upto_tau = false, upto_equiv = false, trivial = false, print = false, unrestricted = false;
    std::vector<std::string> point_order;
    std::vector<int> fields{2};
    int m = 0;

    auto* v = app.add_subcommand("validate", "validate stability data or a torsion pair from JSON");
    v->add_option("--ambient,-a", spec, "ambient spec, e.g. tube:3")->required();
    v->add_option("--data,-d", data, "JSON file")->required();

    auto* h = app.add_subcommand("hn", "Harder-Narasimhan filtration of one object");
    h->add_option("--ambient,-a", spec)->required();
    h->add_option("--data,-d", data)->required();
    h->add_option("--object,-o", object)->required();

    auto* f = app.add_subcommand("finest", "enumerate finest stability data, or check one");
    f->add_option("--ambient,-a", spec)->required();
    f->add_flag("--upto-tau", upto_tau, "identify data in one tau-orbit");
    f->add_flag("--upto-equiv", upto_equiv, "identify equivalent data (always on)");
    f->add_flag("--all-candidates", unrestricted, "search every Hom-connected closed piece");
    f->add_option("--data,-d", data, "check this datum instead of enumerating");
    f->add_option("--family", family, "windowed family: points|slope (p1), preprojective|simples (kronecker), full|lm|coset|slope (x2)");
    f->add_option("--point-order", point_order, "sample points in increasing phase");
    f->add_option("--m", m, "parameter of the x2 lm family");

    auto* t = app.add_subcommand("torsion", "enumerate or classify torsion pairs");
    t->add_option("--ambient,-a", spec)->required();
    t->add_option("--method", method, "brute|classify|cuts")->check(CLI::IsMember({"brute", "classify", "cuts"}));
    t->add_flag("--upto-tau", upto_tau);
    t->add_flag("--include-trivial", trivial);

    auto* r = app.add_subcommand("refine", "refine valid stability data to a finest one");
    r->add_option("--ambient,-a", spec)->required();
    r->add_option("--data,-d", data)->required();

    auto* c = app.add_subcommand("compare", "is the second datum finer than the first");
    c->add_option("--ambient,-a", spec)->required();
    c->add_option("--coarse", coarse)->required();
    c->add_option("--fine", fine)->required();

    auto* vt = app.add_subcommand("verify-table", "rerun a classification table and diff against its golden file");
    vt->add_option("table", table, "table name or 'all'")->required();
    vt->add_option("--golden", golden, "golden directory");
    vt->add_flag("--print", print, "print the regenerated table instead of diffing");

    auto* oc = app.add_subcommand("oracle-check", "cross-check combinatorial rules against linear algebra");
    oc->add_option("suite", suite, "hom|middle-terms|closure|ar|fields|kronecker|all")->required();
    oc->add_option("--field,-p", fields, "prime field sizes")->check(CLI::IsMember({2, 3, 5}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(exit_code::parse);
    }

    try {
        if (*v) return cmd_validate(spec, data);
        if (*h) return cmd_hn(spec, data, object);
        if (*f) return cmd_finest(spec, upto_tau, data, family, point_order, m, unrestricted);
        if (*t) return cmd_torsion(spec, method, upto_tau, trivial);
        if (*r) return cmd_refine(spec, data);
        if (*c) return cmd_compare(spec, coarse, fine);
        if (*vt) return cmd_verify_table(table, golden, print);
        if (*oc) return cmd_oracle_check(suite, fields);
    } catch (const error& e) {
        std::cerr << "stabcat: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "stabcat: malformed JSON: " << e.what() << "\n";
        return static_cast<int>(exit_code::parse);
    } catch (const std::exception& e) {
        std::cerr << "stabcat: internal: " << e.what() << "\n";
        return static_cast<int>(exit_code::internal);
    }
    return 0;
}
