#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stabcat/errors.hpp"

namespace stabcat {

// A phase is a structural value. Rationals are kept reduced with a positive
// denominator so that equality is exact.
class phase {
public:
    enum class tag : int { label = 0, integer = 1, rational = 2, infinity = 3, pair = 4 };

    phase() : phase(label_of("")) {}

    static phase label_of(std::string s) {
        phase p(tag::label);
        p.text_ = std::move(s);
        return p;
    }
    static phase integer(std::int64_t v) {
        phase p(tag::integer);
        p.num_ = v;
        return p;
    }
    static phase rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw precondition_error("rational phase with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (den == 1) return integer(num);
        phase p(tag::rational);
        p.num_ = num;
        p.den_ = den;
        return p;
    }
    static phase infinity() { return phase(tag::infinity); }
    static phase pair(const phase& a, const phase& b) {
        phase p(tag::pair);
        p.sub_ = std::make_shared<const std::pair<phase, phase>>(a, b);
        return p;
    }

    tag kind() const { return tag_; }
    const std::string& text() const { return text_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    const phase& first() const { return sub_->first; }
    const phase& second() const { return sub_->second; }

    // Structural total order; only used for containers, never as the
    // ordering of a stability datum.
    friend bool operator<(const phase& a, const phase& b) {
        if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
        switch (a.tag_) {
        case tag::label: return a.text_ < b.text_;
        case tag::integer: return a.num_ < b.num_;
        case tag::rational:
            return std::make_pair(a.num_, a.den_) < std::make_pair(b.num_, b.den_);
        case tag::infinity: return false;
        case tag::pair:
            if (a.first() < b.first()) return true;
            if (b.first() < a.first()) return false;
            return a.second() < b.second();
        }
        return false;
    }
    friend bool operator==(const phase& a, const phase& b) { return !(a < b) && !(b < a); }
    friend bool operator!=(const phase& a, const phase& b) { return !(a == b); }

    std::string str() const {
        switch (tag_) {
        case tag::label: return needs_quotes(text_) ? "'" + text_ + "'" : text_;
        case tag::integer: return std::to_string(num_);
        case tag::rational: return std::to_string(num_) + "/" + std::to_string(den_);
        case tag::infinity: return "inf";
        case tag::pair: return "(" + first().str() + "|" + second().str() + ")";
        }
        return {};
    }

    static phase parse(const std::string& s) {
        std::size_t pos = 0;
        phase p = parse_at(s, pos);
        if (pos != s.size()) throw parse_error("trailing characters in phase '" + s + "'");
        return p;
    }

private:
    explicit phase(tag t) : tag_(t) {}

    static bool looks_numeric(const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        bool slash = false;
        for (; i < s.size(); ++i) {
            if (s[i] == '/' && !slash && i + 1 < s.size()) { slash = true; continue; }
            if (s[i] < '0' || s[i] > '9') return false;
        }
        return true;
    }
    static bool needs_quotes(const std::string& s) {
        if (s.empty() || s == "inf" || looks_numeric(s)) return true;
        return s.find_first_of("()|'") != std::string::npos;
    }

    static phase parse_at(const std::string& s, std::size_t& pos) {
        if (pos >= s.size()) throw parse_error("empty phase in '" + s + "'");
        if (s[pos] == '(') {
            ++pos;
            phase a = parse_at(s, pos);
            if (pos >= s.size() || s[pos] != '|') throw parse_error("expected '|' in pair phase '" + s + "'");
            ++pos;
            phase b = parse_at(s, pos);
            if (pos >= s.size() || s[pos] != ')') throw parse_error("expected ')' in pair phase '" + s + "'");
            ++pos;
            return pair(a, b);
        }
        if (s[pos] == '\'') {
            std::size_t end = s.find('\'', pos + 1);
            if (end == std::string::npos) throw parse_error("unterminated quoted label in '" + s + "'");
            std::string t = s.substr(pos + 1, end - pos - 1);
            pos = end + 1;
            return label_of(t);
        }
        std::size_t end = s.find_first_of("|)", pos);
        if (end == std::string::npos) end = s.size();
        std::string tok = s.substr(pos, end - pos);
        pos = end;
        if (tok == "inf") return infinity();
        if (looks_numeric(tok)) {
            auto slash = tok.find('/');
            if (slash == std::string::npos) return integer(std::stoll(tok));
            return rational(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1)));
        }
        return label_of(tok);
    }

    tag tag_;
    std::string text_;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const std::pair<phase, phase>> sub_;
};

// Upper bound on explicit carriers. Adjustable for tests that need bigger
// orders.
inline std::size_t& explicit_order_cap() {
    static std::size_t cap = 10000;
    return cap;
}

class linear_order {
public:
    enum class kind { explicit_list, integers, rationals_inf, lex_product, refined };

    linear_order() = default;

    static linear_order from_phases(std::vector<phase> elems) {
        if (elems.size() > explicit_order_cap())
            throw precondition_error("explicit order of size " + std::to_string(elems.size()) +
                                     " exceeds cap " + std::to_string(explicit_order_cap()));
        linear_order o;
        o.kind_ = kind::explicit_list;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            auto [it, fresh] = o.pos_.emplace(elems[i], static_cast<int>(i));
            if (!fresh) throw precondition_error("duplicate label '" + elems[i].str() + "'");
        }
        o.elems_ = std::move(elems);
        return o;
    }

    static linear_order integers() {
        linear_order o;
        o.kind_ = kind::integers;
        return o;
    }
    static linear_order rationals_with_infinity() {
        linear_order o;
        o.kind_ = kind::rationals_inf;
        return o;
    }

    kind order_kind() const { return kind_; }
    bool enumerable() const {
        return kind_ == kind::explicit_list || kind_ == kind::refined ||
               (kind_ == kind::lex_product && !elems_.empty());
    }

    const std::vector<phase>& elements() const {
        if (!enumerable()) throw precondition_error("cannot enumerate an infinite order");
        return elems_;
    }
    std::size_t size() const { return elements().size(); }

    bool contains(const phase& p) const {
        switch (kind_) {
        case kind::explicit_list:
        case kind::refined: return pos_.count(p) > 0;
        case kind::integers: return p.kind() == phase::tag::integer;
        case kind::rationals_inf:
            return p.kind() == phase::tag::integer || p.kind() == phase::tag::rational ||
                   p.kind() == phase::tag::infinity;
        case kind::lex_product:
            if (p.kind() != phase::tag::pair || !outer_->contains(p.first())) return false;
            return inner_for(p.first()).contains(p.second());
        }
        return false;
    }

    // Strict comparison. Both arguments must be carried by the order.
    bool less(const phase& a, const phase& b) const {
        switch (kind_) {
        case kind::explicit_list:
        case kind::refined: return index_of(a) < index_of(b);
        case kind::integers:
            require(a);
            require(b);
            return a.num() < b.num();
        case kind::rationals_inf: {
            require(a);
            require(b);
            bool ia = a.kind() == phase::tag::infinity, ib = b.kind() == phase::tag::infinity;
            if (ia || ib) return !ia && ib;
            // cross multiplication with positive denominators
            return static_cast<__int128>(a.num()) * b.den() < static_cast<__int128>(b.num()) * a.den();
        }
        case kind::lex_product:
            require(a);
            require(b);
            if (outer_->less(a.first(), b.first())) return true;
            if (outer_->less(b.first(), a.first())) return false;
            return inner_for(a.first()).less(a.second(), b.second());
        }
        return false;
    }

    int index_of(const phase& p) const {
        auto it = pos_.find(p);
        if (it == pos_.end()) throw precondition_error("phase '" + p.str() + "' is not in the order");
        return it->second;
    }

    // Projection onto the base order for refinements.
    const std::map<phase, phase>& projection() const { return proj_; }
    const linear_order& base() const { return *outer_; }

    friend linear_order lex_product(const linear_order& outer, const std::map<phase, linear_order>& inner,
                                    const std::optional<linear_order>& fallback);

    friend struct refinement refine_order(const linear_order& base, const std::map<phase, linear_order>& blocks);

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind_) {
        case kind::explicit_list:
            j["kind"] = "explicit";
            j["elements"] = strings();
            break;
        case kind::integers: j["kind"] = "integers"; break;
        case kind::rationals_inf: j["kind"] = "rationals-with-infinity"; break;
        case kind::lex_product: {
            j["kind"] = "lex-product";
            j["outer"] = outer_->to_json();
            nlohmann::json inner = nlohmann::json::object();
            for (auto& [k, v] : inner_) inner[k.str()] = v.to_json();
            j["inner"] = inner;
            if (fallback_) j["default_inner"] = fallback_->to_json();
            if (!elems_.empty()) j["elements"] = strings();
            break;
        }
        case kind::refined: {
            j["kind"] = "refined";
            j["base"] = outer_->to_json();
            j["elements"] = strings();
            nlohmann::json pr = nlohmann::json::object();
            for (auto& e : elems_) pr[e.str()] = proj_.at(e).str();
            j["projection"] = pr;
            break;
        }
        }
        return j;
    }

    static linear_order from_json(const nlohmann::json& j);

    friend bool operator==(const linear_order& a, const linear_order& b) { return a.to_json() == b.to_json(); }

private:
    void require(const phase& p) const {
        if (!contains(p)) throw precondition_error("phase '" + p.str() + "' is not in the order");
    }
    const linear_order& inner_for(const phase& outer_elem) const {
        auto it = inner_.find(outer_elem);
        if (it != inner_.end()) return it->second;
        if (fallback_) return *fallback_;
        throw precondition_error("no inner order for outer element '" + outer_elem.str() + "'");
    }
    std::vector<std::string> strings() const {
        std::vector<std::string> out;
        for (auto& e : elems_) out.push_back(e.str());
        return out;
    }

    kind kind_ = kind::explicit_list;
    std::vector<phase> elems_;
    std::map<phase, int> pos_;
    std::shared_ptr<const linear_order> outer_;
    std::map<phase, linear_order> inner_;
    std::shared_ptr<const linear_order> fallback_;
    std::map<phase, phase> proj_;
};

inline linear_order make_finite_order(const std::vector<std::string>& labels) {
    std::vector<phase> ps;
    ps.reserve(labels.size());
    for (auto& l : labels) ps.push_back(phase::label_of(l));
    return linear_order::from_phases(std::move(ps));
}

// (a,x) < (b,y) iff a<b, or a=b and x<y in the inner order of a.
inline linear_order lex_product(const linear_order& outer, const std::map<phase, linear_order>& inner,
                                const std::optional<linear_order>& fallback = std::nullopt) {
    linear_order o;
    o.kind_ = linear_order::kind::lex_product;
    o.outer_ = std::make_shared<const linear_order>(outer);
    o.inner_ = inner;
    if (fallback) o.fallback_ = std::make_shared<const linear_order>(*fallback);
    if (outer.enumerable()) {
        std::vector<phase> all;
        bool finite = true;
        for (auto& a : outer.elements()) {
            const linear_order& in = o.inner_for(a);
            if (!in.enumerable()) { finite = false; break; }
            for (auto& x : in.elements()) all.push_back(phase::pair(a, x));
        }
        if (finite) {
            if (all.size() > explicit_order_cap())
                throw precondition_error("lex product of size " + std::to_string(all.size()) + " exceeds cap");
            for (std::size_t i = 0; i < all.size(); ++i) o.pos_.emplace(all[i], static_cast<int>(i));
            o.elems_ = std::move(all);
        }
    } else if (!fallback) {
        throw precondition_error("lex product over an infinite outer order needs a default inner order");
    }
    return o;
}

struct refinement {
    linear_order psi;
    std::map<phase, phase> r;
};

// Replace each phase of the base by its block; blocks keep the base order.
inline refinement refine_order(const linear_order& base, const std::map<phase, linear_order>& blocks) {
    std::vector<phase> all;
    std::map<phase, phase> proj;
    for (auto& phi : base.elements()) {
        auto it = blocks.find(phi);
        if (it == blocks.end()) throw precondition_error("no block for phase '" + phi.str() + "'");
        if (it->second.size() == 0) throw precondition_error("empty block for phase '" + phi.str() + "'");
        for (auto& psi : it->second.elements()) {
            all.push_back(psi);
            proj[psi] = phi;
        }
    }
    linear_order o = linear_order::from_phases(all);
    o.kind_ = linear_order::kind::refined;
    o.outer_ = std::make_shared<const linear_order>(base);
    o.proj_ = proj;
    return {o, proj};
}

inline linear_order linear_order::from_json(const nlohmann::json& j) {
    std::string k = j.at("kind").get<std::string>();
    auto phases_of = [](const nlohmann::json& arr) {
        std::vector<phase> ps;
        for (auto& e : arr) ps.push_back(phase::parse(e.get<std::string>()));
        return ps;
    };
    if (k == "explicit") return from_phases(phases_of(j.at("elements")));
    if (k == "integers") return integers();
    if (k == "rationals-with-infinity") return rationals_with_infinity();
    if (k == "lex-product") {
        linear_order outer = from_json(j.at("outer"));
        std::map<phase, linear_order> inner;
        for (auto& [key, v] : j.at("inner").items()) inner[phase::parse(key)] = from_json(v);
        std::optional<linear_order> fb;
        if (j.contains("default_inner")) fb = from_json(j.at("default_inner"));
        return lex_product(outer, inner, fb);
    }
    if (k == "refined") {
        linear_order base = from_json(j.at("base"));
        std::vector<phase> elems = phases_of(j.at("elements"));
        std::map<phase, std::vector<phase>> grouped;
        for (auto& e : elems) {
            std::string key = e.str();
            grouped[phase::parse(j.at("projection").at(key).get<std::string>())].push_back(e);
        }
        std::map<phase, linear_order> blocks;
        for (auto& [phi, v] : grouped) blocks[phi] = from_phases(v);
        return refine_order(base, blocks).psi;
    }
    throw parse_error("unknown order kind '" + k + "'");
}

// Exhaustive order-axiom check on an enumerable order.
inline bool check_order_axioms(const linear_order& o) {
    const auto& e = o.elements();
    for (auto& a : e) {
        if (o.less(a, a)) return false;
        for (auto& b : e) {
            if (a != b && o.less(a, b) == o.less(b, a)) return false;
            for (auto& c : e)
                if (o.less(a, b) && o.less(b, c) && !o.less(a, c)) return false;
        }
    }
    return true;
}

} // namespace stabcat
