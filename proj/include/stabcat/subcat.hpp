#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "stabcat/ambient.hpp"
#include "stabcat/parallel.hpp"

namespace stabcat {

// Least set containing gens and closed under the ambient's middle terms.
inline bits closure(const ambient& amb, bits gens) {
    const std::size_t n = amb.size();
    if (gens & ~amb.full()) throw precondition_error("generator outside the carrier of " + amb.spec);
    bits cur = gens;
    bool changed = true;
    while (changed) {
        changed = false;
        bits add = 0;
        for_each_bit(cur, [&](int a) {
            for_each_bit(cur, [&](int b) { add |= amb.middle_union[a * n + b]; });
        });
        if (add & ~cur) {
            cur |= add;
            changed = true;
        }
    }
    return cur;
}

inline bits closure(const ambient& amb, const std::vector<std::string>& gens) {
    bits g = 0;
    for (auto& d : gens) g |= bit(amb.find(d));
    return closure(amb, g);
}

inline bool is_closed(const ambient& amb, bits s) {
    const std::size_t n = amb.size();
    for (bits x = s; x; x &= x - 1) {
        const bits* row = &amb.middle_union[static_cast<std::size_t>(std::countr_zero(x)) * n];
        for (bits y = s; y; y &= y - 1)
            if (row[std::countr_zero(y)] & ~s) return false;
    }
    return true;
}

// {Y : Hom(X, Y) = 0 for all X in s}
inline bits right_perp(const ambient& amb, bits s) {
    bits hit = 0;
    for_each_bit(s, [&](int x) { hit |= amb.hom_to[x]; });
    return amb.full() & ~hit;
}

// {X : Hom(X, Y) = 0 for all Y in s}
inline bits left_perp(const ambient& amb, bits s) {
    bits hit = 0;
    for_each_bit(s, [&](int y) { hit |= amb.hom_from[y]; });
    return amb.full() & ~hit;
}

inline bool hom_vanishes(const ambient& amb, bits from, bits to) {
    bool zero = true;
    for_each_bit(from, [&](int x) {
        if (amb.hom_to[x] & to) zero = false;
    });
    return zero;
}

// Every ordered pair of distinct members has nonzero Hom.
inline bool hom_connected(const ambient& amb, bits s) {
    bool ok = true;
    for_each_bit(s, [&](int x) {
        if ((amb.hom_to[x] & s) != s) ok = false;
    });
    return ok;
}

enum class enum_strategy { automatic, filter_subsets, generate_closures };

inline std::size_t& enumeration_bound() {
    static std::size_t b = 64;
    return b;
}

inline std::vector<bits> enumerate_ext_closed(const ambient& amb, enum_strategy strat = enum_strategy::automatic,
                                              int jobs = 1) {
    const std::size_t n = amb.size();
    if (n > enumeration_bound())
        throw precondition_error("carrier size " + std::to_string(n) + " exceeds enumeration bound " +
                                 std::to_string(enumeration_bound()));
    if (strat == enum_strategy::automatic)
        strat = n <= 24 ? enum_strategy::filter_subsets : enum_strategy::generate_closures;
    std::vector<bits> out;
    if (strat == enum_strategy::filter_subsets) {
        const std::uint64_t total = std::uint64_t{1} << n;
        const std::uint64_t chunk = std::max<std::uint64_t>(1, total / 64);
        std::vector<std::uint64_t> starts;
        for (std::uint64_t s = 0; s < total; s += chunk) starts.push_back(s);
        auto parts = parallel_map(starts.size(), jobs, [&](std::size_t k) {
            std::vector<bits> local;
            std::uint64_t end = std::min(total, starts[k] + chunk);
            for (std::uint64_t s = starts[k]; s < end; ++s)
                if (is_closed(amb, s)) local.push_back(s);
            return local;
        });
        for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    } else {
        std::unordered_set<bits> seen;
        std::vector<bits> frontier{closure(amb, bits{0})};
        seen.insert(frontier[0]);
        while (!frontier.empty()) {
            auto grown = parallel_map(frontier.size(), jobs, [&](std::size_t k) {
                std::vector<bits> local;
                bits c = frontier[k];
                for (std::size_t x = 0; x < n; ++x)
                    if (!test_bit(c, static_cast<int>(x))) local.push_back(closure(amb, c | bit(static_cast<int>(x))));
                return local;
            });
            std::vector<bits> next;
            for (auto& g : grown)
                for (bits c : g)
                    if (seen.insert(c).second) next.push_back(c);
            std::sort(next.begin(), next.end());
            frontier = std::move(next);
        }
        out.assign(seen.begin(), seen.end());
    }
    std::sort(out.begin(), out.end(), [](bits a, bits b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        return a < b;
    });
    return out;
}

} // namespace stabcat
