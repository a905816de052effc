#pragma once

#include <ldpkit/dualgraph.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldpkit {

struct UnboundedScenario : std::runtime_error {
    explicit UnboundedScenario(const std::string& w)
        : std::runtime_error("unbounded scenario: " + w) {}
};

/*
 * One selectable singularity family instance of a scenario menu. Component
 * count, contribution sum(e_i (-2 - E_i^2)) and cost = components - contribution
 * are always derived from the dual graph via coefficients(), never hand-entered.
 */
struct MenuInstance {
    std::string name;
    std::string key;                 // multiplicity key in solution records
    DualGraph graph;
    long min_count = 0;
    std::optional<long> max_count;   // mandatory when cost <= 0

    long components = 0;
    Rational contribution, cost;
};

inline MenuInstance make_menu_instance(const std::string& name, const std::string& key,
                                       const DualGraph& g, long min_count = 0,
                                       std::optional<long> max_count = std::nullopt) {
    MenuInstance mi{name, key, g, min_count, max_count, 0, {}, {}};
    mi.components = static_cast<long>(g.size());
    Vec e = coefficients(g);
    Rational contrib(0);
    for (std::size_t i = 0; i < g.size(); ++i)
        contrib += e[i] * (Rational(-2) - Rational(g.weight(i)));
    if (contrib.sign() < 0) throw std::logic_error("menu contribution must be nonnegative");
    mi.contribution = contrib;
    mi.cost = Rational(mi.components) - contrib;
    return mi;
}

struct Scenario {
    std::string name;
    std::vector<std::string> params;                  // declared order
    std::vector<std::pair<long, long>> box;           // inclusive ranges
    // K^2 at a parameter point; nullopt skips the point (e.g. k + r > 4)
    std::function<std::optional<Rational>(const std::map<std::string, long>&)> k2;
    std::function<std::vector<MenuInstance>(const std::map<std::string, long>&)> menu;
    bool allow_duval = true;   // Du Val points absorb any leftover integer budget
    long min_duval = 0;        // u = total Du Val components must be >= this
    long min_components = 10;  // Lemma high_picard: rho >= 11, so n >= 10
    std::vector<std::string> output_keys;
    long component_cap = 30;
    long param_cap = 60;
};

struct Solution {
    std::map<std::string, long> values; // params, per-key multiplicities, "u"
};

struct DenominatorReport {
    Int denominator;                      // reduced denominator of the target
    std::vector<Int> primes;
    std::vector<Int> unreachable_primes;  // no menu cost denominator divisible by p
    std::vector<Int> valuation_obstructions; // v_p(target) exceeds every menu cost
    bool certifies() const { return !unreachable_primes.empty() || !valuation_obstructions.empty(); }
};

struct SolutionSet {
    std::vector<Solution> solutions; // canonical (lexicographic) order
    std::vector<std::pair<std::map<std::string, long>, DenominatorReport>> certificates;
};

namespace detail {

inline std::vector<Int> prime_factors(Int n) {
    std::vector<Int> out;
    if (n < 0) n = -n;
    for (Int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

inline int valuation(Int n, const Int& p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

} // namespace detail

/*
 * Which primes in the reduced denominator of the budget can never be cleared
 * by integer combinations of the menu costs (Lemma nobiggenus's
 * "factor eleven in the denominator" argument, made general).
 */
inline DenominatorReport denominator_report(const Rational& k2,
                                            const std::vector<MenuInstance>& menu) {
    DenominatorReport rep;
    rep.denominator = k2.den();
    rep.primes = detail::prime_factors(rep.denominator);
    for (const Int& p : rep.primes) {
        int target_v = detail::valuation(rep.denominator, p);
        int best = 0;
        for (const auto& mi : menu) best = std::max(best, detail::valuation(mi.cost.den(), p));
        if (best == 0) rep.unreachable_primes.push_back(p);
        if (target_v > best) rep.valuation_obstructions.push_back(p);
    }
    return rep;
}

namespace detail {

inline void solve_point(const Scenario& s, const std::map<std::string, long>& pt,
                        const Rational& target, const std::vector<MenuInstance>& menu,
                        std::vector<Solution>& out) {
    std::vector<long> counts(menu.size(), 0);
    std::function<void(std::size_t, Rational, long)> rec = [&](std::size_t i, Rational spent,
                                                               long comps) {
        if (spent > target || comps > s.component_cap) return; // sound: costs are positive
        if (i == menu.size()) {
            Rational rem = target - spent;
            long u = 0;
            if (!rem.is_zero()) {
                // leftover budget must be covered by Du Val points, one unit of
                // cost per (-2) component
                if (!s.allow_duval || !rem.is_integer() || rem.sign() < 0) return;
                u = static_cast<long>(rem.num());
            }
            if (u < s.min_duval) return;
            if (comps + u < s.min_components || comps + u > s.component_cap) return;
            Solution sol;
            sol.values = pt;
            for (std::size_t j = 0; j < menu.size(); ++j) sol.values[menu[j].key] = counts[j];
            sol.values["u"] = u;
            // exactness re-check of the emitted solution
            Rational lhs(u);
            for (std::size_t j = 0; j < menu.size(); ++j)
                lhs += Rational(counts[j]) * menu[j].cost;
            if (lhs != target) throw std::logic_error("solver emitted inexact solution");
            out.push_back(sol);
            return;
        }
        const MenuInstance& mi = menu[i];
        long cmax = mi.max_count ? *mi.max_count : s.component_cap / std::max(1L, mi.components);
        for (long c = mi.min_count; c <= cmax; ++c) {
            counts[i] = c;
            rec(i + 1, spent + Rational(c) * mi.cost, comps + c * mi.components);
        }
    };
    rec(0, Rational(0), 0);
}

inline void canonicalize(const Scenario& s, SolutionSet& set) {
    auto tuple_of = [&](const Solution& sol) {
        std::vector<long> t;
        for (const auto& p : s.params) t.push_back(sol.values.at(p));
        for (const auto& [k, v] : sol.values) t.push_back(v);
        return t;
    };
    std::sort(set.solutions.begin(), set.solutions.end(),
              [&](const Solution& a, const Solution& b) { return tuple_of(a) < tuple_of(b); });
}

} // namespace detail

inline SolutionSet solve_scenario(const Scenario& s) {
    for (const auto& [lo, hi] : s.box)
        if (hi - lo > s.param_cap || hi > s.param_cap)
            throw UnboundedScenario(s.name + ": parameter box exceeds cap");
    SolutionSet set;
    std::vector<long> idx(s.params.size());
    std::function<void(std::size_t, std::map<std::string, long>&)> walk =
        [&](std::size_t d, std::map<std::string, long>& pt) {
            if (d == s.params.size()) {
                auto k2 = s.k2(pt);
                if (!k2) return;
                Rational target = Rational(9) - *k2;
                if (target.sign() <= 0) return;
                auto menu = s.menu(pt);
                for (const auto& mi : menu)
                    if (mi.cost.sign() <= 0 && !mi.max_count)
                        throw UnboundedScenario(mi.name + " has nonpositive cost and no budget");
                std::size_t before = set.solutions.size();
                detail::solve_point(s, pt, target, menu, set.solutions);
                if (set.solutions.size() == before) {
                    DenominatorReport rep = denominator_report(*k2, menu);
                    if (rep.certifies()) set.certificates.push_back({pt, rep});
                }
                return;
            }
            for (long v = s.box[d].first; v <= s.box[d].second; ++v) {
                pt[s.params[d]] = v;
                walk(d + 1, pt);
            }
            pt.erase(s.params[d]);
        };
    std::map<std::string, long> pt;
    walk(0, pt);
    detail::canonicalize(s, set);
    return set;
}

// naive full-box brute force used as the independent cross-check (--oracle)
inline SolutionSet solve_scenario_naive(const Scenario& s) {
    Scenario t = s;
    auto inner_menu = s.menu;
    long cap = s.component_cap;
    t.menu = [inner_menu, cap](const std::map<std::string, long>& pt) {
        auto menu = inner_menu(pt);
        for (auto& mi : menu)
            if (!mi.max_count) mi.max_count = cap; // widest conceivable range
        return menu;
    };
    return solve_scenario(t);
}

// projection of a solution set onto the scenario's output keys, deduplicated
inline std::vector<std::vector<long>> projected_solutions(const Scenario& s,
                                                          const SolutionSet& set) {
    std::vector<std::vector<long>> rows;
    for (const auto& sol : set.solutions) {
        std::vector<long> row;
        for (const auto& k : s.output_keys)
            row.push_back(sol.values.count(k) ? sol.values.at(k) : 0);
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

// ---------------------------------------------------------------------------
// scenario registry: the named searches from the classification
// ---------------------------------------------------------------------------

namespace detail {

inline DualGraph family_graph(const std::string& name, long j) {
    for (const auto& f : singlist_master())
        if (f.name == name) return f.instantiate(j);
    throw std::invalid_argument("unknown singlist family: " + name);
}

inline std::vector<MenuInstance> chain3_menu(long jmax, long forced_j) {
    std::vector<MenuInstance> menu;
    for (long j = 0; j <= jmax; ++j)
        menu.push_back(make_menu_instance("(3,A_" + std::to_string(j) + ")",
                                          "n" + std::to_string(j), family_graph("(3,A_j)", j),
                                          j == forced_j ? 1 : 0));
    return menu;
}

} // namespace detail

inline Scenario scenario_cusp_one() {
    Scenario s;
    s.name = "cusp-one";
    s.params = {"r", "g"};
    s.box = {{0, 6}, {1, 6}};
    s.k2 = [](const std::map<std::string, long>& pt) -> std::optional<Rational> {
        long r = pt.at("r"), g = pt.at("g");
        Rational e0(r + 1, 2 * r + 3);
        Rational den = Rational(4) * e0 - Rational(1, g);
        if (den.sign() <= 0) return std::nullopt;
        Rational num = Rational(-1) + Rational(2) * e0;
        return num * num / den;
    };
    // the hunted point contributes a (3,A_r); other almost-Du-Val points have
    // smaller parameter by maximality of the extraction
    s.menu = [](const std::map<std::string, long>& pt) {
        return detail::chain3_menu(pt.at("r"), pt.at("r"));
    };
    s.min_duval = 2;
    s.output_keys = {"r", "g"};
    return s;
}

inline Scenario scenario_config2_case1() {
    Scenario s;
    s.name = "config2-case1";
    s.params = {"g"};
    s.box = {{2, 6}};
    s.k2 = [](const std::map<std::string, long>& pt) -> std::optional<Rational> {
        long g = pt.at("g");
        Rational num = Rational(-1) + Rational(2 * g + 1, 2 * g + 3);
        Rational den = Rational(6 * g + 1, 2 * g + 3) - Rational(1);
        if (den.sign() <= 0) return std::nullopt;
        return num * num / den;
    };
    s.menu = [](const std::map<std::string, long>& pt) {
        return detail::chain3_menu(pt.at("g"), pt.at("g"));
    };
    s.min_duval = 2;
    s.output_keys = {"g", "u", "n0", "n2"};
    return s;
}

inline Scenario scenario_config2_case2() {
    Scenario s;
    s.name = "config2-case2";
    s.params = {};
    s.box = {};
    s.k2 = [](const std::map<std::string, long>&) -> std::optional<Rational> {
        return Rational(1, 143);
    };
    s.menu = [](const std::map<std::string, long>&) {
        std::vector<MenuInstance> menu;
        menu.push_back(make_menu_instance("(2,3,2,2)", "x0",
                                          DualGraph::chain({-2, -3, -2, -2}), 1));
        auto rest = detail::chain3_menu(6, -1);
        menu.insert(menu.end(), rest.begin(), rest.end());
        return menu;
    };
    s.output_keys = {"u", "n5"};
    return s;
}

inline Scenario scenario_three_four() {
    Scenario s;
    s.name = "three-four";
    s.params = {"k", "r"};
    s.box = {{0, 4}, {0, 4}};
    s.k2 = [](const std::map<std::string, long>& pt) -> std::optional<Rational> {
        long k = pt.at("k"), r = pt.at("r");
        if (k + r > 4) return std::nullopt;
        return Rational(1) / Rational(2 * (2 * k + 3) * (4 * k + 4 * k * r + 6 * r + 5));
    };
    // the hunt forces the fork and a (3,A_k) point; remaining almost-Du-Val
    // points come from the chain menu (coefficient-1/2 chains lose the
    // huntchoice tie-break and are excluded)
    s.menu = [](const std::map<std::string, long>& pt) {
        long k = pt.at("k"), r = pt.at("r");
        std::vector<MenuInstance> menu;
        menu.push_back(make_menu_instance("fork((2),(2),(A_" + std::to_string(r) + ",3))", "f",
                                          detail::family_graph("fork((2),(2),(A_j,3))", r), 1));
        auto rest = detail::chain3_menu(4, k);
        menu.insert(menu.end(), rest.begin(), rest.end());
        return menu;
    };
    s.output_keys = {"k", "r", "n1"};
    return s;
}

inline Scenario scenario_mult3_32() {
    Scenario s;
    s.name = "mult3-32";
    s.params = {};
    s.box = {};
    s.k2 = [](const std::map<std::string, long>&) -> std::optional<Rational> {
        return Rational(1, 165);
    };
    s.menu = [](const std::map<std::string, long>&) { return detail::chain3_menu(1, -1); };
    s.output_keys = {"n0", "n1", "u"};
    return s;
}

inline Scenario scenario_mult3_chain() {
    Scenario s;
    s.name = "mult3-chain";
    s.params = {"r"};
    s.box = {{1, 5}};
    s.k2 = [](const std::map<std::string, long>& pt) -> std::optional<Rational> {
        long r = pt.at("r");
        return Rational((r - 6) * (r - 6)) / Rational(15 * (2 * r + 3) * (13 * r + 12));
    };
    s.menu = [](const std::map<std::string, long>&) { return detail::chain3_menu(4, -1); };
    s.output_keys = {"r"};
    return s;
}

inline Scenario scenario_nobiggenus_iii_duval() {
    Scenario s;
    s.name = "nobiggenus-III-duval";
    s.params = {"g"};
    s.box = {{2, 4}};
    s.k2 = [](const std::map<std::string, long>& pt) -> std::optional<Rational> {
        long g = pt.at("g"), r = g - 1;
        return Rational(2 * (g + r + 2) * (g + r + 2)) /
               Rational((2 * g + 1) * (2 * r + 3) * (4 * g * r + 4 * g - 1));
    };
    s.menu = [](const std::map<std::string, long>&) { return std::vector<MenuInstance>{}; };
    s.output_keys = {"g"};
    return s;
}

inline std::vector<Scenario> scenario_registry() {
    return {scenario_cusp_one(),   scenario_config2_case1(), scenario_config2_case2(),
            scenario_three_four(), scenario_mult3_32(),      scenario_mult3_chain(),
            scenario_nobiggenus_iii_duval()};
}

inline Scenario find_scenario(const std::string& name) {
    for (auto& s : scenario_registry())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown scenario: " + name);
}

// ---------------------------------------------------------------------------
// node-configuration consistency checks (reconstructible \S 4.4 arithmetic)
// ---------------------------------------------------------------------------

// a1 bound when Sigma_2 meets E_2 at a (2) point and A_1 at an (A_k,3) point
inline Rational node_bound_ak3(long k) {
    Rational x(1, 2 * k + 3), y(2 * k + 2, 2 * k + 3);
    return (Rational(3) - x) / (Rational(3) - x + y);
}

// a1 bound when \bar{Sigma}_2 meets A_1 at an (A_k,-3,-2) point
inline Rational node_bound_ak32(long k) {
    Rational x(2, 3 * k + 5), y(3 * k + 4, 3 * k + 5);
    return (Rational(3) - x) / (Rational(3) - x + y);
}

// e0 = (2r^2-2)/(2r^2+r+1); solutions of e1 < e0 < a2 with e1=4/7, a2<6/7
inline std::vector<long> nodeconfig_k1_solutions(long rmax = 60) {
    std::vector<long> out;
    for (long r = 1; r <= rmax; ++r) {
        Rational e0(2 * r * r - 2, 2 * r * r + r + 1);
        if (Rational(4, 7) < e0 && e0 < Rational(6, 7)) out.push_back(r);
    }
    return out;
}

} // namespace ldpkit
