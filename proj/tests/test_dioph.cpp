#include <catch2/catch_amalgamated.hpp>

#include <ldpkit/dioph.hpp>

#include <random>

using namespace ldpkit;

namespace {
Rational Q(std::intmax_t n, std::intmax_t d = 1) { return Rational(n, d); }

bool has_prime(const std::vector<Int>& v, std::intmax_t p) {
    return std::find(v.begin(), v.end(), Int(p)) != v.end();
}
} // namespace

TEST_CASE("menu costs derive from the singularities module") {
    for (long j = 0; j <= 6; ++j) {
        auto mi = make_menu_instance("(3,A_j)", "n", detail::family_graph("(3,A_j)", j));
        CHECK(mi.components == j + 1);
        CHECK(mi.contribution == Q(j + 1, 2 * j + 3));
        CHECK(mi.cost == Q((j + 1) * (2 * j + 2), 2 * j + 3));
    }
    auto fork = make_menu_instance("fork", "f", detail::family_graph("fork((2),(2),(A_j,3))", 2));
    CHECK(fork.components == 6);
    CHECK(fork.cost == Q(2) + Q(7, 2));

    CHECK(make_menu_instance("(2,3,2,2)", "x", DualGraph::chain({-2, -3, -2, -2})).cost ==
          Q(38, 11));
    CHECK(make_menu_instance("(4)", "q", DualGraph::chain({-4}), 0, 3).cost == Q(0));
    CHECK(make_menu_instance("(4,2)", "q", DualGraph::chain({-4, -2})).cost == Q(6, 7));
    CHECK(make_menu_instance("A_5", "a", DualGraph::chain({-2, -2, -2, -2, -2})).cost == Q(5));
}

TEST_CASE("scenario cusp-one reproduces the printed solutions") {
    auto s = scenario_cusp_one();
    auto set = solve_scenario(s);
    auto rows = projected_solutions(s, set);
    REQUIRE(rows == std::vector<std::vector<long>>{{0, 1}, {1, 1}});
    // every emitted solution satisfies the constraints it was filtered by
    for (const auto& sol : set.solutions) {
        CHECK(sol.values.at("u") >= 2);
        long comps = sol.values.at("u");
        for (const auto& [k, v] : sol.values)
            if (k[0] == 'n') comps += v * (std::stol(k.substr(1)) + 1);
        CHECK(comps >= 10);
    }
}

TEST_CASE("scenario config2-case1 reproduces (g,u,n0,n2)") {
    auto s = scenario_config2_case1();
    auto rows = projected_solutions(s, solve_scenario(s));
    REQUIRE(rows == std::vector<std::vector<long>>{{2, 3, 5, 1}, {2, 5, 2, 1}});
}

TEST_CASE("scenario config2-case2 forces (3,A5) with no Du Val points") {
    auto s = scenario_config2_case2();
    auto set = solve_scenario(s);
    auto rows = projected_solutions(s, set);
    REQUIRE(rows == std::vector<std::vector<long>>{{0, 1}}); // u = 0, n5 = 1
    // hence "g = 2 and u > 0" is infeasible for K^2 = 1/143
    for (const auto& sol : set.solutions) CHECK(sol.values.at("u") == 0);
}

TEST_CASE("scenario three-four has the unique three-(3,2) solution") {
    auto s = scenario_three_four();
    auto set = solve_scenario(s);
    REQUIRE(set.solutions.size() == 1);
    auto rows = projected_solutions(s, set);
    REQUIRE(rows == std::vector<std::vector<long>>{{0, 0, 3}});
    const auto& v = set.solutions[0].values;
    CHECK(v.at("f") == 1);
    CHECK(v.at("n0") == 1);
    CHECK(v.at("u") == 0);
    // budget identity: 9 - 7/2 - 2/3 - 3*(8/5) = 1/30 = K^2
    CHECK(Q(9) - Q(7, 2) - Q(2, 3) - Q(3) * Q(8, 5) == Q(1, 30));
}

TEST_CASE("scenario mult3-32 is empty with a denominator-11 certificate") {
    auto s = scenario_mult3_32();
    auto set = solve_scenario(s);
    CHECK(set.solutions.empty());
    REQUIRE(set.certificates.size() == 1);
    CHECK(has_prime(set.certificates[0].second.unreachable_primes, 11));
}

TEST_CASE("scenario mult3-chain is empty for every r with certificates") {
    auto s = scenario_mult3_chain();
    auto set = solve_scenario(s);
    CHECK(set.solutions.empty());
    REQUIRE(set.certificates.size() == 5);
    // r = 1: K^2 = 1/75, menu reaches 5 only to the first power
    CHECK(set.certificates[0].first.at("r") == 1);
    CHECK(has_prime(set.certificates[0].second.valuation_obstructions, 5));
    // r = 5: K^2 = 1/15015 carries an unreachable 13
    CHECK(has_prime(set.certificates[4].second.unreachable_primes, 13));
}

TEST_CASE("scenario nobiggenus-III-duval is empty") {
    auto s = scenario_nobiggenus_iii_duval();
    auto set = solve_scenario(s);
    CHECK(set.solutions.empty());
    CHECK(set.certificates.size() == 3);
}

TEST_CASE("denominator_report spec examples") {
    std::vector<MenuInstance> menu{
        make_menu_instance("(3)", "n0", DualGraph::chain({-3})),
        make_menu_instance("(3,2)", "n1", DualGraph::chain({-3, -2}))};
    auto rep = denominator_report(Q(1, 165), menu);
    CHECK(rep.denominator == Int(165));
    REQUIRE(rep.unreachable_primes.size() == 1);
    CHECK(rep.unreachable_primes[0] == Int(11));

    CHECK_FALSE(denominator_report(Q(1), menu).certifies());

    // 1/75: primes {3,5} all reachable, but 5^2 still obstructs via valuations
    auto r75 = denominator_report(Q(1, 75), menu);
    CHECK(r75.unreachable_primes.empty());
    REQUIRE(r75.valuation_obstructions.size() == 1);
    CHECK(r75.valuation_obstructions[0] == Int(5));
}

TEST_CASE("zero-cost families require a component budget") {
    Scenario s;
    s.name = "zero-cost";
    s.k2 = [](const std::map<std::string, long>&) -> std::optional<Rational> { return Q(1); };
    s.menu = [](const std::map<std::string, long>&) {
        return std::vector<MenuInstance>{make_menu_instance("(4)", "q", DualGraph::chain({-4}))};
    };
    s.min_components = 0;
    CHECK_THROWS_AS(solve_scenario(s), UnboundedScenario);

    s.menu = [](const std::map<std::string, long>&) {
        return std::vector<MenuInstance>{
            make_menu_instance("(4)", "q", DualGraph::chain({-4}), 0, 3)};
    };
    auto set = solve_scenario(s); // 9 - 1 = 8 = u, any number of (4)s up to 3
    CHECK(set.solutions.size() == 4);
    for (const auto& sol : set.solutions) CHECK(sol.values.at("u") == 8);
}

TEST_CASE("search bound soundness on the pruned boundary") {
    // cusp-one at (r,g) = (0,1): target 9 - 1/3 = 26/3; 14 copies of (3) overshoot
    Rational target = Q(9) - Q(1, 3);
    Rational cost = Q(2, 3);
    long boundary = 0;
    while (Rational(boundary + 1) * cost <= target) ++boundary;
    CHECK(Rational(boundary) * cost <= target);
    CHECK(target - Rational(boundary + 1) * cost < Q(0));
}

TEST_CASE("solver agrees with an independent brute force on random scenarios") {
    std::mt19937 rng(2033);
    std::vector<DualGraph> pool{DualGraph::chain({-3}), DualGraph::chain({-3, -2}),
                                DualGraph::chain({-2, -3, -2, -2}),
                                DualGraph::chain({-4, -2}), DualGraph::chain({-2, -2})};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<MenuInstance> menu;
        std::size_t nfam = 1 + rng() % 4;
        for (std::size_t i = 0; i < nfam; ++i)
            menu.push_back(make_menu_instance("F" + std::to_string(i), "n" + std::to_string(i),
                                              pool[rng() % pool.size()]));
        Rational k2(1 + static_cast<std::intmax_t>(rng() % 8),
                    1 + static_cast<std::intmax_t>(rng() % 12));
        if (k2 >= Q(9)) continue;
        bool duval = rng() % 2 == 0;

        Scenario s;
        s.name = "random";
        s.k2 = [k2](const std::map<std::string, long>&) -> std::optional<Rational> { return k2; };
        s.menu = [menu](const std::map<std::string, long>&) { return menu; };
        s.allow_duval = duval;
        s.min_components = 0;
        s.component_cap = 12;
        auto got = solve_scenario(s);

        // independent oracle: plain nested loops and direct re-substitution
        std::vector<std::map<std::string, long>> expect;
        Rational target = Q(9) - k2;
        std::vector<long> caps;
        for (const auto& mi : menu) caps.push_back(12 / mi.components);
        std::vector<long> c(menu.size(), 0);
        while (true) {
            Rational total(0);
            long comps = 0;
            for (std::size_t i = 0; i < menu.size(); ++i) {
                total += Q(c[i]) * menu[i].cost;
                comps += c[i] * menu[i].components;
            }
            Rational rem = target - total;
            bool ok = false;
            long u = 0;
            if (rem.is_zero())
                ok = true;
            else if (duval && rem.is_integer() && rem.sign() > 0) {
                u = static_cast<long>(rem.num());
                ok = true;
            }
            if (ok && comps + u <= 12) {
                std::map<std::string, long> v;
                for (std::size_t i = 0; i < menu.size(); ++i) v[menu[i].key] = c[i];
                v["u"] = u;
                expect.push_back(v);
            }
            std::size_t i = 0;
            while (i < menu.size() && c[i] == caps[i]) c[i++] = 0;
            if (i == menu.size()) break;
            ++c[i];
        }
        std::sort(expect.begin(), expect.end());

        std::vector<std::map<std::string, long>> gotv;
        for (const auto& sol : got.solutions) gotv.push_back(sol.values);
        std::sort(gotv.begin(), gotv.end());
        REQUIRE(gotv == expect);
    }
}

TEST_CASE("node-configuration identities and the k=1 range") {
    for (long k = 0; k <= 20; ++k) {
        CHECK(node_bound_ak3(k) == Q(3 * k + 4, 4 * k + 5));
        CHECK(node_bound_ak32(k) == Q(9 * k + 13, 12 * k + 17));
    }
    CHECK(nodeconfig_k1_solutions() == std::vector<long>{3, 4});

    // the (2,3,2,2) point behind config2: coefficients (3,6,4,2)/11, e0 = 6/11
    Vec e = coefficients(DualGraph::chain({-2, -3, -2, -2}));
    CHECK(e == Vec{Q(3, 11), Q(6, 11), Q(4, 11), Q(2, 11)});
}

TEST_CASE("registry lookup") {
    CHECK(find_scenario("cusp-one").name == "cusp-one");
    CHECK(scenario_registry().size() == 7);
    CHECK_THROWS_AS(find_scenario("nope"), std::invalid_argument);
}
