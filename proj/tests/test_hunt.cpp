#include <catch2/catch_amalgamated.hpp>

#include <ldpkit/hunt.hpp>

#include <random>

using namespace ldpkit;

namespace {
Rational Q(std::intmax_t n, std::intmax_t d = 1) { return Rational(n, d); }
} // namespace

TEST_CASE("min_positive_coefficient") {
    LogPair p;
    CHECK(min_positive_coefficient(p) == Q(0));
    p.boundary = {{"C", Q(2, 3)}, {"D", Q(1, 2)}, {"Z", Q(0)}};
    CHECK(min_positive_coefficient(p) == Q(1, 2));
}

TEST_CASE("flush and level examples") {
    // smooth surface, empty boundary: flush
    LogPair smooth;
    CHECK(flush_level_status(smooth).status == FlushStatus::Flush);

    // one A1 point, empty boundary: level but not flush, witness e = 0 = m
    LogPair a1;
    a1.points.push_back({"x", DualGraph::chain({-2}), {}});
    auto rep = flush_level_status(a1);
    CHECK(rep.status == FlushStatus::LevelNotFlush);
    CHECK(rep.m == Q(0));
    CHECK(rep.witness_coefficient == Q(0));

    // boundary aC through a (3) point with a = 2/3: e = (1+a)/3 = 5/9 < 2/3
    LogPair flush;
    flush.boundary = {{"C", Q(2, 3)}};
    flush.points.push_back({"x", DualGraph::chain({-3}), {{"C", 0}}});
    CHECK(flush_level_status(flush).status == FlushStatus::Flush);

    // a second boundary component of smaller coefficient breaks flushness
    LogPair broken = flush;
    broken.boundary["D"] = Q(1, 2);
    auto br = flush_level_status(broken);
    CHECK(br.status == FlushStatus::Neither);
    CHECK(br.m == Q(1, 2));
    CHECK(br.witness_coefficient == Q(5, 9));
}

TEST_CASE("flush at smooth points of the surface") {
    // two boundary components crossing at a smooth point: sum a_i M_i - 1
    LogPair p;
    p.boundary = {{"C", Q(2, 3)}, {"D", Q(2, 3)}};
    p.smooth_points.push_back({"q", {{"C", Int(1)}, {"D", Int(1)}}});
    CHECK(flush_level_status(p).status == FlushStatus::Flush); // 1/3 < 2/3

    // a node of a single full component: v = 2a - 1 = 1 = m, level only
    LogPair node;
    node.boundary = {{"C", Q(1)}};
    node.smooth_points.push_back({"q", {{"C", Int(2)}}});
    auto rep = flush_level_status(node);
    CHECK(rep.status == FlushStatus::LevelNotFlush);
    CHECK(rep.witness == "q");

    // triple point of the same component: v = 3a - 1 > m
    LogPair triple;
    triple.boundary = {{"C", Q(1)}};
    triple.smooth_points.push_back({"q", {{"C", Int(3)}}});
    CHECK(flush_level_status(triple).status == FlushStatus::Neither);
}

TEST_CASE("flush monotonicity under raising an alien coefficient") {
    // raising the attached coefficient can only raise exceptional coefficients,
    // so a Neither verdict never improves to Flush
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> w;
        int len = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < len; ++i) w.push_back(-2 - static_cast<int>(rng() % 3));
        std::intmax_t num = 1 + static_cast<std::intmax_t>(rng() % 5);
        Rational lo(num, 6), hi = lo + Q(1, 7);
        if (hi > Q(1)) hi = Q(1);
        LogPair a, b;
        a.boundary = {{"C", lo}, {"D", Q(1, 6)}};
        b.boundary = {{"C", hi}, {"D", Q(1, 6)}};
        a.points.push_back({"x", DualGraph::chain(w), {{"C", 0}}});
        b.points.push_back({"x", DualGraph::chain(w), {{"C", 0}}});
        auto ra = flush_level_status(a), rb = flush_level_status(b);
        if (ra.status == FlushStatus::Neither) CHECK(rb.status == FlushStatus::Neither);
    }
}

TEST_CASE("hunt_step: net on the cone over the twisted cubic model") {
    HuntState st;
    st.resolution = CurveConfig::hirzebruch(3);
    st.contracted = {"S"};
    auto out = hunt_step(st, "S", "F");
    REQUIRE(std::holds_alternative<NetResult>(out));
    auto net = std::get<NetResult>(out);
    CHECK(net.d == Q(1));
    CHECK(net.lambda == Q(6));
    CHECK(net.a1 == Q(2));          // lemma_net: a1 = 2/d with boundary E alone
    CHECK(net.small_degree);
}

TEST_CASE("hunt_step rejects Du Val extraction and non-extremal rays") {
    HuntState duval;
    duval.resolution = CurveConfig::hirzebruch(2);
    duval.contracted = {"S"};
    CHECK_THROWS_AS(hunt_step(duval, "S", "F"), BadChoice);

    HuntState st;
    st.resolution = CurveConfig::hirzebruch(3);
    st.contracted = {"S"};
    CHECK_THROWS_AS(hunt_step(st, "F", "S"), BadChoice);   // F not contracted
    CHECK_THROWS_AS(hunt_step(st, "S", "S"), NotExtremal); // sigma gone after extraction
}

TEST_CASE("hunt_step: birational transformation bookkeeping") {
    // F3 with one fiber broken by a blow-up: sigma^2 = -1 forces a contraction
    auto cfg = CurveConfig::hirzebruch(3);
    cfg = cfg.blow_up({{{"F", 1}}, std::nullopt, "E1"}); // point on F, off S
    HuntState st;
    st.resolution = cfg;
    st.contracted = {"S"};

    auto out = hunt_step(st, "S", "F");
    REQUIRE(std::holds_alternative<HuntState>(out));
    auto next = std::get<HuntState>(out);
    CHECK(next.stage == 1);
    CHECK(next.contracted == std::vector<std::string>{"F"});
    // lambda = -K.F / (e(S) S.F) = 1 / (1/3) = 3, so a1 = lambda e(S) = 1
    CHECK(next.boundary.at("S") == Q(1));
    REQUIRE(next.ledger.size() == 1);
    CHECK(next.ledger[0].lambda == Q(3));
    CHECK(next.ledger[0].extracted == "S");
    CHECK(next.ledger[0].sigma == "F");

    // level mode: no rescaling
    HuntState lvl = st;
    lvl.level_mode = true;
    auto lout = hunt_step(lvl, "S", "F");
    REQUIRE(std::holds_alternative<HuntState>(lout));
    CHECK(std::get<HuntState>(lout).boundary.at("S") == Q(1, 3));
}

TEST_CASE("contraction table: every row's recipe reproduces its relation") {
    for (const auto& [family, label, param] : contraction_table_rows()) {
        INFO(family << " " << label << " param " << param);
        auto row = classify_contraction(family, label, param);
        CHECK(row.validated);
    }
}

TEST_CASE("contraction table: specific relations") {
    auto cuspI = classify_contraction("cusp", "I", 3);
    CHECK(cuspI.rhs == Q(1, 2));
    CHECK(cuspI.cd == Q(0));

    // cusp II and III share c = (g+1)/(2g+1)
    for (long g : {1L, 2L, 3L}) {
        CHECK(classify_contraction("cusp", "II", g).rhs == Q(g + 1));
        CHECK(classify_contraction("cusp", "II", g).cc == Q(2 * g + 1));
        CHECK(classify_contraction("cusp", "III", g).rhs == Q(g + 1));
    }
    CHECK(classify_contraction("cusp", "(u)", 2).rhs == Q(9, 14));
    CHECK(classify_contraction("cusp", "(v)", 1).rhs == Q(5, 7));
    CHECK(classify_contraction("cusp", "(v;n^2)", 1).rhs == Q(7, 9));
    CHECK(classify_contraction("cusp", "(v;f^2)", 1).rhs == Q(15, 19));
    CHECK(classify_contraction("cusp", "(w)", 1).rhs == Q(7, 9));

    // node II at g = 2: 3c + 2d = 3
    auto nII = classify_contraction("node", "II", 2);
    CHECK(nII.cc == Q(3));
    CHECK(nII.cd == Q(2));
    CHECK(nII.rhs == Q(3));

    // node (II,x^{r-1}): c + d/(r+1) = 1
    auto nx = classify_contraction("node", "(II,x^{r-1})", 4);
    CHECK(nx.cc == Q(5));
    CHECK(nx.cd == Q(1));
    CHECK(nx.rhs == Q(5));
}

TEST_CASE("contraction table: multiplicity-three singularity content") {
    auto a = classify_contraction("mult3", "a", 0);
    CHECK(a.singularities == std::vector<std::string>{"(3)", "A_1"});
    CHECK(a.cc == Q(1));
    CHECK(a.cd == Q(1, 2));
    CHECK(a.rhs == Q(2, 3));

    auto b1 = classify_contraction("mult3", "b1", 0);
    CHECK(b1.singularities == std::vector<std::string>{"(3)", "(3,2)"});
    CHECK(b1.rhs == Q(7, 15)); // c = 7/15

    auto b2 = classify_contraction("mult3", "b2", 0);
    CHECK(b2.singularities == std::vector<std::string>{"(3)", "A_1"});
    // 3c/2 = 2/3, i.e. c = 4/9
    CHECK(b2.rhs / b2.cc == Q(4, 9));
}

TEST_CASE("contraction table: unknown rows throw") {
    CHECK_THROWS_AS(classify_contraction("node", "V", 1), UnknownLabel);
    CHECK_THROWS_AS(classify_contraction("cusp", "I", 0), UnknownLabel);
    CHECK_THROWS_AS(classify_contraction("dragon", "I", 1), UnknownLabel);
    CHECK_THROWS_AS(classify_contraction("cusp", "(w)", 2), UnknownLabel);
}

TEST_CASE("net-fiber table rows verify F.C = 0 and F^2 = 0 internally") {
    CHECK(net_fiber_data(1).m == Int(2));
    CHECK(net_fiber_data(2).m == Int(3));
    for (long t = 0; t <= 4; ++t) CHECK(net_fiber_data(3, t).m == Int(4));
    CHECK(net_fiber_data(4).m == Int(4));
    for (long k = 1; k <= 4; ++k) CHECK(net_fiber_data(5, k).m == Int(k + 1));
    CHECK(net_fiber_data(6).m == Int(5));
    CHECK(net_fiber_data(7).m == Int(7));
    CHECK(net_fiber_data(8).m == Int(7));

    auto r8 = net_fiber_data(8);
    CHECK(r8.multiplicities == std::vector<Int>{1, 4, 3, 2, 1, 7});
    auto r7 = net_fiber_data(7);
    CHECK(r7.multiplicities == std::vector<Int>{1, 3, 5, 2, 1, 7});

    for (int row = 1; row <= 8; ++row) {
        long p = row == 5 ? 1 : 0;
        auto f = net_fiber_data(row, p);
        for (const Int& m : f.multiplicities) CHECK(m > 0);
        CHECK(f.weights[f.b_index] == -1);
    }

    CHECK_THROWS_AS(net_fiber_data(0), UnknownRow);
    CHECK_THROWS_AS(net_fiber_data(9), UnknownRow);
    CHECK_THROWS_AS(net_fiber_data(3, 5), UnknownRow);
    CHECK_THROWS_AS(net_fiber_data(5, 0), UnknownRow);
}

TEST_CASE("net fibers of multiplicity divisible by three") {
    auto rows = net_fibers_multiplicity_three();
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].row == 2);
    CHECK(rows[1].row == 5);
    CHECK(rows[1].m == Int(3));
}

TEST_CASE("fence_solve") {
    CHECK(fence_solve(Q(1), Q(1), Q(0), Q(0)).balanced);
    CHECK_THROWS_AS(fence_solve(Q(1), Q(1, 2), Q(0), Q(0)), Inconsistent);
    CHECK_THROWS_AS(fence_solve(Q(1, 2), Q(1), Q(0), Q(0)), Inconsistent);

    auto r = fence_solve(Q(5, 6), Q(1, 3), Q(4, 5), Q(2, 3));
    REQUIRE(r.x_squared);
    CHECK(*r.x_squared == Q(1, 6) / Q(2, 3));
    REQUIRE(r.ample_strict);
    CHECK(*r.ample_strict); // 26/45 < 13/18

    // the exact identity behind that instance
    CHECK(Q(4, 5) * Q(1, 6) + Q(2, 3) * Q(2, 3) - Q(1, 6) * Q(2, 3) == Q(7, 15));
}

TEST_CASE("fence product identity X^2 Y^2 = 1") {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        Rational alpha(static_cast<std::intmax_t>(rng() % 20),
                       21 + static_cast<std::intmax_t>(rng() % 5));
        Rational beta(static_cast<std::intmax_t>(rng() % 20),
                      21 + static_cast<std::intmax_t>(rng() % 5));
        auto xy = fence_solve(alpha, beta, Q(0), Q(0));
        auto yx = fence_solve(beta, alpha, Q(0), Q(0));
        REQUIRE(xy.x_squared);
        REQUIRE(yx.x_squared);
        CHECK(*xy.x_squared * *yx.x_squared == Q(1));

        // (K_S + tX).X = (t - beta)(1 - alpha)/(1 - beta) - 1, affine in t
        Rational t(static_cast<std::intmax_t>(rng() % 7), 5);
        Rational lhs = (t - beta) * *xy.x_squared - Q(1);
        Rational again = (t - beta) * (Q(1) - alpha) / (Q(1) - beta) - Q(1);
        CHECK(lhs == again);
    }
}
