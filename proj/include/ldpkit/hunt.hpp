#pragma once

#include <ldpkit/dualgraph.hpp>
#include <ldpkit/surface.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ldpkit {

// ---------------------------------------------------------------------------
// log pairs: minimum coefficient, flush / level status
// ---------------------------------------------------------------------------

struct BoundaryRef {
    std::string curve;
    std::size_t vertex = 0;
    AttachKind kind = AttachKind::Transversal;
    int order = 2;
};

struct SingularPointData {
    std::string name;
    DualGraph graph;
    std::vector<BoundaryRef> atts;
};

struct SmoothPointData {
    std::string name;
    std::vector<std::pair<std::string, Int>> mults; // boundary curve, multiplicity
};

struct LogPair {
    std::map<std::string, Rational> boundary; // coefficients in (0,1]
    std::vector<SingularPointData> points;
    std::vector<SmoothPointData> smooth_points;
};

inline Rational min_positive_coefficient(const LogPair& pair) {
    Rational m(0);
    bool found = false;
    for (const auto& [name, a] : pair.boundary) {
        if (a.is_zero()) continue;
        if (!found || a < m) m = a;
        found = true;
    }
    return found ? m : Rational(0);
}

enum class FlushStatus { Flush, LevelNotFlush, Neither };

inline std::string to_string(FlushStatus s) {
    switch (s) {
        case FlushStatus::Flush: return "flush";
        case FlushStatus::LevelNotFlush: return "level-not-flush";
        case FlushStatus::Neither: return "neither";
    }
    return "?";
}

struct FlushReport {
    FlushStatus status = FlushStatus::Flush;
    Rational m;
    std::string witness;            // divisor/point violating strictness, if any
    Rational witness_coefficient;
};

/*
 * Flush: every exceptional coefficient of the minimal resolution of the pair
 * is < m(Delta); level allows equality. Smooth points of the surface where
 * boundary components meet contribute sum(a_i M_i) - 1 (the coefficient of
 * the blow-up of that point).
 */
inline FlushReport flush_level_status(const LogPair& pair) {
    FlushReport rep;
    rep.m = min_positive_coefficient(pair);
    auto consider = [&](const Rational& e, const std::string& who) {
        if (e < rep.m) return;
        bool strict = e > rep.m;
        if (strict) {
            rep.status = FlushStatus::Neither;
            rep.witness = who;
            rep.witness_coefficient = e;
        } else if (rep.status == FlushStatus::Flush) {
            rep.status = FlushStatus::LevelNotFlush;
            rep.witness = who;
            rep.witness_coefficient = e;
        }
    };
    for (const auto& pt : pair.points) {
        std::vector<Attachment> atts;
        for (const auto& r : pt.atts)
            atts.push_back({r.vertex, r.kind, r.order, pair.boundary.at(r.curve)});
        PairReport pr = pair_status(pt.graph, atts);
        for (std::size_t i = 0; i < pr.min_res_coefficients.size(); ++i)
            consider(pr.min_res_coefficients[i], pt.name + "#" + std::to_string(i));
        for (std::size_t i = 0; i < pr.deeper_coefficients.size(); ++i)
            consider(pr.deeper_coefficients[i], pt.name + "!deep" + std::to_string(i));
    }
    for (const auto& sp : pair.smooth_points) {
        Rational v(-1);
        for (const auto& [curve, mult] : sp.mults) v += pair.boundary.at(curve) * Rational(mult);
        consider(v, sp.name);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// the hunt: extraction + two-ray game step
// ---------------------------------------------------------------------------

struct BadChoice : std::runtime_error {
    explicit BadChoice(const std::string& w) : std::runtime_error("huntchoice violated: " + w) {}
};
struct NotExtremal : std::runtime_error {
    explicit NotExtremal(const std::string& w) : std::runtime_error("sigma not extremal: " + w) {}
};

struct HuntState {
    CurveConfig resolution;                   // fixed smooth model everything lives on
    std::vector<std::string> contracted;      // curves contracted on S_i
    std::map<std::string, Rational> boundary; // boundary coefficients on S_i
    int stage = 0;
    bool level_mode = false;                  // suppress lambda-rescaling, clamp at 1

    struct Entry {
        int stage;
        std::string extracted, sigma;
        Rational lambda;
        std::string result;
        std::map<std::string, Rational> coefficients;
    };
    std::vector<Entry> ledger;
};

struct NetResult {
    Rational d;       // fiber degree sigma . E
    Rational a1;      // lambda * e(E)
    Rational lambda;
    bool small_degree; // d <= 2: contradicts lemma_net under the no-tiger hypothesis
};

using HuntOutcome = std::variant<NetResult, HuntState>;

namespace detail {

inline void check_huntchoice(const CurveConfig& cfg, const std::vector<std::string>& contracted,
                             const std::map<std::string, Rational>& e, const std::string& extract) {
    Rational emax(0);
    for (const auto& name : contracted)
        if (e.at(name) > emax) emax = e.at(name);
    const Rational& ee = e.at(extract);
    if (ee < emax) throw BadChoice(extract + " does not have maximal coefficient");

    // component of `extract` inside the contracted locus
    auto groups = group_by_contact(cfg, contracted);
    const std::vector<std::string>* mine = nullptr;
    for (const auto& g : groups)
        if (std::find(g.begin(), g.end(), extract) != g.end()) mine = &g;
    auto degree = [&](const std::string& v, const std::vector<std::string>& g) {
        int d = 0;
        for (const auto& u : g)
            if (u != v && !cfg.ip(u, v).is_zero()) ++d;
        return d;
    };
    bool my_fork = false;
    std::string center;
    for (const auto& v : *mine)
        if (degree(v, *mine) >= 3) {
            my_fork = true;
            center = v;
        }
    if (my_fork) {
        // non-chain point: the central curve must be extracted; and a chain
        // point attaining the same coefficient is preferred over a fork
        for (const auto& g : groups) {
            if (&g == mine) continue;
            bool fork = false;
            Rational gmax(0);
            for (const auto& v : g) {
                if (degree(v, g) >= 3) fork = true;
                if (e.at(v) > gmax) gmax = e.at(v);
            }
            if (!fork && gmax == ee)
                throw BadChoice("a chain point attains the maximal coefficient; chains are preferred");
        }
        if (extract != center) throw BadChoice("fork point: extract the central curve");
    } else {
        if (cfg.ip(extract, extract) == Rational(-2))
            throw BadChoice("(-2) curves are never extracted at chain points");
        // among tied candidates in this chain, lowest self-intersection wins
        for (const auto& v : *mine)
            if (e.at(v) == ee && cfg.ip(v, v) < cfg.ip(extract, extract))
                throw BadChoice("a lower self-intersection candidate exists in the chain");
    }
}

} // namespace detail

/*
 * One hunt step: extract the chosen exceptional divisor E from its singular
 * point, rescale the boundary by lambda so that (K_T + lambda Gamma) . sigma = 0,
 * then either report a net (sigma^2 = 0) or contract sigma and return the next
 * state. In level mode no rescaling happens and coefficients clamp at 1.
 */
inline HuntOutcome hunt_step(const HuntState& st, const std::string& extract,
                             const std::string& sigma) {
    if (std::find(st.contracted.begin(), st.contracted.end(), extract) == st.contracted.end())
        throw BadChoice(extract + " is not contracted on this stage");
    ContractionReport cur = contract_core(st.resolution, st.contracted);
    detail::check_huntchoice(st.resolution, st.contracted, cur.e, extract);
    Rational eE = cur.e.at(extract);

    std::vector<std::string> rest;
    for (const auto& c : st.contracted)
        if (c != extract) rest.push_back(c);
    ContractionReport T = contract_core(st.resolution, rest);

    if (!T.pushed.count(sigma) || sigma == extract)
        throw NotExtremal(sigma + " is not a curve on the extracted model");
    std::map<std::string, Rational> gamma = st.boundary; // Gamma_eps = Delta + e(E) E
    gamma[extract] = eE;

    Rational ksig = T.pushed.at(sigma).k_dot;
    Rational gsig(0);
    for (const auto& [name, a] : gamma) gsig += a * T.pairwise.at(sigma).at(name);
    Rational s2 = T.pushed.at(sigma).self;
    if (ksig + gsig >= Rational(0)) throw NotExtremal("(K_T + Gamma) . sigma >= 0");
    if (s2 > Rational(0)) throw NotExtremal("sigma^2 > 0");

    Rational lambda(1);
    if (!st.level_mode) {
        if (gsig <= Rational(0)) throw NotExtremal("Gamma . sigma <= 0, lambda undefined");
        lambda = -ksig / gsig;
        if (lambda <= Rational(1))
            throw std::logic_error("hunt_step: lambda <= 1 contradicts hunt_transformation");
    }

    auto clamp = [&](const Rational& x) {
        return st.level_mode && x > Rational(1) ? Rational(1) : x;
    };

    if (s2.is_zero()) {
        NetResult net;
        net.d = T.pairwise.at(sigma).at(extract);
        net.lambda = lambda;
        net.a1 = clamp(lambda * eE);
        net.small_degree = net.d <= Rational(2);
        return net;
    }

    HuntState next = st;
    next.stage = st.stage + 1;
    next.contracted = rest;
    next.contracted.push_back(sigma);
    next.boundary.clear();
    for (const auto& [name, a] : gamma)
        if (name != sigma) next.boundary[name] = clamp(lambda * a);
    HuntState::Entry entry{st.stage, extract, sigma, lambda, "birational", next.boundary};
    next.ledger.push_back(entry);
    return next;
}

// ---------------------------------------------------------------------------
// contraction-configuration tables with executable local recipes
// ---------------------------------------------------------------------------

struct UnknownLabel : std::runtime_error {
    explicit UnknownLabel(const std::string& l) : std::runtime_error("unknown table row: " + l) {}
};

// k0 + kc*c + kd*d = 0, the sigma-triviality relation in the boundary
// coefficients c (of X) and d (of Y)
struct AffineRelation {
    Rational k0, kc, kd;
};

inline AffineRelation derive_relation(const CurveConfig& cfg,
                                      const std::vector<std::string>& contracted,
                                      const std::string& X, const std::optional<std::string>& Y,
                                      const std::string& sigma) {
    auto value = [&](const Rational& c, const Rational& d) {
        const std::size_t n = contracted.size();
        SymMatrix m(n);
        Vec b(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) m.set(i, j, cfg.ip(contracted[i], contracted[j]));
            b[i] = -cfg.ip(cfg.canonical_class(), cfg.curve(contracted[i])) -
                   c * cfg.ip(X, contracted[i]);
            if (Y) b[i] -= d * cfg.ip(*Y, contracted[i]);
        }
        Vec e = n ? gram_solve(m, b) : Vec{};
        Rational v = cfg.ip(cfg.canonical_class(), cfg.curve(sigma)) + c * cfg.ip(X, sigma);
        if (Y) v += d * cfg.ip(*Y, sigma);
        for (std::size_t i = 0; i < n; ++i) v += e[i] * cfg.ip(contracted[i], sigma);
        return v;
    };
    AffineRelation r;
    r.k0 = value(Rational(0), Rational(0));
    r.kc = value(Rational(1), Rational(0)) - r.k0;
    r.kd = value(Rational(0), Rational(1)) - r.k0;
    return r;
}

struct ContractionResult {
    std::string family, label;
    long param = 0;
    Rational cc, cd, rhs;                    // table relation cc*c + cd*d = rhs
    std::vector<std::string> singularities;  // from the executed recipe
    AffineRelation derived;
    bool validated = false;
    CurveConfig model;
    std::vector<std::string> contracted;
    std::string sigma;
};

namespace detail {

inline std::string sing_name(const DualGraph& g) {
    if (!g.is_fork()) {
        bool duval = true;
        for (int w : g.weights())
            if (w != -2) duval = false;
        if (duval) return "A_" + std::to_string(g.size());
        std::ostringstream os;
        os << "(";
        auto w = g.canonical_chain();
        for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << -w[i];
        os << ")";
        return os.str();
    }
    std::ostringstream os;
    os << "fork(" << -g.weight(0) << ";";
    std::vector<std::string> bs;
    for (int b = 0; b < 3; ++b) {
        std::ostringstream bo;
        auto w = g.branch_weights(b);
        for (std::size_t i = 0; i < w.size(); ++i) bo << (i ? "," : "") << -w[i];
        bs.push_back(bo.str());
    }
    std::sort(bs.begin(), bs.end());
    os << bs[0] << "|" << bs[1] << "|" << bs[2] << ")";
    return os.str();
}

struct Recipe {
    CurveConfig model;
    std::vector<std::string> contracted;
    std::string X;
    std::optional<std::string> Y;
    std::string sigma;
};

// node configurations: F0, X = S, Y = S + gF, X.Y = g
inline Recipe node_recipe(const std::string& label, long g_or_r) {
    auto mk = [&](long g) {
        CurveConfig cfg = CurveConfig::hirzebruch(0);
        cfg.add_curve("X", {Int(1), Int(0)});
        cfg.add_curve("Y", {Int(1), Int(g)});
        return cfg;
    };
    auto E = [](long i) { return "E" + std::to_string(i); };
    Recipe r;
    r.X = "X";
    r.Y = "Y";
    if (label == "0") {
        long g = g_or_r;
        if (g < 2) throw UnknownLabel("node 0 needs g >= 2");
        CurveConfig cfg = mk(g);
        cfg = cfg.blow_up({{{"X", 1}, {"Y", 1}}, std::nullopt, E(1)});
        for (long i = 2; i <= g - 1; ++i)
            cfg = cfg.blow_up({{{"X", 1}, {"Y", 1}}, E(i - 1), E(i)});
        r.model = cfg;
        for (long i = 1; i <= g - 2; ++i) r.contracted.push_back(E(i));
        r.sigma = E(g - 1);
        return r;
    }
    if (label == "I" || label == "II") {
        long g = g_or_r;
        if (g < 1) throw UnknownLabel("node I/II needs g >= 1");
        CurveConfig cfg = mk(g);
        cfg = cfg.blow_up({{{"X", 1}, {"Y", 1}}, std::nullopt, E(1)});
        for (long i = 2; i <= g; ++i) cfg = cfg.blow_up({{{"X", 1}, {"Y", 1}}, E(i - 1), E(i)});
        if (label == "I") {
            r.model = cfg;
            for (long i = 1; i <= g - 1; ++i) r.contracted.push_back(E(i));
            r.sigma = E(g);
            return r;
        }
        cfg = cfg.blow_up({{{"X", 1}}, E(g), E(g + 1)});
        r.model = cfg;
        for (long i = 1; i <= g; ++i) r.contracted.push_back(E(i));
        r.sigma = E(g + 1);
        return r;
    }
    if (label == "(II,x^{r-1})") {
        long rr = g_or_r;
        if (rr < 1) throw UnknownLabel("node (II,x^{r-1}) needs r >= 1");
        CurveConfig cfg = mk(1);
        cfg = cfg.blow_up({{{"X", 1}, {"Y", 1}}, std::nullopt, E(1)});
        for (long i = 2; i <= rr + 1; ++i) cfg = cfg.blow_up({{{"X", 1}}, E(i - 1), E(i)});
        r.model = cfg;
        for (long i = 1; i <= rr; ++i) r.contracted.push_back(E(i));
        r.sigma = E(rr + 1);
        return r;
    }
    throw UnknownLabel("node " + label);
}

// cusp configurations: F0, X = 2S + (g+1)F with p_a(X) = g; the cusp resolves
// by g multiplicity-2 infinitely-near blow-ups along X
inline Recipe cusp_recipe(const std::string& label, long g) {
    auto E = [](long i) { return "E" + std::to_string(i); };
    if (g < 1) throw UnknownLabel("cusp rows need g >= 1");
    CurveConfig cfg = CurveConfig::hirzebruch(0);
    cfg.add_curve("X", {Int(2), Int(g + 1)});
    cfg = cfg.blow_up({{{"X", 2}}, std::nullopt, E(1)});
    for (long i = 2; i <= g; ++i) cfg = cfg.blow_up({{{"X", 2}}, E(i - 1), E(i)});

    Recipe r;
    r.X = "X";
    long top = g; // index of the last exceptional so far
    auto all_but_last = [&](const CurveConfig& c, long last) {
        r.model = c;
        r.contracted.clear();
        for (long i = 1; i <= last - 1; ++i) r.contracted.push_back(E(i));
        r.sigma = E(last);
    };
    if (label == "I") {
        all_but_last(cfg, top);
        return r;
    }
    cfg = cfg.blow_up({{{"X", 1}, {E(g), 1}}, std::nullopt, E(g + 1)}); // II
    if (label == "II") {
        all_but_last(cfg, g + 1);
        return r;
    }
    cfg = cfg.blow_up({{{"X", 1}, {E(g), 1}, {E(g + 1), 1}}, std::nullopt, E(g + 2)}); // III
    if (label == "III") {
        all_but_last(cfg, g + 2);
        return r;
    }
    if (label == "(u)" || label == "(u;n)") {
        cfg = cfg.blow_up({{{E(g + 2), 1}, {E(g), 1}}, std::nullopt, E(g + 3)});
        if (label == "(u)") {
            all_but_last(cfg, g + 3);
            return r;
        }
        cfg = cfg.blow_up({{{E(g + 3), 1}, {E(g + 2), 1}}, std::nullopt, E(g + 4)});
        all_but_last(cfg, g + 4);
        return r;
    }
    if (label == "(w)") {
        cfg = cfg.blow_up({{{E(g + 2), 1}, {E(g + 1), 1}}, std::nullopt, E(g + 3)});
        all_but_last(cfg, g + 3);
        return r;
    }
    if (label.rfind("(v", 0) == 0) {
        cfg = cfg.blow_up({{{"X", 1}, {E(g + 2), 1}}, std::nullopt, E(g + 3)});
        if (label == "(v)") {
            all_but_last(cfg, g + 3);
            return r;
        }
        if (label == "(v;n)" || label == "(v;n^2)") {
            cfg = cfg.blow_up({{{"X", 1}, {E(g + 3), 1}}, std::nullopt, E(g + 4)});
            if (label == "(v;n)") {
                all_but_last(cfg, g + 4);
                return r;
            }
            cfg = cfg.blow_up({{{"X", 1}, {E(g + 4), 1}}, std::nullopt, E(g + 5)});
            all_but_last(cfg, g + 5);
            return r;
        }
        if (label == "(v;f)" || label == "(v;f^2)") {
            cfg = cfg.blow_up({{{E(g + 3), 1}, {E(g + 2), 1}}, std::nullopt, E(g + 4)});
            if (label == "(v;f)") {
                all_but_last(cfg, g + 4);
                return r;
            }
            cfg = cfg.blow_up({{{E(g + 4), 1}, {E(g + 2), 1}}, std::nullopt, E(g + 5)});
            all_but_last(cfg, g + 5);
            return r;
        }
    }
    throw UnknownLabel("cusp " + label);
}

// multiplicity-three configurations: ad-hoc local models realizing the
// lemmas' singularity content; the relations are derived, not printed
inline Recipe mult3_recipe(const std::string& label) {
    Recipe r;
    r.X = "X";
    if (label == "a") {
        CurveConfig cfg = CurveConfig::hirzebruch(0);
        cfg.add_curve("X", {Int(1), Int(0)});
        cfg.add_curve("Y", {Int(1), Int(1)});
        cfg.add_curve("G", {Int(1), Int(2)});
        cfg = cfg.blow_up({{{"X", 1}, {"Y", 1}, {"G", 1}}, std::nullopt, "H"});
        cfg = cfg.blow_up({{{"Y", 1}, {"G", 1}}, std::nullopt, "T1"});
        cfg = cfg.blow_up({{{"Y", 1}, {"G", 1}}, std::nullopt, "T2"});
        cfg = cfg.blow_up({{{"G", 1}}, std::nullopt, "T3"});
        cfg = cfg.blow_up({{{"G", 1}}, std::nullopt, "T4"});
        cfg = cfg.blow_up({{{"G", 1}}, std::nullopt, "T5"});
        cfg = cfg.blow_up({{{"X", 1}, {"G", 1}, {"H", 1}}, std::nullopt, "Sig"});
        r.model = cfg;
        r.Y = "Y";
        r.contracted = {"G", "H"};
        r.sigma = "Sig";
        return r;
    }
    if (label == "b1") {
        CurveConfig cfg = CurveConfig::hirzebruch(0);
        cfg.add_curve("X", {Int(1), Int(0)});
        cfg.add_curve("G", {Int(1), Int(3)});
        cfg = cfg.blow_up({{{"X", 1}, {"G", 1}}, std::nullopt, "T"});
        cfg = cfg.blow_up({{{"X", 1}, {"G", 1}, {"T", 1}}, std::nullopt, "Q"});
        cfg = cfg.blow_up({{{"T", 1}}, std::nullopt, "J1"});
        for (int i = 0; i < 6; ++i)
            cfg = cfg.blow_up({{{"G", 1}}, std::nullopt, "J" + std::to_string(i + 2)});
        cfg = cfg.blow_up({{{"X", 1}, {"G", 1}, {"Q", 1}}, std::nullopt, "Sig"});
        r.model = cfg;
        r.contracted = {"G", "T", "Q"};
        r.sigma = "Sig";
        return r;
    }
    if (label == "b2") {
        CurveConfig cfg = CurveConfig::p2();
        cfg.add_curve("X", {Int(3)}); // nodal cubic, node on the line L
        cfg.add_curve("L", {Int(1)});
        cfg = cfg.blow_up({{{"X", 2}, {"L", 1}}, std::nullopt, "H"});
        cfg = cfg.blow_up({{{"L", 1}}, std::nullopt, "J1"});
        cfg = cfg.blow_up({{{"L", 1}}, std::nullopt, "J2"});
        cfg = cfg.blow_up({{{"X", 1}, {"L", 1}, {"H", 1}}, std::nullopt, "Sig"});
        r.model = cfg;
        r.contracted = {"L", "H"};
        r.sigma = "Sig";
        return r;
    }
    throw UnknownLabel("mult3 " + label);
}

struct TableRelation {
    Rational cc, cd, rhs;
    std::vector<std::string> sings; // printed singularity content (mult3 rows)
};

inline TableRelation table_relation(const std::string& family, const std::string& label, long p) {
    auto Q = [](std::intmax_t a, std::intmax_t b = 1) { return Rational(a, b); };
    if (family == "node") {
        if (label == "0" || label == "I") return {Q(1), Q(1), Q(1), {}};
        if (label == "II") return {Q(p + 1), Q(p), Q(p + 1), {}};
        if (label == "(II,x^{r-1})") return {Q(p + 1), Q(1), Q(p + 1), {}};
    } else if (family == "cusp") {
        if (label == "I") return {Q(1), Q(0), Q(1, 2), {}};
        if (label == "II" || label == "III") return {Q(2 * p + 1), Q(0), Q(p + 1), {}};
        if (label == "(u)") {
            if (p == 1) return {Q(1), Q(0), Q(3, 4), {}};
            if (p == 2) return {Q(1), Q(0), Q(9, 14), {}};
        }
        if (label == "(v)") {
            if (p == 1) return {Q(1), Q(0), Q(5, 7), {}};
            if (p == 2) return {Q(1), Q(0), Q(7, 11), {}};
        }
        if (label == "(w)" && p == 1) return {Q(1), Q(0), Q(7, 9), {}};
        if (p == 1) {
            if (label == "(u;n)") return {Q(1), Q(0), Q(11, 14), {}};
            if (label == "(v;n)") return {Q(1), Q(0), Q(3, 4), {}};
            if (label == "(v;n^2)") return {Q(1), Q(0), Q(7, 9), {}};
            if (label == "(v;f)") return {Q(1), Q(0), Q(10, 13), {}};
            if (label == "(v;f^2)") return {Q(1), Q(0), Q(15, 19), {}};
        }
    } else if (family == "mult3") {
        // the lemmas print singularity content; relations are derived data
        if (label == "a") return {Q(1), Q(1, 2), Q(2, 3), {"(3)", "A_1"}};
        if (label == "b1") return {Q(1), Q(0), Q(7, 15), {"(3)", "(3,2)"}};
        if (label == "b2") return {Q(3, 2), Q(0), Q(2, 3), {"(3)", "A_1"}};
    }
    throw UnknownLabel(family + " " + label + " param " + std::to_string(p));
}

} // namespace detail

inline ContractionResult classify_contraction(const std::string& family, const std::string& label,
                                              long param) {
    detail::Recipe recipe = family == "node"  ? detail::node_recipe(label, param)
                          : family == "cusp"  ? detail::cusp_recipe(label, param)
                          : family == "mult3" ? detail::mult3_recipe(label)
                                              : throw UnknownLabel(family);
    detail::TableRelation tab = detail::table_relation(family, label, param);

    ContractionResult out;
    out.family = family;
    out.label = label;
    out.param = param;
    out.cc = tab.cc;
    out.cd = tab.cd;
    out.rhs = tab.rhs;
    out.model = recipe.model;
    out.contracted = recipe.contracted;
    out.sigma = recipe.sigma;
    out.derived = derive_relation(recipe.model, recipe.contracted, recipe.X, recipe.Y, recipe.sigma);

    for (const auto& g : group_by_contact(recipe.model, recipe.contracted)) {
        auto [graph, labels] = detail::recognize_component(recipe.model, g);
        out.singularities.push_back(detail::sing_name(graph));
    }
    std::sort(out.singularities.begin(), out.singularities.end());

    // table relation cc*c + cd*d = rhs versus derived k0 + kc*c + kd*d = 0:
    // proportional with factor kc/cc (exact)
    const AffineRelation& dr = out.derived;
    bool ok;
    if (!tab.cc.is_zero()) {
        Rational t = dr.kc / tab.cc;
        ok = !t.is_zero() && dr.kd == t * tab.cd && dr.k0 == -t * tab.rhs;
    } else {
        Rational t = dr.kd / tab.cd;
        ok = !t.is_zero() && dr.kc.is_zero() && dr.k0 == -t * tab.rhs;
    }
    if (ok && !tab.sings.empty()) {
        auto expect = tab.sings;
        std::sort(expect.begin(), expect.end());
        ok = expect == out.singularities;
    }
    out.validated = ok;
    return out;
}

// every (family, label, param) triple the tables cover
inline std::vector<std::tuple<std::string, std::string, long>> contraction_table_rows(long gmax = 6,
                                                                                      long rmax = 6) {
    std::vector<std::tuple<std::string, std::string, long>> rows;
    for (long g = 2; g <= gmax; ++g) rows.push_back({"node", "0", g});
    for (long g = 1; g <= gmax; ++g) rows.push_back({"node", "I", g});
    for (long g = 1; g <= gmax; ++g) rows.push_back({"node", "II", g});
    for (long r = 1; r <= rmax; ++r) rows.push_back({"node", "(II,x^{r-1})", r});
    for (long g = 1; g <= gmax; ++g) rows.push_back({"cusp", "I", g});
    for (long g = 1; g <= gmax; ++g) rows.push_back({"cusp", "II", g});
    for (long g = 1; g <= gmax; ++g) rows.push_back({"cusp", "III", g});
    for (long g = 1; g <= 2; ++g) rows.push_back({"cusp", "(u)", g});
    for (long g = 1; g <= 2; ++g) rows.push_back({"cusp", "(v)", g});
    rows.push_back({"cusp", "(w)", 1});
    for (const char* s : {"(u;n)", "(v;n)", "(v;n^2)", "(v;f)", "(v;f^2)"})
        rows.push_back({"cusp", s, 1});
    for (const char* s : {"a", "b1", "b2"}) rows.push_back({"mult3", s, 0});
    return rows;
}

// ---------------------------------------------------------------------------
// net-fiber table
// ---------------------------------------------------------------------------

struct UnknownRow : std::runtime_error {
    explicit UnknownRow(int r) : std::runtime_error("net-fiber row out of range: " + std::to_string(r)) {}
};

struct NetFiber {
    int row = 0;
    std::vector<int> weights;        // component self-intersections (B included)
    std::vector<Int> multiplicities; // fiber F = sum mult_i C_i
    std::size_t b_index = 0;         // the (-1) section B
    Int m;                           // fiber multiplicity = mult of B
    std::string description;
};

/*
 * Rows of the net-fiber classification. Each row is a fixed component graph;
 * the multiplicities are the (unique, primitive) kernel vector of the
 * intersection matrix, verified via F . C_i = 0 for every component and
 * F^2 = 0.
 */
inline NetFiber net_fiber_data(int row, long param = 0) {
    // components: weights, edges; B is the (-1) curve
    std::vector<int> w;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<Int> mult;
    std::size_t b = 0;
    std::string desc;
    auto chain_edges = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to; ++i) edges.push_back({i, i + 1});
    };
    switch (row) {
        case 1: // (2,2',2), m=2
            w = {-2, -2, -2, -1};
            b = 3;
            chain_edges(0, 2);
            edges.push_back({1, 3});
            mult = {1, 2, 1, 2};
            desc = "(2,2',2)";
            break;
        case 2: // (3,2',2,2), m=3
            w = {-3, -2, -2, -2, -1};
            b = 4;
            chain_edges(0, 3);
            edges.push_back({1, 4});
            mult = {1, 3, 2, 1, 3};
            desc = "(3,2',2,2)";
            break;
        case 3: { // (2'; fork z with branches (2),(2),(2^t,3')), m=4
            if (param < 0 || param > 4) throw UnknownRow(row);
            std::size_t t = static_cast<std::size_t>(param);
            // P, W(center), a, b-branch, d_1..d_t, C(-3), B
            w = {-2, -2, -2, -2};
            for (std::size_t i = 0; i < t; ++i) w.push_back(-2);
            w.push_back(-3);
            w.push_back(-1);
            b = w.size() - 1;
            edges.push_back({1, 2});
            edges.push_back({1, 3});
            for (std::size_t i = 0; i < t + 1; ++i)
                edges.push_back({i == 0 ? 1 : 3 + i, 4 + i});
            edges.push_back({0, b});          // B meets the 2'
            edges.push_back({4 + t, b});      // B meets the 3'
            mult = {2, 2, 1, 1};
            for (std::size_t i = 0; i < t; ++i) mult.push_back(2);
            mult.push_back(2);
            mult.push_back(4);
            desc = "(2'; z), t=" + std::to_string(t);
            break;
        }
        case 4: // (2,3',2; 2'), m=4
            w = {-2, -3, -2, -2, -1};
            b = 4;
            chain_edges(0, 2);
            edges.push_back({1, 4});
            edges.push_back({3, 4});
            mult = {1, 2, 1, 2, 4};
            desc = "(2,3',2;2')";
            break;
        case 5: { // (A_k; (k+1)'), k <= 4, m=k+1
            if (param < 1 || param > 4) throw UnknownRow(row);
            std::size_t k = static_cast<std::size_t>(param);
            for (std::size_t i = 0; i < k; ++i) w.push_back(-2);
            w.push_back(-static_cast<int>(k) - 1);
            w.push_back(-1);
            b = k + 1;
            chain_edges(0, k - 1);
            edges.push_back({k, b});
            edges.push_back({0, b});
            for (std::size_t i = 0; i < k; ++i) mult.push_back(Int(k - i));
            mult.push_back(1);
            mult.push_back(Int(k + 1));
            desc = "(A_" + std::to_string(k) + "; (" + std::to_string(k + 1) + ")')";
            break;
        }
        case 6: // (2,3'; 2',3), m=5
            w = {-2, -3, -2, -3, -1};
            b = 4;
            edges.push_back({0, 1});
            edges.push_back({2, 3});
            edges.push_back({1, 4});
            edges.push_back({2, 4});
            mult = {1, 2, 3, 1, 5};
            desc = "(2,3';2',3)";
            break;
        case 7: // (3,2,2'; 4',2), m=7
            w = {-3, -2, -2, -4, -2, -1};
            b = 5;
            chain_edges(0, 2);
            edges.push_back({3, 4});
            edges.push_back({2, 5});
            edges.push_back({3, 5});
            mult = {1, 3, 5, 2, 1, 7};
            desc = "(3,2,2';4',2)";
            break;
        case 8: // (4,2'; 3',2,2), m=7 (printed multiplicities transpose 3 and 7)
            w = {-4, -2, -3, -2, -2, -1};
            b = 5;
            edges.push_back({0, 1});
            chain_edges(2, 4);
            edges.push_back({1, 5});
            edges.push_back({2, 5});
            mult = {1, 4, 3, 2, 1, 7};
            desc = "(4,2';3',2,2)";
            break;
        default:
            throw UnknownRow(row);
    }

    // machine check: F . C_i = 0 for every component and F^2 = 0
    const std::size_t n = w.size();
    SymMatrix M(n);
    for (std::size_t i = 0; i < n; ++i) M.set(i, i, Rational(w[i]));
    for (auto [i, j] : edges) M.set(i, j, Rational(1));
    Rational f2(0);
    for (std::size_t i = 0; i < n; ++i) {
        Rational fc(0);
        for (std::size_t j = 0; j < n; ++j) fc += Rational(mult[j]) * M(i, j);
        if (!fc.is_zero()) throw std::logic_error("net_fiber_data: F . C_i != 0");
        f2 += Rational(mult[i]) * fc;
    }
    if (!f2.is_zero()) throw std::logic_error("net_fiber_data: F^2 != 0");

    NetFiber out;
    out.row = row;
    out.weights = w;
    out.multiplicities = mult;
    out.b_index = b;
    out.m = mult[b];
    out.description = desc;
    return out;
}

// rows whose fiber multiplicity is divisible by three (Lemma-adhoc filter)
inline std::vector<NetFiber> net_fibers_multiplicity_three() {
    std::vector<NetFiber> out;
    for (int row = 1; row <= 8; ++row) {
        std::vector<long> params = row == 3 ? std::vector<long>{0, 1, 2, 3, 4}
                   : row == 5               ? std::vector<long>{1, 2, 3, 4}
                                            : std::vector<long>{0};
        for (long p : params) {
            NetFiber f = net_fiber_data(row, p);
            if (f.m % 3 == 0) out.push_back(f);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// smooth-fence calculus
// ---------------------------------------------------------------------------

struct Inconsistent : std::runtime_error {
    Inconsistent() : std::runtime_error("fence: exactly one of alpha, beta equals 1") {}
};

struct FenceResult {
    bool balanced = false;                 // alpha = beta = 1
    std::optional<Rational> x_squared;     // (1-alpha)/(1-beta) otherwise
    std::optional<bool> ample_strict;      // a(1-a)+b(1-b) < 1-ab, when alpha,beta < 1
};

inline FenceResult fence_solve(const Rational& alpha, const Rational& beta, const Rational& a,
                               const Rational& b) {
    Rational one(1);
    FenceResult out;
    if ((alpha == one) != (beta == one)) throw Inconsistent{};
    if (beta == one) {
        out.balanced = true;
        return out;
    }
    out.x_squared = (one - alpha) / (one - beta);
    if (alpha < one && beta < one)
        out.ample_strict = a * (one - alpha) + b * (one - beta) < one - alpha * beta;
    return out;
}

} // namespace ldpkit
