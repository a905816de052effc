#pragma once

#include <ldpkit/dualgraph.hpp>
#include <ldpkit/linalg.hpp>
#include <ldpkit/rational.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldpkit {

struct UnknownCurve : std::runtime_error {
    explicit UnknownCurve(const std::string& n) : std::runtime_error("unknown curve: " + n) {}
};
struct GenusViolation : std::runtime_error {
    explicit GenusViolation(const std::string& n)
        : std::runtime_error("arithmetic genus of " + n + " would become negative") {}
};
struct NotContractible : std::runtime_error {
    explicit NotContractible(const std::string& why)
        : std::runtime_error("subset not contractible: " + why) {}
};
struct Overlap : std::runtime_error {
    Overlap() : std::runtime_error("contraction groups touch each other") {}
};
struct RankNotOne : std::runtime_error {
    RankNotOne() : std::runtime_error("ample_check requires a rank-one report") {}
};

struct Ambient {
    enum class Kind { P2, Fn } kind = Kind::P2;
    int n = 0; // Hirzebruch index
};

struct BlowupInstruction {
    std::vector<std::pair<std::string, Int>> through; // (curve, multiplicity >= 1)
    std::optional<std::string> infinitely_near;       // previous exceptional the center lies on
    std::string label;                                // name of the new exceptional
};

using Class = std::vector<Int>;

/*
 * Picard-lattice model of a smooth rational surface: the ambient's basis
 * (H, or S and F) followed by one exceptional class per blow-up. Curves are
 * tracked as integer class vectors; no equations exist anywhere, so tangency
 * and infinitely-near behavior are whatever the recipe declares — the machine
 * checks the numerical consequences (genus, Noether) only.
 */
class CurveConfig {
public:
    static CurveConfig p2() {
        CurveConfig c;
        c.ambient_ = {Ambient::Kind::P2, 0};
        c.base_rank_ = 1;
        c.basis_ = {"H"};
        c.canonical_ = {Int(-3)};
        c.check_noether();
        return c;
    }

    static CurveConfig hirzebruch(int n) {
        if (n < 0) throw std::invalid_argument("hirzebruch: n >= 0 required");
        CurveConfig c;
        c.ambient_ = {Ambient::Kind::Fn, n};
        c.base_rank_ = 2;
        c.basis_ = {"S", "F"};
        c.canonical_ = {Int(-2), Int(-n - 2)};
        c.curves_["S"] = {Int(1), Int(0)};
        c.curves_["F"] = {Int(0), Int(1)};
        c.check_noether();
        return c;
    }

    const Ambient& ambient() const { return ambient_; }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<std::string>& basis() const { return basis_; }
    const Class& canonical_class() const { return canonical_; }
    const std::map<std::string, Class>& curves() const { return curves_; }
    const std::vector<BlowupInstruction>& history() const { return history_; }

    bool has_curve(const std::string& name) const { return curves_.count(name) != 0; }

    const Class& curve(const std::string& name) const {
        auto it = curves_.find(name);
        if (it == curves_.end()) throw UnknownCurve(name);
        return it->second;
    }

    // intersection form: P2 diag(1,-1,...); Fn [[-n,1],[1,0]] then diag(-1,...)
    Rational ip(const Class& a, const Class& b) const {
        if (a.size() != rank() || b.size() != rank())
            throw std::invalid_argument("ip: class dimension mismatch");
        Int s = 0;
        if (ambient_.kind == Ambient::Kind::P2) {
            s += a[0] * b[0];
        } else {
            s += -Int(ambient_.n) * a[0] * b[0] + a[0] * b[1] + a[1] * b[0];
        }
        for (std::size_t i = base_rank_; i < rank(); ++i) s -= a[i] * b[i];
        return Rational(s);
    }

    Rational ip(const std::string& a, const std::string& b) const { return ip(curve(a), curve(b)); }
    Rational k_dot(const std::string& c) const { return ip(canonical_, curve(c)); }
    Rational k2() const { return ip(canonical_, canonical_); }

    Rational pa(const Class& c) const {
        Rational g = Rational(1) + (ip(c, c) + ip(canonical_, c)) / Rational(2);
        if (!g.is_integer()) throw std::logic_error("pa: non-integral arithmetic genus");
        return g;
    }

    void add_curve(const std::string& name, Class cls) {
        if (cls.size() != rank()) throw std::invalid_argument("add_curve: dimension mismatch");
        if (curves_.count(name)) throw std::invalid_argument("add_curve: duplicate name " + name);
        if (pa(cls) < Rational(0)) throw GenusViolation(name);
        curves_[name] = std::move(cls);
    }

    CurveConfig blow_up(const BlowupInstruction& instr) const {
        CurveConfig next = *this;
        if (instr.label.empty() || next.curves_.count(instr.label))
            throw std::invalid_argument("blow_up: bad exceptional label " + instr.label);
        for (auto& [name, cls] : next.curves_) cls.push_back(Int(0));
        next.canonical_.push_back(Int(1));
        next.basis_.push_back(instr.label);
        const std::size_t slot = next.rank() - 1;

        auto pass_through = [&](const std::string& name, const Int& mult) {
            auto it = next.curves_.find(name);
            if (it == next.curves_.end()) throw UnknownCurve(name);
            if (mult < 1) throw std::invalid_argument("blow_up: multiplicity must be >= 1");
            it->second[slot] -= mult;
        };
        for (const auto& [name, mult] : instr.through) pass_through(name, mult);
        if (instr.infinitely_near) pass_through(*instr.infinitely_near, Int(1));

        next.curves_[instr.label] = Class(next.rank(), Int(0));
        next.curves_[instr.label][slot] = Int(1);

        for (const auto& [name, cls] : next.curves_)
            if (next.pa(cls) < Rational(0)) throw GenusViolation(name);
        next.history_.push_back(instr);
        next.check_noether();
        return next;
    }

private:
    void check_noether() const {
        if (k2() + Rational(static_cast<std::intmax_t>(rank())) != Rational(10))
            throw std::logic_error("Noether identity K^2 + rho = 10 violated");
    }

    Ambient ambient_;
    std::size_t base_rank_ = 1;
    std::vector<std::string> basis_;
    Class canonical_;
    std::map<std::string, Class> curves_;
    std::vector<BlowupInstruction> history_;
};

struct ContractedComponent {
    std::vector<std::string> labels; // in dual-graph vertex order
    DualGraph graph;                 // empty for a smooth blow-down
    Vec coefficients;
    SingularityClass cls;
    bool minus_one = false;          // single (-1)-curve: smooth blow-down, e = -1
};

struct PushedCurve {
    Rational k_dot;  // K_S . C
    Rational self;   // C^2 on S
};

struct ContractionReport {
    std::vector<ContractedComponent> components;
    std::map<std::string, Rational> e; // coefficient per contracted curve
    std::size_t rho_s = 0;
    Rational k2_s;
    std::map<std::string, PushedCurve> pushed;
    std::map<std::string, std::map<std::string, Rational>> pairwise; // pushed products
    std::size_t contracted_count = 0;
};

namespace detail {

// Recognize a connected negative-definite tree as a chain or fork and order
// its labels accordingly.
inline std::pair<DualGraph, std::vector<std::string>>
recognize_component(const CurveConfig& cfg, const std::vector<std::string>& comp) {
    const std::size_t n = comp.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Rational x = cfg.ip(comp[i], comp[j]);
            if (x == Rational(1)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            } else if (!x.is_zero()) {
                throw NotContractible("curves " + comp[i] + "," + comp[j] +
                                      " meet with multiplicity != 0,1");
            }
        }
    auto weight_of = [&](std::size_t i) {
        Rational w = cfg.ip(comp[i], comp[i]);
        if (!w.is_integer() || w > Rational(-2))
            throw NotContractible("curve " + comp[i] + " has self-intersection > -2");
        return static_cast<int>(w.num().convert_to<long>());
    };
    std::size_t edges = 0;
    for (const auto& a : adj) edges += a.size();
    if (edges != 2 * (n - 1)) throw NotContractible("component is not a tree");

    std::vector<std::size_t> deg3;
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].size() > 3) throw NotContractible("vertex of valence > 3");
        if (adj[i].size() == 3) deg3.push_back(i);
    }
    if (deg3.size() > 1) throw NotContractible("more than one fork vertex");

    auto walk = [&](std::size_t from, std::size_t first) {
        std::vector<std::size_t> path{first};
        std::size_t prev = from, cur = first;
        while (true) {
            std::size_t nxt = n;
            for (std::size_t u : adj[cur])
                if (u != prev) nxt = u;
            if (nxt == n) break;
            path.push_back(nxt);
            prev = cur;
            cur = nxt;
        }
        return path;
    };

    if (deg3.empty()) {
        // chain: start from the lowest-index end for determinism
        std::size_t end = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (adj[i].size() <= 1) {
                end = i;
                break;
            }
        std::vector<std::size_t> order{end};
        if (n > 1) {
            auto rest = walk(end, adj[end][0]);
            order.insert(order.end(), rest.begin(), rest.end());
        }
        std::vector<int> w;
        std::vector<std::string> labels;
        for (std::size_t i : order) {
            w.push_back(weight_of(i));
            labels.push_back(comp[i]);
        }
        return {DualGraph::chain(w), labels};
    }

    std::size_t c = deg3[0];
    std::array<std::vector<int>, 3> branches;
    std::vector<std::string> labels{comp[c]};
    for (int b = 0; b < 3; ++b) {
        auto path = walk(c, adj[c][static_cast<std::size_t>(b)]);
        for (std::size_t i : path) {
            branches[static_cast<std::size_t>(b)].push_back(weight_of(i));
            labels.push_back(comp[i]);
        }
    }
    return {DualGraph::fork(weight_of(c), branches), labels};
}

} // namespace detail

/*
 * Numeric core of a contraction: log-pullback coefficients, K_S^2 along two
 * independent routes, and the pushed-forward intersection theory of the
 * surviving tracked curves. Makes no assumption about the shape of the
 * contracted configuration beyond an invertible Gram matrix.
 */
inline ContractionReport contract_core(const CurveConfig& cfg,
                                       const std::vector<std::string>& order) {
    for (const auto& name : order) (void)cfg.curve(name);
    ContractionReport rep;
    rep.contracted_count = order.size();
    rep.rho_s = cfg.rank() - order.size();

    // global coefficient solve (block diagonal over the groups)
    const std::size_t n = order.size();
    SymMatrix m(n);
    Vec b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) m.set(i, j, cfg.ip(order[i], order[j]));
        b[i] = -cfg.ip(cfg.canonical_class(), cfg.curve(order[i]));
    }
    Vec e = gram_solve(m, b);
    for (std::size_t i = 0; i < n; ++i) rep.e[order[i]] = e[i];

    // K_S^2 along both routes
    Rational k2_a = cfg.k2();
    for (std::size_t i = 0; i < n; ++i)
        k2_a += e[i] * (Rational(-2) - cfg.ip(order[i], order[i]));
    Rational k2_b = cfg.k2();
    for (std::size_t i = 0; i < n; ++i) {
        k2_b += Rational(2) * e[i] * cfg.ip(cfg.canonical_class(), cfg.curve(order[i]));
        for (std::size_t j = 0; j < n; ++j) k2_b += e[i] * e[j] * cfg.ip(order[i], order[j]);
    }
    if (k2_a != k2_b) throw std::logic_error("contract: K_S^2 route mismatch");
    rep.k2_s = k2_a;

    // orthogonalized pushforward for the remaining tracked curves
    std::vector<std::string> kept;
    for (const auto& [name, cls] : cfg.curves())
        if (std::find(order.begin(), order.end(), name) == order.end()) kept.push_back(name);

    std::map<std::string, Vec> d; // f*C = C + sum d_i E_i
    for (const auto& name : kept) {
        Vec rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = -cfg.ip(name, order[j]);
        d[name] = gram_solve(m, rhs);
        // (f*C) . E_j = 0 by construction; assert exactly
        for (std::size_t j = 0; j < n; ++j) {
            Rational s = cfg.ip(name, order[j]);
            for (std::size_t i = 0; i < n; ++i) s += d[name][i] * m(i, j);
            if (!s.is_zero()) throw std::logic_error("contract: pullback orthogonality failed");
        }
        PushedCurve pc;
        pc.k_dot = cfg.ip(cfg.canonical_class(), cfg.curve(name));
        for (std::size_t i = 0; i < n; ++i) pc.k_dot += e[i] * cfg.ip(order[i], name);
        pc.self = cfg.ip(name, name);
        for (std::size_t i = 0; i < n; ++i) pc.self += d[name][i] * cfg.ip(order[i], name);
        rep.pushed[name] = pc;
    }
    for (const auto& a : kept)
        for (const auto& bb : kept) {
            Rational s = cfg.ip(a, bb);
            for (std::size_t i = 0; i < n; ++i) s += d[a][i] * cfg.ip(order[i], bb);
            rep.pairwise[a][bb] = s;
        }
    return rep;
}

/*
 * Contract the named curves (grouped into singular points). Every group must
 * form a klt dual graph or be a single (-1)-curve (smooth blow-down).
 */
inline ContractionReport contract(const CurveConfig& cfg,
                                  const std::vector<std::vector<std::string>>& groups) {
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b)
            for (const auto& x : groups[a])
                for (const auto& y : groups[b])
                    if (!cfg.ip(x, y).is_zero()) throw Overlap{};

    std::vector<ContractedComponent> comps;
    std::vector<std::string> order;
    for (const auto& g : groups) {
        ContractedComponent comp;
        if (g.size() == 1 && cfg.ip(g[0], g[0]) == Rational(-1)) {
            comp.minus_one = true;
            comp.labels = g;
        } else {
            auto [graph, labels] = detail::recognize_component(cfg, g);
            comp.graph = graph;
            comp.labels = labels;
            comp.cls = classify(graph);
            if (comp.cls.kind == SingKind::NotKlt)
                throw NotContractible("component is not a klt singularity");
            comp.coefficients = coefficients(graph);
        }
        order.insert(order.end(), comp.labels.begin(), comp.labels.end());
        comps.push_back(std::move(comp));
    }

    ContractionReport rep = contract_core(cfg, order);
    for (auto& comp : comps) {
        if (comp.minus_one) {
            comp.coefficients = {rep.e.at(comp.labels[0])};
            if (comp.coefficients[0] != Rational(-1))
                throw std::logic_error("contract: (-1)-curve coefficient must be -1");
        } else {
            for (std::size_t i = 0; i < comp.labels.size(); ++i)
                if (rep.e.at(comp.labels[i]) != comp.coefficients[i])
                    throw std::logic_error("contract: global/local coefficient mismatch");
        }
    }
    rep.components = std::move(comps);
    return rep;
}

// convenience: split a flat curve list into connected components automatically
inline std::vector<std::vector<std::string>> group_by_contact(const CurveConfig& cfg,
                                                              const std::vector<std::string>& subset) {
    std::vector<std::vector<std::string>> groups;
    std::vector<bool> used(subset.size(), false);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> stack{i};
        std::vector<std::string> comp;
        used[i] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            comp.push_back(subset[v]);
            for (std::size_t u = 0; u < subset.size(); ++u)
                if (!used[u] && !cfg.ip(subset[v], subset[u]).is_zero()) {
                    used[u] = true;
                    stack.push_back(u);
                }
        }
        groups.push_back(std::move(comp));
    }
    return groups;
}

inline ContractionReport contract_auto(const CurveConfig& cfg,
                                       const std::vector<std::string>& subset) {
    return contract(cfg, group_by_contact(cfg, subset));
}

// Rank-one ampleness of -K_S: K_S^2 > 0 and -K_S.C > 0 for every tracked curve.
inline bool ample_check(const ContractionReport& rep) {
    if (rep.rho_s != 1) throw RankNotOne{};
    if (rep.pushed.empty()) throw std::invalid_argument("ample_check: no tracked curve survives");
    if (rep.k2_s <= Rational(0)) return false;
    for (const auto& [name, pc] : rep.pushed)
        if (-pc.k_dot <= Rational(0)) return false;
    return true;
}

inline Rational k2_from_curve(const Rational& kdotc, const Rational& c2) {
    if (c2.is_zero()) throw std::domain_error("k2_from_curve: division by zero");
    return kdotc * kdotc / c2;
}

} // namespace ldpkit
