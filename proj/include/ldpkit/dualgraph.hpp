#pragma once

#include <ldpkit/linalg.hpp>
#include <ldpkit/rational.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldpkit {

struct NotNegativeDefinite : std::runtime_error {
    NotNegativeDefinite() : std::runtime_error("dual graph is not negative definite") {}
};
struct NonIntegralSpectralValue : std::runtime_error {
    NonIntegralSpectralValue() : std::runtime_error("spectral value is not integral") {}
};

/*
 * Weighted dual graph of the minimal resolution of a (candidate) klt surface
 * singularity: a chain or a three-branch fork, every weight <= -2.
 *
 * Vertex numbering: chains keep their original reading order (end-sensitive
 * operations such as the spectral value read from vertex 0); forks put the
 * central curve at 0 followed by the branches, each listed from the center out.
 */
class DualGraph {
public:
    static DualGraph chain(std::vector<int> w) {
        validate(w);
        if (w.empty()) throw std::invalid_argument("DualGraph: empty chain");
        DualGraph g;
        g.weights_ = std::move(w);
        g.build_chain_edges();
        return g;
    }

    static DualGraph fork(int center, std::array<std::vector<int>, 3> branches) {
        if (center > -2) throw std::invalid_argument("DualGraph: weight > -2");
        DualGraph g;
        g.fork_ = true;
        g.weights_.push_back(center);
        for (int b = 0; b < 3; ++b) {
            validate(branches[b]);
            if (branches[b].empty()) throw std::invalid_argument("DualGraph: empty fork branch");
            g.branch_len_[b] = branches[b].size();
            for (int w : branches[b]) g.weights_.push_back(w);
        }
        g.build_fork_edges();
        return g;
    }

    std::size_t size() const { return weights_.size(); }
    bool is_fork() const { return fork_; }
    int weight(std::size_t v) const { return weights_.at(v); }
    const std::vector<int>& weights() const { return weights_; }
    const std::vector<std::vector<std::size_t>>& adj() const { return adj_; }

    std::vector<int> branch_weights(int b) const {
        std::size_t start = 1;
        for (int i = 0; i < b; ++i) start += branch_len_[i];
        return {weights_.begin() + start, weights_.begin() + start + branch_len_[b]};
    }

    DualGraph reversed() const {
        if (fork_) throw std::logic_error("DualGraph: cannot reverse a fork");
        std::vector<int> w(weights_.rbegin(), weights_.rend());
        return chain(std::move(w));
    }

    // Lexicographically minimal of the two chain readings; used for dedup only.
    std::vector<int> canonical_chain() const {
        std::vector<int> a = weights_;
        std::vector<int> b(weights_.rbegin(), weights_.rend());
        return std::min(a, b);
    }

    SymMatrix intersection_matrix() const {
        SymMatrix m(size());
        for (std::size_t i = 0; i < size(); ++i) m.set(i, i, Rational(weights_[i]));
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j : adj_[i])
                if (i < j) m.set(i, j, Rational(1));
        return m;
    }

private:
    static void validate(const std::vector<int>& w) {
        for (int x : w)
            if (x > -2) throw std::invalid_argument("DualGraph: weight > -2");
    }
    void build_chain_edges() {
        adj_.assign(size(), {});
        for (std::size_t i = 0; i + 1 < size(); ++i) {
            adj_[i].push_back(i + 1);
            adj_[i + 1].push_back(i);
        }
    }
    void build_fork_edges() {
        adj_.assign(size(), {});
        std::size_t start = 1;
        for (int b = 0; b < 3; ++b) {
            adj_[0].push_back(start);
            adj_[start].push_back(0);
            for (std::size_t i = start; i + 1 < start + branch_len_[b]; ++i) {
                adj_[i].push_back(i + 1);
                adj_[i + 1].push_back(i);
            }
            start += branch_len_[b];
        }
    }

    bool fork_ = false;
    std::vector<int> weights_;
    std::array<std::size_t, 3> branch_len_{};
    std::vector<std::vector<std::size_t>> adj_;
};

namespace detail {

// det(-M) over the induced subgraph on `alive`, via the tree recursion
//   Delta = n_v Delta(G - v) - sum_{u ~ v} Delta(G - v - u),  n_v = -weight(v).
inline Int delta_rec(const DualGraph& g, std::uint32_t alive,
                     std::map<std::uint32_t, Int>& memo) {
    if (alive == 0) return 1;
    auto it = memo.find(alive);
    if (it != memo.end()) return it->second;
    std::uint32_t v = 0;
    while (!(alive & (1u << v))) ++v;
    std::uint32_t rest = alive & ~(1u << v);
    Int d = Int(-g.weight(v)) * delta_rec(g, rest, memo);
    for (std::size_t u : g.adj()[v])
        if (alive & (1u << u)) d -= delta_rec(g, rest & ~(1u << u), memo);
    memo[alive] = d;
    return d;
}

inline std::uint32_t full_mask(const DualGraph& g) {
    return g.size() >= 32 ? ~0u : ((1u << g.size()) - 1);
}

// Vertices on the path from a to b (inclusive), via parent pointers.
inline std::uint32_t path_mask(const DualGraph& g, std::size_t a, std::size_t b) {
    std::vector<int> parent(g.size(), -2);
    std::vector<std::size_t> stack{a};
    parent[a] = -1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t u : g.adj()[v])
            if (parent[u] == -2) {
                parent[u] = static_cast<int>(v);
                stack.push_back(u);
            }
    }
    std::uint32_t m = 0;
    for (std::size_t v = b;; v = static_cast<std::size_t>(parent[v])) {
        m |= 1u << v;
        if (v == a) break;
    }
    return m;
}

} // namespace detail

// Index of the singularity: |det| of the intersection matrix, machine-checked
// against the deletion recursion (two independent code paths).
inline Int graph_index(const DualGraph& g) {
    if (g.size() == 0) throw std::invalid_argument("graph_index: empty graph");
    if (g.size() > 31) throw std::invalid_argument("graph_index: graph too large");
    Rational d = det(g.intersection_matrix());
    std::map<std::uint32_t, Int> memo;
    Int rec = detail::delta_rec(g, detail::full_mask(g), memo);
    Int dz = d.num(); // det of an integer matrix is an integer
    Int expect = (g.size() % 2) ? -dz : dz;
    if (rec != expect) throw std::logic_error("graph_index: recursion/determinant mismatch");
    return abs(dz);
}

// Discrepancy coefficients e_i from (K + sum_j e_j E_j) . E_i = 0, i.e.
// sum_j e_j M_ij = 2 + w_i. Cross-checked against the closed formula
//   1 - e_j = (1/Delta) sum_k (2 - deg v_k) Delta(Gamma - path(v_j, v_k)).
inline Vec coefficients(const DualGraph& g) {
    SymMatrix m = g.intersection_matrix();
    if (!is_negative_definite(m)) throw NotNegativeDefinite{};
    Vec b(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) b[i] = Rational(2 + g.weight(i));
    Vec e = gram_solve(m, b);

    Rational delta{graph_index(g)};
    std::map<std::uint32_t, Int> memo;
    std::uint32_t full = detail::full_mask(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        Rational s(0);
        for (std::size_t k = 0; k < g.size(); ++k) {
            int c = 2 - static_cast<int>(g.adj()[k].size());
            if (c == 0) continue;
            std::uint32_t cut = full & ~detail::path_mask(g, j, k);
            s += Rational(c) * Rational(detail::delta_rec(g, cut, memo));
        }
        if (Rational(1) - e[j] != s / delta)
            throw std::logic_error("coefficients: closed-form cross-check failed");
    }
    return e;
}

// Sum e_i (-2 - E_i^2): the contribution of one contracted singular point to
// K_S^2 = 9 - n + sum contributions.
inline Rational contribution(const DualGraph& g) {
    Vec e = coefficients(g);
    Rational s(0);
    for (std::size_t i = 0; i < g.size(); ++i) s += e[i] * Rational(-2 - g.weight(i));
    return s;
}

enum class SingKind { DuVal, AlmostDuVal, ChainKlt, ForkKlt, NotKlt };

inline std::string to_string(SingKind k) {
    switch (k) {
        case SingKind::DuVal: return "du-val";
        case SingKind::AlmostDuVal: return "almost-du-val";
        case SingKind::ChainKlt: return "chain-klt";
        case SingKind::ForkKlt: return "fork-klt";
        case SingKind::NotKlt: return "not-klt";
    }
    return "?";
}

struct SingularityClass {
    SingKind kind = SingKind::NotKlt;
    Int index = 0;                         // |det|; meaningful when klt
    Rational max_coefficient{0};
    std::optional<Int> spectral_value;     // chains only
    std::array<Int, 3> branch_indexes{};   // forks only, sorted
};

inline bool fork_triple_klt(std::array<Int, 3> t) {
    std::sort(t.begin(), t.end());
    if (t[0] != 2) return false;
    return t[1] == 2 || (t[1] == 3 && t[2] >= 3 && t[2] <= 5);
}

inline Int spectral_value(const DualGraph& g);

inline SingularityClass classify(const DualGraph& g) {
    SingularityClass out;
    SymMatrix m = g.intersection_matrix();
    Rational d = det(m);
    out.index = abs(d.num());
    if (!is_negative_definite(m)) return out; // NotKlt
    if (g.is_fork()) {
        for (int b = 0; b < 3; ++b)
            out.branch_indexes[b] = graph_index(DualGraph::chain(g.branch_weights(b)));
        std::sort(out.branch_indexes.begin(), out.branch_indexes.end());
        if (!fork_triple_klt(out.branch_indexes)) return out; // NotKlt
        out.kind = SingKind::ForkKlt;
    }
    Vec e = coefficients(g);
    out.max_coefficient = *std::max_element(e.begin(), e.end());
    if (out.max_coefficient >= Rational(1)) { // defensive; cannot fire for the shapes above
        out.kind = SingKind::NotKlt;
        return out;
    }
    if (!g.is_fork()) {
        // intrinsic spectral value: the smaller of the two end readings
        Int k = spectral_value(g);
        if (g.size() > 1) k = std::min(k, spectral_value(g.reversed()));
        out.spectral_value = k;
        if (out.max_coefficient.is_zero())
            out.kind = SingKind::DuVal;
        else if (k == 1)
            out.kind = SingKind::AlmostDuVal;
        else
            out.kind = SingKind::ChainKlt;
    } else if (out.max_coefficient.is_zero()) {
        out.kind = SingKind::DuVal;
    }
    return out;
}

// k in e_1 = k/r, read from the chain's first end (vertex 0 of the original
// reading); r is the index.
inline Int spectral_value(const DualGraph& g) {
    if (g.is_fork()) throw std::invalid_argument("spectral_value: chain required");
    Vec e = coefficients(g);
    Rational k = e[0] * Rational(graph_index(g));
    if (!k.is_integer()) throw NonIntegralSpectralValue{};
    return k.num();
}

// ---- boundary attachments / pair status ----

enum class AttachKind { Transversal, Tangent, TwoBranches };

struct Attachment {
    std::size_t vertex = 0;
    AttachKind kind = AttachKind::Transversal;
    int tangent_order = 2;         // for Tangent
    Rational coeff{1};             // boundary coefficient lambda
};

enum class PairState { Dlt, LcNotDlt, NotLc };

inline std::string to_string(PairState s) {
    switch (s) {
        case PairState::Dlt: return "dlt";
        case PairState::LcNotDlt: return "lc-not-dlt";
        case PairState::NotLc: return "not-lc";
    }
    return "?";
}

struct PairReport {
    PairState status = PairState::Dlt;
    bool almost_lc = false;        // all minimal-resolution coefficients <= 1
    bool central_chain_pattern = false; // 3-component chain, boundary through the middle
    Vec min_res_coefficients;
    Vec deeper_coefficients;       // from blow-ups resolving tangencies/nodes
};

/*
 * Status of the pair (singularity, boundary attachments). The minimal
 * resolution coefficients are computed with the boundary terms on the right
 * hand side; non-SNC attachment points (tangencies, nodes of the boundary)
 * are then resolved further, each blow-up producing the coefficient
 * (sum of incident coefficients weighted by multiplicity) - 1.
 */
inline PairReport pair_status(const DualGraph& g, const std::vector<Attachment>& atts) {
    SymMatrix m = g.intersection_matrix();
    if (!is_negative_definite(m)) throw NotNegativeDefinite{};
    Vec b(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) b[i] = Rational(2 + g.weight(i));
    for (const auto& a : atts) {
        if (a.vertex >= g.size()) throw std::invalid_argument("pair_status: bad vertex");
        int mult = a.kind == AttachKind::Transversal ? 1
                 : a.kind == AttachKind::Tangent     ? a.tangent_order
                                                     : 2;
        b[a.vertex] -= a.coeff * Rational(mult);
    }
    PairReport rep;
    rep.min_res_coefficients = gram_solve(m, b);

    for (const auto& a : atts) {
        const Rational& e = rep.min_res_coefficients[a.vertex];
        if (a.kind == AttachKind::Tangent) {
            // contact of order o: o blow-ups, coefficients i*(lambda + e - 1) + ... ;
            // f_i = f_{i-1} + lambda + e - 1 starting from f_0 = 0.
            Rational f(0);
            for (int i = 0; i < a.tangent_order; ++i) {
                f += a.coeff + e - Rational(1);
                rep.deeper_coefficients.push_back(f);
            }
        } else if (a.kind == AttachKind::TwoBranches) {
            rep.deeper_coefficients.push_back(Rational(2) * a.coeff + e - Rational(1));
        }
    }

    Rational one(1);
    bool any_over = false, any_eq = false;
    auto scan = [&](const Vec& v) {
        for (const auto& x : v) {
            if (x > one) any_over = true;
            else if (x == one) any_eq = true;
        }
    };
    scan(rep.min_res_coefficients);
    rep.almost_lc = !any_over;
    scan(rep.deeper_coefficients);
    rep.status = any_over ? PairState::NotLc
               : any_eq   ? PairState::LcNotDlt
                          : PairState::Dlt;
    rep.central_chain_pattern = !g.is_fork() && g.size() == 3 && atts.size() == 1 &&
                                atts[0].kind == AttachKind::Transversal && atts[0].vertex == 1;
    return rep;
}

// lambda (r-1)/r + (1-lambda) k/r: coefficient of the divisor adjacent to a
// boundary curve of coefficient lambda at an index-r, spectral-value-k point.
inline Rational boundary_coefficient(const Int& r, const Int& k, const Rational& lambda) {
    if (k < 0 || k > r - 1) throw std::invalid_argument("boundary_coefficient: need 0 <= k <= r-1");
    Rational rr{r};
    return lambda * Rational(r - 1, r) + (Rational(1) - lambda) * Rational(k, r);
}

// deg Diff_C(0): sum of (1 - 1/r) over dlt contacts, 1 per lc-not-dlt contact
// and per node in the smooth locus.
inline Rational different_degree(const std::vector<std::pair<Int, PairState>>& contacts,
                                 int nodes_in_smooth_locus) {
    Rational s{nodes_in_smooth_locus};
    for (const auto& [r, st] : contacts) {
        if (st == PairState::NotLc) throw std::invalid_argument("different_degree: contact not lc");
        s += st == PairState::Dlt ? Rational(1) - Rational(1, r) : Rational(1);
    }
    return s;
}

// ---- bounded enumeration (Proposition-singlist families) ----

struct KltFamily {
    std::string name;                      // e.g. "(3,A_j)"
    bool parametrized = false;
    long param_min = 0;
    std::optional<long> param_max;         // nullopt = unbounded
    std::string coeff_formula;             // human-readable closed formula
    std::string erratum;                   // known print erratum, if any
    std::function<DualGraph(long)> instantiate;
    std::function<Rational(long)> coeff;   // maximal coefficient
};

namespace detail {

inline std::vector<int> rep2(long n) { return std::vector<int>(static_cast<std::size_t>(n), -2); }

inline std::vector<int> chain_3a(long j) {
    std::vector<int> w{-3};
    auto t = rep2(j);
    w.insert(w.end(), t.begin(), t.end());
    return w;
}

inline std::vector<KltFamily> singlist_master() {
    std::vector<KltFamily> fams;
    fams.push_back({"A_n", true, 1, std::nullopt, "0", "",
                    [](long n) { return DualGraph::chain(rep2(n)); },
                    [](long) { return Rational(0); }});
    fams.push_back({"(3,A_j)", true, 0, std::nullopt, "(j+1)/(2j+3)",
                    "printed as (j+1)/(2j+1); the linear system gives (j+1)/(2j+3)",
                    [](long j) { return DualGraph::chain(chain_3a(j)); },
                    [](long j) { return Rational(j + 1, 2 * j + 3); }});
    fams.push_back({"(4)", false, 0, 0, "1/2", "",
                    [](long) { return DualGraph::chain({-4}); },
                    [](long) { return Rational(1, 2); }});
    fams.push_back({"(3,A_j,3)", true, 0, std::nullopt, "1/2", "",
                    [](long j) {
                        auto w = chain_3a(j);
                        w.push_back(-3);
                        return DualGraph::chain(w);
                    },
                    [](long) { return Rational(1, 2); }});
    fams.push_back({"(2,3,2)", false, 0, 0, "1/2", "",
                    [](long) { return DualGraph::chain({-2, -3, -2}); },
                    [](long) { return Rational(1, 2); }});
    fams.push_back({"fork((2),(2),(A_j,3))", true, 0, std::nullopt, "1/2", "",
                    [](long j) {
                        auto br = rep2(j);
                        br.push_back(-3);
                        return DualGraph::fork(-2, {{{-2}, {-2}, br}});
                    },
                    [](long) { return Rational(1, 2); }});
    fams.push_back({"(2,3,A_j)", true, 2, 4, "(2j+2)/(3j+5)", "",
                    [](long j) {
                        std::vector<int> w{-2, -3};
                        auto t = rep2(j);
                        w.insert(w.end(), t.begin(), t.end());
                        return DualGraph::chain(w);
                    },
                    [](long j) { return Rational(2 * j + 2, 3 * j + 5); }});
    fams.push_back({"(4,2)", false, 0, 0, "4/7", "",
                    [](long) { return DualGraph::chain({-4, -2}); },
                    [](long) { return Rational(4, 7); }});
    return fams;
}

} // namespace detail

/*
 * Complete list of klt dual-graph families with maximal coefficient below the
 * bound. The classification backing this list stops at 3/5; larger bounds are
 * rejected rather than answered incompletely. Parametrized families whose
 * coefficients approach a limit below the bound stay unbounded; otherwise the
 * parameter range is truncated at the bound.
 */
inline std::vector<KltFamily> enumerate_klt_bounded(const Rational& e_max, bool include_equal) {
    if (e_max <= Rational(0) || e_max > Rational(3, 5))
        throw std::domain_error("enumerate_klt_bounded: bound must lie in (0, 3/5]");
    auto ok = [&](const Rational& e) { return include_equal ? e <= e_max : e < e_max; };
    std::vector<KltFamily> out;
    for (auto& f : detail::singlist_master()) {
        if (!f.parametrized || f.name == "A_n") {
            if (ok(f.coeff(f.param_min))) out.push_back(f);
            continue;
        }
        if (!ok(f.coeff(f.param_min))) {
            // coefficient is nondecreasing in the parameter for every family here
            continue;
        }
        if (f.param_max) {
            long hi = f.param_min;
            while (hi < *f.param_max && ok(f.coeff(hi + 1))) ++hi;
            f.param_max = hi;
            out.push_back(f);
            continue;
        }
        // unbounded family: truncate only if some instance violates the bound
        long j = f.param_min;
        bool truncated = false;
        for (; j < f.param_min + 4096; ++j)
            if (!ok(f.coeff(j + 1))) {
                truncated = true;
                break;
            }
        if (truncated) f.param_max = j;
        out.push_back(f);
    }
    return out;
}

} // namespace ldpkit
