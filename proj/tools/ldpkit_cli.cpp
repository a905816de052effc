// ldpkit command-line interface: JSON in, JSON out, deterministic output.
//
// Exit codes: 0 success / PASS, 1 mismatch / FAIL / not ample, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <ldpkit/atlas.hpp>
#include <ldpkit/dioph.hpp>
#include <ldpkit/dualgraph.hpp>
#include <ldpkit/hunt.hpp>
#include <ldpkit/surface.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ldpkit::Rational;
using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool g_pretty = false;

void emit(const Json& j) {
    std::cout << (g_pretty ? j.dump(2) : j.dump()) << "\n";
}

Json rat(const Rational& r) { return r.str(); }

Json big(const ldpkit::Int& n) { return n.convert_to<long long>(); }

std::vector<int> parse_weights(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw UsageError("empty weight in list: " + csv);
        int w = std::stoi(tok);
        if (w > 0) w = -w; // "3,2" and "-3,-2" both accepted
        out.push_back(w);
    }
    if (out.empty()) throw UsageError("empty weight list");
    return out;
}

// fork syntax: "center;branch|branch|branch", e.g. "-2;-2|-2|-3,-2"
ldpkit::DualGraph parse_fork(const std::string& spec) {
    auto semi = spec.find(';');
    if (semi == std::string::npos) throw UsageError("fork needs 'center;b|b|b': " + spec);
    int center = std::stoi(spec.substr(0, semi));
    if (center > 0) center = -center;
    std::array<std::vector<int>, 3> branches;
    std::stringstream ss(spec.substr(semi + 1));
    std::string tok;
    std::size_t b = 0;
    while (std::getline(ss, tok, '|')) {
        if (b >= 3) throw UsageError("fork needs exactly three branches");
        branches[b++] = parse_weights(tok);
    }
    if (b != 3) throw UsageError("fork needs exactly three branches");
    return ldpkit::DualGraph::fork(center, branches);
}

ldpkit::DualGraph graph_from(const std::string& chain, const std::string& fork) {
    if (chain.empty() == fork.empty())
        throw UsageError("exactly one of --chain and --fork is required");
    if (!chain.empty()) return ldpkit::DualGraph::chain(parse_weights(chain));
    return parse_fork(fork);
}

Json read_json_file(const std::string& path) {
    Json j;
    if (path == "-") {
        std::cin >> j;
        return j;
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open file: " + path);
    in >> j;
    return j;
}

Rational rat_of(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    return Rational::parse(j.get<std::string>());
}

ldpkit::Int int_of(const Json& j) {
    if (j.is_number_integer()) return ldpkit::Int(j.get<long long>());
    return ldpkit::Int(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// surface recipes from JSON
// ---------------------------------------------------------------------------

ldpkit::CurveConfig ambient_config(const std::string& name) {
    if (name == "p2" || name == "P2") return ldpkit::CurveConfig::p2();
    if ((name.size() >= 2) && (name[0] == 'f' || name[0] == 'F'))
        return ldpkit::CurveConfig::hirzebruch(std::stoi(name.substr(1)));
    throw UsageError("unknown ambient (use p2 or f<n>): " + name);
}

struct SurfaceSpec {
    ldpkit::CurveConfig cfg;
    std::vector<std::vector<std::string>> groups;
};

SurfaceSpec build_surface(const Json& doc) {
    SurfaceSpec out{ambient_config(doc.at("ambient").get<std::string>()), {}};
    if (doc.contains("curves"))
        for (const auto& c : doc.at("curves")) {
            ldpkit::Class cls;
            for (const auto& x : c.at("class")) cls.push_back(int_of(x));
            out.cfg.add_curve(c.at("name").get<std::string>(), cls);
        }
    if (doc.contains("blowups"))
        for (const auto& b : doc.at("blowups")) {
            ldpkit::BlowupInstruction instr;
            for (const auto& t : b.at("through"))
                instr.through.push_back({t.at(0).get<std::string>(), int_of(t.at(1))});
            if (b.contains("near")) instr.infinitely_near = b.at("near").get<std::string>();
            instr.label = b.at("label").get<std::string>();
            out.cfg = out.cfg.blow_up(instr);
        }
    if (doc.contains("groups"))
        for (const auto& g : doc.at("groups"))
            out.groups.push_back(g.get<std::vector<std::string>>());
    return out;
}

Json curve_table(const ldpkit::CurveConfig& cfg) {
    Json curves = Json::object();
    for (const auto& [name, cls] : cfg.curves()) {
        Json c = Json::object();
        Json vec = Json::array();
        for (const auto& x : cls) vec.push_back(big(x));
        c["class"] = vec;
        c["self"] = rat(cfg.ip(name, name));
        c["k"] = rat(cfg.k_dot(name));
        c["pa"] = rat(cfg.pa(cls));
        curves[name] = c;
    }
    return curves;
}

Json surface_report(const ldpkit::CurveConfig& cfg) {
    Json j = Json::object();
    j["rank"] = cfg.rank();
    j["k2"] = rat(cfg.k2());
    j["basis"] = cfg.basis();
    j["curves"] = curve_table(cfg);
    return j;
}

Json contraction_report(const ldpkit::ContractionReport& rep) {
    Json j = Json::object();
    Json comps = Json::array();
    for (const auto& c : rep.components) {
        Json cc = Json::object();
        cc["labels"] = c.labels;
        cc["singularity"] = c.minus_one ? "smooth" : ldpkit::detail::sing_name(c.graph);
        Json coeffs = Json::array();
        for (const auto& e : c.coefficients) coeffs.push_back(rat(e));
        cc["coefficients"] = coeffs;
        comps.push_back(cc);
    }
    j["components"] = comps;
    j["rho_s"] = rep.rho_s;
    j["k2_s"] = rat(rep.k2_s);
    Json pushed = Json::object();
    for (const auto& [name, pc] : rep.pushed) {
        Json p = Json::object();
        p["self"] = rat(pc.self);
        p["k"] = rat(pc.k_dot);
        pushed[name] = p;
    }
    j["pushed"] = pushed;
    return j;
}

// ---------------------------------------------------------------------------
// sing subcommands
// ---------------------------------------------------------------------------

Json classify_report(const ldpkit::DualGraph& g) {
    ldpkit::SingularityClass cls = ldpkit::classify(g);
    Json j = Json::object();
    j["class"] = ldpkit::to_string(cls.kind);
    j["index"] = big(cls.index);
    j["max_coefficient"] = rat(cls.max_coefficient);
    if (cls.spectral_value) j["spectral_value"] = big(*cls.spectral_value);
    if (g.is_fork()) {
        Json b = Json::array();
        for (const auto& x : cls.branch_indexes) b.push_back(big(x));
        j["branch_indexes"] = b;
    }
    return j;
}

int run_sing_coeffs(const ldpkit::DualGraph& g) {
    ldpkit::Vec e = ldpkit::coefficients(g);
    Json j = Json::object();
    Json cs = Json::array();
    for (const auto& x : e) cs.push_back(rat(x));
    j["coefficients"] = cs;
    j["index"] = big(ldpkit::graph_index(g));
    j["class"] = ldpkit::to_string(ldpkit::classify(g).kind);
    emit(j);
    return 0;
}

ldpkit::Attachment parse_attachment(const std::string& spec) {
    // vertex,kind,coeff[,order]   e.g. "0,transversal,1" or "1,tangent,2/3,3"
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (parts.size() < 3) throw UsageError("attachment needs vertex,kind,coeff[,order]");
    ldpkit::Attachment a;
    a.vertex = static_cast<std::size_t>(std::stoul(parts[0]));
    const std::string& k = parts[1];
    if (k == "transversal") a.kind = ldpkit::AttachKind::Transversal;
    else if (k == "tangent") a.kind = ldpkit::AttachKind::Tangent;
    else if (k == "two-branches") a.kind = ldpkit::AttachKind::TwoBranches;
    else throw UsageError("unknown attachment kind: " + k);
    a.coeff = Rational::parse(parts[2]);
    if (parts.size() > 3) a.tangent_order = std::stoi(parts[3]);
    return a;
}

int run_pair_status(const ldpkit::DualGraph& g, const std::vector<std::string>& att_specs) {
    std::vector<ldpkit::Attachment> atts;
    for (const auto& s : att_specs) atts.push_back(parse_attachment(s));
    ldpkit::PairReport rep = ldpkit::pair_status(g, atts);
    Json j = Json::object();
    j["status"] = ldpkit::to_string(rep.status);
    j["almost_lc"] = rep.almost_lc;
    j["central_chain_pattern"] = rep.central_chain_pattern;
    Json mc = Json::array();
    for (const auto& e : rep.min_res_coefficients) mc.push_back(rat(e));
    j["min_res_coefficients"] = mc;
    Json dc = Json::array();
    for (const auto& e : rep.deeper_coefficients) dc.push_back(rat(e));
    j["deeper_coefficients"] = dc;
    emit(j);
    return 0;
}

int run_enumerate(const std::string& emax, bool include_equal) {
    auto fams = ldpkit::enumerate_klt_bounded(Rational::parse(emax), include_equal);
    Json j = Json::object();
    Json rows = Json::array();
    for (const auto& f : fams) {
        Json r = Json::object();
        r["name"] = f.name;
        r["parametrized"] = f.parametrized;
        if (f.parametrized) {
            r["param_min"] = f.param_min;
            if (f.param_max) r["param_max"] = *f.param_max;
        }
        r["coefficient"] = f.coeff_formula;
        if (!f.erratum.empty()) r["erratum"] = f.erratum;
        rows.push_back(r);
    }
    j["families"] = rows;
    emit(j);
    return 0;
}

// ---------------------------------------------------------------------------
// hunt subcommands
// ---------------------------------------------------------------------------

ldpkit::LogPair parse_log_pair(const Json& doc) {
    ldpkit::LogPair pair;
    for (const auto& [name, v] : doc.at("boundary").items())
        pair.boundary[name] = rat_of(v);
    if (doc.contains("points"))
        for (const auto& p : doc.at("points")) {
            ldpkit::SingularPointData pt{p.at("name").get<std::string>(),
                                         ldpkit::DualGraph::chain({-2}),
                                         {}};
            if (p.contains("chain"))
                pt.graph = ldpkit::DualGraph::chain(p.at("chain").get<std::vector<int>>());
            else
                pt.graph = parse_fork(p.at("fork").get<std::string>());
            if (p.contains("attachments"))
                for (const auto& a : p.at("attachments")) {
                    ldpkit::BoundaryRef ref;
                    ref.curve = a.at("curve").get<std::string>();
                    ref.vertex = a.at("vertex").get<std::size_t>();
                    std::string kind = a.value("kind", "transversal");
                    ref.kind = kind == "tangent"      ? ldpkit::AttachKind::Tangent
                             : kind == "two-branches" ? ldpkit::AttachKind::TwoBranches
                                                      : ldpkit::AttachKind::Transversal;
                    ref.order = a.value("order", 2);
                    pt.atts.push_back(ref);
                }
            pair.points.push_back(pt);
        }
    if (doc.contains("smooth_points"))
        for (const auto& p : doc.at("smooth_points")) {
            ldpkit::SmoothPointData sp{p.at("name").get<std::string>(), {}};
            for (const auto& m : p.at("mults"))
                sp.mults.push_back({m.at(0).get<std::string>(), int_of(m.at(1))});
            pair.smooth_points.push_back(sp);
        }
    return pair;
}

int run_hunt_status(const std::string& file) {
    ldpkit::FlushReport rep = ldpkit::flush_level_status(parse_log_pair(read_json_file(file)));
    Json j = Json::object();
    j["status"] = ldpkit::to_string(rep.status);
    j["m"] = rat(rep.m);
    if (!rep.witness.empty()) {
        j["witness"] = rep.witness;
        j["witness_coefficient"] = rat(rep.witness_coefficient);
    }
    emit(j);
    return 0;
}

int run_hunt_step(const std::string& file, const std::string& extract, const std::string& sigma,
                  bool level) {
    Json doc = read_json_file(file);
    SurfaceSpec spec = build_surface(doc);
    ldpkit::HuntState st;
    st.resolution = spec.cfg;
    st.contracted = doc.at("contracted").get<std::vector<std::string>>();
    if (doc.contains("boundary"))
        for (const auto& [name, v] : doc.at("boundary").items()) st.boundary[name] = rat_of(v);
    st.level_mode = level;

    ldpkit::HuntOutcome out = ldpkit::hunt_step(st, extract, sigma);
    Json j = Json::object();
    if (const auto* net = std::get_if<ldpkit::NetResult>(&out)) {
        j["result"] = "net";
        j["d"] = rat(net->d);
        j["lambda"] = rat(net->lambda);
        j["a1"] = rat(net->a1);
        j["small_degree"] = net->small_degree;
    } else {
        const auto& next = std::get<ldpkit::HuntState>(out);
        j["result"] = "birational";
        j["stage"] = next.stage;
        j["lambda"] = rat(next.ledger.back().lambda);
        j["contracted"] = next.contracted;
        Json b = Json::object();
        for (const auto& [name, a] : next.boundary) b[name] = rat(a);
        j["boundary"] = b;
    }
    emit(j);
    return 0;
}

int run_contraction_table(long gmax, long rmax) {
    Json rows = Json::array();
    bool ok = true;
    for (const auto& [family, label, param] : ldpkit::contraction_table_rows(gmax, rmax)) {
        ldpkit::ContractionResult res = ldpkit::classify_contraction(family, label, param);
        Json r = Json::object();
        r["family"] = res.family;
        r["label"] = res.label;
        r["param"] = res.param;
        Json rel = Json::object();
        rel["cc"] = rat(res.cc);
        rel["cd"] = rat(res.cd);
        rel["rhs"] = rat(res.rhs);
        r["relation"] = rel;
        r["singularities"] = res.singularities;
        r["validated"] = res.validated;
        ok = ok && res.validated;
        rows.push_back(r);
    }
    Json j = Json::object();
    j["rows"] = rows;
    j["ok"] = ok;
    emit(j);
    return ok ? 0 : 1;
}

Json net_fiber_json(const ldpkit::NetFiber& f) {
    Json r = Json::object();
    r["row"] = f.row;
    r["description"] = f.description;
    r["weights"] = f.weights;
    Json mult = Json::array();
    for (const auto& m : f.multiplicities) mult.push_back(big(m));
    r["multiplicities"] = mult;
    r["m"] = big(f.m);
    r["fiber_squared"] = "0"; // net_fiber_data throws unless F^2 = 0 and F.C_i = 0
    return r;
}

int run_net_fiber(std::optional<int> row, long param) {
    Json j = Json::object();
    Json rows = Json::array();
    if (row) {
        rows.push_back(net_fiber_json(ldpkit::net_fiber_data(*row, param)));
    } else {
        for (int r = 1; r <= 8; ++r) {
            std::vector<long> params = r == 3 ? std::vector<long>{0, 1, 2, 3, 4}
                        : r == 5              ? std::vector<long>{1, 2, 3, 4}
                                              : std::vector<long>{0};
            for (long p : params) rows.push_back(net_fiber_json(ldpkit::net_fiber_data(r, p)));
        }
    }
    j["rows"] = rows;
    emit(j);
    return 0;
}

int run_fence(const std::string& alpha, const std::string& beta, const std::string& a,
              const std::string& b) {
    ldpkit::FenceResult res =
        ldpkit::fence_solve(Rational::parse(alpha), Rational::parse(beta), Rational::parse(a),
                            Rational::parse(b));
    Json j = Json::object();
    j["balanced"] = res.balanced;
    if (res.x_squared) j["x_squared"] = rat(*res.x_squared);
    if (res.ample_strict) j["ample_strict"] = *res.ample_strict;
    emit(j);
    return 0;
}

// ---------------------------------------------------------------------------
// dioph subcommands
// ---------------------------------------------------------------------------

Json solutions_json(const ldpkit::Scenario& s, const ldpkit::SolutionSet& set) {
    Json sols = Json::array();
    for (const auto& row : ldpkit::projected_solutions(s, set)) {
        Json r = Json::object();
        for (std::size_t i = 0; i < s.output_keys.size(); ++i) r[s.output_keys[i]] = row[i];
        sols.push_back(r);
    }
    return sols;
}

Json certificates_json(const ldpkit::SolutionSet& set) {
    Json certs = Json::array();
    for (const auto& [pt, rep] : set.certificates) {
        Json c = Json::object();
        Json params = Json::object();
        for (const auto& [k, v] : pt) params[k] = v;
        c["params"] = params;
        c["denominator"] = big(rep.denominator);
        Json up = Json::array();
        for (const auto& p : rep.unreachable_primes) up.push_back(big(p));
        c["unreachable_primes"] = up;
        Json vo = Json::array();
        for (const auto& p : rep.valuation_obstructions) vo.push_back(big(p));
        c["valuation_obstructions"] = vo;
        certs.push_back(c);
    }
    return certs;
}

int run_dioph_solve(const std::string& name, bool oracle) {
    ldpkit::Scenario s;
    try {
        s = ldpkit::find_scenario(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ldpkit::SolutionSet set = ldpkit::solve_scenario(s);
    if (oracle) {
        ldpkit::SolutionSet naive = ldpkit::solve_scenario_naive(s);
        if (ldpkit::projected_solutions(s, set) != ldpkit::projected_solutions(s, naive)) {
            Json j = Json::object();
            j["status"] = "MISMATCH";
            j["solver"] = solutions_json(s, set);
            j["oracle"] = solutions_json(s, naive);
            emit(j);
            return 1;
        }
    }
    Json j = Json::object();
    j["solutions"] = solutions_json(s, set);
    if (set.solutions.empty()) j["certificates"] = certificates_json(set);
    emit(j);
    return 0;
}

int run_dioph_list() {
    Json names = Json::array();
    for (const auto& s : ldpkit::scenario_registry()) names.push_back(s.name);
    Json j = Json::object();
    j["scenarios"] = names;
    emit(j);
    return 0;
}

int run_dioph_denominator(const std::string& k2, const std::vector<std::string>& chains) {
    std::vector<ldpkit::MenuInstance> menu;
    for (const auto& c : chains) {
        ldpkit::DualGraph g = ldpkit::DualGraph::chain(parse_weights(c));
        menu.push_back(ldpkit::make_menu_instance(ldpkit::detail::sing_name(g),
                                                  "n" + std::to_string(menu.size()), g));
    }
    ldpkit::DenominatorReport rep = ldpkit::denominator_report(Rational::parse(k2), menu);
    Json j = Json::object();
    j["denominator"] = big(rep.denominator);
    Json ps = Json::array();
    for (const auto& p : rep.primes) ps.push_back(big(p));
    j["primes"] = ps;
    Json up = Json::array();
    for (const auto& p : rep.unreachable_primes) up.push_back(big(p));
    j["unreachable_primes"] = up;
    Json vo = Json::array();
    for (const auto& p : rep.valuation_obstructions) vo.push_back(big(p));
    j["valuation_obstructions"] = vo;
    j["certifies"] = rep.certifies();
    emit(j);
    return 0;
}

// ---------------------------------------------------------------------------
// atlas subcommands
// ---------------------------------------------------------------------------

const ldpkit::Registry& registry() {
    static ldpkit::Registry reg = ldpkit::load_registry();
    return reg;
}

int run_atlas_list() {
    Json rows = Json::array();
    for (const auto& e : registry().constructions) {
        Json r = Json::object();
        r["id"] = e.id;
        r["kind"] = e.kind;
        r["status"] = e.status;
        r["characteristic"] = e.characteristic;
        rows.push_back(r);
    }
    Json j = Json::object();
    j["constructions"] = rows;
    emit(j);
    return 0;
}

int run_atlas_verify(const std::string& id) {
    ldpkit::ConstructionEntry entry;
    try {
        entry = ldpkit::find_construction(registry(), id);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ldpkit::VerifyReport rep = ldpkit::verify(entry);
    Json j = Json::object();
    j["status"] = rep.status;
    if (rep.status == "PASS") {
        j["k2"] = rat(rep.k2);
        j["singularities"] = rep.singularities;
    } else if (rep.status == "FAIL") {
        j["diffs"] = rep.diffs;
    }
    emit(j);
    return rep.status == "FAIL" ? 1 : 0;
}

int run_atlas_gorenstein() {
    bool ok = true;
    Json bad = Json::array();
    for (const auto& e : registry().gorenstein)
        if (!ldpkit::gorenstein_check(e)) {
            ok = false;
            Json r = Json::object();
            r["singularities"] = e.singularities;
            bad.push_back(r);
        }
    Json j = Json::object();
    j["entries"] = registry().gorenstein.size();
    j["ok"] = ok;
    if (!ok) j["failures"] = bad;
    emit(j);
    return ok ? 0 : 1;
}

int run_atlas_elliptic() {
    bool ok = true;
    Json bad = Json::array();
    for (const auto& e : registry().elliptic)
        if (!ldpkit::elliptic_row_check(e)) {
            ok = false;
            Json r = Json::object();
            r["fibers"] = e.fibers;
            bad.push_back(r);
        }
    Json j = Json::object();
    j["entries"] = registry().elliptic.size();
    j["ok"] = ok;
    if (!ok) j["failures"] = bad;
    emit(j);
    return ok ? 0 : 1;
}

int run_atlas_audit() {
    ldpkit::BogomolovAudit audit = ldpkit::audit_bogomolov(registry());
    Json rows = Json::array();
    for (const auto& r : audit.rows) {
        Json row = Json::object();
        row["id"] = r.id;
        row["characteristic"] = r.characteristic;
        row["points"] = r.points;
        row["flagged"] = r.flagged;
        rows.push_back(row);
    }
    Json j = Json::object();
    j["ok"] = audit.ok;
    j["rows"] = rows;
    emit(j);
    return audit.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ldpkit: exact calculational toolkit for rank-one log del Pezzo surfaces"};
    app.require_subcommand(1);
    app.add_flag("--pretty", g_pretty, "indent JSON output");

    std::string chain, fork, emax = "3/5", file, extract, sigma;
    std::string alpha, beta, fa, fb, k2;
    std::vector<std::string> attachments, chains;
    bool include_equal = false, oracle = false, level = false;
    long gmax = 6, rmax = 6, param = 0;
    std::optional<int> row;
    std::string ambient = "p2", name;

    auto add_graph_opts = [&](CLI::App* cmd) {
        cmd->add_option("--chain", chain, "chain weights, e.g. -3,-2")->expected(1);
        cmd->add_option("--fork", fork, "fork spec center;b|b|b")->expected(1);
    };

    // ---- sing ----
    auto* sing = app.add_subcommand("sing", "klt surface singularity calculus");
    sing->require_subcommand(1);
    auto* s_classify = sing->add_subcommand("classify", "classify a dual graph");
    add_graph_opts(s_classify);
    auto* s_coeffs = sing->add_subcommand("coeffs", "discrepancy coefficients");
    add_graph_opts(s_coeffs);
    auto* s_index = sing->add_subcommand("index", "index (|det|) of a dual graph");
    add_graph_opts(s_index);
    auto* s_spectral = sing->add_subcommand("spectral", "spectral value of a chain");
    add_graph_opts(s_spectral);
    auto* s_enum = sing->add_subcommand("enumerate", "klt families with coefficient below a bound");
    s_enum->add_option("--max", emax, "coefficient bound (default 3/5)");
    s_enum->add_flag("--include-equal", include_equal, "include coefficient == bound");
    auto* s_pair = sing->add_subcommand("pair-status", "dlt / lc status of a boundary pair");
    add_graph_opts(s_pair);
    s_pair->add_option("--attach", attachments, "attachment vertex,kind,coeff[,order]");

    // ---- surface ----
    auto* surface = app.add_subcommand("surface", "Picard-lattice blow-up calculus");
    surface->require_subcommand(1);
    auto* su_new = surface->add_subcommand("new", "fresh ambient surface");
    su_new->add_option("--ambient", ambient, "p2 or f<n>");
    auto* su_blow = surface->add_subcommand("blowup", "run a blow-up recipe");
    su_blow->add_option("--file", file, "recipe JSON (or - for stdin)")->required();
    auto* su_contract = surface->add_subcommand("contract", "contract groups of curves");
    su_contract->add_option("--file", file, "recipe JSON with groups")->required();
    auto* su_ample = surface->add_subcommand("ample", "rank-one ampleness of -K");
    su_ample->add_option("--file", file, "recipe JSON with groups")->required();

    // ---- hunt ----
    auto* hunt = app.add_subcommand("hunt", "two-ray game machinery");
    hunt->require_subcommand(1);
    auto* h_status = hunt->add_subcommand("status", "flush / level status of a log pair");
    h_status->add_option("--file", file, "log pair JSON")->required();
    auto* h_step = hunt->add_subcommand("step", "one hunt step");
    h_step->add_option("--file", file, "hunt state JSON")->required();
    h_step->add_option("--extract", extract, "divisor to extract")->required();
    h_step->add_option("--sigma", sigma, "extremal curve")->required();
    h_step->add_flag("--level", level, "level mode (no rescaling)");
    auto* h_table = hunt->add_subcommand("contraction-table", "validate the contraction tables");
    h_table->add_option("--gmax", gmax, "genus bound (default 6)");
    h_table->add_option("--rmax", rmax, "r bound (default 6)");
    auto* h_net = hunt->add_subcommand("net-fiber", "net-fiber table rows");
    h_net->add_option("--row", row, "single row 1..8");
    h_net->add_option("--param", param, "row parameter");
    auto* h_fence = hunt->add_subcommand("fence", "smooth fence calculus");
    h_fence->add_option("--alpha", alpha)->required();
    h_fence->add_option("--beta", beta)->required();
    h_fence->add_option("--a", fa)->required();
    h_fence->add_option("--b", fb)->required();

    // ---- dioph ----
    auto* dioph = app.add_subcommand("dioph", "exhaustive exact constraint searches");
    dioph->require_subcommand(1);
    auto* d_solve = dioph->add_subcommand("solve", "solve a registered scenario");
    d_solve->add_option("scenario", name, "scenario name")->required();
    d_solve->add_flag("--oracle", oracle, "cross-check against the naive brute force");
    dioph->add_subcommand("list", "list registered scenarios");
    auto* d_den = dioph->add_subcommand("denominator", "denominator-prime obstruction report");
    d_den->add_option("--k2", k2, "target K^2")->required();
    d_den->add_option("--menu-chain", chains, "menu chain weights (repeatable)");

    // ---- atlas ----
    auto* atlas = app.add_subcommand("atlas", "construction registry");
    atlas->require_subcommand(1);
    atlas->add_subcommand("list", "list registered constructions");
    auto* a_verify = atlas->add_subcommand("verify", "verify a construction");
    a_verify->add_option("id", name, "construction id")->required();
    atlas->add_subcommand("gorenstein", "check the Gorenstein table");
    atlas->add_subcommand("elliptic", "check the extremal elliptic table");
    atlas->add_subcommand("audit-bogomolov", "audit the Bogomolov bound over the registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (s_classify->parsed()) {
            emit(classify_report(graph_from(chain, fork)));
            return 0;
        }
        if (s_coeffs->parsed()) return run_sing_coeffs(graph_from(chain, fork));
        if (s_index->parsed()) {
            Json j = Json::object();
            j["index"] = big(ldpkit::graph_index(graph_from(chain, fork)));
            emit(j);
            return 0;
        }
        if (s_spectral->parsed()) {
            ldpkit::DualGraph g = graph_from(chain, fork);
            ldpkit::Int k = ldpkit::spectral_value(g);
            Json j = Json::object();
            j["spectral_value"] = big(k);
            j["index"] = big(ldpkit::graph_index(g));
            emit(j);
            return 0;
        }
        if (s_enum->parsed()) return run_enumerate(emax, include_equal);
        if (s_pair->parsed()) return run_pair_status(graph_from(chain, fork), attachments);

        if (su_new->parsed()) {
            emit(surface_report(ambient_config(ambient)));
            return 0;
        }
        if (su_blow->parsed()) {
            emit(surface_report(build_surface(read_json_file(file)).cfg));
            return 0;
        }
        if (su_contract->parsed() || su_ample->parsed()) {
            SurfaceSpec spec = build_surface(read_json_file(file));
            if (spec.groups.empty()) throw UsageError("recipe JSON needs a groups array");
            ldpkit::ContractionReport rep = ldpkit::contract(spec.cfg, spec.groups);
            Json j = contraction_report(rep);
            if (su_ample->parsed()) {
                bool ample = ldpkit::ample_check(rep);
                j["ample"] = ample;
                emit(j);
                return ample ? 0 : 1;
            }
            emit(j);
            return 0;
        }

        if (h_status->parsed()) return run_hunt_status(file);
        if (h_step->parsed()) return run_hunt_step(file, extract, sigma, level);
        if (h_table->parsed()) return run_contraction_table(gmax, rmax);
        if (h_net->parsed()) return run_net_fiber(row, param);
        if (h_fence->parsed()) return run_fence(alpha, beta, fa, fb);

        if (d_solve->parsed()) return run_dioph_solve(name, oracle);
        if (dioph->get_subcommand("list")->parsed()) return run_dioph_list();
        if (d_den->parsed()) return run_dioph_denominator(k2, chains);

        if (atlas->get_subcommand("list")->parsed()) return run_atlas_list();
        if (a_verify->parsed()) return run_atlas_verify(name);
        if (atlas->get_subcommand("gorenstein")->parsed()) return run_atlas_gorenstein();
        if (atlas->get_subcommand("elliptic")->parsed()) return run_atlas_elliptic();
        if (atlas->get_subcommand("audit-bogomolov")->parsed()) return run_atlas_audit();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "no subcommand executed\n";
    return 2;
}
