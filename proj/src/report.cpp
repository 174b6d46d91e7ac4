#include "towerlab/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

namespace towerlab {

namespace {

constexpr const char* kToolName = "towerlab";
constexpr const char* kToolVersion = "1.0.0";

std::string big_str(const BigInt& x) { return x.str(); }

std::vector<std::string> vertex_names(const TowerGraph& G) {
    std::vector<std::string> names;
    names.reserve(G.vertices.size());
    for (const auto& P : G.vertices) names.push_back(point_to_string(G.ambient, P));
    return names;
}

Json name_list(const std::vector<std::string>& names, const std::vector<int>& idx) {
    Json out = Json::array();
    for (int i : idx) out.push_back(names[static_cast<std::size_t>(i)]);
    return out;
}

Json completeness_json(const Completeness& c) {
    Json j;
    j["forward"] = c.forward;
    j["backward"] = c.backward;
    j["complete"] = c.complete();
    return j;
}

Correspondence corr_in_ambient(const TowerInstance& inst, const TowerGraph& G) {
    return inst.corr.embedded(Embedding(inst.field, G.ambient));
}

std::vector<ProjPoint> core_points(const TowerGraph& G, const std::vector<int>& core) {
    std::vector<ProjPoint> pts;
    pts.reserve(core.size());
    for (int v : core) pts.push_back(G.vertices[static_cast<std::size_t>(v)]);
    return pts;
}

const ComponentInfo* component_of(const ComponentCensus& cen, int vertex) {
    for (const auto& comp : cen.components)
        if (std::binary_search(comp.vertices.begin(), comp.vertices.end(), vertex)) return &comp;
    return nullptr;
}

}  // namespace

Json make_envelope(const std::string& command, Json inputs, Json results) {
    Json j;
    j["command"] = command;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["inputs"] = std::move(inputs);
    j["results"] = std::move(results);
    return j;
}

std::string render_report(const Json& report) { return report.dump(2) + "\n"; }

void enforce_tower_hypotheses(const Correspondence& corr, bool allow_unequal,
                              bool require_equal) {
    int d1 = corr.d1(), d2 = corr.d2();
    if (d1 < 2 && d2 < 2)
        throw HypothesisViolation("degree-1 correspondences generate no tower growth");
    if (d1 != d2) {
        if (require_equal)
            throw HypothesisViolation("this computation needs equal projection degrees, got (" +
                                      std::to_string(d1) + ", " + std::to_string(d2) + ")");
        if (!allow_unequal)
            throw HypothesisViolation("projection degrees differ (" + std::to_string(d1) + ", " +
                                      std::to_string(d2) +
                                      "); pass --allow-unequal to proceed with zero growth");
    }
}

TowerGraph build_level(const TowerInstance& inst, int level) {
    if (level < 1) throw Error("level must be positive");
    auto r = static_cast<std::uint32_t>(level);
    if (inst.f && inst.g) return build_graph_separated(inst.field, *inst.f, *inst.g, r);
    return build_graph(inst.field, inst.corr, r);
}

CensusRun run_census(const TowerInstance& inst, int level, const std::string& spec_path,
                     bool allow_unequal) {
    enforce_tower_hypotheses(inst.corr, allow_unequal);
    TowerGraph G = build_level(inst, level);
    ComponentCensus cen = census(G);
    auto names = vertex_names(G);
    Correspondence amb = corr_in_ambient(inst, G);

    Json comps = Json::array();
    for (const auto& c : cen.components) {
        Json jc;
        jc["size"] = c.vertices.size();
        jc["strongly_connected"] = c.strongly_connected;
        jc["d_regular"] = c.d_regular;
        jc["singular"] = c.singular;
        if (c.primitive) jc["primitive"] = *c.primitive;
        else jc["primitive"] = nullptr;
        jc["vertices"] = name_list(names, c.vertices);
        comps.push_back(std::move(jc));
    }

    Json regular = Json::array();
    for (const auto& rc : cen.regular_components) regular.push_back(name_list(names, rc));

    Json core_json = nullptr;
    if (cen.regular_core) {
        const auto& core = *cen.regular_core;
        Json jc;
        jc["size"] = core.size();
        jc["vertices"] = name_list(names, core);
        const ComponentInfo* info = component_of(cen, core.front());
        if (info && info->primitive) jc["primitive"] = *info->primitive;
        else jc["primitive"] = nullptr;
        jc["completeness"] = completeness_json(completeness(amb, core_points(G, core)));
        core_json = std::move(jc);
    }

    HeuristicResult heur = irreducibility_heuristic(G, cen, amb);
    Json heur_json;
    heur_json["certified"] = heur.irreducible;
    heur_json["witness"] =
        heur.witness ? Json(names[static_cast<std::size_t>(*heur.witness)]) : Json(nullptr);

    Json results;
    results["level"] = level;
    results["base_field"] = {{"p", inst.field.p()}, {"m", inst.field.m()},
                             {"size", inst.field.size()}};
    results["ambient_field"] = {{"degree", G.ambient.m()}, {"size", G.ambient.size()}};
    results["vertex_count"] = G.vertices.size();
    results["edge_count"] = G.edges.size();
    results["d"] = cen.d;
    results["bidegree"] = Json::array({inst.corr.d1(), inst.corr.d2()});
    results["structural_verdict"] =
        sing_or_etale_flag(inst.corr.d1(), inst.corr.d2()) == SingOrEtale::must_be_singular
            ? "must_be_singular"
            : "not_good";
    results["components"] = std::move(comps);
    results["singular_vertices"] = name_list(names, cen.singular_vertices);
    results["regular_components"] = std::move(regular);
    results["regular_core"] = std::move(core_json);
    results["multiple_regular_cores"] = cen.regular_components.size() > 1;
    results["irreducibility"] = std::move(heur_json);
    if (inst.corr.d1() != inst.corr.d2()) results["unequal_degrees"] = true;

    Json inputs;
    inputs["spec"] = spec_path;
    inputs["level"] = level;
    Json report = make_envelope("census", std::move(inputs), std::move(results));
    return CensusRun{std::move(G), std::move(cen), std::move(report)};
}

Json run_cycles(const TowerInstance& inst, int level, int nmax, const std::string& spec_path,
                bool allow_unequal) {
    if (nmax < 1) throw Error("nmax must be positive");
    enforce_tower_hypotheses(inst.corr, allow_unequal);
    TowerGraph G = build_level(inst, level);
    auto names = vertex_names(G);
    int d = std::max(inst.corr.d1(), inst.corr.d2());

    auto table = count_cycles_table(G, nmax);
    Json rows = Json::array();
    for (int n = 1; n <= nmax; ++n) {
        BigInt count = table[static_cast<std::size_t>(n - 1)];
        BigInt bound = cycle_count_upper_bound(d, n);
        Json row;
        row["n"] = n;
        row["count"] = big_str(count);
        row["bound"] = big_str(bound);
        row["within_bound"] = count <= bound;
        rows.push_back(std::move(row));
    }

    Json enumeration = nullptr;
    if (G.vertices.size() <= 64) {
        Correspondence amb = corr_in_ambient(inst, G);
        int max_len = std::min(nmax, 6);
        Json cycles = Json::array();
        for (const auto& cyc : enumerate_cycles(G, max_len)) {
            std::vector<ProjPoint> pts;
            for (int v : cyc) pts.push_back(G.vertices[static_cast<std::size_t>(v)]);
            std::string reason;
            bool multiple = cycle_multiplicity_ge2(amb, pts, &reason);
            Json jc;
            jc["vertices"] = name_list(names, cyc);
            jc["singular"] = classify_path(G, cyc) == PathClass::singular;
            jc["multiplicity_ge2"] = multiple;
            jc["reason"] = reason;
            cycles.push_back(std::move(jc));
        }
        enumeration = Json{{"max_length", max_len}, {"cycles", std::move(cycles)}};
    }

    Json results;
    results["level"] = level;
    results["d"] = d;
    results["vertex_count"] = G.vertices.size();
    results["rows"] = std::move(rows);
    results["cycle_enumeration"] = std::move(enumeration);

    Json inputs;
    inputs["spec"] = spec_path;
    inputs["level"] = level;
    inputs["nmax"] = nmax;
    return make_envelope("cycles", std::move(inputs), std::move(results));
}

Json run_genus(const TowerSpecFile& spec, const TowerInstance& inst, int nmax,
               const std::string& spec_path) {
    if (nmax < 1) throw Error("nmax must be positive");
    enforce_tower_hypotheses(inst.corr, false, true);
    GenusParams P;
    P.d = inst.corr.d1();
    P.gamma2 = inst.corr.arithmetic_genus();
    P.g1 = 0;

    bool assumed_zero = !spec.deltas.has_value();
    std::vector<BigInt> deltas;
    if (spec.deltas)
        for (long long v : *spec.deltas) deltas.emplace_back(v);
    while (static_cast<int>(deltas.size()) < nmax - 1) {
        if (!assumed_zero && static_cast<int>(deltas.size()) < nmax - 1 && !deltas.empty())
            break;  // partially supplied lists are not padded silently
        deltas.emplace_back(0);
    }

    Json rows = Json::array();
    BigInt g_prev = P.g1;
    for (int n = 1; n <= nmax; ++n) {
        Json row;
        row["n"] = n;
        if (n == 1) {
            row["geometric_genus"] = big_str(P.g1);
        } else {
            BigInt sharp = sharp_genus(P, g_prev, n);
            BigInt g_closed = geometric_genus(P, deltas, n);
            BigInt g_rec = geometric_genus_recursive(P, deltas, n);
            if (g_closed != g_rec)
                throw Error("internal genus routes disagree at level " + std::to_string(n));
            row["sharp_genus"] = big_str(sharp);
            row["geometric_genus"] = big_str(g_closed);
            Rational gap(g_closed - 1);
            BigInt dn = 1;
            for (int i = 0; i < n; ++i) dn *= P.d;
            row["normalized_gap"] = rational_to_string(gap / Rational(dn));
            g_prev = g_closed;
        }
        rows.push_back(std::move(row));
    }

    Json jdeltas = Json::array();
    for (const auto& v : deltas) jdeltas.push_back(big_str(v));

    Json results;
    results["d"] = P.d;
    results["gamma2"] = big_str(P.gamma2);
    results["g1"] = big_str(P.g1);
    results["deltas"] = std::move(jdeltas);
    results["deltas_assumed_zero"] = assumed_zero;
    results["rows"] = std::move(rows);

    Json inputs;
    inputs["spec"] = spec_path;
    inputs["nmax"] = nmax;
    return make_envelope("genus", std::move(inputs), std::move(results));
}

Json run_invariants(const TowerSpecFile& spec, const TowerInstance& inst,
                    const std::optional<Rational>& ell_override, int rmax_scan_override,
                    const std::string& spec_path, bool allow_unequal) {
    enforce_tower_hypotheses(inst.corr, allow_unequal);
    bool unequal = inst.corr.d1() != inst.corr.d2();

    std::vector<int> scan = spec.levels;
    if (rmax_scan_override > 0) {
        scan.clear();
        for (int r = 1; r <= rmax_scan_override; ++r) scan.push_back(r);
    }
    if (scan.empty()) scan = {1, 2, 3, 4};
    std::sort(scan.begin(), scan.end());
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());

    std::optional<Rational> ell = ell_override ? ell_override : spec.ell;
    std::vector<std::string> notes;

    Json scan_rows = Json::array();
    int r0 = 0;
    long long core_size = 0;
    Json core_json = nullptr;

    for (int r : scan) {
        TowerGraph G = build_level(inst, r);
        ComponentCensus cen = census(G);
        Json row;
        row["level"] = r;
        row["vertex_count"] = G.vertices.size();
        row["singular_vertex_count"] = cen.singular_vertices.size();
        Json sizes = Json::array();
        for (const auto& rc : cen.regular_components) sizes.push_back(rc.size());
        row["regular_component_sizes"] = std::move(sizes);
        scan_rows.push_back(std::move(row));

        if (cen.regular_components.size() > 1) {
            std::string msg = "level " + std::to_string(r) + " carries " +
                              std::to_string(cen.regular_components.size()) +
                              " regular components (sizes";
            for (const auto& rc : cen.regular_components)
                msg += " " + std::to_string(rc.size());
            throw MultipleRegularCores(msg + ")");
        }
        if (cen.regular_core) {
            r0 = r;
            const auto& core = *cen.regular_core;
            core_size = static_cast<long long>(core.size());
            auto names = vertex_names(G);
            Correspondence amb = corr_in_ambient(inst, G);
            Json jc;
            jc["level"] = r0;
            jc["size"] = core.size();
            jc["vertices"] = name_list(names, core);
            const ComponentInfo* info = component_of(cen, core.front());
            if (info && info->primitive) jc["primitive"] = *info->primitive;
            else jc["primitive"] = nullptr;
            jc["completeness"] = completeness_json(completeness(amb, core_points(G, core)));
            core_json = std::move(jc);
            break;
        }
    }

    int rmax_report = std::max({6, r0 * 2, scan.empty() ? 1 : scan.back()});

    Json results;
    results["q"] = inst.field.size();
    results["bidegree"] = Json::array({inst.corr.d1(), inst.corr.d2()});
    results["scan"] = std::move(scan_rows);
    results["core"] = std::move(core_json);
    results["ell"] = ell ? Json(rational_to_string(*ell)) : Json(nullptr);

    if (unequal) {
        AsymptoticInvariants zero = lambda_beta_from_core(0, 1, Rational(0), rmax_report);
        Json jl, jb;
        for (int r = 1; r <= rmax_report; ++r) {
            jl[std::to_string(r)] = rational_to_string(zero.lambda.at(r));
            jb[std::to_string(r)] = rational_to_string(zero.beta.at(r));
        }
        results["lambda"] = std::move(jl);
        results["beta"] = std::move(jb);
        results["lambda_beta_consistent"] = true;
        results["zeta_factor"] = zeta_from_beta(zero.beta);
        results["deficiency"] = deficiency(zero.beta, inst.field.size());
        notes.push_back("unequal projection degrees force zero growth in every level");
    } else if (r0 == 0) {
        results["lambda"] = nullptr;
        results["beta"] = nullptr;
        notes.push_back("no regular core within scanned levels; growth invariants unavailable");
    } else if (!ell) {
        results["lambda"] = nullptr;
        results["beta"] = nullptr;
        notes.push_back("growth constant ell not supplied; lambda and beta omitted");
    } else {
        AsymptoticInvariants inv = lambda_beta_from_core(core_size, r0, *ell, rmax_report);
        Json jl, jb;
        for (int r = 1; r <= rmax_report; ++r) {
            jl[std::to_string(r)] = rational_to_string(inv.lambda.at(r));
            jb[std::to_string(r)] = rational_to_string(inv.beta.at(r));
        }
        results["lambda"] = std::move(jl);
        results["beta"] = std::move(jb);
        results["lambda_beta_consistent"] = lambda_beta_consistent(inv.lambda, inv.beta);
        results["zeta_factor"] = zeta_from_beta(inv.beta);
        results["deficiency"] = deficiency(inv.beta, inst.field.size());
    }
    Json jnotes = Json::array();
    for (const auto& s : notes) jnotes.push_back(s);
    results["notes"] = std::move(jnotes);

    Json inputs;
    inputs["spec"] = spec_path;
    inputs["ell"] = ell_override ? Json(rational_to_string(*ell_override)) : Json(nullptr);
    return make_envelope("invariants", std::move(inputs), std::move(results));
}

// --- probe -----------------------------------------------------------------------

namespace {

using IdxPoly = std::vector<std::uint64_t>;
using MapKey = std::tuple<int, int, IdxPoly, IdxPoly>;

IdxPoly poly_to_idx(const FiniteField& F, const Poly& a) {
    IdxPoly out;
    out.reserve(a.c.size());
    for (const auto& e : a.c) out.push_back(F.index_of(e));
    return out;
}

Poly idx_to_poly(const FiniteField& F, const IdxPoly& v) {
    Poly p;
    for (auto i : v) p.c.push_back(F.element(i));
    return poly_trim(F, std::move(p));
}

MapKey map_key(const FiniteField& F, const Poly& num, const Poly& den) {
    return {poly_deg(num), poly_deg(den), poly_to_idx(F, num), poly_to_idx(F, den)};
}

// coeffs(a*x + b)
Poly compose_linear(const FiniteField& F, const Poly& h, const FieldElement& a,
                    const FieldElement& b) {
    Poly lin;
    lin.c = {b, a};
    lin = poly_trim(F, std::move(lin));
    Poly res;
    for (auto it = h.c.rbegin(); it != h.c.rend(); ++it) {
        res = poly_mul(F, res, lin);
        Poly cpoly;
        cpoly.c = {*it};
        res = poly_add(F, res, poly_trim(F, std::move(cpoly)));
    }
    return res;
}

std::pair<Poly, Poly> normalize_pair(const FiniteField& F, Poly num, Poly den) {
    FieldElement c = F.inv(den.c.back());
    return {poly_scale(F, c, num), poly_scale(F, c, den)};
}

std::vector<Poly> enumerate_polys(const FiniteField& F, int maxdeg, bool monic) {
    std::vector<Poly> out;
    std::uint64_t q = F.size();
    for (int deg = 0; deg <= maxdeg; ++deg) {
        std::uint64_t lows = 1;
        for (int i = 0; i < deg; ++i) lows *= q;
        for (std::uint64_t lead = monic ? 1 : 1; lead < (monic ? 2u : q); ++lead) {
            for (std::uint64_t low = 0; low < lows; ++low) {
                Poly p;
                std::uint64_t v = low;
                for (int i = 0; i < deg; ++i) {
                    p.c.push_back(F.element(v % q));
                    v /= q;
                }
                p.c.push_back(F.element(lead));
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

struct ProbePairOutcome {
    bool degenerate = false;
    bool certified = false;
    int witness_level = 0;
    bool split = false;
    int split_level = 0;
    std::vector<std::size_t> split_sizes;
    bool joint_checked = false;
};

struct Sigma {
    FieldElement a, b;
};

std::vector<Sigma> affine_group(const FiniteField& F) {
    std::vector<Sigma> out;
    for (std::uint64_t ai = 1; ai < F.size(); ++ai)
        for (std::uint64_t bi = 0; bi < F.size(); ++bi)
            out.push_back(Sigma{F.element(ai), F.element(bi)});
    return out;
}

MapKey f_canonical(const FiniteField& F, const RationalMap& h, const std::vector<Sigma>& sigmas) {
    std::optional<MapKey> best;
    for (const auto& s : sigmas) {
        auto [n, d] = normalize_pair(F, compose_linear(F, h.num, s.a, s.b),
                                     compose_linear(F, h.den, s.a, s.b));
        MapKey k = map_key(F, n, d);
        if (!best || k < *best) best = std::move(k);
    }
    return *best;
}

MapKey g_canonical(const FiniteField& F, const RationalMap& h, const std::vector<Sigma>& sigmas) {
    std::optional<MapKey> best;
    for (const auto& s : sigmas) {
        Poly n2 = poly_add(F, poly_scale(F, s.a, h.num), poly_scale(F, s.b, h.den));
        auto [n, d] = normalize_pair(F, std::move(n2), h.den);
        MapKey k = map_key(F, n, d);
        if (!best || k < *best) best = std::move(k);
    }
    return *best;
}

Json idx_json(const IdxPoly& v) {
    Json out = Json::array();
    for (auto x : v) out.push_back(x);
    return out;
}

ProbePairOutcome probe_pair(const FiniteField& F, const MapKey& fk, const MapKey& gk, int rmax) {
    ProbePairOutcome out;
    if (std::get<2>(fk) == std::get<2>(gk) && std::get<3>(fk) == std::get<3>(gk)) {
        out.degenerate = true;
        return out;
    }
    RationalMap f = make_rational_map(F, idx_to_poly(F, std::get<2>(fk)),
                                      idx_to_poly(F, std::get<3>(fk)));
    RationalMap g = make_rational_map(F, idx_to_poly(F, std::get<2>(gk)),
                                      idx_to_poly(F, std::get<3>(gk)));
    Correspondence corr = Correspondence::from_separated(F, f, g);

    auto inspect = [&](int r) {
        TowerGraph G = build_graph_separated(F, f, g, static_cast<std::uint32_t>(r));
        ComponentCensus cen = census(G);
        if (cen.regular_components.size() > 1 && !out.split) {
            out.split = true;
            out.split_level = r;
            for (const auto& rc : cen.regular_components) out.split_sizes.push_back(rc.size());
        }
        if (!out.certified) {
            Correspondence amb = corr.embedded(Embedding(F, G.ambient));
            if (irreducibility_heuristic(G, cen, amb).irreducible) {
                out.certified = true;
                out.witness_level = r;
            }
        }
    };

    for (int r = 1; r <= rmax; ++r) inspect(r);

    if (out.certified && rmax >= 2) {
        long long joint = 1;
        for (int r = 1; r <= rmax; ++r) joint = std::lcm(joint, static_cast<long long>(r));
        if (joint > rmax) {
            // keep the confirmation pass cheap: skip when the joint field blows up
            double sz = 1;
            for (long long i = 0; i < joint * F.m(); ++i) sz *= static_cast<double>(F.p());
            if (sz <= 30000.0) {
                out.joint_checked = true;
                inspect(static_cast<int>(joint));
            }
        }
    }
    return out;
}

}  // namespace

int effective_thread_count(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int n = requested > 0 ? std::min(requested, hw) : hw;
    if (const char* env = std::getenv("TOWERLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(1, n);
}

ProbeOutcome run_probe(const ProbeParams& params) {
    if (params.degree < 1) throw Error("probe degree must be positive");
    if (params.rmax < 1) throw Error("probe rmax must be positive");
    if (params.budget && *params.budget < 0) throw Error("budget cannot be negative");

    FiniteField F(params.p, params.m);
    auto sigmas = affine_group(F);

    auto nums = enumerate_polys(F, params.degree, false);
    auto dens = enumerate_polys(F, params.degree, true);

    std::vector<RationalMap> maps;
    for (const auto& n : nums) {
        for (const auto& d : dens) {
            if (std::max(poly_deg(n), poly_deg(d)) != params.degree) continue;
            if (poly_deg(poly_gcd(F, n, d)) != 0) continue;
            maps.push_back(RationalMap{n, d});
        }
    }

    std::set<MapKey> fset, gset;
    for (const auto& h : maps) {
        fset.insert(f_canonical(F, h, sigmas));
        gset.insert(g_canonical(F, h, sigmas));
    }
    std::vector<MapKey> freps(fset.begin(), fset.end());
    std::vector<MapKey> greps(gset.begin(), gset.end());

    const std::size_t total = freps.size() * greps.size();
    std::size_t to_check = total;
    if (params.budget) to_check = std::min<std::size_t>(total, static_cast<std::size_t>(*params.budget));

    std::vector<ProbePairOutcome> results(to_check);
    int workers = effective_thread_count(params.threads);
    workers = std::max(1, std::min<int>(workers, to_check == 0 ? 1 : static_cast<int>(std::min<std::size_t>(to_check, 64))));

    auto worker = [&](int w) {
        for (std::size_t k = static_cast<std::size_t>(w); k < to_check;
             k += static_cast<std::size_t>(workers)) {
            const MapKey& fk = freps[k / greps.size()];
            const MapKey& gk = greps[k % greps.size()];
            results[k] = probe_pair(F, fk, gk, params.rmax);
        }
    };
    if (workers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    std::size_t degenerate = 0, certified = 0, splits = 0, joint_checks = 0;
    std::vector<Json> violations;
    for (std::size_t k = 0; k < to_check; ++k) {
        const auto& r = results[k];
        if (r.degenerate) ++degenerate;
        if (r.certified) ++certified;
        if (r.split) ++splits;
        if (r.joint_checked) ++joint_checks;
        if (r.certified && r.split) {
            const MapKey& fk = freps[k / greps.size()];
            const MapKey& gk = greps[k % greps.size()];
            Json v;
            v["pair_index"] = k;
            v["f"] = {{"num", idx_json(std::get<2>(fk))}, {"den", idx_json(std::get<3>(fk))}};
            v["g"] = {{"num", idx_json(std::get<2>(gk))}, {"den", idx_json(std::get<3>(gk))}};
            v["witness_level"] = r.witness_level;
            v["split_level"] = r.split_level;
            Json sizes = Json::array();
            for (auto s : r.split_sizes) sizes.push_back(s);
            v["regular_component_sizes"] = std::move(sizes);
            violations.push_back(std::move(v));
        }
    }

    Json results_json;
    results_json["field_size"] = F.size();
    results_json["maps_total"] = maps.size();
    results_json["f_classes"] = freps.size();
    results_json["g_classes"] = greps.size();
    results_json["pairs_total"] = total;
    results_json["pairs_checked"] = to_check;
    results_json["degenerate_pairs"] = degenerate;
    results_json["certified_irreducible"] = certified;
    results_json["splits_observed"] = splits;
    results_json["joint_checks"] = joint_checks;
    Json jv = Json::array();
    for (const auto& v : violations) jv.push_back(v);
    results_json["violations"] = std::move(jv);
    results_json["complete"] = to_check == total;

    Json inputs;
    inputs["p"] = params.p;
    inputs["m"] = params.m;
    inputs["degree"] = params.degree;
    inputs["rmax"] = params.rmax;
    inputs["budget"] = params.budget ? Json(*params.budget) : Json(nullptr);

    ProbeOutcome outcome;
    outcome.report = make_envelope("probe", std::move(inputs), std::move(results_json));
    outcome.violations = std::move(violations);
    outcome.budget_exhausted = to_check != total;
    return outcome;
}

void ensure_probe_complete(const ProbeOutcome& outcome) {
    if (outcome.budget_exhausted)
        throw BudgetExceeded("probe stopped after " +
                             outcome.report["results"]["pairs_checked"].dump() + " of " +
                             outcome.report["results"]["pairs_total"].dump() + " pairs");
}

}  // namespace towerlab
