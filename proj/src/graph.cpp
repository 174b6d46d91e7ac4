#include "towerlab/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace towerlab {

namespace {

std::pair<bool, std::uint64_t> point_key(const FiniteField& F, const ProjPoint& P) {
    if (P.is_infinite()) return {true, 0};
    return {false, F.index_of(P.x0)};
}

void finish_adjacency(TowerGraph& G) {
    std::sort(G.edges.begin(), G.edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    G.out_adj.assign(G.vertices.size(), {});
    G.in_adj.assign(G.vertices.size(), {});
    for (const auto& e : G.edges) {
        G.out_adj[static_cast<size_t>(e.src)].push_back(e.dst);
        G.in_adj[static_cast<size_t>(e.dst)].push_back(e.src);
    }
}

FiniteField level_field(const FiniteField& base, std::uint32_t r) {
    if (r == 0) throw Error("level must be >= 1");
    if (r == 1) return base;
    return FiniteField(base.p(), base.m() * r);
}

struct SccResult {
    std::vector<int> comp_of;  // scc id per vertex
    int count = 0;
};

// iterative Tarjan
SccResult strongly_connected_components(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    SccResult res;
    res.comp_of.assign(static_cast<size_t>(n), -1);
    std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
    std::vector<char> on_stack(static_cast<size_t>(n), 0);
    std::vector<int> stack;
    int next_index = 0;
    struct Frame {
        int v;
        size_t child;
    };
    for (int start = 0; start < n; ++start) {
        if (index[static_cast<size_t>(start)] != -1) continue;
        std::vector<Frame> frames{{start, 0}};
        index[static_cast<size_t>(start)] = low[static_cast<size_t>(start)] = next_index++;
        stack.push_back(start);
        on_stack[static_cast<size_t>(start)] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& nb = adj[static_cast<size_t>(f.v)];
            if (f.child < nb.size()) {
                int w = nb[f.child++];
                if (index[static_cast<size_t>(w)] == -1) {
                    index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[static_cast<size_t>(w)] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<size_t>(w)]) {
                    low[static_cast<size_t>(f.v)] =
                        std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
                }
            } else {
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<size_t>(frames.back().v)] =
                        std::min(low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
                if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<size_t>(w)] = 0;
                        res.comp_of[static_cast<size_t>(w)] = res.count;
                        if (w == v) break;
                    }
                    ++res.count;
                }
            }
        }
    }
    return res;
}

}  // namespace

int TowerGraph::vertex_index(const ProjPoint& P) const {
    if (P.is_infinite()) return static_cast<int>(vertices.size()) - 1;
    std::uint64_t key = ambient.index_of(P.x0);
    // finite vertices are sorted by element index
    int lo = 0, hi = static_cast<int>(vertices.size()) - 2;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        std::uint64_t k = ambient.index_of(vertices[static_cast<size_t>(mid)].x0);
        if (k == key) return mid;
        if (k < key)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return -1;
}

const Edge* TowerGraph::find_edge(int src, int dst) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair(src, dst),
                               [](const Edge& e, const std::pair<int, int>& k) {
                                   return std::tie(e.src, e.dst) < std::tie(k.first, k.second);
                               });
    if (it != edges.end() && it->src == src && it->dst == dst) return &*it;
    return nullptr;
}

TowerGraph build_graph(const FiniteField& base, const Correspondence& corr, std::uint32_t r) {
    TowerGraph G;
    G.q = base.size();
    G.level = r;
    G.ambient = level_field(base, r);
    Embedding emb(base, G.ambient);
    Correspondence C = corr.embedded(emb);
    G.d1 = C.d1();
    G.d2 = C.d2();
    G.vertices = enumerate_projective_line(G.ambient, G.q, r);
    int n = static_cast<int>(G.vertices.size());
    // cache of fiber-in-x forms per destination, for the pi2 flag
    std::vector<std::optional<std::vector<FieldElement>>> xforms(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto roots = binary_form_roots(G.ambient, C.fiber_in_y(G.vertices[static_cast<size_t>(i)]));
        for (const auto& [Q, mult] : roots) {
            int j = G.vertex_index(Q);
            if (j < 0) throw Error("fiber root escaped the level field");  // impossible: ambient == level field
            auto& xf = xforms[static_cast<size_t>(j)];
            if (!xf) xf = C.fiber_in_x(Q);
            int m2 = binary_form_root_multiplicity(G.ambient, *xf, G.vertices[static_cast<size_t>(i)]);
            G.edges.push_back(Edge{i, j, EdgeFlags{mult == 1, m2 == 1}});
        }
    }
    finish_adjacency(G);
    return G;
}

TowerGraph build_graph_separated(const FiniteField& base, const RationalMap& f,
                                 const RationalMap& g, std::uint32_t r) {
    TowerGraph G;
    G.q = base.size();
    G.level = r;
    G.ambient = level_field(base, r);
    Embedding emb(base, G.ambient);
    RationalMap fa = embed_map(emb, f), ga = embed_map(emb, g);
    G.d1 = map_degree(fa);
    G.d2 = map_degree(ga);
    G.vertices = enumerate_projective_line(G.ambient, G.q, r);
    int n = static_cast<int>(G.vertices.size());

    std::vector<std::pair<bool, std::uint64_t>> fval(static_cast<size_t>(n)), gval(static_cast<size_t>(n));
    std::vector<int> ef(static_cast<size_t>(n)), eg(static_cast<size_t>(n));
    std::map<std::pair<bool, std::uint64_t>, std::vector<int>> bucket;
    for (int i = 0; i < n; ++i) {
        const ProjPoint& P = G.vertices[static_cast<size_t>(i)];
        fval[static_cast<size_t>(i)] = point_key(G.ambient, map_value(G.ambient, fa, P));
        gval[static_cast<size_t>(i)] = point_key(G.ambient, map_value(G.ambient, ga, P));
        ef[static_cast<size_t>(i)] = ramification_index(G.ambient, fa, P);
        eg[static_cast<size_t>(i)] = ramification_index(G.ambient, ga, P);
        bucket[gval[static_cast<size_t>(i)]].push_back(i);
    }
    for (int i = 0; i < n; ++i) {
        auto it = bucket.find(fval[static_cast<size_t>(i)]);
        if (it == bucket.end()) continue;
        for (int j : it->second)
            G.edges.push_back(Edge{i, j, EdgeFlags{eg[static_cast<size_t>(j)] == 1,
                                                   ef[static_cast<size_t>(i)] == 1}});
    }
    finish_adjacency(G);
    return G;
}

TowerGraph induced_subgraph(const TowerGraph& G, const std::vector<int>& keep) {
    std::vector<int> sorted_keep = keep;
    std::sort(sorted_keep.begin(), sorted_keep.end());
    sorted_keep.erase(std::unique(sorted_keep.begin(), sorted_keep.end()), sorted_keep.end());
    std::vector<int> remap(G.vertices.size(), -1);
    TowerGraph H;
    H.q = G.q;
    H.level = G.level;
    H.ambient = G.ambient;
    H.d1 = G.d1;
    H.d2 = G.d2;
    for (size_t k = 0; k < sorted_keep.size(); ++k) {
        remap[static_cast<size_t>(sorted_keep[k])] = static_cast<int>(k);
        H.vertices.push_back(G.vertices[static_cast<size_t>(sorted_keep[k])]);
    }
    for (const auto& e : G.edges) {
        int s = remap[static_cast<size_t>(e.src)], d = remap[static_cast<size_t>(e.dst)];
        if (s >= 0 && d >= 0) H.edges.push_back(Edge{s, d, e.flags});
    }
    finish_adjacency(H);
    return H;
}

// --- census ---------------------------------------------------------------------

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[static_cast<size_t>(ra)] = rb;
    }
};

// period of a strongly connected component with edges, by BFS levels:
// gcd over internal edges (u,v) of level[u] + 1 - level[v]
int component_period(const std::vector<int>& verts, const TowerGraph& G,
                     const std::vector<char>& in_comp) {
    std::vector<long long> lvl(G.vertices.size(), -1);
    std::queue<int> q;
    q.push(verts[0]);
    lvl[static_cast<size_t>(verts[0])] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : G.out_adj[static_cast<size_t>(u)]) {
            if (!in_comp[static_cast<size_t>(v)] || lvl[static_cast<size_t>(v)] != -1) continue;
            lvl[static_cast<size_t>(v)] = lvl[static_cast<size_t>(u)] + 1;
            q.push(v);
        }
    }
    long long g = 0;
    for (const auto& e : G.edges) {
        if (!in_comp[static_cast<size_t>(e.src)] || !in_comp[static_cast<size_t>(e.dst)]) continue;
        long long d = lvl[static_cast<size_t>(e.src)] + 1 - lvl[static_cast<size_t>(e.dst)];
        g = std::gcd(g, d < 0 ? -d : d);
    }
    return static_cast<int>(g);
}

}  // namespace

std::vector<std::vector<int>> find_regular_components(const TowerGraph& G, int d) {
    size_t n = G.vertices.size();
    std::vector<int> outdeg(n, 0), indeg(n, 0);
    std::vector<char> alive(n, 1);
    for (const auto& e : G.edges) {
        ++outdeg[static_cast<size_t>(e.src)];
        ++indeg[static_cast<size_t>(e.dst)];
    }
    std::queue<int> dead;
    for (size_t i = 0; i < n; ++i)
        if (outdeg[i] < d || indeg[i] < d) {
            alive[i] = 0;
            dead.push(static_cast<int>(i));
        }
    while (!dead.empty()) {
        int v = dead.front();
        dead.pop();
        for (int u : G.in_adj[static_cast<size_t>(v)]) {
            if (alive[static_cast<size_t>(u)] && --outdeg[static_cast<size_t>(u)] < d) {
                alive[static_cast<size_t>(u)] = 0;
                dead.push(u);
            }
        }
        for (int w : G.out_adj[static_cast<size_t>(v)]) {
            if (alive[static_cast<size_t>(w)] && --indeg[static_cast<size_t>(w)] < d) {
                alive[static_cast<size_t>(w)] = 0;
                dead.push(w);
            }
        }
    }
    // survivors carry exactly d in- and out-edges among themselves (global
    // degrees are bounded by d), so weak components here are balanced and
    // therefore strongly connected
    Dsu dsu(n);
    for (const auto& e : G.edges)
        if (alive[static_cast<size_t>(e.src)] && alive[static_cast<size_t>(e.dst)])
            dsu.unite(e.src, e.dst);
    std::map<int, std::vector<int>> groups;
    for (size_t i = 0; i < n; ++i)
        if (alive[i]) groups[dsu.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [root, verts] : groups) out.push_back(std::move(verts));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return out;
}

std::optional<std::vector<int>> regular_core(const TowerGraph& G, int d) {
    auto comps = find_regular_components(G, d);
    if (comps.empty()) return std::nullopt;
    if (comps.size() > 1) {
        std::ostringstream os;
        os << "uniqueness violated: " << comps.size() << " d-regular strongly connected components"
           << " with sizes";
        for (const auto& c : comps) os << " " << c.size();
        throw MultipleRegularCores(os.str());
    }
    return comps.front();
}

ComponentCensus census(const TowerGraph& G, int d) {
    size_t n = G.vertices.size();
    ComponentCensus out;
    out.d = d;

    Dsu dsu(n);
    for (const auto& e : G.edges) dsu.unite(e.src, e.dst);
    std::map<int, std::vector<int>> weak;
    for (size_t i = 0; i < n; ++i) weak[dsu.find(static_cast<int>(i))].push_back(static_cast<int>(i));

    SccResult scc = strongly_connected_components(G.out_adj);

    std::vector<int> outdeg(n, 0), indeg(n, 0);
    for (const auto& e : G.edges) {
        ++outdeg[static_cast<size_t>(e.src)];
        ++indeg[static_cast<size_t>(e.dst)];
    }
    // weak components holding a non-etale edge form the singular part
    std::set<int> singular_roots;
    for (const auto& e : G.edges)
        if (!e.flags.etale_pi1 || !e.flags.etale_pi2) singular_roots.insert(dsu.find(e.src));

    std::vector<ComponentInfo> comps;
    for (auto& [root, verts] : weak) {
        ComponentInfo ci;
        ci.vertices = verts;  // ascending by construction
        ci.singular = singular_roots.count(root) > 0;
        int c0 = scc.comp_of[static_cast<size_t>(verts[0])];
        ci.strongly_connected =
            std::all_of(verts.begin(), verts.end(),
                        [&](int v) { return scc.comp_of[static_cast<size_t>(v)] == c0; });
        ci.d_regular = std::all_of(verts.begin(), verts.end(), [&](int v) {
            return outdeg[static_cast<size_t>(v)] == d && indeg[static_cast<size_t>(v)] == d;
        });
        bool has_edge = std::any_of(verts.begin(), verts.end(),
                                    [&](int v) { return !G.out_adj[static_cast<size_t>(v)].empty(); });
        if (ci.strongly_connected && has_edge) {
            std::vector<char> in_comp(n, 0);
            for (int v : verts) in_comp[static_cast<size_t>(v)] = 1;
            ci.primitive = component_period(verts, G, in_comp) == 1;
        }
        comps.push_back(std::move(ci));
    }
    std::sort(comps.begin(), comps.end(), [](const ComponentInfo& a, const ComponentInfo& b) {
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() > b.vertices.size();
        return a.vertices.front() < b.vertices.front();
    });
    out.components = std::move(comps);

    for (const auto& ci : out.components)
        if (ci.singular)
            out.singular_vertices.insert(out.singular_vertices.end(), ci.vertices.begin(),
                                         ci.vertices.end());
    std::sort(out.singular_vertices.begin(), out.singular_vertices.end());

    out.regular_components = find_regular_components(G, d);
    if (out.regular_components.size() == 1) out.regular_core = out.regular_components.front();
    return out;
}

Completeness completeness(const Correspondence& corr, const std::vector<ProjPoint>& S) {
    const FiniteField& F = corr.field();
    std::set<std::pair<bool, std::uint64_t>> keys;
    for (const auto& P : S) keys.insert(point_key(F, P));
    Completeness res{true, true};
    for (const auto& P : S) {
        int mass = 0;
        for (const auto& [Q, mult] : out_neighbors(corr, P)) {
            mass += mult;
            if (!keys.count(point_key(F, Q))) res.forward = false;
        }
        if (mass < corr.d2()) res.forward = false;  // unsplit fiber mass lies outside S
        mass = 0;
        for (const auto& [Q, mult] : in_neighbors(corr, P)) {
            mass += mult;
            if (!keys.count(point_key(F, Q))) res.backward = false;
        }
        if (mass < corr.d1()) res.backward = false;
    }
    return res;
}

// --- exact counting ----------------------------------------------------------------

BigInt count_paths(const TowerGraph& G, int n) {
    if (n < 0) throw Error("path length must be >= 0");
    size_t V = G.vertices.size();
    std::vector<BigInt> v(V, 1), w(V);
    for (int step = 0; step < n; ++step) {
        for (size_t u = 0; u < V; ++u) {
            BigInt acc = 0;
            for (int x : G.out_adj[u]) acc += v[static_cast<size_t>(x)];
            w[u] = std::move(acc);
        }
        std::swap(v, w);
    }
    BigInt total = 0;
    for (const auto& x : v) total += x;
    return total;
}

std::vector<BigInt> count_cycles_table(const TowerGraph& G, int nmax) {
    if (nmax < 1) throw Error("cycle length bound must be >= 1");
    size_t V = G.vertices.size();
    std::vector<BigInt> table(static_cast<size_t>(nmax), 0);
    std::vector<BigInt> v(V), w(V);
    for (size_t s = 0; s < V; ++s) {
        std::fill(v.begin(), v.end(), 0);
        v[s] = 1;
        for (int k = 1; k <= nmax; ++k) {
            for (size_t u = 0; u < V; ++u) {
                BigInt acc = 0;
                for (int x : G.out_adj[u]) acc += v[static_cast<size_t>(x)];
                w[u] = std::move(acc);
            }
            std::swap(v, w);
            table[static_cast<size_t>(k - 1)] += v[s];
        }
    }
    return table;
}

BigInt count_cycles(const TowerGraph& G, int n) {
    return count_cycles_table(G, n).back();
}

double spectral_radius(const TowerGraph& G, double tol, int max_iters) {
    int V = static_cast<int>(G.vertices.size());
    if (V == 0 || G.edges.empty()) return 0.0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(V, V);
    for (const auto& e : G.edges) A(e.src, e.dst) += 1.0;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(V) / std::sqrt(static_cast<double>(V));
    double prev = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd y = A * x + x;  // shift keeps periodic components from oscillating
        double norm = y.norm();
        if (norm == 0.0) return 0.0;
        x = y / norm;
        if (std::abs(norm - prev) <= tol * std::max(1.0, norm)) return norm - 1.0;
        prev = norm;
    }
    return prev - 1.0;
}

std::vector<int> spectral_core_support(const TowerGraph& G, int iters) {
    int V = static_cast<int>(G.vertices.size());
    std::vector<int> support;
    if (V == 0 || G.edges.empty()) return support;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(V, V);
    for (const auto& e : G.edges) A(e.src, e.dst) += 1.0;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(V);
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd y = A * x + x;
        double norm = y.norm();
        if (norm == 0.0) return support;
        x = y / norm;
    }
    double mx = x.maxCoeff();
    for (int i = 0; i < V; ++i)
        if (x(i) > 1e-8 * mx) support.push_back(i);
    return support;
}

// --- classification -------------------------------------------------------------------

PathClass classify_path(const TowerGraph& G, const std::vector<int>& path) {
    if (path.empty()) throw InvalidPath("empty path");
    bool seen_non_pi2 = false;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        const Edge* e = G.find_edge(path[k], path[k + 1]);
        if (!e)
            throw InvalidPath("no edge " + std::to_string(path[k]) + " -> " +
                              std::to_string(path[k + 1]));
        if (!e->flags.etale_pi2) seen_non_pi2 = true;
        if (!e->flags.etale_pi1 && seen_non_pi2) return PathClass::singular;
    }
    return PathClass::smooth;
}

namespace {

int matrix_rank(const FiniteField& F, std::vector<std::vector<FieldElement>> M) {
    size_t rows = M.size();
    if (rows == 0) return 0;
    size_t cols = M[0].size();
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t pivot = rank;
        while (pivot < rows && M[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(M[pivot], M[rank]);
        FieldElement inv = F.inv(M[rank][c]);
        for (size_t cc = c; cc < cols; ++cc) M[rank][cc] = F.mul(M[rank][cc], inv);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || M[r][c].is_zero()) continue;
            FieldElement factor = M[r][c];
            for (size_t cc = c; cc < cols; ++cc)
                M[r][cc] = F.sub(M[r][cc], F.mul(factor, M[rank][cc]));
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

void validate_on_correspondence(const Correspondence& corr, const std::vector<ProjPoint>& pts) {
    const FiniteField& F = corr.field();
    for (size_t k = 0; k + 1 < pts.size(); ++k)
        if (!corr.eval(pts[k], pts[k + 1]).is_zero())
            throw InvalidPath("pair (" + point_to_string(F, pts[k]) + ", " +
                              point_to_string(F, pts[k + 1]) + ") is not on the correspondence");
}

}  // namespace

PathClass jacobian_oracle(const Correspondence& corr, const std::vector<ProjPoint>& pts) {
    if (pts.empty()) throw InvalidPath("empty path");
    size_t n = pts.size();
    if (n > 7) throw PathTooLong("oracle is limited to paths with at most 6 edges");
    validate_on_correspondence(corr, pts);
    if (n == 1) return PathClass::smooth;
    const FiniteField& F = corr.field();
    std::vector<std::pair<bool, FieldElement>> loc;
    loc.reserve(n);
    for (const auto& P : pts) loc.push_back(local_coord(F, P));
    std::vector<std::vector<FieldElement>> M(n - 1, std::vector<FieldElement>(n, F.zero()));
    for (size_t k = 0; k + 1 < n; ++k) {
        ChartEvals ce = chart_partials(corr, loc[k].first, loc[k + 1].first, loc[k].second,
                                       loc[k + 1].second);
        M[k][k] = ce.ds;
        M[k][k + 1] = ce.dt;
    }
    return matrix_rank(F, std::move(M)) < static_cast<int>(n - 1) ? PathClass::singular
                                                                  : PathClass::smooth;
}

bool cycle_multiplicity_ge2(const Correspondence& corr, const std::vector<ProjPoint>& cycle,
                            std::string* reason) {
    if (cycle.size() < 2) throw InvalidPath("cycle needs at least one edge");
    if (!(cycle.front() == cycle.back())) throw InvalidPath("cycle must close up");
    validate_on_correspondence(corr, cycle);
    const FiniteField& F = corr.field();

    // point-singular cycles are multiple outright
    bool seen_non_pi2 = false;
    bool singular = false;
    for (size_t k = 0; k + 1 < cycle.size() && !singular; ++k) {
        EdgeFlags fl = edge_flags(corr, cycle[k], cycle[k + 1]);
        if (!fl.etale_pi2) seen_non_pi2 = true;
        if (!fl.etale_pi1 && seen_non_pi2) singular = true;
    }
    if (singular) {
        if (reason) *reason = "singular point";
        return true;
    }

    FieldElement prod_ds = F.one(), prod_dt = F.one();
    size_t m = cycle.size() - 1;
    for (size_t k = 0; k < m; ++k) {
        auto [si, sv] = local_coord(F, cycle[k]);
        auto [ti, tv] = local_coord(F, cycle[k + 1]);
        ChartEvals ce = chart_partials(corr, si, ti, sv, tv);
        prod_ds = F.mul(prod_ds, ce.ds);
        prod_dt = F.mul(prod_dt, ce.dt);
    }
    if (m % 2 == 1) prod_ds = F.neg(prod_ds);
    bool holds = prod_ds == prod_dt;
    if (reason) *reason = holds ? "product identity holds" : "product identity fails";
    return holds;
}

std::vector<ProjPoint> iterate_cycle(const std::vector<ProjPoint>& cycle, int rho) {
    if (cycle.size() < 2 || !(cycle.front() == cycle.back()))
        throw InvalidPath("cycle must close up");
    if (rho < 1) throw Error("iteration count must be >= 1");
    std::vector<ProjPoint> out;
    out.reserve((cycle.size() - 1) * static_cast<size_t>(rho) + 1);
    for (int t = 0; t < rho; ++t)
        for (size_t k = 0; k + 1 < cycle.size(); ++k) out.push_back(cycle[k]);
    out.push_back(cycle.front());
    return out;
}

std::vector<std::vector<int>> enumerate_cycles(const TowerGraph& G, int max_len) {
    std::vector<std::vector<int>> out;
    int n = static_cast<int>(G.vertices.size());
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::vector<int> walk;
    for (int s = 0; s < n; ++s) {
        walk = {s};
        // DFS over walks with intermediates distinct and > s
        struct Frame {
            int v;
            size_t next;
        };
        std::vector<Frame> st{{s, 0}};
        while (!st.empty()) {
            Frame& f = st.back();
            const auto& nb = G.out_adj[static_cast<size_t>(f.v)];
            bool descended = false;
            while (f.next < nb.size()) {
                int w = nb[f.next++];
                if (w == s) {
                    auto cyc = walk;
                    cyc.push_back(s);
                    out.push_back(std::move(cyc));
                    continue;
                }
                if (w > s && !used[static_cast<size_t>(w)] &&
                    static_cast<int>(walk.size()) < max_len) {
                    used[static_cast<size_t>(w)] = 1;
                    walk.push_back(w);
                    st.push_back({w, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended && !st.empty() && st.back().next >= G.out_adj[static_cast<size_t>(st.back().v)].size()) {
                int v = st.back().v;
                st.pop_back();
                if (v != s) {
                    used[static_cast<size_t>(v)] = 0;
                    walk.pop_back();
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

HeuristicResult irreducibility_heuristic(const TowerGraph& G, const ComponentCensus& cen,
                                         const Correspondence& corr_in_ambient) {
    const FiniteField& F = corr_in_ambient.field();
    for (int v : cen.singular_vertices) {
        const ProjPoint& P = G.vertices[static_cast<size_t>(v)];
        auto roots = binary_form_roots(F, corr_in_ambient.fiber_in_y(P));
        // single geometric out-edge: all fiber mass on one in-field root
        if (roots.size() != 1 || roots.front().second != corr_in_ambient.d2()) continue;
        if (!(roots.front().first == P)) continue;  // must be a loop
        int m2 = binary_form_root_multiplicity(F, corr_in_ambient.fiber_in_x(P), P);
        if (m2 == 1) return HeuristicResult{true, v};
    }
    return HeuristicResult{false, std::nullopt};
}

// --- rendering ------------------------------------------------------------------------

std::string export_dot(const TowerGraph& G, const ComponentCensus& cen) {
    std::ostringstream os;
    os << "digraph tower {\n  rankdir=LR;\n";
    std::vector<char> clustered(G.vertices.size(), 0);
    int k = 0;
    for (const auto& ci : cen.components) {
        if (!ci.singular) continue;
        os << "  subgraph cluster_singular_" << k++ << " {\n    label=\"singular\";\n";
        for (int v : ci.vertices) {
            os << "    v" << v << " [label=\"" << point_to_string(G.ambient, G.vertices[static_cast<size_t>(v)])
               << "\"];\n";
            clustered[static_cast<size_t>(v)] = 1;
        }
        os << "  }\n";
    }
    for (size_t v = 0; v < G.vertices.size(); ++v) {
        if (clustered[v]) continue;
        os << "  v" << v << " [label=\"" << point_to_string(G.ambient, G.vertices[v]) << "\"];\n";
    }
    for (const auto& e : G.edges) {
        os << "  v" << e.src << " -> v" << e.dst;
        std::vector<std::string> attrs;
        if (!e.flags.etale_pi2) attrs.push_back("style=dashed");
        if (!e.flags.etale_pi1) attrs.push_back("color=red");
        if (!attrs.empty()) {
            os << " [" << attrs[0];
            for (size_t i = 1; i < attrs.size(); ++i) os << ", " << attrs[i];
            os << "]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace towerlab
