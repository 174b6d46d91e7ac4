#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "towerlab/correspondence.hpp"
#include "towerlab/fields.hpp"

namespace towerlab {

using BigInt = boost::multiprecision::cpp_int;

struct Edge {
    int src, dst;
    EdgeFlags flags;
};

// Arithmetic graph at one level of a tower: vertices are P^1(F_{q^r}) in
// canonical order (finite points by ascending index, infinity last), edges are
// the correspondence's point pairs with their etale flags.
struct TowerGraph {
    std::uint64_t q = 0;   // base field size
    std::uint32_t level = 0;
    FiniteField ambient{2, 1};  // realization of F_{q^level}
    int d1 = 0, d2 = 0;
    std::vector<ProjPoint> vertices;
    std::vector<Edge> edges;  // sorted by (src, dst); no parallel edges
    std::vector<std::vector<int>> out_adj, in_adj;

    int vertex_index(const ProjPoint& P) const;
    const Edge* find_edge(int src, int dst) const;
};

TowerGraph build_graph(const FiniteField& base, const Correspondence& corr, std::uint32_t r);
// same result through value tables, available when the correspondence separates
TowerGraph build_graph_separated(const FiniteField& base, const RationalMap& f,
                                 const RationalMap& g, std::uint32_t r);

TowerGraph induced_subgraph(const TowerGraph& G, const std::vector<int>& keep);

// --- census ------------------------------------------------------------------

struct ComponentInfo {
    std::vector<int> vertices;  // sorted
    bool strongly_connected = false;
    bool d_regular = false;
    bool singular = false;                 // part of the singular part
    std::optional<bool> primitive;         // only for strongly connected comps with edges
};

struct ComponentCensus {
    int d = 0;
    std::vector<ComponentInfo> components;            // size desc, then min vertex asc
    std::vector<int> singular_vertices;               // sorted
    std::vector<std::vector<int>> regular_components; // all d-regular strongly connected comps
    std::optional<std::vector<int>> regular_core;     // set iff regular_components.size() == 1
};

ComponentCensus census(const TowerGraph& G, int d);
inline ComponentCensus census(const TowerGraph& G) {
    return census(G, G.d1 > G.d2 ? G.d1 : G.d2);
}

// all d-regular strongly connected components (prune to fixpoint, then split);
// more than one is uniqueness-theorem counterexample evidence
std::vector<std::vector<int>> find_regular_components(const TowerGraph& G, int d);
// the unique one; nullopt when absent, MultipleRegularCores when several
std::optional<std::vector<int>> regular_core(const TowerGraph& G, int d);

struct Completeness {
    bool forward = false, backward = false;
    bool complete() const { return forward && backward; }
};

// geometric completeness of a vertex subset S against full fibers; decidable in
// any ambient containing S (missing fiber mass lies outside the ambient, hence
// outside S)
Completeness completeness(const Correspondence& corr, const std::vector<ProjPoint>& S);

// --- exact counting ------------------------------------------------------------

BigInt count_paths(const TowerGraph& G, int n);                      // sum of all entries of A^n
BigInt count_cycles(const TowerGraph& G, int n);                     // trace of A^n
std::vector<BigInt> count_cycles_table(const TowerGraph& G, int nmax);

// advisory float estimate (power iteration on A + I)
double spectral_radius(const TowerGraph& G, double tol = 1e-9, int max_iters = 10000);
// support of the dominant eigenvector; equals the union of regular components
// when one exists (they are closed under in- and out-edges)
std::vector<int> spectral_core_support(const TowerGraph& G, int iters = 2000);

// --- path and cycle classification ----------------------------------------------

enum class PathClass { smooth, singular };

// structural rule: singular iff some edge i is not etale-by-pi2 and some later
// or equal edge j is not etale-by-pi1
PathClass classify_path(const TowerGraph& G, const std::vector<int>& path);

// independent check: rank of the (n-1) x n matrix of chart-local partial
// derivatives along the path; at most 6 edges
PathClass jacobian_oracle(const Correspondence& corr, const std::vector<ProjPoint>& pts);

// Multiplicity test for a closed path (first == last). Point-singular cycles
// are multiple outright; otherwise tests the product identity
// (-1)^m prod dF/ds = prod dF/dt over the m edges in chart-local coordinates.
bool cycle_multiplicity_ge2(const Correspondence& corr, const std::vector<ProjPoint>& cycle,
                            std::string* reason = nullptr);

std::vector<ProjPoint> iterate_cycle(const std::vector<ProjPoint>& cycle, int rho);

// elementary cycles of length <= max_len, basepointed at their least vertex,
// lexicographic order; each entry is [v0, ..., v0]
std::vector<std::vector<int>> enumerate_cycles(const TowerGraph& G, int max_len);

// --- irreducibility heuristic ------------------------------------------------------

struct HeuristicResult {
    bool irreducible = false;
    std::optional<int> witness;  // singular-part vertex carrying the qualifying loop
};

// fires when a singular-part vertex has a single geometric out-edge, that edge
// is a loop, and it is etale-by-pi2
HeuristicResult irreducibility_heuristic(const TowerGraph& G, const ComponentCensus& cen,
                                         const Correspondence& corr_in_ambient);

// --- rendering ------------------------------------------------------------------

// deterministic Graphviz output; singular components clustered, non-etale-by-pi2
// edges dashed, non-etale-by-pi1 edges red
std::string export_dot(const TowerGraph& G, const ComponentCensus& cen);

}  // namespace towerlab
