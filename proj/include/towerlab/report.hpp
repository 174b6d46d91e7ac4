#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "towerlab/graph.hpp"
#include "towerlab/invariants.hpp"
#include "towerlab/tower_spec.hpp"

namespace towerlab {

using Json = nlohmann::ordered_json;

// Shared wrapper so every command emits the same outer shape.
Json make_envelope(const std::string& command, Json inputs, Json results);

// Canonical serialization: two-space indent plus trailing newline, so repeated
// runs produce byte-identical files.
std::string render_report(const Json& report);

// Rejects degree-1 towers outright and unequal projection degrees unless the
// caller opted in; `require_equal` additionally refuses unequal degrees even
// with the opt-in (used where the underlying recursion needs d1 == d2).
void enforce_tower_hypotheses(const Correspondence& corr, bool allow_unequal,
                              bool require_equal = false);

// Builds the level graph, preferring the separated fast path when available.
TowerGraph build_level(const TowerInstance& inst, int level);

struct CensusRun {
    TowerGraph graph;
    ComponentCensus cen;
    Json report;
};
CensusRun run_census(const TowerInstance& inst, int level, const std::string& spec_path,
                     bool allow_unequal);

Json run_cycles(const TowerInstance& inst, int level, int nmax, const std::string& spec_path,
                bool allow_unequal);

Json run_genus(const TowerSpecFile& spec, const TowerInstance& inst, int nmax,
               const std::string& spec_path);

Json run_invariants(const TowerSpecFile& spec, const TowerInstance& inst,
                    const std::optional<Rational>& ell_override, int rmax_scan_override,
                    const std::string& spec_path, bool allow_unequal);

struct ProbeParams {
    std::uint64_t p = 3;
    std::uint32_t m = 1;
    int degree = 2;
    int rmax = 3;
    std::optional<long long> budget;
    int threads = 1;  // worker cap; result order never depends on it
};

struct ProbeOutcome {
    Json report;
    std::vector<Json> violations;
    bool budget_exhausted = false;
};

ProbeOutcome run_probe(const ProbeParams& params);

// Raises BudgetExceeded when the probe stopped early; call after persisting
// the partial report.
void ensure_probe_complete(const ProbeOutcome& outcome);

// Number of worker threads to use: the smaller of `requested` and the
// TOWERLAB_THREADS environment variable when set (minimum 1).
int effective_thread_count(int requested);

}  // namespace towerlab
