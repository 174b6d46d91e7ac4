#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "towerlab/report.hpp"

namespace {

using namespace towerlab;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path) write_text(*out_path, content);
    else std::cout << content;
}

struct Timer {
    const char* label;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~Timer() {
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
        std::fprintf(stderr, "%s finished in %.1f ms\n", label, ms);
    }
};

struct CensusArgs {
    std::string spec;
    int level = 1;
    std::optional<std::string> out, dot;
    bool allow_unequal = false;
};

struct CyclesArgs {
    std::string spec;
    int level = 1;
    int nmax = 6;
    std::optional<std::string> out;
    bool allow_unequal = false;
};

struct GenusArgs {
    std::string spec;
    int nmax = 6;
    std::optional<std::string> out;
};

struct InvariantsArgs {
    std::string spec;
    std::optional<std::string> ell;
    int rmax = 0;
    std::optional<std::string> out;
    bool allow_unequal = false;
};

struct ProbeArgs {
    std::uint64_t p = 3;
    std::uint32_t m = 1;
    int degree = 2;
    int rmax = 3;
    std::optional<long long> budget;
    std::string out;
    int threads = 0;
};

int do_census(const CensusArgs& a) {
    Timer t{"census"};
    TowerSpecFile spec = load_tower_spec(a.spec);
    TowerInstance inst = instantiate(spec);
    CensusRun run = run_census(inst, a.level, a.spec, a.allow_unequal);
    if (a.dot) write_text(*a.dot, export_dot(run.graph, run.cen));
    emit(a.out, render_report(run.report));
    return 0;
}

int do_cycles(const CyclesArgs& a) {
    Timer t{"cycles"};
    TowerSpecFile spec = load_tower_spec(a.spec);
    TowerInstance inst = instantiate(spec);
    Json report = run_cycles(inst, a.level, a.nmax, a.spec, a.allow_unequal);
    emit(a.out, render_report(report));
    return 0;
}

int do_genus(const GenusArgs& a) {
    Timer t{"genus"};
    TowerSpecFile spec = load_tower_spec(a.spec);
    TowerInstance inst = instantiate(spec);
    Json report = run_genus(spec, inst, a.nmax, a.spec);
    emit(a.out, render_report(report));
    return 0;
}

int do_invariants(const InvariantsArgs& a) {
    Timer t{"invariants"};
    TowerSpecFile spec = load_tower_spec(a.spec);
    TowerInstance inst = instantiate(spec);
    std::optional<Rational> ell;
    if (a.ell) ell = parse_rational(*a.ell);
    Json report = run_invariants(spec, inst, ell, a.rmax, a.spec, a.allow_unequal);
    emit(a.out, render_report(report));
    return 0;
}

int do_probe(const ProbeArgs& a) {
    Timer t{"probe"};
    double field_size = 1;
    for (std::uint32_t i = 0; i < a.m; ++i) field_size *= static_cast<double>(a.p);
    if (!a.budget && (field_size > 9.0 || a.degree > 3))
        throw SemanticError("unbounded probe is limited to fields of size <= 9 and degree <= 3; "
                            "pass --budget to override");

    ProbeParams params;
    params.p = a.p;
    params.m = a.m;
    params.degree = a.degree;
    params.rmax = a.rmax;
    params.budget = a.budget;
    params.threads = a.threads;
    ProbeOutcome outcome = run_probe(params);

    namespace fs = std::filesystem;
    fs::create_directories(a.out);
    write_text((fs::path(a.out) / "probe_report.json").string(), render_report(outcome.report));
    for (std::size_t i = 0; i < outcome.violations.size(); ++i) {
        write_text((fs::path(a.out) / ("violation_" + std::to_string(i) + ".json")).string(),
                   render_report(outcome.violations[i]));
    }
    std::fprintf(stderr, "probe: %s pairs checked, %zu violations\n",
                 outcome.report["results"]["pairs_checked"].dump().c_str(),
                 outcome.violations.size());
    ensure_probe_complete(outcome);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithmetic graphs, regular cores and asymptotic invariants of recursive "
                 "towers of curves over finite fields"};
    app.require_subcommand(1);

    CensusArgs census_args;
    auto* census_cmd = app.add_subcommand("census", "classify one level graph");
    census_cmd->add_option("--spec", census_args.spec, "tower file")->required();
    census_cmd->add_option("--level", census_args.level, "tower level r")->required();
    census_cmd->add_option("--out", census_args.out, "report path (default stdout)");
    census_cmd->add_option("--dot", census_args.dot, "write Graphviz rendering here");
    census_cmd->add_flag("--allow-unequal", census_args.allow_unequal,
                         "accept unequal projection degrees (zero growth)");

    CyclesArgs cycles_args;
    auto* cycles_cmd = app.add_subcommand("cycles", "count closed walks and test cycles");
    cycles_cmd->add_option("--spec", cycles_args.spec, "tower file")->required();
    cycles_cmd->add_option("--level", cycles_args.level, "tower level r")->required();
    cycles_cmd->add_option("--nmax", cycles_args.nmax, "largest walk length")->required();
    cycles_cmd->add_option("--out", cycles_args.out, "report path (default stdout)");
    cycles_cmd->add_flag("--allow-unequal", cycles_args.allow_unequal,
                         "accept unequal projection degrees");

    GenusArgs genus_args;
    auto* genus_cmd = app.add_subcommand("genus", "genus sequence of the tower");
    genus_cmd->add_option("--spec", genus_args.spec, "tower file")->required();
    genus_cmd->add_option("--nmax", genus_args.nmax, "largest level")->required();
    genus_cmd->add_option("--out", genus_args.out, "report path (default stdout)");

    InvariantsArgs inv_args;
    auto* inv_cmd = app.add_subcommand("invariants", "core detection and asymptotic growth");
    inv_cmd->add_option("--spec", inv_args.spec, "tower file")->required();
    inv_cmd->add_option("--ell", inv_args.ell, "growth constant as p/q (overrides the file)");
    inv_cmd->add_option("--rmax", inv_args.rmax, "scan levels 1..rmax instead of the file's list");
    inv_cmd->add_option("--out", inv_args.out, "report path (default stdout)");
    inv_cmd->add_flag("--allow-unequal", inv_args.allow_unequal,
                      "accept unequal projection degrees (zero growth)");

    ProbeArgs probe_args;
    auto* probe_cmd = app.add_subcommand("probe", "sweep degree-d map pairs for counterexamples");
    probe_cmd->add_option("--p", probe_args.p, "field characteristic")->required();
    probe_cmd->add_option("--m", probe_args.m, "field degree over the prime field");
    probe_cmd->add_option("--degree", probe_args.degree, "map degree")->required();
    probe_cmd->add_option("--rmax", probe_args.rmax, "levels to inspect per pair");
    probe_cmd->add_option("--budget", probe_args.budget, "max pairs to check");
    probe_cmd->add_option("--out", probe_args.out, "output directory")->required();
    probe_cmd->add_option("--threads", probe_args.threads, "worker threads (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (census_cmd->parsed()) return do_census(census_args);
        if (cycles_cmd->parsed()) return do_cycles(cycles_args);
        if (genus_cmd->parsed()) return do_genus(genus_args);
        if (inv_cmd->parsed()) return do_invariants(inv_args);
        if (probe_cmd->parsed()) return do_probe(probe_args);
    } catch (const SyntaxError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const SemanticError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const HypothesisViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const MultipleRegularCores& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const NegativeDeficiency& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const BudgetExceeded& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
