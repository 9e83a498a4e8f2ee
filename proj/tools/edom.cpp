// edom: experiments, audits and the session server.
//
// Exit status: 0 all checks passed, 1 usage or input error, 2 invariant
// violation (a counterexample is written next to the trace).

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "edom/audit.hpp"
#include "edom/catalogue.hpp"
#include "edom/embedded_catalogue.hpp"
#include "edom/finite.hpp"
#include "edom/infinite.hpp"
#include "edom/pattern.hpp"
#include "edom/server.hpp"
#include "edom/session.hpp"
#include "edom/solver.hpp"
#include "edom/trace.hpp"
#include "edom/verify.hpp"

namespace fs = std::filesystem;
using namespace edom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

// EG_TRACE_DIR replaces the directory part of any output path.
fs::path output_path(const std::string& requested) {
  fs::path p(requested);
  if (const char* dir = std::getenv("EG_TRACE_DIR"); dir && *dir) p = fs::path(dir) / p.filename();
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

std::string cell_str(const Cell& c) { return "[" + std::to_string(c.row) + "," + std::to_string(c.col) + "]"; }

// ---------------------------------------------------------------------------

struct SimulateArgs {
  Coord m = 0;
  Coord n = 0;
  std::string variant = "improved";
  std::string attacker = "random";
  std::uint64_t rounds = 1000;
  std::uint64_t seed = 1;
  std::string trace;
  bool no_ring_shift = false;
};

void add_simulate_options(CLI::App* cmd, SimulateArgs& a) {
  cmd->add_option("--m", a.m, "rows")->required();
  cmd->add_option("--n", a.n, "columns")->required();
  cmd->add_option("--variant", a.variant, "full | improved | general")
      ->check(CLI::IsMember({"full", "improved", "general"}));
  cmd->add_option("--attacker", a.attacker, "random | greedy | exhaustive")
      ->check(CLI::IsMember({"random", "greedy", "exhaustive"}));
  cmd->add_option("--rounds", a.rounds, "attacks to play");
  cmd->add_option("--seed", a.seed, "seed for the random attacker");
  cmd->add_option("--trace", a.trace, "JSONL trace output");
  cmd->add_flag("--no-ring-shift", a.no_ring_shift, "full variant without ring shifting (negative control)");
}

// Reloads a trace and checks each record and the chain between records.
std::size_t revalidate_trace(const fs::path& path, const GameState& start) {
  std::ifstream in(path);
  std::string line;
  std::size_t count = 0;
  std::vector<Cell> prev = start.placement.cells();
  while (std::getline(in, line)) {
    const TraceRecord t = parse_trace_line(line);
    if (t.round != count + 1) throw Error(ErrorCode::Parse, "trace round numbers are not consecutive");
    std::vector<Cell> sources;
    for (const Move& mv : t.plan.moves) sources.push_back(mv.from);
    std::sort(sources.begin(), sources.end());
    if (sources != prev) throw Error(ErrorCode::Parse, "round " + std::to_string(t.round) + " does not start where the previous ended");
    prev = t.placement_after;
    ++count;
  }
  return count;
}

void write_counterexample(const SimulateArgs& a, const Counterexample& ce) {
  nlohmann::ordered_json j;
  j["variant"] = a.variant;
  j["m"] = a.m;
  j["n"] = a.n;
  j["attacker"] = a.attacker;
  j["seed"] = a.seed;
  auto attacks = nlohmann::ordered_json::array();
  for (const Cell& c : ce.attacks) attacks.push_back(cell_json(c));
  j["attacks"] = attacks;
  j["dump"] = ce.dump;
  const fs::path p = output_path(a.trace.empty() ? "counterexample.json" : a.trace + ".counterexample.json");
  std::ofstream(p) << j.dump(2) << "\n";
  std::cerr << "counterexample after " << ce.attacks.size() << " attacks written to " << p.string() << "\n"
            << ce.dump << "\n";
}

int run_simulate(const SimulateArgs& a) {
  const Variant v = parse_variant(a.variant);
  FullBoundaryOptions opt;
  opt.shift_ring = !a.no_ring_shift;
  const FiniteStrategy strategy(v, &embedded_catalogue(), opt);
  const GameState start = strategy.init(a.m, a.n);
  std::cout << "variant " << to_string(v) << " grid " << a.m << "x" << a.n << " guards " << start.placement.size()
            << " pattern " << to_string(start.interior_pattern) << "\n";

  const AttackerKind kind = parse_attacker(a.attacker);
  if (kind == AttackerKind::Exhaustive) {
    const AuditReport rep = audit_exhaustive(strategy, a.m, a.n);
    std::cout << "attacker exhaustive states " << rep.states << " edges " << rep.edges << " closed "
              << (rep.ok ? "yes" : "no") << "\n";
    if (!rep.ok) {
      write_counterexample(a, *rep.counterexample);
      return kExitViolation;
    }
    return kExitOk;
  }

  std::ofstream trace;
  fs::path trace_path;
  if (!a.trace.empty() || std::getenv("EG_TRACE_DIR")) {
    const std::string name = !a.trace.empty() ? a.trace
                                               : "simulate_" + a.variant + "_" + std::to_string(a.m) + "x" +
                                                     std::to_string(a.n) + "_" + a.attacker + "_s" +
                                                     std::to_string(a.seed) + ".jsonl";
    trace_path = output_path(name);
    trace.open(trace_path, std::ios::trunc);
    if (!trace) throw Error(ErrorCode::Internal, "cannot write " + trace_path.string());
  }
  GameState last = start;
  const AuditReport rep = audit_play(strategy, a.m, a.n, kind, a.rounds, a.seed,
                                     [&](const Cell& attack, const StepResult& r, const InvariantFlags& flags) {
                                       if (trace.is_open()) trace << to_jsonl(make_record(attack, r, flags)) << "\n";
                                       last = r.state;
                                     });
  trace.close();
  std::cout << "attacker " << a.attacker << " seed " << a.seed << " rounds " << rep.rounds << " violations "
            << (rep.ok ? 0 : 1) << "\n";
  std::cout << "final pattern " << to_string(last.interior_pattern) << " hash "
            << hex64(placement_hash(last.placement.cells())) << "\n";
  if (!trace_path.empty()) {
    const std::size_t n = revalidate_trace(trace_path, start);
    std::cout << "trace " << trace_path.string() << " records " << n << " revalidated\n";
  }
  if (!rep.ok) {
    write_counterexample(a, *rep.counterexample);
    return kExitViolation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_verify_tables() {
  bool ok = true;
  std::vector<std::string> reconciled;
  for (const RotationCase& rc : kRotationCases) {
    const TableCheck tc = check_rotation_table(rc);
    const std::string name = std::string(to_string(rc.family)) + "/" + std::string(to_string(rc.attack));
    std::cout << "case " << std::left << std::setw(16) << name << " attack square " << rc.attack_square
              << " pattern square " << rc.pattern_square << " residues "
              << (tc.consistent ? "consistent" : "INCONSISTENT") << "\n";
    ok = ok && tc.consistent;
    for (std::size_t i = 0; i < 5; ++i) {
      const TableRowCheck& row = tc.rows[i];
      if (row.coefficients_match && row.constant_matches && !row.doubled_operator) continue;
      std::string what;
      if (!row.coefficients_match) what += "coefficients differ";
      if (!row.constant_matches) what += std::string(what.empty() ? "" : ", ") + "constant differs";
      if (row.doubled_operator) what += std::string(what.empty() ? "" : ", ") + "doubled operator";
      reconciled.push_back(name + " row " + std::to_string(i + 1) + ": stated '" + std::string(row.stated) +
                           "', computed '" + row.computed + "' (" + what + ")");
    }
    for (int t = 0; t < 5; ++t) {
      const Cell guard = rc.family == Family::Straight ? Cell{t, 0} : Cell{0, t};
      const Cell attack = guard + offset(rc.attack);
      const StepVerification sv =
          verify_step_report({rc.family, Residue(t)}, attack, Window::around(attack, 10));
      if (!sv.ok()) {
        ok = false;
        std::cout << "  t=" << t << " window check FAILED: " << to_string(sv.move.reason) << " " << sv.move.detail
                  << (sv.matches_lattice ? "" : " lattice-mismatch") << (sv.dominating ? "" : " not-dominating")
                  << "\n";
      }
    }
  }
  std::cout << "window simulation: " << (ok ? "all 40 cases pass" : "FAILURES") << "\n";
  std::cout << "stated residues reconciled against computed: " << reconciled.size() << "\n";
  for (const auto& r : reconciled) std::cout << "  " << r << "\n";
  return ok ? kExitOk : kExitViolation;
}

int run_verify_steps(Coord radius) {
  int failures = 0;
  for (const StepCase& c : check_symbolic_steps(radius)) {
    std::cout << to_string(c.family) << " " << to_string(c.direction) << " t=" << c.t << " attack "
              << cell_str(c.attack) << " " << (c.result.ok() ? "ok" : "FAIL") << "\n";
    if (!c.result.ok()) ++failures;
  }
  std::cout << "cases 40 failures " << failures << "\n";
  return failures ? kExitViolation : kExitOk;
}

int run_count_bounds(Coord max, Coord enumerate_max) {
  const CountReport r = check_counts(max, enumerate_max);
  std::cout << "grids 1.." << max << " squared, 10 placements each\n";
  std::cout << "floor/ceil bounds " << (r.bounds ? "hold" : "FAIL") << "\n";
  std::cout << "both extremes attained " << (r.extremes ? "yes" : "NO") << "\n";
  std::cout << "closed form = enumeration up to " << enumerate_max << " " << (r.closed_form ? "yes" : "NO") << "\n";
  if (!r.first_failure.empty()) std::cout << "first failure: " << r.first_failure << "\n";
  return r.bounds && r.extremes && r.closed_form ? kExitOk : kExitViolation;
}

int run_count_general(Coord lo, Coord hi) {
  const GeneralBudgetReport r = check_general_budget(embedded_catalogue(), lo, hi);
  std::cout << "m n guards chang excess excess/(m+n)\n";
  for (const auto& row : r.rows) {
    std::cout << row.m << " " << row.n << " " << row.guards << " " << row.chang << " " << row.excess << " "
              << std::fixed << std::setprecision(3) << static_cast<double>(row.excess) / static_cast<double>(row.m + row.n)
              << "\n";
  }
  std::cout << "measured C " << std::fixed << std::setprecision(3) << r.max_ratio << " (bound 6)\n";
  return r.within(6.0) ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------

int run_solve(const std::string& what, const std::string& graph, std::optional<int> kmax, unsigned threads,
              const std::string& order, std::optional<int> k) {
  const SmallGraph g = parse_graph(graph);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  const GridDims d = g.grid.value_or(GridDims(1, g.vertices));
  if (what == "gamma") {
    const int v = gamma(g);
    std::cout << "graph " << graph << " gamma " << v << " time " << std::setprecision(3) << elapsed() << "s\n";
    return kExitOk;
  }
  SafeSetOptions opt;
  opt.threads = threads;
  opt.order = order == "inplace" ? EliminationOrder::InPlace : EliminationOrder::Jacobi;
  if (what == "safe-set") {
    if (!k) throw Error(ErrorCode::Parse, "safe-set needs --k");
    const SafeSetResult r = eternal_safe_set(g, *k, opt);
    std::cout << "graph " << graph << " k " << r.k << " safe_count " << r.safe_count << " iterations " << r.iterations
              << "\n";
    if (r.witness) std::cout << render(mask_cells(g, *r.witness), Window::of(d));
    return kExitOk;
  }
  const GammaInfinityResult r = gamma_infinity(g, kmax, opt);
  std::cout << "graph " << graph << " gamma " << r.gamma << " gamma_inf " << r.gamma_infinity << "\n";
  std::cout << "k " << r.safe.k << " safe_count " << r.safe.safe_count << " iterations " << r.safe.iterations << "\n";
  std::cout << "witness\n" << render(mask_cells(g, *r.safe.witness), Window::of(d));
  std::cout << "time " << std::setprecision(3) << elapsed() << "s\n";
  return kExitOk;
}

int run_catalogue_derive(const std::string& out, bool check) {
  const auto t0 = std::chrono::steady_clock::now();
  const Catalogue7x7 cat = derive_catalogue_7x7();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = serialize(cat);
  const CatalogueReport rep = check_catalogue(cat);
  std::cerr << "derived in " << std::setprecision(3) << secs << "s, " << rep.transitions << " transitions, "
            << (rep.ok() ? "closed and symmetric" : "CHECK FAILED: " + rep.first_failure) << "\n";
  if (!out.empty()) {
    const fs::path p = output_path(out);
    std::ofstream(p, std::ios::binary) << text;
    std::cerr << "written " << p.string() << "\n";
  } else if (!check) {
    std::cout << text;
  }
  if (check) {
    const bool same = text == std::string(kEmbeddedCatalogue);
    std::cerr << "matches committed catalogue: " << (same ? "yes" : "NO") << "\n";
    if (!same) return kExitViolation;
  }
  return rep.ok() ? kExitOk : kExitViolation;
}

int run_catalogue_show(std::optional<int> id) {
  const Catalogue7x7& cat = embedded_catalogue();
  const CatalogueReport rep = check_catalogue(cat);
  std::cout << "catalogue version " << cat.version << " transitions " << rep.transitions << " "
            << (rep.ok() ? "closed, symmetric" : "INVALID: " + rep.first_failure) << "\n";
  for (int i = 0; i < 10; ++i) {
    if (id && *id != i) continue;
    std::map<int, int> targets;
    for (const auto& [a, tr] : cat.transitions[static_cast<std::size_t>(i)]) ++targets[tr.to];
    std::cout << "\n" << i << " " << to_string(LatticePlacement::from_id(i)) << " ->";
    for (const auto& [to, k] : targets) std::cout << " " << to << "(" << k << ")";
    std::cout << "\n" << render(cat.placement(i));
  }
  return rep.ok() ? kExitOk : kExitViolation;
}

int run_chang(Coord m, Coord n) {
  const GuardPlacement p = chang_dominating_set(m, n);
  std::cout << m << "x" << n << " guards " << p.size() << " bound " << chang_bound(m, n) << " dominating "
            << (is_dominating(p) ? "yes" : "no") << "\n"
            << render(p);
  return kExitOk;
}

int run_pattern_count(Coord m, Coord n) {
  std::cout << "placement count (grid " << m << "x" << n << ", floor " << m * n / 5 << ", ceil " << (m * n + 4) / 5
            << ")\n";
  for (const LatticePlacement& lp : all_lattices())
    std::cout << to_string(lp) << " " << count_restriction(m, n, lp.t, lp.family) << "\n";
  return kExitOk;
}

int run_pattern_render(Coord m, Coord n, const std::string& family, int t) {
  const LatticePlacement lp{parse_family(family), Residue(t)};
  std::cout << render(materialize(lp, GridDims(m, n)));
  return kExitOk;
}

int run_infinite_cmd(std::uint64_t rounds, std::uint64_t seed, const std::string& family, int t, Coord window,
                     const std::string& trace_name) {
  if (window < 9 || window % 2 == 0) throw Error(ErrorCode::BadDimensions, "--window must be odd and at least 9");
  std::ofstream trace;
  fs::path trace_path;
  if (!trace_name.empty()) {
    trace_path = output_path(trace_name);
    trace.open(trace_path, std::ios::trunc);
    if (!trace) throw Error(ErrorCode::Internal, "cannot write " + trace_path.string());
  }
  std::uint64_t round = 0;
  auto observe = [&](const Cell& a, const SymbolicStep& s, bool ok) {
    ++round;
    if (!trace.is_open()) return;
    nlohmann::ordered_json j;
    j["v"] = kTraceSchemaVersion;
    j["round"] = round;
    j["attack"] = cell_json(a);
    j["guard"] = cell_json(s.guard);
    auto moves = nlohmann::ordered_json::array();
    for (const Move& mv : s.local_moves.moves)
      if (mv.from != mv.to) moves.push_back(nlohmann::ordered_json::array({cell_json(s.guard + mv.from), cell_json(s.guard + mv.to)}));
    j["rotation"] = moves;
    j["pattern_after"] = pattern_json(s.after);
    j["window_ok"] = ok;
    trace << j.dump() << "\n";
  };
  const InfiniteRunReport r =
      edom::run_infinite(rounds, seed, {parse_family(family), Residue(t)}, 10, (window - 1) / 2, observe);
  if (trace.is_open()) std::cout << "trace " << trace_path.string() << " records " << round << "\n";
  std::cout << "rounds " << r.rounds << " violations " << r.violations << " family alternates "
            << (r.alternates ? "yes" : "no") << " final " << to_string(r.final_pattern) << "\n";
  return r.violations == 0 && r.alternates ? kExitOk : kExitViolation;
}

volatile std::sig_atomic_t g_stop = 0;

int run_serve(int port) {
  SessionRegistry reg(embedded_catalogue());
  SessionServer server(reg);
  const int bound = server.start(port);
  std::cout << "listening on 127.0.0.1:" << bound << std::endl;
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eternal domination on grids: strategies, audits and exact solver"};
  app.require_subcommand(1);
  std::function<int()> action;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "play a finite strategy against an attacker");
  add_simulate_options(simulate, sim);
  simulate->callback([&] { action = [&] { return run_simulate(sim); }; });

  auto* finite = app.add_subcommand("finite", "finite-grid strategies");
  finite->require_subcommand(1);
  auto* finite_sim = finite->add_subcommand("simulate", "same as the top-level simulate");
  add_simulate_options(finite_sim, sim);
  finite_sim->callback([&] { action = [&] { return run_simulate(sim); }; });

  auto* infinite = app.add_subcommand("infinite", "symbolic strategy on the infinite grid");
  infinite->require_subcommand(1);
  auto* inf_sim = infinite->add_subcommand("simulate", "random attacks with window verification");
  std::uint64_t inf_rounds = 10000;
  std::uint64_t inf_seed = 1;
  std::string inf_family = "straight";
  int inf_t = 0;
  Coord inf_window = 21;
  std::string inf_trace;
  inf_sim->add_option("--rounds,--steps", inf_rounds);
  inf_sim->add_option("--window", inf_window, "side of the verification window");
  inf_sim->add_option("--trace", inf_trace, "JSONL trace output");
  inf_sim->add_option("--seed", inf_seed);
  inf_sim->add_option("--family", inf_family)->check(CLI::IsMember({"straight", "transposed"}));
  inf_sim->add_option("--t", inf_t)->check(CLI::Range(0, 4));
  inf_sim->callback([&] { action = [&] { return run_infinite_cmd(inf_rounds, inf_seed, inf_family, inf_t, inf_window, inf_trace); }; });

  auto* solve = app.add_subcommand("solve", "exact gamma / eternal gamma on small graphs");
  std::string solve_what;
  std::string graph;
  std::optional<int> kmax;
  std::optional<int> solve_k;
  unsigned threads = 1;
  std::string order = "jacobi";
  solve->add_option("what", solve_what, "gamma | gamma-inf | safe-set")
      ->required()
      ->check(CLI::IsMember({"gamma", "gamma-inf", "safe-set"}));
  solve->add_option("--graph", graph, "path:N or grid:MxN")->required();
  solve->add_option("--kmax", kmax);
  solve->add_option("--k", solve_k, "guard count for safe-set");
  solve->add_option("--threads", threads);
  solve->add_option("--order", order)->check(CLI::IsMember({"jacobi", "inplace"}));
  solve->callback([&] { action = [&] { return run_solve(solve_what, graph, kmax, threads, order, solve_k); }; });

  auto* verify = app.add_subcommand("verify", "check the transition tables and single steps");
  std::string verify_what;
  Coord radius = 10;
  verify->add_option("what", verify_what, "tables | lemma1")->required()->check(CLI::IsMember({"tables", "lemma1"}));
  verify->add_option("--radius", radius, "window radius around the attack");
  verify->callback([&] {
    action = [&] { return verify_what == "tables" ? run_verify_tables() : run_verify_steps(radius); };
  });

  auto* count = app.add_subcommand("count", "counting checks");
  std::string count_what;
  Coord count_max = 50;
  Coord count_enum = 30;
  Coord lo = 16;
  Coord hi = 32;
  count->add_option("what", count_what, "lemma | general")->required()->check(CLI::IsMember({"lemma", "general"}));
  count->add_option("--max", count_max);
  count->add_option("--enumerate", count_enum);
  count->add_option("--lo", lo);
  count->add_option("--hi", hi);
  count->callback([&] {
    action = [&] { return count_what == "lemma" ? run_count_bounds(count_max, count_enum) : run_count_general(lo, hi); };
  });

  auto* catalogue = app.add_subcommand("catalogue", "the 7x7 catalogue");
  std::string cat_what;
  std::string cat_out;
  bool cat_check = false;
  std::optional<int> cat_id;
  catalogue->add_option("what", cat_what, "derive | show")->required()->check(CLI::IsMember({"derive", "show"}));
  catalogue->add_option("--out", cat_out, "write the derived catalogue here");
  catalogue->add_flag("--check", cat_check, "compare the derivation with the committed file");
  catalogue->add_option("--id", cat_id)->check(CLI::Range(0, 9));
  catalogue->callback([&] {
    action = [&] { return cat_what == "derive" ? run_catalogue_derive(cat_out, cat_check) : run_catalogue_show(cat_id); };
  });

  auto* chang = app.add_subcommand("chang", "static dominating set with floor((m+2)(n+2)/5) - 4 guards");
  Coord cm = 0;
  Coord cn = 0;
  chang->add_option("--m", cm)->required();
  chang->add_option("--n", cn)->required();
  chang->callback([&] { action = [&] { return run_chang(cm, cn); }; });

  auto* pattern = app.add_subcommand("pattern", "lattice placements on a finite grid");
  std::string pat_what;
  Coord pm = 0;
  Coord pn = 0;
  std::string pfamily = "straight";
  int pt = 0;
  pattern->add_option("what", pat_what, "count | render")->required()->check(CLI::IsMember({"count", "render"}));
  pattern->add_option("--m", pm)->required();
  pattern->add_option("--n", pn)->required();
  pattern->add_option("--family", pfamily)->check(CLI::IsMember({"straight", "transposed"}));
  pattern->add_option("--t", pt)->check(CLI::Range(0, 4));
  pattern->callback([&] {
    action = [&] { return pat_what == "count" ? run_pattern_count(pm, pn) : run_pattern_render(pm, pn, pfamily, pt); };
  });

  auto* serve = app.add_subcommand("serve", "session server, newline-delimited JSON over TCP");
  int port = kDefaultPort;
  serve->add_option("--port", port);
  serve->callback([&] { action = [&] { return run_serve(port); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvariantViolation ? kExitViolation : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
