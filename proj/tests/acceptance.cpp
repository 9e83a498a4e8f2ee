// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures. Time limits are part of each criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "edom/audit.hpp"
#include "edom/catalogue.hpp"
#include "edom/embedded_catalogue.hpp"
#include "edom/finite.hpp"
#include "edom/infinite.hpp"
#include "edom/pattern.hpp"
#include "edom/solver.hpp"
#include "edom/verify.hpp"

using namespace edom;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Outcome {
  bool ok = true;
  std::string detail;
};

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= limit_seconds;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %-34s %8.3fs (limit %gs) %s%s\n", pass ? "PASS" : "FAIL", id, name, secs, limit_seconds,
              out.detail.c_str(), in_time ? "" : " [over time limit]");
  std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const Catalogue7x7& cat = embedded_catalogue();

  criterion(1, "lattice domination 20x20", 1, [] {
    const LatticeDominationReport r = check_lattice_domination(20, 2);
    return Outcome{r.dominating && r.perfect,
                   std::string("dominating=") + (r.dominating ? "yes" : "no") + " perfect=" + (r.perfect ? "yes" : "no")};
  });

  criterion(2, "lattice counts m,n<=50", 5, [] {
    const CountReport r = check_counts(50, 30);
    return Outcome{r.bounds && r.extremes && r.closed_form, r.first_failure.empty() ? "all sizes" : r.first_failure};
  });

  criterion(3, "symbolic steps and tables", 1, [] {
    int failed = 0;
    const auto cases = check_symbolic_steps(10);
    for (const StepCase& c : cases) failed += c.result.ok() ? 0 : 1;
    std::string typos;
    bool consistent = true;
    for (const RotationCase& rc : kRotationCases) {
      const TableCheck tc = check_rotation_table(rc);
      consistent = consistent && tc.consistent;
      for (std::size_t i = 0; i < tc.rows.size(); ++i) {
        const TableRowCheck& row = tc.rows[i];
        if (!row.constant_matches) consistent = false;
        if (!row.coefficients_match || row.doubled_operator) {
          typos += std::string(" [") + std::string(to_string(rc.family)) + "/" + std::string(to_string(rc.attack)) +
                   " row " + std::to_string(i + 1) + ": '" + std::string(row.stated) + "' -> '" + row.computed + "']";
        }
      }
    }
    return Outcome{cases.size() == 40 && failed == 0 && consistent,
                   std::to_string(cases.size()) + " cases, " + std::to_string(failed) + " failed; reconciled" + typos};
  });

  criterion(4, "infinite strategy 10^4 attacks", 30, [] {
    const InfiniteRunReport r = run_infinite(10000, 1);
    return Outcome{r.violations == 0 && r.alternates && r.rounds == 10000,
                   std::to_string(r.violations) + " violations, alternates=" + (r.alternates ? "yes" : "no")};
  });

  criterion(5, "static construction 8..20", 10, [] {
    std::string bad;
    for (Coord m = 8; m <= 20; ++m) {
      for (Coord n = 8; n <= 20; ++n) {
        const GuardPlacement p = chang_dominating_set(m, n);
        if (!is_dominating(p) || static_cast<Coord>(p.size()) != chang_bound(m, n)) {
          if (bad.empty()) bad = std::to_string(m) + "x" + std::to_string(n);
        }
      }
    }
    return Outcome{bad.empty(), bad.empty() ? "169 sizes" : "first failure " + bad};
  });

  criterion(6, "full-boundary budget and endurance", 120, [&] {
    const FiniteStrategy strat(Variant::FullBoundary, nullptr);
    bool ok = true;
    std::string detail;
    for (auto [m, n] : {std::pair<Coord, Coord>{7, 7}, {7, 12}, {12, 12}, {17, 22}}) {
      const auto guards = static_cast<Coord>(strat.init(m, n).placement.size());
      ok = ok && guards * 5 == full_boundary_budget5(m, n);
      std::uint64_t rounds = 0;
      for (AttackerKind k : {AttackerKind::Random, AttackerKind::Greedy}) {
        const AuditReport r = audit_play(strat, m, n, k, 10000, 1);
        ok = ok && r.ok;
        rounds += r.rounds;
      }
      detail += std::to_string(m) + "x" + std::to_string(n) + ":" + std::to_string(guards) + "g/" +
                std::to_string(rounds) + "r ";
    }
    return Outcome{ok, detail};
  });

  criterion(7, "catalogue closure and replay", 600, [&] {
    const Catalogue7x7 derived = derive_catalogue_7x7();
    const bool same = derived == cat;
    const auto t0 = std::chrono::steady_clock::now();
    const CatalogueReport r = check_catalogue(cat);
    const double replay = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[160];
    std::snprintf(buf, sizeof buf, "derived==embedded %s, %zu transitions, replay %.3fs %s", same ? "yes" : "no",
                  r.transitions, replay, r.first_failure.c_str());
    return Outcome{same && r.ok() && replay < 1.0, buf};
  });

  criterion(8, "improved budget and 12x12 closure", 60, [&] {
    bool budget = true;
    int sizes = 0;
    for (Coord m = 7; m <= 52; m += 5) {
      for (Coord n = 7; n <= 52; n += 5) {
        budget = budget && static_cast<Coord>(init_improved(m, n, cat).placement.size()) * 5 == improved_budget5(m, n);
        ++sizes;
      }
    }
    const AuditReport r = audit_exhaustive(FiniteStrategy(Variant::Improved, &cat), 12, 12);
    return Outcome{budget && r.ok, std::to_string(sizes) + " sizes, 12x12 states " + std::to_string(r.states) +
                                       " edges " + std::to_string(r.edges) + (r.ok ? " closed" : " OPEN")};
  });

  criterion(9, "solver ground truth", 120, [] {
    bool ok = true;
    std::string detail;
    auto gi = [&](const std::string& g, int expected) {
      const GammaInfinityResult r = gamma_infinity(parse_graph(g));
      ok = ok && r.gamma_infinity == expected && r.gamma_infinity >= r.gamma;
      detail += g + "=" + std::to_string(r.gamma_infinity) + " ";
    };
    gi("path:5", 3);
    gi("path:2", 1);
    gi("grid:3x3", 3);
    gi("grid:2x3", 2);
    gi("grid:3x4", 4);
    gi("grid:4x4", 6);
    const auto p5 = eternal_safe_set(SmallGraph::make_path(5), 2).safe_count;
    ok = ok && p5 == 0;
    detail += "safe(P5,2)=" + std::to_string(p5) + " ";
    int compared = 0;
    for (const char* g : {"path:5", "path:7", "grid:3x3", "grid:3x4", "grid:4x4"}) {
      const SmallGraph graph = parse_graph(g);
      for (int k = 1; k <= graph.vertices; ++k) {
        try {
          EternalSolver(graph, k, 10000);
        } catch (const Error&) {
          continue;  // more than 10^4 configurations
        }
        const SafeSetResult base = eternal_safe_set(graph, k);
        for (EliminationOrder o : {EliminationOrder::Jacobi, EliminationOrder::InPlace}) {
          for (unsigned t : {1u, 3u, 8u}) {
            ok = ok && eternal_safe_set(graph, k, {o, t}).safe == base.safe;
            ++compared;
          }
        }
      }
    }
    detail += std::to_string(compared) + " order/thread runs agree";
    return Outcome{ok, detail};
  });

  criterion(10, "general budget 16..32", 10, [&] {
    const GeneralBudgetReport r = check_general_budget(cat, 16, 32);
    char buf[96];
    std::snprintf(buf, sizeof buf, "max excess/(m+n) = %.4f (bound 6), %zu sizes", r.max_ratio, r.rows.size());
    return Outcome{r.within(6.0), buf};
  });

  criterion(11, "CLI trace determinism", 120, [] {
    unsetenv("EG_TRACE_DIR");
    const fs::path dir = fs::temp_directory_path() / ("edom_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string bytes[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path trace = dir / ("run" + std::to_string(i) + ".jsonl");
      const std::string cmd = std::string("\"") + EDOM_CLI +
                              "\" simulate --m 12 --n 12 --variant improved --attacker random --rounds 2000 --seed 7 --trace \"" +
                              trace.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return Outcome{false, "CLI run failed"};
      bytes[i] = slurp(trace);
    }
    fs::remove_all(dir);
    const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
    return Outcome{same, std::to_string(bytes[0].size()) + " bytes, identical=" + (same ? "yes" : "no")};
  });

  std::printf("%d failed\n", failures);
  return failures;
}
