#pragma once

// Exact domination and eternal domination numbers of small paths and grids.
//
// Configurations are k-subsets stored as 64-bit masks and ranked in colex
// order. The eternal solver computes the greatest fixpoint of
//   safe(C) = dominating(C) and every attack v outside C has a safe C'
//             with v in C' reachable from C in one all-guards move.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edom/error.hpp"
#include "edom/grid.hpp"

namespace edom {

using Mask = std::uint64_t;

struct SmallGraph {
  int vertices = 0;
  std::vector<Mask> closed;    // closed neighbourhood of each vertex
  std::optional<GridDims> grid;  // vertex i is grid cell i in row-major order

  static SmallGraph make_grid(Coord m, Coord n) {
    const GridDims d(m, n);
    if (d.size() > 64) throw Error(ErrorCode::ExceedsLimit, "graphs are limited to 64 vertices");
    SmallGraph g;
    g.vertices = static_cast<int>(d.size());
    g.grid = d;
    for (std::size_t i = 0; i < d.size(); ++i) {
      Mask mk = 0;
      for (const Cell& c : closed_neighborhood(d.cell(i), d)) mk |= Mask{1} << d.index(c);
      g.closed.push_back(mk);
    }
    return g;
  }
  static SmallGraph make_path(Coord n) { return make_grid(1, n); }

  Mask all() const { return vertices == 64 ? ~Mask{0} : (Mask{1} << vertices) - 1; }
  bool dominates(Mask c) const {
    Mask covered = 0;
    for (Mask rest = c; rest; rest &= rest - 1) covered |= closed[static_cast<std::size_t>(__builtin_ctzll(rest))];
    return covered == all();
  }
};

/// "path:N" or "grid:MxN".
inline SmallGraph parse_graph(const std::string& s) {
  try {
    if (s.rfind("path:", 0) == 0) return SmallGraph::make_path(std::stoll(s.substr(5)));
    if (s.rfind("grid:", 0) == 0) {
      const auto x = s.find('x', 5);
      if (x == std::string::npos) throw Error(ErrorCode::Parse, "grid spec needs MxN");
      return SmallGraph::make_grid(std::stoll(s.substr(5, x - 5)), std::stoll(s.substr(x + 1)));
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Parse, "bad graph spec '" + s + "'");
  }
  throw Error(ErrorCode::Parse, "graph spec must be path:N or grid:MxN, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Domination number

/// Branch on the closed neighbourhood of the first undominated vertex.
inline int gamma_exhaustive(const SmallGraph& g) {
  if (g.vertices > 36) throw Error(ErrorCode::ExceedsLimit, "exhaustive gamma is limited to 36 vertices");
  int best = g.vertices;
  auto rec = [&](auto&& self, Mask covered, int used) -> void {
    if (used >= best) return;
    if (covered == g.all()) {
      best = used;
      return;
    }
    const int v = __builtin_ctzll(~covered & g.all());
    // each guard covers at most 5 vertices
    const int missing = __builtin_popcountll(~covered & g.all());
    if (used + (missing + 4) / 5 >= best) return;
    for (Mask cand = g.closed[static_cast<std::size_t>(v)]; cand; cand &= cand - 1) {
      self(self, covered | g.closed[static_cast<std::size_t>(__builtin_ctzll(cand))], used + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

/// Row-by-row profile dynamic programme for an m x n grid. Each column of the
/// frontier remembers its latest cell: guarded, dominated, or still waiting
/// for the cell below.
inline int gamma_grid(Coord m, Coord n) {
  if (m < 1 || n < 1) throw Error(ErrorCode::BadDimensions, "empty grid");
  if (m * n > 100) throw Error(ErrorCode::ExceedsLimit, "gamma is limited to 100 cells");
  if (n > m) std::swap(m, n);  // profile over the short side
  const int w = static_cast<int>(n);
  std::vector<int> pow3(static_cast<std::size_t>(w) + 1, 1);
  for (int i = 1; i <= w; ++i) pow3[static_cast<std::size_t>(i)] = pow3[static_cast<std::size_t>(i - 1)] * 3;
  enum : int { kGuard = 0, kDominated = 1, kWaiting = 2 };
  constexpr int kInf = 1 << 28;
  auto digit = [&](int s, int i) { return s / pow3[static_cast<std::size_t>(i)] % 3; };
  auto with = [&](int s, int i, int v) { return s + (v - digit(s, i)) * pow3[static_cast<std::size_t>(i)]; };

  int start = 0;
  for (int i = 0; i < w; ++i) start = with(start, i, kDominated);
  std::vector<int> cur(static_cast<std::size_t>(pow3[static_cast<std::size_t>(w)]), kInf);
  std::vector<int> nxt(cur.size());
  cur[static_cast<std::size_t>(start)] = 0;

  for (Coord r = 0; r < m; ++r) {
    for (int c = 0; c < w; ++c) {
      std::fill(nxt.begin(), nxt.end(), kInf);
      for (int s = 0; s < static_cast<int>(cur.size()); ++s) {
        const int cost = cur[static_cast<std::size_t>(s)];
        if (cost >= kInf) continue;
        const int above = digit(s, c);
        const int left = c > 0 ? digit(s, c - 1) : kDominated;
        for (int guard = 0; guard < 2; ++guard) {
          if (above == kWaiting && !guard) continue;  // last chance for the cell above
          int t = s;
          if (guard) {
            t = with(t, c, kGuard);
            if (c > 0 && left == kWaiting) t = with(t, c - 1, kDominated);
          } else {
            t = with(t, c, (above == kGuard || left == kGuard) ? kDominated : kWaiting);
          }
          int& slot = nxt[static_cast<std::size_t>(t)];
          slot = std::min(slot, cost + guard);
        }
      }
      std::swap(cur, nxt);
    }
  }
  int best = kInf;
  for (int s = 0; s < static_cast<int>(cur.size()); ++s) {
    bool done = true;
    for (int i = 0; i < w; ++i)
      if (digit(s, i) == kWaiting) done = false;
    if (done) best = std::min(best, cur[static_cast<std::size_t>(s)]);
  }
  return best;
}

inline int gamma(const SmallGraph& g) {
  if (g.grid) return gamma_grid(g.grid->m, g.grid->n);
  return gamma_exhaustive(g);
}

// ---------------------------------------------------------------------------
// Eternal domination

namespace solver_detail {

inline std::vector<std::vector<std::uint64_t>> binomials(int n) {
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n) + 1,
                                            std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[static_cast<std::size_t>(i)][0] = 1;
    for (int j = 1; j <= i; ++j) {
      const auto a = c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      const auto b = c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (a + b < a) ? UINT64_MAX : a + b;
    }
  }
  return c;
}

}  // namespace solver_detail

enum class EliminationOrder : std::uint8_t { Jacobi, InPlace };

struct SafeSetOptions {
  EliminationOrder order = EliminationOrder::Jacobi;
  unsigned threads = 1;
  std::uint64_t cap = 10'000'000;
};

struct SafeSetResult {
  int k = 0;
  std::uint64_t safe_count = 0;
  std::optional<Mask> witness;  // smallest safe configuration in colex order
  int iterations = 0;
  std::vector<Mask> safe;       // all safe configurations, colex order
  double seconds = 0;
};

class EternalSolver {
 public:
  EternalSolver(const SmallGraph& g, int k, std::uint64_t cap) : g_(g), k_(k) {
    if (k < 0 || k > g.vertices) throw Error(ErrorCode::BadDimensions, "guard count out of range");
    binom_ = solver_detail::binomials(g.vertices);
    const std::uint64_t total = binom_[static_cast<std::size_t>(g.vertices)][static_cast<std::size_t>(k)];
    if (total > cap) {
      throw Error(ErrorCode::ExceedsLimit, std::to_string(total) + " configurations exceed the cap of " + std::to_string(cap));
    }
    configs_.reserve(total);
    if (k == 0) {
      configs_.push_back(0);
    } else {
      // Gosper's hack walks k-subsets in increasing numeric (= colex) order.
      Mask c = (Mask{1} << k) - 1;
      for (std::uint64_t i = 0; i < total; ++i) {
        configs_.push_back(c);
        if (i + 1 == total) break;
        const Mask u = c & (~c + 1);
        const Mask v = c + u;
        c = v | (((v ^ c) / u) >> 2);
      }
    }
  }

  std::uint64_t size() const { return configs_.size(); }

  std::uint64_t rank(Mask c) const {
    std::uint64_t r = 0;
    int i = 1;
    for (Mask rest = c; rest; rest &= rest - 1, ++i) {
      r += binom_[static_cast<std::size_t>(__builtin_ctzll(rest))][static_cast<std::size_t>(i)];
    }
    return r;
  }

  SafeSetResult solve(const SafeSetOptions& opt = {}) const {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t total = configs_.size();
    std::vector<std::uint8_t> alive(total);
    for (std::size_t i = 0; i < total; ++i) alive[i] = g_.dominates(configs_[i]) ? 1 : 0;

    SafeSetResult res;
    res.k = k_;
    bool changed = true;
    while (changed) {
      ++res.iterations;
      changed = false;
      if (opt.order == EliminationOrder::InPlace) {
        for (std::size_t i = 0; i < total; ++i) {
          if (alive[i] && !defended(configs_[i], alive)) {
            alive[i] = 0;
            changed = true;
          }
        }
      } else {
        std::vector<std::uint8_t> kill(total, 0);
        const unsigned threads = std::max(1u, opt.threads);
        std::atomic<std::size_t> next{0};
        constexpr std::size_t kChunk = 256;
        auto work = [&] {
          for (std::size_t lo = next.fetch_add(kChunk); lo < total; lo = next.fetch_add(kChunk)) {
            const std::size_t hi = std::min(total, lo + kChunk);
            for (std::size_t i = lo; i < hi; ++i)
              if (alive[i] && !defended(configs_[i], alive)) kill[i] = 1;
          }
        };
        if (threads == 1) {
          work();
        } else {
          std::vector<std::thread> pool;
          for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
          for (auto& th : pool) th.join();
        }
        for (std::size_t i = 0; i < total; ++i) {
          if (kill[i]) {
            alive[i] = 0;
            changed = true;
          }
        }
      }
    }
    for (std::size_t i = 0; i < total; ++i)
      if (alive[i]) res.safe.push_back(configs_[i]);
    res.safe_count = res.safe.size();
    if (!res.safe.empty()) res.witness = res.safe.front();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

 private:
  // Every vertex outside c is covered by some live successor containing it.
  bool defended(Mask c, const std::vector<std::uint8_t>& alive) const {
    const Mask need = g_.all() & ~c;
    if (!need) return true;
    int guards[64];
    int k = 0;
    for (Mask rest = c; rest; rest &= rest - 1) guards[k++] = __builtin_ctzll(rest);
    Mask reached = 0;
    auto rec = [&](auto&& self, int i, Mask used) -> bool {
      if (i == k) {
        if ((used & need & ~reached) && alive[rank(used)]) reached |= used & need;
        return (reached & need) == need;
      }
      for (Mask opts = g_.closed[static_cast<std::size_t>(guards[i])] & ~used; opts; opts &= opts - 1) {
        if (self(self, i + 1, used | (opts & (~opts + 1)))) return true;
      }
      return false;
    };
    return rec(rec, 0, 0);
  }

  const SmallGraph& g_;
  int k_;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<Mask> configs_;
};

inline SafeSetResult eternal_safe_set(const SmallGraph& g, int k, const SafeSetOptions& opt = {}) {
  return EternalSolver(g, k, opt.cap).solve(opt);
}

/// ceil(mn/5) + 2(m + n) for grids, the vertex count otherwise.
inline int default_kmax(const SmallGraph& g) {
  if (!g.grid) return g.vertices;
  const Coord m = g.grid->m;
  const Coord n = g.grid->n;
  return static_cast<int>(std::min<Coord>((m * n + 4) / 5 + 2 * (m + n), m * n));
}

struct GammaInfinityResult {
  int gamma_infinity = 0;
  int gamma = 0;
  SafeSetResult safe;
};

/// Smallest k <= k_max with a non-empty safe set, scanning from gamma up.
inline GammaInfinityResult gamma_infinity(const SmallGraph& g, std::optional<int> k_max = std::nullopt,
                                          const SafeSetOptions& opt = {}) {
  const int limit = std::min(k_max.value_or(default_kmax(g)), g.vertices);
  GammaInfinityResult out;
  out.gamma = gamma(g);
  // Below gamma nothing even dominates; check the first few anyway when cheap.
  for (int k = 1; k <= limit; ++k) {
    if (k < out.gamma) {
      const auto total = solver_detail::binomials(g.vertices)[static_cast<std::size_t>(g.vertices)][static_cast<std::size_t>(k)];
      if (total > 100000) continue;
    }
    SafeSetResult r = eternal_safe_set(g, k, opt);
    if (r.safe_count > 0) {
      if (k < out.gamma) throw Error(ErrorCode::Internal, "eternal number below the domination number");
      out.gamma_infinity = k;
      out.safe = std::move(r);
      return out;
    }
  }
  throw Error(ErrorCode::NotFound, "no k <= " + std::to_string(limit) + " eternally dominates");
}

inline std::vector<Cell> mask_cells(const SmallGraph& g, Mask c) {
  std::vector<Cell> out;
  const GridDims d = g.grid.value_or(GridDims(1, g.vertices));
  for (Mask rest = c; rest; rest &= rest - 1) out.push_back(d.cell(static_cast<std::size_t>(__builtin_ctzll(rest))));
  return out;
}

}  // namespace edom
