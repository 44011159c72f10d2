#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tcube/cubic.hpp"
#include "tcube/error.hpp"
#include "tcube/products.hpp"
#include "tcube/snf.hpp"
#include "tcube/systems.hpp"

namespace tcube {

// Edges hold 0-based vertex indices, kept sorted and duplicate-free.
struct Hypergraph {
  std::vector<std::string> vertex_names;
  std::vector<std::vector<int>> edges;
};

struct HypergraphReport {
  bool valid = false;
  std::vector<std::string> violations;
};

inline Hypergraph normalized(Hypergraph h) {
  for (auto& e : h.edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return h;
}

inline HypergraphReport validate(const Hypergraph& h_in) {
  const Hypergraph h = normalized(h_in);
  HypergraphReport report;
  const int nv = static_cast<int>(h.vertex_names.size());
  if (nv == 0) report.violations.push_back("vertex set is empty");
  std::vector<bool> covered(static_cast<std::size_t>(nv), false);
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    if (h.edges[i].empty())
      report.violations.push_back("edge " + std::to_string(i + 1) + " is empty");
    for (int v : h.edges[i]) {
      if (v < 0 || v >= nv) {
        report.violations.push_back("edge " + std::to_string(i + 1) + " references vertex index " +
                                    std::to_string(v));
      } else {
        covered[static_cast<std::size_t>(v)] = true;
      }
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!covered[static_cast<std::size_t>(v)])
      report.violations.push_back("vertex " + h.vertex_names[static_cast<std::size_t>(v)] +
                                  " is not covered by any edge");
  report.valid = report.violations.empty();
  return report;
}

// Subset-freeness: no edge contained in a distinct edge. Duplicate edges
// count as mutual containment.
inline bool is_simple(const Hypergraph& h_in) {
  const Hypergraph h = normalized(h_in);
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    for (std::size_t j = 0; j < h.edges.size(); ++j) {
      if (i == j) continue;
      if (std::includes(h.edges[j].begin(), h.edges[j].end(), h.edges[i].begin(),
                        h.edges[i].end()))
        return false;
    }
  }
  return true;
}

// Dual: one vertex per original edge (named e1, e2, ...), one edge per
// original vertex collecting the edges that contain it.
inline Hypergraph dual(const Hypergraph& h_in) {
  const Hypergraph h = normalized(h_in);
  const HypergraphReport report = validate(h);
  if (!report.valid) throw DomainError("dual: invalid hypergraph: " + report.violations.front());
  Hypergraph d;
  d.vertex_names.reserve(h.edges.size());
  for (std::size_t j = 0; j < h.edges.size(); ++j)
    d.vertex_names.push_back("e" + std::to_string(j + 1));
  d.edges.assign(h.vertex_names.size(), {});
  for (std::size_t j = 0; j < h.edges.size(); ++j)
    for (int v : h.edges[j]) d.edges[static_cast<std::size_t>(v)].push_back(static_cast<int>(j));
  for (auto& e : d.edges) std::sort(e.begin(), e.end());
  return d;
}

struct GameConfig {
  int n_manufacturers = 2;
  int n_wholesalers = 3;
  int n_markets = 4;
  long long modulus = 12;
  int alphabet_x = 2;  // manufacturer strategies
  int alphabet_y = 3;  // wholesaler strategies
  int alphabet_z = 2;  // market strategies
};

inline void validate_config(const GameConfig& c) {
  if (c.n_manufacturers < 1 || c.n_wholesalers < 1 || c.n_markets < 1)
    throw RangeError("GameConfig: player counts must be positive");
  if (c.alphabet_x < 1 || c.alphabet_y < 1 || c.alphabet_z < 1)
    throw RangeError("GameConfig: alphabet sizes must be positive");
  if (c.modulus != static_cast<long long>(c.alphabet_x) * c.alphabet_y * c.alphabet_z)
    throw DomainError("GameConfig: modulus must equal the product of alphabet sizes");
}

struct ProfileState {
  CubicMatrix<ModDomain> w;
};

// Mixed-radix strategy code w = (alpha_y*alpha_z)x + alpha_z*y + z, which is
// 6x + 2y + z for the default alphabets.
inline long long encode_profile(int x, int y, int z, const GameConfig& c = {}) {
  validate_config(c);
  if (x < 0 || x >= c.alphabet_x) throw RangeError("encode_profile: x out of alphabet");
  if (y < 0 || y >= c.alphabet_y) throw RangeError("encode_profile: y out of alphabet");
  if (z < 0 || z >= c.alphabet_z) throw RangeError("encode_profile: z out of alphabet");
  return (static_cast<long long>(x) * c.alphabet_y + y) * c.alphabet_z + z;
}

inline std::tuple<int, int, int> decode_profile(long long w, const GameConfig& c = {}) {
  validate_config(c);
  if (w < 0 || w >= c.modulus) throw RangeError("decode_profile: value outside Z_modulus");
  const int z = static_cast<int>(w % c.alphabet_z);
  const int y = static_cast<int>((w / c.alphabet_z) % c.alphabet_y);
  const int x = static_cast<int>(w / (c.alphabet_z * c.alphabet_y));
  return {x, y, z};
}

// Supply-chain hypergraph: vertices are the 2 manufacturers, 3 wholesalers
// and 4 markets; one edge per chain (manufacturer, wholesaler, market). The
// chain order interleaves manufacturers innermost, w = 2((j-1)*4 + (k-1)) + i
// in 1-based terms, which is what the reference dual sets pin down.
inline std::pair<Hypergraph, Hypergraph> build_supply_chain(const GameConfig& c = {}) {
  validate_config(c);
  Hypergraph h;
  for (int i = 1; i <= c.n_manufacturers; ++i) h.vertex_names.push_back("x" + std::to_string(i));
  for (int j = 1; j <= c.n_wholesalers; ++j) h.vertex_names.push_back("y" + std::to_string(j));
  for (int k = 1; k <= c.n_markets; ++k) h.vertex_names.push_back("z" + std::to_string(k));
  for (int j = 0; j < c.n_wholesalers; ++j)
    for (int k = 0; k < c.n_markets; ++k)
      for (int i = 0; i < c.n_manufacturers; ++i)
        h.edges.push_back({i, c.n_manufacturers + j, c.n_manufacturers + c.n_wholesalers + k});

  Hypergraph d;
  for (std::size_t w = 1; w <= h.edges.size(); ++w) d.vertex_names.push_back("w" + std::to_string(w));
  d.edges.assign(h.vertex_names.size(), {});
  for (std::size_t w = 0; w < h.edges.size(); ++w)
    for (int v : h.edges[w]) d.edges[static_cast<std::size_t>(v)].push_back(static_cast<int>(w));
  for (auto& e : d.edges) std::sort(e.begin(), e.end());
  return {h, d};
}

namespace detail {

inline void require_profile_dims(const CubicMatrix<ModDomain>& w, const GameConfig& c,
                                 const char* where) {
  const Dims d = w.dims();
  if (d.m != c.n_manufacturers || d.n != c.n_wholesalers || d.s != c.n_markets)
    throw ShapeError(std::string(where) + ": profile dims " + to_string(d) +
                     " do not match the game config");
  if (w.domain().modulus != c.modulus)
    throw DomainError(std::string(where) + ": modulus does not match the game config");
}

inline SystemSpec<ModDomain> game_spec(const CubicMatrix<ModDomain>& a, Dims state) {
  SystemSpec<ModDomain> spec(a, state);
  spec.kind = ProductKind::TStp;
  spec.time = TimeKind::Discrete;
  return spec;
}

}  // namespace detail

inline Trajectory<ModDomain> evolve(const CubicMatrix<ModDomain>& w0,
                                    const CubicMatrix<ModDomain>& a, int steps,
                                    const GameConfig& c = {}) {
  detail::require_profile_dims(w0, c, "evolve");
  detail::require_profile_dims(a, c, "evolve");
  return simulate_discrete(detail::game_spec(a, w0.dims()), w0, InputSignal<ModDomain>{}, steps);
}

inline Trajectory<ModDomain> evolve_controlled(const CubicMatrix<ModDomain>& w0,
                                               const CubicMatrix<ModDomain>& a,
                                               const CubicMatrix<ModDomain>& b,
                                               const std::vector<CubicMatrix<ModDomain>>& u,
                                               int steps, const GameConfig& c = {}) {
  detail::require_profile_dims(w0, c, "evolve_controlled");
  detail::require_profile_dims(a, c, "evolve_controlled");
  SystemSpec<ModDomain> spec = detail::game_spec(a, w0.dims());
  spec.b = {b};
  spec.input_form = InputForm::CubicProduct;
  InputSignal<ModDomain> sig;
  sig.cubic_samples = u;
  return simulate_discrete(spec, w0, sig, steps);
}

// Feedback synthesis for A + B∘F = E over Z_m: one Smith normal form of the
// lifted system [L | mI], L the dense action matrix of F -> B∘F, then a
// per-column back-substitution. Lifting keeps every divisor a factor of m.
// Free variables are zeroed. Infeasibility is certified by the diagonal
// divisor (and the column) whose congruence has no solution.
struct FeedbackResult {
  std::optional<CubicMatrix<ModDomain>> f;
  std::vector<long long> divisors;            // diagonal of the Smith form
  int rank = 0;
  std::vector<std::pair<int, int>> failures;  // (rhs column, divisor index)
  bool feasible() const { return f.has_value(); }
};

inline FeedbackResult synthesize_feedback(const CubicMatrix<ModDomain>& a,
                                          const CubicMatrix<ModDomain>& b,
                                          const CubicMatrix<ModDomain>& e_target,
                                          const GameConfig& c = {}) {
  detail::require_profile_dims(a, c, "synthesize_feedback");
  detail::require_profile_dims(b, c, "synthesize_feedback");
  detail::require_profile_dims(e_target, c, "synthesize_feedback");
  const ModDomain dom = a.domain();
  const long long m = dom.modulus;
  const Dims fd = a.dims();

  const DenseMatrix<ModDomain> l = action_matrix(ProductKind::TStp, b, fd.m);
  const DenseMatrix<ModDomain> rhs = unfold(sub(e_target, a));
  const int rows = l.rows(), cols = l.cols();

  const int n = cols + rows;  // unknowns of the lift: f plus one slack per row
  std::vector<std::vector<long long>> lm(static_cast<std::size_t>(rows),
                                         std::vector<long long>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) lm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = l.at(i, j);
    lm[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols + i)] = m;
  }
  const SmithResult s = smith_normal_form(lm);

  FeedbackResult out;
  out.rank = s.rank;
  for (int i = 0; i < rows; ++i)
    out.divisors.push_back(s.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);

  auto mod_pos = [&](long long x) { long long t = x % m; return t < 0 ? t + m : t; };

  DenseMatrix<ModDomain> x(cols, rhs.cols(), dom);
  for (int col = 0; col < rhs.cols(); ++col) {
    std::vector<long long> cv(static_cast<std::size_t>(rows), 0);
    for (int i = 0; i < rows; ++i) {
      detail::i128 acc = 0;
      for (int j = 0; j < rows; ++j) {
        const long long uij = mod_pos(s.u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % m);
        acc = (acc + static_cast<detail::i128>(uij) * rhs.at(j, col)) % m;
      }
      cv[static_cast<std::size_t>(i)] = mod_pos(static_cast<long long>(acc));
    }
    std::vector<long long> y(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < rows; ++i) {
      const long long di = (i < s.rank) ? out.divisors[static_cast<std::size_t>(i)] : 0;
      const long long ci = cv[static_cast<std::size_t>(i)];
      if (di == 0) {
        if (ci != 0) out.failures.emplace_back(col, i);
        continue;
      }
      if (ci % di != 0) { out.failures.emplace_back(col, i); continue; }
      y[static_cast<std::size_t>(i)] = ci / di;
    }
    for (int i = 0; i < cols; ++i) {
      detail::i128 acc = 0;
      for (int j = 0; j < n; ++j) {
        const long long vij = mod_pos(s.v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % m);
        acc = (acc + static_cast<detail::i128>(vij) * y[static_cast<std::size_t>(j)]) % m;
      }
      x.at(i, col) = mod_pos(static_cast<long long>(acc));
    }
  }
  if (out.failures.empty()) out.f = fold(x, fd);
  return out;
}

struct CycleReport {
  bool found = false;
  long long preperiod = 0;
  long long period = 0;
  long long steps_used = 0;
};

// Brent's algorithm on W -> A∘W. The step runs on the precomputed dense
// action matrix (exactly the product over Z_m), which keeps a million-step
// budget cheap.
inline CycleReport detect_cycle(const CubicMatrix<ModDomain>& a, const CubicMatrix<ModDomain>& w0,
                                long long max_steps, const GameConfig& c = {}) {
  detail::require_profile_dims(a, c, "detect_cycle");
  detail::require_profile_dims(w0, c, "detect_cycle");
  const DenseMatrix<ModDomain> m = action_matrix(ProductKind::TStp, a, w0.dims().m);
  CycleReport report;
  auto step = [&](const DenseMatrix<ModDomain>& z) {
    ++report.steps_used;
    return m * z;
  };

  DenseMatrix<ModDomain> tortoise = unfold(w0);
  DenseMatrix<ModDomain> hare = step(tortoise);
  long long power = 1, lam = 1;
  while (!(tortoise == hare)) {
    if (report.steps_used >= max_steps) return report;
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = step(hare);
    ++lam;
  }
  DenseMatrix<ModDomain> t2 = unfold(w0);
  DenseMatrix<ModDomain> h2 = unfold(w0);
  for (long long i = 0; i < lam; ++i) h2 = step(h2);
  long long mu = 0;
  while (!(t2 == h2)) {
    if (report.steps_used >= max_steps) return report;
    t2 = step(t2);
    h2 = step(h2);
    ++mu;
  }
  report.found = true;
  report.preperiod = mu;
  report.period = lam;
  return report;
}

// One step of the quadratic update W -> W∘W + A∘W over Z_m.
inline ProfileState nonlinear_step(const CubicMatrix<ModDomain>& w, const CubicMatrix<ModDomain>& a,
                                   const GameConfig& c = {}) {
  detail::require_profile_dims(w, c, "nonlinear_step");
  detail::require_profile_dims(a, c, "nonlinear_step");
  return ProfileState{add(t_stp(w, w), t_stp(a, w))};
}

inline bool check_fixed_point(const CubicMatrix<ModDomain>& a, const CubicMatrix<ModDomain>& w,
                              const GameConfig& c = {}) {
  return nonlinear_step(w, a, c).w == w;
}

}  // namespace tcube
