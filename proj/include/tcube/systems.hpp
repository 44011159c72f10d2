#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcube/analysis.hpp"
#include "tcube/cubic.hpp"
#include "tcube/error.hpp"
#include "tcube/gamma.hpp"
#include "tcube/products.hpp"
#include "tcube/psi.hpp"
#include "tcube/series.hpp"
#include "tcube/solve.hpp"

namespace tcube {

enum class TimeKind { Discrete, Continuous };

// How the input enters the dynamics: a scalar coefficient per direction
// (x += sum u_i * B_i) or one cubic input pushed through the product
// (x += B ∘ u).
enum class InputForm { ScalarCoeffs, CubicProduct };

template <class D>
struct SystemSpec {
  ProductKind kind = ProductKind::TProduct;
  TimeKind time = TimeKind::Discrete;
  CubicMatrix<D> a;
  std::vector<CubicMatrix<D>> b;  // empty = autonomous
  InputForm input_form = InputForm::ScalarCoeffs;
  std::optional<CubicMatrix<D>> c;
  Dims state_dims{0, 0, 0};

  explicit SystemSpec(CubicMatrix<D> a_in, Dims state) : a(std::move(a_in)), state_dims(state) {}
};

// Piecewise-constant input. Discrete runs index samples by step; continuous
// runs hold sample j on [breakpoints[j], breakpoints[j+1]).
template <class D>
struct InputSignal {
  std::vector<double> breakpoints;
  std::vector<std::vector<typename D::value_type>> scalar_samples;
  std::vector<CubicMatrix<D>> cubic_samples;

  bool empty() const { return scalar_samples.empty() && cubic_samples.empty(); }
  std::size_t size() const {
    return scalar_samples.empty() ? cubic_samples.size() : scalar_samples.size();
  }
};

template <class D>
struct Trajectory {
  std::vector<double> times;
  std::vector<CubicMatrix<D>> states;
  std::vector<CubicMatrix<D>> outputs;  // aligned with states when the spec has C
};

namespace detail {

template <class D>
void validate_linear_spec(const SystemSpec<D>& spec, const CubicMatrix<D>& x0) {
  const Dims ad = spec.a.dims();
  const Dims xd = x0.dims();
  if (!(xd == spec.state_dims))
    throw ShapeError("system: x0 dims " + to_string(xd) + " != declared state dims " +
                     to_string(spec.state_dims));
  if (ad.s != xd.s) throw ShapeError("system: A and state slice counts differ");
  if (spec.kind == ProductKind::TProduct) {
    if (ad.m != ad.n) throw ShapeError("system: t-product dynamics need square slices in A");
    if (ad.n != xd.m) throw ShapeError("system: A columns must match state rows");
  } else {
    if (ad.m != xd.m) throw ShapeError("system: A rows must match state rows");
  }
  if (spec.input_form == InputForm::ScalarCoeffs) {
    for (const auto& bi : spec.b)
      if (!(bi.dims() == xd)) throw ShapeError("system: B_i dims must match the state");
  } else if (!spec.b.empty() && spec.b.size() != 1) {
    throw ShapeError("system: cubic-input form takes exactly one B");
  }
  if constexpr (D::is_modular) {
    if (spec.time == TimeKind::Continuous)
      throw UnsupportedError("system: continuous time requires the real domain");
  }
}

// Piece index for zero-order hold at time t.
inline std::size_t zoh_index(const std::vector<double>& breakpoints, double t) {
  if (breakpoints.empty()) return 0;
  std::size_t j = 0;
  while (j + 1 < breakpoints.size() && breakpoints[j + 1] <= t) ++j;
  return j;
}

template <class D>
CubicMatrix<D> input_term(const SystemSpec<D>& spec, const InputSignal<D>& u, std::size_t idx,
                          const Dims& xd, const D& dom) {
  CubicMatrix<D> acc(xd, dom);
  if (u.empty()) return acc;
  if (spec.input_form == InputForm::ScalarCoeffs) {
    if (idx >= u.scalar_samples.size()) throw RangeError("system: input signal too short");
    const auto& coeffs = u.scalar_samples[idx];
    if (coeffs.size() != spec.b.size())
      throw ShapeError("system: input sample arity != number of B directions");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      acc = add(acc, scale(coeffs[i], spec.b[i]));
  } else {
    if (idx >= u.cubic_samples.size()) throw RangeError("system: input signal too short");
    if (spec.b.empty()) throw ShapeError("system: cubic-input form needs B");
    CubicMatrix<D> term = product_apply(spec.kind, spec.b[0], u.cubic_samples[idx]);
    if (!(term.dims() == xd)) throw ShapeError("system: B∘u dims must match the state");
    acc = add(acc, term);
  }
  return acc;
}

}  // namespace detail

template <class D>
Trajectory<D> simulate_discrete(const SystemSpec<D>& spec, const CubicMatrix<D>& x0,
                                const InputSignal<D>& u, int steps) {
  if (spec.time != TimeKind::Discrete)
    throw UnsupportedError("simulate_discrete: spec declares continuous time");
  if (steps < 0) throw RangeError("simulate_discrete: steps must be >= 0");
  detail::validate_linear_spec(spec, x0);
  const D dom = spec.a.domain();
  Trajectory<D> out;
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  out.states.reserve(static_cast<std::size_t>(steps) + 1);
  CubicMatrix<D> x = x0;
  for (int t = 0; t <= steps; ++t) {
    out.times.push_back(static_cast<double>(t));
    out.states.push_back(x);
    if (spec.c) out.outputs.push_back(product_apply(spec.kind, *spec.c, x));
    if (t == steps) break;
    CubicMatrix<D> next = product_apply(spec.kind, spec.a, x);
    if (!u.empty())
      next = add(next, detail::input_term(spec, u, static_cast<std::size_t>(t), x0.dims(), dom));
    x = std::move(next);
  }
  return out;
}

inline Trajectory<RealDomain> simulate_continuous(const SystemSpec<RealDomain>& spec,
                                                  const CubicMatrix<RealDomain>& x0,
                                                  const InputSignal<RealDomain>& u, double t_final,
                                                  double dt = 1e-3) {
  if (spec.time != TimeKind::Continuous)
    throw UnsupportedError("simulate_continuous: spec declares discrete time");
  if (!(dt > 0.0)) throw RangeError("simulate_continuous: dt must be positive");
  if (t_final < 0.0) throw RangeError("simulate_continuous: t_final must be >= 0");
  detail::validate_linear_spec(spec, x0);
  for (std::size_t j = 1; j < u.breakpoints.size(); ++j)
    if (!(u.breakpoints[j] > u.breakpoints[j - 1]))
      throw RangeError("simulate_continuous: breakpoints must be strictly increasing");
  const RealDomain dom = spec.a.domain();
  const Dims xd = x0.dims();

  auto rhs = [&](std::size_t uidx, const CubicMatrix<RealDomain>& x) {
    CubicMatrix<RealDomain> dx = product_apply(spec.kind, spec.a, x);
    if (!u.empty()) dx = add(dx, detail::input_term(spec, u, uidx, xd, dom));
    return dx;
  };

  Trajectory<RealDomain> out;
  auto record = [&](double t, const CubicMatrix<RealDomain>& x) {
    out.times.push_back(t);
    out.states.push_back(x);
    if (spec.c) out.outputs.push_back(product_apply(spec.kind, *spec.c, x));
  };

  CubicMatrix<RealDomain> x = x0;
  record(0.0, x);
  const double fuzz = 1e-12 * std::max(1.0, t_final);
  long long k = 0;
  double t = 0.0;
  while (t < t_final - fuzz) {
    const double t_next = std::min((k + 1) * dt, t_final);
    const double h = t_next - t;
    // classic RK4; the held input is sampled once at the step start so every
    // stage sees the same piece, which keeps grid-aligned pieces exact. Fixed
    // association order keeps runs bit-reproducible.
    const std::size_t uidx = detail::zoh_index(u.breakpoints, t);
    CubicMatrix<RealDomain> k1 = rhs(uidx, x);
    CubicMatrix<RealDomain> k2 = rhs(uidx, add(x, scale(0.5 * h, k1)));
    CubicMatrix<RealDomain> k3 = rhs(uidx, add(x, scale(0.5 * h, k2)));
    CubicMatrix<RealDomain> k4 = rhs(uidx, add(x, scale(h, k3)));
    CubicMatrix<RealDomain> incr = add(add(add(k1, scale(2.0, k2)), scale(2.0, k3)), k4);
    x = add(x, scale(h / 6.0, incr));
    ++k;
    t = std::min(k * dt, t_final);
    record(t, x);
  }
  return out;
}

// Dense matrix M with unfold(product(a, x)) = M * unfold(x) for states with
// x.m = x_rows and x.s = a.s.
template <class D>
DenseMatrix<D> action_matrix(ProductKind kind, const CubicMatrix<D>& a, int x_rows) {
  const Dims d = a.dims();
  const D dom = a.domain();
  switch (kind) {
    case ProductKind::TProduct:
      if (d.n != x_rows) throw ShapeError("action_matrix: A columns must match state rows");
      return gamma(a);
    case ProductKind::TStp: {
      DenseMatrix<D> coupling = kron(DenseMatrix<D>::identity(d.s, dom), psi(d.n, x_rows, dom));
      return gamma(a) * coupling;
    }
    case ProductKind::DkStp: {
      DenseMatrix<D> out(d.m * d.s, x_rows * d.s, dom);
      const DenseMatrix<D> p = psi(d.n, x_rows, dom);
      for (int kdx = 0; kdx < d.s; ++kdx)
        out.paste(kdx * d.m, kdx * x_rows, frontal_slice(a, kdx) * p);
      return out;
    }
  }
  throw RangeError("action_matrix: bad product kind");
}

template <class D>
struct ClassicalForm {
  DenseMatrix<D> state;                // acts on unfold(x)
  std::vector<DenseMatrix<D>> inputs;  // unfold(B_i) for scalar form, action matrix for cubic form
  std::optional<DenseMatrix<D>> output;
};

template <class D>
ClassicalForm<D> to_classical(const SystemSpec<D>& spec) {
  ClassicalForm<D> out{action_matrix(spec.kind, spec.a, spec.state_dims.m), {}, std::nullopt};
  for (const auto& bi : spec.b) {
    if (spec.input_form == InputForm::ScalarCoeffs)
      out.inputs.push_back(unfold(bi));
    else
      out.inputs.push_back(action_matrix(spec.kind, bi, bi.dims().n));
  }
  if (spec.c) out.output = action_matrix(spec.kind, *spec.c, spec.state_dims.m);
  return out;
}

// Exact solution of the continuous linear system under zero-order-held
// inputs: the homogeneous part goes through the cubic exponential series, the
// forced part is integrated exactly per constant piece on unfold coordinates.
inline std::function<CubicMatrix<RealDomain>(double)> closed_form(
    const SystemSpec<RealDomain>& spec, const CubicMatrix<RealDomain>& x0,
    const InputSignal<RealDomain>& u, TruncationPolicy policy = {}) {
  if (spec.time != TimeKind::Continuous)
    throw UnsupportedError("closed_form: continuous-time specs only");
  detail::validate_linear_spec(spec, x0);
  for (std::size_t j = 1; j < u.breakpoints.size(); ++j)
    if (!(u.breakpoints[j] > u.breakpoints[j - 1]))
      throw RangeError("closed_form: breakpoints must be strictly increasing");
  if (!u.empty() && u.breakpoints.size() != u.size())
    throw ShapeError("closed_form: one breakpoint per input piece");

  const PowerSeries expf = named_series("exp");
  const Dims xd = x0.dims();
  const RealDomain dom = spec.a.domain();
  const DenseMatrix<RealDomain> m_hat = action_matrix(spec.kind, spec.a, xd.m);

  return [=](double t) {
    if (t < 0.0) throw RangeError("closed_form: t must be >= 0");
    // homogeneous part: extended exponential keeps the constant term formal,
    // so non-square slice shapes work too
    ExtendedCubic<RealDomain> e = analytic_eval_extended(expf, scale(t, spec.a), spec.kind, policy);
    CubicMatrix<RealDomain> x = extended_apply(e, x0, spec.kind);
    if (!u.empty()) {
      DenseMatrix<RealDomain> forced(xd.m * xd.s, xd.n, dom);
      for (std::size_t j = 0; j < u.size(); ++j) {
        const double a = u.breakpoints[j];
        if (a >= t) break;
        const double b = (j + 1 < u.breakpoints.size()) ? std::min(u.breakpoints[j + 1], t) : t;
        const DenseMatrix<RealDomain> w = unfold(detail::input_term(spec, u, j, xd, dom));
        // ∫_a^b e^{M(t−τ)} w dτ = [G(t−a) − G(t−b)] w with G(h) = ∫_0^h e^{Mσ}dσ
        const DenseMatrix<RealDomain> ga = expm_with_integral(m_hat, t - a).second;
        const DenseMatrix<RealDomain> gb = expm_with_integral(m_hat, t - b).second;
        forced = add(forced, sub(ga, gb) * w);
      }
      x = add(x, fold(forced, xd));
    }
    return x;
  };
}

struct BisimReport {
  bool pass = false;
  double max_deviation = 0.0;
  double tol = 0.0;
};

// Integrates the declared system and its dense image side by side with the
// same RK4 grid and asserts the images of the cubic states match. The image
// is the Γ-trajectory for the homomorphic products and the unfold trajectory
// for the coupled slice-wise product. `fault` perturbs the dense side; it
// exists so the failure path is testable.
inline BisimReport bisimulation_check(const SystemSpec<RealDomain>& spec,
                                      const CubicMatrix<RealDomain>& x0,
                                      const InputSignal<RealDomain>& u, double t_final, double dt,
                                      double tol, double fault = 0.0) {
  detail::validate_linear_spec(spec, x0);
  const bool via_gamma = spec.kind != ProductKind::DkStp;
  const Dims xd = x0.dims();
  const RealDomain dom = spec.a.domain();

  DenseMatrix<RealDomain> m_img = [&] {
    if (spec.kind == ProductKind::TProduct) return gamma(spec.a);
    if (spec.kind == ProductKind::TStp) {
      const Dims ad = spec.a.dims();
      return gamma(spec.a) *
             kron(DenseMatrix<RealDomain>::identity(ad.s, dom), psi(ad.n, xd.m, dom));
    }
    return action_matrix(spec.kind, spec.a, xd.m);
  }();
  auto image_of = [&](const CubicMatrix<RealDomain>& x) {
    return via_gamma ? gamma(x) : unfold(x);
  };

  DenseMatrix<RealDomain> z = image_of(x0);
  if (fault != 0.0) z.at(0, 0) += fault;

  auto dense_rhs = [&](std::size_t uidx, const DenseMatrix<RealDomain>& zz) {
    DenseMatrix<RealDomain> dz = m_img * zz;
    if (!u.empty()) {
      const auto term = detail::input_term(spec, u, uidx, xd, dom);
      dz = add(dz, image_of(term));
    }
    return dz;
  };

  BisimReport report;
  report.tol = tol;

  Trajectory<RealDomain> traj;
  if (spec.time == TimeKind::Continuous) {
    traj = simulate_continuous(spec, x0, u, t_final, dt);
  } else {
    traj = simulate_discrete(spec, x0, u, static_cast<int>(t_final));
  }

  double max_dev = std::max(0.0, frobenius_norm(sub(z, image_of(traj.states[0]))));
  if (spec.time == TimeKind::Continuous) {
    const double fuzz = 1e-12 * std::max(1.0, t_final);
    long long k = 0;
    double t = 0.0;
    std::size_t sample = 1;
    while (t < t_final - fuzz) {
      const double t_next = std::min((k + 1) * dt, t_final);
      const double h = t_next - t;
      // same step-start input hold as simulate_continuous
      const std::size_t uidx = detail::zoh_index(u.breakpoints, t);
      DenseMatrix<RealDomain> k1 = dense_rhs(uidx, z);
      DenseMatrix<RealDomain> k2 = dense_rhs(uidx, add(z, scale(0.5 * h, k1)));
      DenseMatrix<RealDomain> k3 = dense_rhs(uidx, add(z, scale(0.5 * h, k2)));
      DenseMatrix<RealDomain> k4 = dense_rhs(uidx, add(z, scale(h, k3)));
      DenseMatrix<RealDomain> incr = add(add(add(k1, scale(2.0, k2)), scale(2.0, k3)), k4);
      z = add(z, scale(h / 6.0, incr));
      ++k;
      t = std::min(k * dt, t_final);
      max_dev = std::max(max_dev, frobenius_norm(sub(z, image_of(traj.states[sample]))));
      ++sample;
    }
  } else {
    for (std::size_t step = 1; step < traj.states.size(); ++step) {
      DenseMatrix<RealDomain> zn = m_img * z;
      if (!u.empty())
        zn = add(zn, image_of(detail::input_term(spec, u, step - 1, xd, dom)));
      z = zn;
      max_dev = std::max(max_dev, frobenius_norm(sub(z, image_of(traj.states[step]))));
    }
  }
  report.max_deviation = max_dev;
  report.pass = max_dev <= tol;
  return report;
}

// Nonlinear dynamics assembled from series: dx = f(x) + linear∘x + Σ u_i g_i(x),
// with an optional linear output map. Over Mod the series must be integer
// polynomials and time must be discrete.
template <class D>
struct NonlinearSpec {
  ProductKind kind = ProductKind::TStp;
  TimeKind time = TimeKind::Discrete;
  PowerSeries f;
  std::optional<CubicMatrix<D>> linear;
  std::vector<PowerSeries> g;
  std::optional<CubicMatrix<D>> c;
};

namespace detail {

inline std::vector<long long> integer_poly_coeffs(const PowerSeries& s, const char* where) {
  std::vector<long long> p;
  p.push_back(static_cast<long long>(std::llround(s.constant)));
  if (static_cast<double>(p.back()) != s.constant)
    throw UnsupportedError(std::string(where) + ": Mod domain needs integer coefficients");
  for (double c : s.coeffs) {
    long long v = std::llround(c);
    if (static_cast<double>(v) != c)
      throw UnsupportedError(std::string(where) + ": Mod domain needs integer coefficients");
    p.push_back(v);
  }
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  return p;
}

template <class D>
CubicMatrix<D> series_rhs(const PowerSeries& s, const CubicMatrix<D>& x, ProductKind kind,
                          const TruncationPolicy& policy) {
  if constexpr (D::is_modular) {
    (void)policy;
    const auto p = integer_poly_coeffs(s, "simulate_nonlinear");
    std::vector<typename D::value_type> coeffs(p.begin(), p.end());
    return poly_eval<D>(coeffs, x, kind);
  } else {
    return analytic_eval(s, x, kind, policy);
  }
}

}  // namespace detail

template <class D>
Trajectory<D> simulate_nonlinear(const NonlinearSpec<D>& nspec, const CubicMatrix<D>& x0,
                                 const InputSignal<D>& u, double horizon, double dt = 1e-3,
                                 TruncationPolicy policy = {}) {
  if (nspec.kind == ProductKind::TProduct)
    throw UnsupportedError("simulate_nonlinear: kind must be dkstp or tstp");
  if constexpr (D::is_modular) {
    if (nspec.time == TimeKind::Continuous)
      throw UnsupportedError("simulate_nonlinear: continuous time requires the real domain");
  }
  const D dom = x0.domain();
  const Dims xd = x0.dims();

  auto rhs = [&](const CubicMatrix<D>& x, long long step, std::size_t uidx) {
    CubicMatrix<D> dx(xd, dom);
    try {
      dx = detail::series_rhs(nspec.f, x, nspec.kind, policy);
      if (nspec.linear) dx = add(dx, product_apply(nspec.kind, *nspec.linear, x));
      if (!nspec.g.empty() && !u.empty()) {
        if (uidx >= u.scalar_samples.size())
          throw RangeError("simulate_nonlinear: input signal too short");
        const auto& coeffs = u.scalar_samples[uidx];
        if (coeffs.size() != nspec.g.size())
          throw ShapeError("simulate_nonlinear: input arity != number of g channels");
        for (std::size_t i = 0; i < nspec.g.size(); ++i) {
          CubicMatrix<D> gi = detail::series_rhs(nspec.g[i], x, nspec.kind, policy);
          dx = add(dx, scale(coeffs[i], gi));
        }
      }
    } catch (const DomainError&) {
      if constexpr (!D::is_modular) {
        throw DomainError("simulate_nonlinear: series radius violated at step " +
                          std::to_string(step) + ", ||x|| = " + std::to_string(frobenius_norm(x)));
      } else {
        throw;
      }
    }
    return dx;
  };

  Trajectory<D> out;
  auto record = [&](double t, const CubicMatrix<D>& x) {
    out.times.push_back(t);
    out.states.push_back(x);
    if (nspec.c) out.outputs.push_back(product_apply(nspec.kind, *nspec.c, x));
  };

  CubicMatrix<D> x = x0;
  if (nspec.time == TimeKind::Discrete) {
    const int steps = static_cast<int>(horizon);
    if (steps < 0) throw RangeError("simulate_nonlinear: horizon must be >= 0");
    record(0.0, x);
    for (int t = 0; t < steps; ++t) {
      x = rhs(x, t, static_cast<std::size_t>(t));
      record(static_cast<double>(t + 1), x);
    }
  } else {
    if constexpr (!D::is_modular) {
      if (!(dt > 0.0)) throw RangeError("simulate_nonlinear: dt must be positive");
      record(0.0, x);
      const double fuzz = 1e-12 * std::max(1.0, horizon);
      long long k = 0;
      double t = 0.0;
      while (t < horizon - fuzz) {
        const double t_next = std::min((k + 1) * dt, horizon);
        const double h = t_next - t;
        const std::size_t uidx = detail::zoh_index(u.breakpoints, t);
        CubicMatrix<D> k1 = rhs(x, k, uidx);
        CubicMatrix<D> k2 = rhs(add(x, scale(0.5 * h, k1)), k, uidx);
        CubicMatrix<D> k3 = rhs(add(x, scale(0.5 * h, k2)), k, uidx);
        CubicMatrix<D> k4 = rhs(add(x, scale(h, k3)), k, uidx);
        CubicMatrix<D> incr = add(add(add(k1, scale(2.0, k2)), scale(2.0, k3)), k4);
        x = add(x, scale(h / 6.0, incr));
        ++k;
        t = std::min(k * dt, horizon);
        record(t, x);
      }
    }
  }
  return out;
}

struct SSystemReport {
  int samples = 0;
  double max_assoc_dev = 0.0;
  double max_identity_dev = 0.0;
  bool pass = false;
};

// Spot-check of the action axioms π(A, π(B, x)) = π(A∘B, x) and π(e, x) = x
// on random data. Exact in Mod; tolerance 1e-11 relative in Real.
template <class D>
SSystemReport s_system_check(ProductKind kind, int samples, const D& dom,
                             std::uint64_t seed = 42) {
  const int n = 2, q = 3, s = 2;
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    if constexpr (D::is_modular) {
      return static_cast<typename D::value_type>(rng() % static_cast<std::uint64_t>(dom.modulus));
    } else {
      return static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
    }
  };
  auto random_cubic = [&](Dims d) {
    CubicMatrix<D> c(d, dom);
    for (int k = 0; k < d.s; ++k)
      for (int i = 0; i < d.m; ++i)
        for (int j = 0; j < d.n; ++j) c.at(i, j, k) = dom.canon(draw());
    return c;
  };

  SSystemReport report;
  report.samples = samples;
  const CubicMatrix<D> unit = (kind == ProductKind::DkStp) ? ones_stack(n, n, s, dom)
                                                           : identity_t(n, s, dom);
  for (int it = 0; it < samples; ++it) {
    const CubicMatrix<D> a = random_cubic({n, n, s});
    const CubicMatrix<D> b = random_cubic({n, n, s});
    const CubicMatrix<D> x = random_cubic({n, q, s});
    const CubicMatrix<D> lhs = product_apply(kind, a, product_apply(kind, b, x));
    const CubicMatrix<D> rhs = product_apply(kind, product_apply(kind, a, b), x);
    const CubicMatrix<D> ix = product_apply(kind, unit, x);
    if constexpr (D::is_modular) {
      if (!(lhs == rhs)) report.max_assoc_dev = 1.0;
      if (!(ix == x)) report.max_identity_dev = 1.0;
    } else {
      const double ref = std::max(1.0, frobenius_norm(lhs));
      report.max_assoc_dev = std::max(report.max_assoc_dev, max_abs_diff(lhs, rhs) / ref);
      report.max_identity_dev = std::max(report.max_identity_dev, max_abs_diff(ix, x));
    }
  }
  const double tol = D::is_modular ? 0.0 : 1e-11;
  report.pass = report.max_assoc_dev <= tol && report.max_identity_dev <= tol;
  return report;
}

}  // namespace tcube
