// tcube: batch front end over the cubic-matrix library. File-based I/O only;
// exit codes: 0 ok, 2 usage, 3 domain/shape error, 4 non-convergence.

#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "tcube/tcube.hpp"

namespace {

using tcube::Json;

void emit_json(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    tcube::save_json_file(out_path, j);
  }
}

template <class D>
tcube::InputSignal<D> input_signal_from_json(const Json& j) {
  tcube::InputSignal<D> u;
  if (j.contains("breakpoints"))
    for (const Json& b : j["breakpoints"]) u.breakpoints.push_back(b.get<double>());
  if (j.contains("scalar_samples")) {
    for (const Json& row : j["scalar_samples"]) {
      std::vector<typename D::value_type> sample;
      for (const Json& v : row) {
        if constexpr (D::is_modular)
          sample.push_back(tcube::detail::int_entry(v));
        else
          sample.push_back(tcube::detail::real_entry(v));
      }
      u.scalar_samples.push_back(std::move(sample));
    }
  }
  if (j.contains("cubic_samples")) {
    for (const Json& cj : j["cubic_samples"]) {
      if constexpr (D::is_modular)
        u.cubic_samples.push_back(tcube::cubic_mod_from_json(cj));
      else
        u.cubic_samples.push_back(tcube::cubic_real_from_json(cj));
    }
  }
  return u;
}

struct ProductArgs {
  std::string kind = "tprod";
  std::string a_path, b_path, out;
};

int run_product(const ProductArgs& args) {
  const tcube::ProductKind kind = tcube::parse_product_kind(args.kind);
  const Json aj = tcube::load_json_file(args.a_path);
  const Json bj = tcube::load_json_file(args.b_path);
  const bool dense = aj.contains("data");
  if (dense != bj.contains("data"))
    throw tcube::ShapeError("product: operands must both be cubic or both be dense");
  if (dense) {
    if (kind != tcube::ProductKind::DkStp)
      throw tcube::UnsupportedError("product: dense operands support --kind dkstp only");
    if (tcube::is_real_domain_tag(aj.value("domain", Json("real")))) {
      emit_json(tcube::dense_to_json(tcube::dkstp_mat(tcube::dense_real_from_json(aj),
                                                      tcube::dense_real_from_json(bj))),
                args.out);
    } else {
      emit_json(tcube::dense_to_json(tcube::dkstp_mat(tcube::dense_mod_from_json(aj),
                                                      tcube::dense_mod_from_json(bj))),
                args.out);
    }
    return 0;
  }
  const tcube::CubicValue av = tcube::cubic_from_json(aj);
  const tcube::CubicValue bv = tcube::cubic_from_json(bj);
  if (av.index() != bv.index())
    throw tcube::DomainError("product: operand domains differ (" + args.a_path + " vs " +
                             args.b_path + ")");
  std::visit(
      [&](const auto& a) {
        using C = std::decay_t<decltype(a)>;
        const auto& b = std::get<C>(bv);
        emit_json(tcube::cubic_to_json(tcube::product_apply(kind, a, b)), args.out);
      },
      av);
  return 0;
}

struct FuncArgs {
  std::string series = "exp";
  std::string kind = "tprod";
  double alpha = 0.0;
  int terms = 0;  // 0 = defaults
  double atol = 1e-14;
  std::string a_path, out;
};

int run_func(const FuncArgs& args) {
  const tcube::CubicMatrix<tcube::RealDomain> a =
      tcube::cubic_real_from_json(tcube::load_json_file(args.a_path));
  tcube::TruncationPolicy policy;
  policy.atol = args.atol;
  int length = 192;
  if (args.terms > 0) {
    policy.max_terms = args.terms;
    length = args.terms + 32;
  }
  const tcube::PowerSeries f = tcube::named_series(args.series, args.alpha, length);
  const auto r = tcube::analytic_eval(f, a, tcube::parse_product_kind(args.kind), policy);
  emit_json(tcube::cubic_to_json(r), args.out);
  return 0;
}

int run_eig(const std::string& a_path, const std::string& out) {
  const auto a = tcube::cubic_real_from_json(tcube::load_json_file(a_path));
  const tcube::SpectralResult r = tcube::t_eigen(a);
  Json vals = Json::array();
  for (const auto& l : r.eigenvalues) vals.push_back(Json{{"re", l.real()}, {"im", l.imag()}});
  Json vecs = Json::array();
  for (const auto& v : r.eigenvectors)
    vecs.push_back(v ? tcube::cubic_to_json(*v) : Json(nullptr));
  emit_json(Json{{"eigenvalues", std::move(vals)},
                 {"eigenvectors", std::move(vecs)},
                 {"residuals", r.residuals},
                 {"charpoly", r.charpoly}},
            out);
  return 0;
}

int run_charpoly(const std::string& a_path, const std::string& out) {
  const Json aj = tcube::load_json_file(a_path);
  const tcube::DenseMatrix<tcube::RealDomain> m =
      aj.contains("data") ? tcube::dense_real_from_json(aj)
                          : tcube::gamma(tcube::cubic_real_from_json(aj));
  emit_json(Json{{"coeffs", tcube::char_poly(m)}}, out);
  return 0;
}

struct SimArgs {
  std::string spec_path, x0_path, u_path, out, csv;
  double t_final = 1.0;
  double dt = 1e-3;
  int steps = 10;
};

template <class D>
int run_sim_typed(const tcube::SystemSpec<D>& spec, const SimArgs& args) {
  const Json xj = tcube::load_json_file(args.x0_path);
  tcube::CubicMatrix<D> x0 = [&] {
    if constexpr (D::is_modular)
      return tcube::cubic_mod_from_json(xj);
    else
      return tcube::cubic_real_from_json(xj);
  }();
  tcube::InputSignal<D> u;
  if (!args.u_path.empty()) u = input_signal_from_json<D>(tcube::load_json_file(args.u_path));
  tcube::Trajectory<D> tr;
  if (spec.time == tcube::TimeKind::Discrete) {
    tr = tcube::simulate_discrete(spec, x0, u, args.steps);
  } else {
    if constexpr (D::is_modular) {
      throw tcube::UnsupportedError("sim: continuous time requires the real domain");
    } else {
      tr = tcube::simulate_continuous(spec, x0, u, args.t_final, args.dt);
    }
  }
  if (!args.csv.empty()) {
    std::ostringstream os;
    tcube::write_trajectory_csv(os, tr);
    tcube::save_text_file(args.csv, os.str());
  }
  if (args.csv.empty() || !args.out.empty()) emit_json(tcube::trajectory_to_json(tr), args.out);
  return 0;
}

int run_sim(const SimArgs& args) {
  const tcube::SystemSpecValue spec = tcube::system_spec_from_json(tcube::load_json_file(args.spec_path));
  return std::visit([&](const auto& s) { return run_sim_typed(s, args); }, spec);
}

struct GameEvolveArgs {
  std::string a_path, config_path, out, csv;
  std::vector<std::string> w0_paths;
  int steps = 1;
  int jobs = 1;
};

int run_game_evolve(const GameEvolveArgs& args) {
  const tcube::GameConfig config =
      args.config_path.empty() ? tcube::GameConfig{}
                               : tcube::game_config_from_json(tcube::load_json_file(args.config_path));
  const auto a = tcube::cubic_mod_from_json(tcube::load_json_file(args.a_path));
  std::vector<tcube::CubicMatrix<tcube::ModDomain>> w0s;
  for (const auto& p : args.w0_paths)
    w0s.push_back(tcube::cubic_mod_from_json(tcube::load_json_file(p)));

  std::vector<tcube::Trajectory<tcube::ModDomain>> runs(w0s.size(), tcube::Trajectory<tcube::ModDomain>{});
  if (args.jobs > 1 && w0s.size() > 1) {
    std::vector<std::future<tcube::Trajectory<tcube::ModDomain>>> futs;
    futs.reserve(w0s.size());
    for (const auto& w0 : w0s)
      futs.push_back(std::async(std::launch::async,
                                [&, w0] { return tcube::evolve(w0, a, args.steps, config); }));
    for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < w0s.size(); ++i) runs[i] = tcube::evolve(w0s[i], a, args.steps, config);
  }

  if (!args.csv.empty()) {
    if (runs.size() != 1)
      throw tcube::UnsupportedError("game-evolve: --csv needs exactly one --W0");
    std::ostringstream os;
    tcube::write_trajectory_csv(os, runs.front());
    tcube::save_text_file(args.csv, os.str());
    if (args.out.empty()) return 0;
  }
  if (runs.size() == 1) {
    emit_json(tcube::trajectory_to_json(runs.front()), args.out);
  } else {
    Json arr = Json::array();
    for (const auto& tr : runs) arr.push_back(tcube::trajectory_to_json(tr));
    emit_json(arr, args.out);
  }
  return 0;
}

struct GameSynthArgs {
  std::string a_path, b_path, target_path, config_path, out;
};

int run_game_synthesize(const GameSynthArgs& args) {
  const tcube::GameConfig config =
      (args.config_path.empty() || args.config_path == "default")
          ? tcube::GameConfig{}
          : tcube::game_config_from_json(tcube::load_json_file(args.config_path));
  const auto a = tcube::cubic_mod_from_json(tcube::load_json_file(args.a_path));
  const auto b = tcube::cubic_mod_from_json(tcube::load_json_file(args.b_path));
  const auto e = tcube::cubic_mod_from_json(tcube::load_json_file(args.target_path));
  const tcube::FeedbackResult r = tcube::synthesize_feedback(a, b, e, config);
  Json j{{"feasible", r.feasible()}, {"rank", r.rank}, {"divisors", r.divisors}};
  if (r.feasible()) {
    const auto closed = tcube::add(a, tcube::t_stp(b, *r.f));
    int residual = 0;
    const tcube::Dims d = closed.dims();
    for (int k = 0; k < d.s; ++k)
      for (int i = 0; i < d.m; ++i)
        for (int jj = 0; jj < d.n; ++jj)
          if (closed.at(i, jj, k) != e.at(i, jj, k)) ++residual;
    j["F"] = tcube::cubic_to_json(*r.f);
    j["residual"] = residual;
    std::cout << "residual: " << residual << " (entries differing mod " << config.modulus << ")\n";
  } else {
    Json fails = Json::array();
    for (const auto& [col, idx] : r.failures) fails.push_back(Json{{"column", col}, {"divisor_index", idx}});
    j["failures"] = std::move(fails);
    std::cout << "infeasible: " << r.failures.size() << " divisor violations\n";
  }
  emit_json(j, args.out);
  return 0;
}

struct GameCycleArgs {
  std::string a_path, w0_path, config_path, out;
  long long max_steps = 1000000;
};

int run_game_cycle(const GameCycleArgs& args) {
  const tcube::GameConfig config =
      args.config_path.empty() ? tcube::GameConfig{}
                               : tcube::game_config_from_json(tcube::load_json_file(args.config_path));
  const auto a = tcube::cubic_mod_from_json(tcube::load_json_file(args.a_path));
  const auto w0 = tcube::cubic_mod_from_json(tcube::load_json_file(args.w0_path));
  const tcube::CycleReport r = tcube::detect_cycle(a, w0, args.max_steps, config);
  emit_json(Json{{"found", r.found},
                 {"preperiod", r.preperiod},
                 {"period", r.period},
                 {"steps_used", r.steps_used}},
            args.out);
  return 0;
}

struct HyperDualArgs {
  std::string h_path, out;
  bool supply_chain = false;
};

int run_hyper_dual(const HyperDualArgs& args) {
  if (args.supply_chain) {
    const auto [h, d] = tcube::build_supply_chain();
    emit_json(Json{{"hypergraph", tcube::hypergraph_to_json(h)},
                   {"dual", tcube::hypergraph_to_json(d)}},
              args.out);
    return 0;
  }
  const tcube::Hypergraph h = tcube::hypergraph_from_json(tcube::load_json_file(args.h_path));
  emit_json(tcube::hypergraph_to_json(tcube::dual(h)), args.out);
  return 0;
}

struct ValidateArgs {
  std::string path, out, dims;
  bool strict_gamma = false;
};

int run_validate(const ValidateArgs& args) {
  const Json j = tcube::load_json_file(args.path);
  Json report;
  if (j.contains("vertices") && j.contains("edges")) {
    const tcube::Hypergraph h = tcube::hypergraph_from_json(j);
    const tcube::HypergraphReport r = tcube::validate(h);
    report = Json{{"type", "hypergraph"},
                  {"valid", r.valid},
                  {"violations", r.violations},
                  {"simple", tcube::is_simple(h)}};
  } else if (j.contains("slices")) {
    std::visit([&](const auto& c) { report = Json{{"type", "cubic"}, {"valid", true},
                                                  {"dims", tcube::to_string(c.dims())}}; },
               tcube::cubic_from_json(j));
  } else if (j.contains("data")) {
    report = Json{{"type", "dense"}, {"valid", true}};
    if (args.strict_gamma) {
      if (args.dims.empty())
        throw tcube::RangeError("validate: --strict-gamma needs --dims m,n,s");
      tcube::Dims d{0, 0, 0};
      if (std::sscanf(args.dims.c_str(), "%d,%d,%d", &d.m, &d.n, &d.s) != 3)
        throw tcube::RangeError("validate: --dims must be m,n,s");
      if (tcube::is_real_domain_tag(j.value("domain", Json("real")))) {
        tcube::gamma_inverse(tcube::dense_real_from_json(j), d, true);
      } else {
        tcube::gamma_inverse(tcube::dense_mod_from_json(j), d, true);
      }
      report["block_circulant"] = true;
      report["dims"] = tcube::to_string(d);
    }
  } else if (j.contains("constant") && j.contains("coeffs")) {
    (void)tcube::series_from_json(j);
    report = Json{{"type", "series"}, {"valid", true}};
  } else if (j.contains("A") && j.contains("state_dims")) {
    (void)tcube::system_spec_from_json(j);
    report = Json{{"type", "system"}, {"valid", true}};
  } else {
    throw tcube::DomainError("validate: unrecognized document " + args.path);
  }
  emit_json(report, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubic-matrix algebra toolkit"};
  app.require_subcommand(1);
  int seed = 0;  // reserved: the CLI itself has no randomness
  app.add_option("--seed", seed, "seed for randomized tooling (reserved)");

  ProductArgs product_args;
  auto* product = app.add_subcommand("product", "multiply two cubic (or dense) matrices");
  const auto kind_values = CLI::IsMember({"tprod", "dkstp", "tstp"});
  product->add_option("--kind", product_args.kind, "tprod|dkstp|tstp")
      ->default_val("tprod")
      ->check(kind_values);
  product->add_option("a", product_args.a_path, "left operand JSON")->required();
  product->add_option("b", product_args.b_path, "right operand JSON")->required();
  product->add_option("--out", product_args.out, "output JSON path");

  FuncArgs func_args;
  auto* func = app.add_subcommand("func", "evaluate an analytic function of a cubic matrix");
  func->add_option("--series", func_args.series, "exp|sin|cos|cosh|sinh|log1p|binomial")
      ->default_val("exp")
      ->check(CLI::IsMember({"exp", "sin", "cos", "cosh", "sinh", "log1p", "binomial"}));
  func->add_option("--kind", func_args.kind, "tprod|dkstp|tstp")
      ->default_val("tprod")
      ->check(kind_values);
  func->add_option("--alpha", func_args.alpha, "binomial exponent");
  func->add_option("--terms", func_args.terms, "term cap (default 128)");
  func->add_option("--atol", func_args.atol, "truncation tolerance")->default_val(1e-14);
  func->add_option("a", func_args.a_path, "input cubic JSON")->required();
  func->add_option("--out", func_args.out, "output JSON path");

  std::string eig_a, eig_out;
  auto* eig = app.add_subcommand("eig", "t-eigenvalues and refolded eigenvectors");
  eig->add_option("a", eig_a, "input cubic JSON")->required();
  eig->add_option("--out", eig_out, "output JSON path");

  std::string cp_a, cp_out;
  auto* charpoly = app.add_subcommand("charpoly", "characteristic polynomial of the gamma image");
  charpoly->add_option("a", cp_a, "input cubic or dense JSON")->required();
  charpoly->add_option("--out", cp_out, "output JSON path");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "simulate a declared linear system");
  sim->add_option("spec", sim_args.spec_path, "system spec JSON")->required();
  sim->add_option("x0", sim_args.x0_path, "initial state JSON")->required();
  sim->add_option("--input", sim_args.u_path, "input signal JSON");
  sim->add_option("--t-final", sim_args.t_final, "continuous horizon")->default_val(1.0);
  sim->add_option("--dt", sim_args.dt, "RK4 step")->default_val(1e-3);
  sim->add_option("--steps", sim_args.steps, "discrete step count")->default_val(10);
  sim->add_option("--out", sim_args.out, "trajectory JSON path");
  sim->add_option("--csv", sim_args.csv, "trajectory CSV path");

  GameEvolveArgs ge_args;
  auto* ge = app.add_subcommand("game-evolve", "iterate the linear profile dynamics over Z_m");
  ge->add_option("--A", ge_args.a_path, "dynamics cubic JSON")->required();
  ge->add_option("--W0", ge_args.w0_paths, "initial profile JSON (repeatable)")->required();
  ge->add_option("--steps", ge_args.steps, "step count")->default_val(1);
  ge->add_option("--config", ge_args.config_path, "game config JSON");
  ge->add_option("--jobs", ge_args.jobs, "parallelism across initial profiles")->default_val(1);
  ge->add_option("--out", ge_args.out, "output JSON path");
  ge->add_option("--csv", ge_args.csv, "trajectory CSV path (single --W0 only)");

  GameSynthArgs gs_args;
  auto* gs = app.add_subcommand("game-synthesize", "solve A + B∘F = E over Z_m");
  gs->add_option("--A", gs_args.a_path)->required();
  gs->add_option("--B", gs_args.b_path)->required();
  gs->add_option("--target", gs_args.target_path, "target E JSON")->required();
  gs->add_option("--config", gs_args.config_path, "game config JSON (or 'default')");
  gs->add_option("--out", gs_args.out, "output JSON path");

  GameCycleArgs gc_args;
  auto* gc = app.add_subcommand("game-cycle", "Brent cycle detection on the profile orbit");
  gc->add_option("--A", gc_args.a_path)->required();
  gc->add_option("--W0", gc_args.w0_path)->required();
  gc->add_option("--max-steps", gc_args.max_steps, "step budget")->default_val(1000000);
  gc->add_option("--config", gc_args.config_path, "game config JSON");
  gc->add_option("--out", gc_args.out, "output JSON path");

  HyperDualArgs hd_args;
  auto* hd = app.add_subcommand("hyper-dual", "dual hypergraph (or the built-in supply chain)");
  hd->add_option("hypergraph", hd_args.h_path, "hypergraph JSON");
  hd->add_flag("--supply-chain", hd_args.supply_chain, "emit the default supply-chain pair");
  hd->add_option("--out", hd_args.out, "output JSON path");

  ValidateArgs val_args;
  auto* val = app.add_subcommand("validate", "validate a JSON document");
  val->add_option("file", val_args.path, "document path")->required();
  val->add_flag("--strict-gamma", val_args.strict_gamma,
                "require dense inputs to be exactly block circulant");
  val->add_option("--dims", val_args.dims, "m,n,s for --strict-gamma");
  val->add_option("--out", val_args.out, "output JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (product->parsed()) return run_product(product_args);
    if (func->parsed()) return run_func(func_args);
    if (eig->parsed()) return run_eig(eig_a, eig_out);
    if (charpoly->parsed()) return run_charpoly(cp_a, cp_out);
    if (sim->parsed()) return run_sim(sim_args);
    if (ge->parsed()) return run_game_evolve(ge_args);
    if (gs->parsed()) return run_game_synthesize(gs_args);
    if (gc->parsed()) return run_game_cycle(gc_args);
    if (hd->parsed()) {
      if (!hd_args.supply_chain && hd_args.h_path.empty())
        throw tcube::RangeError("hyper-dual: give a hypergraph file or --supply-chain");
      return run_hyper_dual(hd_args);
    }
    if (val->parsed()) return run_validate(val_args);
  } catch (const tcube::ConvergenceError& e) {
    tcube::log(tcube::LogLevel::Error, e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const tcube::Error& e) {
    tcube::log(tcube::LogLevel::Error, e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
