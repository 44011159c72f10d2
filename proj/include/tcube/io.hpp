#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tcube/cubic.hpp"
#include "tcube/dense.hpp"
#include "tcube/error.hpp"
#include "tcube/hypernet.hpp"
#include "tcube/series.hpp"
#include "tcube/systems.hpp"

namespace tcube {

using Json = nlohmann::json;

// shortest decimal that round-trips the double
inline std::string format_real(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Json domain_to_json(const RealDomain&) { return Json("real"); }
inline Json domain_to_json(const ModDomain& d) { return Json{{"mod", d.modulus}}; }

inline bool is_real_domain_tag(const Json& j) { return j.is_string() && j.get<std::string>() == "real"; }
inline bool is_mod_domain_tag(const Json& j) { return j.is_object() && j.contains("mod"); }

inline long long mod_from_tag(const Json& j) {
  if (!is_mod_domain_tag(j) || !j["mod"].is_number_integer())
    throw DomainError("json: bad domain tag, expected \"real\" or {\"mod\":int}");
  return j["mod"].get<long long>();
}

namespace detail {

inline double real_entry(const Json& j) {
  if (!j.is_number()) throw DomainError("json: real entry must be a number");
  return j.get<double>();
}

inline long long int_entry(const Json& j) {
  if (!j.is_number_integer()) throw DomainError("json: Mod entry must be an integer");
  return j.get<long long>();
}

}  // namespace detail

template <class D>
Json cubic_to_json(const CubicMatrix<D>& a) {
  const Dims d = a.dims();
  Json slices = Json::array();
  for (int k = 0; k < d.s; ++k) {
    Json rows = Json::array();
    for (int i = 0; i < d.m; ++i) {
      Json row = Json::array();
      for (int j = 0; j < d.n; ++j) row.push_back(a.at(i, j, k));
      rows.push_back(std::move(row));
    }
    slices.push_back(std::move(rows));
  }
  return Json{{"m", d.m}, {"n", d.n}, {"s", d.s},
              {"domain", domain_to_json(a.domain())}, {"slices", std::move(slices)}};
}

namespace detail {

template <class D, class EntryFn>
CubicMatrix<D> cubic_from_json_impl(const Json& j, const D& dom, EntryFn entry) {
  for (const char* key : {"m", "n", "s", "slices"})
    if (!j.contains(key)) throw DomainError(std::string("json: cubic document missing \"") + key + "\"");
  const Dims d{j["m"].get<int>(), j["n"].get<int>(), j["s"].get<int>()};
  if (d.m < 1 || d.n < 1 || d.s < 1) throw ShapeError("json: cubic dims must be positive");
  const Json& slices = j["slices"];
  if (!slices.is_array() || static_cast<int>(slices.size()) != d.s)
    throw ShapeError("json: expected " + std::to_string(d.s) + " slices");
  CubicMatrix<D> a(d, dom);
  for (int k = 0; k < d.s; ++k) {
    const Json& rows = slices[static_cast<std::size_t>(k)];
    if (!rows.is_array() || static_cast<int>(rows.size()) != d.m)
      throw ShapeError("json: slice " + std::to_string(k) + " must have " + std::to_string(d.m) + " rows");
    for (int i = 0; i < d.m; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != d.n)
        throw ShapeError("json: slice " + std::to_string(k) + " row " + std::to_string(i) +
                         " must have " + std::to_string(d.n) + " entries");
      for (int jj = 0; jj < d.n; ++jj)
        a.at(i, jj, k) = dom.canon(entry(row[static_cast<std::size_t>(jj)]));
    }
  }
  return a;
}

}  // namespace detail

inline CubicMatrix<RealDomain> cubic_real_from_json(const Json& j) {
  if (j.contains("domain") && !is_real_domain_tag(j["domain"]))
    throw DomainError("json: expected a real-domain cubic");
  return detail::cubic_from_json_impl(j, RealDomain{}, detail::real_entry);
}

inline CubicMatrix<ModDomain> cubic_mod_from_json(const Json& j) {
  if (!j.contains("domain")) throw DomainError("json: cubic document missing \"domain\"");
  return detail::cubic_from_json_impl(j, ModDomain{mod_from_tag(j["domain"])}, detail::int_entry);
}

using CubicValue = std::variant<CubicMatrix<RealDomain>, CubicMatrix<ModDomain>>;

inline CubicValue cubic_from_json(const Json& j) {
  if (!j.contains("domain")) throw DomainError("json: cubic document missing \"domain\"");
  if (is_real_domain_tag(j["domain"])) return cubic_real_from_json(j);
  return cubic_mod_from_json(j);
}

template <class D>
Json dense_to_json(const DenseMatrix<D>& a) {
  Json data = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a.at(i, j));
    data.push_back(std::move(row));
  }
  return Json{{"rows", a.rows()}, {"cols", a.cols()},
              {"domain", domain_to_json(a.domain())}, {"data", std::move(data)}};
}

namespace detail {

template <class D, class EntryFn>
DenseMatrix<D> dense_from_json_impl(const Json& j, const D& dom, EntryFn entry) {
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw DomainError(std::string("json: dense document missing \"") + key + "\"");
  const int r = j["rows"].get<int>(), c = j["cols"].get<int>();
  if (r < 1 || c < 1) throw ShapeError("json: dense dims must be positive");
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<int>(data.size()) != r)
    throw ShapeError("json: expected " + std::to_string(r) + " data rows");
  DenseMatrix<D> a(r, c, dom);
  for (int i = 0; i < r; ++i) {
    const Json& row = data[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != c)
      throw ShapeError("json: dense row " + std::to_string(i) + " must have " + std::to_string(c) +
                       " entries");
    for (int jj = 0; jj < c; ++jj) a.at(i, jj) = dom.canon(entry(row[static_cast<std::size_t>(jj)]));
  }
  return a;
}

}  // namespace detail

inline DenseMatrix<RealDomain> dense_real_from_json(const Json& j) {
  if (j.contains("domain") && !is_real_domain_tag(j["domain"]))
    throw DomainError("json: expected a real-domain dense matrix");
  return detail::dense_from_json_impl(j, RealDomain{}, detail::real_entry);
}

inline DenseMatrix<ModDomain> dense_mod_from_json(const Json& j) {
  if (!j.contains("domain")) throw DomainError("json: dense document missing \"domain\"");
  return detail::dense_from_json_impl(j, ModDomain{mod_from_tag(j["domain"])}, detail::int_entry);
}

inline Json series_to_json(const PowerSeries& f) {
  Json j{{"constant", f.constant}, {"coeffs", f.coeffs}};
  if (!f.name.empty()) j["name"] = f.name;
  j["radius"] = std::isinf(f.radius) ? Json("inf") : Json(f.radius);
  return j;
}

inline PowerSeries series_from_json(const Json& j) {
  PowerSeries f;
  if (j.contains("name")) f.name = j["name"].get<std::string>();
  if (!j.contains("constant") || !j.contains("coeffs"))
    throw DomainError("json: power series needs \"constant\" and \"coeffs\"");
  f.constant = detail::real_entry(j["constant"]);
  for (const Json& c : j["coeffs"]) f.coeffs.push_back(detail::real_entry(c));
  if (j.contains("radius")) {
    const Json& r = j["radius"];
    if (r.is_string()) {
      if (r.get<std::string>() != "inf") throw DomainError("json: radius must be a number or \"inf\"");
      f.radius = std::numeric_limits<double>::infinity();
    } else {
      f.radius = detail::real_entry(r);
    }
  }
  return f;
}

inline Json hypergraph_to_json(const Hypergraph& h) {
  return Json{{"vertices", h.vertex_names}, {"edges", h.edges}};
}

inline Hypergraph hypergraph_from_json(const Json& j) {
  if (!j.contains("vertices") || !j.contains("edges"))
    throw DomainError("json: hypergraph needs \"vertices\" and \"edges\"");
  Hypergraph h;
  for (const Json& v : j["vertices"]) h.vertex_names.push_back(v.get<std::string>());
  for (const Json& e : j["edges"]) {
    std::vector<int> edge;
    if (!e.is_array()) throw DomainError("json: each edge must be an index array");
    for (const Json& v : e) edge.push_back(static_cast<int>(detail::int_entry(v)));
    h.edges.push_back(std::move(edge));
  }
  return h;
}

inline Json game_config_to_json(const GameConfig& c) {
  return Json{{"n_manufacturers", c.n_manufacturers}, {"n_wholesalers", c.n_wholesalers},
              {"n_markets", c.n_markets},             {"modulus", c.modulus},
              {"alphabet_x", c.alphabet_x},           {"alphabet_y", c.alphabet_y},
              {"alphabet_z", c.alphabet_z}};
}

inline GameConfig game_config_from_json(const Json& j) {
  GameConfig c;
  c.n_manufacturers = j.value("n_manufacturers", c.n_manufacturers);
  c.n_wholesalers = j.value("n_wholesalers", c.n_wholesalers);
  c.n_markets = j.value("n_markets", c.n_markets);
  c.modulus = j.value("modulus", c.modulus);
  c.alphabet_x = j.value("alphabet_x", c.alphabet_x);
  c.alphabet_y = j.value("alphabet_y", c.alphabet_y);
  c.alphabet_z = j.value("alphabet_z", c.alphabet_z);
  validate_config(c);
  return c;
}

inline const char* to_string(TimeKind t) {
  return t == TimeKind::Discrete ? "discrete" : "continuous";
}

template <class D>
Json system_spec_to_json(const SystemSpec<D>& spec) {
  Json j{{"kind", to_string(spec.kind)},
         {"time", to_string(spec.time)},
         {"A", cubic_to_json(spec.a)},
         {"input_form", spec.input_form == InputForm::ScalarCoeffs ? "scalar" : "cubic"},
         {"state_dims", Json{{"m", spec.state_dims.m}, {"n", spec.state_dims.n}, {"s", spec.state_dims.s}}}};
  if (!spec.b.empty()) {
    Json bs = Json::array();
    for (const auto& bi : spec.b) bs.push_back(cubic_to_json(bi));
    j["B"] = std::move(bs);
  }
  if (spec.c) j["C"] = cubic_to_json(*spec.c);
  return j;
}

namespace detail {

template <class D>
SystemSpec<D> system_spec_from_json_typed(const Json& j, const CubicMatrix<D>& a,
                                          const std::function<CubicMatrix<D>(const Json&)>& load) {
  if (!j.contains("state_dims")) throw DomainError("json: system spec missing \"state_dims\"");
  const Json& sd = j["state_dims"];
  SystemSpec<D> spec(a, Dims{sd.value("m", 0), sd.value("n", 0), sd.value("s", 0)});
  const std::string kind = j.value("kind", "tprod");
  spec.kind = parse_product_kind(kind);
  const std::string time = j.value("time", "discrete");
  if (time == "discrete") spec.time = TimeKind::Discrete;
  else if (time == "continuous") spec.time = TimeKind::Continuous;
  else throw DomainError("json: time must be \"discrete\" or \"continuous\"");
  const std::string form = j.value("input_form", "scalar");
  if (form == "scalar") spec.input_form = InputForm::ScalarCoeffs;
  else if (form == "cubic") spec.input_form = InputForm::CubicProduct;
  else throw DomainError("json: input_form must be \"scalar\" or \"cubic\"");
  if (j.contains("B"))
    for (const Json& bj : j["B"]) spec.b.push_back(load(bj));
  if (j.contains("C")) spec.c = load(j["C"]);
  return spec;
}

}  // namespace detail

using SystemSpecValue = std::variant<SystemSpec<RealDomain>, SystemSpec<ModDomain>>;

inline SystemSpecValue system_spec_from_json(const Json& j) {
  if (!j.contains("A")) throw DomainError("json: system spec missing \"A\"");
  const Json& aj = j["A"];
  if (!aj.contains("domain")) throw DomainError("json: system A missing \"domain\"");
  if (is_real_domain_tag(aj["domain"])) {
    return detail::system_spec_from_json_typed<RealDomain>(j, cubic_real_from_json(aj),
                                                           cubic_real_from_json);
  }
  return detail::system_spec_from_json_typed<ModDomain>(j, cubic_mod_from_json(aj),
                                                        cubic_mod_from_json);
}

template <class D>
Json trajectory_to_json(const Trajectory<D>& tr) {
  Json times = Json::array();
  for (double t : tr.times) times.push_back(t);
  Json states = Json::array();
  for (const auto& x : tr.states) states.push_back(cubic_to_json(x));
  Json j{{"times", std::move(times)}, {"states", std::move(states)}};
  if (!tr.outputs.empty()) {
    Json outs = Json::array();
    for (const auto& y : tr.outputs) outs.push_back(cubic_to_json(y));
    j["outputs"] = std::move(outs);
  }
  return j;
}

// CSV: header "t,x_i_j_k,..." with 0-based indices in slice-major order (k
// outermost), matching the unfold layout; '\n' endings, '.' decimals.
template <class D>
void write_trajectory_csv(std::ostream& os, const Trajectory<D>& tr) {
  if (tr.states.empty()) throw RangeError("csv: empty trajectory");
  const Dims d = tr.states.front().dims();
  os << "t";
  for (int k = 0; k < d.s; ++k)
    for (int i = 0; i < d.m; ++i)
      for (int j = 0; j < d.n; ++j) os << ",x_" << i << "_" << j << "_" << k;
  os << "\n";
  for (std::size_t row = 0; row < tr.states.size(); ++row) {
    os << format_real(tr.times[row]);
    const auto& x = tr.states[row];
    for (int k = 0; k < d.s; ++k)
      for (int i = 0; i < d.m; ++i)
        for (int j = 0; j < d.n; ++j) {
          if constexpr (D::is_modular)
            os << "," << x.at(i, j, k);
          else
            os << "," << format_real(x.at(i, j, k));
        }
    os << "\n";
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("io: cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("io: " + path + ": " + e.what());
  }
}

inline void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("io: cannot write " + path);
  out << text;
  if (!out) throw DomainError("io: short write to " + path);
}

inline void save_json_file(const std::string& path, const Json& j) {
  save_text_file(path, j.dump(2) + "\n");
}

}  // namespace tcube
