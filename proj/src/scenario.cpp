#include "evolint/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw SchemaError(what); }

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) schema(where + ": missing key '" + key + "'");
  return j.at(key);
}

double parse_decimal(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) schema(where + ": expected a decimal string");
  const std::string s = j.get<std::string>();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    schema(where + ": '" + s + "' is not a decimal number");
  return v;
}

std::vector<Matrix> blocks_from_json(const json& j, const WStarAlgebra& algebra,
                                     const std::string& where) {
  const json* blocks = &j;
  json wrapped;
  if (j.is_object()) {
    blocks = &require(j, "blocks", where);
  } else if (algebra.block_count() == 1) {
    wrapped = json::array({j});
    blocks = &wrapped;
  } else {
    schema(where + ": expected {\"blocks\": [...]} for a multi-block algebra");
  }
  if (!blocks->is_array() || blocks->size() != algebra.block_count())
    schema(where + ": wrong number of blocks");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < algebra.block_count(); ++i)
    out.push_back(matrix_from_json(blocks->at(i), algebra.block_dim(i)));
  return out;
}

AlgebraElement element_from_json(const json& j, const WStarAlgebra& algebra,
                                 const std::string& where) {
  return {algebra, blocks_from_json(j, algebra, where)};
}

Automorphism automorphism_from_json(const json& j, const WStarAlgebra& algebra,
                                    const std::string& where) {
  std::vector<Matrix> us = blocks_from_json(j, algebra, where);
  std::vector<std::size_t> perm(algebra.block_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  if (j.is_object() && j.contains("perm")) perm = j.at("perm").get<std::vector<std::size_t>>();
  return {algebra, std::move(perm), std::move(us)};
}

GridPointMap map_from_json(const json& j, const WStarAlgebra& algebra, const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "identity") return Automorphism::identity(algebra);
    if (name == "zero") return GridPointMap(LinearMap::zero(algebra), name);
    if (name == "trace_average") return GridPointMap(LinearMap::trace_average(algebra), name);
    if (name == "pinching") return GridPointMap(LinearMap::pinching(algebra), name);
    schema(where + ": unknown named map '" + name + "'");
  }
  if (j.is_object() && j.contains("automorphism"))
    return automorphism_from_json(j.at("automorphism"), algebra, where);
  if (j.is_object() && j.contains("dense"))
    return GridPointMap(LinearMap(algebra, matrix_from_json(j.at("dense"), algebra.dimension())),
                        "dense");
  schema(where + ": expected a named map, {\"automorphism\": ...} or {\"dense\": ...}");
}

std::vector<GridPointMap> grid_from_json(const json& j, const WStarAlgebra& algebra,
                                         const std::string& where) {
  std::vector<GridPointMap> out;
  if (j.contains("unitaries")) {
    for (const json& u : j.at("unitaries")) out.emplace_back(automorphism_from_json(u, algebra, where));
  } else if (j.contains("haar")) {
    const json& h = j.at("haar");
    const auto count = require(h, "count", where + ".haar").get<std::size_t>();
    SplitMix64 rng(require(h, "seed", where + ".haar").get<std::uint64_t>());
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(Automorphism::haar(algebra, rng));
  } else if (j.contains("maps")) {
    for (const json& m : j.at("maps")) out.push_back(map_from_json(m, algebra, where));
  } else {
    schema(where + ": grid needs one of 'unitaries', 'haar', 'maps'");
  }
  if (out.empty()) schema(where + ": grid is empty");
  return out;
}

TimeFrame frame_from_json(const json& j) {
  const auto labels = require(j, "times", "frame").get<std::vector<std::int64_t>>();
  const json& w = require(j, "weights", "frame");
  if (!w.is_array()) schema("frame.weights: expected an array");
  std::vector<double> weights;
  for (const json& x : w) {
    if (!x.is_string()) schema("frame.weights: weights are decimal strings");
    weights.push_back(parse_decimal(x, "frame.weights"));
  }
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] <= labels[i - 1]) schema("frame.times: labels must be strictly ascending");
  if (!j.contains("sigma0") || j.at("sigma0") == "all") return {labels, weights};

  const TimeFrame plain(labels, weights);
  std::vector<TimeSet> family;
  for (const json& s : j.at("sigma0"))
    family.push_back(plain.subset(s.get<std::vector<std::int64_t>>()));
  return {labels, weights, family};
}

ActionTerms terms_from_json(const json& j, const GridEvolutionSpace& grid) {
  const WStarAlgebra& algebra = grid.algebra();
  if (!j.is_array() || j.size() != grid.frame().size())
    schema("dynamics.terms: one term per time required");
  ActionTerms terms(grid.frame().size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string where = "dynamics.terms[" + std::to_string(t) + "]";
    const json& term = j.at(t);
    ElementaryTensor f(algebra);
    for (const json& pair : require(term, "tensor", where)) {
      f.add(element_from_json(require(pair, "element", where), algebra, where),
            NormalFunctional::trace_against(
                element_from_json(require(pair, "density", where), algebra, where)));
    }
    terms[t] = ActionTerm{std::move(f),
                          parse_real_function(require(term, "g", where).get<std::string>()),
                          map_from_json(require(term, "tau", where), algebra, where)};
  }
  return terms;
}

ActionWeight weight_from_json(const json& j, const std::shared_ptr<const GridEvolutionSpace>& grid) {
  const TimeFrame& frame = grid->frame();
  std::map<TimeSet, GridFunction> values;
  for (const json& e : require(j, "entries", "dynamics")) {
    const TimeSet t = frame.subset(require(e, "subset", "dynamics.entries").get<std::vector<std::int64_t>>());
    const std::size_t n = grid->point_count(t);
    std::vector<Complex> v;
    if (e.contains("phases")) {
      for (const json& p : e.at("phases")) v.push_back(std::polar(1.0, parse_decimal(p, "phases")));
    } else {
      for (const json& p : require(e, "values", "dynamics.entries"))
        v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    if (v.size() != n) schema("dynamics.entries: value count does not match points(T)");
    values.insert_or_assign(t, GridFunction(t, std::move(v)));
  }
  return {grid, std::move(values)};
}

Tolerances tolerances_from_json(const json& j) {
  Tolerances tol;
  if (j.contains("conjugated")) tol.conjugated = parse_decimal(j.at("conjugated"), "tolerances");
  if (j.contains("computed_unitary"))
    tol.computed_unitary = parse_decimal(j.at("computed_unitary"), "tolerances");
  if (j.contains("dynamics")) tol.dynamics = parse_decimal(j.at("dynamics"), "tolerances");
  return tol;
}

void build(Scenario& s) {
  const json& c = s.canonical;
  const WStarAlgebra algebra(
      require(require(c, "algebra", "scenario"), "blocks", "algebra").get<std::vector<Eigen::Index>>());
  TimeFrame frame = frame_from_json(require(c, "frame", "scenario"));

  const json& grids_json = require(c, "grids", "scenario");
  if (!grids_json.is_array() || grids_json.size() != frame.size())
    schema("grids: one grid per time required");
  std::vector<std::vector<GridPointMap>> grids;
  for (std::size_t t = 0; t < frame.size(); ++t)
    grids.push_back(grid_from_json(grids_json.at(t), algebra, "grids[" + std::to_string(t) + "]"));

  s.grid = std::make_shared<const GridEvolutionSpace>(std::move(frame), std::move(grids));
  s.space = std::make_shared<const RepresentationSpace>(s.grid, s.dense_cap);
  if (c.contains("tolerances")) s.tolerances = tolerances_from_json(c.at("tolerances"));

  const json dyn = c.contains("dynamics") ? c.at("dynamics") : json{{"kind", "trivial"}};
  s.dynamics_kind = require(dyn, "kind", "dynamics").get<std::string>();
  if (s.dynamics_kind == "lagrangian") {
    const std::string form = require(dyn, "form", "dynamics").get<std::string>();
    if (form == "local") {
      s.terms = terms_from_json(require(dyn, "terms", "dynamics"), *s.grid);
      s.lagrangian = Lagrangian::from_terms(*s.grid, *s.terms, false);
    } else if (form == "table") {
      auto values = require(dyn, "values", "dynamics").get<std::vector<std::vector<double>>>();
      if (values.size() != s.grid->frame().size()) schema("dynamics.values: one row per time");
      for (std::size_t t = 0; t < values.size(); ++t)
        if (values[t].size() != s.grid->grid_size(t))
          schema("dynamics.values: one value per grid point");
      s.lagrangian = Lagrangian::table(std::move(values));
    } else {
      schema("dynamics.form: expected 'local' or 'table'");
    }
    s.action = action_of(s.grid, *s.lagrangian);
    s.weight = weight_from_action(*s.action);
  } else if (s.dynamics_kind == "action_weight") {
    s.weight = weight_from_json(dyn, s.grid);
  } else if (s.dynamics_kind == "trivial") {
    s.weight = ActionWeight::trivial(s.grid);
  } else {
    schema("dynamics.kind: expected 'lagrangian', 'action_weight' or 'trivial'");
  }

  if (c.contains("conjugator")) {
    const json& u = c.at("conjugator");
    const auto n = static_cast<Eigen::Index>(s.space->dimension());
    if (u.contains("haar")) {
      const json& h = u.at("haar");
      const std::uint64_t seed =
          h.contains("seed") ? h.at("seed").get<std::uint64_t>() : derive_seed(s.seed, 0xC0);
      s.conjugator = haar_unitary(n, seed);
    } else if (u.contains("matrix")) {
      s.conjugator = matrix_from_json(u.at("matrix"), n);
      require_unitary(*s.conjugator, s.tolerances.computed_unitary, "conjugator");
    } else {
      schema("conjugator: expected 'haar' or 'matrix'");
    }
  }
}

}  // namespace

std::string fingerprint(const json& canonical) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::optional<std::size_t> dense_cap_from_env() {
  const char* v = std::getenv("EVOLINT_DENSE_CAP");
  if (v == nullptr || *v == '\0') return std::nullopt;
  std::size_t cap = 0;
  const std::string s(v);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw SchemaError("EVOLINT_DENSE_CAP is not a nonnegative integer");
  return cap;
}

Scenario parse_scenario(const json& config, const LoadOptions& options) {
  if (!config.is_object()) throw SchemaError("scenario must be a JSON object");
  Scenario s;
  s.canonical = config;
  if (options.seed) s.canonical["seed"] = *options.seed;
  if (options.dense_cap) s.canonical["dense_cap"] = *options.dense_cap;
  try {
    s.seed = s.canonical.value("seed", std::uint64_t{0});
    s.dense_cap = s.canonical.value("dense_cap", RepresentationSpace::kDefaultCap);
    s.fingerprint = fingerprint(s.canonical);
    build(s);
  } catch (const CapExceeded&) {
    throw;
  } catch (const SchemaError&) {
    throw;
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(e.what());
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path.string() + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_scenario(config, options);
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

Matrix matrix_from_json(const json& j, Eigen::Index n) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n * n) {
    std::ostringstream os;
    os << "matrix: expected " << n * n << " [re, im] pairs";
    throw SchemaError(os.str());
  }
  Matrix m(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const json& p = j.at(static_cast<std::size_t>(k));
    if (!p.is_array() || p.size() != 2) throw SchemaError("matrix: entries are [re, im] pairs");
    m(k / n, k % n) = Complex(p.at(0).get<double>(), p.at(1).get<double>());
  }
  return m;
}

json demo_scenario_json() {
  const json diag10 = json::array({{1, 0}, {0, 0}, {0, 0}, {0, 0}});
  const json identity2 = json::array({{1, 0}, {0, 0}, {0, 0}, {1, 0}});
  const json flip = json::array({{0, 0}, {1, 0}, {1, 0}, {0, 0}});
  const json raise = json::array({{0, 0}, {1, 0}, {0, 0}, {0, 0}});
  const json lower = json::array({{0, 0}, {0, 0}, {1, 0}, {0, 0}});
  const json sigma_z = json::array({{1, 0}, {0, 0}, {0, 0}, {-1, 0}});

  return json{
      {"algebra", {{"blocks", {2}}}},
      {"frame",
       {{"times", {1, 2, 3}}, {"weights", {"1.0", "0.5", "0"}}, {"sigma0", "all"}}},
      {"grids",
       json::array({
           {{"unitaries", json::array({identity2, flip})}},
           {{"haar", {{"count", 3}, {"seed", 11}}}},
           {{"maps", json::array({"identity", "trace_average"})}},
       })},
      {"dynamics",
       {{"kind", "lagrangian"},
        {"form", "local"},
        {"terms",
         json::array({
             {{"tensor", json::array({{{"element", diag10}, {"density", diag10}}})},
              {"g", "abs2"},
              {"tau", "identity"}},
             {{"tensor", json::array({{{"element", raise}, {"density", lower}},
                                      {{"element", sigma_z}, {"density", diag10}}})},
              {"g", "real"},
              {"tau", "identity"}},
             {{"tensor", json::array({{{"element", diag10}, {"density", identity2}}})},
              {"g", "abs"},
              {"tau", "pinching"}},
         })}}},
      {"conjugator", {{"haar", {{"seed", 2024}}}}},
      {"tolerances", {{"conjugated", "1e-12"}, {"computed_unitary", "1e-10"}, {"dynamics", "1e-12"}}},
      {"dense_cap", 4096},
      {"seed", 42},
  };
}

}  // namespace evolint
