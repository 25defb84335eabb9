#include "evolint/compute.hpp"

#include <charconv>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

nlohmann::json complex_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

}  // namespace

std::vector<TimeSet> parse_subsets(const TimeFrame& frame, const std::string& text) {
  std::vector<TimeSet> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ';')) {
    item = trim(item);
    if (item == "{}" || item.empty()) {
      out.push_back(TimeSet{});
      continue;
    }
    std::vector<std::int64_t> labels;
    std::stringstream parts(item);
    std::string part;
    while (std::getline(parts, part, ',')) {
      part = trim(part);
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || ptr != part.data() + part.size())
        throw DomainError("bad time label '" + part + "' in --subsets");
      labels.push_back(v);
    }
    out.push_back(frame.subset(labels));
  }
  if (out.empty()) throw DomainError("--subsets lists no subsets");
  return out;
}

nlohmann::json compute_operators(const Scenario& scenario, const std::vector<TimeSet>& subsets,
                                 bool conjugated) {
  const GridEvolutionSpace& grid = *scenario.grid;
  const TimeFrame& frame = grid.frame();
  SpectralMeasure e = SpectralMeasure::full(*scenario.space);
  if (conjugated) {
    const DenseOperator u =
        scenario.conjugator
            ? *scenario.conjugator
            : haar_unitary(static_cast<Eigen::Index>(scenario.space->dimension()),
                           derive_seed(scenario.seed, 0xC0));
    e = conjugate(u, e);
  }

  nlohmann::json ops = nlohmann::json::array();
  for (const TimeSet t : subsets) {
    frame.require_admissible(t, "compute");
    const Operator op = evolution_unitary(*scenario.weight, t, e).op;
    nlohmann::json entry;
    entry["subset"] = frame.labels_of(t);
    if (op.is_diagonal()) {
      entry["form"] = "diagonal";
      nlohmann::json d = nlohmann::json::array();
      for (const Complex c : op.diagonal().entries()) d.push_back(complex_json(c));
      entry["diagonal"] = std::move(d);
    } else {
      entry["form"] = "dense";
      entry["matrix"] = matrix_to_json(op.dense());
    }
    ops.push_back(std::move(entry));
  }
  return {{"fingerprint", scenario.fingerprint},
          {"dimension", scenario.space->dimension()},
          {"operators", std::move(ops)}};
}

}  // namespace evolint
