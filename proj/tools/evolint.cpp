// evolint: verify scenarios, compute evolution operators, print the demo.
//
// Exit codes: 0 all checks pass, 1 a check failed (or produced non-finite
// data), 2 parse or schema error, 3 dense cap exceeded, 4 domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "evolint/compute.hpp"
#include "evolint/errors.hpp"
#include "evolint/scenario.hpp"
#include "evolint/suites.hpp"

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kSchema = 2, kCap = 3, kDomain = 4 };

evolint::Scenario load(const std::string& config, std::optional<std::uint64_t> seed) {
  evolint::LoadOptions options;
  options.seed = seed;
  options.dense_cap = evolint::dense_cap_from_env();
  if (config == "demo") return evolint::parse_scenario(evolint::demo_scenario_json(), options);
  return evolint::load_scenario(config, options);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw evolint::ParseError("cannot write '" + out + "'");
  f << text;
}

int report_error(const char* kind, const std::exception& e, int code) {
  std::cerr << "evolint: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and dynamical checks on finite grid evolution spaces"};
  app.require_subcommand(1);

  std::string config;
  std::string suite = "all";
  std::string out;
  std::optional<std::uint64_t> seed;
  bool timings = false;
  std::string subsets;
  bool conjugated = false;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites on a scenario");
  verify->add_option("config", config, "scenario JSON file, or 'demo'")->required();
  verify->add_option("--suite", suite, "all, or comma-separated suite names");
  verify->add_option("--out", out, "write the JSON-lines report here instead of stdout");
  verify->add_option("--seed", seed, "override the scenario seed");
  verify->add_flag("--timings", timings, "add runtime_ms to each record");

  CLI::App* compute = app.add_subcommand("compute", "emit U_T for listed subsets");
  compute->add_option("config", config, "scenario JSON file, or 'demo'")->required();
  compute->add_option("--subsets", subsets, "subsets as '1,2;3;{}'")->required();
  compute->add_option("--out", out, "write JSON here instead of stdout");
  compute->add_option("--seed", seed, "override the scenario seed");
  compute->add_flag("--conjugated", conjugated, "use the conjugated measure (dense output)");

  CLI::App* demo = app.add_subcommand("demo", "print the built-in demo scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kSchema;
  }

  try {
    if (*demo) {
      std::cout << evolint::demo_scenario_json().dump(2) << "\n";
      return kPass;
    }
    const evolint::Scenario scenario = load(config, seed);
    if (*verify) {
      const evolint::VerificationReport report = evolint::run_suite(scenario, suite);
      emit(evolint::to_jsonl(report, timings), out);
      return report.passed() ? kPass : kCheckFailed;
    }
    const auto sets = evolint::parse_subsets(scenario.grid->frame(), subsets);
    emit(evolint::compute_operators(scenario, sets, conjugated).dump() + "\n", out);
    return kPass;
  } catch (const evolint::CapExceeded& e) {
    return report_error("cap exceeded", e, kCap);
  } catch (const evolint::ParseError& e) {
    return report_error("parse error", e, kSchema);
  } catch (const evolint::SchemaError& e) {
    return report_error("schema error", e, kSchema);
  } catch (const evolint::DataError& e) {
    return report_error("data error", e, kCheckFailed);
  } catch (const evolint::Error& e) {
    return report_error("domain error", e, kDomain);
  }
}
