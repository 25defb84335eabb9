// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "evolint/dynamics.hpp"
#include "evolint/scenario.hpp"
#include "evolint/suites.hpp"

using namespace evolint;
using nlohmann::json;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << "AC" << n << " " << what << "\n";
  if (!ok) ++failures;
}

const CheckRecord& find(const VerificationReport& r, const std::string& id) {
  for (const CheckRecord& c : r.checks)
    if (c.id == id) return c;
  throw std::runtime_error("missing check " + id);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// points(T) for a 2x2 grid: two times with grids {id, flip} and {id, Haar}.
json two_by_two() {
  return json::parse(R"({
    "algebra": {"blocks": [2]},
    "frame": {"times": [1, 2], "weights": ["1", "1"]},
    "grids": [
      {"unitaries": [[[1,0],[0,0],[0,0],[1,0]], [[0,0],[1,0],[1,0],[0,0]]]},
      {"haar": {"count": 2, "seed": 5}}
    ],
    "seed": 3
  })");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  LoadOptions demo_options;
  demo_options.seed = 42;
  const Scenario demo = parse_scenario(demo_scenario_json(), demo_options);
  const Scenario small = parse_scenario(two_by_two());

  {
    const auto t0 = std::chrono::steady_clock::now();
    const VerificationReport spectral = run_suite(demo, "spectral");
    const VerificationReport conj = run_suite(demo, "conjugation");
    const double elapsed = seconds_since(t0);
    const CheckRecord& d = find(spectral, "spectral.pvm_axioms");
    const CheckRecord& c = find(conj, "conjugation.pvm_axioms");
    report(1, demo.space->dimension() == 12 && d.max_deviation == 0.0 && c.max_deviation < 1e-12 && elapsed < 5.0,
           "PVM axioms on N=12: diagonal deviation " + fmt(d.max_deviation) + " (exact), conjugated " +
               fmt(c.max_deviation) + " < 1e-12, " + fmt(elapsed) + " s < 5 s");
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const VerificationReport r = run_suite(demo, "spectral");
    const double elapsed = seconds_since(t0);
    const CheckRecord& p = find(r, "spectral.pushforward");
    report(2, p.max_deviation == 0.0 && elapsed < 10.0,
           "pushforward E_T = E o preimage and singleton ranks: deviation " + fmt(p.max_deviation) + ", " +
               fmt(elapsed) + " s < 10 s");
  }

  {
    const VerificationReport r = run_suite(demo, "spectral");
    const VerificationReport s = run_suite(small, "spectral");
    const double dev = std::max({find(r, "spectral.factorization").max_deviation,
                                 find(r, "spectral.diagonal_form").max_deviation,
                                 find(s, "spectral.injective_full").max_deviation,
                                 find(s, "spectral.injective_restricted").max_deviation});
    report(3, dev == 0.0, "diagonal-form calculus, homomorphism laws, injectivity on 2x2: deviation " + fmt(dev));
  }

  {
    const VerificationReport s = run_suite(small, "spectral");
    const double dev = std::max(find(s, "spectral.eta_embedding").max_deviation,
                                find(s, "spectral.eta_projections").max_deviation);
    report(4, dev == 0.0, "embedding identities and norm preservation on 2x2: deviation " + fmt(dev));
  }

  {
    const VerificationReport r = run_suite(demo, "conjugation");
    const double dev = std::max({find(r, "conjugation.pvm_axioms").max_deviation,
                                 find(r, "conjugation.representation").max_deviation,
                                 find(r, "conjugation.covariance").max_deviation});
    report(5, dev < 1e-12, "conjugation covariance with a seeded N=12 unitary: deviation " + fmt(dev) + " < 1e-12");
  }

  {
    const VerificationReport r = run_suite(demo, "dynamics");
    const CheckRecord& law = find(r, "dynamics.group_law");
    const CheckRecord& null = find(r, "dynamics.null_sets");
    const SpectralMeasure e = SpectralMeasure::full(*demo.space);
    const Operator empty = evolution_unitary(*demo.weight, TimeSet{}, e).op;
    const bool empty_is_one = empty.diagonal() == DiagonalOperator::identity(demo.space->dimension());
    // {1,3} and {2,3} meet only at time 3, which has weight 0.
    const TimeFrame& frame = demo.grid->frame();
    const GroupLawReport overlap = check_group_law(*demo.weight, TimeSet(0b101), TimeSet(0b110), e, 1e-12);
    report(6,
           demo.dynamics_kind == "lagrangian" && law.max_deviation < 1e-12 && null.max_deviation == 0.0 &&
               empty_is_one && overlap.passed() && frame.weight(2) == 0.0,
           "group law over all mu-disjoint pairs: deviation " + fmt(law.max_deviation) +
               ", null-time overlap pair " + fmt(overlap.deviation) + ", U_T = 1 on null sets exactly");
  }

  {
    const VerificationReport r = run_suite(demo, "dynamics");
    const double commute = find(r, "dynamics.commute").max_deviation;
    // One time, grid {id, flip}, u = (1, -1), U = rotation by pi/4.
    // Dense oracle: U_T = sigma_z, U'_T = U^T sigma_z U = -sigma_x, and
    // ||[sigma_z, -sigma_x]|| = ||2i sigma_y|| = 2.
    const json witness_cfg = json::parse(R"({
      "algebra": {"blocks": [2]},
      "frame": {"times": [1], "weights": ["1"]},
      "grids": [{"unitaries": [[[1,0],[0,0],[0,0],[1,0]], [[0,0],[1,0],[1,0],[0,0]]]}],
      "dynamics": {"kind": "action_weight", "entries": [
        {"subset": [], "phases": ["0"]},
        {"subset": [1], "values": [[1, 0], [-1, 0]]}]},
      "conjugator": {"matrix": [[0.7071067811865476, 0], [-0.7071067811865476, 0],
                                [0.7071067811865476, 0], [0.7071067811865476, 0]]}
    })");
    const Scenario w = parse_scenario(witness_cfg);
    const double c = std::sqrt(0.5);
    Matrix u(2, 2), sz(2, 2);
    u << c, -c, c, c;
    sz << 1, 0, 0, -1;
    const Matrix oracle = sz * (u.adjoint() * sz * u) - (u.adjoint() * sz * u) * sz;
    const double oracle_norm = Eigen::JacobiSVD<Matrix>(oracle).singularValues()(0);
    const CommutantReport cw = commutant_witness(*w.weight, *w.conjugator, SpectralMeasure::full(*w.space), 1e-12);
    report(7,
           commute < 1e-12 && cw.witness > 0.1 && std::abs(cw.witness - oracle_norm) < 1e-12 &&
               std::abs(oracle_norm - 2.0) < 1e-12,
           "same-representation commutators " + fmt(commute) + " < 1e-12; witness ||[U_T, U'_T]|| = " +
               fmt(cw.witness) + " (dense oracle " + fmt(oracle_norm) + ") > 0.1");
  }

  {
    const VerificationReport r = run_suite(demo, "lagrangian");
    double dev = 0.0;
    bool all = r.passed() && r.checks.size() == 5;
    for (const CheckRecord& c : r.checks) {
      dev = std::max(dev, c.max_deviation);
      all = all && c.tolerance <= 1e-12;
    }
    report(8, all && dev < 1e-12, "Lagrangian restriction, additivity, Lipschitz, action weight: deviation " + fmt(dev));
  }

  {
    const WStarAlgebra alg({2, 3});
    SplitMix64 rng(derive_seed(42, 9));
    bool ok = true;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto rep = verify_automorphism(Automorphism::haar(alg, rng), 20, rng.next(), 1e-10);
      ok = ok && rep.passed();
      worst = std::max(worst, rep.max_deviation());
    }
    const auto avg = verify_automorphism(GridPointMap(LinearMap::trace_average(alg), "trace_average"), 20, 1, 1e-10);
    report(9, ok && !avg.passed(),
           "50 Haar automorphisms of M2+M3 within 1e-10 (worst " + fmt(worst) +
               "); trace-average contraction flagged (multiplicative defect " + fmt(avg.multiplicative) + ")");
  }

  {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "evolint_acceptance_1.jsonl";
    const auto b = dir / "evolint_acceptance_2.jsonl";
    const std::string cli = EVOLINT_CLI;
    const int s1 = std::system((cli + " verify demo --seed 42 --out " + a.string()).c_str());
    const int s2 = std::system((cli + " verify demo --seed 42 --out " + b.string()).c_str());
    const std::string ra = slurp(a);
    const std::string rb = slurp(b);
    const bool ok = WIFEXITED(s1) && WEXITSTATUS(s1) == 0 && WIFEXITED(s2) && WEXITSTATUS(s2) == 0 &&
                    !ra.empty() && ra == rb;
    report(10, ok, "two runs of 'verify demo --seed 42' are byte-identical (" + std::to_string(ra.size()) + " bytes)");
  }

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << "\n";
  return failures;
}
