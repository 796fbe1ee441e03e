// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvwork/cvwork.hpp"
#include "support/oracles.hpp"

using namespace cvwork;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result.ok = false;
    result.detail = std::string("exception: ") + e.what();
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && elapsed > limit_seconds) {
    result.require(false, "runtime " + std::to_string(elapsed) + " s exceeds " + std::to_string(limit_seconds) + " s");
  }
  std::ostringstream line;
  line << (result.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title;
  line << " (" << std::fixed;
  line.precision(3);
  line << elapsed << " s";
  if (limit_seconds > 0) line << ", limit " << limit_seconds << " s";
  line << ")";
  if (!result.ok) line << " -- " << result.detail;
  std::cout << line.str() << std::endl;
  if (!result.ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---- criterion 1 --------------------------------------------------------

Outcome symmetric_closed_forms() {
  Outcome r;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ua(1.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = ua(rng);
    const double c = unit(rng) * std::sqrt(a * a - 1.0);
    const StandardFormParams p{a, a, c, -c};
    const double hom = work_hom(p);
    const double het = work_het(p);
    const double hom_ref = (a - std::sqrt(a * a - c * c)) / 2;
    const double het_ref = c * c / (2 * a + 2);
    r.require(std::abs(hom - hom_ref) < 1e-12, "W_hom mismatch at a=" + fmt(a) + " c=" + fmt(c));
    r.require(std::abs(het - het_ref) < 1e-12, "W_het mismatch at a=" + fmt(a) + " c=" + fmt(c));
  }
  return r;
}

// ---- criterion 2 --------------------------------------------------------

/// Last c on [lo, hi] where pred holds, given pred(lo) && !pred(hi).
double flip_point(const std::function<bool(double)>& pred, double lo, double hi) {
  return oracle::last_true(pred, lo, hi, 1e-13);
}

Outcome symmetric_boundaries() {
  Outcome r;
  for (double a : {1.5, 2.0, 5.0, 10.0}) {
    const double cmax = std::sqrt(a * a - 1.0);
    auto cls = [a](double c) { return classify(StandardFormParams{a, a, c, -c}); };
    const double sep = flip_point([&](double c) { return cls(c).separable; }, 0.0, cmax);
    const double steer = flip_point([&](double c) { return !cls(c).steerable_b_to_a; }, 0.0, cmax);
    r.require(std::abs(sep - (a - 1.0)) <= 1e-9,
              "separable flip at " + fmt(sep) + " vs " + fmt(a - 1.0) + " (a=" + fmt(a) + ")");
    r.require(std::abs(steer - std::sqrt(a * a - a)) <= 1e-9,
              "steering flip at " + fmt(steer) + " vs " + fmt(std::sqrt(a * a - a)) + " (a=" + fmt(a) + ")");
  }
  return r;
}

// ---- criterion 3 --------------------------------------------------------

Outcome closed_form_vs_matrix_oracle() {
  Outcome r;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> uab(1.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int done = 0;
  while (done < 1000) {
    const double a = uab(rng), b = uab(rng);
    const double ab = a * b;
    // c2 = 0 must satisfy each criterion so the oracle has a bracket.
    const double sep_c1_max_sq = ab - (a * a + b * b - 1.0) / ab;
    const double steer_c1_max_sq = b * (a - 1.0 / a);
    if (sep_c1_max_sq <= 0.0 || steer_c1_max_sq <= 0.0) continue;
    const double top = std::sqrt(ab) * (1.0 - 1e-12);

    const double c1s = -unit(rng) * std::sqrt(sep_c1_max_sq);
    const double sep_oracle =
        oracle::last_true([&](double c2) { return oracle::ppt(oracle::standard_form(a, b, c1s, c2)); }, 0.0, top);
    const double sep = boundary_c2_separable(a, b, c1s);
    r.require(std::abs(sep - sep_oracle) < 1e-6, "separability a=" + fmt(a) + " b=" + fmt(b) + " c1=" + fmt(c1s) +
                                                     ": " + fmt(sep) + " vs oracle " + fmt(sep_oracle));

    const double c1n = -unit(rng) * std::sqrt(steer_c1_max_sq);
    const double ns_oracle = oracle::last_true(
        [&](double c2) { return oracle::nonsteerable_b_to_a(oracle::standard_form(a, b, c1n, c2)); }, 0.0, top);
    const double ns = boundary_c2_nonsteer(a, b, c1n);
    r.require(std::abs(ns - ns_oracle) < 1e-6, "nonsteerability a=" + fmt(a) + " b=" + fmt(b) + " c1=" + fmt(c1n) +
                                                   ": " + fmt(ns) + " vs oracle " + fmt(ns_oracle));
    ++done;
  }
  return r;
}

// ---- criterion 4 --------------------------------------------------------

Outcome red_dot_symmetric() {
  Outcome r;
  for (auto protocol : {ProtocolKind::HomodyneAverage, ProtocolKind::Heterodyne}) {
    const RedDot d = red_dot(5, 5, BoundaryKind::Separability, protocol);
    r.require(std::abs(d.c1_star + d.c2_star) <= 1e-4,
              std::string(to_string(protocol)) + ": c1*=" + fmt(d.c1_star) + " c2*=" + fmt(d.c2_star));
  }
  return r;
}

// ---- criterion 5 --------------------------------------------------------

Outcome transitions() {
  Outcome r;
  const double het = find_transition_b(5, ProtocolKind::Heterodyne);
  r.require(std::abs(het - 3.0) <= 1e-3, "heterodyne b=" + fmt(het));
  r.require(std::abs(het - (1.0 + 5.0) / (5.0 - 3.0)) <= 1e-3, "heterodyne formula mismatch");
  const double hom = find_transition_b(5, ProtocolKind::HomodyneAverage);
  r.require(std::abs(hom - 2.56) <= 0.01, "homodyne b=" + fmt(hom));
  const double swapped = find_transition_a(5, ProtocolKind::Heterodyne);
  r.require(std::abs(swapped - 4.0) <= 1e-3, "fixed b=5 heterodyne a=" + fmt(swapped));
  return r;
}

// ---- criterion 6 --------------------------------------------------------

Outcome steer_vanish() {
  Outcome r;
  for (double a : {3.0, 5.0, 9.0}) {
    const double b = find_steer_vanish_b(a);
    r.require(std::abs(b - (1.0 + a) / 2.0) <= 1e-3, "a=" + fmt(a) + " b=" + fmt(b));
  }
  return r;
}

// ---- criterion 7 --------------------------------------------------------

Outcome outcome_independence() {
  Outcome r;
  std::mt19937_64 rng(107);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int k = 0; k < 10000 && r.ok; ++k) {
    const auto p = random_physical_params(rng);
    double ref[3] = {0, 0, 0};
    const ProtocolKind kinds[3] = {ProtocolKind::HomodyneX, ProtocolKind::HomodyneP, ProtocolKind::Heterodyne};
    for (int o = 0; o < 5; ++o) {
      const Vec2 outcome(normal(rng), normal(rng));
      for (int i = 0; i < 3; ++i) {
        const double w = run_protocol(p, kinds[i], outcome).work;
        if (o == 0)
          ref[i] = w;
        else
          r.require(w == ref[i], "work varies with outcome for " + std::string(to_string(kinds[i])));
      }
    }
    r.require(std::abs(0.5 * (ref[0] + ref[1]) - work_hom(p)) < 1e-12, "homodyne trajectory vs closed form");
    r.require(std::abs(ref[0] - work_x(p)) < 1e-12, "X trajectory vs closed form");
    r.require(std::abs(ref[1] - work_p(p)) < 1e-12, "P trajectory vs closed form");
    r.require(std::abs(ref[2] - work_het(p)) < 1e-12, "heterodyne trajectory vs closed form");
  }
  return r;
}

// ---- criterion 8 --------------------------------------------------------

Outcome monte_carlo() {
  Outcome r;
  const StandardFormParams p{5, 5, 3, -3};
  const auto batch = mc::sample_state(standard_form_state(p), 1'000'000, 20251016);
  const auto est = mc::estimate_conditional(batch, MeasurementSpec::x_homodyne());
  r.require(std::abs(est.slope(0, 0) - 0.6) <= 3 * est.slope_stderr(0, 0),
            "slope " + fmt(est.slope(0, 0)) + " +- " + fmt(est.slope_stderr(0, 0)));
  const Mat2 expected = Vec2(1.6, 2.5).asDiagonal();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.require(std::abs(est.conditional_cov(i, j) - expected(i, j)) <= 5 * est.conditional_cov_stderr(i, j),
                "conditional covariance entry " + std::to_string(i) + std::to_string(j) + " = " +
                    fmt(est.conditional_cov(i, j)));
  const auto hom = mc::mc_work(p, ProtocolKind::HomodyneAverage, 1'000'000, 20251016);
  r.require(std::abs(hom.mean_work - 0.5) <= std::max(4 * hom.standard_error, 1e-12),
            "homodyne mean work " + fmt(hom.mean_work));
  const auto het = mc::mc_work(p, ProtocolKind::Heterodyne, 1'000'000, 20251016);
  r.require(std::abs(het.mean_work - 0.75) <= std::max(4 * het.standard_error, 1e-12),
            "heterodyne mean work " + fmt(het.mean_work));
  return r;
}

// ---- criterion 9 --------------------------------------------------------

Outcome hierarchy() {
  Outcome r;
  for (double a : {2.0, 5.0, 10.0}) {
    const double cmax = std::sqrt(a * a - 1.0);
    const int n = 20000;
    double prev_hom = -1.0, prev_het = -1.0;
    int prev_class = 0;  // 0 separable, 1 entangled, 2 steerable
    bool seen[3] = {false, false, false};
    for (int k = 0; k <= n; ++k) {
      const double c = cmax * k / n;
      const StandardFormParams p{a, a, c, -c};
      const auto cls = classify(p);
      const int cur = cls.separable ? 0 : (cls.steerable_b_to_a ? 2 : 1);
      seen[cur] = true;
      r.require(cur >= prev_class, "class order breaks at a=" + fmt(a) + " c=" + fmt(c));
      const double wh = work_hom(p), we = work_het(p);
      r.require(wh > prev_hom && we > prev_het, "work not strictly increasing at a=" + fmt(a) + " c=" + fmt(c));
      prev_hom = wh;
      prev_het = we;
      prev_class = cur;
    }
    r.require(seen[0] && seen[1] && seen[2], "not all classes present at a=" + fmt(a));
  }
  return r;
}

// ---- criterion 10 -------------------------------------------------------

struct CsvRow {
  double a, b, c1, c2;
  bool flags[4];
  bool has_work;
  double w_hom, w_het;
};

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != kCsvHeader) throw std::runtime_error("unexpected header in " + path.string());
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.push_back("");
    if (f.size() != 10) throw std::runtime_error("bad row in " + path.string() + ": " + line);
    CsvRow row{};
    row.a = std::stod(f[0]);
    row.b = std::stod(f[1]);
    row.c1 = std::stod(f[2]);
    row.c2 = std::stod(f[3]);
    for (int i = 0; i < 4; ++i) row.flags[i] = f[static_cast<std::size_t>(4 + i)] == "1";
    row.has_work = !f[8].empty();
    if (row.has_work) {
      row.w_hom = std::stod(f[8]);
      row.w_het = std::stod(f[9]);
    }
    rows.push_back(row);
  }
  return rows;
}

struct GoldenGrid {
  std::string name;
  std::string args;
};

const std::vector<GoldenGrid> kGoldenGrids = {
    {"fig3_symmetric", "--mode symmetric --a-min 1 --a-max 5 --c-min 0 --c-max 5"},
    {"fig4_a5_b5", "--mode quadrant --a 5 --b 5 --c1-min -4.8 --c1-max 0 --c2-min 0 --c2-max 4.8"},
    {"fig5_a5_b2", "--mode quadrant --a 5 --b 2 --c1-min -3 --c1-max 0 --c2-min 0 --c2-max 3"},
    {"fig6_a2_b5", "--mode quadrant --a 2 --b 5 --c1-min -3 --c1-max 0 --c2-min 0 --c2-max 3"},
};

/// Checks on the regenerated grid that tie it back to criteria 1-6.
void spot_validate(const GoldenGrid& g, const std::vector<CsvRow>& rows, Outcome& r) {
  bool any_steer_b_to_a = false;
  for (const auto& row : rows) {
    const StandardFormParams p{row.a, row.b, row.c1, row.c2};
    any_steer_b_to_a |= row.flags[2];
    if (!row.has_work) continue;
    // criterion 1 / 7: closed forms
    r.require(std::abs(row.w_hom - work_formula(p, ProtocolKind::HomodyneAverage)) < 1e-12, g.name + ": W_hom");
    r.require(std::abs(row.w_het - work_formula(p, ProtocolKind::Heterodyne)) < 1e-12, g.name + ": W_het");
    if (g.name == "fig3_symmetric") {
      const double c = row.c1, a = row.a;
      // criterion 1 and 2
      r.require(std::abs(row.w_het - c * c / (2 * a + 2)) < 1e-12, g.name + ": symmetric W_het");
      if (std::abs(c - (a - 1)) > 1e-6) r.require(row.flags[1] == (c <= a - 1), g.name + ": separable mask");
      if (std::abs(c - std::sqrt(a * a - a)) > 1e-6)
        r.require(row.flags[2] == (c > std::sqrt(a * a - a)), g.name + ": steering mask");
    } else if (row.c1 <= 0.0) {
      // criterion 3: separable mask against the closed-form boundary
      const double ab = row.a * row.b;
      if (row.c1 * row.c1 < ab - (row.a * row.a + row.b * row.b - 1.0) / ab) {
        const double bound = boundary_c2_separable(row.a, row.b, row.c1);
        if (std::abs(row.c2 - bound) > 1e-6) r.require(row.flags[1] == (row.c2 <= bound), g.name + ": separable mask");
      }
    }
  }
  // criterion 6: B -> A steering only above b = (1 + a)/2
  if (g.name == "fig5_a5_b2") r.require(!any_steer_b_to_a, g.name + ": steerable rows below b = (1+a)/2");
  if (g.name == "fig6_a2_b5" || g.name == "fig4_a5_b5")
    r.require(any_steer_b_to_a, g.name + ": expected steerable rows");
}

Outcome golden_grids() {
  Outcome r;
  const std::filesystem::path golden_dir = CVWORK_GOLDEN_DIR;
  const auto tmp = std::filesystem::temp_directory_path() / ("cvwork_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(tmp);
  for (const auto& g : kGoldenGrids) {
    const auto golden_path = golden_dir / (g.name + ".csv");
    const auto fresh_path = tmp / (g.name + ".csv");
    const std::string cmd = std::string(CVWORK_CLI_PATH) + " sweep " + g.args + " --grid 41 --out " +
                            fresh_path.string() + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    r.require(status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0, g.name + ": sweep failed");
    if (!r.ok) break;
    if (!std::filesystem::exists(golden_path)) {
      r.require(false, "missing golden file " + golden_path.string());
      break;
    }
    const auto golden = read_csv(golden_path);
    const auto fresh = read_csv(fresh_path);
    r.require(golden.size() == 41u * 41u && fresh.size() == golden.size(), g.name + ": row count");
    if (!r.ok) break;
    for (std::size_t i = 0; i < golden.size(); ++i) {
      const auto& x = golden[i];
      const auto& y = fresh[i];
      const bool same_point = x.a == y.a && x.b == y.b && x.c1 == y.c1 && x.c2 == y.c2;
      bool same_flags = x.has_work == y.has_work;
      for (int f = 0; f < 4; ++f) same_flags = same_flags && x.flags[f] == y.flags[f];
      r.require(same_point && same_flags, g.name + ": row " + std::to_string(i) + " point/mask differs");
      if (x.has_work && y.has_work)
        r.require(std::abs(x.w_hom - y.w_hom) <= 1e-12 && std::abs(x.w_het - y.w_het) <= 1e-12,
                  g.name + ": row " + std::to_string(i) + " work differs");
    }
    spot_validate(g, fresh, r);
  }
  std::filesystem::remove_all(tmp);
  return r;
}

}  // namespace

int main() {
  criterion(1, "symmetric-slice closed forms", 1.0, symmetric_closed_forms);
  criterion(2, "symmetric-slice classification boundaries", 1.0, symmetric_boundaries);
  criterion(3, "closed-form boundaries vs matrix-criterion bisection", 30.0, closed_form_vs_matrix_oracle);
  criterion(4, "separability red dot at c1 = -c2 for a = b = 5", 5.0, red_dot_symmetric);
  criterion(5, "red-dot transitions for a = 5 and b = 5", 60.0, transitions);
  criterion(6, "steering vanishes at b = (1 + a)/2", 10.0, steer_vanish);
  criterion(7, "outcome independence and trajectory equivalence", 10.0, outcome_independence);
  criterion(8, "Monte-Carlo oracle", 30.0, monte_carlo);
  criterion(9, "work hierarchy along the symmetric slice", 1.0, hierarchy);
  criterion(10, "golden 41x41 grids", 0.0, golden_grids);
  return failures == 0 ? 0 : 1;
}
