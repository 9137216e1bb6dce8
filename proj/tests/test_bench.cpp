#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "mlrr/bench.hpp"

using namespace mlrr;

namespace {

// Blank out the wall-clock column (the only nondeterministic field).
std::string mask_time(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!first && !line.empty() && line[0] != '#') {
      std::size_t a = 0;
      for (int c = 0; c < 3; ++c) a = line.find(',', a) + 1;
      const std::size_t b = line.find(',', a);
      line = line.substr(0, a) + "T" + line.substr(b);
    }
    out += line + "\n";
    first = false;
  }
  return out;
}

BenchConfig synthetic_config() {
  BenchConfig cfg;
  cfg.model = "synthetic";
  cfg.kinds = {EstimatorKind::ml2r};
  cfg.k_grid = {2, 3};
  cfg.L = 2;
  cfg.seed = 31;
  return cfg;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("config parsing") {
  CHECK(k_grid_from_string("1, 2,3") == std::vector<int>{1, 2, 3});
  CHECK(k_grid_from_string("0.125,0.0625") == std::vector<int>{3, 4});
  CHECK_THROWS_AS(k_grid_from_string("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(k_grid_from_string("-1"), std::invalid_argument);

  const auto kinds = kinds_from_string("ml2r, mlmc");
  REQUIRE(kinds.size() == 2);
  CHECK(kinds[0] == EstimatorKind::ml2r);
  CHECK(kinds[1] == EstimatorKind::mlmc);

  BenchConfig cfg;
  KvDoc doc = KvDoc::parse(
      "model=lookback\nkind=mlmc\neps_grid=2,4\nreps=16\nm_max=6\n"
      "rounding=floor\nregime=max\nseed=99\nthreads=2\nbudget_seconds=1.5\n");
  cfg.apply(doc);
  CHECK(cfg.model == "lookback");
  CHECK(cfg.kinds == std::vector<EstimatorKind>{EstimatorKind::mlmc});
  CHECK(cfg.k_grid == std::vector<int>{2, 4});
  CHECK(cfg.L == 16);
  CHECK(cfg.M_max == 6);
  CHECK(cfg.rounding == Rounding::floor);
  CHECK(cfg.regime == CostRegime::max);
  CHECK(cfg.seed == 99);
  CHECK(cfg.threads == 2);
  CHECK(cfg.budget_seconds == 1.5);

  KvDoc bad = KvDoc::parse("nonsense=1\n");
  CHECK_THROWS_AS(cfg.apply(bad), std::invalid_argument);
}

TEST_CASE("csv schema round trip") {
  CHECK(std::string(kCsvHeader) == "k,eps,l2_error,time_s,bias,var,R,M,h_inv,N,cost");
  CsvRow r;
  r.k = 3;
  r.eps = 0.125;
  r.l2_error = 0.1;
  r.time_s = 1.5;
  r.bias = -0.01;
  r.var = 0.004;
  r.R = 3;
  r.M = 4;
  r.h_inv = 1;
  r.N = 318087;
  r.cost = 707185.67;
  const std::string text = std::string(kCsvHeader) + "\n" + csv_line(r) + "\n";
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].k == 3);
  CHECK(rows[0].eps == 0.125);
  CHECK(rows[0].bias == -0.01);
  CHECK(rows[0].N == 318087);
  CHECK(rows[0].cost == 707185.67);
  CHECK_THROWS_AS(parse_csv("wrong,header\n1,2\n"), std::invalid_argument);
}

TEST_CASE("plan table emission") {
  BenchConfig cfg;
  cfg.model = "call";
  cfg.kinds = {EstimatorKind::ml2r, EstimatorKind::mlmc};
  cfg.k_grid = {1, 2, 3};
  std::ostringstream os;
  const StructuralParams p = resolve_model("call").frozen;
  cmd_plan(cfg, p, os);
  const auto rows = parse_csv(os.str());
  REQUIRE(rows.size() == 6);
  CHECK(rows[2].R == 3);  // ml2r k=3
  CHECK(rows[2].M == 4);
  CHECK(rows[2].h_inv == 1);
  for (const auto& r : rows) {
    CHECK(r.l2_error == 0.0);
    CHECK(r.time_s == 0.0);
    // Cost recomputes from the row's own plan fields within 1 unit.
    PlanOverrides ov;
    ov.M = r.M;
    ov.R = r.R;
    ov.n_h = r.h_inv;
    ov.N = r.N;
    const auto kind = (&r - rows.data() < 3) ? EstimatorKind::ml2r : EstimatorKind::mlmc;
    const Plan plan = make_plan(kind, r.eps, p, CostRegime::sum, Rounding::ceil, ov);
    CHECK(std::fabs(plan.predicted_cost - r.cost) <= 1.0);
  }
}

TEST_CASE("bench smoke run emits one row per cell") {
  const BenchConfig cfg = synthetic_config();
  std::ostringstream res, der;
  cmd_bench(cfg, res, &der);
  const auto rows = parse_csv(res.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].k == 2);
  CHECK(rows[1].k == 3);
  for (const auto& r : rows) {
    CHECK(r.l2_error > 0.0);
    CHECK(r.time_s > 0.0);
    CHECK(r.var > 0.0);
  }
  // Derived series: one row per cell with eps_tilde/eps and time*eps^2.
  std::istringstream din(der.str());
  std::string line;
  REQUIRE(std::getline(din, line));
  CHECK(line == "k,eps,eps_ratio,time_eps2");
  int count = 0;
  while (std::getline(din, line))
    if (!line.empty()) ++count;
  CHECK(count == 2);
}

TEST_CASE("bench output is deterministic modulo timing") {
  const BenchConfig cfg = synthetic_config();
  std::ostringstream a, b;
  cmd_bench(cfg, a, nullptr);
  cmd_bench(cfg, b, nullptr);
  CHECK(mask_time(a.str()) == mask_time(b.str()));

  BenchConfig threaded = cfg;
  threaded.threads = 8;
  std::ostringstream c;
  cmd_bench(threaded, c, nullptr);
  CHECK(mask_time(a.str()) == mask_time(c.str()));
}

TEST_CASE("budget aborts gracefully with a partial table") {
  BenchConfig cfg = synthetic_config();
  cfg.budget_seconds = 1e-9;
  std::ostringstream os;
  cmd_bench(cfg, os, nullptr);
  const std::string text = os.str();
  CHECK(text.rfind(kCsvHeader, 0) == 0);
  CHECK(text.find("# truncated: budget_seconds exceeded") != std::string::npos);
}

TEST_CASE("compare ratios") {
  // Fixture mirroring the k=8 cost columns of the reference mlmc/ml2r tables.
  const std::string a =
      std::string(kCsvHeader) +
      "\n7,0.0078125,0.008,2.0,0.001,0.00005,4,7,1,127000000,382000000\n"
      "8,0.00390625,0.004,8.0,0.0005,0.00001,4,8,1,517000000,1620000000\n";
  const std::string b =
      std::string(kCsvHeader) +
      "\n7,0.0078125,0.008,1.2,0.001,0.00005,3,7,1,79800000,195000000\n"
      "8,0.00390625,0.004,4.0,0.0005,0.00001,3,9,1,325000000,837000000\n";
  const std::string table = cmd_compare(a, b);
  std::istringstream in(table);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "k,eps,cost_ratio,time_ratio,time_at_equal_rmse_ratio");
  REQUIRE(std::getline(in, line));  // k=7
  REQUIRE(std::getline(in, line));  // k=8
  std::istringstream row(line);
  std::string field;
  std::getline(row, field, ',');
  CHECK(field == "8");
  std::getline(row, field, ',');
  std::getline(row, field, ',');
  CHECK(string_to_real(field) == doctest::Approx(1620.0 / 837.0).epsilon(1e-9));
  std::getline(row, field, ',');
  CHECK(string_to_real(field) == doctest::Approx(2.0).epsilon(1e-9));
  std::getline(row, field, ',');
  CHECK(string_to_real(field) == doctest::Approx(2.0).epsilon(1e-6));

  // Identical inputs: all ratios 1.
  const std::string same = cmd_compare(a, a);
  std::istringstream sin(same);
  std::getline(sin, line);
  while (std::getline(sin, line)) {
    std::istringstream r2(line);
    std::getline(r2, field, ',');
    std::getline(r2, field, ',');
    for (int c = 0; c < 3; ++c) {
      std::getline(r2, field, ',');
      CHECK(string_to_real(field) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  const std::string disjoint =
      std::string(kCsvHeader) + "\n1,0.5,0.4,1.0,0.1,0.01,2,4,1,100,200\n";
  CHECK_THROWS_AS(cmd_compare(a, disjoint), std::invalid_argument);
}

TEST_CASE("calibrate on the synthetic model") {
  BenchConfig cfg;
  cfg.model = "synthetic";
  cfg.calib_samples = 50000;
  std::ostringstream os;
  const StructuralParams p = cmd_calibrate(cfg, os);
  CHECK(p.V1 == doctest::Approx(1.0).epsilon(0.05));
  // The variance probe runs at h = h_max, where the synthetic model carries
  // its own level noise on top of var(Y0): y0_std^2 + V1 h^beta = 2.
  CHECK(p.var_Y0 == doctest::Approx(2.0).epsilon(0.05));
  const KvDoc doc = KvDoc::parse(os.str());
  CHECK(doc.get_real("V1_hat") == p.V1);
  CHECK(doc.get_real("var_hat") == p.var_Y0);
  CHECK(doc.get_real("theta") == doctest::Approx(p.theta()));
}

}  // TEST_SUITE
