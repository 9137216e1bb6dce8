#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlrr/engine.hpp"
#include "mlrr/models.hpp"
#include "mlrr/serialize.hpp"

namespace mlrr {

// Harness configuration; mirrors the key=value config file one to one.
struct BenchConfig {
  std::string model = "call";
  std::vector<EstimatorKind> kinds = {EstimatorKind::ml2r};
  std::vector<int> k_grid = {1, 2, 3, 4, 5};  // epsilon = 2^-k
  int L = 64;
  int M_max = 10;
  Rounding rounding = Rounding::ceil;
  std::optional<CostRegime> regime;  // default: the model's preferred regime
  std::uint64_t seed = 12345;
  std::int64_t calib_samples = 100000;
  std::string out;             // empty -> stdout
  double budget_seconds = 0.0;  // 0 -> unlimited
  int threads = 1;

  // Merge key=value entries (config file / --config) into this object.
  void apply(const KvDoc& doc);
};

std::vector<EstimatorKind> kinds_from_string(const std::string& s);
std::vector<int> k_grid_from_string(const std::string& s);

// A benchmark model together with its published calibration (used for
// planning so that plan tables do not inherit calibration noise), the
// reference value, the cost regime its analysis calls for, and the probe
// step at which the published calibration was measured.
struct ModelSetup {
  std::string id;
  std::unique_ptr<LevelSampler> sampler;
  StructuralParams frozen;
  double reference = 0.0;
  CostRegime regime = CostRegime::sum;
  double probe_h = 1.0;
};

ModelSetup resolve_model(const std::string& model_id);

// CSV schema shared by cmd_plan and cmd_bench.
extern const char* const kCsvHeader;  // k,eps,l2_error,time_s,bias,var,R,M,h_inv,N,cost

struct CsvRow {
  int k = 0;
  double eps = 0.0;
  double l2_error = 0.0;
  double time_s = 0.0;
  double bias = 0.0;
  double var = 0.0;
  int R = 0;
  int M = 0;
  std::int64_t h_inv = 1;
  std::int64_t N = 0;
  double cost = 0.0;
};

std::string csv_line(const CsvRow& row);
std::vector<CsvRow> parse_csv(const std::string& text);  // validates the header

// Fresh calibration of the configured model; prints a key=value report and
// returns the measured structural parameters (alpha/beta are model-declared).
StructuralParams cmd_calibrate(const BenchConfig& cfg, std::ostream& os);

// One plan row per (kind, epsilon); simulation columns are zero.
void cmd_plan(const BenchConfig& cfg, const StructuralParams& params,
              std::ostream& os);

// L replications per (kind, epsilon); rows are emitted in grid order.  The
// optional second stream receives the derived series (eps_tilde/eps and
// time * eps^2 per epsilon).  A positive budget_seconds aborts gracefully
// between cells, leaving a partial table.
void cmd_bench(const BenchConfig& cfg, std::ostream& results,
               std::ostream* derived = nullptr);

// Per-k cost and time ratios (a over b) plus the interpolated
// time-at-equal-empirical-RMSE ratio.  Returns a small CSV.
std::string cmd_compare(const std::string& csv_a, const std::string& csv_b);

}  // namespace mlrr
