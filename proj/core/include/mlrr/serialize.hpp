#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mlrr/plan.hpp"

namespace mlrr {

// Flat key=value document, one entry per line, '#' comments.  Reals use the
// shortest decimal representation that round-trips bit-exactly
// (std::to_chars / std::from_chars).
struct KvDoc {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  void set_real(const std::string& key, double value);
  void set_int(const std::string& key, std::int64_t value);
  void set_reals(const std::string& key, const std::vector<double>& values);

  const std::string* find(const std::string& key) const;
  std::string get(const std::string& key) const;             // throws if missing
  double get_real(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;

  std::string dump() const;
  static KvDoc parse(const std::string& text);
};

std::string real_to_string(double v);
double string_to_real(const std::string& s);

// Plan <-> key-value document.  Weights and the allocation matrix are
// reconstructed from (kind, alpha, M, R), so the round trip is bit-exact on
// every stored field.
KvDoc plan_to_kv(const Plan& plan);
Plan plan_from_kv(const KvDoc& doc);

std::string kind_name(EstimatorKind k);
EstimatorKind kind_from_name(const std::string& s);
std::string regime_name(CostRegime r);
CostRegime regime_from_name(const std::string& s);
std::string rounding_name(Rounding r);
Rounding rounding_from_name(const std::string& s);

}  // namespace mlrr
