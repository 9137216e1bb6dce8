#include "mlrr/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "mlrr/refiners.hpp"

namespace mlrr {

std::string real_to_string(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double string_to_real(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("string_to_real: bad real '" + s + "'");
  return v;
}

void KvDoc::set(const std::string& key, const std::string& value) {
  for (auto& e : entries)
    if (e.first == key) {
      e.second = value;
      return;
    }
  entries.emplace_back(key, value);
}

void KvDoc::set_real(const std::string& key, double value) {
  set(key, real_to_string(value));
}

void KvDoc::set_int(const std::string& key, std::int64_t value) {
  set(key, std::to_string(value));
}

void KvDoc::set_reals(const std::string& key, const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += real_to_string(values[i]);
  }
  set(key, s);
}

const std::string* KvDoc::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.first == key) return &e.second;
  return nullptr;
}

std::string KvDoc::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw std::out_of_range("KvDoc: missing key '" + key + "'");
  return *v;
}

double KvDoc::get_real(const std::string& key) const {
  return string_to_real(get(key));
}

std::int64_t KvDoc::get_int(const std::string& key) const {
  const std::string s = get(key);
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("KvDoc: bad integer '" + s + "'");
  return v;
}

std::vector<double> KvDoc::get_reals(const std::string& key) const {
  const std::string s = get(key);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    if (next > pos) out.push_back(string_to_real(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::string KvDoc::dump() const {
  std::string out;
  for (const auto& e : entries) {
    out += e.first;
    out += '=';
    out += e.second;
    out += '\n';
  }
  return out;
}

KvDoc KvDoc::parse(const std::string& text) {
  KvDoc doc;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::size_t eq = line.find('=', start);
    if (eq == std::string::npos)
      throw std::invalid_argument("KvDoc: malformed line '" + line + "'");
    std::string key = line.substr(start, eq - start);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = line.substr(eq + 1);
    std::size_t vs = value.find_first_not_of(" \t");
    value = (vs == std::string::npos) ? std::string() : value.substr(vs);
    doc.entries.emplace_back(std::move(key), std::move(value));
  }
  return doc;
}

std::string kind_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::crude: return "crude";
    case EstimatorKind::multistep: return "multistep";
    case EstimatorKind::mlmc: return "mlmc";
    case EstimatorKind::ml2r: return "ml2r";
  }
  return "?";
}

EstimatorKind kind_from_name(const std::string& s) {
  if (s == "crude") return EstimatorKind::crude;
  if (s == "multistep") return EstimatorKind::multistep;
  if (s == "mlmc") return EstimatorKind::mlmc;
  if (s == "ml2r") return EstimatorKind::ml2r;
  throw std::invalid_argument("unknown estimator kind '" + s + "'");
}

std::string regime_name(CostRegime r) {
  return r == CostRegime::sum ? "sum" : "max";
}

CostRegime regime_from_name(const std::string& s) {
  if (s == "sum") return CostRegime::sum;
  if (s == "max") return CostRegime::max;
  throw std::invalid_argument("unknown cost regime '" + s + "'");
}

std::string rounding_name(Rounding r) {
  switch (r) {
    case Rounding::floor: return "floor";
    case Rounding::nearest: return "nearest";
    case Rounding::ceil: return "ceil";
  }
  return "?";
}

Rounding rounding_from_name(const std::string& s) {
  if (s == "floor") return Rounding::floor;
  if (s == "nearest") return Rounding::nearest;
  if (s == "ceil") return Rounding::ceil;
  throw std::invalid_argument("unknown rounding mode '" + s + "'");
}

KvDoc plan_to_kv(const Plan& plan) {
  KvDoc doc;
  doc.set("kind", kind_name(plan.kind));
  doc.set_real("epsilon", plan.epsilon);
  doc.set_real("alpha", plan.params.alpha);
  doc.set_real("beta", plan.params.beta);
  doc.set_real("V1", plan.params.V1);
  doc.set_real("varY0", plan.params.var_Y0);
  doc.set_real("h_max", plan.params.h_max);
  doc.set_real("c1", plan.params.c1);
  doc.set_real("c_tilde", plan.params.c_tilde);
  doc.set_int("R", plan.R);
  doc.set_int("M", plan.M);
  doc.set_int("h_inv", plan.n_h);
  doc.set_reals("q", plan.q);
  doc.set_int("N", plan.N);
  doc.set("regime", regime_name(plan.regime));
  doc.set("rounding", rounding_name(plan.rounding));
  return doc;
}

Plan plan_from_kv(const KvDoc& doc) {
  StructuralParams p;
  p.alpha = doc.get_real("alpha");
  p.beta = doc.get_real("beta");
  p.V1 = doc.get_real("V1");
  p.var_Y0 = doc.get_real("varY0");
  p.h_max = doc.get_real("h_max");
  p.c1 = doc.get_real("c1");
  p.c_tilde = doc.get_real("c_tilde");

  PlanOverrides ov;
  ov.M = static_cast<int>(doc.get_int("M"));
  ov.R = static_cast<int>(doc.get_int("R"));
  ov.n_h = doc.get_int("h_inv");
  ov.q = doc.get_reals("q");
  ov.N = doc.get_int("N");

  const EstimatorKind kind = kind_from_name(doc.get("kind"));
  const double epsilon = doc.get_real("epsilon");
  const CostRegime regime = regime_from_name(doc.get("regime"));
  const Rounding rounding = rounding_from_name(doc.get("rounding"));

  if (kind == EstimatorKind::crude || kind == EstimatorKind::multistep) {
    Plan plan = (kind == EstimatorKind::crude)
                    ? crude_plan(epsilon, p)
                    : multistep_plan(epsilon, p,
                                     refiners(RefinerScheme::geometric(
                                         std::max(2, *ov.M), *ov.R)));
    plan.M = *ov.M;
    plan.n_h = *ov.n_h;
    plan.h = p.h_max / static_cast<double>(plan.n_h);
    plan.q = *ov.q;
    plan.N = *ov.N;
    plan.regime = regime;
    plan.rounding = rounding;
    return plan;
  }
  return make_plan(kind, epsilon, p, regime, rounding, ov);
}

}  // namespace mlrr
