#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mlrr/serialize.hpp"

using namespace mlrr;

TEST_SUITE("serialize") {

TEST_CASE("real round trip is bit exact") {
  for (const double v : {0.1, 1.0 / 3.0, 29.4987, 1e-300, 6.02e23, -0.0,
                         0.752827598407918, 2.2250738585072014e-308}) {
    CHECK(string_to_real(real_to_string(v)) == v);
  }
}

TEST_CASE("kv document parse and dump") {
  KvDoc doc;
  doc.set("name", "value");
  doc.set_real("x", 0.1);
  doc.set_int("n", 42);
  doc.set_reals("q", {0.5, 0.25, 0.25});
  const std::string text = doc.dump();
  const KvDoc back = KvDoc::parse(text);
  CHECK(back.get("name") == "value");
  CHECK(back.get_real("x") == 0.1);
  CHECK(back.get_int("n") == 42);
  CHECK(back.get_reals("q") == std::vector<double>{0.5, 0.25, 0.25});
  CHECK(back.find("missing") == nullptr);
  CHECK_THROWS_AS(back.get("missing"), std::out_of_range);

  const KvDoc commented = KvDoc::parse("# header\na=1\n\n# more\nb = two\n");
  CHECK(commented.get_int("a") == 1);
  CHECK(commented.get("b") == "two");
}

TEST_CASE("name converters") {
  for (const auto k : {EstimatorKind::crude, EstimatorKind::multistep,
                       EstimatorKind::mlmc, EstimatorKind::ml2r}) {
    CHECK(kind_from_name(kind_name(k)) == k);
  }
  for (const auto r : {CostRegime::sum, CostRegime::max})
    CHECK(regime_from_name(regime_name(r)) == r);
  for (const auto r : {Rounding::floor, Rounding::nearest, Rounding::ceil})
    CHECK(rounding_from_name(rounding_name(r)) == r);
  CHECK_THROWS_AS(kind_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("plan round trip is bit exact") {
  StructuralParams p;
  p.alpha = 0.5;
  p.beta = 1.0;
  p.V1 = 3.58;
  p.var_Y0 = 41.0;
  for (const auto kind : {EstimatorKind::ml2r, EstimatorKind::mlmc,
                          EstimatorKind::crude, EstimatorKind::multistep}) {
    const Plan plan = make_plan(kind, 1.0 / 32.0, p, CostRegime::sum);
    const Plan back = plan_from_kv(plan_to_kv(plan));
    CHECK(back.kind == plan.kind);
    CHECK(back.epsilon == plan.epsilon);
    CHECK(back.R == plan.R);
    CHECK(back.M == plan.M);
    CHECK(back.h == plan.h);
    CHECK(back.n_h == plan.n_h);
    CHECK(back.N == plan.N);
    CHECK(back.q == plan.q);
    CHECK(back.regime == plan.regime);
    CHECK(back.rounding == plan.rounding);
    CHECK(back.params.alpha == plan.params.alpha);
    CHECK(back.params.V1 == plan.params.V1);
    CHECK(back.params.var_Y0 == plan.params.var_Y0);
    CHECK(back.weights.w == plan.weights.w);
    CHECK(back.alloc.col == plan.alloc.col);
    // A second round trip produces identical text (stability).
    CHECK(plan_to_kv(back).dump() == plan_to_kv(plan).dump());
  }
}

}  // TEST_SUITE
