#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <set>

#include "ordq/dataset.hpp"
#include "ordq/error.hpp"
#include "ordq/parallel.hpp"
#include "ordq/rng.hpp"
#include "ordq/schema.hpp"

using namespace ordq;

namespace {

FeatureSchema tiny_schema() {
  return FeatureSchema::from_groups({
      {"G1", {{"A", 2}, {"B", 3}}},
      {"G2", {{"C", 1}}},
  });
}

Dataset tiny_dataset() {
  FeatureSchema schema = tiny_schema();
  Matrix x(4, 6);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) x(i, j) = 10.0 * i + j;
  return Dataset(x, {1, 2, 3, 5}, {"a", "b", "c", "d"}, schema);
}

std::string category_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  return "";
}

}  // namespace

TEST_CASE("schema assigns contiguous offsets in declaration order") {
  FeatureSchema s = tiny_schema();
  CHECK(s.total_columns() == 6);
  CHECK(s.blocks().size() == 3);
  CHECK(s.block("A").offset == 0);
  CHECK(s.block("A").width == 2);
  CHECK(s.block("B").offset == 2);
  CHECK(s.block("B").width == 3);
  CHECK(s.block("C").offset == 5);
  CHECK(s.block("C").group == "G2");
  CHECK(s.block_names() == std::vector<std::string>{"A", "B", "C"});
  CHECK(s.group_names() == std::vector<std::string>{"G1", "G2"});
  CHECK(s.blocks_of_group("G1") == std::vector<std::string>{"A", "B"});
}

TEST_CASE("schema validation rejects bad declarations") {
  CHECK(category_of([] {
          FeatureSchema::from_groups({{"G", {{"A", 2}, {"A", 1}}}});
        }) == "schema-invalid");
  CHECK(category_of([] { FeatureSchema::from_groups({{"G", {{"A", 0}}}}); }) == "schema-invalid");
  CHECK(category_of([] { FeatureSchema::from_groups({}); }) == "schema-invalid");
  CHECK(category_of([] { FeatureSchema::from_groups({{"G", {}}}); }) == "schema-invalid");
  CHECK(category_of([] { tiny_schema().block("missing"); }) == "schema-mismatch");
}

TEST_CASE("block selection set operations and key") {
  FeatureSchema s = tiny_schema();
  BlockSelection all = BlockSelection::all(s);
  CHECK(all.names().size() == 3);
  BlockSelection sel = BlockSelection::of({"C", "A"});
  CHECK(sel.key() == "A|C");
  CHECK(sel.with("B").key() == "A|B|C");
  CHECK(sel.without("A").key() == "C");
  CHECK(sel.contains("A"));
  CHECK_FALSE(sel.contains("B"));
}

TEST_CASE("project_columns maps selected blocks to source columns") {
  FeatureSchema s = tiny_schema();
  auto [sub, cols] = project_columns(s, BlockSelection::of({"C", "A"}));
  // Declaration order, not selection-set order.
  CHECK(sub.block_names() == std::vector<std::string>{"A", "C"});
  CHECK(cols == std::vector<int>{0, 1, 5});
  CHECK(sub.total_columns() == 3);
  CHECK(category_of([&] { project_columns(s, BlockSelection::of({})); }) == "invalid-selection");
  CHECK(category_of([&] { project_columns(s, BlockSelection::of({"Z"})); }) == "schema-mismatch");
}

TEST_CASE("project gathers the selected feature columns") {
  Dataset d = tiny_dataset();
  Dataset p = project(d, BlockSelection::of({"B"}));
  CHECK(p.cols() == 3);
  CHECK(p.rows() == 4);
  CHECK(p.features()(1, 0) == 12.0);  // row 1, source column 2
  CHECK(p.features()(3, 2) == 34.0);  // row 3, source column 4
  CHECK(p.labels() == d.labels());
  CHECK(p.ids() == d.ids());
}

TEST_CASE("prevalence vector validation") {
  Vector ok(3);
  ok << 0.2, 0.3, 0.5;
  PrevalenceVector p = PrevalenceVector::checked(ok);
  CHECK(p.size() == 3);
  CHECK(p[2] == 0.5);

  Vector bad_sum(2);
  bad_sum << 0.5, 0.6;
  CHECK(category_of([&] { PrevalenceVector::checked(bad_sum); }) == "invalid-prevalence");
  Vector negative(2);
  negative << -0.1, 1.1;
  CHECK(category_of([&] { PrevalenceVector::checked(negative); }) == "invalid-prevalence");

  // normalized clamps negatives and rescales.
  Vector messy(3);
  messy << -1.0, 1.0, 3.0;
  PrevalenceVector n = PrevalenceVector::normalized(messy);
  CHECK(n[0] == 0.0);
  CHECK(n[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(n[2] == doctest::Approx(0.75).epsilon(1e-12));
  Vector zeros = Vector::Zero(3);
  CHECK(category_of([&] { PrevalenceVector::normalized(zeros); }) == "invalid-prevalence");

  PrevalenceVector u = PrevalenceVector::uniform(4);
  CHECK(u[0] == 0.25);
  Vector cum = p.cumulative();
  CHECK(cum(0) == 0.2);
  CHECK(cum(1) == 0.5);
  CHECK(cum(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical prevalence counts labels") {
  PrevalenceVector p = empirical_prevalence({1, 1, 2, 5}, 5);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.25);
  CHECK(p[2] == 0.0);
  CHECK(p[4] == 0.25);
  CHECK(category_of([] { empirical_prevalence({}, 5); }) == "empty-input");
  CHECK(category_of([] { empirical_prevalence({0}, 5); }) == "label-out-of-range");
  CHECK(category_of([] { empirical_prevalence({6}, 5); }) == "label-out-of-range");
}

TEST_CASE("dataset validation and subset") {
  FeatureSchema s = tiny_schema();
  Matrix x = Matrix::Zero(2, 6);
  CHECK(category_of([&] { Dataset(x, {1}, {"a", "b"}, s); }) == "shape-error");
  CHECK(category_of([&] { Dataset(x, {1, 6}, {"a", "b"}, s); }) == "label-out-of-range");
  Matrix bad = x;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(category_of([&] { Dataset(bad, {1, 2}, {"a", "b"}, s); }) == "ingestion-error");
  Matrix narrow = Matrix::Zero(2, 5);
  CHECK(category_of([&] { Dataset(narrow, {1, 2}, {"a", "b"}, s); }) == "schema-mismatch");

  Dataset d = tiny_dataset();
  Dataset sub = d.subset({3, 0, 3});
  CHECK(sub.rows() == 3);
  CHECK(sub.labels() == std::vector<int>{5, 1, 5});
  CHECK(sub.ids() == std::vector<std::string>{"d", "a", "d"});
  CHECK(sub.features()(0, 0) == 30.0);
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(42), d(43);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += c.next_u64() == d.next_u64();
  CHECK(same == 0);

  // Path-derived streams: different tags diverge, same path agrees.
  Rng e(7, {1, 2, 3});
  Rng f(7, {1, 2, 3});
  Rng g(7, {1, 2, 4});
  CHECK(e.next_u64() == f.next_u64());
  CHECK(e.next_u64() != g.next_u64());
}

TEST_CASE("rng uniform and shuffle behave sanely") {
  Rng r(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);

  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  auto w = v;
  r.shuffle(w);
  CHECK(std::set<int>(w.begin(), w.end()) == std::set<int>(v.begin(), v.end()));
  for (int i = 0; i < 20; ++i) {
    std::size_t n = r.below(7);
    CHECK(n < 7);
  }
}

TEST_CASE("parallel_for matches serial execution and forwards exceptions") {
  std::vector<double> serial(1000), parallel(1000);
  for (std::size_t i = 0; i < serial.size(); ++i) serial[i] = std::sqrt(static_cast<double>(i));
  parallel_for(parallel.size(), 4,
               [&](std::size_t i) { parallel[i] = std::sqrt(static_cast<double>(i)); });
  CHECK(serial == parallel);

  CHECK_THROWS_AS(parallel_for(100, 4,
                               [&](std::size_t i) {
                                 if (i == 57) fail("parameter-error", "boom");
                               }),
                  Error);
}
