#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "relsim/model.hpp"
#include "relsim/rng.hpp"

using namespace relsim;
using testing::ModelBuilder;

TEST_CASE("validate flags a self-loop line") {
  ModelBuilder b;
  b.area(1).bus(1, 1).bus(2, 1);
  b.line(1, 1, 1, 0.1, 100.0);
  b.gen(1, 1, 50.0).load(1, 2, 30.0);
  auto model = b.build();
  auto report = validate(model);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& s : report.issues) found |= s.find("self-loop") != std::string::npos;
  CHECK(found);
}

TEST_CASE("validate passes a well-formed 2-bus model") {
  ModelBuilder b;
  b.area(1).bus(1, 1).bus(2, 1);
  b.line(1, 1, 2, 0.1, 100.0);
  b.gen(1, 1, 50.0).load(1, 2, 30.0);
  auto model = b.build();
  CHECK(validate(model).ok());
}

TEST_CASE("validate flags a generator on an unknown bus") {
  ModelBuilder b;
  b.area(1).bus(1, 1).bus(2, 1);
  b.line(1, 1, 2, 0.1, 100.0);
  b.gen(1, 99, 50.0).load(1, 2, 30.0);
  auto model = b.build();
  auto report = validate(model);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& s : report.issues) found |= s.find("unknown bus") != std::string::npos;
  CHECK(found);
}

TEST_CASE("validate is pure: identical models give identical reports") {
  ModelBuilder b;
  b.area(1).bus(1, 1).bus(2, 1);
  b.line(1, 1, 1, -0.1, 100.0);
  b.gen(1, 1, 50.0).load(1, 2, 30.0);
  auto model = b.build();
  auto r1 = validate(model);
  auto r2 = validate(model);
  CHECK(r1.issues == r2.issues);
}

TEST_CASE("connected network forms one island") {
  auto model = testing::triangle_model();
  auto islands = connected_components(model, testing::all_in_service(model));
  REQUIRE(islands.count() == 1);
  CHECK(islands.groups[0].size() == 3);
}

TEST_CASE("triangle minus two edges at one vertex gives two islands") {
  auto model = testing::triangle_model();
  // Remove both lines touching bus 3 (indices 1 and 2).
  std::vector<bool> mask{true, false, false};
  auto islands = connected_components(model, mask);
  REQUIRE(islands.count() == 2);
  CHECK(islands.groups[0] == std::vector<int>{0, 1});
  CHECK(islands.groups[1] == std::vector<int>{2});
}

TEST_CASE("islands form a partition and removing lines never merges them") {
  RngStream rng(99, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(12));
    ModelBuilder b;
    b.area(1);
    for (int i = 1; i <= n; ++i) b.bus(i, 1);
    const int n_lines = 1 + static_cast<int>(rng.uniform_below(20));
    for (int l = 1; l <= n_lines; ++l) {
      Id from = 1 + rng.uniform_below(n);
      Id to = 1 + rng.uniform_below(n);
      if (from == to) to = from % n + 1;
      b.line(l, from, to, 0.05 + 0.2 * rng.uniform01(), 100.0);
    }
    b.gen(1, 1, 1.0).load(1, 1, 1.0);
    auto model = b.build();

    std::vector<bool> mask(model.n_lines(), true);
    auto islands = connected_components(model, mask);

    // Partition: disjoint, union = bus set, island_of consistent.
    std::set<int> seen;
    for (size_t g = 0; g < islands.groups.size(); ++g) {
      for (int bus : islands.groups[g]) {
        CHECK(islands.island_of[bus] == static_cast<int>(g));
        CHECK(seen.insert(bus).second);
      }
    }
    CHECK(static_cast<int>(seen.size()) == model.n_buses());

    // Monotonicity under single-line removal.
    const int drop = static_cast<int>(rng.uniform_below(model.n_lines()));
    mask[drop] = false;
    auto fewer = connected_components(model, mask);
    CHECK(fewer.count() >= islands.count());
    mask[drop] = true;
    auto restored = connected_components(model, mask);
    CHECK(restored.count() == islands.count());
  }
}

TEST_CASE("apply_loading_level scales demand and capacity only") {
  auto model = testing::triangle_model();
  auto scaled = apply_loading_level(model, 1.37);
  CHECK(scaled.loads[0].peak_mw == doctest::Approx(13700.0));
  CHECK(scaled.generators[0].capacity_mw == doctest::Approx(13700.0));
  CHECK(scaled.lines[0].rating_mw == model.lines[0].rating_mw);
  CHECK_THROWS(apply_loading_level(model, 0.0));
}
