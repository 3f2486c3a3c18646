#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "schedsim/formats.hpp"
#include "schedsim/gen.hpp"

using namespace schedsim;
using schedsim::testing::small_spec;

TEST_CASE("generators are deterministic in the seed") {
  for (const GenKind kind : {GenKind::kRandom, GenKind::kDisagreeable,
                             GenKind::kLowLaxity, GenKind::kMixed}) {
    GenSpec spec = small_spec(99, 20, 4, kind);
    const std::string a = serialize_instance(generate(spec));
    const std::string b = serialize_instance(generate(spec));
    CHECK(a == b);
    GenSpec other = spec;
    other.seed = 100;
    CHECK(serialize_instance(generate(other)) != a);
  }
}

TEST_CASE("empty random instance") {
  GenSpec spec = small_spec(1, 0, 2, GenKind::kRandom);
  CHECK(generate(spec).jobs.empty());
}

TEST_CASE("ratio range at most one keeps every job low-laxity") {
  GenSpec spec = small_spec(7, 100, 4, GenKind::kRandom);
  spec.lax_ratio_lo_pm = 0;
  spec.lax_ratio_hi_pm = 1000;
  const Instance inst = generate(spec);
  for (const Job& j : inst.jobs) CHECK(laxity(j) <= j.size);
}

TEST_CASE("disagreeable instances nest their windows") {
  GenSpec spec = small_spec(3, 5, 2, GenKind::kDisagreeable);
  const Instance inst = generate(spec);
  REQUIRE(inst.jobs.size() == 5);
  for (std::size_t a = 0; a < inst.jobs.size(); ++a) {
    for (std::size_t b = a + 1; b < inst.jobs.size(); ++b) {
      CHECK(inst.jobs[a].release < inst.jobs[b].release);
      CHECK(inst.jobs[a].deadline > inst.jobs[b].deadline);
    }
  }
  for (const Job& j : inst.jobs) CHECK(laxity(j) <= j.size);

  GenSpec one = small_spec(3, 1, 1, GenKind::kDisagreeable);
  CHECK(generate(one).jobs.size() == 1);

  GenSpec cramped = small_spec(3, 10, 1, GenKind::kDisagreeable);
  cramped.horizon = 2;
  CHECK_THROWS_AS(generate(cramped), SpecError);
}

TEST_CASE("low laxity generator honors the ratio parameter") {
  {
    GenSpec spec = small_spec(4, 30, 2, GenKind::kLowLaxity);
    spec.lax_ratio_lo_pm = spec.lax_ratio_hi_pm = 0;
    for (const Job& j : generate(spec).jobs) CHECK(laxity(j) == 0);
  }
  {
    GenSpec spec = small_spec(5, 30, 2, GenKind::kLowLaxity);
    spec.lax_ratio_lo_pm = spec.lax_ratio_hi_pm = 1000;
    for (const Job& j : generate(spec).jobs) CHECK(laxity(j) == j.size);
  }
  {
    GenSpec spec = small_spec(6, 50, 2, GenKind::kLowLaxity);
    spec.lax_ratio_lo_pm = 0;
    spec.lax_ratio_hi_pm = 500;
    for (const Job& j : generate(spec).jobs) CHECK(laxity(j) <= j.size);
  }
  {
    GenSpec spec = small_spec(7, 5, 2, GenKind::kLowLaxity);
    spec.lax_ratio_hi_pm = 1500;
    CHECK_THROWS_AS(generate(spec), SpecError);
  }
}

TEST_CASE("mixed generator alternates laxity classes") {
  GenSpec spec = small_spec(8, 40, 4, GenKind::kMixed);
  const Instance inst = generate(spec);
  for (const Job& j : inst.jobs) {
    if (j.id % 2 == 0)
      CHECK(laxity(j) <= j.size);
    else
      CHECK(laxity(j) > j.size);
  }
}

TEST_CASE("generator rejects empty ranges") {
  GenSpec spec = small_spec(1, 5, 2, GenKind::kRandom);
  spec.size_lo = 5;
  spec.size_hi = 4;
  CHECK_THROWS_AS(generate(spec), SpecError);
  GenSpec neg = small_spec(1, 5, 2, GenKind::kRandom);
  neg.lax_ratio_lo_pm = 500;
  neg.lax_ratio_hi_pm = 100;
  CHECK_THROWS_AS(generate(neg), SpecError);
}
