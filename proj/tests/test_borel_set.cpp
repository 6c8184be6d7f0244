#include "doctest.h"
#include "fitevo/borel_set.hpp"
#include "fitevo/errors.hpp"

using namespace fitevo;

TEST_CASE("endpoint flags decide membership") {
  const BorelSet open_left = BorelSet::interval(0.5, 1.0, false, true);
  CHECK_FALSE(open_left.contains(0.5));
  CHECK(open_left.contains(0.5000001));
  CHECK(open_left.contains(1.0));
  const BorelSet single = BorelSet::singleton(0.25);
  CHECK(single.contains(0.25));
  CHECK_FALSE(single.contains(0.2500001));
  CHECK_FALSE(BorelSet::empty().contains(0.0));
}

TEST_CASE("parse accepts intervals, singletons and unions") {
  CHECK(BorelSet::parse("[0,0.5)") == BorelSet::left(0.5, false));
  CHECK(BorelSet::parse("{0.5}") == BorelSet::singleton(0.5));
  CHECK(BorelSet::parse("{}").is_empty());
  const BorelSet u = BorelSet::parse("[0,0.1]U(0.4,0.5)U{0.9}");
  REQUIRE(u.components().size() == 3);
  CHECK(u.contains(0.05));
  CHECK_FALSE(u.contains(0.4));
  CHECK(u.contains(0.9));
  CHECK(BorelSet::parse(u.to_string()) == u);
}

TEST_CASE("invalid sets are rejected") {
  CHECK_THROWS_AS(BorelSet::parse("[0,0.5]U[0.5,1]"), InvalidInput);
  CHECK_THROWS_AS(BorelSet::parse("[0.6,1]U[0,0.5]"), InvalidInput);
  CHECK_THROWS_AS(BorelSet::parse("[0,1.5]"), InvalidInput);
  CHECK_THROWS_AS(BorelSet::parse("0,1"), InvalidInput);
  CHECK_NOTHROW(BorelSet::parse("[0,0.5)U[0.5,1]"));
}

TEST_CASE("intersection keeps the tighter endpoint flags") {
  const BorelSet a = BorelSet::parse("[0,0.5]U[0.7,1]");
  const BorelSet b = a.intersect({0.5, 1.0, false, true});
  CHECK(b == BorelSet::parse("[0.7,1]"));
  const BorelSet c = a.intersect({0.0, 0.5, true, true});
  CHECK(c == BorelSet::parse("[0,0.5]"));
  CHECK(BorelSet::singleton(0.5).intersect({0.5, 1.0, false, true}).is_empty());
}
