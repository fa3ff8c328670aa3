#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itc/profile.hpp"
#include "itc/rng.hpp"
#include "oracles.hpp"

using namespace itc;

TEST_CASE("profile literal parse and print") {
  const auto p = DegreeProfile::parse("2:0.888,8:0.06,9:0.052");
  REQUIRE(p.entries().size() == 3);
  CHECK(p.entries()[0].degree == 2);
  CHECK(p.entries()[0].fraction == doctest::Approx(0.888));
  CHECK(p.entries()[2].degree == 9);
  CHECK(DegreeProfile::parse(p.to_literal()).entries().size() == 3);

  CHECK_THROWS_AS(DegreeProfile::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(DegreeProfile::parse("2"), std::invalid_argument);
  CHECK_THROWS_AS(DegreeProfile::parse("x:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(DegreeProfile::parse("2:abc"), std::invalid_argument);
  CHECK_THROWS_AS(DegreeProfile::parse("2:0.5,,3:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(DegreeProfile::parse("2:0.5:3"), std::invalid_argument);
}

TEST_CASE("profile validation names the violated constraint") {
  CHECK(!validate(DegreeProfile{{2, 1.0}}));
  CHECK(!validate(DegreeProfile::parse("2:0.888,8:0.06,9:0.052")));

  auto msg = validate(DegreeProfile{{2, 0.5}, {3, 0.4}});
  REQUIRE(msg.has_value());
  CHECK(msg->find("sum") != std::string::npos);

  msg = validate(DegreeProfile{{1, 1.0}});
  REQUIRE(msg.has_value());
  CHECK(msg->find("below 2") != std::string::npos);

  msg = validate(DegreeProfile{{2, 0.5}, {2, 0.5}});
  REQUIRE(msg.has_value());
  CHECK(msg->find("duplicate") != std::string::npos);

  CHECK(validate(DegreeProfile{{2, -0.5}, {3, 1.5}}).has_value());
  CHECK(validate(DegreeProfile{}).has_value());
  CHECK_THROWS_AS(require_valid(DegreeProfile{{1, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("regular profile detection") {
  CHECK(DegreeProfile{{2, 1.0}}.is_regular());
  CHECK(!DegreeProfile::parse("2:0.85,7:0.15").is_regular());
  CHECK(!DegreeProfile{{3, 1.0}}.is_regular());
}

TEST_CASE("average degree") {
  CHECK(average_degree(DegreeProfile{{2, 1.0}}) == doctest::Approx(2.0));
  CHECK(average_degree(DegreeProfile::parse("2:0.888,8:0.06,9:0.052")) ==
        doctest::Approx(2.724).epsilon(1e-12));
  CHECK(average_degree(DegreeProfile::parse("2:0.85,7:0.15")) ==
        doctest::Approx(2.75).epsilon(1e-12));
  SUBCASE("entry order does not matter") {
    CHECK(average_degree(DegreeProfile::parse("7:0.15,2:0.85")) ==
          doctest::Approx(2.75).epsilon(1e-12));
  }
}

TEST_CASE("puncture pattern parsing and arithmetic") {
  const auto p = PuncturePattern::parse("11101101110");
  CHECK(p.period() == 11);
  CHECK(p.punctured_fraction() == doctest::Approx(3.0 / 11.0).epsilon(1e-15));
  CHECK(p.theta() == doctest::Approx(11.0 / 19.0).epsilon(1e-15));
  CHECK(p.to_literal() == "11101101110");
  CHECK(p.keep_count(11) == 8);
  CHECK(p.keep_count(22) == 16);
  CHECK(p.keep_count(13) == 10);

  const auto all = PuncturePattern::parse("1");
  CHECK(all.punctured_fraction() == 0.0);
  CHECK(all.keep_count(100) == 100);

  CHECK(PuncturePattern::parse("10").keep_count(4) == 2);

  CHECK_THROWS_AS(PuncturePattern::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(PuncturePattern::parse("10120"), std::invalid_argument);
  CHECK_THROWS_AS(PuncturePattern::parse("000"), std::invalid_argument);
}

TEST_CASE("code rate") {
  CHECK(code_rate(DegreeProfile{{2, 1.0}}, PuncturePattern::parse("1")) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(code_rate(DegreeProfile{{2, 1.0}}, PuncturePattern::parse("10")) ==
        doctest::Approx(0.5).epsilon(1e-15));
  const auto mask = PuncturePattern::parse("11101101110");
  CHECK(code_rate(DegreeProfile::parse("2:0.888,8:0.06,9:0.052"), mask) ==
        doctest::Approx(0.3354476702).epsilon(1e-9));
  CHECK(code_rate(DegreeProfile::parse("2:0.96,6:0.04"), mask) ==
        doctest::Approx(0.3889674682).epsilon(1e-9));
  CHECK(code_rate(DegreeProfile::parse("2:0.85,7:0.15"), mask) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("realize splits counts by largest remainder") {
  SUBCASE("regular") {
    const auto map = realize(DegreeProfile{{2, 1.0}}, 4);
    CHECK(map.source_count == 4);
    CHECK(map.repeated_length() == 8);
    for (auto d : map.degree_of) CHECK(d == 2);
    CHECK(map.group_start == std::vector<Index>{0, 2, 4, 6});
  }

  SUBCASE("exact fractions") {
    const auto map = realize(DegreeProfile::parse("2:0.85,7:0.15"), 100);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 2) == 85);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 7) == 15);
    CHECK(map.repeated_length() == 275);
  }

  SUBCASE("frozen counts for the 1003-bit setup") {
    const auto map =
        realize(DegreeProfile::parse("2:0.888,8:0.06,9:0.052"), 1003);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 2) == 891);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 8) == 60);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 9) == 52);
    CHECK(map.repeated_length() == 2730);
  }

  SUBCASE("remainder tie favors the larger degree") {
    const auto map = realize(DegreeProfile{{2, 0.5}, {4, 0.5}}, 5);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 2) == 2);
    CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 4) == 3);
  }

  SUBCASE("ascending degrees from position zero") {
    const auto map = realize(DegreeProfile::parse("7:0.15,2:0.85"), 20);
    CHECK(map.degree_of.front() == 2);
    CHECK(map.degree_of.back() == 7);
    CHECK(std::is_sorted(map.degree_of.begin(), map.degree_of.end()));
  }

  SUBCASE("matches the reference apportionment on random profiles") {
    RngStream rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
      const double f = 0.05 + 0.9 * rng.next_unit();
      const int d2 = 3 + static_cast<int>(rng.next_below(8));
      DegreeProfile profile{{2, f}, {d2, 1.0 - f}};
      const Index k = 2 + static_cast<Index>(rng.next_below(5000));
      const auto map = realize(profile, k);
      const auto ref = oracle::apportion({{2, f}, {d2, 1.0 - f}}, k);
      CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), 2) ==
            ref[0]);
      CHECK(std::count(map.degree_of.begin(), map.degree_of.end(), d2) ==
            ref[1]);
      CHECK(std::abs(static_cast<double>(ref[0]) - f * k) < 1.0);
    }
  }

  SUBCASE("layout lists contiguous copies in source order") {
    const auto map = realize(DegreeProfile{{2, 0.5}, {3, 0.5}}, 4);
    Index pos = 0;
    for (Index j = 0; j < map.source_count; ++j) {
      CHECK(map.group_start[static_cast<std::size_t>(j)] == pos);
      for (int c = 0; c < map.degree_of[static_cast<std::size_t>(j)]; ++c) {
        CHECK(map.layout[static_cast<std::size_t>(pos)].source == j);
        CHECK(map.layout[static_cast<std::size_t>(pos)].copy == c);
        ++pos;
      }
    }
    CHECK(pos == map.repeated_length());
  }

  CHECK_THROWS_AS(realize(DegreeProfile{{2, 0.5}, {3, 0.5}}, 1),
                  std::invalid_argument);
}

TEST_CASE("repeat bits") {
  const auto map2 = realize(DegreeProfile{{2, 1.0}}, 2);
  BitVec bits(2);
  bits << 1, 0;
  BitVec rep = repeat_bits(bits, map2);
  REQUIRE(rep.size() == 4);
  CHECK(rep[0] == 1);
  CHECK(rep[1] == 1);
  CHECK(rep[2] == 0);
  CHECK(rep[3] == 0);

  SUBCASE("hand-built map with degrees (3,2)") {
    RepetitionMap map;
    map.source_count = 2;
    map.degree_of = {3, 2};
    map.group_start = {0, 3};
    map.layout = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}};
    BitVec out = repeat_bits(bits, map);
    REQUIRE(out.size() == 5);
    CHECK(out[0] == 1);
    CHECK(out[1] == 1);
    CHECK(out[2] == 1);
    CHECK(out[3] == 0);
    CHECK(out[4] == 0);
  }

  SUBCASE("all zero stays all zero") {
    const auto map = realize(DegreeProfile::parse("2:0.85,7:0.15"), 40);
    BitVec z = BitVec::Zero(40);
    CHECK((repeat_bits(z, map) == 0).all());
  }

  BitVec wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(repeat_bits(wrong, map2), std::invalid_argument);
}

TEST_CASE("puncture and depuncture") {
  LlrVec stream(4);
  stream << 10, 20, 30, 40;

  SUBCASE("pattern 1 is the identity") {
    const auto out = puncture(stream, PuncturePattern::parse("1"));
    CHECK(out.size() == 4);
    CHECK((out == stream).all());
  }

  SUBCASE("pattern 10 halves the stream") {
    const auto out = puncture(stream, PuncturePattern::parse("10"));
    REQUIRE(out.size() == 2);
    CHECK(out[0] == 10);
    CHECK(out[1] == 30);
  }

  SUBCASE("the 11-bit mask deletes three positions per period") {
    LlrVec eleven(11);
    for (Index i = 0; i < 11; ++i) eleven[i] = static_cast<double>(i);
    const auto out = puncture(eleven, PuncturePattern::parse("11101101110"));
    REQUIRE(out.size() == 8);
    const double expect[] = {0, 1, 2, 4, 5, 7, 8, 9};
    for (Index i = 0; i < 8; ++i) CHECK(out[i] == expect[i]);
  }

  SUBCASE("depuncture inserts zero erasures") {
    LlrVec kept(2);
    kept << 3.5, -1.25;
    const auto full = depuncture(kept, PuncturePattern::parse("10"), 4);
    REQUIRE(full.size() == 4);
    CHECK(full[0] == 3.5);
    CHECK(full[1] == 0.0);
    CHECK(full[2] == -1.25);
    CHECK(full[3] == 0.0);
    CHECK_THROWS_AS(depuncture(kept, PuncturePattern::parse("10"), 10),
                    std::invalid_argument);
  }

  SUBCASE("roundtrip over random masks") {
    RngStream rng(7);
    for (int trial = 0; trial < 60; ++trial) {
      const Index period = 1 + static_cast<Index>(rng.next_below(12));
      std::vector<std::uint8_t> mask(static_cast<std::size_t>(period));
      bool any = false;
      for (auto& m : mask) {
        m = static_cast<std::uint8_t>(rng.next_bit());
        any = any || m;
      }
      if (!any) mask[0] = 1;
      const PuncturePattern pattern(mask);
      const Index n = 1 + static_cast<Index>(rng.next_below(200));
      LlrVec full(n);
      for (Index i = 0; i < n; ++i) full[i] = rng.next_gaussian();
      const LlrVec kept = puncture(full, pattern);
      CHECK(kept.size() ==
            oracle::mask_keep_count(pattern.to_literal(), n));
      const LlrVec restored = depuncture(kept, pattern, n);
      const LlrVec kept_again = puncture(restored, pattern);
      REQUIRE(kept_again.size() == kept.size());
      for (Index i = 0; i < kept.size(); ++i) CHECK(kept_again[i] == kept[i]);
      for (Index i = 0; i < n; ++i) {
        if (!pattern.keeps(i)) CHECK(restored[i] == 0.0);
      }
    }
  }
}
