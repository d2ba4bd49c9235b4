#include <doctest.h>

#include <sstream>

#include "cpdsss/channel.hpp"
#include "cpdsss/error.hpp"
#include "test_util.hpp"

using namespace cpdsss;

TEST_CASE("tap_powers follows exp(-l/tau) and sums to one") {
  const ChannelProfile p;
  const auto w = p.tap_powers();
  REQUIRE(w.size() == 130);
  double sum = 0.0;
  for (double v : w) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.front() / w.back() == doctest::Approx(std::exp(129.0 / 25.0)).epsilon(1e-10));
  CHECK(w[1] / w[0] == doctest::Approx(std::exp(-1.0 / 25.0)));

  CHECK_THROWS_AS((ChannelProfile{0, 25.0, true}.validate()), Error);
  CHECK_THROWS_AS((ChannelProfile{130, 0.0, true}.validate()), Error);
  CHECK_THROWS_AS((ChannelProfile{130, -1.0, true}.validate()), Error);
}

TEST_CASE("draw_impulse statistics over 1e4 draws") {
  const ChannelProfile p;
  const auto want = p.tap_powers();
  const int draws = 10000;
  std::vector<double> power(p.l_h, 0.0);
  Rng rng(7, Stream::Test, {});
  for (int d = 0; d < draws; ++d) {
    const CVec h = draw_impulse(p, rng);
    REQUIRE(h.size() == p.l_h);
    CHECK(test::norm2(h) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t l = 0; l < p.l_h; ++l) power[l] += std::norm(h[l]) / draws;
  }
  // exp(129/25) = 174.16
  CHECK(power.front() / power.back() == doctest::Approx(174.16).epsilon(0.10));
  // The first few taps carry enough power to be tight per tap.
  for (std::size_t l = 0; l < 10; ++l) CHECK(power[l] == doctest::Approx(want[l]).epsilon(0.06));

  ChannelProfile raw = p;
  raw.normalize = false;
  double mean_energy = 0.0;
  for (int d = 0; d < 2000; ++d) mean_energy += std::pow(test::norm2(draw_impulse(raw, rng)), 2) / 2000;
  CHECK(mean_energy == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("draw_channel_set is deterministic and keyed per pair") {
  const ChannelProfile p;
  const auto a = draw_channel_set(4, 3, p, 42, 0);
  const auto b = draw_channel_set(4, 3, p, 42, 0);
  CHECK(a == b);
  CHECK_FALSE(a == draw_channel_set(4, 3, p, 42, 1));
  CHECK_FALSE(a == draw_channel_set(4, 3, p, 43, 0));

  // a pair's taps do not depend on the grid size
  const auto big = draw_channel_set(8, 5, p, 42, 0);
  CHECK(big.at(2, 1) == a.at(2, 1));
  CHECK(big.at(3, 2) == a.at(3, 2));
  CHECK_THROWS_AS(a.at(4, 0), Error);
  CHECK_THROWS_AS(a.at(0, 3), Error);
}

TEST_CASE("independent users are nearly orthogonal") {
  // Oracle: 2e5-draw Monte Carlo gives E|h1^H h2| = 0.1256 for this profile.
  const ChannelProfile p;
  const int pairs = 2000;
  double mean = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const auto set = draw_channel_set(2, 1, p, 9, static_cast<std::uint64_t>(t));
    mean += std::abs(test::inner(set.at(0, 0), set.at(1, 0))) / pairs;
  }
  CHECK(mean == doctest::Approx(0.1256).epsilon(0.10));
  CHECK(mean < 0.2);
}

TEST_CASE("ChannelGrid") {
  const auto set = draw_channel_set(2, 3, ChannelProfile{}, 1, 0);
  const auto grid = ChannelGrid::from_set(set, 256);
  CHECK(grid.users() == 2);
  CHECK(grid.antennas() == 3);
  CHECK(grid.size() == 256);
  CHECK(grid.at(1, 2).energy() == doctest::Approx(1.0));
  CHECK(grid.user(1).size() == 3);
  CHECK(&grid.user(1)[2] == &grid.at(1, 2));
  CHECK_THROWS_AS(grid.at(2, 0), Error);
  CHECK_THROWS_AS(ChannelGrid::from_set(set, 64), Error);
}

TEST_CASE("channel CSV round-trips exactly") {
  const ChannelProfile p{12, 4.0, true};
  std::stringstream ss;
  write_channel_csv_header(ss);
  const auto t0 = draw_channel_set(2, 2, p, 5, 0);
  const auto t3 = draw_channel_set(2, 2, p, 5, 3);
  write_channel_csv_rows(ss, 0, t0);
  write_channel_csv_rows(ss, 3, t3);

  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  CHECK(header == "trial,user,antenna,tap_index,re,im");

  const auto back = read_channel_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back.at(0) == t0);
  CHECK(back.at(3) == t3);

  std::stringstream bad("trial,user,antenna,tap_index,re,im\n0,0,0,0,abc,1\n");
  CHECK_THROWS_AS(read_channel_csv(bad), Error);
}
