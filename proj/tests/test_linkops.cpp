#include <doctest.h>

#include <numbers>

#include "cpdsss/capacity.hpp"
#include "cpdsss/error.hpp"
#include "cpdsss/linkops.hpp"
#include "cpdsss/oracle/dense.hpp"
#include "test_util.hpp"

using namespace cpdsss;

namespace {

ChannelGrid flat_grid(std::size_t k, std::size_t m, std::size_t n) {
  ChannelSet set(k, m);
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t a = 0; a < m; ++a) set.at(u, a) = CVec{1.0};
  return ChannelGrid::from_set(set, n);
}

std::vector<SymbolFrame> frames_for(std::size_t k, const ExpanderSpec& e, Rng& rng,
                                    SymbolSource src = SymbolSource::Qpsk) {
  std::vector<SymbolFrame> out;
  for (std::size_t u = 0; u < k; ++u) out.push_back(draw_symbol_frame(u, e, src, rng));
  return out;
}

double total_power(const std::vector<CVec>& xs) {
  double p = 0.0;
  for (const auto& x : xs) p += std::pow(test::norm2(x), 2);
  return p;
}

// UL SINR of user 0 over `frames` frames at the given noise level.
double ul_sinr(const ChannelGrid& grid, const ExpanderSpec& e, double noise_var, int frames, std::uint64_t seed) {
  Rng rng(seed, Stream::Test, {});
  std::vector<DetectionResult> results;
  for (int f = 0; f < frames; ++f) {
    const auto fr = frames_for(grid.users(), e, rng);
    const auto rx = ul_channel_output(grid, fr, e, noise_var, rng);
    results.push_back({0, ul_mf_detect(rx, grid, 0, e), fr[0].symbols});
  }
  return measure_sinr(results, e.l).rho;
}

}  // namespace

TEST_CASE("draw_symbol_frame scales by sqrt(l)") {
  Rng rng(1, Stream::Test, {});
  const ExpanderSpec e(1024, 4);
  const auto q = draw_symbol_frame(3, e, SymbolSource::Qpsk, rng);
  CHECK(q.user == 3);
  REQUIRE(q.symbols.size() == 256);
  for (auto s : q.symbols) CHECK(std::norm(s) == doctest::Approx(4.0));
  const auto g = draw_symbol_frame(0, ExpanderSpec(65536, 4), SymbolSource::Gaussian, rng);
  CHECK(std::pow(test::norm2(g.symbols), 2) / g.symbols.size() == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("flat channels pass symbols through unchanged") {
  Rng rng(2, Stream::Test, {});
  for (std::size_t l : {1u, 2u, 8u}) {
    const ExpanderSpec e(256, l);
    const auto grid = flat_grid(1, 3, 256);
    const auto fr = frames_for(1, e, rng);
    CHECK(test::max_abs_diff(ul_mf_detect(ul_channel_output(grid, fr, e, 0.0, rng), grid, 0, e), fr[0].symbols) < 1e-12);
    const auto tx = dl_precode_transmit(grid, fr, e);
    CHECK(test::max_abs_diff(dl_receive_detect(grid, 0, tx, 0.0, dl_receiver_gain(grid, 0), rng, e), fr[0].symbols) <
          1e-12);
  }
}

TEST_CASE("UL channel output and MF match dense matrices") {
  const std::size_t n = 128, k = 2, m = 2, l = 2;
  const ExpanderSpec e(n, l);
  const auto set = draw_channel_set(k, m, ChannelProfile{40, 10.0, true}, 8, 0);
  const auto grid = ChannelGrid::from_set(set, n);
  Rng rng(3, Stream::Test, {});
  const auto fr = frames_for(k, e, rng, SymbolSource::Gaussian);
  const auto rx = ul_channel_output(grid, fr, e, 0.0, rng);

  const auto E = oracle::expander(n, l);
  for (std::size_t a = 0; a < m; ++a) {
    oracle::Vector want = oracle::Vector::Zero(n);
    for (std::size_t u = 0; u < k; ++u) want += oracle::circulant(set.at(u, a), n) * E * oracle::to_eigen(fr[u].symbols);
    CHECK(oracle::rel_error(rx[a], oracle::from_eigen(want)) < 1e-10);
  }
  for (std::size_t u = 0; u < k; ++u) {
    oracle::Vector acc = oracle::Vector::Zero(n);
    for (std::size_t a = 0; a < m; ++a) {
      const double energy = std::pow(test::norm2(set.at(u, a)), 2);
      acc += oracle::circulant(set.at(u, a), n).adjoint() * oracle::to_eigen(rx[a]) / (energy * m);
    }
    const oracle::Vector want = E.adjoint() * acc;
    CHECK(oracle::rel_error(ul_mf_detect(rx, grid, u, e), oracle::from_eigen(want)) < 1e-10);
    CHECK(oracle::rel_error(ul_mf_detect_all(rx, grid, e)[u], oracle::from_eigen(want)) < 1e-10);
  }
}

TEST_CASE("DL precoding and detection match dense matrices") {
  const std::size_t n = 64, k = 2, m = 3, l = 1;
  const ExpanderSpec e(n, l);
  const auto set = draw_channel_set(k, m, ChannelProfile{30, 10.0, true}, 9, 0);
  const auto grid = ChannelGrid::from_set(set, n);
  Rng rng(4, Stream::Test, {});
  const auto fr = frames_for(k, e, rng, SymbolSource::Gaussian);
  const auto tx = dl_precode_transmit(grid, fr, e);
  for (std::size_t a = 0; a < m; ++a) {
    oracle::Vector want = oracle::Vector::Zero(n);
    for (std::size_t u = 0; u < k; ++u)
      want += oracle::circulant(set.at(u, a), n).adjoint() * oracle::to_eigen(fr[u].symbols) / std::sqrt(3.0);
    CHECK(oracle::rel_error(tx[a], oracle::from_eigen(want)) < 1e-10);
  }
  const double gain = dl_receiver_gain(grid, 1);
  CHECK(gain == doctest::Approx(1.0));
  oracle::Vector y = oracle::Vector::Zero(n);
  for (std::size_t a = 0; a < m; ++a) y += oracle::circulant(set.at(1, a), n) * oracle::to_eigen(tx[a]);
  const CVec got = dl_receive_detect(grid, 1, tx, 0.0, gain, rng, e);
  CHECK(oracle::rel_error(got, oracle::from_eigen(y / (std::sqrt(3.0) * gain))) < 1e-10);

  std::vector<double> gains{dl_receiver_gain(grid, 0), gain};
  std::vector<Rng> rngs{Rng(1), Rng(2)};
  CHECK(oracle::rel_error(dl_receive_detect_all(grid, tx, 0.0, gains, rngs, e)[1], got) < 1e-12);
}

TEST_CASE("antenna averaging divides the noise by M") {
  const std::size_t n = 2048;
  const ExpanderSpec e(n, 1);
  const double sigma2 = 0.8;
  auto error_power = [&](std::size_t m) {
    const auto grid = flat_grid(1, m, n);
    return 1.0 / ul_sinr(grid, e, sigma2, 20, 5);
  };
  CHECK(error_power(1) == doctest::Approx(sigma2).epsilon(0.03));
  CHECK(error_power(8) == doctest::Approx(sigma2 / 8).epsilon(0.03));
}

TEST_CASE("DL transmit power does not grow with M and scales with K") {
  const std::size_t n = 2048;
  const ExpanderSpec e(n, 1);
  auto mean_power = [&](std::size_t k, std::size_t m) {
    double p = 0.0;
    const int draws = 10;
    for (int t = 0; t < draws; ++t) {
      const auto grid = ChannelGrid::from_set(draw_channel_set(k, m, ChannelProfile{}, 6, t), n);
      Rng rng(7, Stream::Test, {static_cast<std::uint64_t>(t)});
      p += total_power(dl_precode_transmit(grid, frames_for(k, e, rng), e)) / n / draws;
    }
    return p;
  };
  const double p1 = mean_power(1, 1);
  CHECK(p1 == doctest::Approx(1.0).epsilon(0.1));
  CHECK(mean_power(1, 8) == doctest::Approx(p1).epsilon(0.1));
  CHECK(mean_power(1, 32) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(mean_power(4, 8) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("single-user UL and DL are identical under perfect CSI") {
  const std::size_t n = 512;
  const ExpanderSpec e(n, 2);
  const auto grid = ChannelGrid::from_set(draw_channel_set(1, 4, ChannelProfile{}, 10, 0), n);
  Rng rng(8, Stream::Test, {});
  const auto fr = frames_for(1, e, rng);
  const CVec ul = ul_mf_detect(ul_channel_output(grid, fr, e, 0.0, rng), grid, 0, e);
  const CVec dl = dl_receive_detect(grid, 0, dl_precode_transmit(grid, fr, e), 0.0, dl_receiver_gain(grid, 0), rng, e);
  CHECK(oracle::rel_error(dl, ul) < 1e-10);
}

TEST_CASE("noise-limited SINR grows linearly with M") {
  const std::size_t n = 2048;
  const ExpanderSpec e(n, 1);
  const double sigma2 = std::pow(10.0, 2.0);  // -20 dB
  const auto g1 = ChannelGrid::from_set(draw_channel_set(1, 1, ChannelProfile{}, 11, 0), n);
  const auto g4 = ChannelGrid::from_set(draw_channel_set(1, 4, ChannelProfile{}, 11, 0), n);
  const double r1 = ul_sinr(g1, e, sigma2, 10, 12);
  const double r4 = ul_sinr(g4, e, sigma2, 10, 12);
  CHECK(r1 == doctest::Approx(0.01).epsilon(0.05));
  CHECK(r4 / r1 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("MF output has unit gain on the desired symbol") {
  const std::size_t n = 2048;
  const ExpanderSpec e(n, 1);
  const auto grid = ChannelGrid::from_set(draw_channel_set(1, 1, ChannelProfile{}, 13, 0), n);
  Rng rng(14, Stream::Test, {});
  const auto fr = frames_for(1, e, rng);
  const CVec s_hat = ul_mf_detect(ul_channel_output(grid, fr, e, 0.0, rng), grid, 0, e);
  const cplx coef = test::inner(fr[0].symbols, s_hat) / std::pow(test::norm2(fr[0].symbols), 2);
  CHECK(std::abs(coef - 1.0) < 0.05);
}

TEST_CASE("detection is phase equivariant") {
  const std::size_t n = 256;
  const ExpanderSpec e(n, 4);
  const auto grid = ChannelGrid::from_set(draw_channel_set(2, 2, ChannelProfile{64, 25.0, true}, 15, 0), n);
  Rng rng(16, Stream::Test, {});
  auto fr = frames_for(2, e, rng);
  const CVec base = ul_mf_detect(ul_channel_output(grid, fr, e, 0.0, rng), grid, 1, e);
  const cplx rot = std::polar(1.0, 0.7);
  for (auto& f : fr)
    for (auto& s : f.symbols) s *= rot;
  CVec want = base;
  for (auto& v : want) v *= rot;
  CHECK(oracle::rel_error(ul_mf_detect(ul_channel_output(grid, fr, e, 0.0, rng), grid, 1, e), want) < 1e-12);
}

TEST_CASE("full spreading (l = n) with one user is error-free") {
  const std::size_t n = 1024;
  const ExpanderSpec e(n, n);
  const auto grid = ChannelGrid::from_set(draw_channel_set(1, 2, ChannelProfile{}, 17, 0), n);
  Rng rng(18, Stream::Test, {});
  const auto fr = frames_for(1, e, rng);
  const CVec ul = ul_mf_detect(ul_channel_output(grid, fr, e, 0.0, rng), grid, 0, e);
  REQUIRE(ul.size() == 1);
  CHECK(std::abs(ul[0] - fr[0].symbols[0]) < 1e-10);
  const CVec dl = dl_receive_detect(grid, 0, dl_precode_transmit(grid, fr, e), 0.0, 1.0, rng, e);
  CHECK(std::abs(dl[0] - fr[0].symbols[0]) < 1e-10);
}

TEST_CASE("link operations reject mismatched inputs") {
  const ExpanderSpec e(64, 1);
  const auto grid = flat_grid(2, 2, 64);
  Rng rng(0);
  auto fr = frames_for(2, e, rng);
  CHECK_THROWS_AS(ul_channel_output(grid, std::span(fr).first(1), e, 0.0, rng), Error);
  CHECK_THROWS_AS(ul_channel_output(grid, fr, ExpanderSpec(128, 2), 0.0, rng), Error);
  const auto rx = ul_channel_output(grid, fr, e, 0.0, rng);
  CHECK_THROWS_AS(ul_mf_detect(std::span(rx).first(1), grid, 0, e), Error);
  CHECK_THROWS_AS(ul_mf_detect(rx, grid, 2, e), Error);
  CHECK_THROWS_AS(dl_receive_detect(grid, 0, rx, 0.0, 0.0, rng, e), Error);

  LinkScenario sc;
  CHECK_NOTHROW(sc.validate());
  CHECK(sc.noise_var() == doctest::Approx(100.0));
  sc.l_h = 200;
  CHECK_THROWS_AS(sc.validate(), Error);
  sc = LinkScenario{};
  sc.k = 3;
  CHECK_THROWS_AS(sc.validate(), Error);
}
