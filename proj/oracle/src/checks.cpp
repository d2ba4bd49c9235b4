#include "cpdsss/oracle/checks.hpp"

#include <cmath>
#include <numeric>

#include "cpdsss/capacity.hpp"
#include "cpdsss/circulant.hpp"
#include "cpdsss/linkops.hpp"
#include "cpdsss/oracle/dense.hpp"
#include "cpdsss/rng.hpp"
#include "cpdsss/zc_spread.hpp"

namespace cpdsss::oracle {
namespace {

CVec random_vector(std::size_t n, Rng& rng) {
  CVec v(n);
  for (auto& x : v) x = rng.complex_gaussian(1.0);
  return v;
}

std::string label(const char* what, std::size_t n) { return std::string(what) + " n=" + std::to_string(n); }

// Noiseless UL/DL chains with K = 2, M = 2 and estimates that differ from the
// true channels (un-normalized, so the 1/||h_hat||^2 scaling matters).
void chain_checks(std::size_t n, std::size_t l, double tol, Rng& rng, std::vector<CheckResult>& out) {
  const std::size_t k = 2, m = 2;
  const std::size_t taps = std::max<std::size_t>(1, n / 4);
  const ExpanderSpec e(n, l);
  const Matrix E = expander(n, l);

  std::vector<CirculantOperator> truth_ops, est_ops;
  std::vector<Matrix> H, Hh;  // user-major
  for (std::size_t i = 0; i < k * m; ++i) {
    const CVec h = random_vector(taps, rng);
    CVec he = random_vector(taps, rng);
    for (std::size_t t = 0; t < taps; ++t) he[t] = 0.5 * he[t] + h[t];
    truth_ops.push_back(CirculantOperator::from_impulse(h, n));
    est_ops.push_back(CirculantOperator::from_impulse(he, n));
    H.push_back(circulant(h, n));
    Hh.push_back(circulant(he, n));
  }
  const ChannelGrid truth(k, m, truth_ops), est(k, m, est_ops);

  std::vector<SymbolFrame> frames;
  for (std::size_t u = 0; u < k; ++u) frames.push_back(SymbolFrame{u, random_vector(n / l, rng)});
  Rng unused(0);

  // Uplink, Eqs. 10f-10g.
  const auto received = ul_channel_output(truth, frames, e, 0.0, unused);
  double worst = 0.0;
  std::vector<Vector> y_dense(m);
  for (std::size_t a = 0; a < m; ++a) {
    Vector y = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < k; ++u) y += H[u * m + a] * E * to_eigen(frames[u].symbols);
    y_dense[a] = y;
    worst = std::max(worst, rel_error(received[a], from_eigen(y)));
  }
  out.push_back({label("ul channel output", n) + " l=" + std::to_string(l), worst, tol});

  const auto detected = ul_mf_detect_all(received, est, e);
  worst = 0.0;
  for (std::size_t u = 0; u < k; ++u) {
    Vector acc = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < m; ++a)
      acc += Hh[u * m + a].adjoint() * y_dense[a] / est_ops[u * m + a].energy();
    const Vector s_hat = E.adjoint() * acc / static_cast<double>(m);
    worst = std::max(worst, rel_error(detected[u], from_eigen(s_hat)));
  }
  out.push_back({label("ul mf detect", n) + " l=" + std::to_string(l), worst, tol});

  // Downlink, Eqs. 10h-10i.
  const auto transmit = dl_precode_transmit(est, frames, e);
  worst = 0.0;
  std::vector<Vector> x_dense(m);
  for (std::size_t a = 0; a < m; ++a) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < k; ++u) x += Hh[u * m + a].adjoint() * E * to_eigen(frames[u].symbols);
    x_dense[a] = x / std::sqrt(static_cast<double>(m));
    worst = std::max(worst, rel_error(transmit[a], from_eigen(x_dense[a])));
  }
  out.push_back({label("dl precode transmit", n) + " l=" + std::to_string(l), worst, tol});

  std::vector<double> gains(k);
  std::vector<Rng> rngs;
  for (std::size_t u = 0; u < k; ++u) {
    gains[u] = dl_receiver_gain(est, u);
    rngs.emplace_back(0);
  }
  const auto dl = dl_receive_detect_all(truth, transmit, 0.0, gains, rngs, e);
  worst = 0.0;
  for (std::size_t u = 0; u < k; ++u) {
    Vector y = Vector::Zero(static_cast<Eigen::Index>(n));
    double g = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      y += H[u * m + a] * x_dense[a];
      g += est_ops[u * m + a].energy();
    }
    g /= static_cast<double>(m);
    const Vector s_hat = E.adjoint() * y / (std::sqrt(static_cast<double>(m)) * g);
    worst = std::max(worst, rel_error(dl[u], from_eigen(s_hat)));
  }
  out.push_back({label("dl receive detect", n) + " l=" + std::to_string(l), worst, tol});
}

}  // namespace

std::vector<CheckResult> fft_oracle_checks(std::size_t n, double tol, std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed, Stream::Test, {n});

  const ZcSequence z = generate_zc(n, 1);
  const SpreadingOperator spreader(z);
  const Matrix Z = circulant(z.samples, n);
  const CVec s = random_vector(n, rng);
  out.push_back({label("spread", n), rel_error(spreader.spread(s), from_eigen(Z * to_eigen(s))), tol});
  out.push_back(
      {label("despread", n), rel_error(spreader.despread(s), from_eigen(Z.adjoint() * to_eigen(s))), tol});

  const CVec h = random_vector(std::max<std::size_t>(1, n / 4), rng);
  const CVec g = random_vector(n / 2, rng);
  const auto c = CirculantOperator::from_impulse(h, n);
  const auto d = CirculantOperator::from_impulse(g, n);
  const Matrix C = circulant(h, n), D = circulant(g, n);
  out.push_back({label("circulant matrix", n), max_rel_error(circulant(c.first_col(), n), C), tol});
  out.push_back({label("apply", n), rel_error(c.apply(s), from_eigen(C * to_eigen(s))), tol});
  out.push_back(
      {label("apply_hermitian", n), rel_error(c.apply_hermitian(s), from_eigen(C.adjoint() * to_eigen(s))), tol});
  out.push_back({label("compose", n), max_rel_error(circulant(compose(c, d).first_col(), n), C * D), tol});
  out.push_back({label("eq4 despread(H spread(s))", n),
                 rel_error(spreader.despread(c.apply(spreader.spread(s))), from_eigen(C * to_eigen(s))), tol});

  for (std::size_t l : {std::size_t{1}, std::size_t{2}}) chain_checks(n, l, tol, rng, out);
  return out;
}

std::vector<CheckResult> zc_checks(std::size_t n, std::int64_t root, std::size_t random_pairs,
                                   std::uint64_t seed) {
  const ZcSequence z = generate_zc(n, root);
  const double target = 1.0 / std::sqrt(static_cast<double>(n));
  double modulus = 0.0;
  for (const auto& v : z.samples) modulus = std::max(modulus, std::abs(std::abs(v) - target));

  auto inner = [&](std::size_t i, std::size_t j) {
    cplx acc{};
    for (std::size_t t = 0; t < n; ++t) acc += std::conj(z.samples[(t + n - i) % n]) * z.samples[(t + n - j) % n];
    return acc;
  };
  double gram = 0.0;
  if (random_pairs == 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        gram = std::max(gram, std::abs(inner(i, j) - (i == j ? 1.0 : 0.0)));
  } else {
    Rng rng(seed, Stream::Test, {n, static_cast<std::uint64_t>(root)});
    for (std::size_t p = 0; p < random_pairs; ++p) {
      const std::size_t i = rng.bits() % n;
      std::size_t j = rng.bits() % n;
      if (j == i) j = (j + 1) % n;
      gram = std::max(gram, std::abs(inner(i, j)));
      gram = std::max(gram, std::abs(inner(i, i) - 1.0));
    }
  }
  const std::string tag = " n=" + std::to_string(n) + " u=" + std::to_string(root);
  return {{"zc constant modulus" + tag, modulus, 1e-12}, {"zc shift gram" + tag, gram, 1e-10}};
}

std::vector<CheckResult> ideal_capacity_checks(std::size_t n, std::size_t m, std::size_t l, double snr,
                                               double tol, std::uint64_t seed) {
  Rng rng(seed, Stream::Test, {n, m, l});
  std::vector<CirculantOperator> ops;
  std::vector<Matrix> dense;
  for (std::size_t a = 0; a < m; ++a) {
    const CVec h = random_vector(std::max<std::size_t>(1, n / 4), rng);
    ops.push_back(CirculantOperator::from_impulse(h, n));
    dense.push_back(circulant(h, n));
  }
  const std::string tag = " n=" + std::to_string(n) + " m=" + std::to_string(m) + " l=" + std::to_string(l);
  std::vector<CheckResult> out;

  // Uplink: H = [H_1; ...; H_M], G = I.
  const double ul_fast = ideal_capacity(ops, {}, Stacking::Receive, l, snr);
  const double ul_dense = log_det_capacity(stack_vertical(dense), l, snr);
  out.push_back({"eq9 receive stack" + tag, std::abs(ul_fast - ul_dense) / std::abs(ul_dense), tol});

  // Downlink: H = [H_1 ... H_M], G = [G_1; ...; G_M] with TR precoders.
  const auto g = tr_precoder(ops);
  double energy = 0.0;
  for (const auto& d : dense) energy += d.col(0).squaredNorm();
  std::vector<Matrix> g_dense;
  for (const auto& d : dense) g_dense.push_back(d.adjoint() / std::sqrt(energy));
  const double dl_fast = ideal_capacity(ops, g, Stacking::Transmit, l, snr);
  const double dl_dense = log_det_capacity(stack_horizontal(dense) * stack_vertical(g_dense), l, snr);
  out.push_back({"eq9 transmit stack TR" + tag, std::abs(dl_fast - dl_dense) / std::abs(dl_dense), tol});
  return out;
}

std::vector<CheckResult> validation_suite() {
  std::vector<CheckResult> all;
  auto append = [&all](std::vector<CheckResult> more) { all.insert(all.end(), more.begin(), more.end()); };
  for (std::size_t n : {16, 64}) append(fft_oracle_checks(n, 1e-9));
  append(zc_checks(16, 1, 0));
  append(zc_checks(16, 3, 0));
  append(zc_checks(2048, 1, 100));
  for (std::size_t m : {1, 4})
    for (std::size_t l : {1, 2, 4}) append(ideal_capacity_checks(64, m, l, 0.5, 1e-8));
  return all;
}

}  // namespace cpdsss::oracle
