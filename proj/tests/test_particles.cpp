#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "smtt/dictionary.hpp"
#include "smtt/errors.hpp"
#include "smtt/graph.hpp"
#include "smtt/particles.hpp"
#include "smtt/synth.hpp"

using namespace smtt;

namespace {

Image blob_frame(const TargetBox& box) {
  ScenarioSpec spec;
  spec.frame_w = 96;
  spec.frame_h = 80;
  spec.target = box;
  return render_clean(spec, box, std::nullopt);
}

ParticleSet with_weights(std::vector<double> w) {
  ParticleSet set;
  for (std::size_t i = 0; i < w.size(); ++i) {
    set.boxes.push_back({10.0 + static_cast<double>(i), 20.0, 8.0, 6.0});
  }
  set.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return set;
}

}  // namespace

TEST_CASE("sample: zero noise repeats the state") {
  std::mt19937_64 rng(1);
  const TargetBox state{40.0, 30.0, 12.0, 9.0};
  const auto set = sample(state, MotionNoise{0.0, 0.0, 0.0}, 25, rng);
  REQUIRE(set.size() == 25);
  for (const auto& b : set.boxes) CHECK(b == state);
  CHECK(set.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(set.weights.minCoeff() == set.weights.maxCoeff());
}

TEST_CASE("sample: particle 0 is unperturbed, aspect ratio is kept") {
  std::mt19937_64 rng(2);
  const TargetBox state{40.0, 30.0, 12.0, 9.0};
  const auto set = sample(state, MotionNoise{}, 50, rng);
  CHECK(set.boxes[0] == state);
  for (const auto& b : set.boxes) CHECK(b.w / b.h == doctest::Approx(12.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("sample: same seed, same particles") {
  std::mt19937_64 a(77);
  std::mt19937_64 b(77);
  const TargetBox state{40.0, 30.0, 12.0, 9.0};
  const auto s1 = sample(state, MotionNoise{}, 40, a);
  const auto s2 = sample(state, MotionNoise{}, 40, b);
  CHECK(s1.boxes == s2.boxes);
}

TEST_CASE("sample: offset statistics") {
  std::mt19937_64 rng(3);
  const TargetBox state{40.0, 30.0, 12.0, 9.0};
  const int n = 10000;
  const auto set = sample(state, MotionNoise{4.0, 2.0, 0.05}, n, rng);
  double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0, ss = 0.0, sss = 0.0;
  for (int i = 1; i < n; ++i) {
    const auto& b = set.boxes[static_cast<std::size_t>(i)];
    const double dx = b.cx - state.cx;
    const double dy = b.cy - state.cy;
    const double ds = std::log(b.w / state.w);
    sx += dx; sxx += dx * dx;
    sy += dy; syy += dy * dy;
    ss += ds; sss += ds * ds;
  }
  const double m = n - 1;
  auto stddev = [m](double s, double s2) { return std::sqrt(s2 / m - (s / m) * (s / m)); };
  CHECK(std::abs(stddev(sx, sxx) - 4.0) < 0.05 * 4.0);
  CHECK(std::abs(stddev(sy, syy) - 2.0) < 0.05 * 2.0);
  CHECK(std::abs(stddev(ss, sss) - 0.05) < 0.05 * 0.05);
}

TEST_CASE("sample: errors") {
  std::mt19937_64 rng(4);
  CHECK_THROWS_AS(sample({10, 10, 4, 4}, MotionNoise{}, 0, rng), ParameterError);
  CHECK_THROWS_AS(sample({10, 10, 4, 4}, MotionNoise{-1.0, 1.0, 0.0}, 5, rng), ParameterError);
}

TEST_CASE("observe: particle on a template location reproduces the template") {
  const TargetBox box{48.0, 40.0, 20.0, 16.0};
  const Image frame = blob_frame(box);
  std::mt19937_64 rng(5);
  DictionaryConfig cfg;
  cfg.templates = 3;
  cfg.jitter_px = 0.0;
  const auto dict = init_from_frame(frame, box, cfg, rng);
  ParticleSet set;
  set.boxes = {box, {30.0, 30.0, 20.0, 16.0}};
  set.weights = Eigen::VectorXd::Constant(2, 0.5);
  const auto obs = observe(frame, set, cfg.patch_h, cfg.patch_w);
  CHECK((obs.x.col(0) - dict.templates().col(0)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(obs.degenerate == std::vector<bool>{false, false});
}

TEST_CASE("observe: constant frame gives equal unit columns") {
  const Image frame(40, 30, 0.6);
  std::mt19937_64 rng(6);
  const auto set = sample({20.0, 15.0, 10.0, 8.0}, MotionNoise{3.0, 3.0, 0.05}, 20, rng);
  const auto obs = observe(frame, set, 8, 8);
  for (Eigen::Index i = 0; i < obs.x.cols(); ++i) {
    CHECK((obs.x.col(i) - obs.x.col(0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(obs.x.col(i).norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("observe: boxes off the frame are degenerate zero columns") {
  const Image frame(40, 30, 0.6);
  ParticleSet set;
  set.boxes = {{20.0, 15.0, 10.0, 8.0}, {-30.0, 15.0, 10.0, 8.0}, {38.0, 28.0, 10.0, 8.0}};
  set.weights = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  const auto obs = observe(frame, set, 4, 4);
  CHECK(obs.degenerate == std::vector<bool>{false, true, false});
  CHECK(obs.x.col(1).norm() == 0.0);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double norm = obs.x.col(i).norm();
    CHECK((norm == 0.0 || std::abs(norm - 1.0) < 1e-9));
  }
  Image black(40, 30, 0.0);
  CHECK(observe(black, set, 4, 4).x.col(0).norm() == 0.0);
}

TEST_CASE("likelihoods: exact reconstruction dominates") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(4, 2);
  const TemplateDictionary dict(t, 2, 2, 5);
  ObservationMatrix obs;
  obs.x.resize(4, 3);
  obs.x << 1, 0, 0.5,
           0, 0, 0.5,
           0, 1, 0.5,
           0, 0, 0.5;
  obs.degenerate = {false, false, false};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 3);
  c(0, 0) = 1.0;  // column 0 reconstructed exactly
  const auto w = likelihoods(obs, dict, CoefficientMatrix(c, 2), 200.0);
  CHECK(w(0) > 0.999);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("likelihoods: identical particles are equally likely") {
  const TemplateDictionary dict(Eigen::MatrixXd::Identity(4, 2), 2, 2, 5);
  ObservationMatrix obs;
  obs.x = Eigen::MatrixXd::Constant(4, 5, 0.5);
  obs.degenerate.assign(5, false);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 5);
  c.topRows(2).setConstant(0.3);
  const auto w = likelihoods(obs, dict, CoefficientMatrix(c, 2), 20.0);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(w(i) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("likelihoods: ranking follows the appearance residual, ignoring E") {
  std::mt19937_64 rng(8);
  const TemplateDictionary dict(oracle::unit_columns(oracle::random_matrix(rng, 9, 3, 0.0, 1.0)), 3, 3, 5);
  ObservationMatrix obs;
  obs.x = oracle::unit_columns(oracle::random_matrix(rng, 9, 12, 0.0, 1.0));
  obs.degenerate.assign(12, false);
  const Eigen::MatrixXd c = oracle::random_matrix(rng, 12, 12, -0.5, 0.5);
  const auto w = likelihoods(obs, dict, CoefficientMatrix(c, 3), 5.0);
  std::vector<double> residual(12);
  for (int j = 0; j < 12; ++j) {
    double r = 0.0;
    for (int i = 0; i < 9; ++i) {
      double fit = 0.0;
      for (int k = 0; k < 3; ++k) fit += dict.templates()(i, k) * c(k, j);
      r += (obs.x(i, j) - fit) * (obs.x(i, j) - fit);
    }
    residual[static_cast<std::size_t>(j)] = r;
  }
  for (int a = 0; a < 12; ++a) {
    for (int b = 0; b < 12; ++b) {
      if (residual[static_cast<std::size_t>(a)] < residual[static_cast<std::size_t>(b)]) CHECK(w(a) > w(b));
    }
  }
  CHECK((w.array() >= 0.0).all());
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("likelihoods: degenerate particles get zero, all-degenerate falls back to uniform") {
  const TemplateDictionary dict(Eigen::MatrixXd::Identity(4, 2), 2, 2, 5);
  ObservationMatrix obs;
  obs.x = Eigen::MatrixXd::Constant(4, 3, 0.5);
  obs.x.col(1).setZero();
  obs.degenerate = {false, true, false};
  const CoefficientMatrix c(Eigen::MatrixXd::Zero(6, 3), 2);
  const auto w = likelihoods(obs, dict, c, 20.0);
  CHECK(w(1) == 0.0);
  CHECK(w(0) == doctest::Approx(0.5));
  obs.degenerate = {true, true, true};
  const auto uniform = likelihoods(obs, dict, c, 20.0);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(uniform(i) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("likelihoods: huge alpha does not underflow the best particle") {
  const TemplateDictionary dict(Eigen::MatrixXd::Identity(4, 2), 2, 2, 5);
  ObservationMatrix obs;
  obs.x = Eigen::MatrixXd::Constant(4, 2, 0.5);
  obs.degenerate = {false, false};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 2);
  c(0, 1) = 0.5;
  const auto w = likelihoods(obs, dict, CoefficientMatrix(c, 2), 1e6);
  CHECK(w(1) == 1.0);
  CHECK(w(0) == 0.0);
}

TEST_CASE("estimate: argmax with lowest-index ties") {
  const auto set = with_weights({0.1, 0.7, 0.2});
  CHECK(map_index(set) == 1);
  CHECK(estimate(set) == set.boxes[1]);
  const auto tied = with_weights({0.25, 0.25, 0.25, 0.25});
  CHECK(map_index(tied) == 0);
  const auto late_tie = with_weights({0.1, 0.45, 0.45});
  CHECK(map_index(late_tie) == 1);
}

TEST_CASE("estimate: argmax is invariant to alpha") {
  std::mt19937_64 rng(12);
  const TemplateDictionary dict(oracle::unit_columns(oracle::random_matrix(rng, 9, 3, 0.0, 1.0)), 3, 3, 5);
  ObservationMatrix obs;
  obs.x = oracle::unit_columns(oracle::random_matrix(rng, 9, 30, 0.0, 1.0));
  obs.degenerate.assign(30, false);
  const CoefficientMatrix c(oracle::random_matrix(rng, 12, 30, -0.5, 0.5), 3);
  ParticleSet set = with_weights(std::vector<double>(30, 1.0 / 30.0));
  set.weights = likelihoods(obs, dict, c, 1.0);
  const Eigen::Index reference = map_index(set);
  for (double alpha : {0.01, 5.0, 100.0, 1000.0}) {
    set.weights = likelihoods(obs, dict, c, alpha);
    CHECK(map_index(set) == reference);
  }
}

TEST_CASE("estimate: planted target is found within a pixel") {
  const TargetBox planted{48.0, 40.0, 20.0, 16.0};
  const Image frame = blob_frame(planted);
  std::mt19937_64 rng(13);
  DictionaryConfig cfg;
  const auto dict = init_from_frame(frame, planted, cfg, rng);
  const TargetBox guess{50.0, 38.5, 20.0, 16.0};
  ParticleSet set = sample(guess, MotionNoise{2.0, 2.0, 0.0}, 300, rng);
  const auto obs = observe(frame, set, cfg.patch_h, cfg.patch_w);
  const auto l = laplacian(build_similarity(obs.x, median_bandwidth(obs.x)));
  const auto solved = apg_solve(obs.x, design_matrix(dict), l, SolverConfig{});
  set.weights = likelihoods(obs, dict, solved.coefficients, 20.0);
  const TargetBox best = estimate(set);
  CHECK(std::hypot(best.cx - planted.cx, best.cy - planted.cy) <= 1.0);
}
