#include <cmath>

#include <doctest.h>

#include "scenarios.hpp"
#include "smtt/errors.hpp"
#include "smtt/synth.hpp"

using namespace smtt;

namespace {

ScenarioSpec small_static() {
  ScenarioSpec spec;
  spec.frame_w = 64;
  spec.frame_h = 48;
  spec.num_frames = 5;
  spec.target = {30.0, 24.0, 12.0, 10.0};
  return spec;
}

}  // namespace

TEST_CASE("static noise-free scene repeats the same frame") {
  const Scenario sc = generate(small_static());
  REQUIRE(sc.frames.size() == 5);
  for (const auto& f : sc.frames) CHECK(f == sc.frames.front());
  for (const auto& b : sc.truth) CHECK(b == sc.truth.front());
}

TEST_CASE("kinematics: 2 px per frame over 50 steps moves 100 px") {
  ScenarioSpec spec;
  spec.frame_w = 160;
  spec.frame_h = 40;
  spec.num_frames = 51;
  spec.target = {20.0, 20.0, 10.0, 10.0};
  spec.vx = 2.0;
  const auto truth = trajectory(spec);
  CHECK(truth.back().cx - truth.front().cx == 100.0);
  CHECK(truth.back().cy == truth.front().cy);
}

TEST_CASE("blob intensities and soft edges") {
  const ScenarioSpec spec = small_static();
  const Image img = render_clean(spec, spec.target, std::nullopt);
  CHECK(img.at(30, 24) == doctest::Approx(0.8));
  CHECK(img.at(2, 2) == doctest::Approx(0.2));
  // Box spans x in [24, 36]; the ramp runs from 23 to 25.
  CHECK(img.at(23, 24) == doctest::Approx(0.2 + 0.6 * 0.25));
  CHECK(img.at(24, 24) == doctest::Approx(0.2 + 0.6 * 0.75));
  for (double v : img.pixels()) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("noise statistics away from the clip bounds") {
  ScenarioSpec spec = small_static();
  spec.frame_w = 200;
  spec.frame_h = 200;
  spec.target = {100.0, 100.0, 20.0, 20.0};
  spec.target_intensity = 0.5;
  spec.background_intensity = 0.5;
  spec.noise_sigma = 0.05;
  spec.num_frames = 1;
  spec.seed = 3;
  const Scenario sc = generate(spec);
  const Image clean = render_clean(spec, sc.truth[0], std::nullopt);
  double s = 0.0, s2 = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < clean.pixels().size(); ++i) {
    const double d = sc.frames[0].pixels()[i] - clean.pixels()[i];
    s += d;
    s2 += d * d;
    ++n;
  }
  const double sd = std::sqrt(s2 / n - (s / n) * (s / n));
  CHECK(std::abs(sd - 0.05) < 0.1 * 0.05);
}

TEST_CASE("same spec and seed give identical frames; different seeds differ") {
  const ScenarioSpec spec = scenarios::occlusion(5);
  const Scenario a = generate(spec);
  const Scenario b = generate(spec);
  CHECK(a.frames == b.frames);
  CHECK(a.truth == b.truth);
  ScenarioSpec other = spec;
  other.seed = 6;
  CHECK_FALSE(generate(other).frames[0] == a.frames[0]);
}

TEST_CASE("occluder covers the requested fraction of the box") {
  for (double fraction : {0.1, 0.3, 0.55}) {
    const TargetBox box{40.3, 30.7, 17.0, 13.0};
    const Rect r = occluder_rect(box, fraction);
    CHECK(r.area() == doctest::Approx(fraction * box.area()));
    // Pixel coverage summed from a rendering with a distinct occluder value.
    ScenarioSpec spec;
    spec.frame_w = 80;
    spec.frame_h = 60;
    spec.target = box;
    spec.target_intensity = 0.0;
    spec.background_intensity = 0.0;
    spec.occlusion = OcclusionEvent{0, 0, fraction, 1.0};
    const Image img = render_clean(spec, box, r);
    double covered = 0.0;
    for (double v : img.pixels()) covered += v;
    CHECK(std::abs(covered - fraction * box.area()) <= 1.0);
  }
}

TEST_CASE("occlusion only during its frames") {
  const Scenario sc = generate(scenarios::occlusion(1));
  for (std::size_t f = 0; f < sc.occluders.size(); ++f) {
    CHECK(sc.occluders[f].has_value() == (f >= 40 && f <= 50));
  }
}

TEST_CASE("jump displaces the truth once") {
  ScenarioSpec spec = small_static();
  spec.num_frames = 6;
  spec.jump = JumpEvent{3, 8.0, -4.0};
  const auto truth = trajectory(spec);
  CHECK(truth[2].cx == 30.0);
  CHECK(truth[3].cx == 38.0);
  CHECK(truth[3].cy == 20.0);
  CHECK(truth[5].cx == 38.0);
}

TEST_CASE("bounce keeps the target inside") {
  const ScenarioSpec spec = scenarios::linear_motion(1);
  const auto truth = trajectory(spec);
  REQUIRE(truth.size() == 100);
  for (const auto& b : truth) {
    CHECK(b.left() >= 1.0);
    CHECK(b.right() <= 127.0);
  }
  CHECK(truth[1].cx - truth[0].cx == 2.0);
  bool turned = false;
  for (std::size_t f = 1; f < truth.size(); ++f) turned = turned || truth[f].cx < truth[f - 1].cx;
  CHECK(turned);
}

TEST_CASE("validation") {
  ScenarioSpec spec = small_static();
  spec.vx = 10.0;
  CHECK_THROWS_AS(spec.validate(), GeometryError);
  spec = small_static();
  spec.target = {6.0, 24.0, 12.0, 10.0};
  CHECK_THROWS_AS(spec.validate(), GeometryError);
  spec = small_static();
  spec.noise_sigma = -0.1;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  spec = small_static();
  spec.occlusion = OcclusionEvent{3, 1, 0.3, 0.5};
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  spec.occlusion = OcclusionEvent{1, 3, 1.0, 0.5};
  CHECK_THROWS_AS(spec.validate(), ParameterError);
  spec = small_static();
  spec.num_frames = 0;
  CHECK_THROWS_AS(generate(spec), ParameterError);
}

TEST_CASE("scenario text round trip") {
  ScenarioSpec spec = scenarios::occlusion(42);
  spec.jump = JumpEvent{70, 3.5, -1.25};
  const std::string text = to_text(spec);
  const ScenarioSpec back = parse_scenario(text);
  CHECK(to_text(back) == text);
  CHECK(generate(back).frames == generate(spec).frames);

  CHECK_THROWS_AS(parse_scenario("frame_w=64\ncolour=red\n"), InputError);
  CHECK_THROWS_AS(parse_scenario("frame_w=sixty\n"), InputError);
  CHECK_THROWS_AS(parse_scenario("num_frames=200\nvx=2\n"), GeometryError);
}
