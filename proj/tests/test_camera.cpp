#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "dockrl/camera.hpp"
#include "projection_oracle.hpp"

using namespace dockrl;

namespace {

double px_err_u(double u_norm, double u_px, const CameraModel& cam) {
  return std::abs(u_norm * 0.5 * cam.width_px + 0.5 * cam.width_px - u_px);
}

double px_err_v(double v_norm, double v_px, const CameraModel& cam) {
  return std::abs(v_norm * 0.5 * cam.height_px + 0.5 * cam.height_px - v_px);
}

}  // namespace

TEST_CASE("markers on the centerline project to the horizontal center") {
  const MarkerLayout layout;
  const CameraModel cam;
  for (double y : {-0.2, -0.1, 0.0, 0.3, 0.6, 1.0}) {
    const MarkerObservation obs = project_markers({0.0, y, 0.0}, layout, cam);
    CHECK(obs.in_view1);
    CHECK(obs.in_view2);
    CHECK(obs.u1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(obs.u2 == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("mirrored poses mirror u and keep v") {
  const MarkerLayout layout;
  const CameraModel cam;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-0.2, 0.2);
  std::uniform_real_distribution<double> uy(-0.2, 0.9);
  std::uniform_real_distribution<double> ut(-0.5, 0.5);
  for (int i = 0; i < 50; ++i) {
    const Pose p{ux(rng), uy(rng), ut(rng)};
    const Pose m{-p.x, p.y, -p.theta};
    const MarkerObservation a = project_markers(p, layout, cam);
    const MarkerObservation b = project_markers(m, layout, cam);
    CHECK(a.u1 == doctest::Approx(-b.u1).epsilon(1e-9));
    CHECK(a.u2 == doctest::Approx(-b.u2).epsilon(1e-9));
    CHECK(a.v1 == doctest::Approx(b.v1).epsilon(1e-9));
    CHECK(a.v2 == doctest::Approx(b.v2).epsilon(1e-9));
  }
}

TEST_CASE("analytic box centers match the ray-cast rasterizer within 1 px") {
  const MarkerLayout layout;
  const CameraModel cam;
  const oracle::TrigCamera ocam(cam);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(-0.2, 0.2);
  std::uniform_real_distribution<double> uy(-0.2, 0.95);
  std::uniform_real_distribution<double> ut(-M_PI / 6, M_PI / 6);

  int tested = 0;
  while (tested < 100) {
    const Pose p{ux(rng), uy(rng), ut(rng)};
    const MarkerObservation obs = project_markers(p, layout, cam);
    if (!obs.in_view1 || !obs.in_view2) continue;
    ++tested;

    const oracle::PixelBox b1 =
        oracle::rasterize_marker(p, layout.front_offset, layout.marker_half_size, ocam);
    const oracle::PixelBox b2 =
        oracle::rasterize_marker(p, layout.rear_offset, layout.marker_half_size, ocam);
    REQUIRE(b1.any);
    REQUIRE(b2.any);
    CHECK(px_err_u(obs.u1, b1.center_u(), cam) < 1.0);
    CHECK(px_err_v(obs.v1, b1.center_v(), cam) < 1.0);
    CHECK(px_err_u(obs.u2, b2.center_u(), cam) < 1.0);
    CHECK(px_err_v(obs.v2, b2.center_v(), cam) < 1.0);
  }
}

TEST_CASE("goal anchors are self-consistent and configuration-dependent") {
  const MarkerLayout layout;
  const CameraModel cam;
  const SimConfig sim;
  const auto [v1_0, v2_0] = goal_anchor_values(layout, cam, sim);

  const MarkerObservation at_goal = project_markers({0.0, sim.y_goal, 0.0}, layout, cam);
  CHECK(at_goal.u1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_goal.u2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_goal.v1 == v1_0);
  CHECK(at_goal.v2 == v2_0);

  // camera above the marker plane looking down-forward: nearer front marker
  // sits lower in the image
  CHECK(v1_0 > v2_0);

  CameraModel raised = cam;
  raised.cam_height += 0.15;
  const auto [r1, r2] = goal_anchor_values(layout, raised, sim);
  CHECK(r1 != v1_0);
  CHECK(r2 != v2_0);
}

TEST_CASE("goal pose out of view is a configuration error") {
  const MarkerLayout layout;
  CameraModel cam;
  cam.cam_y = 1.55;  // nearly on top of the front marker
  const SimConfig sim;
  CHECK_THROWS_AS(goal_anchor_values(layout, cam, sim), std::runtime_error);
}

TEST_CASE("v increases monotonically as the mower approaches") {
  const MarkerLayout layout;
  const CameraModel cam;
  double prev_v1 = -2.0, prev_v2 = -2.0;
  for (double y = -0.25; y <= 1.001; y += 0.025) {
    const MarkerObservation obs = project_markers({0.0, y, 0.0}, layout, cam);
    REQUIRE(obs.in_view1);
    REQUIRE(obs.in_view2);
    CHECK(obs.v1 > prev_v1);
    CHECK(obs.v2 > prev_v2);
    prev_v1 = obs.v1;
    prev_v2 = obs.v2;
  }
}

TEST_CASE("markers behind the camera are flagged out of view") {
  const MarkerLayout layout;
  const CameraModel cam;
  const MarkerObservation obs = project_markers({0.0, cam.cam_y + 1.0, M_PI}, layout, cam);
  CHECK_FALSE(obs.in_view1);
  CHECK_FALSE(obs.in_view2);
}

TEST_CASE("zero noise is the identity and leaves the rng untouched") {
  const MarkerLayout layout;
  const CameraModel cam;
  const MarkerObservation obs = project_markers({0.05, 0.3, 0.1}, layout, cam);
  std::mt19937_64 rng(5);
  const auto before = rng;
  const MarkerObservation same = apply_noise(obs, {0.0, 0.0}, cam, rng);
  CHECK(same.u1 == obs.u1);
  CHECK(same.v1 == obs.v1);
  CHECK(same.u2 == obs.u2);
  CHECK(same.v2 == obs.v2);
  CHECK(same.in_view1 == obs.in_view1);
  CHECK(same.in_view2 == obs.in_view2);
  CHECK((rng == before));
}

TEST_CASE("jitter magnitude matches sigma_px in normalized units") {
  const MarkerLayout layout;
  const CameraModel cam;
  const MarkerObservation obs = project_markers({0.0, 0.3, 0.0}, layout, cam);
  const DetectorNoise noise{2.0, 0.0};
  std::mt19937_64 rng(17);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const MarkerObservation j = apply_noise(obs, noise, cam, rng);
    const double du = j.u1 - obs.u1;
    sum += du;
    sum_sq += du * du;
  }
  const double std_dev = std::sqrt(sum_sq / n - (sum / n) * (sum / n));
  const double expected = 2.0 / (0.5 * cam.width_px);
  CHECK(std_dev == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("dropout rate matches the configured probability") {
  const MarkerLayout layout;
  const CameraModel cam;
  const MarkerObservation obs = project_markers({0.0, 0.3, 0.0}, layout, cam);
  const DetectorNoise noise{0.0, 0.1};
  std::mt19937_64 rng(29);
  const int n = 100000;
  int dropped1 = 0, dropped2 = 0;
  for (int i = 0; i < n; ++i) {
    const MarkerObservation j = apply_noise(obs, noise, cam, rng);
    dropped1 += j.in_view1 ? 0 : 1;
    dropped2 += j.in_view2 ? 0 : 1;
  }
  CHECK(std::abs(dropped1 / double(n) - 0.1) < 0.01);
  CHECK(std::abs(dropped2 / double(n) - 0.1) < 0.01);
}

TEST_CASE("render_ppm writes a frame with both marker colors") {
  const MarkerLayout layout;
  const CameraModel cam;
  const std::string path = "./render_test.ppm";
  render_ppm({0.0, 0.5, 0.2}, layout, cam, path);

  FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  char magic[3] = {};
  int w = 0, h = 0, maxval = 0;
  REQUIRE(std::fscanf(f, "%2s %d %d %d", magic, &w, &h, &maxval) == 4);
  CHECK(std::string(magic) == "P6");
  CHECK(w == cam.width_px);
  CHECK(h == cam.height_px);
  std::fgetc(f);  // single whitespace after header
  std::vector<unsigned char> img(static_cast<size_t>(w) * h * 3);
  REQUIRE(std::fread(img.data(), 1, img.size(), f) == img.size());
  std::fclose(f);
  std::remove(path.c_str());

  size_t red = 0, black = 0, white = 0;
  for (size_t i = 0; i < img.size(); i += 3) {
    if (img[i] == 220 && img[i + 1] == 30) ++red;
    else if (img[i] == 20 && img[i + 1] == 20) ++black;
    else if (img[i] == 255 && img[i + 1] == 255 && img[i + 2] == 255) ++white;
  }
  CHECK(red > 100);    // front marker visible
  CHECK(black > 100);  // rear marker visible
  CHECK(white > img.size() / 3 / 2);  // mostly background
}
