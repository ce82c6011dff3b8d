#include "dockrl/camera.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

namespace dockrl {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a) {
  const double n = std::sqrt(dot(a, a));
  return {a[0] / n, a[1] / n, a[2] / n};
}

constexpr double kMinDepth = 1e-6;

}  // namespace

CameraBasis make_basis(const CameraModel& cam) {
  CameraBasis b;
  b.origin = {0.0, cam.cam_y, cam.cam_height};
  const Vec3 aim = {0.0, cam.aim_y, 0.0};
  b.forward = normalized(sub(aim, b.origin));
  const Vec3 up = {0.0, 0.0, 1.0};
  b.right = normalized(cross(up, b.forward));
  b.down = cross(b.right, b.forward);
  return b;
}

std::array<double, 3> project_point(const Vec3& p, const CameraModel& cam,
                                    const CameraBasis& basis) {
  const Vec3 q = sub(p, basis.origin);
  const double depth = dot(q, basis.forward);
  if (depth <= kMinDepth) return {0.0, 0.0, depth};
  const double u = 0.5 * cam.width_px + cam.focal_px * dot(q, basis.right) / depth;
  const double v = 0.5 * cam.height_px + cam.focal_px * dot(q, basis.down) / depth;
  return {u, v, depth};
}

std::array<Vec3, 4> marker_corners(const Pose& pose, double offset,
                                   double half_size) {
  const Vec3 fwd = {std::sin(pose.theta), std::cos(pose.theta), 0.0};
  const Vec3 lat = {std::cos(pose.theta), -std::sin(pose.theta), 0.0};
  const Vec3 c = {pose.x + offset * fwd[0], pose.y + offset * fwd[1], 0.0};
  auto corner = [&](double a, double b) -> Vec3 {
    return {c[0] + half_size * (a * fwd[0] + b * lat[0]),
            c[1] + half_size * (a * fwd[1] + b * lat[1]), 0.0};
  };
  // ring order
  return {corner(1, 1), corner(1, -1), corner(-1, -1), corner(-1, 1)};
}

namespace {

struct BoxResult {
  double u = 0.0, v = 0.0;  // normalized center
  bool in_view = false;
};

BoxResult project_marker_box(const Pose& pose, double offset, double half_size,
                             const CameraModel& cam, const CameraBasis& basis) {
  BoxResult r;
  const auto corners = marker_corners(pose, offset, half_size);
  double umin = 0, umax = 0, vmin = 0, vmax = 0;
  bool first = true;
  bool all_positive_depth = true;
  for (const auto& c : corners) {
    const auto pr = project_point(c, cam, basis);
    if (pr[2] <= kMinDepth) {
      all_positive_depth = false;
      break;
    }
    if (first) {
      umin = umax = pr[0];
      vmin = vmax = pr[1];
      first = false;
    } else {
      umin = std::min(umin, pr[0]);
      umax = std::max(umax, pr[0]);
      vmin = std::min(vmin, pr[1]);
      vmax = std::max(vmax, pr[1]);
    }
  }
  if (!all_positive_depth) return r;  // center unusable, flag stays false

  const double cu = 0.5 * (umin + umax);
  const double cv = 0.5 * (vmin + vmax);
  r.u = (cu - 0.5 * cam.width_px) / (0.5 * cam.width_px);
  r.v = (cv - 0.5 * cam.height_px) / (0.5 * cam.height_px);
  r.in_view = umin >= 0.0 && umax <= cam.width_px && vmin >= 0.0 &&
              vmax <= cam.height_px;
  return r;
}

}  // namespace

MarkerObservation project_markers(const Pose& pose, const MarkerLayout& layout,
                                  const CameraModel& cam) {
  const CameraBasis basis = make_basis(cam);
  const BoxResult m1 =
      project_marker_box(pose, layout.front_offset, layout.marker_half_size, cam, basis);
  const BoxResult m2 =
      project_marker_box(pose, layout.rear_offset, layout.marker_half_size, cam, basis);
  MarkerObservation obs;
  obs.u1 = m1.u;
  obs.v1 = m1.v;
  obs.in_view1 = m1.in_view;
  obs.u2 = m2.u;
  obs.v2 = m2.v;
  obs.in_view2 = m2.in_view;
  return obs;
}

std::pair<double, double> goal_anchor_values(const MarkerLayout& layout,
                                             const CameraModel& cam,
                                             const SimConfig& cfg) {
  const Pose goal{0.0, cfg.y_goal, 0.0};
  const MarkerObservation obs = project_markers(goal, layout, cam);
  if (!obs.in_view1 || !obs.in_view2) {
    throw std::runtime_error(
        "goal_anchor_values: goal pose is not fully in view; "
        "check camera/layout configuration");
  }
  return {obs.v1, obs.v2};
}

MarkerObservation apply_noise(const MarkerObservation& obs,
                              const DetectorNoise& noise,
                              const CameraModel& cam, std::mt19937_64& rng) {
  MarkerObservation out = obs;
  if (noise.sigma_px > 0.0) {
    std::normal_distribution<double> jitter(0.0, noise.sigma_px);
    if (out.in_view1) {
      out.u1 += jitter(rng) / (0.5 * cam.width_px);
      out.v1 += jitter(rng) / (0.5 * cam.height_px);
    }
    if (out.in_view2) {
      out.u2 += jitter(rng) / (0.5 * cam.width_px);
      out.v2 += jitter(rng) / (0.5 * cam.height_px);
    }
  }
  if (noise.dropout_prob > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (out.in_view1 && unit(rng) < noise.dropout_prob) out.in_view1 = false;
    if (out.in_view2 && unit(rng) < noise.dropout_prob) out.in_view2 = false;
  }
  return out;
}

namespace {

// Pixel-center point-in-convex-polygon test; accepts either winding.
bool inside_quad(double px, double py, const std::array<double, 2>* q) {
  double sign = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = q[i];
    const auto& b = q[(i + 1) % 4];
    const double c = (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0]);
    if (c != 0.0) {
      if (sign == 0.0) {
        sign = c;
      } else if ((c > 0.0) != (sign > 0.0)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

void render_ppm(const Pose& pose, const MarkerLayout& layout,
                const CameraModel& cam, const std::string& path) {
  const CameraBasis basis = make_basis(cam);
  const int w = cam.width_px;
  const int h = cam.height_px;
  std::vector<unsigned char> img(static_cast<size_t>(w) * h * 3, 255);

  struct Paint {
    double offset;
    unsigned char r, g, b;
  };
  const Paint paints[2] = {{layout.front_offset, 220, 30, 30},
                           {layout.rear_offset, 20, 20, 20}};

  for (const auto& paint : paints) {
    const auto corners = marker_corners(pose, paint.offset, layout.marker_half_size);
    std::array<std::array<double, 2>, 4> quad;
    bool visible = true;
    for (int i = 0; i < 4; ++i) {
      const auto pr = project_point(corners[i], cam, basis);
      if (pr[2] <= kMinDepth) {
        visible = false;
        break;
      }
      quad[i] = {pr[0], pr[1]};
    }
    if (!visible) continue;

    double umin = quad[0][0], umax = quad[0][0];
    double vmin = quad[0][1], vmax = quad[0][1];
    for (int i = 1; i < 4; ++i) {
      umin = std::min(umin, quad[i][0]);
      umax = std::max(umax, quad[i][0]);
      vmin = std::min(vmin, quad[i][1]);
      vmax = std::max(vmax, quad[i][1]);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(umin)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(umax)));
    const int y0 = std::max(0, static_cast<int>(std::floor(vmin)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(vmax)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (inside_quad(x + 0.5, y + 0.5, quad.data())) {
          unsigned char* px = &img[(static_cast<size_t>(y) * w + x) * 3];
          px[0] = paint.r;
          px[1] = paint.g;
          px[2] = paint.b;
        }
      }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("render_ppm: cannot open " + path);
  out << "P6\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()),
            static_cast<std::streamsize>(img.size()));
  if (!out) throw std::runtime_error("render_ppm: write failed for " + path);
}

}  // namespace dockrl
