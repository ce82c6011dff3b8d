#pragma once

#include <array>
#include <random>
#include <string>
#include <utility>

#include "dockrl/sim.hpp"

namespace dockrl {

// Pinhole camera fixed at the dock, on the centerline, looking back along
// the approach axis. cam_height is measured above the mower-top plane where
// the markers live (that plane is z = 0 in world coordinates). aim_y is the
// point on the marker plane the optical axis passes through; it defaults to
// the midpoint of the two markers at the goal pose.
struct CameraModel {
  double focal_px = 1000.0;
  int width_px = 1280;
  int height_px = 960;
  double cam_height = 0.5;  // m above marker plane
  double cam_y = 2.6;       // m along approach axis, behind the stop line
  double aim_y = 1.325;     // m, optical-axis target on the marker plane
};

// Two square markers on the mower top, centered on the longitudinal axis.
struct MarkerLayout {
  double front_offset = 0.55;      // m forward of the rear axle (marker 1)
  double rear_offset = 0.10;       // m forward of the rear axle (marker 2)
  double marker_half_size = 0.04;  // m
};

// Normalized bounding-box centers of the two detected markers.
// Components live in (-1, 1) when in view; +u is right, +v is down,
// image center is (0, 0).
struct MarkerObservation {
  double u1 = 0.0, v1 = 0.0;
  double u2 = 0.0, v2 = 0.0;
  bool in_view1 = false;
  bool in_view2 = false;
};

// Synthetic stand-in for detector error: Gaussian jitter of the box center
// plus independent per-marker dropout.
struct DetectorNoise {
  double sigma_px = 0.0;
  double dropout_prob = 0.0;
};

// Orthonormal camera frame derived from a CameraModel.
struct CameraBasis {
  std::array<double, 3> origin;
  std::array<double, 3> right;    // +u
  std::array<double, 3> down;     // +v
  std::array<double, 3> forward;  // +depth
};

CameraBasis make_basis(const CameraModel& cam);

// Projects a world point; returns {u_px, v_px, depth}. depth <= 0 means the
// point is behind the camera plane and the pixel coordinates are invalid.
std::array<double, 3> project_point(const std::array<double, 3>& p,
                                    const CameraModel& cam,
                                    const CameraBasis& basis);

// World positions of the four corners of one marker quadrilateral, in ring
// order, for a mower at `pose`.
std::array<std::array<double, 3>, 4> marker_corners(const Pose& pose,
                                                    double offset,
                                                    double half_size);

// Projects both marker quadrilaterals and reports the normalized centers of
// their axis-aligned pixel bounding boxes (YOLO-style box centers, which
// differ from the projected center point under perspective). A marker is in
// view only when all four corners project at positive depth inside the
// frame; otherwise its flag is cleared and its center is the unclamped
// projection when computable, (0, 0) when behind the camera.
MarkerObservation project_markers(const Pose& pose, const MarkerLayout& layout,
                                  const CameraModel& cam);

// v-coordinates of the two markers with the mower stopped perfectly at the
// goal pose (x = 0, y = y_goal, theta = 0). Throws std::runtime_error if the
// goal pose is not fully in view.
std::pair<double, double> goal_anchor_values(const MarkerLayout& layout,
                                             const CameraModel& cam,
                                             const SimConfig& cfg);

// Jitters in-view centers by sigma_px (converted to normalized units) and
// drops each in-view marker with probability dropout_prob. Zero parameters
// return the input unchanged without consuming randomness.
MarkerObservation apply_noise(const MarkerObservation& obs,
                              const DetectorNoise& noise,
                              const CameraModel& cam, std::mt19937_64& rng);

// Renders the simulated camera view (white background, marker 1 red,
// marker 2 black) as a binary PPM file. Throws std::runtime_error on IO
// failure.
void render_ppm(const Pose& pose, const MarkerLayout& layout,
                const CameraModel& cam, const std::string& path);

}  // namespace dockrl
