#pragma once

#include <optional>

namespace stylescope {

/// Axis-aligned pixel box; (x, y) is the top-left corner.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool contains(const Box& inner) const noexcept;
  friend bool operator==(const Box&, const Box&) = default;
};

struct DetectionInput {
  Box face;
  Box body;
  bool torso_visible = false;
};

/// Head-and-torso framing relative to the face box.
struct CropGeometry {
  double width_scale = 3.0;   // crop width  = width_scale  * face.w
  double height_scale = 4.5;  // crop height = height_scale * face.h
  double head_margin = 0.5;   // crop top    = face.y - head_margin * face.h
};

/// Canonical crop centered horizontally on the face, or nullopt (discard) when
/// the torso is not visible or the crop leaves the visible body box.
/// Throws ValidationError for boxes with non-positive extent.
std::optional<Box> canonical_crop(const DetectionInput& detection, const CropGeometry& geometry = {});

}  // namespace stylescope
