#include "stylescope/ingestion/crop.hpp"

#include <cmath>

#include "stylescope/core/error.hpp"

namespace stylescope {

bool Box::contains(const Box& inner) const noexcept {
  return inner.x >= x && inner.y >= y && inner.x + inner.w <= x + w && inner.y + inner.h <= y + h;
}

namespace {

bool well_formed(const Box& b) {
  return std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) && std::isfinite(b.h) && b.w > 0.0 &&
         b.h > 0.0;
}

}  // namespace

std::optional<Box> canonical_crop(const DetectionInput& d, const CropGeometry& g) {
  if (!well_formed(d.face)) throw ValidationError("detection: face box must have positive width and height");
  if (!well_formed(d.body)) throw ValidationError("detection: body box must have positive width and height");
  if (!d.torso_visible) return std::nullopt;

  const double center_x = d.face.x + 0.5 * d.face.w;
  Box crop;
  crop.w = g.width_scale * d.face.w;
  crop.h = g.height_scale * d.face.h;
  crop.x = center_x - 0.5 * crop.w;
  crop.y = d.face.y - g.head_margin * d.face.h;
  if (!d.body.contains(crop)) return std::nullopt;
  return crop;
}

}  // namespace stylescope
