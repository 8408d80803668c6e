#pragma once

#include "pagelayout/channel_maps.hpp"
#include "pagelayout/layout.hpp"

namespace pagelayout {

struct RenderParams {
  double baseline_thickness = 3.0;
  double endpoint_radius = 3.0;
  double block_boundary_thickness = 3.0;

  void validate() const;
};

/// Rasterizes training targets for a layout. A pixel belongs to a stroke when
/// its center is within thickness / 2 of the geometry. asc/des hold the
/// owning line's heights on baseline foreground and zero elsewhere. When two
/// lines claim the same baseline pixel the later line wins and a diagnostic
/// is recorded.
ChannelMaps render_gt(const PageLayout& layout, const RenderParams& params = {}, Diagnostics* diag = nullptr);

/// Unit baseline direction at every pixel inside a line polygon (nearest
/// baseline segment), zero elsewhere. Later lines win on overlap.
OrientationMaps render_orientation_gt(const PageLayout& layout, Diagnostics* diag = nullptr);

} // namespace pagelayout
