#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "pagelayout/geometry.hpp"

namespace pagelayout {

/// Dense H x W raster, row-major so that (row, col) = (y, x) and the memory
/// order matches the on-disk layout.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PlaneF = Plane<float>;

/// The five detection channels. base/end/block are probabilities in [0, 1];
/// asc/des carry text heights in pixels of this resolution.
struct ChannelMaps {
  PlaneF base, end, asc, des, block;

  static ChannelMaps zeros(ImageSize size);
  ImageSize size() const { return {static_cast<int>(base.rows()), static_cast<int>(base.cols())}; }
};

/// Unit-circle text direction per pixel.
struct OrientationMaps {
  PlaneF ox, oy;

  static OrientationMaps zeros(ImageSize size);
  ImageSize size() const { return {static_cast<int>(ox.rows()), static_cast<int>(ox.cols())}; }
};

struct NamedPlane {
  std::string name;
  PlaneF values;
};

// Ordered channel records exactly as stored in a container.
using ChannelStack = std::vector<NamedPlane>;

using Bytes = std::vector<std::uint8_t>;

/// PNCM container:
///   "PNCM" | u8 version (1) | u32 H | u32 W | u32 C |
///   C x ( u8 name length | ASCII name | H*W float32 row-major )
/// All integers and floats little-endian.
Bytes write_container(const ChannelStack& stack);

/// Throws InputError on bad magic/version ("unsupported container"),
/// truncated or oversized payloads, and non-finite values.
ChannelStack read_container(std::span<const std::uint8_t> bytes);

ChannelStack to_stack(const ChannelMaps& maps);
ChannelStack to_stack(const OrientationMaps& maps);

/// Requires exactly the channels base, end, asc, des, block (any order).
ChannelMaps to_channel_maps(const ChannelStack& stack);
/// Requires exactly the channels ox, oy.
OrientationMaps to_orientation_maps(const ChannelStack& stack);

std::variant<ChannelMaps, OrientationMaps> read_maps(std::span<const std::uint8_t> bytes);
Bytes write_maps(const ChannelMaps& maps);
Bytes write_maps(const OrientationMaps& maps);

/// Shape agreement, finiteness, probability channels within [0, 1] +- 1e-6,
/// heights >= 0. Throws InputError.
void validate(const ChannelMaps& maps);
void validate(const OrientationMaps& maps);

/// Rotates a raster by `turns` quarter turns counterclockwise, matching the
/// point map of geometry's rotate90.
template <typename Derived>
Plane<typename Derived::Scalar> rotate_plane(const Eigen::ArrayBase<Derived>& plane, int turns) {
  using Out = Plane<typename Derived::Scalar>;
  switch (normalize_turns(turns)) {
  case 1: return Out(plane.transpose().colwise().reverse());
  case 2: return Out(plane.reverse());
  case 3: return Out(plane.transpose().rowwise().reverse());
  default: return Out(plane);
  }
}

ChannelMaps rotate_maps(const ChannelMaps& maps, int turns);
/// Rotates both planes and the vectors they hold.
OrientationMaps rotate_maps(const OrientationMaps& maps, int turns);

} // namespace pagelayout
