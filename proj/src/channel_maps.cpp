#include "pagelayout/channel_maps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

namespace pagelayout {

namespace {

constexpr std::uint8_t kVersion = 1;
constexpr std::array<char, 4> kMagic{'P', 'N', 'C', 'M'};
const std::array<const char*, 5> kDetectionNames{"base", "end", "asc", "des", "block"};

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw InputError("pncm: truncated container");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_shape(const PlaneF& p, ImageSize size, const std::string& name) {
  if (p.rows() != size.height || p.cols() != size.width)
    throw InputError("maps: channel '" + name + "' has mismatched shape");
}

void check_finite(const PlaneF& p, const std::string& name) {
  if (!p.isFinite().all()) throw InputError("maps: channel '" + name + "' has non-finite values");
}

void check_unit_range(const PlaneF& p, const std::string& name) {
  if (p.size() == 0) return;
  if (p.minCoeff() < -1e-6f || p.maxCoeff() > 1.0f + 1e-6f)
    throw InputError("maps: channel '" + name + "' outside [0, 1]");
}

} // namespace

ChannelMaps ChannelMaps::zeros(ImageSize size) {
  const PlaneF z = PlaneF::Zero(size.height, size.width);
  return {z, z, z, z, z};
}

OrientationMaps OrientationMaps::zeros(ImageSize size) {
  const PlaneF z = PlaneF::Zero(size.height, size.width);
  return {z, z};
}

Bytes write_container(const ChannelStack& stack) {
  Bytes out(kMagic.begin(), kMagic.end());
  out.push_back(kVersion);
  const auto rows = stack.empty() ? 0 : stack.front().values.rows();
  const auto cols = stack.empty() ? 0 : stack.front().values.cols();
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  put_u32(out, static_cast<std::uint32_t>(stack.size()));
  out.reserve(out.size() + stack.size() * (1 + 8 + 4 * static_cast<std::size_t>(rows * cols)));
  for (const auto& ch : stack) {
    if (ch.values.rows() != rows || ch.values.cols() != cols)
      throw std::invalid_argument("pncm: channels differ in shape");
    if (ch.name.empty() || ch.name.size() > 255) throw std::invalid_argument("pncm: bad channel name");
    out.push_back(static_cast<std::uint8_t>(ch.name.size()));
    out.insert(out.end(), ch.name.begin(), ch.name.end());
    const float* data = ch.values.data();
    for (Eigen::Index i = 0; i < ch.values.size(); ++i) put_u32(out, std::bit_cast<std::uint32_t>(data[i]));
  }
  return out;
}

ChannelStack read_container(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (bytes.size() < 5 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
    throw InputError("pncm: unsupported container");
  in.take(4);
  if (in.u8() != kVersion) throw InputError("pncm: unsupported container");
  const std::uint64_t h = in.u32();
  const std::uint64_t w = in.u32();
  const std::uint64_t c = in.u32();
  if (h == 0 || w == 0) throw InputError("pncm: empty raster");
  const std::uint64_t cells = h * w;
  if (h > (1u << 20) || w > (1u << 20) || cells > (std::numeric_limits<std::uint64_t>::max() / 4) ||
      cells * 4 * c > in.remaining())
    throw InputError("pncm: declared size exceeds payload");

  ChannelStack stack;
  for (std::uint64_t k = 0; k < c; ++k) {
    NamedPlane ch;
    const std::size_t len = in.u8();
    if (len == 0) throw InputError("pncm: empty channel name");
    const auto name = in.take(len);
    ch.name.assign(name.begin(), name.end());
    ch.values.resize(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(w));
    float* data = ch.values.data();
    for (std::uint64_t i = 0; i < cells; ++i) {
      const float v = std::bit_cast<float>(in.u32());
      if (!std::isfinite(v)) throw InputError("pncm: non-finite value in channel '" + ch.name + "'");
      data[i] = v;
    }
    stack.push_back(std::move(ch));
  }
  if (in.remaining() != 0) throw InputError("pncm: trailing bytes after last channel");
  return stack;
}

ChannelStack to_stack(const ChannelMaps& maps) {
  return {{"base", maps.base}, {"end", maps.end}, {"asc", maps.asc}, {"des", maps.des}, {"block", maps.block}};
}

ChannelStack to_stack(const OrientationMaps& maps) { return {{"ox", maps.ox}, {"oy", maps.oy}}; }

namespace {

std::map<std::string, const PlaneF*> index_channels(const ChannelStack& stack) {
  std::map<std::string, const PlaneF*> by_name;
  for (const auto& ch : stack)
    if (!by_name.emplace(ch.name, &ch.values).second)
      throw InputError("maps: duplicate channel '" + ch.name + "'");
  return by_name;
}

} // namespace

ChannelMaps to_channel_maps(const ChannelStack& stack) {
  const auto by_name = index_channels(stack);
  if (by_name.size() != kDetectionNames.size()) throw InputError("maps: expected channels base, end, asc, des, block");
  auto get = [&](const char* name) -> const PlaneF& {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw InputError(std::string("maps: missing channel '") + name + "'");
    return *it->second;
  };
  ChannelMaps maps{get("base"), get("end"), get("asc"), get("des"), get("block")};
  validate(maps);
  return maps;
}

OrientationMaps to_orientation_maps(const ChannelStack& stack) {
  const auto by_name = index_channels(stack);
  if (by_name.size() != 2 || !by_name.count("ox") || !by_name.count("oy"))
    throw InputError("maps: expected channels ox, oy");
  OrientationMaps maps{*by_name.at("ox"), *by_name.at("oy")};
  validate(maps);
  return maps;
}

std::variant<ChannelMaps, OrientationMaps> read_maps(std::span<const std::uint8_t> bytes) {
  const auto stack = read_container(bytes);
  const bool orientation =
      std::any_of(stack.begin(), stack.end(), [](const NamedPlane& p) { return p.name == "ox"; });
  if (orientation) return to_orientation_maps(stack);
  return to_channel_maps(stack);
}

Bytes write_maps(const ChannelMaps& maps) { return write_container(to_stack(maps)); }
Bytes write_maps(const OrientationMaps& maps) { return write_container(to_stack(maps)); }

void validate(const ChannelMaps& maps) {
  const ImageSize size = maps.size();
  for (const auto& ch : to_stack(maps)) {
    check_shape(ch.values, size, ch.name);
    check_finite(ch.values, ch.name);
  }
  check_unit_range(maps.base, "base");
  check_unit_range(maps.end, "end");
  check_unit_range(maps.block, "block");
  if (maps.asc.size() && maps.asc.minCoeff() < 0.0f) throw InputError("maps: channel 'asc' negative");
  if (maps.des.size() && maps.des.minCoeff() < 0.0f) throw InputError("maps: channel 'des' negative");
}

void validate(const OrientationMaps& maps) {
  check_shape(maps.oy, maps.size(), "oy");
  check_finite(maps.ox, "ox");
  check_finite(maps.oy, "oy");
  for (const auto* p : {&maps.ox, &maps.oy}) {
    if (p->size() && (p->minCoeff() < -1.0f - 1e-6f || p->maxCoeff() > 1.0f + 1e-6f))
      throw InputError("maps: orientation channel outside [-1, 1]");
  }
}

ChannelMaps rotate_maps(const ChannelMaps& maps, int turns) {
  return {rotate_plane(maps.base, turns), rotate_plane(maps.end, turns), rotate_plane(maps.asc, turns),
          rotate_plane(maps.des, turns), rotate_plane(maps.block, turns)};
}

OrientationMaps rotate_maps(const OrientationMaps& maps, int turns) {
  const PlaneF ox = rotate_plane(maps.ox, turns);
  const PlaneF oy = rotate_plane(maps.oy, turns);
  // Vector part: (dx, dy) -> rotate_direction.
  switch (normalize_turns(turns)) {
  case 1: return {oy, -ox};
  case 2: return {-ox, -oy};
  case 3: return {-oy, ox};
  default: return {ox, oy};
  }
}

} // namespace pagelayout
