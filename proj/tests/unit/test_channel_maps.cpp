#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"

#include "pagelayout/channel_maps.hpp"
#include "pagelayout/rng.hpp"

using namespace pagelayout;

namespace {

ChannelMaps random_maps(SplitMix64& rng, ImageSize size) {
  ChannelMaps m = ChannelMaps::zeros(size);
  for (PlaneF* p : {&m.base, &m.end, &m.block})
    for (Eigen::Index i = 0; i < p->size(); ++i) (*p)(i) = static_cast<float>(rng.uniform());
  for (PlaneF* p : {&m.asc, &m.des})
    for (Eigen::Index i = 0; i < p->size(); ++i) (*p)(i) = static_cast<float>(rng.uniform(0, 30));
  return m;
}

bool equal(const ChannelMaps& a, const ChannelMaps& b) {
  return (a.base == b.base).all() && (a.end == b.end).all() && (a.asc == b.asc).all() && (a.des == b.des).all() &&
         (a.block == b.block).all();
}

} // namespace

TEST_CASE("2x2 all-zero five-channel container reads as zero maps") {
  Bytes bytes{'P', 'N', 'C', 'M', 1, 2, 0, 0, 0, 2, 0, 0, 0, 5, 0, 0, 0};
  for (const char* name : {"base", "end", "asc", "des", "block"}) {
    bytes.push_back(static_cast<std::uint8_t>(std::strlen(name)));
    bytes.insert(bytes.end(), name, name + std::strlen(name));
    bytes.insert(bytes.end(), 16, 0);
  }
  const auto maps = read_maps(bytes);
  REQUIRE(std::holds_alternative<ChannelMaps>(maps));
  const auto& m = std::get<ChannelMaps>(maps);
  CHECK(m.size() == ImageSize{2, 2});
  CHECK(equal(m, ChannelMaps::zeros({2, 2})));
  CHECK(write_maps(m) == bytes);
}

TEST_CASE("random maps round-trip bit-exactly") {
  SplitMix64 rng(31);
  for (int t = 0; t < 5; ++t) {
    const ChannelMaps m = random_maps(rng, {64, 64});
    const auto back = read_maps(write_maps(m));
    REQUIRE(std::holds_alternative<ChannelMaps>(back));
    CHECK(equal(std::get<ChannelMaps>(back), m));
  }
  OrientationMaps o = OrientationMaps::zeros({3, 4});
  o.ox.setConstant(0.6f);
  o.oy.setConstant(0.8f);
  const auto back = read_maps(write_maps(o));
  REQUIRE(std::holds_alternative<OrientationMaps>(back));
  CHECK((std::get<OrientationMaps>(back).oy == o.oy).all());
}

TEST_CASE("bad containers are rejected") {
  Bytes good = write_maps(ChannelMaps::zeros({2, 3}));

  Bytes magic = good;
  magic[0] = 'X';
  CHECK_THROWS_WITH_AS(read_maps(magic), doctest::Contains("unsupported container"), InputError);

  Bytes version = good;
  version[4] = 2;
  CHECK_THROWS_WITH_AS(read_maps(version), doctest::Contains("unsupported container"), InputError);

  Bytes truncated(good.begin(), good.end() - 1);
  CHECK_THROWS_AS(read_maps(truncated), InputError);

  Bytes trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(read_maps(trailing), InputError);

  Bytes huge = good;
  huge[5] = huge[6] = huge[7] = huge[8] = 0xff;
  CHECK_THROWS_AS(read_maps(huge), InputError);

  ChannelMaps nan = ChannelMaps::zeros({2, 3});
  nan.asc(1, 1) = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(read_maps(write_container(to_stack(nan))), InputError);
}

TEST_CASE("validate checks ranges") {
  ChannelMaps m = ChannelMaps::zeros({2, 2});
  CHECK_NOTHROW(validate(m));
  m.base(0, 0) = 1.5f;
  CHECK_THROWS_AS(validate(m), InputError);
  m.base(0, 0) = 1.0f;
  m.des(1, 1) = -1.0f;
  CHECK_THROWS_AS(validate(m), InputError);
}

TEST_CASE("rotate_maps moves a hot pixel like rotate90 moves its center") {
  const ImageSize size{4, 6};
  for (int r = 0; r < size.height; ++r)
    for (int c = 0; c < size.width; ++c) {
      ChannelMaps m = ChannelMaps::zeros(size);
      m.base(r, c) = 1.0f;
      for (int turns : {0, 1, 3}) {
        const ChannelMaps rot = rotate_maps(m, turns);
        CHECK(rot.size() == rotated_size(size, turns));
        const Point q = rotate90(Point(c, r), size, turns);
        CHECK(rot.base(static_cast<int>(q.y()), static_cast<int>(q.x())) == 1.0f);
        CHECK(rot.base.sum() == 1.0f);
      }
    }
}

TEST_CASE("rotate_maps turns 0 is identity, 1 then 3 is identity") {
  SplitMix64 rng(32);
  const ChannelMaps m = random_maps(rng, {5, 7});
  CHECK(equal(rotate_maps(m, 0), m));
  CHECK(equal(rotate_maps(rotate_maps(m, 1), 3), m));
}

TEST_CASE("orientation vectors rotate with the frame") {
  OrientationMaps o = OrientationMaps::zeros({3, 5});
  o.ox.setConstant(1.0f);
  const OrientationMaps r = rotate_maps(o, 1);
  CHECK(r.size() == ImageSize{5, 3});
  CHECK((r.ox == 0.0f).all());
  CHECK((r.oy == -1.0f).all());
  const OrientationMaps back = rotate_maps(r, 3);
  CHECK((back.ox == 1.0f).all());
  CHECK((back.oy == 0.0f).all());
}
