#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "voxrep/error.hpp"
#include "voxrep/image.hpp"
#include "voxrep/slice_codec.hpp"

using namespace voxrep;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a voxrep::Error");
  return ErrorKind::Io;
}

std::size_t non_black(const Raster& r) {
  std::size_t n = 0;
  for (int row = 0; row < r.height(); ++row)
    for (int col = 0; col < r.width(); ++col) n += r.at(row, col).is_black() ? 0 : 1;
  return n;
}

const Rgb kRed{230, 25, 25};

}  // namespace

TEST_SUITE("slice_codec") {
  TEST_CASE("slice_grid") {
    const VoxelGrid empty = new_grid({});
    const auto slices = slice_grid(empty);
    REQUIRE(slices.size() == 16);
    for (const auto& s : slices) {
      CHECK(s.width() == 100);
      CHECK(non_black(s) == 0);
    }

    VoxelGrid one = new_grid({});
    one.set(3, 7, 5, kRed);
    const auto ones = slice_grid(one);
    for (int k = 0; k < 16; ++k) CHECK(non_black(ones[static_cast<std::size_t>(k)]) == (k == 5 ? 1u : 0u));
    CHECK(ones[5].at(7, 3) == kRed);

    const VoxelGrid r = test::random_grid(4);
    std::size_t total = 0;
    for (const auto& s : slice_grid(r)) total += non_black(s);
    CHECK(total == occupied_count(r));
  }

  TEST_CASE("pad_slice centers with floor offsets") {
    Raster s(100, 100, {1, 2, 3});
    const Raster p = pad_slice(s, 112);
    CHECK(p.width() == 112);
    CHECK(p.at(5, 50).is_black());
    CHECK(p.at(6, 6) == Rgb{1, 2, 3});
    CHECK(p.at(105, 105) == Rgb{1, 2, 3});
    CHECK(p.at(106, 50).is_black());
    CHECK(non_black(p) == 10000);
    CHECK(non_black(pad_slice(Raster(100, 100), 112)) == 0);
    CHECK(kind_of([] { pad_slice(Raster(113, 100), 112); }) == ErrorKind::Size);
    const Raster odd = pad_slice(Raster(3, 3, {9, 9, 9}), 6);
    CHECK(odd.at(1, 1) == Rgb{9, 9, 9});
    CHECK(odd.at(3, 3) == Rgb{9, 9, 9});
    CHECK(odd.at(4, 4).is_black());
  }

  TEST_CASE("replication upscale") {
    Raster src(112, 112);
    std::mt19937 rng(1);
    for (int r = 0; r < 112; ++r)
      for (int c = 0; c < 112; ++c)
        src.put(r, c, {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())});
    const Raster up = upscale_slice(src, UpscaleMode::Replication);
    REQUIRE(up.width() == 224);
    for (int r = 0; r < 112; ++r)
      for (int c = 0; c < 112; ++c)
        for (int dr = 0; dr < 2; ++dr)
          for (int dc = 0; dc < 2; ++dc) CHECK(up.at(2 * r + dr, 2 * c + dc) == src.at(r, c));
  }

  TEST_CASE("constant rasters stay constant in both modes") {
    const Raster c(112, 112, {40, 80, 120});
    CHECK(upscale_slice(c, UpscaleMode::Replication) == Raster(224, 224, {40, 80, 120}));
    CHECK(upscale_slice(c, UpscaleMode::Bilinear) == Raster(224, 224, {40, 80, 120}));
  }

  TEST_CASE("bilinear single white pixel") {
    Raster src(112, 112);
    src.put(50, 60, {255, 255, 255});
    const Raster up = upscale_slice(src, UpscaleMode::Bilinear);
    // Half-pixel centers: destination i samples source i/2 - 1/4, so along each
    // axis the pixel spreads with weights 1/4, 3/4, 3/4, 1/4 over 2s-1 .. 2s+2.
    const double w[4] = {0.25, 0.75, 0.75, 0.25};
    for (int dr = 0; dr < 4; ++dr)
      for (int dc = 0; dc < 4; ++dc) {
        const auto expected = static_cast<std::uint8_t>(std::floor(255.0 * w[dr] * w[dc] + 0.5));
        CHECK(up.at(99 + dr, 119 + dc).r == expected);
      }
    CHECK(up.at(100, 120).r == 143);
    CHECK(up.at(99, 120).r == 48);
    CHECK(up.at(99, 119).r == 16);
    CHECK(non_black(up) == 16);
  }

  TEST_CASE("tile_slices placement") {
    EncodeOptions o;
    std::vector<Raster> slices;
    for (int k = 0; k < 16; ++k) slices.emplace_back(224, 224, Rgb{static_cast<std::uint8_t>(10 + k), 1, 1});
    const Raster img = tile_slices(slices, o);
    REQUIRE(img.width() == 896);
    for (int k = 0; k < 16; ++k) {
      const int r0 = 224 * (k / 4), c0 = 224 * (k % 4);
      CHECK(img.at(r0, c0).r == 10 + k);
      CHECK(img.at(r0 + 223, c0 + 223).r == 10 + k);
    }
    std::vector<Raster> five(6, Raster(224, 224));
    five[5] = Raster(224, 224, {7, 7, 7});
    const Raster t5 = tile_slices(five, o);
    CHECK(t5.at(224, 224) == Rgb{7, 7, 7});
    CHECK(t5.at(223, 223).is_black());
    CHECK(t5.at(700, 700).is_black());

    CHECK(kind_of([&] { tile_slices(std::vector<Raster>(17, Raster(224, 224)), o); }) == ErrorKind::Capacity);
    CHECK(kind_of([&] { tile_slices(std::vector<Raster>(2, Raster(100, 100)), o); }) == ErrorKind::Size);
  }

  TEST_CASE("encode layout") {
    const VoxelGrid empty = new_grid({});
    const Raster img = encode(empty);
    CHECK(img.width() == 896);
    CHECK(img.height() == 896);
    CHECK(non_black(img) == 0);

    VoxelGrid g = new_grid({});
    g.set(0, 0, 0, kRed);
    const Raster one = encode(g);
    CHECK(non_black(one) == 4);
    for (int r = 12; r <= 13; ++r)
      for (int c = 12; c <= 13; ++c) CHECK(one.at(r, c) == kRed);
  }

  TEST_CASE("locality: one voxel changes exactly its four pixels") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      const int x = static_cast<int>(rng() % 100), y = static_cast<int>(rng() % 100), z = static_cast<int>(rng() % 16);
      VoxelGrid base = test::random_grid(static_cast<std::uint64_t>(trial), {}, 0.05);
      base.clear(x, y, z);
      VoxelGrid changed = base;
      changed.set(x, y, z, {1, 2, 3});
      const Raster a = encode(base), b = encode(changed);
      std::size_t diff = 0;
      for (int r = 0; r < 896; ++r)
        for (int c = 0; c < 896; ++c) diff += a.at(r, c) == b.at(r, c) ? 0 : 1;
      CHECK(diff == 4);
      const int r0 = 224 * (z / 4) + 2 * (6 + y), c0 = 224 * (z % 4) + 2 * (6 + x);
      CHECK(b.at(r0 + 1, c0 + 1) == Rgb{1, 2, 3});
    }
  }

  TEST_CASE("round trip and occupancy preservation") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const VoxelGrid g = test::random_grid(seed, {}, 0.2);
      const Raster img = encode(g);
      CHECK(non_black(img) == 4 * occupied_count(g));
      CHECK(decode(img, g.dims()) == g);
      CHECK(decode(decode_png(encode_png(img)), g.dims()) == g);
    }
    CHECK(occupied_count(decode(Raster(896, 896), {})) == 0);
  }

  TEST_CASE("smaller grids round trip with a matching slice size") {
    const GridDims dims{37, 53, 5};
    EncodeOptions o;
    o.slice_size = 53;
    o.padded_size = 64;
    o.tile_columns = 3;
    o.tile_rows = 2;
    const VoxelGrid g = test::random_grid(77, dims, 0.3);
    const Raster img = encode(g, o);
    CHECK(img.width() == 3 * 128);
    CHECK(img.height() == 2 * 128);
    CHECK(decode(img, dims, o) == g);
  }

  TEST_CASE("decode refuses lossy input") {
    VoxelGrid g = new_grid({});
    g.set(10, 10, 3, kRed);
    EncodeOptions bil;
    bil.upscale_mode = UpscaleMode::Bilinear;
    const Raster blurred = encode(g, bil);
    CHECK(kind_of([&] { decode(blurred, g.dims(), bil); }) == ErrorKind::LossyMode);
    CHECK(kind_of([&] { decode(blurred, g.dims()); }) == ErrorKind::LossyMode);
    CHECK(kind_of([&] { decode(Raster(800, 896), g.dims()); }) == ErrorKind::Size);
  }

  TEST_CASE("pixel budget and capacity") {
    EncodeOptions o;
    CHECK(o.image_width() * o.image_height() == 802816);
    CHECK(802816 >= 4 * 160000);
    CHECK_NOTHROW(o.validate({100, 100, 16}));
    CHECK(kind_of([&] { o.validate({224, 224, 16}); }) == ErrorKind::Capacity);
    CHECK(kind_of([&] { o.validate({100, 100, 17}); }) == ErrorKind::Capacity);
    CHECK(kind_of([&] { encode(new_grid({224, 224, 16})); }) == ErrorKind::Capacity);
    EncodeOptions bad = o;
    bad.padded_size = 90;
    CHECK(kind_of([&] { bad.validate({}); }) == ErrorKind::Config);
    CHECK(parse_upscale_mode("bilinear") == UpscaleMode::Bilinear);
    CHECK(to_string(UpscaleMode::Replication) == "replication");
    CHECK(kind_of([] { parse_upscale_mode("nearest-ish"); }) == ErrorKind::Config);
  }

  TEST_CASE("PNG encoding is deterministic and lossless") {
    const Raster img = encode(test::random_grid(5));
    const auto a = encode_png(img), b = encode_png(img);
    CHECK(a == b);
    CHECK(decode_png(a) == img);
    CHECK(kind_of([] { decode_png(std::vector<std::uint8_t>{1, 2, 3}); }) == ErrorKind::Format);
  }
}
