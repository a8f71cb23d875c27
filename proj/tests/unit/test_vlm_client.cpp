#include <doctest.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>

#include "stub_server.hpp"
#include "test_support.hpp"
#include "voxrep/error.hpp"
#include "voxrep/image.hpp"
#include "voxrep/predictions.hpp"
#include "voxrep/slice_codec.hpp"
#include "voxrep/vlm_client.hpp"
#include "voxrep/voxg_io.hpp"

using namespace voxrep;
using namespace std::chrono_literals;

namespace {

const char* kListing =
    R"([{"id": "0","color": "dark_green","description": "bowl","number_of_occupied_voxel": 1539,"voxel_coords_center": {"x": 71, "y": 64, "z": 5}}])";

const GridDims kDims{};

ClientSettings fast_settings() {
  ClientSettings s;
  s.retry.base_delay = 20ms;
  s.timeout = 5s;
  return s;
}

PredictionRequest request_for(const test::StubServer& server) {
  PredictionRequest r;
  r.image_png = encode_png(Raster(896, 896));
  r.model_name = "stub-model";
  r.endpoint_url = server.base_url();
  return r;
}

// Writes n scenes whose images are plain black 896x896 PNGs.
DatasetManifest image_manifest(const test::TempDir& dir, int n) {
  std::vector<ManifestEntry> entries;
  const auto png = encode_png(Raster(896, 896));
  for (int i = 0; i < n; ++i) {
    const std::string id = "scene_" + std::to_string(i);
    write_file_bytes(dir / (id + ".png"), png);
    entries.push_back({id, id + ".voxg", id + ".png", {id, kDims, {}}});
  }
  write_manifest(dir / "manifest.jsonl", entries);
  return read_manifest(dir / "manifest.jsonl");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("vlm_client") {
  TEST_CASE("tolerant_parse reads the reference listing") {
    const ParsedAnnotation p = tolerant_parse(kListing, kDims);
    REQUIRE(p.annotation.objects.size() == 1);
    const ObjectRecord& r = p.annotation.objects[0];
    CHECK(r.id == "0");
    CHECK(r.color == "dark_green");
    CHECK(r.description == "bowl");
    CHECK(r.number_of_occupied_voxel == 1539);
    CHECK(r.voxel_coords_center == Coord{71, 64, 5});
    CHECK(p.dropped.empty());
    CHECK(p.clamped.empty());
  }

  TEST_CASE("fences and prose around the array") {
    const std::string wrapped = std::string("Here is the scene:\n```json\n") + kListing + "\n```\nLet me know!";
    CHECK(tolerant_parse(wrapped, kDims).annotation == tolerant_parse(kListing, kDims).annotation);
    const std::string bare = std::string("Objects [see below]: ") + kListing;
    CHECK(tolerant_parse(bare, kDims).annotation.objects.size() == 1);
  }

  TEST_CASE("coercion, clamping and dropping") {
    const std::string text = R"([
      {"id": 0, "color": "red", "description": "cup", "number_of_occupied_voxel": "120", "voxel_coords_center": {"x": "150", "y": 3.0, "z": -2}},
      {"id": "1", "color": "blue", "description": "cone", "voxel_coords_center": {"x": 1, "y": 2, "z": 3}},
      {"id": "2", "color": "grey", "description": "sofa", "number_of_occupied_voxel": 9, "voxel_coords_center": [4, 5, 6]},
      {"id": "2", "color": "pink", "description": "tent", "number_of_occupied_voxel": 9, "voxel_coords_center": [4, 5, 6]},
      "junk",
    ])";
    const ParsedAnnotation p = tolerant_parse(text, kDims);
    REQUIRE(p.annotation.objects.size() == 2);
    CHECK(p.annotation.objects[0].id == "0");
    CHECK(p.annotation.objects[0].number_of_occupied_voxel == 120);
    CHECK(p.annotation.objects[0].voxel_coords_center == Coord{99, 3, 0});
    CHECK(p.annotation.objects[1].voxel_coords_center == Coord{4, 5, 6});
    REQUIRE(p.clamped.size() == 1);
    CHECK(p.clamped[0] == 0);
    REQUIRE(p.dropped.size() == 3);
    CHECK(p.dropped[0].find("number_of_occupied_voxel") != std::string::npos);
    CHECK(p.dropped[1].find("duplicate") != std::string::npos);
  }

  TEST_CASE("x=150 on a 100-wide grid clamps to 99") {
    const ParsedAnnotation p = tolerant_parse(
        R"([{"id":"0","color":"red","description":"cup","number_of_occupied_voxel":5,"voxel_coords_center":{"x":150,"y":1,"z":1}}])",
        kDims);
    CHECK(p.annotation.objects[0].voxel_coords_center.x == 99);
    CHECK(p.clamped == std::vector<std::size_t>{0});
  }

  TEST_CASE("no array is a parse error; an empty array is not") {
    try {
      tolerant_parse("I could not find any objects in this image.", kDims);
      FAIL("parsed prose");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(e.detail() == "no JSON array found");
    }
    CHECK_THROWS_AS(tolerant_parse("[{\"id\": \"0\"", kDims), Error);
    const ParsedAnnotation none = tolerant_parse(R"([{"id":"0"}])", kDims);
    CHECK(none.annotation.objects.empty());
    CHECK(none.dropped.size() == 1);
    CHECK(tolerant_parse("[]", kDims).annotation.objects.empty());
  }

  TEST_CASE("tolerant_parse is idempotent on its serialized output") {
    const std::vector<std::string> inputs{
        kListing,
        R"(```
[{"id": 3, "color": "red", "description": "cup", "number_of_occupied_voxel": "12.5", "voxel_coords_center": [500, -3, 7.4]},])",
        R"([{"id":"a","color":"blue","description":"desk","number_of_occupied_voxel":1,"voxel_coords_center":{"x":0,"y":0,"z":0}}, {"id":"b"}])"};
    for (const auto& in : inputs) {
      const auto once = tolerant_parse(in, kDims).annotation;
      const auto twice = tolerant_parse(objects_to_json(once.objects).dump(), kDims);
      CHECK(twice.annotation == once);
      CHECK(twice.dropped.empty());
      CHECK(twice.clamped.empty());
    }
  }

  TEST_CASE("request body and response extraction") {
    PredictionRequest r;
    r.image_png = {1, 2, 3, 4};
    r.model_name = "m";
    r.endpoint_url = "http://x";
    r.temperature = 0.3;
    r.max_output_tokens = 77;
    const auto body = nlohmann::json::parse(build_request_body(r));
    CHECK(body["model"] == "m");
    CHECK(body["temperature"] == 0.3);
    CHECK(body["max_tokens"] == 77);
    const auto& content = body["messages"][0]["content"];
    CHECK(content[0]["type"] == "text");
    CHECK(content[0]["text"] == default_prompt());
    CHECK(content[1]["type"] == "image_url");
    CHECK(content[1]["image_url"]["url"] == "data:image/png;base64,AQIDBA==");

    CHECK(extract_completion_text(test::chat_response("hello")) == "hello");
    CHECK_THROWS_AS(extract_completion_text("{}"), Error);
    CHECK_THROWS_AS(extract_completion_text("not json"), Error);
    CHECK(base64_encode(std::vector<std::uint8_t>{'M', 'a'}) == "TWE=");
    CHECK(base64_encode(std::vector<std::uint8_t>{}) == "");
  }

  TEST_CASE("request validation") {
    PredictionRequest r;
    r.model_name = "m";
    r.endpoint_url = "http://x";
    r.image_png = encode_png(Raster(896, 896));
    CHECK_NOTHROW(r.validate());
    r.image_png = encode_png(Raster(224, 224));
    CHECK_THROWS_AS(r.validate(), Error);
    r.image_png = encode_png(Raster(896, 896));
    r.temperature = -1;
    CHECK_THROWS_AS(r.validate(), Error);
  }

  TEST_CASE("retry delays") {
    RetryPolicy p;
    CHECK(p.delay_before(1, 0.5) == 0ms);
    CHECK(p.delay_before(2, 0.5) == 1000ms);
    CHECK(p.delay_before(3, 0.5) == 2000ms);
    CHECK(p.delay_before(5, 0.5) == 8000ms);
    CHECK(p.delay_before(2, 0.0) == 800ms);
    CHECK(p.delay_before(2, 1.0) == 1200ms);
  }

  TEST_CASE("predict against a loopback stub") {
    test::StubServer server([](const httplib::Request&, httplib::Response& res) {
      res.set_content(test::chat_response(kListing), "application/json");
    });
    ClientSettings settings = fast_settings();
    settings.api_key = "sk-test-secret";
    const PredictionResult r = predict(request_for(server), kDims, settings);
    REQUIRE(r.parsed());
    CHECK(r.attempts == 1);
    CHECK(std::get<ParsedAnnotation>(r.outcome).annotation.objects ==
          tolerant_parse(kListing, kDims).annotation.objects);
    CHECK(server.auth_headers().at(0) == "Bearer sk-test-secret");
    CHECK(prediction_line(r).find("sk-test-secret") == std::string::npos);
  }

  TEST_CASE("429 twice then success") {
    std::atomic<int> calls{0};
    test::StubServer server([&](const httplib::Request&, httplib::Response& res) {
      if (++calls <= 2) {
        res.status = 429;
        return;
      }
      res.set_content(test::chat_response(kListing), "application/json");
    });
    const auto t0 = std::chrono::steady_clock::now();
    const PredictionResult r = predict(request_for(server), kDims, fast_settings());
    const auto waited = std::chrono::steady_clock::now() - t0;
    CHECK(r.parsed());
    CHECK(r.attempts == 3);
    CHECK(server.request_count() == 3);
    // Delays of 20 ms and 40 ms, each at least 80% after jitter.
    CHECK(waited >= 48ms);
  }

  TEST_CASE("retry limits and non-retryable statuses") {
    std::atomic<int> calls{0};
    test::StubServer always503([&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 503;
    });
    ClientSettings s = fast_settings();
    s.retry.base_delay = 1ms;
    const PredictionResult r = predict(request_for(always503), kDims, s);
    REQUIRE(std::holds_alternative<TransportFailure>(r.outcome));
    CHECK(std::get<TransportFailure>(r.outcome).status == 503);
    CHECK(r.attempts == 5);
    CHECK(calls == 5);

    test::StubServer forbidden([](const httplib::Request&, httplib::Response& res) { res.status = 403; });
    const PredictionResult f = predict(request_for(forbidden), kDims, s);
    CHECK(f.attempts == 1);
    CHECK(forbidden.request_count() == 1);
    CHECK(std::get<TransportFailure>(f.outcome).status == 403);

    PredictionRequest nowhere;
    nowhere.image_png = encode_png(Raster(896, 896));
    nowhere.model_name = "m";
    nowhere.endpoint_url = "http://127.0.0.1:1/v1";
    s.retry.max_attempts = 2;
    const PredictionResult unreachable = predict(nowhere, kDims, s);
    CHECK(std::get<TransportFailure>(unreachable.outcome).status == 0);
    CHECK(unreachable.attempts == 2);
  }

  TEST_CASE("prose reply becomes a ParseFailure") {
    test::StubServer server([](const httplib::Request&, httplib::Response& res) {
      res.set_content(test::chat_response("Sorry, I cannot help with that."), "application/json");
    });
    const PredictionResult r = predict(request_for(server), kDims, fast_settings());
    REQUIRE(std::holds_alternative<ParseFailure>(r.outcome));
    CHECK(std::get<ParseFailure>(r.outcome).reason == "no JSON array found");
    CHECK(r.raw_text == "Sorry, I cannot help with that.");
    CHECK(r.objects_or_empty().empty());
  }

  TEST_CASE("predict_batch ordering, isolation and parallelism") {
    test::TempDir dir;
    const DatasetManifest m = image_manifest(dir, 3);
    test::StubServer server([](const httplib::Request& req, httplib::Response& res) {
      // Deterministic reply derived from the request, with jittered service time.
      const auto h = std::hash<std::string>{}(req.body);
      std::this_thread::sleep_for(std::chrono::milliseconds(h % 15));
      res.set_content(test::chat_response(kListing), "application/json");
    });
    const auto batch = predict_batch(m, request_for(server), fast_settings(), 2);
    REQUIRE(batch.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(batch[i].scene_id == m.entries[i].scene_id);
      CHECK(batch[i].parsed());
    }

    std::filesystem::remove(dir / "scene_1.png");
    const auto partial = predict_batch(m, request_for(server), fast_settings(), 2);
    CHECK(partial[0].parsed());
    CHECK(std::holds_alternative<TransportFailure>(partial[1].outcome));
    CHECK(partial[2].parsed());
  }

  TEST_CASE("predictions file is identical for parallelism 1 and 8") {
    test::TempDir dir;
    const DatasetManifest m = image_manifest(dir, 12);
    test::StubServer server([](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(5ms);
      res.set_content(test::chat_response(kListing), "application/json");
    });
    write_predictions(dir / "p1.jsonl", predict_batch(m, request_for(server), fast_settings(), 1));
    write_predictions(dir / "p8.jsonl", predict_batch(m, request_for(server), fast_settings(), 8));
    CHECK(slurp(dir / "p1.jsonl") == slurp(dir / "p8.jsonl"));
    CHECK(server.max_in_flight() <= 8);
    CHECK(server.max_in_flight() >= 2);
  }

  TEST_CASE("prediction lines round trip every outcome") {
    PredictionResult parsed;
    parsed.scene_id = "s0";
    parsed.attempts = 2;
    parsed.outcome = tolerant_parse(kListing, kDims);
    parsed.raw_text = kListing;
    PredictionResult bad;
    bad.scene_id = "s1";
    bad.outcome = ParseFailure{"no JSON array found"};
    PredictionResult down;
    down.scene_id = "s2";
    down.outcome = TransportFailure{503, "HTTP 503"};
    for (const auto& r : {parsed, bad, down}) {
      const PredictionResult back = parse_prediction_line(prediction_line(r));
      CHECK(back.scene_id == r.scene_id);
      CHECK(back.attempts == r.attempts);
      CHECK(back.outcome.index() == r.outcome.index());
      CHECK(back.objects_or_empty() == r.objects_or_empty());
      CHECK(prediction_line(back) == prediction_line(r));
    }
    CHECK_THROWS_AS(parse_prediction_line(R"({"scene_id":"x","outcome":"maybe"})"), Error);
  }
}
