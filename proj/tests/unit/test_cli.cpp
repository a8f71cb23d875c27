#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "test_support.hpp"
#include "voxrep/manifest.hpp"
#include "voxrep/predictions.hpp"
#include "voxrep/report.hpp"
#include "voxrep/voxg_io.hpp"

using namespace voxrep;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("synth smoke and determinism") {
    test::TempDir a, b;
    const Outcome r = run({"synth", "--scenes", "5", "--seed", "7", "--out", a.path().string()});
    REQUIRE(r.code == 0);
    for (int i = 0; i < 5; ++i) {
      CHECK(std::filesystem::exists(a / ("scene_00000" + std::to_string(i) + ".voxg")));
      CHECK(std::filesystem::exists(a / ("scene_00000" + std::to_string(i) + ".png")));
    }
    CHECK(line_count(slurp(a / "manifest.jsonl")) == 5);
    REQUIRE(run({"synth", "--scenes", "5", "--seed", "7", "--jobs", "3", "--out", b.path().string()}).code == 0);
    CHECK(slurp(a / "manifest.jsonl") == slurp(b / "manifest.jsonl"));
    CHECK(slurp(a / "scene_000004.voxg") == slurp(b / "scene_000004.voxg"));
  }

  TEST_CASE("encode then decode is byte-identical") {
    test::TempDir d;
    VoxelGrid g = test::random_grid(12, {}, 0.15);
    write_voxg(d / "x.voxg", g);
    REQUIRE(run({"encode", (d / "x.voxg").string(), "--out", (d / "x.png").string()}).code == 0);
    REQUIRE(run({"decode", (d / "x.png").string(), "--dims", "100x100x16", "--out", (d / "y.voxg").string()}).code == 0);
    CHECK(slurp(d / "x.voxg") == slurp(d / "y.voxg"));
  }

  TEST_CASE("eval with ground truth as predictions") {
    test::TempDir d;
    REQUIRE(run({"synth", "--scenes", "4", "--seed", "3", "--out", d.path().string()}).code == 0);
    const DatasetManifest m = read_manifest(d / "manifest.jsonl");
    std::vector<PredictionResult> preds;
    for (const auto& e : m.entries) {
      PredictionResult p;
      p.scene_id = e.scene_id;
      p.outcome = ParsedAnnotation{e.annotation, {}, {}};
      preds.push_back(p);
    }
    write_predictions(d / "p.jsonl", preds);
    const Outcome r = run({"eval", "--pred", (d / "p.jsonl").string(), "--manifest", (d / "manifest.jsonl").string(),
                           "--out", (d / "r.csv").string(), "--step", "0"});
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "r.csv").find("\n0,0.0000,1.00,1.00,0.00,0.00\n") != std::string::npos);
  }

  TEST_CASE("extract, fit-shapes, report and inspect") {
    test::TempDir d;
    REQUIRE(run({"synth", "--scenes", "6", "--seed", "5", "--out", d.path().string()}).code == 0);
    const std::string manifest = (d / "manifest.jsonl").string();
    REQUIRE(run({"fit-shapes", "--manifest", manifest, "--out", (d / "shape.json").string()}).code == 0);
    REQUIRE(run({"extract", "--manifest", manifest, "--shape-model", (d / "shape.json").string(), "--out",
                 (d / "base.jsonl").string(), "--jobs", "2"})
                .code == 0);
    CHECK(line_count(slurp(d / "base.jsonl")) == 6);
    REQUIRE(run({"eval", "--pred", (d / "base.jsonl").string(), "--manifest", manifest, "--out", (d / "a.csv").string(),
                 "--step", "100"})
                .code == 0);
    REQUIRE(run({"eval", "--pred", (d / "base.jsonl").string(), "--manifest", manifest, "--out", (d / "b.csv").string(),
                 "--step", "200", "--json", (d / "b.json").string()})
                .code == 0);
    CHECK(nlohmann::json::parse(slurp(d / "b.json")).contains("matching"));
    const Outcome rep = run({"report", "--runs", (d / "a.csv").string(), (d / "b.csv").string(), "--out",
                             (d / "all.csv").string(), "--charts", (d / "charts").string()});
    REQUIRE(rep.code == 0);
    CHECK(parse_report_table(slurp(d / "all.csv")).size() == 2);
    CHECK(std::filesystem::exists(d / "charts/avg_mismatch_per_example.svg"));

    const Outcome single = run({"extract", "--grid", (d / "scene_000000.voxg").string()});
    REQUIRE(single.code == 0);
    CHECK(nlohmann::json::parse(single.out).is_array());

    const Outcome ins = run({"inspect", (d / "scene_000000.voxg").string()});
    REQUIRE(ins.code == 0);
    CHECK(ins.out.find("z=0 (") != std::string::npos);
    CHECK(ins.out.find('#') != std::string::npos);
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"synth", "--bogus-flag"}).code == 2);
    CHECK(run({"synth", "--out", "/tmp/x", "--upscale-mode", "cubic"}).code == 2);
    test::TempDir d;
    write_voxg(d / "big.voxg", new_grid({224, 224, 16}));
    const Outcome cap = run({"encode", (d / "big.voxg").string(), "--out", (d / "big.png").string()});
    CHECK(cap.code == 1);
    CHECK(cap.err.find("capacity") != std::string::npos);
    std::ofstream(d / "junk.png") << "not a png";
    CHECK(run({"decode", (d / "junk.png").string(), "--out", (d / "y.voxg").string()}).code == 1);
    CHECK(run({"eval", "--pred", (d / "none.jsonl").string(), "--manifest", (d / "none.jsonl").string(), "--out",
               (d / "r.csv").string()})
              .code == 1);
  }

  TEST_CASE("help documents flags and defaults") {
    for (const std::string sub : {"synth", "encode", "decode", "extract", "fit-shapes", "predict", "eval", "report", "inspect"}) {
      CAPTURE(sub);
      const Outcome r = run({sub, "--help"});
      CHECK(r.code == 0);
      CHECK(r.out.find("--") != std::string::npos);
    }
    const Outcome s = run({"synth", "--help"});
    CHECK(s.out.find("--clearance") != std::string::npos);
    CHECK(s.out.find("50") != std::string::npos);
    CHECK(s.out.find("100x100x16") != std::string::npos);
  }

  TEST_CASE("config file values yield to flags, and the echo redacts the key") {
    test::TempDir d;
    std::ofstream(d / "cfg.json") << R"({"synth": {"scenes": 2, "seed": 11, "clearance": 3}})";
    ::setenv("VOXREP_API_KEY", "sk-very-secret", 1);
    const Outcome r = run({"--config", (d / "cfg.json").string(), "-v", "synth", "--scenes", "3", "--out",
                           (d / "out").string()});
    ::unsetenv("VOXREP_API_KEY");
    REQUIRE(r.code == 0);
    CHECK(line_count(slurp(d / "out/manifest.jsonl")) == 3);
    CHECK(r.err.find("effective config") != std::string::npos);
    CHECK(r.err.find("\"clearance\":\"3\"") != std::string::npos);
    CHECK(r.err.find("\"seed\":\"11\"") != std::string::npos);
    CHECK(r.err.find("sk-very-secret") == std::string::npos);

    std::ofstream(d / "bad.json") << "{ nope";
    CHECK(run({"--config", (d / "bad.json").string(), "synth", "--out", (d / "o2").string()}).code == 2);
  }
}
