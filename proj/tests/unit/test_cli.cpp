#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "pagelayout/channel_maps.hpp"

using namespace pagelayout;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pagelayout_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_file = "/dev/null") {
  const std::string cmd = std::string(PAGELAYOUT_CLI) + " " + args + " > " + stdout_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

void write_bytes(const std::string& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("loss of maps against themselves is zero") {
  TempDir dir;
  REQUIRE(run("synth --seed 3 --height 240 --width 320 --out " + dir / "p.json" + " --maps " + dir / "a.pncm") == 0);
  REQUIRE(run("loss " + dir / "a.pncm" + " " + dir / "a.pncm" + " --out " + dir / "loss.json") == 0);
  const auto j = read_json(dir / "loss.json");
  CHECK(j["total"].get<double>() == 0.0);
  CHECK(j["lambda"].get<double>() == 0.01);
}

TEST_CASE("all-zero maps give an empty layout") {
  TempDir dir;
  write_bytes(dir / "zero.pncm", write_maps(ChannelMaps::zeros({40, 60})));
  REQUIRE(run("detect --maps " + dir / "zero.pncm" + " --out " + dir / "zero.json") == 0);
  const auto j = read_json(dir / "zero.json");
  CHECK(j["blocks"].empty());
  CHECK(j["page_id"] == "zero");
}

TEST_CASE("usage errors exit with 1") {
  TempDir dir;
  CHECK(run("detect --no-such-flag") == 1);
  CHECK(run("") == 1);
  CHECK(run("eval --pred " + dir / "missing.json") == 1);
  std::ofstream(dir / "junk.pncm") << "junk";
  CHECK(run("detect --maps " + dir / "junk.pncm" + " --out " + dir / "x.json") == 1);
}

TEST_CASE("synth, detect and eval round trip") {
  TempDir dir;
  fs::create_directories(dir / "gt");
  fs::create_directories(dir / "maps");
  for (int seed : {1, 2, 3}) {
    const std::string s = std::to_string(seed);
    REQUIRE(run("synth --seed " + s + " --height 480 --width 640 --out " + dir / ("gt/p" + s + ".json") +
                " --maps " + dir / ("maps/p" + s + ".pncm")) == 0);
  }
  REQUIRE(run("detect --maps " + dir / "maps" + " --out " + dir / "pred" + " --jobs 2") == 0);
  REQUIRE(run("eval --pred " + dir / "pred" + " --gt " + dir / "gt" + " --report " + dir / "report.json") == 0);
  const auto j = read_json(dir / "report.json");
  CHECK(j["per_page"].size() == 3);
  CHECK(j["aggregate"]["baseline"]["f"].get<double>() >= 0.99);
  CHECK(j["aggregate"]["line"]["f"].get<double>() >= 0.99);
}

TEST_CASE("report-scale prints the estimate") {
  TempDir dir;
  REQUIRE(run("synth --seed 4 --height 480 --width 640 --out " + dir / "p.json" + " --maps " + dir / "p.pncm") == 0);
  REQUIRE(run("detect --maps " + dir / "p.pncm" + " --out " + dir / "o.json" + " --report-scale", dir / "s.json") == 0);
  const auto j = read_json(dir / "s.json");
  CHECK(j["scale_factor"].get<double>() > 0.0);
  CHECK(j["target_ascender"].get<double>() == 12.0);
}
