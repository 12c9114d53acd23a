#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "frontend.hpp"
#include "json.hpp"
#include "render.hpp"

using namespace wander;
namespace fs = std::filesystem;

namespace {

const char* kSquare = R"({"type": "polygon", "vertices": [[0,0],[0.1,0],[0.1,0.1],[0,0.1]]})";

std::string config(const std::string& mode, int K, const std::string& extra = "") {
  return std::string(R"({"mode": ")") + mode + R"(", "region": )" + kSquare + R"(, "stages": )" + std::to_string(K) + extra + "}";
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("wander_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

int cli(const std::string& args) {
  std::string cmd = std::string(WANDER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("scenario parsing rejects bad configs") {
  auto code = [](const std::string& text) {
    try {
      Scenario::parse(text).validate();
      return Status::Ok;
    } catch (const Error& e) {
      return e.code();
    }
  };
  CHECK(code(config("escaping", 2)) == Status::Ok);
  CHECK(code(config("escaping", 0)) == Status::ConfigError);
  CHECK(code(config("sideways", 2)) == Status::ConfigError);
  CHECK(code(config("escaping", 2, R"(, "bogus": 1)")) == Status::ConfigError);
  CHECK(code(config("escaping", 2, R"(, "sequence_length": 3)")) == Status::ConfigError);
  CHECK(code(config("escaping", 2, R"(, "eps_scale": 1.5)")) == Status::ConfigError);
  CHECK(code("{not json") == Status::ConfigError);
  auto sc = Scenario::parse(config("oscillating", 3));
  CHECK(sc.sequence_length == 5);
  CHECK(sc.mode == Mode::Oscillating);
  // canonical echo parses back to the same echo
  CHECK(Scenario::parse(sc.to_json()).to_json() == sc.to_json());
}

TEST_CASE("exit codes") {
  CHECK(exit_code(Status::Ok) == 0);
  CHECK(exit_code(Status::ConfigError) == 3);
  CHECK(exit_code(Status::ResolutionTooCoarse) == 3);
  CHECK(exit_code(Status::IoError) == 1);
  CHECK(exit_code(Status::DegreeCapExceeded) == 2);
  CHECK(exit_code(Status::ConstructionFailed) == 2);
}

TEST_CASE("fnv1a64") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("CLI: zero stages is a config error") {
  auto d = scratch("k0");
  spit(d / "c.json", config("escaping", 0));
  CHECK(cli("construct --config " + (d / "c.json").string() + " --out " + (d / "out").string()) == 3);
  CHECK(cli("construct --config " + (d / "missing.json").string() + " --out " + (d / "out").string()) != 0);
  CHECK(cli("frobnicate") == 3);
}

TEST_CASE("CLI: degree cap failure is reported") {
  auto d = scratch("cap");
  spit(d / "c.json", config("escaping", 1, R"(, "degree_cap": 4)"));
  CHECK(cli("construct --config " + (d / "c.json").string() + " --out " + (d / "out").string()) == 2);
  auto rep = nlohmann::json::parse(slurp(d / "out" / "report.json"));
  CHECK(rep["status"] == "failed");
  CHECK(rep["failure"]["status"] == "DegreeCapExceeded");
  CHECK(rep["stages_completed"] == 0);
}

TEST_CASE("construct, hash determinism, verify and tamper") {
  auto d = scratch("det");
  auto sc = Scenario::parse(config("escaping", 1, R"(, "seed": 7)"));
  auto a = construct_to_dir(sc, (d / "a").string());
  auto b = construct_to_dir(sc, (d / "b").string());
  REQUIRE(a.status == Status::Ok);
  REQUIRE(b.status == Status::Ok);
  auto ra = nlohmann::json::parse(slurp(d / "a" / "report.json"));
  auto rb = nlohmann::json::parse(slurp(d / "b" / "report.json"));
  CHECK(ra["report_hash"] == rb["report_hash"]);
  CHECK(report_hash(slurp(d / "a" / "report.json")) == ra["report_hash"].get<std::string>());
  CHECK(slurp(d / "a" / "f_1.poly") == slurp(d / "b" / "f_1.poly"));

  auto v = verify_artifact((d / "a" / "f_1.poly").string(), sc);
  CHECK(v.all_pass);
  spit(d / "c.json", sc.to_json());
  CHECK(cli("verify --poly " + (d / "a" / "f_1.poly").string() + " --config " + (d / "c.json").string()) == 0);

  // perturb the constant coefficient: the fixed point at 0 breaks
  auto p = Polynomial::from_text(slurp(d / "a" / "f_1.poly"));
  auto c = p.coeffs();
  c[0] = c[0] + cq(1e-3);
  spit(d / "a" / "tampered.poly", Polynomial(c).to_text());
  fs::copy_file(d / "a" / "report.json", d / "a" / "report.json.bak");
  CHECK_FALSE(verify_artifact((d / "a" / "tampered.poly").string(), sc).all_pass);
  CHECK(cli("verify --poly " + (d / "a" / "tampered.poly").string() + " --config " + (d / "c.json").string()) == 2);

  // a config of the other mode against this artifact
  spit(d / "osc.json", config("oscillating", 1));
  CHECK(cli("verify --poly " + (d / "a" / "f_1.poly").string() + " --config " + (d / "osc.json").string()) == 3);
}

TEST_CASE("basins") {
  // z/2: everything converges to 0
  auto half = render_basin(Polynomial::affine(0.5, 0.0), {-2, 2, -2, 2}, 0.0, 64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) CHECK(classify(Polynomial::affine(0.5, 0.0), cd(-2 + 4.0 * x / 63, 0), 0.0) == Orbit::Converges);
  CHECK(half.width == 64);
  // z^2: converges inside the unit disk, escapes outside
  auto sq = Polynomial::from_complex({0.0, 0.0, 1.0});
  CHECK(classify(sq, cd(0.5, 0.3), 0.0) == Orbit::Converges);
  CHECK(classify(sq, cd(1.2, 0.0), 0.0) == Orbit::Escapes);
  auto img = render_basin(sq, {-2, 2, -2, 2}, 0.0, 101, 101);
  CHECK(img.at(50, 50) != img.at(0, 0));
  CHECK(img.at(50, 50) == img.at(55, 45));
  CHECK(img.at(0, 0) == img.at(100, 100));
}

TEST_CASE("PPM round trip and components") {
  auto d = scratch("ppm");
  Image img(20, 10, palette::background);
  for (int x = 2; x < 6; ++x) img.set(x, 3, palette::curve);
  img.set(15, 8, palette::curve);
  write_ppm(img, (d / "x.ppm").string());
  auto back = read_ppm((d / "x.ppm").string());
  CHECK(back.width == 20);
  CHECK(back.height == 10);
  CHECK(back.rgb == img.rgb);
  auto comps = color_components(img, palette::curve, {0, 20, 0, 10});
  CHECK(comps.size() == 2);
  CHECK_THROWS_AS(read_ppm((d / "nope.ppm").string()), Error);
}

TEST_CASE("figure of the identity shows omega only") {
  auto sc = Scenario::parse(config("escaping", 1));
  auto geo = prepare_geometry(sc);
  auto img = render_figure(Polynomial::affine(1.0, 0.0), sc, geo, 40);
  auto vp = default_viewport(Mode::Escaping, 1);
  auto comps = color_components(img, palette::curve, vp);
  REQUIRE(comps.size() == 1);
  CHECK(std::abs(comps[0].cx - 3.0) < 0.5);
  CHECK(std::abs(comps[0].cy) < 0.5);
}
