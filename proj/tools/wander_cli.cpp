// command-line front end; talks to the library only through the C interface
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "wander/wander.h"

namespace {

int fail(wander_status s, const char* what) {
  std::fprintf(stderr, "%s: %s: %s\n", what, wander_status_name(s), wander_last_error());
  return wander_exit_code(s);
}

struct Scenario {
  wander_scenario* h = nullptr;
  ~Scenario() { wander_scenario_free(h); }
};

struct Poly {
  wander_poly* h = nullptr;
  ~Poly() { wander_poly_free(h); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wandering-domain polynomial construction"};
  app.require_subcommand(1);

  std::string config, out_dir, poly, out_path, kind = "figure";
  int width = 800;

  auto* construct = app.add_subcommand("construct", "run the stage construction and write checkpoints + report.json");
  construct->add_option("--config", config, "scenario JSON")->required();
  construct->add_option("--out", out_dir, "output directory")->required();

  auto* verify = app.add_subcommand("verify", "re-run every check against a stored polynomial");
  verify->add_option("--poly", poly, ".poly file")->required();
  verify->add_option("--config", config, "scenario JSON")->required();

  auto* render = app.add_subcommand("render", "draw an orbit figure or a basin image (P6)");
  render->add_option("--poly", poly, ".poly file")->required();
  render->add_option("--config", config, "scenario JSON")->required();
  render->add_option("--kind", kind, "figure or basin")->check(CLI::IsMember({"figure", "basin"}));
  render->add_option("--out", out_path, "output .ppm")->required();
  render->add_option("--width", width, "basin width in pixels")->check(CLI::Range(16, 8192));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  Scenario sc;
  if (wander_status s = wander_scenario_load(config.c_str(), &sc.h); s != WANDER_OK) return fail(s, "config");

  if (*construct) {
    wander_status s = wander_construct(sc.h, out_dir.c_str());
    if (s != WANDER_OK) return fail(s, "construct");
    std::printf("construct: all certificates pass; artifacts in %s\n", out_dir.c_str());
    return 0;
  }
  if (*verify) {
    int ok = 0;
    wander_status s = wander_verify(poly.c_str(), sc.h, &ok);
    if (s != WANDER_OK) return fail(s, "verify");
    if (!ok) {
      std::fprintf(stderr, "verify: %s\n", wander_last_error());
      return 2;
    }
    std::printf("verify: all checks pass\n");
    return 0;
  }
  Poly p;
  if (wander_status s = wander_poly_load(poly.c_str(), &p.h); s != WANDER_OK) return fail(s, "poly");
  wander_status s = kind == "figure" ? wander_render_figure(p.h, sc.h, out_path.c_str())
                                     : wander_render_basin(p.h, sc.h, width, out_path.c_str());
  if (s != WANDER_OK) return fail(s, "render");
  std::printf("render: wrote %s\n", out_path.c_str());
  return 0;
}
