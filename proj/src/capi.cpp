#include "wander/wander.h"

#include <new>

#include "frontend.hpp"
#include "render.hpp"

struct wander_poly {
  wander::Polynomial p;
};

struct wander_scenario {
  wander::Scenario s;
};

namespace {

thread_local std::string g_error;

template <class F>
wander_status guard(F&& body) {
  try {
    g_error.clear();
    body();
    return WANDER_OK;
  } catch (const wander::Error& e) {
    g_error = e.what();
    return static_cast<wander_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return WANDER_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_error = e.what();
    return WANDER_INTERNAL_ERROR;
  } catch (...) {
    g_error = "unknown error";
    return WANDER_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw wander::Error(wander::Status::InvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* wander_last_error(void) { return g_error.c_str(); }

const char* wander_status_name(wander_status s) {
  if (s == WANDER_INTERNAL_ERROR) return "InternalError";
  return wander::status_name(static_cast<wander::Status>(s));
}

int wander_exit_code(wander_status s) {
  if (s == WANDER_INTERNAL_ERROR) return 2;
  return wander::exit_code(static_cast<wander::Status>(s));
}

wander_status wander_poly_load(const char* path, wander_poly** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new wander_poly{wander::Polynomial::load(path)};
  });
}

wander_status wander_poly_from_coeffs(const double* re, const double* im, size_t count, wander_poly** out) {
  return guard([&] {
    need(re, "re");
    need(out, "out");
    if (count == 0) throw wander::Error(wander::Status::InvalidArgument, "no coefficients");
    std::vector<wander::cd> c(count);
    for (size_t i = 0; i < count; ++i) c[i] = {re[i], im ? im[i] : 0.0};
    *out = new wander_poly{wander::Polynomial::from_complex(c)};
  });
}

wander_status wander_poly_save(const wander_poly* p, const char* path) {
  return guard([&] {
    need(p, "poly");
    need(path, "path");
    p->p.save(path);
  });
}

wander_status wander_poly_degree(const wander_poly* p, int* degree) {
  return guard([&] {
    need(p, "poly");
    need(degree, "degree");
    *degree = p->p.degree();
  });
}

wander_status wander_poly_eval(const wander_poly* p, double re, double im, double* out_re, double* out_im) {
  return guard([&] {
    need(p, "poly");
    need(out_re, "out_re");
    need(out_im, "out_im");
    wander::cd v = p->p.eval(wander::cd(re, im));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

void wander_poly_free(wander_poly* p) { delete p; }

wander_status wander_scenario_load(const char* path, wander_scenario** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new wander_scenario{wander::Scenario::load(path)};
  });
}

wander_status wander_scenario_parse(const char* json_text, wander_scenario** out) {
  return guard([&] {
    need(json_text, "json");
    need(out, "out");
    *out = new wander_scenario{wander::Scenario::parse(json_text)};
  });
}

wander_status wander_scenario_stages(const wander_scenario* s, int* stages) {
  return guard([&] {
    need(s, "scenario");
    need(stages, "stages");
    *stages = s->s.stages;
  });
}

void wander_scenario_free(wander_scenario* s) { delete s; }

wander_status wander_construct(const wander_scenario* s, const char* out_dir) {
  return guard([&] {
    need(s, "scenario");
    need(out_dir, "out_dir");
    auto r = wander::construct_to_dir(s->s, out_dir);
    if (r.status != wander::Status::Ok) throw wander::Error(r.status, r.message);
  });
}

wander_status wander_verify(const char* poly_path, const wander_scenario* s, int* all_pass) {
  return guard([&] {
    need(poly_path, "poly_path");
    need(s, "scenario");
    need(all_pass, "all_pass");
    auto r = wander::verify_artifact(poly_path, s->s);
    *all_pass = r.all_pass ? 1 : 0;
    g_error = r.message;
  });
}

wander_status wander_render_figure(const wander_poly* p, const wander_scenario* s, const char* out_path) {
  return guard([&] {
    need(p, "poly");
    need(s, "scenario");
    need(out_path, "out_path");
    auto geo = wander::prepare_geometry(s->s);
    wander::write_ppm(wander::render_figure(p->p, s->s, geo), out_path);
  });
}

wander_status wander_render_basin(const wander_poly* p, const wander_scenario* s, int width, const char* out_path) {
  return guard([&] {
    need(p, "poly");
    need(s, "scenario");
    need(out_path, "out_path");
    if (width < 1) throw wander::Error(wander::Status::InvalidArgument, "width must be positive");
    auto vp = wander::default_viewport(s->s.mode, s->s.stages);
    int height = std::max(1, int(std::lround(width * (vp.y1 - vp.y0) / (vp.x1 - vp.x0))));
    wander::cd p0 = s->s.mode == wander::Mode::Escaping ? wander::cd(0.0) : wander::cd(1.0);
    wander::write_ppm(wander::render_basin(p->p, vp, p0, width, height), out_path);
  });
}

wander_status wander_render_basin_viewport(const wander_poly* p, double x0, double x1, double y0, double y1, int width,
                                           int height, double p0_re, double p0_im, const char* out_path) {
  return guard([&] {
    need(p, "poly");
    need(out_path, "out_path");
    if (!(x1 > x0 && y1 > y0)) throw wander::Error(wander::Status::InvalidArgument, "empty viewport");
    wander::write_ppm(wander::render_basin(p->p, {x0, x1, y0, y1}, {p0_re, p0_im}, width, height), out_path);
  });
}

}  // extern "C"
