#include "frontend.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace wander {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

ojson certificate_json(const Certificate& c) {
  ojson j;
  j["stage"] = c.stage;
  j["all_pass"] = c.all_pass();
  ojson arr = ojson::array();
  for (auto& ch : c.checks) arr.push_back({{"name", ch.name}, {"pass", ch.pass}, {"margin", num(ch.margin)}, {"details", ch.details}});
  j["checks"] = arr;
  return j;
}

std::string hash_of(ojson j) {
  j.erase("generated_at");
  j.erase("report_hash");
  return fnv1a64_hex(j.dump());
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Status::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(Status::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(Status::IoError, "write failed: " + path);
}

}  // namespace

std::string make_report(const Scenario& sc, const ConstructionState& st, const Certificate* summary,
                        const std::vector<std::string>& artifacts, const std::string& generated_at) {
  ojson j;
  j["format"] = "wander-report-1";
  j["scenario"] = ojson::parse(sc.to_json());
  bool pass = !st.failed && st.k == sc.stages && (!summary || summary->all_pass());
  j["status"] = pass ? "ok" : "failed";
  if (st.failed) j["failure"] = {{"status", status_name(st.failure)}, {"check", st.failure_check}, {"detail", st.failure_detail}};
  else if (!pass) j["failure"] = {{"status", status_name(Status::ConstructionFailed)}, {"check", "summary"}, {"detail", ""}};
  j["stages_completed"] = st.k;
  ojson stages = ojson::array();
  ojson eps = ojson::array(), degs = ojson::array();
  for (auto& r : st.stages) {
    ojson s;
    s["stage"] = r.stage;
    s["eps"] = num(r.eps);
    s["degree"] = r.degree;
    s["halvings"] = r.halvings;
    s["ridge"] = num(r.ridge);
    ojson fm = ojson::array();
    for (double m : r.fit_margins) fm.push_back(num(m));
    s["fit_margins"] = fm;
    s["constraint_residual"] = num(r.constraint_residual);
    s["certificate"] = certificate_json(r.certificate);
    stages.push_back(s);
    degs.push_back(r.degree);
  }
  for (double e : st.eps_history) eps.push_back(num(e));
  j["stages"] = stages;
  j["eps_history"] = eps;
  j["degrees"] = degs;
  if (summary) j["summary"] = certificate_json(*summary);
  if (sc.mode == Mode::Oscillating && st.k >= 1) {
    ojson tr = ojson::array();
    for (auto& r : oscillation_trace(st.f, st.k, st.geo))
      tr.push_back({{"n", r.n},
                    {"inward_iterate", r.inward_iterate},
                    {"min_modulus", num(r.min_modulus)},
                    {"max_modulus", num(r.max_modulus)},
                    {"outward_iterate", r.outward_iterate},
                    {"outward_center", {num(r.outward_center.real()), num(r.outward_center.imag())}},
                    {"outward_deviation", num(r.outward_deviation)}});
    j["trace"] = tr;
  }
  j["artifacts"] = artifacts;
  std::string h = hash_of(j);
  j["generated_at"] = generated_at;
  j["report_hash"] = h;
  return j.dump(2) + "\n";
}

std::string report_hash(const std::string& text) {
  try {
    return hash_of(ojson::parse(text));
  } catch (const ojson::exception& e) {
    throw Error(Status::IoError, std::string("report is not valid JSON: ") + e.what());
  }
}

int exit_code(Status s) {
  switch (s) {
    case Status::Ok: return 0;
    case Status::ConfigError:
    case Status::DegenerateRegion:
    case Status::ResolutionTooCoarse:
    case Status::InvalidArgument: return 3;
    case Status::IoError: return 1;
    default: return 2;
  }
}

ConstructOutcome construct_to_dir(const Scenario& sc, const std::string& out_dir) {
  sc.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Status::IoError, "cannot create " + out_dir);
  ConstructionState st = run(sc);
  ConstructOutcome out;
  for (std::size_t i = 0; i < st.history.size(); ++i) {
    std::string name = "f_" + std::to_string(i + 1) + ".poly";
    st.history[i].save((fs::path(out_dir) / name).string());
    out.artifacts.push_back(name);
  }
  std::optional<Certificate> summary;
  if (!st.failed && st.k == sc.stages)
    summary = sc.mode == Mode::Escaping ? summary_escaping(st.f, st.k, st.geo, sc.tol)
                                        : summary_oscillating(st.f, st.k, st.geo, sc.tol);
  out.artifacts.push_back("report.json");
  write_file((fs::path(out_dir) / "report.json").string(),
             make_report(sc, st, summary ? &*summary : nullptr, out.artifacts, utc_now()));
  if (st.failed) {
    out.status = st.failure;
    out.message = std::string(status_name(st.failure)) + " in " + st.failure_check + ": " + st.failure_detail;
  } else if (summary && !summary->all_pass()) {
    out.status = Status::ConstructionFailed;
    for (auto& c : summary->checks)
      if (!c.pass) {
        out.message = "summary check failed: " + c.name + " " + c.details;
        break;
      }
  }
  // geometry failures come from the configuration
  if (st.failed && st.failure_check == "geometry" && out.status != Status::IoError) out.status = Status::ConfigError;
  return out;
}

std::vector<Certificate> certify_final(const Polynomial& f, const Scenario& sc, const StageGeometry& geo,
                                       const Polynomial* previous) {
  const int K = sc.stages;
  std::map<int, std::vector<cq>> tables;
  auto orbit_of = [&](int n, int len) {
    std::vector<cq> t{cq(geo.xs.at(std::size_t(n - 1)))};
    cq z = t[0];
    for (int j = 1; j < len && iterate_wide(f, z, 1); ++j) t.push_back(z);
    return t;
  };
  for (int n = 1; n <= K + 1 && n <= int(geo.xs.size()); ++n)
    tables[n] = orbit_of(n, sc.mode == Mode::Escaping ? n : schedule_N(n));
  if (sc.mode == Mode::Escaping)
    return {certify_escaping(f, K, geo, tables, sc.tol, previous), summary_escaping(f, K, geo, sc.tol)};
  return {certify_oscillating(f, K, geo, tables, sc.tol, previous), summary_oscillating(f, K, geo, sc.tol)};
}

VerifyOutcome verify_artifact(const std::string& poly_path, const Scenario& sc) {
  Polynomial f = Polynomial::load(poly_path);
  fs::path dir = fs::path(poly_path).parent_path();
  fs::path rep = dir / "report.json";
  if (fs::exists(rep)) {
    std::string mode;
    try {
      mode = ojson::parse(read_file(rep.string())).at("scenario").at("mode").get<std::string>();
    } catch (const ojson::exception&) {
      throw Error(Status::ConfigError, "report.json next to the polynomial is unreadable");
    }
    if (mode != mode_name(sc.mode))
      throw Error(Status::ConfigError, "config mode " + std::string(mode_name(sc.mode)) + " does not match the artifact (" + mode + ")");
  }
  StageGeometry geo = prepare_geometry(sc);
  std::optional<Polynomial> prev;
  fs::path pp = dir / ("f_" + std::to_string(sc.stages - 1) + ".poly");
  if (sc.stages >= 2 && fs::exists(pp)) prev = Polynomial::load(pp.string());
  VerifyOutcome out;
  out.certificates = certify_final(f, sc, geo, prev ? &*prev : nullptr);
  out.all_pass = true;
  for (auto& c : out.certificates)
    for (auto& ch : c.checks)
      if (!ch.pass) {
        if (out.all_pass) out.message = "failed: " + ch.name + " " + ch.details;
        out.all_pass = false;
      }
  return out;
}

}  // namespace wander
