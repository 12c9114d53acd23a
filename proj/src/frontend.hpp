#pragma once

#include <string>
#include <vector>

#include "construct.hpp"

namespace wander {

// run report: scenario echo, per-stage certificates, eps history, degrees,
// oscillation trace and artifact names.  The hash covers everything except
// the generated_at timestamp.
std::string make_report(const Scenario& sc, const ConstructionState& st, const Certificate* summary,
                        const std::vector<std::string>& artifacts, const std::string& generated_at);
std::string report_hash(const std::string& report_text);  // recomputed from a report file's text
std::string fnv1a64_hex(const std::string& bytes);

struct ConstructOutcome {
  Status status = Status::Ok;  // Ok iff every certificate passed
  std::string message;
  std::vector<std::string> artifacts;
};
ConstructOutcome construct_to_dir(const Scenario& sc, const std::string& out_dir);

struct VerifyOutcome {
  bool all_pass = false;
  std::vector<Certificate> certificates;  // stage K, then the omega summary
  std::string message;
};
// re-derives the geometry from the scenario and re-runs every check on the
// stored polynomial; a report.json next to the polynomial whose mode differs
// from the scenario raises ConfigError
VerifyOutcome verify_artifact(const std::string& poly_path, const Scenario& sc);

// stage-K checks run from scratch against f alone
std::vector<Certificate> certify_final(const Polynomial& f, const Scenario& sc, const StageGeometry& geo,
                                       const Polynomial* previous);

// process exit code for a status: 0 ok, 2 construction failure, 3 config error, 1 I/O
int exit_code(Status s);

}  // namespace wander
