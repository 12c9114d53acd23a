#pragma once

#include <map>
#include <string>
#include <vector>

#include "approximation.hpp"
#include "scenario.hpp"
#include "verification.hpp"

namespace wander {

// geometry shared by both constructions, all in normalized coordinates
struct StageGeometry {
  AffineMap normalization;
  JordanRegion region;  // normalized
  CompactSet omega;
  Tower tower;          // U_0..U_N
  std::vector<cd> xs;   // x_1..x_N
  cd witness;           // interior point of omega
};

StageGeometry prepare_geometry(const Scenario& sc);

struct StageRecord {
  int stage = 0;
  double eps = 0;
  int degree = 0;
  int halvings = 0;
  double ridge = 0;
  double seconds = 0;
  std::vector<double> fit_margins;
  double constraint_residual = 0;
  Certificate certificate;
};

struct ConstructionState {
  Mode mode = Mode::Escaping;
  int k = 0;
  Polynomial f;
  std::vector<Polynomial> history;  // f_1..f_k
  StageGeometry geo;
  // n -> (x_n^0, x_n^1, ...) with x_n^0 = x_n, evaluated by the map that recorded them
  std::map<int, std::vector<cq>> orbit_tables;
  std::vector<double> eps_history;
  std::vector<StageRecord> stages;
  double eps_scale = 1.0;
  // failure bookkeeping
  bool failed = false;
  Status failure = Status::Ok;
  std::string failure_check;
  std::string failure_detail;
};

// ---- escaping
ConstructionState init_escaping(const Scenario& sc);
void step_escaping(ConstructionState& st, const Scenario& sc);
ConstructionState run_escaping(const Scenario& sc);
Certificate certify_escaping(const Polynomial& f, int k, const StageGeometry& geo,
                             const std::map<int, std::vector<cq>>& tables, const Tolerances& tol,
                             const Polynomial* previous = nullptr);
// the limiting statements at stage K, checked on the boundary of omega itself
Certificate summary_escaping(const Polynomial& f, int K, const StageGeometry& geo, const Tolerances& tol);

struct BudgetReport {
  bool ok = false;
  double tail = 0;
  double dist = 0;
  std::vector<double> min_dist;  // n = 0..K
};
BudgetReport stay_away_budget(const ConstructionState& st, cd z_ref, const Tolerances& tol = {});
double escaping_eps_cap(int k);  // 2^-k

// ---- oscillating
struct AnnulusSpec {
  cd center{0.0};
  double outer = 0, inner = 0;
};
AnnulusSpec annulus(int k);  // A_k
inline int schedule_N(int k) { return k * (k + 1) / 2; }
AffineMap linear_into_annulus(const Disk& hull, const AnnulusSpec& a);

ConstructionState init_oscillating(const Scenario& sc);
void step_oscillating(ConstructionState& st, const Scenario& sc);
ConstructionState run_oscillating(const Scenario& sc);
Certificate certify_oscillating(const Polynomial& f, int k, const StageGeometry& geo,
                                const std::map<int, std::vector<cq>>& tables, const Tolerances& tol,
                                const Polynomial* previous = nullptr);
Certificate summary_oscillating(const Polynomial& f, int K, const StageGeometry& geo, const Tolerances& tol);

struct TraceRow {
  int n = 0;
  int inward_iterate = 0;  // N_n
  double min_modulus = 0, max_modulus = 0;
  int outward_iterate = 0;  // N_n + n
  cd outward_center;
  double outward_deviation = 0;  // max |f^{N_n+n} - 4n|
};
std::vector<TraceRow> oscillation_trace(const Polynomial& f, int K, const StageGeometry& geo, int samples = 1024);

ConstructionState run(const Scenario& sc);

}  // namespace wander
