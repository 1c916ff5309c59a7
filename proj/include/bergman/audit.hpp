#ifndef BERGMAN_AUDIT_HPP
#define BERGMAN_AUDIT_HPP

#include <string>
#include <utility>
#include <vector>

#include "bergman/xreal.hpp"

namespace bergman::audit {

// Self-verification harness.  Each criterion pins its tolerances in code and
// produces one row per individual check; `report-all` in the CLI and the
// acceptance test binary both run these.

struct CheckRow {
  std::string id;
  bool pass = true;
  std::vector<std::pair<std::string, XReal>> values;
  std::string note;
};

struct CriterionReport {
  int index = 0;
  std::string name;
  bool pass = true;
  std::vector<CheckRow> rows;
};

int criteria_count();                    // in-process criteria (determinism is
std::string criterion_name(int index);   // checked against the CLI externally)

/// Runs one criterion (1-based).  Never throws: internal failures surface as
/// a failing row carrying the message.
CriterionReport run_criterion(int index, double rel_tol = 1e-12);
std::vector<CriterionReport> run_all(double rel_tol = 1e-12);

/// Direct numeric Fubini-Study pullback length of the theta-circle: the
/// affine-chart FS form evaluated pointwise and integrated over theta.
/// Independent of the variance-formula route in embedding.  Entries are
/// (index, log squared norm); magnitudes must stay within double range.
double fs_pullback_circle_length(const std::vector<std::pair<int, double>>& entries,
                                 double t, int n_theta = 512);

}  // namespace bergman::audit

#endif
