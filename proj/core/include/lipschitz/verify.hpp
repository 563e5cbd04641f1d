#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lipschitz/percolation.hpp"
#include "lipschitz/quad.hpp"

namespace lipschitz {

struct CheckResult {
  std::string group;
  std::string name;
  bool pass = false;
  double discrepancy = 0.0;  // TV distance, worst inequality gap or violation count
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  int failures() const;
  bool ok() const { return failures() == 0; }
  std::vector<CheckResult> group(const std::string& name) const;
};

struct VerifyOptions {
  std::vector<std::string> groups;  // empty: all
  int threads = 1;
  // Called after every check, in report order.
  std::function<void(const CheckResult&)> on_check;
};

// identities, inequalities, kernels, duality, monotonicity, structure
const std::vector<std::string>& verify_groups();

// Every oracle-backed check on the built-in corpus. Deterministic.
VerifyReport verify_suite(const VerifyOptions& options = {});

// "PASS|FAIL group/name discrepancy detail", one line per check.
void print_report(std::ostream& os, const VerifyReport& report);

struct SubsetCount {
  long long subsets = 0;
  long long violations = 0;
};
// primal crossing of `set` in `direction` == no dual crossing of the
// complement in the other direction, over all subsets of the quad's edges.
SubsetCount quad_duality_exhaustive(const Quad& quad, Direction direction);
// primal left-right crossing in `set` implies dual left-right crossing in `set`.
SubsetCount primal_implies_dual_exhaustive(const Quad& quad);

}  // namespace lipschitz
