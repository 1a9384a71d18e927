// The acceptance suite shared by `translab verify` and the acceptance test
// binary. Each criterion writes its artifacts (CSV, field files, SVG) under
// an output directory; the determinism criterion reruns everything into a
// second directory and compares the two trees byte for byte.
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace translab {

enum class VerifyLevel {
  Quick,  // coarse grids, a smoke test of the pipeline
  Desk,   // the resolutions the criteria are stated for
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;  // wall time; never written to artifacts
};

struct AcceptanceOptions {
  VerifyLevel level = VerifyLevel::Desk;
  std::filesystem::path out_dir = "verify_out";
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs criteria 1-9. Artifacts of the first pass go to out_dir/run1, the
/// determinism rerun to out_dir/run2.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// One formatted line per criterion: "[PASS] 3 name: detail (12.3 s)".
std::string format_result_line(const CriterionResult& r);

/// Recursive byte comparison of two directory trees. Returns the relative
/// paths that differ or exist on one side only.
std::vector<std::string> compare_trees(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace translab
