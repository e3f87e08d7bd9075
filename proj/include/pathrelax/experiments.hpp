#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pathrelax/coupling/coupling.hpp"
#include "pathrelax/schemes/relaxation.hpp"

namespace pathrelax::experiments {

// Configuration of one experiment run. Presets fill in the benchmark values;
// a flat key = value config file and command-line flags can override them.
struct RunConfig {
  std::string preset = "swe-dambreak";  // swe-dambreak | swe-smooth | blood-coupled
  std::string scheme = "relaxed";       // relaxed | relaxation | coupled-relaxed
  std::size_t n_cells = 4000;           // cells per domain
  double cfl = 0.9;
  double mu = 25.0;
  double mu_right = 0.0;  // 0 -> same as mu
  double epsilon = 0.0;   // relaxation scheme only
  double t_end = 0.33;
  std::string out_dir = ".";
  std::string tag;  // output file stem; derived from the preset when empty

  // blood-coupled parameters
  double alpha = 4.0 / 3.0;
  double young_left = 0.5;
  double young_right = 0.1;
  double wall_thickness = 0.05;
  double a0 = 5.0;
  double p0 = 2e-3;
  double domain_length = 0.55;  // per-side vessel length L: domain (-L, 0) u (0, L)
  bool modified_kirchhoff = false;
  bool scan_diagnostic = false;

  void validate() const;
};

RunConfig preset_config(const std::string& name);
void apply_config_file(RunConfig& config, const std::string& path);

struct RunArtifacts {
  std::string solution_csv;
  std::string metadata_json;
};

// Deterministic end-to-end run: advances the configured scheme to t_end and
// writes the solution CSV plus a metadata record with all config fields and
// the derived dx/dt.
RunArtifacts run(const RunConfig& config);

// L1 distance per component, dx * sum_j |a_j - b_j|. Solutions on different
// grids are compared by block-averaging the finer one when the cell counts
// differ by a power of two; anything else is a GridMismatch.
std::vector<double> l1_error(const GridSolution& a, const GridSolution& b);

// Rows of (resolution-or-epsilon, per-component error, per-component EOC).
// EOC row k is log2(E_k / E_{k+1}) placed on row k+1; the first row is NaN.
struct ErrorReport {
  std::vector<double> resolution;
  std::vector<std::string> component_names;
  std::vector<std::vector<double>> errors;  // [row][component]
  std::vector<std::vector<double>> eoc;     // [row][component]
};

ErrorReport make_error_report(const std::vector<double>& resolution,
                              const std::vector<std::string>& component_names,
                              const std::vector<std::vector<double>>& errors);

// Pairwise log2 ratios of a positive error sequence; first entry is NaN.
std::vector<double> eoc(const std::vector<double>& errors);

struct StudyArtifacts {
  ErrorReport report;
  std::string report_csv;
  std::string metadata_json;
};

// Relaxation-rate study: L1 distance of the finite-epsilon relaxation scheme
// to the relaxed scheme on a fixed grid, for each epsilon.
StudyArtifacts eps_study(const RunConfig& base, const std::vector<double>& epsilons);

// Grid-convergence study for the relaxed scheme against a reference solution
// on twice the finest resolution.
StudyArtifacts grid_study(const RunConfig& base, const std::vector<std::size_t>& cells);

// Mesh convergence of the interface coupling defect for the coupled run.
StudyArtifacts coupling_study(const RunConfig& base, const std::vector<std::size_t>& cells);

// Quick invariant suite (subcharacteristic bounds, M-term vanishing,
// path-conservativity identities, closed form vs quadrature). Prints one line
// per check; returns the number of failures.
int check_suite(std::ostream& out);

// Helpers shared with the test suites.
GridSolution swe_initial_solution(const std::string& preset, std::size_t n_cells);
CoupledDomain make_blood_domain(const RunConfig& config, const BloodVessel& left,
                                const BloodVessel& right);
std::string format_double(double v);  // 17 significant digits

}  // namespace pathrelax::experiments
