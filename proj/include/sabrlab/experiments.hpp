#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sabrlab/asymptotics.hpp"
#include "sabrlab/dirichlet.hpp"
#include "sabrlab/model.hpp"
#include "sabrlab/simulate.hpp"
#include "sabrlab/time_change.hpp"
#include "sabrlab/weights.hpp"

namespace sabrlab {

/// Deterministic master seed per (experiment seed, stream salt).
std::uint64_t derive_master(std::uint64_t seed, std::uint64_t salt);

/// Terminal state (X_T, Y_T) of one direct Euler trajectory.
std::array<double, 2> direct_terminal(const ModelParams& p, bool drifted, double x0, double y0,
                                      double T, double dt, NormalSampler& rng);

/// Terminal state of one time-changed decoupled trajectory: the decoupled
/// pair is stepped in its own time with the running clock of Y^-2, and the
/// state is read off where the clock reaches T (linear interpolation).
std::array<double, 2> timechanged_terminal(const ModelParams& p, bool drifted, double x0,
                                           double y0, double T, double dt, NormalSampler& rng);

struct EquivalenceConfig {
  ModelParams params;
  bool drifted = false;
  double x0 = 1.0;
  double y0 = 1.0;
  double horizon = 1.0;
  double dt = 1e-4;
  std::size_t n_paths = 20000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double alpha = 0.01;
  std::size_t min_pass = 4;
};

struct SeedKs {
  std::uint64_t seed = 0;
  KsReport ks_x;
  KsReport ks_y;
  bool pass = false;
};

struct EquivalenceReport {
  EquivalenceConfig config;
  std::vector<SeedKs> per_seed;
  bool pass = false;
};

/// Distributional-equivalence protocol: per seed, two-sample KS between the
/// direct and time-changed marginals of (X_T, Y_T); a seed passes when both
/// coordinates exceed alpha, the experiment when min_pass seeds pass.
EquivalenceReport equivalence_experiment(const EquivalenceConfig& cfg);

struct Figure1Config {
  ModelParams params{0.5, 0.9, 1.0};
  double x0 = 1.0;
  double y0 = 1.0;
  double horizon = 100.0;
  double dt = 0.01;
  std::size_t n_paths = 10;
  std::uint64_t master_seed = 1;
};

struct Figure1Report {
  std::vector<Path> paths;  ///< first min(n_paths, 50) full trajectories
  std::size_t absorbed = 0;  ///< absorbed count over all n_paths
  std::size_t n_paths = 0;
};

/// Large-time sample paths of the forward coordinate (absorbing boundary).
/// Full trajectories are retained for the first 50 paths; the absorption
/// count aggregates every path.
Figure1Report figure1_experiment(const Figure1Config& cfg);

struct WeightsAuditConfig {
  std::vector<double> betas = {0.0, 0.5, 0.9};
  std::vector<double> rhos = {-0.9, 0.0, 0.9};
  int grid_n = 100;  ///< log grid per axis over (1e-3, 1e3)
};

struct WeightsAuditReport {
  struct AdhocCell {
    double beta = 0.0, rho = 0.0;
    double min_gap = 0.0;
    std::vector<std::array<double, 3>> violations;  // (x, y, gap), capped
  };
  struct EigenCell {
    double beta = 0.0, rho = 0.0, c = 0.0;
    int n = 0;
    double max_residual = 0.0;
  };
  std::vector<AdhocCell> adhoc;
  std::vector<EigenCell> eigen;
  double gap_floor = -1e-12;
  double residual_ceiling = 1e-5;
  bool pass = false;
};

/// Sub-eigen gap audit on the log grid plus eigen-residual audit of the
/// radial weights on an interior grid.
WeightsAuditReport weights_audit(const WeightsAuditConfig& cfg);

struct ClassificationCell {
  double beta = 0.0, rho = 0.0, nu = 0.0;
  SymmetryCase verdict = SymmetryCase::NotSymmetrizable;
  double defect = 0.0;     ///< max defect over pairs (symmetric cells) or best witness
  double tolerance = 0.0;  ///< tolerance attached to that pair
  bool pass = false;       ///< defect <= tol on symmetric cells, witness >= 10 tol otherwise
};

struct ClassificationConfig {
  std::vector<double> betas = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> rhos = {-0.5, 0.0, 0.5};
  double nu = 1.0;
  int quad_n = 256;
  int n_pairs = 50;
  std::uint64_t seed = 7;
};

/// Symmetry-defect matrix over the parameter grid: classifier verdict plus a
/// numeric confirmation (small defect with the attached density, or a large
/// defect witness against the candidate density).
std::vector<ClassificationCell> classification_matrix(const ClassificationConfig& cfg);

struct ClosabilityRow {
  HamzaFamily family = HamzaFamily::CevPower;
  double beta = 0.0;
  ClosabilityVerdict verdict;
};

std::vector<ClosabilityRow> closability_table(const std::vector<double>& betas);

struct BoundaryRow {
  double beta = 0.0;
  BoundaryClass cls = BoundaryClass::NotEntrance;
  double integral = 0.0;
};

std::vector<BoundaryRow> boundary_class_table(const std::vector<double>& betas);

struct AbsorptionConfig {
  ModelParams params{0.5, 0.0, 1.0};
  double x0 = 1.0;
  double y0 = 1.0;
  bool drifted = false;
  McConfig mc;
  double case_horizon = 100.0;  ///< horizon of the companion case-count batch
};

struct AbsorptionReport {
  AbsorptionEstimate estimate;
  CaseCounts cases;
};

/// Absorption-probability estimate plus the three-case decomposition counts
/// of a companion decoupled batch.
AbsorptionReport absorption_experiment(const AbsorptionConfig& cfg);

/// Streaming three-case decomposition over n decoupled pairs.
CaseCounts case_count_batch(const ModelParams& p, double x0, double y0, double horizon, double dt,
                            std::size_t n, std::uint64_t master_seed);

// Text renderings used by the CLI and the determinism checks.
std::string render_paths_csv(const std::vector<Path>& paths);
std::string render_equivalence_json(const EquivalenceReport& report);
std::string render_weights_audit_json(const WeightsAuditReport& report);
std::string render_classification_csv(const std::vector<ClassificationCell>& cells);
std::string render_closability_csv(const std::vector<ClosabilityRow>& rows);
std::string render_boundary_csv(const std::vector<BoundaryRow>& rows);
std::string render_absorption_json(const AbsorptionConfig& cfg, const AbsorptionReport& report);

std::string symmetry_case_name(SymmetryCase c);
std::string hamza_family_name(HamzaFamily f);
std::string boundary_class_name(BoundaryClass c);

}  // namespace sabrlab
