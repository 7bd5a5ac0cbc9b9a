#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "sabrlab/model.hpp"
#include "sabrlab/operators.hpp"

namespace sabrlab {

enum class EnergyKind {
  SabrGamma,         ///< y^2 (x^2b ux vx + rho x^b (ux vy + uy vx) + uy vy)
  TimeChangedGamma,  ///< SabrGamma / y^2
  CevGamma,          ///< sigma x^2b ux vx
};

/// Reference (speed) density with its analytic log-gradient.
struct SpeedMeasure {
  std::function<double(double, double)> density;
  std::function<double(double, double)> dlog_dx;
  std::function<double(double, double)> dlog_dy;
  std::string label;
};

/// m_j(x,y) = 1 / (rho_bar x^(b(1+j)) y^2), j = 0, 1.
SpeedMeasure speed_m(int j, const ModelParams& p);

/// Time-changed variant without the y^2 factor: 1 / (rho_bar x^(b(1+j))).
SpeedMeasure speed_m_tilde(int j, const ModelParams& p);

/// CEV speed density m_beta(x) = x^(-2 beta).
SpeedMeasure speed_cev(double beta);

/// beta = 1 candidate density exp(rho y / rho_bar^pw) / (y^2 x^(1 + 1/rho_bar^2)),
/// pw in {1, 2}. The two exponents are arbitrated by no_drift_residual.
SpeedMeasure speed_beta1_candidate(const ModelParams& p, int pw);

struct FormSpec {
  EnergyKind energy = EnergyKind::SabrGamma;
  SpeedMeasure speed;
  ModelParams params;
};

/// Pointwise energy density Gamma(grad1, grad2) at (x, y).
double energy_density(EnergyKind kind, const ModelParams& p, const std::array<double, 2>& grad1,
                      const std::array<double, 2>& grad2, double x, double y);

struct Box {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

/// Composite Simpson on an n x n tensor grid (n even).
double simpson_2d(const std::function<double(double, double)>& f, const Box& box, int n);

/// One-dimensional C^2 bump (1 - ((t-c)/w)^2)^3 clipped at zero.
struct Bump1D {
  double c = 0.0;
  double w = 1.0;
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

/// Product bump field with analytic gradient and hessian, supported on
/// [cx - wx, cx + wx] x [cy - wy, cy + wy].
ScalarField bump_field(const Bump1D& bx, const Bump1D& by);

/// Snaps the support edges onto the coarse Simpson panel lattice (multiples
/// of (hi-lo)/panels). The bump is only C^2 at its edges; with the edges on
/// panel boundaries the composite rule keeps its full order, on the halved
/// grid as well.
Bump1D snap_bump(const Bump1D& b, double lo, double hi, int panels = 64);

/// Fields with value and gradient assembled from two others (enough for the
/// energy form, which only consumes gradients).
ScalarField field_product(const ScalarField& u, const ScalarField& v);
ScalarField field_square(const ScalarField& u);

/// Largest |f| on the box boundary; a support leak when it exceeds 1e-8.
double support_leak(const ScalarField& f, const Box& box, int n = 128);

/// E(f1, f2) = 1/2 integral of Gamma(f1, f2) m dx dy over the box (Simpson).
double form_value(const FormSpec& form, const ScalarField& f1, const ScalarField& f2,
                  const Box& box, int n = 256);

/// Integral of (G f1) f2 m over the box.
double generator_pairing(const GeneratorSpec& gen, const ScalarField& f1, const ScalarField& f2,
                         const SpeedMeasure& speed, const Box& box, int n = 256);

struct SymmetryDefect {
  double defect = 0.0;     ///< |<G f1, f2>_m + E(f1, f2)|
  double tolerance = 0.0;  ///< max(1e-8, 10x grid-halving error estimate)
  double pairing = 0.0;
  double form = 0.0;
};

/// The generator pairing should equal -E for a compatible (generator, speed)
/// pair; the defect is small exactly then.
SymmetryDefect symmetry_defect(const FormSpec& form, const GeneratorSpec& gen,
                               const ScalarField& f1, const ScalarField& f2, const Box& box,
                               int n = 256);

/// The two scalar no-drift equations for a candidate speed density m:
///   x^(2b-1) y^2 (2b + x dlogm/dx) + rho x^b y (2 + y dlogm/dy)
///   rho x^(b-1) y^2 (b + x dlogm/dx) + y (2 + y dlogm/dy)
/// Both vanish iff m kills every first-order term of the symmetrized generator.
std::array<double, 2> no_drift_residual(const ModelParams& p, const SpeedMeasure& m, double x,
                                        double y);

enum class SymmetryCase { Beta0, RhoZeroWeighted, NuZeroCEV, Beta1Special, NotSymmetrizable };

struct ClassificationVerdict {
  SymmetryCase case_ = SymmetryCase::NotSymmetrizable;
  std::optional<SpeedMeasure> speed;
  std::string note;
};

/// Symmetrizability classification. The beta = 1 branch arbitrates the two
/// candidate exponents by evaluating no_drift_residual at 100 random interior
/// points and attaches the winner.
ClassificationVerdict classify_symmetrizable(const ModelParams& p);

enum class HamzaFamily { CevPower, TerElst, M0Slice, M1Slice };

struct ClosabilityVerdict {
  bool closable = false;
  bool radon = false;          ///< speed density locally integrable at the axis
  bool varadhan_valid = false; ///< coefficient density has empty singular set
  std::string singular_set;
  std::string parameter_threshold;
};

/**
 * Closability along the x-axis for the power-type coefficient families, by
 * exponent comparison: x = 0 is a regular point of a density x^e iff e < 1
 * (reciprocal integrability), and a speed density x^(-s) is Radon iff s < 1.
 * Thresholds: m_0 slice beta < 1, m_1 slice beta < 1/2, CEV beta < 1/2,
 * ter-Elst Varadhan validity beta < 1/2.
 */
ClosabilityVerdict hamza_closability(HamzaFamily family, double beta);

/// v^T xi(x,y) v for the diffusion covariance matrix; >= 0 whenever |rho| <= 1.
double psd_quadratic(double beta, double rho, double x, double y, const std::array<double, 2>& v);

/// Minimal eigenvalue of xi over an n x n grid on the box (local ellipticity constant).
double ellipticity_constant(double beta, double rho, const Box& box, int n = 64);

}  // namespace sabrlab
