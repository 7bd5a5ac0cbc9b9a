#include "sabrlab/dirichlet.hpp"

#include <cmath>
#include <stdexcept>

#include "sabrlab/geometry.hpp"
#include "sabrlab/rng.hpp"

namespace sabrlab {

SpeedMeasure speed_m(int j, const ModelParams& p) {
  if (j != 0 && j != 1) throw std::invalid_argument("speed_m: j must be 0 or 1");
  const double e = p.beta * (1.0 + j);
  const double rb = p.rho_bar;
  return {[e, rb](double x, double y) { return 1.0 / (rb * pow_conv(x, e) * y * y); },
          [e](double x, double) { return -e / x; },
          [](double, double y) { return -2.0 / y; },
          j == 0 ? "m_0" : "m_1"};
}

SpeedMeasure speed_m_tilde(int j, const ModelParams& p) {
  if (j != 0 && j != 1) throw std::invalid_argument("speed_m_tilde: j must be 0 or 1");
  const double e = p.beta * (1.0 + j);
  const double rb = p.rho_bar;
  return {[e, rb](double x, double) { return 1.0 / (rb * pow_conv(x, e)); },
          [e](double x, double) { return -e / x; },
          [](double, double) { return 0.0; },
          j == 0 ? "m_tilde_0" : "m_tilde_1"};
}

SpeedMeasure speed_cev(double beta) {
  return {[beta](double x, double) { return 1.0 / pow_conv(x, 2.0 * beta); },
          [beta](double x, double) { return -2.0 * beta / x; },
          [](double, double) { return 0.0; },
          "m_beta"};
}

SpeedMeasure speed_beta1_candidate(const ModelParams& p, int pw) {
  if (pw != 1 && pw != 2) throw std::invalid_argument("speed_beta1_candidate: pw must be 1 or 2");
  const double rb = pw == 1 ? p.rho_bar : p.rho_bar * p.rho_bar;
  const double rho = p.rho;
  const double xexp = 1.0 + 1.0 / (p.rho_bar * p.rho_bar);
  return {[rho, rb, xexp](double x, double y) {
            return std::exp(rho * y / rb) / (y * y * std::pow(x, xexp));
          },
          [xexp](double x, double) { return -xexp / x; },
          [rho, rb](double, double y) { return -2.0 / y + rho / rb; },
          pw == 1 ? "beta1[rho_bar]" : "beta1[rho_bar^2]"};
}

double energy_density(EnergyKind kind, const ModelParams& p, const std::array<double, 2>& g1,
                      const std::array<double, 2>& g2, double x, double y) {
  const double xb = pow_conv(x, p.beta);
  switch (kind) {
    case EnergyKind::SabrGamma:
      return y * y *
             (xb * xb * g1[0] * g2[0] + p.rho * xb * (g1[0] * g2[1] + g1[1] * g2[0]) +
              g1[1] * g2[1]);
    case EnergyKind::TimeChangedGamma:
      return xb * xb * g1[0] * g2[0] + p.rho * xb * (g1[0] * g2[1] + g1[1] * g2[0]) +
             g1[1] * g2[1];
    case EnergyKind::CevGamma:
      return p.sigma * xb * xb * g1[0] * g2[0];
  }
  throw std::logic_error("energy_density: unknown kind");
}

double simpson_2d(const std::function<double(double, double)>& f, const Box& box, int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("simpson_2d: n must be even and >= 2");
  const double hx = (box.x1 - box.x0) / n;
  const double hy = (box.y1 - box.y0) / n;
  auto w = [n](int i) { return i == 0 || i == n ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = box.x0 + i * hx;
    double row = 0.0;
    for (int j = 0; j <= n; ++j) row += w(j) * f(x, box.y0 + j * hy);
    total += w(i) * row;
  }
  return total * hx * hy / 9.0;
}

double Bump1D::value(double t) const {
  const double u = (t - c) / w;
  const double q = 1.0 - u * u;
  return q <= 0.0 ? 0.0 : q * q * q;
}

double Bump1D::d1(double t) const {
  const double u = (t - c) / w;
  const double q = 1.0 - u * u;
  return q <= 0.0 ? 0.0 : -6.0 * u * q * q / w;
}

double Bump1D::d2(double t) const {
  const double u = (t - c) / w;
  const double q = 1.0 - u * u;
  return q <= 0.0 ? 0.0 : -6.0 * q * (1.0 - 5.0 * u * u) / (w * w);
}

ScalarField bump_field(const Bump1D& bx, const Bump1D& by) {
  ScalarField f;
  f.value = [bx, by](double x, double y) { return bx.value(x) * by.value(y); };
  f.gradient = [bx, by](double x, double y) -> std::array<double, 2> {
    return {bx.d1(x) * by.value(y), bx.value(x) * by.d1(y)};
  };
  f.hessian = [bx, by](double x, double y) -> std::array<double, 3> {
    return {bx.d2(x) * by.value(y), bx.d1(x) * by.d1(y), bx.value(x) * by.d2(y)};
  };
  return f;
}

Bump1D snap_bump(const Bump1D& b, double lo, double hi, int panels) {
  const double step = (hi - lo) / panels;
  long k1 = std::lround((b.c - b.w - lo) / step);
  long k2 = std::lround((b.c + b.w - lo) / step);
  if (k2 <= k1 + 1) k2 = k1 + 2;
  const double e1 = lo + k1 * step;
  const double e2 = lo + k2 * step;
  return {0.5 * (e1 + e2), 0.5 * (e2 - e1)};
}

ScalarField field_product(const ScalarField& u, const ScalarField& v) {
  ScalarField f;
  f.value = [u, v](double x, double y) { return u.value(x, y) * v.value(x, y); };
  f.gradient = [u, v](double x, double y) -> std::array<double, 2> {
    const double uv = u.value(x, y), vv = v.value(x, y);
    const auto gu = u.gradient(x, y);
    const auto gv = v.gradient(x, y);
    return {gu[0] * vv + uv * gv[0], gu[1] * vv + uv * gv[1]};
  };
  return f;
}

ScalarField field_square(const ScalarField& u) {
  ScalarField f;
  f.value = [u](double x, double y) {
    const double uv = u.value(x, y);
    return uv * uv;
  };
  f.gradient = [u](double x, double y) -> std::array<double, 2> {
    const double uv = u.value(x, y);
    const auto gu = u.gradient(x, y);
    return {2.0 * uv * gu[0], 2.0 * uv * gu[1]};
  };
  return f;
}

double support_leak(const ScalarField& f, const Box& box, int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = box.x0 + i * (box.x1 - box.x0) / n;
    const double y = box.y0 + i * (box.y1 - box.y0) / n;
    worst = std::max({worst, std::abs(f.value(x, box.y0)), std::abs(f.value(x, box.y1)),
                      std::abs(f.value(box.x0, y)), std::abs(f.value(box.x1, y))});
  }
  return worst;
}

double form_value(const FormSpec& form, const ScalarField& f1, const ScalarField& f2,
                  const Box& box, int n) {
  return simpson_2d(
      [&](double x, double y) {
        const auto g1 = f1.gradient(x, y);
        const auto g2 = f2.gradient(x, y);
        return 0.5 * energy_density(form.energy, form.params, g1, g2, x, y) *
               form.speed.density(x, y);
      },
      box, n);
}

double generator_pairing(const GeneratorSpec& gen, const ScalarField& f1, const ScalarField& f2,
                         const SpeedMeasure& speed, const Box& box, int n) {
  return simpson_2d(
      [&](double x, double y) {
        return apply_generator(gen, f1, x, y) * f2.value(x, y) * speed.density(x, y);
      },
      box, n);
}

SymmetryDefect symmetry_defect(const FormSpec& form, const GeneratorSpec& gen,
                               const ScalarField& f1, const ScalarField& f2, const Box& box,
                               int n) {
  SymmetryDefect out;
  out.pairing = generator_pairing(gen, f1, f2, form.speed, box, n);
  out.form = form_value(form, f1, f2, box, n);
  out.defect = std::abs(out.pairing + out.form);
  const double pairing_coarse = generator_pairing(gen, f1, f2, form.speed, box, n / 2);
  const double form_coarse = form_value(form, f1, f2, box, n / 2);
  const double err = std::abs(out.pairing - pairing_coarse) + std::abs(out.form - form_coarse);
  out.tolerance = std::max(1e-8, 10.0 * err);
  return out;
}

std::array<double, 2> no_drift_residual(const ModelParams& p, const SpeedMeasure& m, double x,
                                        double y) {
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("no_drift_residual: interior point required");
  if (!(m.density(x, y) > 0.0)) throw std::domain_error("no_drift_residual: m must be positive");
  const double lx = x * m.dlog_dx(x, y);
  const double ly = y * m.dlog_dy(x, y);
  const double b = p.beta;
  const double r1 =
      pow_conv(x, 2.0 * b - 1.0) * y * y * (2.0 * b + lx) + p.rho * pow_conv(x, b) * y * (2.0 + ly);
  const double r2 = p.rho * pow_conv(x, b - 1.0) * y * y * (b + lx) + y * (2.0 + ly);
  return {r1, r2};
}

ClassificationVerdict classify_symmetrizable(const ModelParams& p) {
  ClassificationVerdict v;
  if (p.beta == 0.0) {
    v.case_ = SymmetryCase::Beta0;
    v.speed = speed_m(0, p);
    v.note = "generator equals the Laplace-Beltrami operator";
    return v;
  }
  if (p.nu == 0.0) {
    v.case_ = SymmetryCase::NuZeroCEV;
    v.speed = speed_cev(p.beta);
    v.note = "volatility frozen, univariate CEV";
    return v;
  }
  if (p.rho == 0.0) {
    v.case_ = SymmetryCase::RhoZeroWeighted;
    SpeedMeasure m = speed_m(1, p);
    m.label = "1/(x^(2 beta) y^2)";
    v.speed = m;
    v.note = "weighted-manifold case";
    return v;
  }
  if (p.beta == 1.0) {
    // Arbitrate the candidate exponent by the no-drift equations.
    int winner = 0;
    for (int pw : {1, 2}) {
      const SpeedMeasure cand = speed_beta1_candidate(p, pw);
      double worst = 0.0;
      NormalSampler pts(SeedSpec{0xD1C1E7u, 0});
      for (int k = 0; k < 100; ++k) {
        const double x = 0.1 + 3.0 * pts.uniform01();
        const double y = 0.1 + 3.0 * pts.uniform01();
        const auto r = no_drift_residual(p, cand, x, y);
        worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
      }
      if (worst <= 1e-10) winner = winner == 0 ? pw : -1;
    }
    if (winner > 0) {
      v.case_ = SymmetryCase::Beta1Special;
      v.speed = speed_beta1_candidate(p, winner);
      v.note = "exponent arbitrated by the no-drift equations";
      return v;
    }
    v.case_ = SymmetryCase::NotSymmetrizable;
    v.note = "no beta = 1 candidate density satisfies the no-drift equations";
    return v;
  }
  v.case_ = SymmetryCase::NotSymmetrizable;
  v.note = "no positive reference density removes the first-order terms";
  return v;
}

ClosabilityVerdict hamza_closability(HamzaFamily family, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("hamza_closability: beta in [0,1]");
  double coeff_exp = 0.0;  // energy coefficient ~ x^coeff_exp near 0
  double speed_exp = 0.0;  // speed density ~ x^(-speed_exp) near 0
  switch (family) {
    case HamzaFamily::CevPower:
      coeff_exp = 2.0 * beta;
      speed_exp = 2.0 * beta;
      break;
    case HamzaFamily::TerElst:
      coeff_exp = 2.0 * beta;  // x^(2 beta) / (1 + x^2)^beta ~ x^(2 beta)
      speed_exp = 0.0;         // reference measure is Lebesgue
      break;
    case HamzaFamily::M0Slice:
      coeff_exp = beta;  // xi_xx m_0 ~ x^beta
      speed_exp = beta;
      break;
    case HamzaFamily::M1Slice:
      coeff_exp = 0.0;  // xi_xx m_1 is constant in x
      speed_exp = 2.0 * beta;
      break;
  }
  ClosabilityVerdict v;
  v.radon = speed_exp < 1.0;
  const bool singular_empty = coeff_exp < 1.0;
  v.singular_set = singular_empty ? "empty" : "{0}";
  // A vanishing power-type density satisfies the Hamza condition even when 0
  // is singular; closability then needs the speed measure to stay Radon.
  v.closable = v.radon;
  v.varadhan_valid = singular_empty && v.radon;
  switch (family) {
    case HamzaFamily::CevPower:
      v.parameter_threshold = "closable iff beta < 1/2";
      break;
    case HamzaFamily::TerElst:
      v.parameter_threshold = "Varadhan asymptotics valid iff beta < 1/2";
      break;
    case HamzaFamily::M0Slice:
      v.parameter_threshold = "closable iff beta < 1";
      break;
    case HamzaFamily::M1Slice:
      v.parameter_threshold = "closable iff beta < 1/2";
      break;
  }
  return v;
}

double psd_quadratic(double beta, double rho, double x, double y, const std::array<double, 2>& v) {
  const auto xi = xi_matrix(beta, rho, x, y);
  return v[0] * v[0] * xi[0][0] + 2.0 * v[0] * v[1] * xi[0][1] + v[1] * v[1] * xi[1][1];
}

double ellipticity_constant(double beta, double rho, const Box& box, int n) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double x = box.x0 + i * (box.x1 - box.x0) / n;
      const double y = box.y0 + j * (box.y1 - box.y0) / n;
      const auto xi = xi_matrix(beta, rho, x, y);
      const double tr = xi[0][0] + xi[1][1];
      const double det = xi[0][0] * xi[1][1] - xi[0][1] * xi[1][0];
      const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
      lo = std::min(lo, 0.5 * (tr - disc));
    }
  }
  return lo;
}

}  // namespace sabrlab
