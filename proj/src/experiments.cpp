#include "sabrlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sabrlab/io.hpp"
#include "sabrlab/parallel.hpp"

namespace sabrlab {

using nlohmann::json;

std::uint64_t derive_master(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed ^ (0x632BE59BD9B4E019ull * (salt + 1));
  return splitmix64_next(s);
}

std::array<double, 2> direct_terminal(const ModelParams& p, bool drifted, double x0, double y0,
                                      double T, double dt, NormalSampler& rng) {
  const auto n_steps = static_cast<std::size_t>(std::llround(T / dt));
  const double sqdt = std::sqrt(dt);
  const double gbm_drift = -0.5 * p.nu * p.nu * dt;
  double x = x0, y = y0;
  bool absorbed = x <= 0.0;
  if (absorbed) x = 0.0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
    if (!absorbed) {
      double xn = x + y * pow_conv(x, p.beta) * sqdt * xi_w;
      if (drifted) xn += 0.5 * y * y * p.beta * pow_conv(x, 2.0 * p.beta - 1.0) * dt;
      if (xn <= 0.0) {
        xn = 0.0;
        absorbed = true;
      }
      x = xn;
    }
    y *= std::exp(gbm_drift + p.nu * sqdt * xi_z);
  }
  return {x, y};
}

std::array<double, 2> timechanged_terminal(const ModelParams& p, bool drifted, double x0,
                                           double y0, double T, double dt, NormalSampler& rng) {
  const double sqdt = std::sqrt(dt);
  const double om = 1.0 - p.beta;
  double x = x0, y = y0;
  bool absorbed = x <= 0.0;
  if (absorbed) x = 0.0;
  double clock = 0.0;
  double rate = 1.0 / (y * y);
  // Expected number of steps is integral of Y^2 over [0,T] divided by dt; the
  // hard cap only guards against pathological tails.
  const std::size_t max_steps = static_cast<std::size_t>(2e8);
  for (std::size_t k = 0; k < max_steps; ++k) {
    const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
    const double dw = sqdt * xi_w;
    double xn = x;
    if (!absorbed) {
      if (!drifted) {
        xn = x + pow_conv(x, p.beta) * dw;
      } else if (p.beta == 1.0) {
        xn = x * std::exp(dw);
      } else {
        const double inner = std::pow(x, om) + om * dw;
        xn = inner <= 0.0 ? 0.0 : std::pow(inner, 1.0 / om);
      }
      if (xn <= 0.0) xn = 0.0;
    }
    const double yn = y + p.nu * sqdt * xi_z;
    if (yn <= 0.0) {
      // The integrand explodes inside this step, so the clock reaches any
      // finite target here; read the state off at the crossing fraction.
      const double theta = std::min(1.0, (T - clock) / (dt * rate));
      const double xt = absorbed ? 0.0 : x + theta * (xn - x);
      const double yt = std::max(y + theta * (yn - y), 1e-12);
      return {xt, yt};
    }
    const double rate_n = 1.0 / (yn * yn);
    const double inc = 0.5 * dt * (rate + rate_n);
    if (clock + inc >= T) {
      const double theta = inc <= 0.0 ? 1.0 : (T - clock) / inc;
      const double xt = absorbed ? 0.0 : x + theta * (xn - x);
      const double yt = y + theta * (yn - y);
      return {xt, yt};
    }
    clock += inc;
    x = xn;
    if (xn == 0.0) absorbed = true;
    y = yn;
    rate = rate_n;
  }
  return {x, y};  // cap reached; state frozen at the clock's reach
}

EquivalenceReport equivalence_experiment(const EquivalenceConfig& cfg) {
  EquivalenceReport report;
  report.config = cfg;
  std::size_t passed = 0;
  for (const auto seed : cfg.seeds) {
    std::vector<double> xd(cfg.n_paths), yd(cfg.n_paths), xt(cfg.n_paths), yt(cfg.n_paths);
    const std::uint64_t m_direct = derive_master(seed, 1);
    const std::uint64_t m_tc = derive_master(seed, 2);
    parallel_for(cfg.n_paths, [&](std::size_t i) {
      NormalSampler rng(SeedSpec{m_direct, i});
      const auto s = direct_terminal(cfg.params, cfg.drifted, cfg.x0, cfg.y0, cfg.horizon, cfg.dt, rng);
      xd[i] = s[0];
      yd[i] = s[1];
    });
    parallel_for(cfg.n_paths, [&](std::size_t i) {
      NormalSampler rng(SeedSpec{m_tc, i});
      const auto s = timechanged_terminal(cfg.params, cfg.drifted, cfg.x0, cfg.y0, cfg.horizon, cfg.dt, rng);
      xt[i] = s[0];
      yt[i] = s[1];
    });
    SeedKs row;
    row.seed = seed;
    row.ks_x = ks_two_sample(xd, xt);
    row.ks_y = ks_two_sample(yd, yt);
    row.pass = row.ks_x.p_value > cfg.alpha && row.ks_y.p_value > cfg.alpha;
    if (row.pass) ++passed;
    report.per_seed.push_back(row);
  }
  report.pass = passed >= cfg.min_pass;
  return report;
}

Figure1Report figure1_experiment(const Figure1Config& cfg) {
  Figure1Report report;
  report.n_paths = cfg.n_paths;
  const std::size_t keep = std::min<std::size_t>(cfg.n_paths, 50);
  report.paths.resize(keep);
  const int n_steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
  const TimeGrid grid(0.0, cfg.horizon, n_steps);
  std::vector<unsigned char> absorbed(cfg.n_paths, 0);
  parallel_for(cfg.n_paths, [&](std::size_t i) {
    auto path = simulate_sabr_euler(cfg.params, {cfg.x0, cfg.y0, false}, grid, false,
                                    SeedSpec{cfg.master_seed, i});
    absorbed[i] = path.absorption_time.has_value() ? 1 : 0;
    if (i < keep) report.paths[i] = std::move(path);
  });
  for (const auto a : absorbed) report.absorbed += a;
  return report;
}

WeightsAuditReport weights_audit(const WeightsAuditConfig& cfg) {
  WeightsAuditReport report;
  std::vector<double> grid_coords(cfg.grid_n);
  for (int i = 0; i < cfg.grid_n; ++i)
    grid_coords[i] = std::pow(10.0, -3.0 + 6.0 * i / (cfg.grid_n - 1.0));

  bool ok = true;
  for (const double beta : cfg.betas) {
    for (const double rho : cfg.rhos) {
      const ModelParams p(beta, rho, 1.0);
      WeightsAuditReport::AdhocCell cell{beta, rho, std::numeric_limits<double>::infinity(), {}};
      for (const double x : grid_coords) {
        for (const double y : grid_coords) {
          const double gap = adhoc_subeigen_gap(p, x, y);
          cell.min_gap = std::min(cell.min_gap, gap);
          if (gap < report.gap_floor && cell.violations.size() < 16)
            cell.violations.push_back({x, y, gap});
        }
      }
      ok = ok && cell.violations.empty();
      report.adhoc.push_back(cell);
    }
  }

  for (const double beta : {0.0, 0.5}) {
    for (const double rho : {-0.5, 0.0, 0.5}) {
      for (const double c : {1.0, 2.0}) {
        for (const int n : {1, 2}) {
          const WeightSpec spec{WeightKind::LegendreRadial, ModelParams(beta, rho, 1.0), c, n};
          WeightsAuditReport::EigenCell cell{beta, rho, c, n, 0.0};
          for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
              const double x = 0.6 + 0.3 * i;
              const double y = 0.6 + 0.3 * j;
              cell.max_residual = std::max(cell.max_residual, eigen_residual(spec, x, y));
            }
          }
          ok = ok && cell.max_residual <= report.residual_ceiling;
          report.eigen.push_back(cell);
        }
      }
    }
  }
  report.pass = ok;
  return report;
}

namespace {

bool is_symmetric_case(SymmetryCase c) { return c != SymmetryCase::NotSymmetrizable; }

struct BumpPair {
  ScalarField f1;
  ScalarField f2;
};

BumpPair random_bump_pair(NormalSampler& rng, const Box& box) {
  auto draw = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); };
  auto bump_x = [&] { return snap_bump({draw(1.0, 2.2), draw(0.3, 0.55)}, box.x0, box.x1); };
  auto bump_y = [&] { return snap_bump({draw(1.0, 2.2), draw(0.3, 0.55)}, box.y0, box.y1); };
  return {bump_field(bump_x(), bump_y()), bump_field(bump_x(), bump_y())};
}

}  // namespace

std::vector<ClassificationCell> classification_matrix(const ClassificationConfig& cfg) {
  std::vector<std::array<double, 2>> combos;
  for (const double beta : cfg.betas)
    for (const double rho : cfg.rhos) combos.push_back({beta, rho});

  std::vector<ClassificationCell> cells(combos.size());
  const Box box{0.3, 3.0, 0.3, 3.0};
  parallel_for(combos.size(), [&](std::size_t idx) {
    const auto [beta, rho] = combos[idx];
    const ModelParams p(beta, rho, cfg.nu);
    ClassificationCell cell;
    cell.beta = beta;
    cell.rho = rho;
    cell.nu = cfg.nu;
    const auto verdict = classify_symmetrizable(p);
    cell.verdict = verdict.case_;
    const GeneratorSpec gen{GeneratorKind::SabrA, p};
    const SpeedMeasure speed = is_symmetric_case(verdict.case_) ? *verdict.speed : speed_m(1, p);
    const FormSpec form{EnergyKind::SabrGamma, speed, p};

    NormalSampler rng(SeedSpec{cfg.seed, idx});
    if (is_symmetric_case(verdict.case_)) {
      bool all_small = true;
      for (int k = 0; k < cfg.n_pairs; ++k) {
        const auto pair = random_bump_pair(rng, box);
        const auto d = symmetry_defect(form, gen, pair.f1, pair.f2, box, cfg.quad_n);
        if (d.defect > cell.defect) {
          cell.defect = d.defect;
          cell.tolerance = d.tolerance;
        }
        all_small = all_small && d.defect <= d.tolerance;
      }
      cell.pass = all_small;
    } else {
      // Witness search: one pair with a defect far above the quadrature noise
      // certifies the breakdown for the candidate density.
      bool found = false;
      for (int k = 0; k < cfg.n_pairs; ++k) {
        const auto pair = random_bump_pair(rng, box);
        const auto d = symmetry_defect(form, gen, pair.f1, pair.f2, box, cfg.quad_n);
        if (d.defect > cell.defect) {
          cell.defect = d.defect;
          cell.tolerance = d.tolerance;
        }
        found = found || d.defect >= 10.0 * d.tolerance;
      }
      cell.pass = found;
    }
    cells[idx] = cell;
  });
  return cells;
}

std::vector<ClosabilityRow> closability_table(const std::vector<double>& betas) {
  std::vector<ClosabilityRow> rows;
  for (const auto family : {HamzaFamily::M0Slice, HamzaFamily::M1Slice, HamzaFamily::CevPower,
                            HamzaFamily::TerElst}) {
    for (const double beta : betas) rows.push_back({family, beta, hamza_closability(family, beta)});
  }
  return rows;
}

std::vector<BoundaryRow> boundary_class_table(const std::vector<double>& betas) {
  std::vector<BoundaryRow> rows;
  for (const double beta : betas)
    rows.push_back({beta, feller_boundary_class(beta), cev_entrance_integral(beta)});
  return rows;
}

CaseCounts case_count_batch(const ModelParams& p, double x0, double y0, double horizon, double dt,
                            std::size_t n, std::uint64_t master_seed) {
  std::vector<int> tags(n, 0);
  const double sqdt = std::sqrt(dt);
  parallel_for(n, [&](std::size_t i) {
    NormalSampler rng(SeedSpec{master_seed, i});
    double x = x0, y = y0;
    double t = 0.0;
    double hx = -1.0, hy = -1.0;
    while (t < horizon && (hx < 0.0 || hy < 0.0)) {
      const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
      if (hx < 0.0) {
        const double xn = x + pow_conv(x, p.beta) * sqdt * xi_w;
        if (xn <= 0.0) {
          hx = t + dt * (x / (x - xn));
          x = 0.0;
        } else {
          x = xn;
        }
      }
      if (hy < 0.0) {
        const double yn = y + p.nu * sqdt * xi_z;
        if (yn <= 0.0) {
          hy = t + dt * (y / (y - yn));
          y = 0.0;
        } else {
          y = yn;
        }
      }
      t += dt;
    }
    if (hx < 0.0 && hy < 0.0) {
      tags[i] = 3;  // undecided
    } else if (hx >= 0.0 && hy >= 0.0 && std::abs(hx - hy) < dt) {
      tags[i] = 2;  // simultaneous
    } else if (hx >= 0.0 && (hy < 0.0 || hx < hy)) {
      tags[i] = 0;  // forward hit first
    } else {
      tags[i] = 1;  // clock ended first
    }
  });
  CaseCounts counts;
  for (const int tag : tags) {
    if (tag == 0) ++counts.hit_before_clock;
    else if (tag == 1) ++counts.clock_ends_first;
    else if (tag == 2) ++counts.simultaneous;
    else ++counts.undecided;
  }
  return counts;
}

AbsorptionReport absorption_experiment(const AbsorptionConfig& cfg) {
  AbsorptionReport report;
  report.estimate = absorption_probability(cfg.params, cfg.x0, cfg.y0, cfg.drifted, cfg.mc);
  report.cases = case_count_batch(cfg.params, cfg.x0, cfg.y0, cfg.case_horizon, cfg.mc.dt,
                                  std::min<std::size_t>(cfg.mc.n, 2000),
                                  derive_master(cfg.mc.master_seed, 3));
  return report;
}

std::string symmetry_case_name(SymmetryCase c) {
  switch (c) {
    case SymmetryCase::Beta0: return "beta0";
    case SymmetryCase::RhoZeroWeighted: return "rho0_weighted";
    case SymmetryCase::NuZeroCEV: return "nu0_cev";
    case SymmetryCase::Beta1Special: return "beta1_special";
    case SymmetryCase::NotSymmetrizable: return "not_symmetrizable";
  }
  return "?";
}

std::string hamza_family_name(HamzaFamily f) {
  switch (f) {
    case HamzaFamily::CevPower: return "cev";
    case HamzaFamily::TerElst: return "ter_elst";
    case HamzaFamily::M0Slice: return "m0";
    case HamzaFamily::M1Slice: return "m1";
  }
  return "?";
}

std::string boundary_class_name(BoundaryClass c) {
  return c == BoundaryClass::NotEntrance ? "not_entrance" : "entrance";
}

namespace {

json params_json(const ModelParams& p) {
  return {{"beta", p.beta}, {"rho", p.rho}, {"nu", p.nu}, {"sigma", p.sigma}};
}

json ks_json(const KsReport& ks) {
  return {{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"n1", ks.n1}, {"n2", ks.n2}};
}

}  // namespace

std::string render_paths_csv(const std::vector<Path>& paths) {
  std::ostringstream out;
  out << "path_id,t,x,y,absorbed\n";
  for (std::size_t id = 0; id < paths.size(); ++id) {
    const auto& path = paths[id];
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      const auto& s = path.states[k];
      out << id << ',' << fmt_double(path.grid.time(static_cast<int>(k))) << ','
          << fmt_double(s.x) << ',' << fmt_double(s.y) << ',' << (s.absorbed ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::string render_equivalence_json(const EquivalenceReport& report) {
  json j;
  j["experiment"] = "equivalence";
  j["params"] = params_json(report.config.params);
  j["drifted"] = report.config.drifted;
  j["x0"] = report.config.x0;
  j["y0"] = report.config.y0;
  j["horizon"] = report.config.horizon;
  j["dt"] = report.config.dt;
  j["n"] = report.config.n_paths;
  j["alpha"] = report.config.alpha;
  j["min_pass"] = report.config.min_pass;
  j["seeds"] = report.config.seeds;
  json rows = json::array();
  for (const auto& row : report.per_seed) {
    rows.push_back({{"seed", row.seed},
                    {"ks_x", ks_json(row.ks_x)},
                    {"ks_y", ks_json(row.ks_y)},
                    {"pass", row.pass}});
  }
  j["ks"] = rows;
  j["pass"] = report.pass;
  return j.dump(2) + "\n";
}

std::string render_weights_audit_json(const WeightsAuditReport& report) {
  json j;
  j["experiment"] = "weights_audit";
  j["grid"] = {{"kind", "log"}, {"lo", 1e-3}, {"hi", 1e3}};
  j["gap_floor"] = report.gap_floor;
  j["residual_ceiling"] = report.residual_ceiling;
  json adhoc = json::array();
  for (const auto& c : report.adhoc) {
    json viols = json::array();
    for (const auto& v : c.violations) viols.push_back({{"x", v[0]}, {"y", v[1]}, {"gap", v[2]}});
    adhoc.push_back({{"weight", "adhoc"},
                     {"beta", c.beta},
                     {"rho", c.rho},
                     {"min_gap", c.min_gap},
                     {"violations", viols}});
  }
  j["adhoc"] = adhoc;
  json eigen = json::array();
  for (const auto& c : report.eigen) {
    eigen.push_back({{"weight", "legendre_radial"},
                     {"beta", c.beta},
                     {"rho", c.rho},
                     {"c", c.c},
                     {"n", c.n},
                     {"max_residual", c.max_residual}});
  }
  j["radial"] = eigen;
  j["pass"] = report.pass;
  return j.dump(2) + "\n";
}

std::string render_classification_csv(const std::vector<ClassificationCell>& cells) {
  std::ostringstream out;
  out << "beta,rho,nu,verdict,defect,tolerance\n";
  for (const auto& c : cells) {
    out << fmt_double(c.beta) << ',' << fmt_double(c.rho) << ',' << fmt_double(c.nu) << ','
        << symmetry_case_name(c.verdict) << ',' << fmt_double(c.defect) << ','
        << fmt_double(c.tolerance) << '\n';
  }
  return out.str();
}

std::string render_closability_csv(const std::vector<ClosabilityRow>& rows) {
  std::ostringstream out;
  out << "family,beta,closable,radon,varadhan_valid,singular_set,threshold\n";
  for (const auto& r : rows) {
    out << hamza_family_name(r.family) << ',' << fmt_double(r.beta) << ','
        << (r.verdict.closable ? 1 : 0) << ',' << (r.verdict.radon ? 1 : 0) << ','
        << (r.verdict.varadhan_valid ? 1 : 0) << ',' << r.verdict.singular_set << ','
        << r.verdict.parameter_threshold << '\n';
  }
  return out.str();
}

std::string render_boundary_csv(const std::vector<BoundaryRow>& rows) {
  std::ostringstream out;
  out << "beta,class,integral\n";
  for (const auto& r : rows) {
    out << fmt_double(r.beta) << ',' << boundary_class_name(r.cls) << ','
        << fmt_double(r.integral) << '\n';
  }
  return out.str();
}

std::string render_absorption_json(const AbsorptionConfig& cfg, const AbsorptionReport& report) {
  json j;
  j["experiment"] = "absorption";
  j["params"] = params_json(cfg.params);
  j["x0"] = cfg.x0;
  j["y0"] = cfg.y0;
  j["drifted"] = cfg.drifted;
  j["n"] = report.estimate.n;
  j["p_hat"] = report.estimate.p_hat;
  j["ci"] = {report.estimate.ci.lo, report.estimate.ci.hi};
  j["tail_fraction"] = report.estimate.tail_fraction;
  j["truncation_horizon"] = report.estimate.truncation_horizon;
  j["case_counts"] = {{"hit_before_clock", report.cases.hit_before_clock},
                      {"clock_ends_first", report.cases.clock_ends_first},
                      {"simultaneous", report.cases.simultaneous},
                      {"undecided", report.cases.undecided}};
  return j.dump(2) + "\n";
}

}  // namespace sabrlab
