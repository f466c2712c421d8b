#include "statlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "statlab/adversary.hpp"
#include "statlab/chain.hpp"
#include "statlab/error.hpp"
#include "statlab/minnorm.hpp"
#include "statlab/stationarity.hpp"

namespace statlab {

bool SuiteReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (const Check& k : checks) c.push_back(k.to_json());
  return {{"suite", suite}, {"seed", seed}, {"checks", c}, {"all_pass", all_pass()}, {"seconds", seconds}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"prop1",    "channel", "quadratic", "remark",
                                                 "theorem1", "minnorm", "smoothing"};
  return names;
}

namespace {

Vector random_unit(std::size_t d, Rng& rng) { return sample_sphere(d, 1.0, rng); }

// unit vector orthogonal to a (d >= 2)
Vector random_orthogonal_unit(const Vector& a, Rng& rng) {
  const Vector abar = normalize(a);
  for (;;) {
    Vector v = random_unit(a.dim(), rng);
    axpy(-inner(v, abar), abar, v);
    const double n = norm(v);
    if (n > 1e-3) return v / n;
  }
}

// ---------------------------------------------------------------------------

void prop1_checks(SuiteReport& r, Exec exec) {
  const Rng rng(r.seed);
  const SpiralCounterexample plain(1.0);
  const SpiralCounterexample extended(1.0, true);
  const PureEval f = [plain](const Vector& x) { return spiral_eval(plain, x); };
  const PureEval fe = [extended](const Vector& x) { return spiral_eval(extended, x); };

  FunctionOracle oracle(2, f);
  Rng cert_rng = rng.derive("certifier");
  const StationarityCertificate cert =
      certify_delta_eps(oracle, Vector::zeros(2), 1.0, 1e-8, Sampling::stencil({{0.0, 1.0}, {0.0, -1.0}}), cert_rng,
                        exec);
  r.checks.push_back(check_le("AC4", "stencil_min_norm_at_origin", cert.value, 1e-8));

  const auto ball = [](double radius) {
    return [radius](std::size_t, Rng& s) { return sample_ball(2, radius, s); };
  };
  const NormSweep inner_sweep = gradient_norm_sweep(f, ball(1.0), 100000, rng.derive("delta_ball"), false, exec);
  r.checks.push_back(check_ge("AC4", "min_gradient_norm_delta_ball", inner_sweep.min_norm, 1.0 - 1e-9));
  const NormSweep outer_sweep = gradient_norm_sweep(f, ball(2.0), 100000, rng.derive("two_delta_ball"), false, exec);
  r.checks.push_back(check_le("AC4", "max_gradient_norm_two_delta_ball", outer_sweep.max_norm,
                              2.0 * std::numbers::pi + 1e-9));

  // the extension agrees with f on the 2 delta ball and is globally Lipschitz
  std::vector<double> gaps(10000);
  const Rng agree = rng.derive("extension_agreement");
  for_each_index(
      gaps.size(),
      [&](std::size_t i) {
        Rng s = agree.stream(i);
        const Vector x = sample_ball(2, 2.0 * (1.0 - 1e-9), s);
        const FirstOrderReply a = f(x);
        const FirstOrderReply b = fe(x);
        gaps[i] = std::max(std::abs(a.value - b.value), norm_inf(a.subgrad - b.subgrad));
      },
      exec);
  r.checks.push_back(check_le("AC4", "extension_matches_inside_two_delta", *std::max_element(gaps.begin(), gaps.end()),
                              0.0));
  const ValueEval fev = [extended](const Vector& x) { return spiral_eval(extended, x).value; };
  const LipschitzSweep lip = lipschitz_ratio_sweep(
      fev,
      [](std::size_t i, Rng& s) {
        const Vector a = sample_ball(2, 5.0, s);
        const double scale = (i % 2 == 0) ? 1e-3 : 5.0;
        return std::make_pair(a, a + sample_ball(2, scale, s));
      },
      100000, rng.derive("extension_lipschitz"), exec);
  r.checks.push_back(check_le("AC4", "extension_lipschitz_ratio", lip.max_ratio, extended.lipschitz() + 1e-6));
}

// ---------------------------------------------------------------------------

constexpr std::size_t kChannelDim = 3;

ChannelInstance random_channel(Rng& s) {
  const double wn = 0.05 + 0.95 * s.uniform();
  return ChannelInstance(random_unit(kChannelDim, s) * wn);
}

// mixture concentrated near the three non-differentiable sets
Vector boundary_dense_point(std::size_t i, const ChannelInstance& c, Rng& s) {
  const Vector& w = c.w();
  const double wn = norm(w);
  const double tiny = std::pow(10.0, -12.0 * s.uniform());
  switch (i % 4) {
    case 0:
      if (i % 1000 == 0) return Vector::zeros(kChannelDim);
      return sample_ball(kChannelDim, tiny * wn, s);
    case 1:
      if (i % 1000 == 1) return -w;
      return -w + sample_ball(kChannelDim, tiny * wn, s);
    case 2: {
      // z + w on the cone wbar'(unit) = 1/2, optionally nudged off it
      const Vector v = random_orthogonal_unit(w, s);
      const Vector dir = c.w_bar() * 0.5 + v * (std::sqrt(3.0) / 2.0);
      const double rho = 3.0 * s.uniform();
      Vector z = -w + dir * rho;
      if (s.uniform() < 0.5) z += sample_ball(kChannelDim, tiny * std::max(rho, 1e-3), s);
      return z;
    }
    default: return sample_ball(kChannelDim, 3.0, s);
  }
}

void channel_checks(SuiteReport& r, Exec exec) {
  const Rng rng(r.seed);

  // Lipschitz ratio: each pair carries its own w
  std::vector<double> ratios(100000);
  const Rng lr = rng.derive("lipschitz");
  for_each_index(
      ratios.size(),
      [&](std::size_t i) {
        Rng s = lr.stream(i);
        const ChannelInstance c = random_channel(s);
        const Vector a = (i % 3 == 0) ? boundary_dense_point(i, c, s) : sample_ball(kChannelDim, 3.0, s);
        const double scale = (i % 2 == 0) ? 1e-4 : 2.0;
        const Vector b = a + sample_ball(kChannelDim, scale, s);
        const double dist = distance(a, b);
        ratios[i] = dist == 0.0 ? 0.0 : std::abs(c.raw_value(a) - c.raw_value(b)) / dist;
      },
      exec);
  r.checks.push_back(
      check_le("AC5", "lipschitz_ratio", *std::max_element(ratios.begin(), ratios.end()), ChannelInstance::kLipschitz + 1e-6));

  // smallest returned subgradient over boundary-dense samples
  const std::size_t n_norm = 1000000;
  std::vector<double> norms(n_norm);
  std::vector<double> margins(n_norm);
  std::vector<char> differentiable(n_norm);
  const Rng nr = rng.derive("subgradient_norms");
  for_each_index(
      n_norm,
      [&](std::size_t i) {
        Rng s = nr.stream(i);
        const ChannelInstance c = random_channel(s);
        const Vector x = boundary_dense_point(i, c, s);
        const FirstOrderReply reply = channel_eval(c, x);
        norms[i] = norm(reply.subgrad);
        differentiable[i] = reply.differentiable;
        margins[i] = norms[i] - subdiff_norm_lower_bound(c, x).value;
      },
      exec);
  r.checks.push_back(check_ge("AC5", "min_subgradient_norm_boundary_dense", *std::min_element(norms.begin(), norms.end()),
                              1.0 / std::numbers::sqrt2 - 1e-6));
  r.checks.back().details = {{"samples", n_norm}};
  r.checks.push_back(check_ge("AC5", "analytic_bound_consistency_margin",
                              *std::min_element(margins.begin(), margins.end()), -1e-9));
  double min_diff = std::numeric_limits<double>::infinity();
  std::size_t n_diff = 0;
  for (std::size_t i = 0; i < n_norm; ++i) {
    if (differentiable[i]) {
      min_diff = std::min(min_diff, norms[i]);
      ++n_diff;
    }
  }
  r.checks.push_back(check_ge("AC5", "min_gradient_norm_differentiable", min_diff, 1.0 - 1e-9));
  r.checks.back().details = {{"differentiable_samples", n_diff}};
}

// ---------------------------------------------------------------------------

void quadratic_checks(SuiteReport& r, Exec exec) {
  const double q = HardQuadratic::chain_q();
  const double k = HardQuadratic::chain_k();
  r.checks.push_back(check_le("AC3", "identity_1_minus_6q_plus_q2", std::abs(1.0 - 6.0 * q + q * q), 1e-14));
  r.checks.push_back(check_le("AC3", "identity_k_plus_4_q_minus_1", std::abs((k + 4.0) * q - 1.0), 1e-14));
  const double x_star_cap = std::sqrt((std::numbers::sqrt2 - 1.0) / 2.0);
  for (int T : {2, 5, 10}) {
    const std::string tag = "_T" + std::to_string(T);
    const HardQuadratic hq(T, 2 * static_cast<std::size_t>(T));
    const SpectrumBounds sb = chain_spectrum_check(hq);
    r.checks.push_back(check_ge("AC3", "lambda_min" + tag, sb.lambda_min, 0.5 - 1e-9));
    r.checks.push_back(check_le("AC3", "lambda_max" + tag, sb.lambda_max, 1.0 + 1e-9));
    const auto geom = ChainGeometry::natural(std::make_shared<const HardQuadratic>(hq));
    r.checks.push_back(check_le("AC3", "gradient_at_x_star_inf_norm" + tag, norm_inf(geom->quadratic(hq.x_star()).subgrad),
                                1e-12));
    r.checks.push_back(check_le("AC3", "x_star_norm" + tag, norm(hq.x_star()), x_star_cap + 1e-12));
  }

  for (const char* solver : {"subgrad", "steepest"}) {
    for (int T : {2, 5, 10, 15}) {
      for (const char* experiment : {"quad_lower_bound", "rotation_lower_bound"}) {
        ExperimentConfig cfg;
        cfg.experiment = experiment;
        cfg.T = T;
        cfg.d = 2 * static_cast<std::size_t>(T);
        cfg.seed = r.seed;
        cfg.solver = solver;
        const ExperimentResult res = run_experiment(cfg, exec);
        for (Check c : res.verdicts) {
          c.name = std::string(experiment) + "/" + solver + "/T" + std::to_string(T) + "/" + c.name;
          r.checks.push_back(std::move(c));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------

void remark_checks(SuiteReport& r, Exec exec) {
  const Rng rng(r.seed);
  for (double delta : {0.05, 0.1}) {
    const std::string tag = "_delta" + std::to_string(delta).substr(0, 4);
    Rng s = rng.derive("remark" + tag);
    const Vector w = random_unit(kChannelDim, s) * (delta / 2.0);
    const Vector v = random_orthogonal_unit(w, s) * delta;
    const ChannelInstance gt = ChannelInstance::clamped_at_origin_gap(w);
    const FirstOrderReply at_v = channel_eval(gt, v);
    const FirstOrderReply at_minus_v = channel_eval(gt, -v);
    r.checks.push_back(check_le("AC8", "gradient_at_v_is_unit_v" + tag, norm_inf(at_v.subgrad - normalize(v)), 1e-12));
    r.checks.push_back(
        check_le("AC8", "half_sum_gradients_pm_v" + tag, norm_inf((at_v.subgrad + at_minus_v.subgrad) * 0.5), 1e-12));

    FunctionOracle oracle(kChannelDim, [gt](const Vector& x) { return channel_eval(gt, x); });
    Rng cert_rng = s.derive("certifier");
    const StationarityCertificate cert =
        certify_delta_eps(oracle, Vector::zeros(kChannelDim), delta, 1e-12, Sampling::stencil({v, -v}), cert_rng, exec);
    r.checks.push_back(check_le("AC8", "certifier_witness_at_origin" + tag, cert.value, 1e-12));
    r.checks.back().details = {{"witness", cert.witness.has_value()}};

    const StationarityCertificate dist = near_stationarity_distance_lb(gt, Vector::zeros(kChannelDim));
    r.checks.push_back(check_ge("AC8", "near_distance_certificate_at_origin" + tag, dist.value, 1.0 / 7.0 - 1e-9));

    // wherever the clamp is active the point is at least 1/7 from the origin
    const std::size_t n = 200000;
    std::vector<double> clamp_norms(n, std::numeric_limits<double>::infinity());
    const Rng cr = s.derive("clamp_region");
    for_each_index(
        n,
        [&](std::size_t i) {
          Rng si = cr.stream(i);
          const Vector x = sample_ball(kChannelDim, 1.5, si);
          if (region_classify(gt, x) == ChannelRegion::clamp_active) clamp_norms[i] = norm(x);
        },
        exec);
    const std::size_t hits =
        static_cast<std::size_t>(std::count_if(clamp_norms.begin(), clamp_norms.end(), [](double x) { return std::isfinite(x); }));
    r.checks.push_back(check_ge("AC8", "clamp_region_min_distance_from_origin" + tag,
                                *std::min_element(clamp_norms.begin(), clamp_norms.end()), 1.0 / 7.0 - 1e-9));
    r.checks.back().details = {{"clamp_hits", hits}, {"samples", n}};
  }
}

// ---------------------------------------------------------------------------

void theorem1_checks(SuiteReport& r, Exec exec) {
  for (const char* geometry : {"auto", "rotation"}) {
    ExperimentConfig cfg;
    cfg.experiment = "theorem1";
    cfg.T = 10;
    cfg.d = 20;
    cfg.seed = r.seed;
    cfg.solver = "subgrad";
    cfg.adversary = {{"geometry", geometry}};
    const ExperimentResult res = run_experiment(cfg, exec);
    for (Check c : res.verdicts) {
      c.name = std::string("geometry_") + geometry + "/" + c.name;
      r.checks.push_back(std::move(c));
    }
  }
  ExperimentConfig cfg;
  cfg.experiment = "theorem1_randomized";
  cfg.T = 10;
  cfg.d = 200;
  cfg.seed = r.seed;
  cfg.trials = 100;
  cfg.solver = "smoothed";
  cfg.solver_params = {{"delta", 0.05}, {"samples_per_step", 1}};
  const ExperimentResult res = run_experiment(cfg, exec);
  for (const Check& c : res.verdicts) r.checks.push_back(c);
}

// ---------------------------------------------------------------------------

void minnorm_checks(SuiteReport& r, Exec exec) {
  const Rng rng(r.seed);
  const std::size_t n = 1000;
  std::vector<double> gaps(n);
  std::vector<double> coef_min(n);
  std::vector<double> sum_err(n);
  std::vector<double> recombine_err(n);
  std::vector<char> converged(n);
  for_each_index(
      n,
      [&](std::size_t i) {
        Rng s = rng.stream(i);
        const std::size_t count = 1 + s.next_u32() % 5;
        const std::size_t dim = 1 + s.next_u32() % 4;
        std::vector<Vector> pts;
        for (std::size_t j = 0; j < count; ++j) {
          Vector p = Vector::zeros(dim);
          for (std::size_t k = 0; k < dim; ++k) p[k] = s.normal();
          // occasional duplicates and collinear points
          if (j > 0 && s.uniform() < 0.1) p = pts[s.next_u32() % pts.size()];
          if (j > 0 && s.uniform() < 0.1) p = pts[0] * (s.uniform() * 2.0 - 1.0);
          pts.push_back(p);
        }
        const MinNormResult mn = min_norm_point(pts);
        gaps[i] = std::abs(mn.norm - min_norm_brute_oracle(pts));
        coef_min[i] = *std::min_element(mn.coefficients.begin(), mn.coefficients.end());
        double total = 0.0;
        Vector comb = Vector::zeros(dim);
        for (std::size_t j = 0; j < pts.size(); ++j) {
          total += mn.coefficients[j];
          axpy(mn.coefficients[j], pts[j], comb);
        }
        sum_err[i] = std::abs(total - 1.0);
        recombine_err[i] = std::max(norm(comb - mn.point), std::abs(mn.norm - norm(mn.point)));
        converged[i] = mn.converged;
      },
      exec);
  r.checks.push_back(check_le("AC9", "wolfe_vs_brute_max_gap", *std::max_element(gaps.begin(), gaps.end()), 1e-6));
  r.checks.back().details = {{"instances", n}};
  r.checks.push_back(check_ge("AC9", "min_coefficient", *std::min_element(coef_min.begin(), coef_min.end()), -1e-12));
  r.checks.push_back(check_le("AC9", "coefficient_sum_error", *std::max_element(sum_err.begin(), sum_err.end()), 1e-10));
  r.checks.push_back(
      check_le("AC9", "recombination_error", *std::max_element(recombine_err.begin(), recombine_err.end()), 1e-10));
  r.checks.push_back(check_true("AC9", "all_converged", std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; })));

  const MinNormResult pair = min_norm_point({{1.0, 0.0}, {-1.0, 0.0}});
  const double pair_err =
      std::max({std::abs(pair.norm), std::abs(pair.coefficients[0] - 0.5), std::abs(pair.coefficients[1] - 0.5)});
  r.checks.push_back(check_le("AC9", "example_pm_e1_exact", pair_err, 0.0));
  const MinNormResult single = min_norm_point({{1.0, 0.0}});
  r.checks.push_back(check_le("AC9", "example_singleton_exact",
                              std::max(std::abs(single.norm - 1.0), std::abs(single.coefficients[0] - 1.0)), 0.0));
}

// ---------------------------------------------------------------------------

void smoothing_checks(SuiteReport& r, Exec exec) {
  const Rng rng(r.seed);
  const SpiralCounterexample spiral(1.0);
  const double delta = 0.5;
  const double h = 1e-6;
  const std::size_t n = 20000;
  struct Target {
    const char* name;
    PureEval f;
  };
  const std::vector<Target> targets = {
      {"spiral", [spiral](const Vector& x) { return spiral_eval(spiral, x); }},
      {"warga", [](const Vector& x) { return warga_eval(x); }},
  };
  for (const Target& t : targets) {
    const ValueEval value = [f = t.f](const Vector& x) { return f(x).value; };
    Rng points = rng.derive(std::string("points_") + t.name);
    double worst = 0.0;
    for (int p = 0; p < 5; ++p) {
      const Vector x = sample_ball(2, 1.0, points);
      const Rng crn = points.stream(static_cast<std::uint64_t>(p));
      const SmoothedEstimate est = smoothed_estimate(t.f, x, delta, n, crn, exec);
      for (std::size_t k = 0; k < 2; ++k) {
        const Vector e = Vector::basis(2, k) * h;
        const double fd = (smoothed_value(value, x + e, delta, n, crn, exec) -
                           smoothed_value(value, x - e, delta, n, crn, exec)) /
                          (2.0 * h);
        worst = std::max(worst, std::abs(fd - est.mean_grad[k]));
      }
    }
    r.checks.push_back(check_le("AC10", std::string("estimator_vs_coupled_fd_") + t.name, worst, 1e-3));
  }

  const SmoothedEstimate origin =
      smoothed_estimate(targets[0].f, Vector::zeros(2), delta, 100000, rng.derive("odd_symmetry"), exec);
  Check c = check_le("AC10", "odd_symmetry_first_component_in_sigma", std::abs(origin.mean_grad[0]) / origin.grad_stderr[0],
                     3.0);
  c.details = {{"mean", origin.mean_grad[0]}, {"stderr", origin.grad_stderr[0]}};
  r.checks.push_back(std::move(c));
}

}  // namespace

SuiteReport run_suite(const std::string& name, std::uint64_t seed, Exec exec) {
  SuiteReport r;
  r.suite = name;
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  if (name == "prop1") {
    prop1_checks(r, exec);
  } else if (name == "channel") {
    channel_checks(r, exec);
  } else if (name == "quadratic") {
    quadratic_checks(r, exec);
  } else if (name == "remark") {
    remark_checks(r, exec);
  } else if (name == "theorem1") {
    theorem1_checks(r, exec);
  } else if (name == "minnorm") {
    minnorm_checks(r, exec);
  } else if (name == "smoothing") {
    smoothing_checks(r, exec);
  } else {
    throw ConfigError("unknown suite: " + name);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace statlab
