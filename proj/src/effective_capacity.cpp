#include "hcnqos/effective_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hcnqos/errors.hpp"
#include "hcnqos/interference.hpp"

namespace hcnqos {

namespace {

// Per evaluation point sums over trials, with w = (1 + SINR)^-beta - 1.
struct Moments {
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double sum_log = 0.0;  // sum of ln(1 + SINR)
  double sum_dz = 0.0;   // sum of dz/dI, lower bound only

  void add(double w, double log1p_sinr) {
    sum_w += w;
    sum_w2 += w * w;
    sum_log += log1p_sinr;
  }
  Moments& operator+=(const Moments& o) {
    sum_w += o.sum_w;
    sum_w2 += o.sum_w2;
    sum_log += o.sum_log;
    sum_dz += o.sum_dz;
    return *this;
  }
};

struct EvalPoint {
  DuplexMode mode;
  double extra_w;  // RSI for FD points
  double beta;
};

std::vector<EvalPoint> evaluation_points(const LinkScenario& s, std::span<const double> etas) {
  std::vector<EvalPoint> pts;
  pts.reserve(etas.size() + 1);
  pts.push_back({DuplexMode::hd, 0.0, s.qos.beta() * duplex_rate_factor(DuplexMode::hd)});
  for (double eta : etas) {
    DuplexConfig d = s.duplex;
    d.mode = DuplexMode::fd;
    d.eta = eta;
    d.validate();
    pts.push_back({DuplexMode::fd, rsi_power(d.ue_tx_power_w, d), s.qos.beta()});
  }
  return pts;
}

std::vector<Moments> reduce(const std::vector<std::vector<Moments>>& blocks, std::size_t width) {
  std::vector<Moments> total(width);
  for (const auto& b : blocks) {
    for (std::size_t k = 0; k < width; ++k) total[k] += b[k];
  }
  return total;
}

void annotate_bound(ECEstimate& e, double beta) {
  e.bound_guaranteed = beta <= 1.0;
  if (!e.bound_guaranteed) {
    std::ostringstream msg;
    msg << "effective exponent beta = " << beta << " > 1: Jensen ordering is not guaranteed";
    e.notes.push_back(msg.str());
  }
}

// EC = -ln(Z) / theta with Z = 1 + mean(w); delta-method standard error.
ECEstimate finish(const Moments& m, std::uint64_t n, const EvalPoint& p, const QoSConfig& qos,
                  EcMethod method, double extra_var_z = 0.0) {
  ECEstimate e;
  e.trials = n;
  e.theta = qos.theta;
  e.mode = p.mode;
  e.method = method;
  const double nn = static_cast<double>(n);
  const double mean_w = m.sum_w / nn;
  const double z = 1.0 + mean_w;
  e.ec_bits = std::max(0.0, -std::log1p(mean_w) / qos.theta);
  double var_z = 0.0;
  if (n > 1) var_z = std::max(0.0, (m.sum_w2 - nn * mean_w * mean_w) / (nn - 1.0)) / nn;
  var_z += extra_var_z;
  e.std_error_bits = std::sqrt(var_z) / (qos.theta * z);
  e.mean_rate_bits = qos.bits_per_nat() * duplex_rate_factor(p.mode) * m.sum_log / nn;
  return e;
}

void require_trials(std::uint64_t n, const char* what) {
  if (n == 0) throw ValidationError(std::string(what) + " must be >= 1");
}

}  // namespace

const char* to_string(EcMethod method) {
  switch (method) {
    case EcMethod::exact_mc:
      return "exact_mc";
    case EcMethod::lower_bound_analytic:
      return "lower_bound_analytic";
    case EcMethod::lower_bound_simulated:
      return "lower_bound_simulated";
  }
  return "unknown";
}

void LinkScenario::validate() const {
  hcnqos::validate(topology);
  topology.tagged();
  duplex.validate();
  qos.validate();
  if (!(noise_w > 0.0)) throw ValidationError("noise power must be > 0");
}

double g(double s, double interference, const GParams& p) {
  return std::pow(1.0 + s / (interference + p.a), -p.beta);
}

double g_second_derivative(double s, double interference, const GParams& p) {
  const double u = interference + p.a;
  return p.beta * s / (u * u * u * u) * std::pow(1.0 + s / u, -(p.beta + 2.0)) *
         (-2.0 * u + (p.beta - 1.0) * s);
}

bool g_concavity_check(const GParams& p, double s, std::span<const double> grid) {
  for (double i : grid) {
    if (g_second_derivative(s, i, p) > 0.0) return false;
    if (s > 0.0 && p.beta > 0.0) {
      const double snr = s / (i + p.a);
      if (!(p.beta < 1.0 + 2.0 / snr)) return false;
    }
  }
  return true;
}

TrialSampler::TrialSampler(const NetworkTopology& topology, double ue_tx_power_w, TrialHooks hooks)
    : ue_power_w_(ue_tx_power_w), hooks_(hooks) {
  const SmallCell& tagged = topology.tagged();
  tagged_index_ = *topology.tagged_index;
  tagged_center_ = tagged.center;
  tagged_radius_m_ = tagged.radius_m;
  tagged_power_w_ = tagged.power_w;
  tagged_alpha_ = tagged.alpha;
  cell_count_ = topology.cells.size();

  bss_.push_back({topology.macro.position, topology.macro.power_w, topology.macro.alpha});
  for (std::size_t j = 0; j < topology.cells.size(); ++j) {
    if (j == tagged_index_) continue;
    const SmallCell& c = topology.cells[j];
    bss_.push_back({c.center, c.power_w, c.alpha});
    ues_.push_back({c.center, c.radius_m, c.alpha, j});
  }
}

double TrialSampler::fading(Rng& rng) const {
  return hooks_.unit_fading ? 1.0 : sample_fading(rng);
}

PolarPoint TrialSampler::place(double radius_m, Rng& rng) const {
  return hooks_.pinned_ue ? *hooks_.pinned_ue : sample_uniform_disk(radius_m, rng);
}

LinkSample TrialSampler::draw(Rng& rng, TrialDraw* record) const {
  LinkSample out;
  const PolarPoint local = place(tagged_radius_m_, rng);
  const Point ue = local.to_cartesian(tagged_center_);
  out.signal_w = tagged_power_w_ * fading(rng) * path_loss_gain(local.r, tagged_alpha_);

  if (record) {
    record->ue_positions.assign(cell_count_, PolarPoint{});
    record->ue_positions[tagged_index_] = local;
    record->tagged_ue = local;
  }

  double bs = 0.0;
  for (const Emitter& e : bss_) {
    const double dx = ue.x - e.position.x;
    const double dy = ue.y - e.position.y;
    bs += e.power_w * fading(rng) * path_loss_gain_sq(dx * dx + dy * dy, e.alpha);
  }
  double ues = 0.0;
  for (const UeCell& c : ues_) {
    const PolarPoint q = place(c.radius_m, rng);
    if (record) record->ue_positions[c.index] = q;
    const Point p = q.to_cartesian(c.center);
    const double dx = ue.x - p.x;
    const double dy = ue.y - p.y;
    ues += ue_power_w_ * fading(rng) * path_loss_gain_sq(dx * dx + dy * dy, c.alpha);
  }
  out.bs_interference_w = bs;
  out.ue_interference_w = ues;
  return out;
}

EcGrid ec_exact_mc_grid(const LinkScenario& scenario, std::span<const double> etas,
                        const MonteCarloOptions& options) {
  scenario.validate();
  require_trials(options.trials, "trials");
  const TrialSampler sampler(scenario.topology, scenario.duplex.ue_tx_power_w, options.hooks);
  const std::vector<EvalPoint> pts = evaluation_points(scenario, etas);
  const std::size_t width = pts.size();
  const double noise = scenario.noise_w;

  auto blocks = run_blocks<std::vector<Moments>>(
      options.trials, options.seed, Stream::trials, options.workers,
      [width] { return std::vector<Moments>(width); },
      [&](Rng& rng, std::uint64_t, std::uint64_t count, std::vector<Moments>& acc) {
        for (std::uint64_t t = 0; t < count; ++t) {
          const LinkSample ls = sampler.draw(rng);
          for (std::size_t k = 0; k < width; ++k) {
            const EvalPoint& p = pts[k];
            double denom = ls.bs_interference_w + noise;
            if (p.mode == DuplexMode::fd) denom += ls.ue_interference_w + p.extra_w;
            const double l = std::log1p(ls.signal_w / denom);
            acc[k].add(std::expm1(-p.beta * l), l);
          }
        }
      });
  const std::vector<Moments> total = reduce(blocks, width);

  EcGrid out;
  out.hd = finish(total[0], options.trials, pts[0], scenario.qos, EcMethod::exact_mc);
  for (std::size_t k = 1; k < width; ++k) {
    out.fd.push_back(finish(total[k], options.trials, pts[k], scenario.qos, EcMethod::exact_mc));
  }
  return out;
}

ECEstimate ec_exact_mc(const LinkScenario& scenario, const MonteCarloOptions& options) {
  if (scenario.duplex.mode == DuplexMode::hd) {
    return ec_exact_mc_grid(scenario, {}, options).hd;
  }
  const double eta = scenario.duplex.eta;
  return ec_exact_mc_grid(scenario, std::span<const double>(&eta, 1), options).fd.front();
}

namespace {

struct MeanInterference {
  double hd_w = 0.0;
  double fd_w = 0.0;
  double hd_var_w = 0.0;  // variance of the mean estimate (simulated source only)
  double fd_var_w = 0.0;
  std::vector<std::string> warnings;
};

MeanInterference analytic_mean(const LinkScenario& s) {
  DuplexConfig fd = s.duplex;
  fd.mode = DuplexMode::fd;
  const MeanInterferenceBreakdown b = total_mean_interference(s.topology, fd);
  MeanInterference m;
  m.hd_w = b.bs_total_w();
  m.fd_w = b.total_w;
  m.warnings = b.warnings;
  return m;
}

MeanInterference simulated_mean(const LinkScenario& s, const LowerBoundOptions& o) {
  const std::uint64_t n = o.interference_trials ? o.interference_trials : o.signal_samples;
  const TrialSampler sampler(s.topology, s.duplex.ue_tx_power_w, o.hooks);
  struct Acc {
    double hd = 0.0, hd2 = 0.0, fd = 0.0, fd2 = 0.0;
  };
  auto blocks = run_blocks<Acc>(
      n, o.seed, Stream::lb_interference, o.workers, [] { return Acc{}; },
      [&](Rng& rng, std::uint64_t, std::uint64_t count, Acc& acc) {
        for (std::uint64_t t = 0; t < count; ++t) {
          const LinkSample ls = sampler.draw(rng);
          const double fd = ls.bs_interference_w + ls.ue_interference_w;
          acc.hd += ls.bs_interference_w;
          acc.hd2 += ls.bs_interference_w * ls.bs_interference_w;
          acc.fd += fd;
          acc.fd2 += fd * fd;
        }
      });
  Acc total;
  for (const Acc& b : blocks) {
    total.hd += b.hd;
    total.hd2 += b.hd2;
    total.fd += b.fd;
    total.fd2 += b.fd2;
  }
  const double nn = static_cast<double>(n);
  MeanInterference m;
  m.hd_w = total.hd / nn;
  m.fd_w = total.fd / nn;
  if (n > 1) {
    m.hd_var_w = std::max(0.0, (total.hd2 - nn * m.hd_w * m.hd_w) / (nn - 1.0)) / nn;
    m.fd_var_w = std::max(0.0, (total.fd2 - nn * m.fd_w * m.fd_w) / (nn - 1.0)) / nn;
  }
  return m;
}

struct SignalModel {
  double power_w;
  double radius_m;
  double alpha;
};

// E_s[w] and E_s[ln(1 + SINR)] for one evaluation point, by nested adaptive
// quadrature over the distance r (density 2r/R^2) and the fading h ~ Exp(1).
struct QuadratureMoments {
  double mean_w;
  double mean_log;
};

QuadratureMoments quadrature_expectation(const SignalModel& sig, double denom, double beta,
                                         const TrialHooks& hooks) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kTol = 1e-10;
  constexpr unsigned kDepth = 20;
  const double inf = std::numeric_limits<double>::infinity();

  auto over_fading = [&](double gain, auto&& f) {
    if (hooks.unit_fading) return f(gain);
    auto integrand = [&](double h) { return std::exp(-h) * f(gain * h); };
    return Quad::integrate(integrand, 0.0, inf, kDepth, kTol);
  };
  auto over_distance = [&](auto&& f) {
    if (hooks.pinned_ue) return over_fading(sig.power_w * path_loss_gain(hooks.pinned_ue->r, sig.alpha) / denom, f);
    const double inv_area = 2.0 / (sig.radius_m * sig.radius_m);
    auto integrand = [&](double r) {
      return inv_area * r * over_fading(sig.power_w * path_loss_gain(r, sig.alpha) / denom, f);
    };
    const double knee = std::min(kNearFieldDistance_m, sig.radius_m);
    return Quad::integrate(integrand, 0.0, knee, kDepth, kTol) +
           Quad::integrate(integrand, knee, sig.radius_m, kDepth, kTol);
  };

  QuadratureMoments q;
  q.mean_w = over_distance([&](double x) { return std::expm1(-beta * std::log1p(x)); });
  q.mean_log = over_distance([&](double x) { return std::log1p(x); });
  return q;
}

}  // namespace

LowerBoundGrid ec_lower_bound_grid(const LinkScenario& scenario, std::span<const double> etas,
                                   const LowerBoundOptions& options) {
  scenario.validate();
  require_trials(options.signal_samples, "signal_samples");

  const bool simulated = options.source == InterferenceSource::simulated;
  const MeanInterference ibar =
      simulated ? simulated_mean(scenario, options) : analytic_mean(scenario);
  const EcMethod method = simulated ? EcMethod::lower_bound_simulated : EcMethod::lower_bound_analytic;

  const std::vector<EvalPoint> pts = evaluation_points(scenario, etas);
  const std::size_t width = pts.size();
  std::vector<double> denom(width), ibar_var(width);
  for (std::size_t k = 0; k < width; ++k) {
    const bool hd = pts[k].mode == DuplexMode::hd;
    denom[k] = (hd ? ibar.hd_w : ibar.fd_w) + pts[k].extra_w + scenario.noise_w;
    ibar_var[k] = hd ? ibar.hd_var_w : ibar.fd_var_w;
  }

  const SmallCell& tagged = scenario.topology.tagged();
  const SignalModel sig{tagged.power_w, tagged.radius_m, tagged.alpha};

  LowerBoundGrid out;
  out.mean_interference_hd_w = ibar.hd_w;
  out.mean_interference_fd_w = ibar.fd_w;
  out.warnings = ibar.warnings;

  std::vector<ECEstimate> ests;
  ests.reserve(width);
  if (options.expectation == SignalExpectation::monte_carlo) {
    const TrialHooks hooks = options.hooks;
    auto blocks = run_blocks<std::vector<Moments>>(
        options.signal_samples, options.seed, Stream::lb_signal, options.workers,
        [width] { return std::vector<Moments>(width); },
        [&](Rng& rng, std::uint64_t, std::uint64_t count, std::vector<Moments>& acc) {
          for (std::uint64_t t = 0; t < count; ++t) {
            const double r = hooks.pinned_ue ? hooks.pinned_ue->r : sample_uniform_disk(sig.radius_m, rng).r;
            const double h = hooks.unit_fading ? 1.0 : sample_fading(rng);
            const double s = sig.power_w * h * path_loss_gain(r, sig.alpha);
            for (std::size_t k = 0; k < width; ++k) {
              const double x = s / denom[k];
              const double l = std::log1p(x);
              const double beta = pts[k].beta;
              acc[k].add(std::expm1(-beta * l), l);
              // dz/dI of (1 + s/(I + a))^-beta
              acc[k].sum_dz += beta * std::exp(-(beta + 1.0) * l) * x / denom[k];
            }
          }
        });
    const std::vector<Moments> total = reduce(blocks, width);
    const double nn = static_cast<double>(options.signal_samples);
    for (std::size_t k = 0; k < width; ++k) {
      const double dz = total[k].sum_dz / nn;
      ests.push_back(finish(total[k], options.signal_samples, pts[k], scenario.qos, method,
                            dz * dz * ibar_var[k]));
    }
  } else {
    for (std::size_t k = 0; k < width; ++k) {
      const QuadratureMoments q = quadrature_expectation(sig, denom[k], pts[k].beta, options.hooks);
      double extra_var = 0.0;
      if (ibar_var[k] > 0.0) {
        // dZ/dI by a central difference of the quadrature itself.
        const double step = 1e-4 * (denom[k] - scenario.noise_w - pts[k].extra_w);
        const double up = quadrature_expectation(sig, denom[k] + step, pts[k].beta, options.hooks).mean_w;
        const double dn = quadrature_expectation(sig, denom[k] - step, pts[k].beta, options.hooks).mean_w;
        const double dz = (up - dn) / (2.0 * step);
        extra_var = dz * dz * ibar_var[k];
      }
      Moments m;
      m.sum_w = q.mean_w;
      m.sum_log = q.mean_log;
      m.sum_w2 = q.mean_w * q.mean_w;
      ests.push_back(finish(m, 1, pts[k], scenario.qos, method, extra_var));
    }
  }

  for (std::size_t k = 0; k < width; ++k) annotate_bound(ests[k], pts[k].beta);
  out.estimates.hd = std::move(ests[0]);
  for (std::size_t k = 1; k < width; ++k) out.estimates.fd.push_back(std::move(ests[k]));
  return out;
}

ECEstimate ec_lower_bound(const LinkScenario& scenario, const LowerBoundOptions& options) {
  if (scenario.duplex.mode == DuplexMode::hd) {
    return ec_lower_bound_grid(scenario, {}, options).estimates.hd;
  }
  const double eta = scenario.duplex.eta;
  return ec_lower_bound_grid(scenario, std::span<const double>(&eta, 1), options).estimates.fd.front();
}

ThetaCheck check_theta_constraint(const QoSConfig& qos) {
  ThetaCheck c;
  c.bound = 1.0 / qos.bits_per_nat();
  c.ok = qos.theta <= c.bound;
  return c;
}

}  // namespace hcnqos
