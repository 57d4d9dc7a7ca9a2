#include "hardylab/optimizer.hpp"

#include "hardylab/nelder_mead.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace hardylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Rotates columns p and q of u in place: u <- u * G(p,q).
void apply_rotation(Matrix& u, int p, int q, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    const double up = u(r, p);
    const double uq = u(r, q);
    u(r, p) = c * up + s * uq;
    u(r, q) = -s * up + c * uq;
  }
}

void rotation_from_angles(std::span<const double> angles, int d, Matrix& out) {
  out.setIdentity(d, d);
  std::size_t idx = 0;
  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) apply_rotation(out, p, q, angles[idx++]);
  }
}

struct Candidate {
  double value = -kInf;
  std::vector<double> x;
};

// Runs restart r = 0..n-1 on a small worker pool. Results are stored by
// restart index, so the outcome does not depend on scheduling.
template <class Fn>
std::vector<Candidate> run_restarts(int restarts, int threads, Fn&& one) {
  std::vector<Candidate> results(restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < restarts; r = next++) results[r] = one(r);
  };
  const int n = std::min(worker_count(threads), restarts);
  if (n <= 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

std::size_t best_index(const std::vector<Candidate>& cands) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < cands.size(); ++r) {
    if (cands[r].value > cands[best].value) best = r;
  }
  return best;
}

std::vector<double> restart_values(const std::vector<Candidate>& cands) {
  std::vector<double> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(c.value);
  return out;
}

NelderMeadOptions simplex_options(const OptimizerConfig& cfg, double step) {
  NelderMeadOptions o;
  o.max_evaluations = cfg.max_iterations;
  o.ftol = cfg.convergence_tol;
  o.xtol = std::max(1e-10, std::sqrt(cfg.convergence_tol) * 1e-2);
  o.initial_step = step;
  o.polish_rounds = cfg.polish_rounds;
  return o;
}

Matrix triangular_from_params(std::span<const double> p, int d, AnchorKind kind) {
  Matrix h = Matrix::Zero(d, d);
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const bool keep = kind == AnchorKind::bob_less_alice ? j >= i : j <= i;
      if (keep) h(i, j) = p[idx++];
    }
  }
  return h;
}

// Value of GH for a Schmidt-diagonal state and 2k bases given as angles.
// Owns its scratch space; one instance per restart.
class GhEvaluator {
 public:
  GhEvaluator(const InequalityCoeffs& c, StateRestriction restriction)
      : k_(c.k()), d_(c.d()), mes_(restriction == StateRestriction::mes_only),
        x_(to_double(c.x())), y_(to_double(c.y())), z_(to_double(c.z())), m_(to_double(c.m())),
        alice_(k_, Matrix(d_, d_)), bob_(k_, Matrix(d_, d_)), scaled_bob_(k_, Matrix(d_, d_)),
        lambda_(d_), amp_(d_, d_) {}

  std::size_t parameter_count() const {
    return (mes_ ? 0 : static_cast<std::size_t>(d_)) + 2 * static_cast<std::size_t>(k_) * angle_count(d_);
  }
  std::size_t state_offset() const { return mes_ ? 0 : static_cast<std::size_t>(d_); }

  bool load(std::span<const double> p) {
    if (mes_) {
      lambda_.setConstant(1.0 / std::sqrt(static_cast<double>(d_)));
    } else {
      for (int i = 0; i < d_; ++i) lambda_(i) = p[i];
      const double n = lambda_.norm();
      if (!(n > 1e-150) || !std::isfinite(n)) return false;
      lambda_ /= n;
    }
    const std::size_t na = angle_count(d_);
    std::size_t off = state_offset();
    for (int i = 0; i < k_; ++i, off += na) rotation_from_angles(p.subspan(off, na), d_, alice_[i]);
    for (int j = 0; j < k_; ++j, off += na) {
      rotation_from_angles(p.subspan(off, na), d_, bob_[j]);
      scaled_bob_[j] = lambda_.asDiagonal() * bob_[j];
    }
    return true;
  }

  double evaluate(std::span<const double> p) {
    if (!load(p)) return std::numeric_limits<double>::quiet_NaN();
    double v = m_ * less(k_ - 1, k_ - 1);
    for (int i = 1; i < k_; ++i) {
      v -= x_ * less(i, i - 1);
      v -= y_ * greater(i - 1, i - 1);
    }
    v -= z_ * less(0, k_ - 1);
    return v;
  }

  PureState state() const { return PureState(Matrix(lambda_.asDiagonal())); }

  MeasurementFamily family() const {
    std::vector<Basis> a, b;
    for (const auto& u : alice_) a.emplace_back(u);
    for (const auto& u : bob_) b.emplace_back(u);
    return MeasurementFamily(std::move(a), std::move(b));
  }

 private:
  double less(int i, int j) {
    amp_.noalias() = alice_[i].transpose() * scaled_bob_[j];
    double total = 0.0;
    for (int t = 1; t < d_; ++t)
      for (int s = 0; s < t; ++s) total += amp_(s, t) * amp_(s, t);
    return total;
  }
  double greater(int i, int j) {
    amp_.noalias() = alice_[i].transpose() * scaled_bob_[j];
    double total = 0.0;
    for (int t = 0; t < d_; ++t)
      for (int s = t + 1; s < d_; ++s) total += amp_(s, t) * amp_(s, t);
    return total;
  }

  int k_, d_;
  bool mes_;
  double x_, y_, z_, m_;
  std::vector<Matrix> alice_, bob_, scaled_bob_;
  Vector lambda_;
  Matrix amp_;
};

}  // namespace

int worker_count(int requested) {
  if (requested > 0) return requested;
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("HARDYLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

Basis basis_from_angles(std::span<const double> angles, int d) {
  if (d < 1 || angles.size() != angle_count(d)) {
    throw std::invalid_argument("expected " + std::to_string(angle_count(d)) + " angles for d=" +
                                std::to_string(d));
  }
  Matrix u;
  rotation_from_angles(angles, d, u);
  return Basis(std::move(u));
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("convergence_tol must be positive");
  if (polish_rounds < 0) throw std::invalid_argument("polish_rounds must be >= 0");
}

OptimizerConfig OptimizerConfig::sp_defaults() { return OptimizerConfig{}; }

OptimizerConfig OptimizerConfig::gh_defaults() {
  OptimizerConfig cfg;
  cfg.restarts = 256;
  return cfg;
}

int OptResult::hits(double tol) const {
  return static_cast<int>(std::count_if(restart_values.begin(), restart_values.end(),
                                        [&](double v) { return v >= value - tol; }));
}

double OptResult::spread() const {
  if (restart_values.empty()) return 0.0;
  auto sorted = restart_values;
  std::sort(sorted.begin(), sorted.end());
  return value - sorted[sorted.size() / 2];
}

OptResult maximize_sp(int k, int d, const Anchor& anchor, const OptimizerConfig& cfg) {
  const Scenario sc(k, d);
  anchor.validate(k);
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(d) * (d + 1) / 2;

  auto success = [&](std::span<const double> p) -> double {
    try {
      const PureState state = normalize_state(triangular_from_params(p, d, anchor.kind));
      return propagate_chain(state, anchor, sc).success;
    } catch (const DegenerateError&) {
      return -kInf;
    }
  };
  const Objective objective = [&](std::span<const double> p) { return -success(p); };
  const auto opts = simplex_options(cfg, 0.25);

  auto cands = run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<double> x0(n);
    for (auto& v : x0) v = coord(rng);
    auto res = nelder_mead_minimize(objective, std::move(x0), opts);
    // Report only the value obtained by re-propagating the final point.
    return Candidate{success(res.x), std::move(res.x)};
  });

  const std::size_t best = best_index(cands);
  if (!std::isfinite(cands[best].value)) throw DegenerateError("no restart produced a valid chain");
  PureState state = normalize_state(triangular_from_params(cands[best].x, d, anchor.kind));
  ChainResult chain = propagate_chain(state, anchor, sc);
  return OptResult{chain.success, std::move(state), std::move(chain.family), chain.residual,
                   cfg.restarts, cfg.seed, restart_values(cands)};
}

OptResult maximize_sp_qubit(int k, const OptimizerConfig& cfg) {
  if (k < 2) throw std::invalid_argument("qubit ladder needs k >= 2");
  cfg.validate();
  auto success = [k](std::span<const double> p) -> double {
    try {
      return qubit_success(p[0], p[1], k);
    } catch (const DegenerateError&) {
      return -kInf;
    }
  };
  const Objective objective = [&](std::span<const double> p) { return -success(p); };
  const auto opts = simplex_options(cfg, 0.1);

  auto cands = run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> angle(0.0, kPi / 2);
    std::vector<double> x0{angle(rng), angle(rng)};
    auto res = nelder_mead_minimize(objective, std::move(x0), opts);
    return Candidate{success(res.x), std::move(res.x)};
  });

  const std::size_t best = best_index(cands);
  const double theta = cands[best].x[0];
  const double phi = cands[best].x[1];
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = std::cos(theta);
  h(1, 1) = std::sin(theta);
  PureState state = normalize_state(h);
  // The full family follows from A_k by walking the chain.
  const auto bases = qubit_chain_basis(theta, phi, k);
  ChainResult chain = propagate_chain_from(state, ChainSlot{true, k}, bases.a_k, Scenario(k, 2));
  return OptResult{cands[best].value, std::move(state), std::move(chain.family), chain.residual,
                   cfg.restarts, cfg.seed, restart_values(cands)};
}

double gh_value(const Behavior& behavior, const InequalityCoeffs& coeffs) {
  if (!(behavior.scenario() == coeffs.scenario())) {
    throw DimensionError("behavior and inequality scenarios differ");
  }
  const int k = coeffs.k();
  double v = to_double(coeffs.m()) * prob_less_from_behavior(behavior, k - 1, k - 1);
  double chain_a = 0.0, chain_b = 0.0;
  for (int i = 1; i < k; ++i) {
    chain_a += prob_less_from_behavior(behavior, i, i - 1);
    chain_b += prob_greater_from_behavior(behavior, i - 1, i - 1);
  }
  v -= to_double(coeffs.x()) * chain_a;
  v -= to_double(coeffs.y()) * chain_b;
  v -= to_double(coeffs.z()) * prob_less_from_behavior(behavior, 0, k - 1);
  return v;
}

double gh_white_noise_value(const InequalityCoeffs& c) {
  const double d = c.d();
  const double lower = (d - 1.0) / (2.0 * d);
  return lower * (to_double(c.m()) - (to_double(c.x()) + to_double(c.y())) * (c.k() - 1) - to_double(c.z()));
}

OptResult maximize_gh(const InequalityCoeffs& coeffs, StateRestriction restriction, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto opts = simplex_options(cfg, 0.5);

  auto cands = run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    GhEvaluator eval(coeffs, restriction);
    const Objective objective = [&](std::span<const double> p) { return -eval.evaluate(p); };
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::vector<double> x0(eval.parameter_count());
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = i < eval.state_offset() ? weight(rng) : angle(rng);
    auto res = nelder_mead_minimize(objective, std::move(x0), opts);
    const double v = eval.evaluate(res.x);
    return Candidate{std::isfinite(v) ? v : -kInf, std::move(res.x)};
  });

  const std::size_t best = best_index(cands);
  GhEvaluator eval(coeffs, restriction);
  const double internal = eval.evaluate(cands[best].x);
  if (!std::isfinite(internal)) throw DegenerateError("no restart produced a valid state");
  PureState state = eval.state();
  MeasurementFamily family = eval.family();
  const double value = gh_value(behavior_from_quantum(state, family), coeffs);
  return OptResult{value, std::move(state), std::move(family), std::abs(value - internal), cfg.restarts,
                   cfg.seed, restart_values(cands)};
}

NtvResult compute_ntv(const InequalityCoeffs& coeffs, const OptimizerConfig& cfg) {
  // GH is affine in the visibility and G_N is fixed, so the smallest critical
  // visibility belongs to the largest quantum value.
  OptResult opt = maximize_gh(coeffs, StateRestriction::any_state, cfg);
  const double gq = opt.value;
  const double gn = gh_white_noise_value(coeffs);
  if (!(gq > 1e-12)) throw NoViolationError("no violation");
  return NtvResult{gn / (gn - gq), gq, gn, std::move(opt)};
}

}  // namespace hardylab
