#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chaoskit {

/// Deterministic 64-bit mixer; one step of the splitmix sequence.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-style stream of standard normal variates: the state is derived
/// by hashing (seed, stream index), so each path owns an independent stream
/// and path generation is order-independent and parallel-safe.  Normals
/// come from a Box-Muller pair over uniforms built directly from the raw
/// 64-bit outputs; no library distributions are involved, so identical
/// seeds give bit-identical sequences.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) {
    state_ = seed;
    (void)splitmix64(state_);
    state_ ^= 0xD1B54A32D192ED03ull * (stream + 1);
    (void)splitmix64(state_);
  }

  double next_uniform() {
    // (0,1]: never zero, so log() below is safe.
    return (static_cast<double>(splitmix64(state_) >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Increments of a planar Brownian motion on a uniform grid: db1[i] and
/// db2[i] are the increments of the two independent components over
/// [i*dt, (i+1)*dt], each N(0, dt).
struct PathSample {
  double dt = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  std::vector<double> db1, db2;

  std::size_t steps() const { return db1.size(); }
  std::size_t steps_per_unit() const {
    return static_cast<std::size_t>(std::llround(1.0 / dt));
  }
};

/// Draw one path.  One Box-Muller pair is consumed per step (first the db1
/// increment, then db2), so the layout is reproducible bit for bit.
inline PathSample sample_path(std::uint64_t seed, std::uint64_t path_index, double dt,
                              double horizon) {
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw std::domain_error("sample_path: dt and horizon must be positive");
  PathSample p;
  p.dt = dt;
  p.horizon = horizon;
  p.seed = seed;
  p.path_index = path_index;
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  p.db1.resize(n);
  p.db2.resize(n);
  NormalStream rng(seed, path_index);
  const double sigma = std::sqrt(dt);
  for (std::size_t i = 0; i < n; ++i) {
    p.db1[i] = sigma * rng.next_normal();
    p.db2[i] = sigma * rng.next_normal();
  }
  return p;
}

/// The two step functions used as a concrete complex basis vector: e1 is
/// the indicator of [0,1), e2 of [1,2), both of unit L^2 norm, so
/// e1 + i*e2 has squared norm 2.  A grid step i belongs to a factor's
/// support by integer comparison against steps-per-unit, which keeps the
/// supports exact on the grid.  The horizon must be at least 2.
enum class StepFactor { e1, e2 };
enum class Driver { b1, b2 };

inline bool factor_covers_step(StepFactor f, std::size_t step, std::size_t steps_per_unit) {
  return f == StepFactor::e1 ? step < steps_per_unit
                             : step >= steps_per_unit && step < 2 * steps_per_unit;
}

inline const std::vector<double>& driver_increments(const PathSample& p, Driver d) {
  return d == Driver::b1 ? p.db1 : p.db2;
}

/// Windowed increment sums: the integrals of e1/e2 against each component.
struct BasisIncrements {
  double x_e1, x_e2;  // integrals of e1, e2 against the first component
  double y_e1, y_e2;  // ... against the second component
};

inline BasisIncrements basis_increments(const PathSample& p) {
  if (p.horizon < 2.0)
    throw std::domain_error("basis_increments: horizon must be at least 2");
  const std::size_t spu = p.steps_per_unit();
  BasisIncrements b{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < p.steps() && i < 2 * spu; ++i) {
    if (i < spu) {
      b.x_e1 += p.db1[i];
      b.y_e1 += p.db2[i];
    } else {
      b.x_e2 += p.db1[i];
      b.y_e2 += p.db2[i];
    }
  }
  return b;
}

/// Coordinates (x_1, y_1) of the path under the step basis: with X and Y
/// the integrals against the two components,
///
///   x_1 = (X(e1) - Y(e2)) / sqrt(2),   y_1 = (X(e2) + Y(e1)) / sqrt(2),
///
/// so that z_1 = x_1 + i*y_1 is the sample of the complex Gaussian
/// coordinate of e1 + i*e2.
inline std::pair<double, double> coordinates_from_path(const PathSample& p) {
  const BasisIncrements b = basis_increments(p);
  const double inv_sqrt2 = 0.70710678118654752440;
  return {(b.x_e1 - b.y_e2) * inv_sqrt2, (b.x_e2 + b.y_e1) * inv_sqrt2};
}

/// Left-point Euler approximation of the iterated integral over the
/// ordered simplex t_1 < ... < t_n of prod_j f_j(t_j) dB^{(j)}(t_j):
/// running sums are updated from the innermost level outward, each level
/// using the strictly earlier value of the level below.
inline double iterated_integral(const PathSample& p,
                                const std::vector<std::pair<StepFactor, Driver>>& factors) {
  const std::size_t n = factors.size();
  const std::size_t spu = p.steps_per_unit();
  std::vector<double> s(n + 1, 0.0);
  s[0] = 1.0;
  for (std::size_t i = 0; i < p.steps(); ++i) {
    for (std::size_t j = n; j >= 1; --j) {
      const auto& [f, d] = factors[j - 1];
      if (!factor_covers_step(f, i, spu)) continue;
      s[j] += s[j - 1] * driver_increments(p, d)[i];
    }
  }
  return s[n];
}

/// Pathwise check of the second-order identity: the elementary (1,1)
/// complex integral of (e1 + i*e2) x conj(e1 + i*e2) expands into eight
/// signed double Wiener integrals, while its polynomial value at the path
/// coordinates is |z_1|^2 - 2.
///
///   lhs       — the eight iterated integrals by left-point Euler sums;
///   lhs_exact — the same eight terms by their closed forms (products of
///               window increments plus the Ito correction on the two
///               same-driver squares), exact for the step basis;
///   rhs       — the polynomial value x_1^2 + y_1^2 - 2.
///
/// lhs_exact equals rhs for every path (the zero path gives -2: both
/// corrections survive); the Euler lhs differs by the quadratic-variation
/// fluctuation and converges to rhs as dt -> 0 along Brownian paths.
struct VerifyI11Result {
  double lhs;
  double lhs_exact;
  double rhs;
};

inline VerifyI11Result verify_I11(const PathSample& p) {
  using F = StepFactor;
  using D = Driver;
  const std::vector<std::pair<std::vector<std::pair<F, D>>, double>> terms = {
      {{{F::e1, D::b1}, {F::e1, D::b1}}, +1.0}, {{{F::e2, D::b2}, {F::e2, D::b2}}, +1.0},
      {{{F::e1, D::b1}, {F::e2, D::b2}}, -1.0}, {{{F::e2, D::b2}, {F::e1, D::b1}}, -1.0},
      {{{F::e1, D::b2}, {F::e1, D::b2}}, +1.0}, {{{F::e2, D::b1}, {F::e2, D::b1}}, +1.0},
      {{{F::e1, D::b2}, {F::e2, D::b1}}, +1.0}, {{{F::e2, D::b1}, {F::e1, D::b2}}, +1.0}};
  double lhs = 0.0;
  for (const auto& [layout, sign] : terms) lhs += sign * iterated_integral(p, layout);

  const BasisIncrements b = basis_increments(p);
  // Closed forms over the ordered simplex: same-support same-driver squares
  // get the Ito correction (w^2 - |support|)/2; ordered disjoint supports
  // give plain increment products; reversed order is empty.
  const double a = b.x_e1, d = b.y_e2, bb = b.y_e1, c = b.x_e2;
  const double lhs_exact = 0.5 * (a * a - 1.0) + 0.5 * (d * d - 1.0) - a * d +
                           0.5 * (bb * bb - 1.0) + 0.5 * (c * c - 1.0) + bb * c;

  const auto [x1, y1] = coordinates_from_path(p);
  return {lhs, lhs_exact, x1 * x1 + y1 * y1 - 2.0};
}

/// Compensated (Kahan) accumulator for long sums of doubles.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

/// Monte Carlo moments of the elementary (1,1) complex integral evaluated
/// through path coordinates: the sample mean (target 0) and the sample
/// mean of the square (target 4 = 2 * squared kernel norm), each with its
/// standard error.
struct MomentReport {
  std::size_t paths = 0;
  double mean = 0.0;
  double se_mean = 0.0;
  double mean_sq = 0.0;
  double se_mean_sq = 0.0;
};

inline MomentReport simulate_moments(std::uint64_t seed, std::size_t n_paths, double dt,
                                     double horizon) {
  if (n_paths == 0) throw std::domain_error("simulate_moments: need at least one path");
  KahanSum s1, s2, s3, s4;
  for (std::size_t i = 0; i < n_paths; ++i) {
    const PathSample p = sample_path(seed, i, dt, horizon);
    const auto [x1, y1] = coordinates_from_path(p);
    const double v = x1 * x1 + y1 * y1 - 2.0;
    const double v2 = v * v;
    s1.add(v);
    s2.add(v2);
    s3.add(v2);       // second moment of v
    s4.add(v2 * v2);  // second moment of v^2
  }
  const double n = static_cast<double>(n_paths);
  MomentReport r;
  r.paths = n_paths;
  r.mean = s1.value() / n;
  r.mean_sq = s2.value() / n;
  const double var_v = std::max(0.0, s3.value() / n - r.mean * r.mean);
  const double var_v2 = std::max(0.0, s4.value() / n - r.mean_sq * r.mean_sq);
  r.se_mean = std::sqrt(var_v / n);
  r.se_mean_sq = std::sqrt(var_v2 / n);
  return r;
}

/// Median of |Euler lhs - rhs| in the eight-term identity over matched
/// path streams at two resolutions.  The Euler error is dominated by the
/// quadratic-variation fluctuation, of size sqrt(dt), so quartering dt
/// should halve the medians.
struct ConvergenceReport {
  double dt_coarse = 0.0, dt_fine = 0.0;
  double median_coarse = 0.0, median_fine = 0.0;
  double ratio = 0.0;  // median_coarse / median_fine
};

inline ConvergenceReport simulate_convergence(std::uint64_t seed, std::size_t n_paths,
                                              double dt_coarse, double dt_fine, double horizon) {
  if (n_paths == 0) throw std::domain_error("simulate_convergence: need at least one path");
  auto median_error = [&](double dt) {
    std::vector<double> err(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
      const VerifyI11Result r = verify_I11(sample_path(seed, i, dt, horizon));
      err[i] = std::abs(r.lhs - r.rhs);
    }
    auto mid = err.begin() + static_cast<std::ptrdiff_t>(err.size() / 2);
    std::nth_element(err.begin(), mid, err.end());
    return *mid;
  };
  ConvergenceReport r;
  r.dt_coarse = dt_coarse;
  r.dt_fine = dt_fine;
  r.median_coarse = median_error(dt_coarse);
  r.median_fine = median_error(dt_fine);
  r.ratio = r.median_coarse / r.median_fine;
  return r;
}

}  // namespace chaoskit
