#include "qdiv/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qdiv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

// k log x with the 0 log 0 = 0 convention.
double k_log(int k, double x) {
  if (k == 0) return 0.0;
  return x > 0.0 ? k * std::log(x) : kNegInf;
}

// Per-term a^alpha b^(1-alpha) in the log domain with the classical zero
// conventions; returns +inf sentinel via the optional.
std::optional<double> log_power_term(double log_a, double log_b, double alpha) {
  const bool a_zero = log_a == kNegInf;
  const bool b_zero = log_b == kNegInf;
  if (a_zero) return kNegInf;  // 0^alpha * x^(1-alpha) = 0 for alpha > 0
  if (b_zero) {
    if (alpha > 1.0) return std::nullopt;  // p > 0 on a q-null set
    if (alpha == 0.0) return kNegInf;
    return kNegInf;  // alpha in (0,1): b^(1-alpha) = 0
  }
  return alpha * log_a + (1.0 - alpha) * log_b;
}

}  // namespace

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on the Legendre polynomial, mapped from [-1,1] to [0,1].
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(M_PI * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i - 1)] = 0.5 * (1.0 - z);
    nodes[static_cast<size_t>(n - i)] = 0.5 * (1.0 + z);
    const double w = 1.0 / ((1.0 - z * z) * pp * pp);
    weights[static_cast<size_t>(i - 1)] = w;
    weights[static_cast<size_t>(n - i)] = w;
  }
}

UnitIntervalMeasure UnitIntervalMeasure::atomic(
    std::vector<std::pair<double, double>> atoms) {
  return with_parts(std::move(atoms), std::nullopt);
}

UnitIntervalMeasure UnitIntervalMeasure::uniform(double mass, int quadrature_nodes) {
  return sampled([mass](double) { return mass; }, {}, quadrature_nodes);
}

UnitIntervalMeasure UnitIntervalMeasure::sampled(const std::function<double(double)>& density,
                                                 std::vector<std::pair<double, double>> atoms,
                                                 int quadrature_nodes) {
  Density d;
  gauss_legendre_unit(quadrature_nodes, d.nodes, d.weights);
  d.values.reserve(d.nodes.size());
  for (double x : d.nodes) d.values.push_back(density(x));
  return with_parts(std::move(atoms), std::move(d));
}

UnitIntervalMeasure UnitIntervalMeasure::with_parts(
    std::vector<std::pair<double, double>> atoms, std::optional<Density> density) {
  UnitIntervalMeasure mu;
  std::sort(atoms.begin(), atoms.end());
  for (size_t i = 0; i < atoms.size(); ++i) {
    auto [loc, mass] = atoms[i];
    if (loc < 0.0 || loc > 1.0)
      throw ValidationError("UnitIntervalMeasure: atom location outside [0,1]");
    if (mass <= 0.0) throw ValidationError("UnitIntervalMeasure: nonpositive atom mass");
    if (i > 0 && loc - atoms[i - 1].first < 1e-12)
      throw ValidationError("UnitIntervalMeasure: atom locations not distinct");
  }
  if (density) {
    if (density->nodes.size() != density->weights.size() ||
        density->nodes.size() != density->values.size())
      throw ValidationError("UnitIntervalMeasure: ragged density arrays");
    for (double v : density->values)
      if (v < 0.0) throw ValidationError("UnitIntervalMeasure: negative density value");
  }
  mu.atoms_ = std::move(atoms);
  mu.density_ = std::move(density);
  return mu;
}

double UnitIntervalMeasure::total_mass() const {
  double m = 0.0;
  for (auto [loc, mass] : atoms_) m += mass;
  if (density_)
    for (size_t i = 0; i < density_->nodes.size(); ++i)
      m += density_->weights[i] * density_->values[i];
  return m;
}

double log_binom_moment(const UnitIntervalMeasure& mu, int n, int k) {
  if (k < 0 || k > n) throw BadIndexError("log_binom_moment: k outside [0, n]");
  std::vector<double> terms;
  for (auto [loc, mass] : mu.atoms()) {
    const double t = std::log(mass) + k_log(k, loc) + k_log(n - k, 1.0 - loc);
    terms.push_back(t);
  }
  if (mu.density()) {
    const auto& d = *mu.density();
    for (size_t i = 0; i < d.nodes.size(); ++i) {
      if (d.values[i] <= 0.0) continue;
      terms.push_back(std::log(d.weights[i] * d.values[i]) + k_log(k, d.nodes[i]) +
                      k_log(n - k, 1.0 - d.nodes[i]));
    }
  }
  return log_sum_exp(terms);
}

ExtReal gicar_q(const UnitIntervalMeasure& mu1, const UnitIntervalMeasure& mu2, int n,
                double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0)
    throw BadAlphaError("gicar_q: alpha must lie in [0, inf) \\ {1}");
  if (n < 0) throw BadIndexError("gicar_q: n must be >= 0");
  std::vector<double> terms;
  const double log_n_fact = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    const double log_binom =
        log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double m1 = log_binom_moment(mu1, n, k);
    const double m2 = log_binom_moment(mu2, n, k);
    const auto term = log_power_term(m1, m2, alpha);
    if (!term) return ExtReal::pos_inf();
    if (*term != kNegInf) terms.push_back(log_binom + *term);
  }
  const double lq = log_sum_exp(terms);
  return lq == kNegInf ? ExtReal::finite(0.0) : ExtReal::finite(std::exp(lq));
}

ExtReal classical_renyi_q(const UnitIntervalMeasure& mu1, const UnitIntervalMeasure& mu2,
                          double alpha) {
  if (!(alpha >= 0.0) || alpha == 1.0)
    throw BadAlphaError("classical_renyi_q: alpha must lie in [0, inf) \\ {1}");

  // Merged atom set: nu = mu1 + mu2 atom by atom.
  std::map<double, std::pair<double, double>> merged;
  for (auto [loc, mass] : mu1.atoms()) merged[loc].first += mass;
  for (auto [loc, mass] : mu2.atoms()) {
    auto it = merged.lower_bound(loc - 1e-12);
    if (it != merged.end() && std::abs(it->first - loc) <= 1e-12)
      it->second.second += mass;
    else
      merged[loc].second += mass;
  }

  std::vector<double> terms;
  for (const auto& [loc, masses] : merged) {
    const double la = masses.first > 0 ? std::log(masses.first) : kNegInf;
    const double lb = masses.second > 0 ? std::log(masses.second) : kNegInf;
    const auto term = log_power_term(la, lb, alpha);
    if (!term) return ExtReal::pos_inf();
    if (*term != kNegInf) terms.push_back(*term);
  }

  // Continuous parts: Radon-Nikodym ratios are pointwise at shared nodes.
  const bool has1 = mu1.density().has_value();
  const bool has2 = mu2.density().has_value();
  if (has1 || has2) {
    const auto& grid = has1 ? *mu1.density() : *mu2.density();
    if (has1 && has2) {
      const auto& g2 = *mu2.density();
      if (g2.nodes.size() != grid.nodes.size())
        throw ValidationError("classical_renyi_q: densities on different grids");
      for (size_t i = 0; i < grid.nodes.size(); ++i)
        if (std::abs(g2.nodes[i] - grid.nodes[i]) > 1e-12)
          throw ValidationError("classical_renyi_q: densities on different grids");
    }
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
      const double f1 = has1 ? mu1.density()->values[i] : 0.0;
      const double f2 = has2 ? mu2.density()->values[i] : 0.0;
      const double la = f1 > 0 ? std::log(f1) : kNegInf;
      const double lb = f2 > 0 ? std::log(f2) : kNegInf;
      const auto term = log_power_term(la, lb, alpha);
      if (!term) return ExtReal::pos_inf();
      if (*term != kNegInf) terms.push_back(std::log(grid.weights[i]) + *term);
    }
  }
  const double lq = log_sum_exp(terms);
  return lq == kNegInf ? ExtReal::finite(0.0) : ExtReal::finite(std::exp(lq));
}

std::vector<GicarRow> gicar_convergence(const UnitIntervalMeasure& mu1,
                                        const UnitIntervalMeasure& mu2, double alpha,
                                        std::span<const int> n_list) {
  const ExtReal target = classical_renyi_q(mu1, mu2, alpha);
  std::vector<GicarRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    const ExtReal q = gicar_q(mu1, mu2, n, alpha);
    double gap = std::numeric_limits<double>::infinity();
    if (q.is_finite() && target.is_finite()) gap = std::abs(q.value() - target.value());
    if (q.is_pos_inf() && target.is_pos_inf()) gap = 0.0;
    rows.push_back({n, q, gap});
  }
  return rows;
}

}  // namespace qdiv
