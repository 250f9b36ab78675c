#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qdiv/extreal.hpp"

namespace qdiv {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

inline constexpr int kDefaultQuadratureNodes = 256;

// Probability measure on [0,1]: atoms plus an optional density sampled on a
// shared Gauss-Legendre grid. Atoms and the continuous part are treated as
// mutually singular components.
class UnitIntervalMeasure {
 public:
  struct Density {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> values;  // density values at the nodes, >= 0
  };

  static UnitIntervalMeasure atomic(std::vector<std::pair<double, double>> atoms);
  // Constant density with the given total mass.
  static UnitIntervalMeasure uniform(double mass = 1.0,
                                     int quadrature_nodes = kDefaultQuadratureNodes);
  static UnitIntervalMeasure sampled(const std::function<double(double)>& density,
                                     std::vector<std::pair<double, double>> atoms = {},
                                     int quadrature_nodes = kDefaultQuadratureNodes);
  static UnitIntervalMeasure with_parts(std::vector<std::pair<double, double>> atoms,
                                        std::optional<Density> density);

  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
  const std::optional<Density>& density() const { return density_; }

  double total_mass() const;
  bool is_probability(double tol = 1e-10) const { return std::abs(total_mass() - 1.0) <= tol; }

 private:
  UnitIntervalMeasure() = default;
  std::vector<std::pair<double, double>> atoms_;  // (location, mass), locations distinct
  std::optional<Density> density_;
};

// log of int lambda^k (1-lambda)^(n-k) dmu, via per-atom/per-node log terms and
// log-sum-exp aggregation; -inf for a vanishing integral.
double log_binom_moment(const UnitIntervalMeasure& mu, int n, int k);

// Level-n GICAR quantity sum_k C(n,k) m1(n,k)^alpha m2(n,k)^(1-alpha) with the
// classical zero conventions; binomials through log-Gamma.
ExtReal gicar_q(const UnitIntervalMeasure& mu1, const UnitIntervalMeasure& mu2, int n,
                double alpha);

// Classical limit: int (dmu1/dnu)^alpha (dmu2/dnu)^(1-alpha) dnu with
// nu = mu1 + mu2, exact on the merged atom set and by shared quadrature on the
// densities.
ExtReal classical_renyi_q(const UnitIntervalMeasure& mu1, const UnitIntervalMeasure& mu2,
                          double alpha);

struct GicarRow {
  int n;
  ExtReal q;
  double gap;  // |gicar_q(n) - classical target|
};

std::vector<GicarRow> gicar_convergence(const UnitIntervalMeasure& mu1,
                                        const UnitIntervalMeasure& mu2, double alpha,
                                        std::span<const int> n_list);

}  // namespace qdiv
