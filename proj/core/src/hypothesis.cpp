#include "qdiv/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace qdiv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kLambdaBisectionIters = 80;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log(e^a - e^b) for a >= b.
double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  const double d = -std::expm1(b - a);
  return d <= 0 ? kNegInf : a + std::log(d);
}

// Simultaneous eigenbasis of a commuting pair, with retries over the mixing
// coefficient in case of accidental degeneracies of the probe combination.
Matrix joint_eigenbasis(const HermMatrix& a, const HermMatrix& b) {
  const double scale = std::max({a.operator_norm(), b.operator_norm(), 1.0});
  for (double c : {0.5877370676, 0.3141592653, 0.7071067811, 0.1234567890}) {
    const HermMatrix probe(a.entries() + c * b.entries());
    const Matrix v = probe.spectral().eigenvectors;
    const Matrix ra = v.adjoint() * a.entries() * v;
    const Matrix rb = v.adjoint() * b.entries() * v;
    Matrix da = ra, db = rb;
    da.diagonal().setZero();
    db.diagonal().setZero();
    if (da.cwiseAbs().maxCoeff() < 1e-9 * scale && db.cwiseAbs().maxCoeff() < 1e-9 * scale)
      return v;
  }
  throw Error("joint_eigenbasis: inputs do not commute");
}

// Joint classical masses of a commuting pair: p_i, q_i in a common eigenbasis,
// concatenated over the direct-sum blocks.
void commuting_masses(const FdState& rho, const FdState& sigma, std::vector<double>& p,
                      std::vector<double>& q) {
  p.clear();
  q.clear();
  for (size_t k = 0; k < rho.block_count(); ++k) {
    const Matrix v = joint_eigenbasis(rho.block(k), sigma.block(k));
    const Matrix rp = v.adjoint() * rho.block(k).entries() * v;
    const Matrix rq = v.adjoint() * sigma.block(k).entries() * v;
    for (Eigen::Index i = 0; i < rp.rows(); ++i) {
      p.push_back(std::max(rp(i, i).real(), 0.0));
      q.push_back(std::max(rq(i, i).real(), 0.0));
    }
  }
}

struct WeightedItem {
  double log_p;  // log of rho_n mass
  double log_q;  // log of sigma_n mass
};

// Greedy fill of the sigma budget in decreasing likelihood-ratio order, with a
// fractional weight on the boundary item; this attains the minimum in the
// randomized Neyman-Pearson family. All masses stay in the log domain.
MinType1Result greedy_threshold(std::vector<WeightedItem>& items, double log_budget) {
  std::sort(items.begin(), items.end(), [](const WeightedItem& a, const WeightedItem& b) {
    const double la = a.log_p - a.log_q;  // +inf when q = 0 and p > 0
    const double lb = b.log_p - b.log_q;
    if (la != lb) return la > lb;
    return a.log_q < b.log_q;
  });

  double cum_q = kNegInf;
  double cum_p = kNegInf;
  double log_success = kNegInf;
  double log_type2 = kNegInf;
  std::int64_t threshold = 0;
  double gamma = 1.0;
  bool exhausted = true;
  for (size_t i = 0; i < items.size(); ++i) {
    if (items[i].log_p == kNegInf && items[i].log_q == kNegInf) continue;
    const double next_q = log_add(cum_q, items[i].log_q);
    if (next_q <= log_budget) {
      cum_q = next_q;
      cum_p = log_add(cum_p, items[i].log_p);
      continue;
    }
    // Boundary item: spend the remaining budget fractionally.
    const double log_remaining = log_sub(log_budget, cum_q);
    const double log_gamma = std::min(log_remaining - items[i].log_q, 0.0);
    gamma = std::exp(log_gamma);
    threshold = static_cast<std::int64_t>(i);
    log_success = log_add(cum_p, log_gamma + items[i].log_p);
    log_type2 = log_add(cum_q, log_gamma + items[i].log_q);
    exhausted = false;
    break;
  }
  if (exhausted) {
    log_success = cum_p;
    log_type2 = cum_q;
    threshold = static_cast<std::int64_t>(items.size());
    gamma = 1.0;
  }
  MinType1Result res;
  res.log_success = log_success;
  res.log_type2 = log_type2;
  res.alpha_star = -std::expm1(log_success);
  res.test.threshold_index = threshold;
  res.test.gamma = gamma;
  return res;
}

// Enumerate all compositions of n into d parts (type classes) and run the
// greedy threshold on the per-type masses.
MinType1Result classical_min_type1(const FdState& rho, const FdState& sigma, int n,
                                   double log_budget) {
  std::vector<double> p, q;
  commuting_masses(rho, sigma, p, q);
  const int d = static_cast<int>(p.size());

  double type_count = 1.0;
  for (int i = 1; i < d; ++i) type_count *= static_cast<double>(n + i) / i;
  if (type_count > 2e6)
    throw TooLargeError("classical path: too many type classes (" +
                        std::to_string(type_count) + ")");

  std::vector<double> log_p(d), log_q(d);
  for (int i = 0; i < d; ++i) {
    log_p[i] = p[i] > 0 ? std::log(p[i]) : kNegInf;
    log_q[i] = q[i] > 0 ? std::log(q[i]) : kNegInf;
  }

  std::vector<WeightedItem> items;
  items.reserve(static_cast<size_t>(type_count));
  std::vector<int> counts(static_cast<size_t>(d), 0);
  const double log_n_fact = std::lgamma(n + 1.0);
  // Recursive enumeration without recursion: odometer over k_1..k_{d-1}.
  std::function<void(int, int)> walk = [&](int sym, int remaining) {
    if (sym == d - 1) {
      counts[static_cast<size_t>(sym)] = remaining;
      double log_multi = log_n_fact;
      double lp = 0.0, lq = 0.0;
      for (int i = 0; i < d; ++i) {
        const int k = counts[static_cast<size_t>(i)];
        log_multi -= std::lgamma(k + 1.0);
        if (k > 0) {
          lp = (log_p[i] == kNegInf) ? kNegInf : lp + k * log_p[i];
          lq = (log_q[i] == kNegInf) ? kNegInf : lq + k * log_q[i];
        }
      }
      items.push_back({lp == kNegInf ? kNegInf : log_multi + lp,
                       lq == kNegInf ? kNegInf : log_multi + lq});
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[static_cast<size_t>(sym)] = k;
      walk(sym + 1, remaining - k);
    }
  };
  if (d == 1) {
    items.push_back({n * log_p[0], n * log_q[0]});
  } else {
    walk(0, n);
  }
  return greedy_threshold(items, log_budget);
}

// Positive spectral part of rho_n - lambda sigma_n from a dense eigensolve.
struct DensePositivePart {
  Matrix vectors;      // eigenvectors with eigenvalue > delta
  Matrix boundary;     // eigenvectors with |eigenvalue| <= delta
};

DensePositivePart dense_positive_part(const HermMatrix& delta_op, double boundary_width) {
  const auto& s = delta_op.spectral();
  const double scale = std::max(std::abs(s.eigenvalues(0)),
                                std::abs(s.eigenvalues(s.eigenvalues.size() - 1)));
  const double delta = std::max(1e-12 * std::max(scale, 1e-300), boundary_width);
  std::vector<Eigen::Index> plus, zero;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues(i) > delta)
      plus.push_back(i);
    else if (s.eigenvalues(i) > -delta)
      zero.push_back(i);
  }
  DensePositivePart out;
  out.vectors = Matrix(s.eigenvectors.rows(), static_cast<Eigen::Index>(plus.size()));
  for (size_t c = 0; c < plus.size(); ++c)
    out.vectors.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(plus[c]);
  out.boundary = Matrix(s.eigenvectors.rows(), static_cast<Eigen::Index>(zero.size()));
  for (size_t c = 0; c < zero.size(); ++c)
    out.boundary.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(zero[c]);
  return out;
}

MinType1Result dense_min_type1(const HermMatrix& rho_n, const HermMatrix& sigma_n,
                               double budget, double lambda_hi) {
  const auto weight_of = [&](const Matrix& vecs, const HermMatrix& h) {
    if (vecs.cols() == 0) return 0.0;
    return (vecs.adjoint() * h.entries() * vecs).trace().real();
  };
  const auto sigma_weight_at = [&](double lambda) {
    const HermMatrix delta_op(rho_n.entries() - lambda * sigma_n.entries());
    const auto part = dense_positive_part(delta_op, 0.0);
    return weight_of(part.vectors, sigma_n);
  };

  double lo = 0.0, hi = lambda_hi;
  if (sigma_weight_at(lo) <= budget) {
    // The support of rho already fits the budget; type I error is zero.
    const HermMatrix delta_op(rho_n.entries());
    const auto part = dense_positive_part(delta_op, 0.0);
    MinType1Result res;
    const double succ = weight_of(part.vectors, rho_n);
    const double t2 = weight_of(part.vectors, sigma_n);
    res.alpha_star = std::max(rho_n.trace() - succ, 0.0);
    res.log_success = std::log(std::max(succ, 0.0));
    res.log_type2 = t2 > 0 ? std::log(t2) : kNegInf;
    Matrix t = part.vectors * part.vectors.adjoint();
    res.test.matrix = HermMatrix((t + t.adjoint()) / 2.0);
    return res;
  }
  for (int it = 0; it < kLambdaBisectionIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sigma_weight_at(mid) > budget)
      lo = mid;
    else
      hi = mid;
  }

  const HermMatrix delta_op(rho_n.entries() - hi * sigma_n.entries());
  // Eigenvalues can drift by at most |hi - lo| * ||sigma|| across the bracket.
  const double width = (hi - lo) * sigma_n.operator_norm();
  const auto part = dense_positive_part(delta_op, width);
  const double sigma_plus = weight_of(part.vectors, sigma_n);
  const double sigma_zero = weight_of(part.boundary, sigma_n);
  double gamma = 0.0;
  if (sigma_zero > 0.0) gamma = std::clamp((budget - sigma_plus) / sigma_zero, 0.0, 1.0);

  const double succ = weight_of(part.vectors, rho_n) + gamma * weight_of(part.boundary, rho_n);
  const double t2 = sigma_plus + gamma * sigma_zero;
  MinType1Result res;
  res.alpha_star = std::clamp(rho_n.trace() - succ, 0.0, 1.0);
  res.log_success = succ > 0 ? std::log(succ) : kNegInf;
  res.log_type2 = t2 > 0 ? std::log(t2) : kNegInf;
  Matrix t = part.vectors * part.vectors.adjoint() +
             gamma * part.boundary * part.boundary.adjoint();
  res.test.matrix = HermMatrix((t + t.adjoint()) / 2.0);
  res.test.gamma = gamma;
  return res;
}

// Rank-one fast path: rho_n = w^n |psi><psi| with psi = phi^(x)n. In the
// eigenbasis of sigma_n the pencil rho_n - lambda sigma_n is a rank-one
// perturbation of a negative diagonal, so its top eigenpair solves the secular
// equation sum_t a_t / (mu + lambda d_t) = 1 and everything is O(d^n) per probe.
struct RankOneData {
  std::vector<double> a;  // |<t|psi>|^2, scaled by w^n
  std::vector<double> d;  // sigma_n eigenvalues
  double rho_weight;      // w^n
};

struct RankOneEigen {
  double mu;
  double sigma_weight;  // sigma_n(v v^dagger)
  double rho_weight;    // rho_n(v v^dagger)
};

RankOneEigen rank_one_top_eigen(const RankOneData& data, double lambda) {
  double d_min = *std::min_element(data.d.begin(), data.d.end());
  const double lower = -lambda * d_min;
  const auto h = [&](double mu) {
    double acc = 0.0;
    for (size_t t = 0; t < data.a.size(); ++t) acc += data.a[t] / (mu + lambda * data.d[t]);
    return acc;
  };
  // h decreases from +inf at lower+ to 0; bracket the root h(mu) = 1.
  double hi = std::max(data.rho_weight, 1e-12);
  while (h(hi) > 1.0) hi *= 2.0;
  double lo = lower;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo == lower ? (lower + hi) / 2.0 : 0.5 * (lo + hi);
    if (h(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-17 * std::max(std::abs(hi), 1.0)) break;
  }
  const double mu = 0.5 * (lo + hi);
  double norm2 = 0.0, sig = 0.0, amp = 0.0;
  for (size_t t = 0; t < data.a.size(); ++t) {
    const double denom = mu + lambda * data.d[t];
    if (denom <= 0) continue;
    const double w = data.a[t] / (denom * denom);
    norm2 += w;
    sig += data.d[t] * w;
    amp += data.a[t] / denom;
  }
  RankOneEigen out;
  out.mu = mu;
  out.sigma_weight = norm2 > 0 ? sig / norm2 : 0.0;
  out.rho_weight = norm2 > 0 ? amp * amp / norm2 : 0.0;
  return out;
}

MinType1Result rank_one_min_type1(const FdState& rho, const FdState& sigma, int n,
                                  double budget, double lambda_hi) {
  const HermMatrix h_rho = rho.dense();
  const HermMatrix h_sigma = sigma.dense();
  const auto& rs = h_rho.spectral();
  const Eigen::Index d = h_rho.dim();
  const double w = rs.eigenvalues(d - 1);
  const Matrix phi = rs.eigenvectors.col(d - 1);

  const auto& ss = h_sigma.spectral();
  const Matrix c = ss.eigenvectors.adjoint() * phi;  // phi in sigma's eigenbasis

  const size_t total = static_cast<size_t>(std::llround(std::pow(double(d), n)));
  RankOneData data;
  data.rho_weight = std::pow(w, n);
  data.a.resize(total);
  data.d.resize(total);
  // Tuple (i_1..i_n) amplitudes and sigma eigenvalue products via an odometer.
  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (size_t t = 0; t < total; ++t) {
    double amp2 = data.rho_weight;
    double dv = 1.0;
    for (int pos = 0; pos < n; ++pos) {
      const int i = idx[static_cast<size_t>(pos)];
      amp2 *= std::norm(c(i, 0));
      dv *= ss.eigenvalues(i);
    }
    data.a[t] = amp2;
    data.d[t] = std::max(dv, 0.0);
    for (int pos = n - 1; pos >= 0; --pos) {
      if (++idx[static_cast<size_t>(pos)] < d) break;
      idx[static_cast<size_t>(pos)] = 0;
    }
  }

  const auto sigma_weight_at = [&](double lambda) {
    const auto e = rank_one_top_eigen(data, lambda);
    return e.mu > 0 ? e.sigma_weight : 0.0;
  };

  double lo = 0.0, hi = lambda_hi;
  for (int it = 0; it < kLambdaBisectionIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sigma_weight_at(mid) > budget)
      lo = mid;
    else
      hi = mid;
  }
  const auto e = rank_one_top_eigen(data, hi);
  MinType1Result res;
  if (e.mu > 0 && e.sigma_weight <= budget) {
    res.alpha_star = std::clamp(data.rho_weight - e.rho_weight, 0.0, 1.0);
    res.log_success = e.rho_weight > 0 ? std::log(e.rho_weight) : kNegInf;
    res.log_type2 = e.sigma_weight > 0 ? std::log(e.sigma_weight) : kNegInf;
    res.test.gamma = 1.0;
  } else {
    // Past the jump: spend the budget fractionally on the top direction.
    const double gamma =
        e.sigma_weight > 0 ? std::clamp(budget / e.sigma_weight, 0.0, 1.0) : 0.0;
    res.alpha_star = std::clamp(data.rho_weight - gamma * e.rho_weight, 0.0, 1.0);
    res.log_success =
        gamma * e.rho_weight > 0 ? std::log(gamma * e.rho_weight) : kNegInf;
    res.log_type2 =
        gamma * e.sigma_weight > 0 ? std::log(gamma * e.sigma_weight) : kNegInf;
    res.test.gamma = gamma;
  }
  return res;
}

double tensor_guard(const FdState& rho, int n) {
  const double dims = std::pow(static_cast<double>(rho.total_dim()), n);
  if (dims > 16384.0)
    throw TooLargeError("min_type1: quantum path dimension " + std::to_string(dims) +
                        " exceeds the 2^14 guard");
  return dims;
}

}  // namespace

std::pair<TestOperator, ErrorPair> neyman_pearson(const FdState& rho, const FdState& sigma,
                                                  double lambda) {
  if (!rho.same_algebra(sigma)) throw DimMismatchError("neyman_pearson: different algebras");
  if (lambda < 0) throw ValidationError("neyman_pearson: lambda must be >= 0");
  const HermMatrix h_rho = rho.dense();
  const HermMatrix h_sigma = sigma.dense();
  const HermMatrix delta_op(h_rho.entries() - lambda * h_sigma.entries());
  const auto part = dense_positive_part(delta_op, 0.0);
  Matrix t = part.vectors * part.vectors.adjoint();
  TestOperator test;
  test.matrix = HermMatrix((t + t.adjoint()) / 2.0);
  ErrorPair err;
  err.type2 = part.vectors.cols() ? (part.vectors.adjoint() * h_sigma.entries() *
                                     part.vectors)
                                        .trace()
                                        .real()
                                  : 0.0;
  const double succ = part.vectors.cols() ? (part.vectors.adjoint() * h_rho.entries() *
                                             part.vectors)
                                                .trace()
                                                .real()
                                          : 0.0;
  err.type1 = std::clamp(h_rho.trace() - succ, 0.0, 1.0);
  return {std::move(test), err};
}

MinType1Result min_type1(const FdState& rho, const FdState& sigma, int n, double r,
                         TestingPath path) {
  if (!rho.same_algebra(sigma)) throw DimMismatchError("min_type1: different algebras");
  if (n < 1) throw ValidationError("min_type1: n must be >= 1");
  const double log_budget = -static_cast<double>(n) * r;

  const double log_sigma_total = n * std::log(sigma.weight());
  if (log_sigma_total <= log_budget) {
    // T = 1 fits the budget; no type I error.
    MinType1Result res;
    res.alpha_star = 0.0;
    res.log_success = n * std::log(rho.weight());
    res.log_type2 = log_sigma_total;
    res.test.gamma = 1.0;
    return res;
  }

  if (path == TestingPath::Classical && !commutes(rho, sigma))
    throw ValidationError("min_type1: classical path requires commuting inputs");
  const bool classical =
      path == TestingPath::Classical || (path == TestingPath::Auto && commutes(rho, sigma));
  if (classical) return classical_min_type1(rho, sigma, n, log_budget);

  tensor_guard(rho, n);
  const double budget = std::exp(log_budget);
  const ExtReal dm = dmax(rho, sigma);
  const double lambda_hi =
      dm.is_finite() ? std::exp(std::min(n * dm.value(), 690.0)) + 1.0 : 1e300;

  const HermMatrix h_rho = rho.dense();
  const bool rank_one = path != TestingPath::QuantumDense && [&] {
    const auto& lam = h_rho.spectral().eigenvalues;
    const double cutoff = kSupportTol * std::max(lam(lam.size() - 1), 1.0);
    int cnt = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      if (lam(i) > cutoff) ++cnt;
    return cnt == 1;
  }();

  if (rank_one) return rank_one_min_type1(rho, sigma, n, budget, lambda_hi);

  HermMatrix rho_n = h_rho;
  HermMatrix sigma_n = sigma.dense();
  for (int i = 1; i < n; ++i) {
    rho_n = tensor(rho_n, h_rho);
    sigma_n = tensor(sigma_n, sigma.dense());
  }
  return dense_min_type1(rho_n, sigma_n, budget, lambda_hi);
}

std::vector<double> sce_sequence(const FdState& rho, const FdState& sigma, double r,
                                 std::span<const int> n_list, TestingPath path) {
  std::vector<double> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const auto res = min_type1(rho, sigma, n, r, path);
    out.push_back(-res.log_success / static_cast<double>(n));
  }
  return out;
}

ExtReal psi_tilde(const FdState& rho, const FdState& sigma, double u) {
  if (u < 0.0 || u > 1.0) throw BadUError("psi_tilde: u must lie in [0,1]");
  // Snap to the continuity extensions where 1/(1-u) would round to 1 or inf.
  if (u < 1e-14) return ExtReal::log_of(rho.weight());
  if (u > 1.0 - 1e-14) return dmax(rho, sigma);
  const double alpha = 1.0 / (1.0 - u);
  return log_sandwiched_q(rho, sigma, alpha).scaled(1.0 - u);
}

ExtReal hoeffding_anti_divergence(const FdState& rho, const FdState& sigma, double r) {
  if (!rho.same_algebra(sigma))
    throw DimMismatchError("hoeffding_anti_divergence: different algebras");
  if (!support_dominated(rho, sigma)) return ExtReal::neg_inf();

  const auto objective = [&](double u) {
    const ExtReal psi = psi_tilde(rho, sigma, u);
    return u * r - psi.value();
  };
  // Endpoints first (the sup over (0,1) extends continuously to [0,1]).
  double best = std::max(objective(0.0), objective(1.0));
  // Golden-section maximization of the concave interior objective.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 90; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(x1);
    }
  }
  best = std::max({best, f1, f2});
  return ExtReal::finite(best);
}

ExtReal cutoff_rate(const FdState& rho, const FdState& sigma, double kappa) {
  if (kappa <= 0.0 || kappa >= 1.0)
    throw BadKappaError("cutoff_rate: kappa must lie in (0,1)");
  const ExtReal d = sandwiched_d(rho, sigma, 1.0 / (1.0 - kappa));
  if (!d.is_finite())
    throw InfiniteError("cutoff_rate: D*_{1/(1-kappa)} is infinite for this pair");
  return d;
}

DegenerateReport degenerate_check(const FdState& rho, const FdState& sigma) {
  if (!rho.same_algebra(sigma)) throw DimMismatchError("degenerate_check: different algebras");
  DegenerateReport rep;
  rep.applicable = support_dominated(rho, sigma);
  if (!rep.applicable) return rep;

  const HermMatrix h_rho = rho.dense();
  const HermMatrix h_sigma = sigma.dense();
  const Projection s_rho = support_projection(h_rho);

  const ExtReal d = relative_entropy(rho, sigma);
  const ExtReal dm = dmax(rho, sigma);
  rep.cond_b = d.is_finite() && dm.is_finite() && std::abs(d.value() - dm.value()) <= 1e-9;

  {
    const bool comm = commutes(rho, sigma);
    const HermMatrix sigma_pinv = fn_on_support(h_sigma, [](double t) { return 1.0 / t; });
    const Matrix x = h_rho.entries() * sigma_pinv.entries();
    const double rank = static_cast<double>(s_rho.rank());
    const double gamma_c = rank > 0 ? x.trace().real() / rank : 0.0;
    const double dev = (x - gamma_c * s_rho.entries()).cwiseAbs().maxCoeff();
    rep.cond_c = comm && dev <= 1e-9 * std::max(1.0, std::abs(gamma_c));
  }
  {
    const double comm_dev = (s_rho.entries() * h_sigma.entries() -
                             h_sigma.entries() * s_rho.entries())
                                .cwiseAbs()
                                .maxCoeff();
    const Matrix sig_s = h_sigma.entries() * s_rho.entries();
    const double denom = sig_s.trace().real();
    const double gamma_d = denom > 0 ? h_rho.trace() / denom : 0.0;
    const double dev = (h_rho.entries() - gamma_d * sig_s).cwiseAbs().maxCoeff();
    rep.cond_d = comm_dev <= 1e-9 * std::max(1.0, h_sigma.operator_norm()) &&
                 dev <= 1e-9 * std::max(1.0, std::abs(gamma_d));
    if (rep.cond_d) rep.gamma = gamma_d;
  }
  rep.is_degenerate = rep.cond_b && rep.cond_c && rep.cond_d;

  if (rep.is_degenerate && d.is_finite()) {
    const double dv = d.value();
    rep.closed_form_verified = true;
    for (double r : {0.0, dv / 2.0, dv, 2.0 * dv, 2.0 * dv + 1.0}) {
      const ExtReal h = hoeffding_anti_divergence(rho, sigma, r);
      const double expected = std::max(r - dv, 0.0);
      if (!h.is_finite() || std::abs(h.value() - expected) > 1e-8)
        rep.closed_form_verified = false;
    }
  }
  return rep;
}

PsiCurve compute_psi_curve(const FdState& rho, const FdState& sigma, double alpha_max) {
  PsiCurve curve;
  for (int k = 10; k >= 1; --k) curve.alphas.push_back(1.0 + std::pow(2.0, -k));
  for (double a = 2.0; a <= alpha_max + 1e-12; a += 1.0) curve.alphas.push_back(a);
  curve.finite_up_to = 0.0;
  for (double a : curve.alphas) {
    const ExtReal psi = log_sandwiched_q(rho, sigma, a);
    curve.psi_values.push_back(psi);
    if (psi.is_finite()) curve.finite_up_to = a;
  }
  return curve;
}

}  // namespace qdiv
