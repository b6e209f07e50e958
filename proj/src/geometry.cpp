#include "pcl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "pcl/dimensions.hpp"
#include "pcl/errors.hpp"

namespace pcl::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_points(const std::vector<Vector>& pts) {
  for (const auto& p : pts) {
    if (p.size() != pts.front().size()) throw ContractViolation("points have different dimensions");
    if (!p.allFinite()) throw ContractViolation("non-finite coordinate");
  }
}

// ---- minimum enclosing ball ----

Ball circumball(const std::vector<const Vector*>& support, Eigen::Index dim) {
  Ball b;
  if (support.empty()) {
    b.center = Vector::Zero(dim);
    b.radius = -1;
    return b;
  }
  const Vector& p0 = *support[0];
  if (support.size() == 1) {
    b.center = p0;
    b.radius = 0;
    return b;
  }
  auto k = static_cast<Eigen::Index>(support.size() - 1);
  Eigen::MatrixXd a(dim, k);
  for (Eigen::Index j = 0; j < k; ++j) a.col(j) = *support[static_cast<std::size_t>(j + 1)] - p0;
  Eigen::MatrixXd g = a.transpose() * a;
  Vector rhs = 0.5 * g.diagonal();
  Vector lambda = g.completeOrthogonalDecomposition().solve(rhs);
  b.center = p0 + a * lambda;
  b.radius = 0;
  for (const Vector* p : support) b.radius = std::max(b.radius, (*p - b.center).norm());
  return b;
}

Ball welzl(const std::vector<Vector>& pts, std::size_t n, std::vector<const Vector*>& boundary,
           Eigen::Index dim) {
  if (n == 0 || boundary.size() == static_cast<std::size_t>(dim) + 1)
    return circumball(boundary, dim);
  const Vector& p = pts[n - 1];
  Ball b = welzl(pts, n - 1, boundary, dim);
  if (b.radius >= 0 && (p - b.center).norm() <= b.radius + 1e-12 * (1 + b.radius)) return b;
  boundary.push_back(&p);
  b = welzl(pts, n - 1, boundary, dim);
  boundary.pop_back();
  return b;
}

double binomial_sum(std::size_t n, std::size_t k) {
  double total = 0, term = 1;
  for (std::size_t i = 0; i <= std::min(n, k); ++i) {
    total += term;
    term = term * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return total;
}

Ball badoiu_clarkson(const std::vector<Vector>& pts, std::size_t iterations) {
  Vector c = pts[0];
  for (std::size_t t = 1; t <= iterations; ++t) {
    std::size_t far = 0;
    double best = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double d = (pts[i] - c).squaredNorm();
      if (d > best) best = d, far = i;
    }
    c += (pts[far] - c) / static_cast<double>(t + 1);
  }
  Ball b{c, 0, false};
  for (const auto& p : pts) b.radius = std::max(b.radius, (p - c).norm());
  return b;
}

// ---- Wolfe minimum-norm point ----

struct MinNorm {
  Vector x;
  std::vector<std::size_t> support;
  std::vector<double> weights;
  std::size_t iterations = 0;
  bool converged = true;
};

MinNorm min_norm_point(const std::vector<Vector>& pts, double tol) {
  const double eps = 1e-12;
  double maxsq = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = pts[i].squaredNorm();
    maxsq = std::max(maxsq, s);
    if (s < pts[start].squaredNorm()) start = i;
  }
  MinNorm r;
  r.support = {start};
  r.weights = {1.0};
  r.x = pts[start];
  const std::size_t cap = 100 * (pts.size() + static_cast<std::size_t>(pts[0].size())) + 1000;

  auto recompute = [&] {
    r.x.setZero();
    double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    for (std::size_t i = 0; i < r.support.size(); ++i) {
      r.weights[i] /= total;
      r.x += r.weights[i] * pts[r.support[i]];
    }
  };

  while (true) {
    if (++r.iterations > cap) {
      r.converged = false;
      break;
    }
    double xx = r.x.squaredNorm();
    if (std::sqrt(xx) <= tol) break;
    std::size_t j = 0;
    double best = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double v = pts[i].dot(r.x);
      if (v < best) best = v, j = i;
    }
    double gap = xx - best;
    if (gap <= tol * std::sqrt(xx) || gap <= 1e-15 * maxsq) break;
    if (std::find(r.support.begin(), r.support.end(), j) != r.support.end()) break;
    r.support.push_back(j);
    r.weights.push_back(0.0);

    while (true) {
      auto k = static_cast<Eigen::Index>(r.support.size());
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b)
          sys(a, b) = pts[r.support[static_cast<std::size_t>(a)]].dot(
              pts[r.support[static_cast<std::size_t>(b)]]);
        sys(a, k) = 1;
        sys(k, a) = 1;
      }
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1;
      Vector sol = sys.colPivHouseholderQr().solve(rhs);
      Vector alpha = sol.head(k);
      if ((alpha.array() > eps).all()) {
        for (Eigen::Index a = 0; a < k; ++a) r.weights[static_cast<std::size_t>(a)] = alpha(a);
        recompute();
        break;
      }
      double theta = kInf;
      std::size_t drop = 0;
      for (Eigen::Index a = 0; a < k; ++a) {
        double lam = r.weights[static_cast<std::size_t>(a)];
        if (alpha(a) <= eps && lam - alpha(a) > 0) {
          double t = lam / (lam - alpha(a));
          if (t < theta) theta = t, drop = static_cast<std::size_t>(a);
        }
      }
      if (!std::isfinite(theta)) theta = 0;
      for (Eigen::Index a = 0; a < k; ++a) {
        auto ia = static_cast<std::size_t>(a);
        r.weights[ia] = (1 - theta) * r.weights[ia] + theta * alpha(a);
      }
      r.weights[drop] = 0;
      std::vector<std::size_t> s2;
      std::vector<double> w2;
      for (std::size_t i = 0; i < r.support.size(); ++i) {
        if (r.weights[i] > eps) {
          s2.push_back(r.support[i]);
          w2.push_back(r.weights[i]);
        }
      }
      r.support = std::move(s2);
      r.weights = std::move(w2);
      recompute();
      if (r.support.size() <= 1) break;
    }
  }
  return r;
}

double dist(const Vector& a, const Vector& b) { return (a - b).norm(); }

}  // namespace

void EuclideanDataset::validate() const {
  if (points.empty()) return;
  if (points[0].size() < 1) throw ContractViolation("dimension must be at least 1");
  check_points(points);
  if (!labels.empty() && labels.size() != points.size())
    throw ContractViolation("labels and points differ in length");
  for (auto y : labels)
    if (y > 1) throw ContractViolation("labels must be 0 or 1");
  if (!(radius >= 0) || !(gamma > 0)) throw ContractViolation("R must be >= 0 and gamma > 0");
}

Ball minimum_enclosing_ball(const std::vector<Vector>& points) {
  if (points.empty()) throw ContractViolation("minimum enclosing ball of no points");
  check_points(points);
  auto dim = points[0].size();
  std::size_t effective = std::min(static_cast<std::size_t>(dim), points.size() - 1);
  if (binomial_sum(points.size(), effective + 1) <= 5e6) {
    std::vector<const Vector*> boundary;
    return welzl(points, points.size(), boundary, dim);
  }
  return badoiu_clarkson(points, 200000);
}

HullDistance hull_distance(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  HullDistance h;
  if (a.empty() || b.empty()) {
    h.distance = kInf;
    return h;
  }
  std::vector<Vector> diff;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  diff.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      diff.push_back(a[i] - b[j]);
      origin.emplace_back(i, j);
    }
  check_points(diff);
  MinNorm m = min_norm_point(diff, tol);
  h.distance = m.x.norm();
  h.iterations = m.iterations;
  h.converged = m.converged;
  h.closest_a = Vector::Zero(a[0].size());
  h.closest_b = Vector::Zero(b[0].size());
  for (std::size_t s = 0; s < m.support.size(); ++s) {
    h.closest_a += m.weights[s] * a[origin[m.support[s]].first];
    h.closest_b += m.weights[s] * b[origin[m.support[s]].second];
  }
  return h;
}

namespace {

void split_by_label(const EuclideanDataset& d, std::vector<Vector>& ones, std::vector<Vector>& zeros) {
  for (std::size_t i = 0; i < d.points.size(); ++i) (d.labels[i] ? ones : zeros).push_back(d.points[i]);
}

}  // namespace

SeparabilityReport separability(const EuclideanDataset& data, double tol) {
  data.validate();
  if (data.labels.size() != data.points.size()) throw ContractViolation("dataset needs labels");
  SeparabilityReport r;
  if (data.points.empty()) {
    r.separable = true;
    r.hull_distance = kInf;
    return r;
  }
  r.ball_radius = minimum_enclosing_ball(data.points).radius;
  std::vector<Vector> ones, zeros;
  split_by_label(data, ones, zeros);
  r.hull_distance = hull_distance(ones, zeros).distance;
  bool ball_ok = r.ball_radius <= data.radius + tol;
  bool gap_ok = r.hull_distance >= 2 * data.gamma - tol;
  r.separable = ball_ok && gap_ok;
  r.marginal = std::abs(r.ball_radius - data.radius) <= tol ||
               std::abs(r.hull_distance - 2 * data.gamma) <= tol;
  return r;
}

bool is_r_gamma_separable(const EuclideanDataset& data, double tol) {
  return separability(data, tol).separable;
}

PerceptronReport perceptron_run(const EuclideanDataset& stream, const PerceptronOptions& opt) {
  stream.validate();
  if (stream.points.empty()) throw ContractViolation("empty stream");
  if (stream.labels.size() != stream.points.size()) throw ContractViolation("stream needs labels");
  const auto dim = static_cast<Eigen::Index>(stream.dim());
  std::vector<Vector> lifted;
  lifted.reserve(stream.points.size());
  PerceptronReport rep;
  for (const auto& p : stream.points) {
    Vector z(dim + 1);
    z << p, 1.0;
    rep.lifted_radius = std::max(rep.lifted_radius, z.norm());
    lifted.push_back(std::move(z));
  }

  // Reference separator for the bound.
  std::vector<Vector> ones, zeros;
  split_by_label(stream, ones, zeros);
  Vector u = Vector::Zero(dim + 1);
  if (ones.empty() || zeros.empty()) {
    u(dim) = ones.empty() ? -1 : 1;
  } else {
    HullDistance h = hull_distance(ones, zeros);
    if (h.distance > 1e-12) {
      Vector w = (h.closest_a - h.closest_b) / h.distance;
      double theta = w.dot(h.closest_a + h.closest_b) / 2;
      u << w, -theta;
      u /= u.norm();
    }
  }
  rep.lifted_margin = kInf;
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    double s = stream.labels[i] ? 1.0 : -1.0;
    rep.lifted_margin = std::min(rep.lifted_margin, s * u.dot(lifted[i]));
  }
  rep.bound = rep.lifted_margin > 0 ? std::pow(rep.lifted_radius / rep.lifted_margin, 2) : kInf;
  rep.formula = "(max_i |(x_i,1)| / rho)^2 with rho = min_i y_i <u,(x_i,1)>, u = unit lift of the "
                "hull-bisecting separator";

  rep.weights = opt.initial ? *opt.initial : Vector::Zero(dim + 1);
  if (rep.weights.size() != dim + 1) throw ContractViolation("initial weights must have dimension D+1");
  for (std::size_t pass = 0;; ++pass) {
    if (!opt.until_clean_pass && pass >= opt.passes) break;
    std::size_t before = rep.mistakes;
    for (std::size_t i = 0; i < lifted.size(); ++i) {
      bool predict_one = rep.weights.dot(lifted[i]) > 0;
      if (predict_one == (stream.labels[i] != 0)) continue;
      ++rep.mistakes;
      if (rep.mistakes > opt.max_updates) {
        rep.converged = false;
        --rep.mistakes;
        return rep;
      }
      rep.weights += (stream.labels[i] ? 1.0 : -1.0) * lifted[i];
    }
    if (opt.until_clean_pass && rep.mistakes == before) break;
  }
  return rep;
}

EuclideanDataset orthonormal_shattering_instance(double radius, double gamma) {
  if (!(radius > 0) || !(gamma > 0)) throw ContractViolation("R and gamma must be positive");
  auto k = static_cast<std::size_t>(std::floor(radius * radius / (gamma * gamma) + 1e-9));
  if (k < 1) throw ContractViolation("floor(R^2/gamma^2) must be at least 1");
  EuclideanDataset d;
  d.radius = radius;
  d.gamma = gamma;
  for (std::size_t i = 0; i < k; ++i) {
    Vector p = Vector::Zero(static_cast<Eigen::Index>(k));
    p(static_cast<Eigen::Index>(i)) = radius;
    d.points.push_back(std::move(p));
  }
  d.labels.assign(k, 0);
  return d;
}

ShatteringCertificate certify_orthonormal_shattering(double radius, double gamma) {
  EuclideanDataset base = orthonormal_shattering_instance(radius, gamma);
  const std::size_t k = base.points.size();
  if (k > 20) throw BudgetError("too many labelings to certify");
  ShatteringCertificate cert;
  cert.points = k;
  cert.labelings = std::uint64_t{1} << k;
  std::uint64_t witness_ok = 0, checker_ok = 0, disagreements = 0, marginal = 0;
  const auto total = static_cast<std::int64_t>(cert.labelings);
#pragma omp parallel for schedule(dynamic) reduction(+ : witness_ok, checker_ok, disagreements, marginal)
  for (std::int64_t mask = 0; mask < total; ++mask) {
    EuclideanDataset d = base;
    Vector w = Vector::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      d.labels[i] = static_cast<std::uint8_t>(mask >> i & 1);
      w(static_cast<Eigen::Index>(i)) = (d.labels[i] ? 1.0 : -1.0) * gamma / radius;
    }
    bool wit = w.norm() <= 1 + 1e-9;
    for (std::size_t i = 0; i < k && wit; ++i) {
      double s = d.labels[i] ? 1.0 : -1.0;
      wit = s * w.dot(d.points[i]) >= gamma - 1e-9;
    }
    SeparabilityReport rep = separability(d);
    witness_ok += wit;
    checker_ok += rep.separable;
    disagreements += wit != rep.separable;
    marginal += rep.marginal;
  }
  cert.witness_ok = witness_ok;
  cert.checker_ok = checker_ok;
  cert.disagreements = disagreements;
  cert.marginal = marginal;
  return cert;
}

// ---- gamma-realizability ----

namespace {

// max 1'z subject to A z <= 1, z >= 0 with A > 0, by Bland's rule. Returns the
// optimum, a primal solution and the dual solution.
Rational simplex_max(const std::vector<std::vector<Rational>>& a, std::vector<Rational>& primal,
                     std::vector<Rational>& dual) {
  const std::size_t m = a.size(), n = a[0].size();
  const std::size_t cols = n + m + 1, rhs = n + m;
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][rhs] = 1;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -1;
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < n + m; ++j)
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw AlgorithmFailure("unbounded game program");
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  primal.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) primal[basis[i]] = t[i][rhs];
  dual.assign(m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) dual[i] = t[m][n + i];
  return t[m][rhs];
}

}  // namespace

GammaReport gamma_realizable_check(const TotalConceptClass& base, const LabeledSample& sample,
                                   const Rational& gamma) {
  if (sample.empty()) throw ContractViolation("sample must be nonempty");
  check_sample(base.domain_size(), sample);
  GammaReport rep;
  rep.points = sample;
  std::sort(rep.points.begin(), rep.points.end());
  rep.points.erase(std::unique(rep.points.begin(), rep.points.end()), rep.points.end());
  const std::size_t m = rep.points.size();

  std::map<std::vector<bool>, std::size_t> seen;
  std::vector<std::vector<bool>> errs;
  for (const auto& c : base) {
    std::vector<bool> e(m);
    for (std::size_t i = 0; i < m; ++i)
      e[i] = static_cast<std::uint8_t>(c[rep.points[i].x]) != rep.points[i].y;
    if (seen.emplace(e, rep.patterns.size()).second) {
      rep.patterns.push_back(c);
      errs.push_back(std::move(e));
    }
  }
  // Shifted error game: entries in {1, 2}.
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(errs.size()));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < errs.size(); ++j) a[i][j] = errs[j][i] ? 2 : 1;
  std::vector<Rational> z, w;
  Rational opt = simplex_max(a, z, w);
  rep.value = Rational(1) / opt - 1;
  rep.mixture.resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) rep.mixture[j] = z[j] / opt;
  rep.adversary.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) rep.adversary[i] = w[i] / opt;
  rep.threshold = (Rational(1) - gamma) / 2;
  rep.realizable = rep.value <= rep.threshold;
  return rep;
}

GammaReport gamma_realizable_check(const TotalConceptClass& base, const LabeledSample& sample,
                                   double gamma) {
  return gamma_realizable_check(base, sample, Rational(gamma));
}

BoostingDisambiguationResult boosting_disambiguate_sample(const TotalConceptClass& base,
                                                          const LabeledSample& sample,
                                                          double gamma) {
  if (sample.empty()) throw ContractViolation("sample must be nonempty");
  if (!(gamma > 0) || gamma > 1) throw ContractViolation("gamma must lie in (0, 1]");
  check_sample(base.domain_size(), sample);
  const std::size_t m = sample.size();
  const std::size_t n = base.domain_size();
  BoostingDisambiguationResult res;
  res.cap = static_cast<std::size_t>(std::ceil(8 * std::log(static_cast<double>(m) + 2) / (gamma * gamma)));
  res.dual_vc = dual_vc_dimension(base.as_partial());
  res.envelope = std::max(res.dual_vc, 1) / (gamma * gamma);

  const double alpha = gamma >= 1 ? 30.0 : 0.5 * std::log((1 + gamma) / (1 - gamma));
  const double limit = (1 - gamma) / 2 + 1e-9;
  std::vector<double> d(m, 1.0 / static_cast<double>(m));
  std::vector<int> votes(n, 0);  // per domain point: (#ones) - (#zeros) among chosen

  for (std::size_t round = 0; round < res.cap; ++round) {
    std::size_t best = 0;
    double best_err = kInf;
    for (std::size_t b = 0; b < base.size(); ++b) {
      double e = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (static_cast<std::uint8_t>(base[b][sample[i].x]) != sample[i].y) e += d[i];
      if (e < best_err - 1e-15) best_err = e, best = b;
    }
    if (best_err > limit)
      throw AlgorithmFailure("no base concept reaches error (1-gamma)/2 under the current weights");
    res.chosen.push_back(best);
    for (std::size_t x = 0; x < n; ++x) votes[x] += base[best][x] == Label::One ? 1 : -1;

    bool consistent = true;
    for (const auto& ex : sample)
      if ((votes[ex.x] > 0 ? 1 : 0) != ex.y) consistent = false;
    if (consistent) {
      res.k = res.chosen.size();
      std::vector<Hypothesis> parts;
      for (auto idx : res.chosen) parts.push_back(Hypothesis::total(base[idx]));
      res.hypothesis = parts.size() == 1 ? parts[0] : Hypothesis::majority(n, std::move(parts));
      return res;
    }
    double total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      bool wrong = static_cast<std::uint8_t>(base[best][sample[i].x]) != sample[i].y;
      d[i] *= std::exp(wrong ? alpha : -alpha);
      total += d[i];
    }
    for (auto& v : d) v /= total;
  }
  throw AlgorithmFailure("boosting did not reach a consistent vote within the round cap");
}

// ---- packings ----

PackingResult greedy_packing(const std::vector<Vector>& points, double gamma) {
  check_points(points);
  const double sep = gamma / 2;
  PackingResult r;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool far = true;
    for (auto c : r.chosen)
      if (dist(points[i], points[c]) < sep - 1e-12) {
        far = false;
        break;
      }
    if (far) r.chosen.push_back(i);
  }
  r.min_distance = kInf;
  for (std::size_t a = 0; a < r.chosen.size(); ++a)
    for (std::size_t b = a + 1; b < r.chosen.size(); ++b)
      r.min_distance = std::min(r.min_distance, dist(points[r.chosen[a]], points[r.chosen[b]]));
  r.cell.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) r.cell[i] = voronoi_cell(points, r, points[i]);
  return r;
}

std::size_t voronoi_cell(const std::vector<Vector>& points, const PackingResult& packing,
                         const Vector& x) {
  if (packing.chosen.empty()) throw ContractViolation("empty packing");
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t c = 0; c < packing.chosen.size(); ++c) {
    double dd = dist(x, points[packing.chosen[c]]);
    if (dd < best_d - 1e-12) best_d = dd, best = c;
  }
  return best;
}

std::vector<std::size_t> max_packing(const std::vector<Vector>& points, double separation) {
  check_points(points);
  const std::size_t n = points.size();
  if (n > 40) throw BudgetError("max_packing is exhaustive; at most 40 points");
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ok[i][j] = dist(points[i], points[j]) >= separation - 1e-12;
  std::vector<std::size_t> best, cur;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (cur.size() + (n - i) <= best.size()) return;
    if (i == n) {
      best = cur;
      return;
    }
    bool fits = std::all_of(cur.begin(), cur.end(), [&](std::size_t c) { return ok[c][i]; });
    if (fits) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

double max_cell_diameter(const std::vector<Vector>& points, const PackingResult& packing) {
  double best = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (packing.cell[i] == packing.cell[j]) best = std::max(best, dist(points[i], points[j]));
  return best;
}

std::vector<std::uint8_t> voronoi_disambiguate(const PackingResult& packing,
                                               const std::vector<Label>& labeling) {
  if (labeling.size() != packing.cell.size()) throw ContractViolation("labeling length mismatch");
  std::vector<int> cell_label(packing.chosen.size(), -1);
  for (std::size_t i = 0; i < labeling.size(); ++i)
    if (labeling[i] != Label::Star && cell_label[packing.cell[i]] < 0)
      cell_label[packing.cell[i]] = static_cast<int>(labeling[i]);
  std::vector<std::uint8_t> out(labeling.size());
  for (std::size_t i = 0; i < labeling.size(); ++i)
    out[i] = static_cast<std::uint8_t>(std::max(cell_label[packing.cell[i]], 0));
  return out;
}

TotalConceptClass voronoi_class(const PackingResult& packing) {
  const std::size_t n = packing.cell.size();
  const std::size_t m = packing.chosen.size();
  if (n > kMaxDomain || m > 20) throw BudgetError("Voronoi class too large to materialize");
  std::vector<PartialConcept> concepts;
  concepts.reserve(std::size_t{1} << m);
  for (Mask y = 0; y < (Mask{1} << m); ++y) {
    Mask ones = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (y >> packing.cell[i] & 1) ones |= bit(i);
    concepts.push_back(PartialConcept::total(n, ones));
  }
  return TotalConceptClass(n, std::move(concepts));
}

bool is_gamma_separated_labeling(const std::vector<Vector>& points,
                                 const std::vector<Label>& labeling, double gamma) {
  if (labeling.size() != points.size()) throw ContractViolation("labeling length mismatch");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labeling[i] != Label::One) continue;
    for (std::size_t j = 0; j < points.size(); ++j)
      if (labeling[j] == Label::Zero && dist(points[i], points[j]) < gamma - 1e-12) return false;
  }
  return true;
}

PartialConceptClass separated_class(const std::vector<Vector>& points, double gamma) {
  const std::size_t n = points.size();
  if (n > 12) throw BudgetError("separated_class enumerates 3^n labelings; at most 12 points");
  std::vector<PartialConcept> concepts;
  std::vector<Label> lab(n, Label::Zero);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 3) lab[i] = static_cast<Label>(c % 3);
    if (is_gamma_separated_labeling(points, lab, gamma)) concepts.emplace_back(std::span<const Label>(lab));
  }
  return PartialConceptClass(n, std::move(concepts));
}

std::vector<Vector> grid_points(std::size_t side, double lo, double hi) {
  std::vector<Vector> pts;
  if (side == 0) return pts;
  double step = side > 1 ? (hi - lo) / static_cast<double>(side - 1) : 0;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      Vector p(2);
      p << lo + step * static_cast<double>(c), lo + step * static_cast<double>(r);
      pts.push_back(std::move(p));
    }
  return pts;
}

ErmFailureResult erm_failure_simulate(std::size_t n, std::size_t m, std::size_t trials,
                                      std::uint64_t seed) {
  if (n < 2 || n % 2) throw ContractViolation("n must be even and positive");
  if (trials == 0) throw ContractViolation("trials must be positive");
  const std::size_t half = n / 2;
  constexpr std::uint8_t kAllZeros = 0;
  std::int64_t wrong = 0, improper_wrong = 0;
  const auto t_count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : wrong, improper_wrong)
  for (std::int64_t t = 0; t < t_count; ++t) {
    Rng rng = Rng::derive(seed, "erm-failure", static_cast<std::uint64_t>(t));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    std::vector<bool> target(n, false), observed(n, false);
    for (std::size_t i = 0; i < half; ++i) target[perm[i]] = true;
    for (std::size_t i = 0; i < m; ++i) observed[perm[rng.below(half)]] = true;
    // Proper completion: observed points plus a uniformly random fill.
    std::vector<std::size_t> rest;
    std::size_t have = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (observed[x])
        ++have;
      else
        rest.push_back(x);
    }
    std::shuffle(rest.begin(), rest.end(), rng.engine());
    std::vector<bool> guess = observed;
    for (std::size_t i = 0; i + have < half; ++i) guess[rest[i]] = true;
    for (std::size_t x = 0; x < n; ++x) {
      wrong += target[x] && !guess[x];
      improper_wrong += target[x] && kAllZeros != 0;
    }
  }
  ErmFailureResult r;
  r.trials = trials;
  r.proper_mean = Rational(wrong) / Rational(static_cast<std::int64_t>(trials * half));
  r.improper_mean = Rational(improper_wrong) / Rational(static_cast<std::int64_t>(trials * half));
  return r;
}

}  // namespace pcl::geometry
