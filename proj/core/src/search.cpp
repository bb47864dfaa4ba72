// Sup-volume search over homotheties and translations of the chart.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "csl/error.hpp"
#include "csl/moebius.hpp"

namespace csl {

namespace {

/// Parameters (log R, center) -> zoom(R, center).
struct Evaluator {
  const Immersion& phi;
  const Mesh& mesh;
  SearchResult& result;
  int cap;
  double log_min, log_max;

  bool exhausted() const { return result.evaluations >= cap; }

  double operator()(const Eigen::VectorXd& p) {
    const double log_r = std::clamp(p[0], log_min, log_max);
    const double r = std::exp(log_r);
    const MoebiusElement g = MoebiusElement::zoom(r, p.tail(p.size() - 1));
    const double v = spherical_volume_exact(apply(g, phi), mesh);
    ++result.evaluations;
    result.trace.push_back({g.scale, g.translation, v});
    if (v > result.best_volume) {
      result.best_volume = v;
      result.best = g;
    }
    return v;
  }
};

/// Nelder-Mead maximization from `start`.
void refine(Evaluator& f, const Eigen::VectorXd& start, const Eigen::VectorXd& step, double tolerance) {
  const Eigen::Index d = start.size();
  std::vector<Eigen::VectorXd> x(static_cast<std::size_t>(d + 1), start);
  std::vector<double> val(static_cast<std::size_t>(d + 1));
  for (Eigen::Index i = 0; i < d; ++i) x[static_cast<std::size_t>(i + 1)][i] += step[i];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (f.exhausted()) return;
    val[i] = f(x[i]);
  }
  std::vector<std::size_t> order(x.size());
  while (!f.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    double size = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) size = std::max(size, (x[order[i]] - x[order[0]]).norm());
    if (size < tolerance) return;

    const std::size_t worst = order.back();
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += x[order[i]];
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd reflected = centroid + (centroid - x[worst]);
    const double fr = f(reflected);
    if (fr > val[order[0]] && !f.exhausted()) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - x[worst]);
      const double fe = f(expanded);
      if (fe > fr) {
        x[worst] = expanded;
        val[worst] = fe;
      } else {
        x[worst] = reflected;
        val[worst] = fr;
      }
      continue;
    }
    if (fr > val[order[order.size() - 2]]) {
      x[worst] = reflected;
      val[worst] = fr;
      continue;
    }
    if (f.exhausted()) return;
    const Eigen::VectorXd contracted = centroid + 0.5 * (x[worst] - centroid);
    const double fc = f(contracted);
    if (fc > val[worst]) {
      x[worst] = contracted;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (f.exhausted()) return;
      const std::size_t k = order[i];
      x[k] = x[order[0]] + 0.5 * (x[k] - x[order[0]]);
      val[k] = f(x[k]);
    }
  }
}

}  // namespace

SearchResult sup_volume_search(const Immersion& phi, const Mesh& mesh, const SearchBudget& budget) {
  if (!(budget.r_min > 0.0) || !(budget.r_max >= budget.r_min))
    throw Error(ErrorCode::InvalidParameter, "search needs 0 < r_min <= r_max");
  if (budget.scales < 1 || budget.anchors < 0 || budget.multistarts < 0 || budget.max_evaluations < 1)
    throw Error(ErrorCode::InvalidParameter, "search budget counts must be positive");

  const int m = phi.dim();
  SearchResult result;
  result.best = MoebiusElement::identity(m);
  result.best_volume = -1.0;
  Evaluator f{phi, mesh, result, budget.max_evaluations, std::log(budget.r_min), std::log(budget.r_max)};

  std::vector<Eigen::VectorXd> centers{Eigen::VectorXd::Zero(m)};
  const int nv = phi.size();
  const int anchors = std::min(budget.anchors, nv);
  if (anchors > 0) {
    const double stride = static_cast<double>(nv) / anchors;
    for (int k = 0; k < anchors; ++k) {
      const int v = std::min(nv - 1, static_cast<int>(std::floor(k * stride)));
      centers.push_back(phi.points.row(v).transpose());
    }
  }

  struct GridPoint {
    double volume;
    Eigen::VectorXd params;
  };
  std::vector<GridPoint> grid;
  const double span = budget.scales > 1 ? (f.log_max - f.log_min) / (budget.scales - 1) : 0.0;
  for (const auto& c : centers) {
    for (int s = 0; s < budget.scales; ++s) {
      if (f.exhausted()) break;
      Eigen::VectorXd p(m + 1);
      p[0] = f.log_min + span * s;
      p.tail(m) = c;
      grid.push_back({f(p), p});
    }
  }

  std::stable_sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) { return a.volume > b.volume; });
  std::mt19937_64 rng(budget.seed);
  std::uniform_int_distribution<int> coin(0, 1);
  const int starts = std::min<int>(budget.multistarts, static_cast<int>(grid.size()));
  for (int k = 0; k < starts && !f.exhausted(); ++k) {
    const Eigen::VectorXd& p = grid[static_cast<std::size_t>(k)].params;
    Eigen::VectorXd step(m + 1);
    step[0] = span > 0.0 ? span : 0.5;
    const double unit = 1.0 / std::exp(p[0]);
    for (int i = 0; i < m; ++i) step[i + 1] = (coin(rng) ? 1.0 : -1.0) * unit;
    refine(f, p, step, budget.refine_tolerance);
  }
  return result;
}

std::string trace_csv(const SearchResult& result) {
  std::string out = "R";
  const Eigen::Index m = result.trace.empty() ? result.best.translation.size() : result.trace.front().translation.size();
  for (Eigen::Index i = 0; i < m; ++i) out += ",t_" + std::to_string(i + 1);
  out += ",volume\n";
  char buf[40];
  for (const auto& row : result.trace) {
    std::snprintf(buf, sizeof buf, "%.17g", row.scale);
    out += buf;
    for (Eigen::Index i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", row.translation[i]);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", row.volume);
    out += buf;
  }
  return out;
}

}  // namespace csl
