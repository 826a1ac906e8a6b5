#include "hcforge/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace hcforge {

Instance random_instance(int n, double density, bool complementary, Rng& rng) {
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in [0,1]");
  Instance inst(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = rng.next_bool(density) ? rng.next_double() : 0.0;
      inst.set_sim(i, j, s);
      if (complementary) {
        inst.set_dis(i, j, 1.0 - s);
      } else {
        double d = rng.next_bool(density) ? rng.next_double() : 0.0;
        inst.set_dis(i, j, d);
      }
    }
  }
  return inst;
}

double similarity_value(SimilarityFn fn, double sigma, double d) {
  switch (fn) {
    case SimilarityFn::Gaussian:
      return std::exp(-(d * d) / (sigma * sigma));
    case SimilarityFn::LinearRamp:
      return std::max(0.0, 1.0 - d);
    case SimilarityFn::Inverse:
      return 1.0 / (1.0 + d);
  }
  return 0.0;
}

Instance metric_instance(const MetricConfig& cfg, std::vector<std::string>* warnings) {
  std::vector<std::vector<double>> dist;
  if (!cfg.points.empty()) {
    const std::size_t n = cfg.points.size();
    const std::size_t dim = cfg.points.front().size();
    for (const auto& p : cfg.points)
      if (p.size() != dim) throw std::invalid_argument("points of mixed dimension");
    dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
          double diff = cfg.points[i][a] - cfg.points[j][a];
          s += diff * diff;
        }
        dist[i][j] = dist[j][i] = std::sqrt(s);
      }
  } else if (!cfg.distances.empty()) {
    dist = cfg.distances;
    const std::size_t n = dist.size();
    for (const auto& row : dist)
      if (row.size() != n) throw std::invalid_argument("distance matrix not square");
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i][i] != 0.0) throw std::invalid_argument("distance diagonal must be zero");
      for (std::size_t j = 0; j < n; ++j) {
        if (dist[i][j] < 0.0) throw std::invalid_argument("negative distance");
        if (dist[i][j] != dist[j][i]) throw std::invalid_argument("distance matrix asymmetric");
      }
    }
    if (warnings) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            if (dist[i][j] > dist[i][k] + dist[k][j] + 1e-12) {
              warnings->push_back("triangle inequality violated at (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(k) + ")");
              i = j = n - 1;  // one warning is enough
              break;
            }
    }
  } else {
    throw std::invalid_argument("metric_instance needs points or a distance matrix");
  }

  const int n = static_cast<int>(dist.size());
  if (n < 1) throw std::invalid_argument("metric_instance needs at least one point");
  if (cfg.diameter_normalize) {
    double diameter = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) diameter = std::max(diameter, dist[i][j]);
    if (diameter > 0.0)
      for (auto& row : dist)
        for (double& d : row) d /= diameter;
  }

  Instance inst(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      inst.set_sim(i, j, similarity_value(cfg.similarity, cfg.sigma, dist[i][j]));
  return inst;
}

double metric_proof_constant(const MetricConfig& cfg) {
  const double g = similarity_value(cfg.similarity, cfg.sigma, std::pow(2.0, -cfg.lipschitz));
  if (g <= 0.0) throw std::domain_error("metric_proof_constant: g(2^-l) = 0");
  return std::pow(2.0, cfg.doubling_dimension * (cfg.lipschitz + 1.0)) / g;
}

Instance clique_augment(const Instance& inst) {
  const int n = inst.n();
  Instance out(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (inst.sim(i, j) != 0.0) out.set_sim(i, j, inst.sim(i, j));
    }
  for (int i = n; i < 2 * n; ++i)
    for (int j = i + 1; j < 2 * n; ++j) out.set_sim(i, j, 1.0);
  return out;
}

Instance path_augment(const Instance& inst, long long path_len) {
  const int n = inst.n();
  if (path_len <= 0) path_len = static_cast<long long>(n) * n;
  if (n + path_len > 100000)
    throw std::domain_error("path_augment: output would exceed 1e5 points; pass a smaller path_len");
  const int total = n + static_cast<int>(path_len);
  Instance out(total);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (inst.sim(i, j) != 0.0) out.set_sim(i, j, inst.sim(i, j));
  for (int i = n; i + 1 < total; ++i) out.set_sim(i, i + 1, 1.0);
  return out;
}

Instance complement_instance(const Instance& inst, Channel source) {
  const int n = inst.n();
  Instance out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (source == Channel::Sim)
        out.set_dis(i, j, 1.0 - inst.sim(i, j));
      else
        out.set_sim(i, j, 1.0 - inst.dis(i, j));
    }
  return out;
}

}  // namespace hcforge
