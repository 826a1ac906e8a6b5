#include "hcforge/instance.hpp"

#include <cmath>
#include <stdexcept>

namespace hcforge {

Instance::Instance(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("instance requires n >= 1");
  sim_.assign(std::size_t(n) * n, 0.0);
  dis_.assign(std::size_t(n) * n, 0.0);
}

void Instance::check_edge(int i, int j, double w) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::invalid_argument("edge index out of range");
  if (i == j) throw std::invalid_argument("self-loop weights are not allowed");
  if (!(w >= 0.0 && w <= 1.0) || std::isnan(w))
    throw std::invalid_argument("weight outside [0,1]");
}

void Instance::set_sim(int i, int j, double w) {
  check_edge(i, j, w);
  sim_[idx(i, j)] = sim_[idx(j, i)] = w;
}

void Instance::set_dis(int i, int j, double w) {
  check_edge(i, j, w);
  dis_[idx(i, j)] = dis_[idx(j, i)] = w;
}

double Instance::total_sim() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) t += sim_[idx(i, j)];
  return t;
}

double Instance::total_dis() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) t += dis_[idx(i, j)];
  return t;
}

namespace {
bool all_binary(const std::vector<double>& w) {
  for (double x : w)
    if (x != 0.0 && x != 1.0) return false;
  return true;
}
}  // namespace

bool Instance::unweighted_sim() const { return all_binary(sim_); }
bool Instance::unweighted_dis() const { return all_binary(dis_); }

Instance Instance::restricted(std::span<const int> ids) const {
  Instance out(static_cast<int>(ids.size()));
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      double s = sim(ids[a], ids[b]);
      double d = dis(ids[a], ids[b]);
      if (s != 0.0) out.set_sim(int(a), int(b), s);
      if (d != 0.0) out.set_dis(int(a), int(b), d);
    }
  }
  return out;
}

std::vector<std::string> Instance::validate() const {
  std::vector<std::string> out;
  if (n_ < 1) {
    out.push_back("n < 1");
    return out;
  }
  for (int i = 0; i < n_; ++i) {
    if (sim_[idx(i, i)] != 0.0 || dis_[idx(i, i)] != 0.0)
      out.push_back("nonzero diagonal at " + std::to_string(i));
    for (int j = i + 1; j < n_; ++j) {
      if (sim_[idx(i, j)] != sim_[idx(j, i)] || dis_[idx(i, j)] != dis_[idx(j, i)])
        out.push_back("asymmetric weight at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      for (double w : {sim_[idx(i, j)], dis_[idx(i, j)]})
        if (!(w >= 0.0 && w <= 1.0))
          out.push_back("weight outside [0,1] at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return out;
}

}  // namespace hcforge
