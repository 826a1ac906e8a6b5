#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hcforge {

// An HC instance: n data points with symmetric similarity and dissimilarity
// weight matrices in [0,1], zero diagonal. Pure-similarity instances keep
// dis identically zero and vice versa.
class Instance {
 public:
  Instance() = default;
  explicit Instance(int n);

  int n() const { return n_; }

  double sim(int i, int j) const { return sim_[idx(i, j)]; }
  double dis(int i, int j) const { return dis_[idx(i, j)]; }

  // Sets both directions; throws on out-of-range weights, i==j, bad indices.
  void set_sim(int i, int j, double w);
  void set_dis(int i, int j, double w);

  double total_sim() const;
  double total_dis() const;

  // True when every weight on the channel is exactly 0 or 1; objective sums
  // then run in integer arithmetic.
  bool unweighted_sim() const;
  bool unweighted_dis() const;

  // Sub-instance on the given points, reindexed to 0..ids.size()-1 in order.
  Instance restricted(std::span<const int> ids) const;

  // Invariant check: symmetry, zero diagonal, range. Returns violations.
  std::vector<std::string> validate() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }
  void check_edge(int i, int j, double w) const;

  int n_ = 0;
  std::vector<double> sim_;
  std::vector<double> dis_;
};

}  // namespace hcforge
