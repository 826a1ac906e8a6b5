#pragma once

#include <utility>
#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/tree.hpp"

namespace hcforge {

// Pairwise LCA subtree sizes. sizes(i,j) is the leaf count under the LCA of
// leaves i and j; child_sizes(i,j) are the leaf counts of the LCA's children
// containing i and j respectively.
class LcaSizeTable {
 public:
  LcaSizeTable() = default;
  explicit LcaSizeTable(int n) : n_(n), sizes_(std::size_t(n) * n, 0), child_(std::size_t(n) * n) {}

  int n() const { return n_; }
  int sizes(int i, int j) const { return sizes_[idx(i, j)]; }
  std::pair<int, int> child_sizes(int i, int j) const { return child_[idx(i, j)]; }

  void set(int i, int j, int size, int ci, int cj) {
    sizes_[idx(i, j)] = sizes_[idx(j, i)] = size;
    child_[idx(i, j)] = {ci, cj};
    child_[idx(j, i)] = {cj, ci};
  }

 private:
  std::size_t idx(int i, int j) const { return std::size_t(i) * n_ + j; }
  int n_ = 0;
  std::vector<int> sizes_;
  std::vector<std::pair<int, int>> child_;
};

struct ObjectiveReport {
  double rev = 0.0;
  double dis = 0.0;
  double hcc = 0.0;
  double total_sim_weight = 0.0;
  double total_dis_weight = 0.0;
};

// Revenue: sum over pairs of w^s_ij * (n - |T_ij|).
double eval_revenue(const Instance& inst, const HcTree& tree);

// Dissimilarity, extended to multiway trees: sum of w^d_ij * (|T_vi| + |T_vj|)
// for the LCA's children containing i and j; equals w^d_ij * |T_ij| on
// binary trees.
double eval_dissimilarity(const Instance& inst, const HcTree& tree);

// Both components on the same tree; hcc = rev + dis.
ObjectiveReport eval_hcc(const Instance& inst, const HcTree& tree);

LcaSizeTable lca_size_table(const HcTree& tree);

// True iff #{pairs with w < tau} <= (1 - rho) * C(n,2) on the channel.
enum class Channel { Sim, Dis };
bool not_all_small(const Instance& inst, double rho, double tau, Channel channel);

}  // namespace hcforge
