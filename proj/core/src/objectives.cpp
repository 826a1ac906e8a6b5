#include "hcforge/objectives.hpp"

#include <stdexcept>

namespace hcforge {

namespace {

// Pairwise (tree) summation over per-node partials to keep rounding error
// O(log n) instead of O(n).
double pairwise_sum(std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double pairwise_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  return pairwise_sum(v, 0, v.size());
}

enum class Mode { Revenue, Dissimilarity };

// Shared walk: pairs (i,j) are charged at their LCA node, revenue with
// coefficient n - |T_lca| and dissimilarity with |T_child(i)| + |T_child(j)|.
double eval_objective(const Instance& inst, const HcTree& tree, Mode mode) {
  const int n = inst.n();
  require_evaluable(tree, n);
  const bool unweighted =
      mode == Mode::Revenue ? inst.unweighted_sim() : inst.unweighted_dis();
  auto weight = [&](int i, int j) {
    return mode == Mode::Revenue ? inst.sim(i, j) : inst.dis(i, j);
  };

  std::vector<std::vector<int>> leaf_sets(tree.size());
  std::vector<double> partials;
  long long exact = 0;
  partials.reserve(tree.size());

  for (int v : tree.post_order()) {
    const auto& node = tree.nodes[v];
    if (node.kind == NodeKind::Leaf) {
      leaf_sets[v] = {node.leaf};
      continue;
    }
    int subtree = 0;
    for (int c : node.children) subtree += static_cast<int>(leaf_sets[c].size());

    double local = 0.0;
    long long local_exact = 0;
    const auto& kids = node.children;
    for (std::size_t a = 0; a < kids.size(); ++a) {
      const auto& la = leaf_sets[kids[a]];
      for (std::size_t b = a + 1; b < kids.size(); ++b) {
        const auto& lb = leaf_sets[kids[b]];
        const int coef = mode == Mode::Revenue
                             ? n - subtree
                             : static_cast<int>(la.size() + lb.size());
        if (unweighted) {
          long long cnt = 0;
          for (int i : la)
            for (int j : lb)
              if (weight(i, j) == 1.0) ++cnt;
          local_exact += cnt * coef;
        } else {
          double w = 0.0;
          for (int i : la)
            for (int j : lb) w += weight(i, j);
          local += w * coef;
        }
      }
    }
    if (unweighted)
      exact += local_exact;
    else
      partials.push_back(local);

    // merge child leaf sets into this node's set
    auto& mine = leaf_sets[v];
    for (int c : node.children) {
      if (mine.empty())
        mine = std::move(leaf_sets[c]);
      else
        mine.insert(mine.end(), leaf_sets[c].begin(), leaf_sets[c].end());
      leaf_sets[c].clear();
      leaf_sets[c].shrink_to_fit();
    }
  }
  return unweighted ? static_cast<double>(exact) : pairwise_sum(std::move(partials));
}

}  // namespace

double eval_revenue(const Instance& inst, const HcTree& tree) {
  return eval_objective(inst, tree, Mode::Revenue);
}

double eval_dissimilarity(const Instance& inst, const HcTree& tree) {
  return eval_objective(inst, tree, Mode::Dissimilarity);
}

ObjectiveReport eval_hcc(const Instance& inst, const HcTree& tree) {
  ObjectiveReport report;
  report.rev = eval_revenue(inst, tree);
  report.dis = eval_dissimilarity(inst, tree);
  report.hcc = report.rev + report.dis;
  report.total_sim_weight = inst.total_sim();
  report.total_dis_weight = inst.total_dis();
  return report;
}

LcaSizeTable lca_size_table(const HcTree& tree) {
  const int n = tree.leaf_count();
  require_evaluable(tree, n);
  LcaSizeTable table(n);

  std::vector<std::vector<int>> leaf_sets(tree.size());
  for (int v : tree.post_order()) {
    const auto& node = tree.nodes[v];
    if (node.kind == NodeKind::Leaf) {
      leaf_sets[v] = {node.leaf};
      continue;
    }
    int subtree = 0;
    for (int c : node.children) subtree += static_cast<int>(leaf_sets[c].size());
    const auto& kids = node.children;
    for (std::size_t a = 0; a < kids.size(); ++a) {
      const auto& la = leaf_sets[kids[a]];
      for (std::size_t b = a + 1; b < kids.size(); ++b) {
        const auto& lb = leaf_sets[kids[b]];
        for (int i : la)
          for (int j : lb)
            table.set(i, j, subtree, static_cast<int>(la.size()), static_cast<int>(lb.size()));
      }
    }
    auto& mine = leaf_sets[v];
    for (int c : node.children) {
      if (mine.empty())
        mine = std::move(leaf_sets[c]);
      else
        mine.insert(mine.end(), leaf_sets[c].begin(), leaf_sets[c].end());
      leaf_sets[c].clear();
    }
  }
  return table;
}

bool not_all_small(const Instance& inst, double rho, double tau, Channel channel) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0,1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in (0,1]");
  const int n = inst.n();
  long long small = 0;
  long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double w = channel == Channel::Sim ? inst.sim(i, j) : inst.dis(i, j);
      if (w < tau) ++small;
    }
  return static_cast<double>(small) <= (1.0 - rho) * static_cast<double>(pairs);
}

}  // namespace hcforge
