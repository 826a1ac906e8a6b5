#include "hcforge/baselines.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "hcforge/tree_io.hpp"

namespace hcforge {

HcTree average_linkage(const Instance& inst, Channel channel) {
  const int n = inst.n();
  if (n == 1) return HcTree::single_leaf(0);

  HcTree tree;
  struct Cluster {
    std::vector<int> ids;
    int node;
  };
  std::vector<Cluster> clusters;
  clusters.reserve(n);
  for (int i = 0; i < n; ++i) clusters.push_back({{i}, tree.add_leaf(i)});

  // pairwise total weights between live clusters, merged incrementally
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      w[i][j] = w[j][i] = channel == Channel::Sim ? inst.sim(i, j) : inst.dis(i, j);

  const bool maximize = channel == Channel::Sim;
  while (clusters.size() > 1) {
    int best_a = -1, best_b = -1;
    double best_avg = 0.0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double avg = w[a][b] / (double(clusters[a].ids.size()) * double(clusters[b].ids.size()));
        bool better;
        if (best_a < 0) {
          better = true;
        } else if (avg != best_avg) {
          better = maximize ? avg > best_avg : avg < best_avg;
        } else {
          better = std::pair(clusters[a].ids, clusters[b].ids) <
                   std::pair(clusters[best_a].ids, clusters[best_b].ids);
        }
        if (better) {
          best_a = int(a);
          best_b = int(b);
          best_avg = avg;
        }
      }
    }

    Cluster merged;
    merged.ids.resize(clusters[best_a].ids.size() + clusters[best_b].ids.size());
    std::merge(clusters[best_a].ids.begin(), clusters[best_a].ids.end(),
               clusters[best_b].ids.begin(), clusters[best_b].ids.end(), merged.ids.begin());
    merged.node = tree.add_node(NodeKind::Internal);
    tree.attach(merged.node, clusters[best_a].node);
    tree.attach(merged.node, clusters[best_b].node);

    // fold pair weights: drop b first (higher index), then a, then append
    std::size_t k = clusters.size();
    std::vector<double> to_new(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) to_new[r] = w[best_a][r] + w[best_b][r];
    auto drop = [&](std::size_t idx) {
      clusters.erase(clusters.begin() + idx);
      to_new.erase(to_new.begin() + idx);
      w.erase(w.begin() + idx);
      for (auto& row : w) row.erase(row.begin() + idx);
    };
    drop(std::size_t(best_b));
    drop(std::size_t(best_a));
    clusters.push_back(std::move(merged));
    for (auto& row : w) row.push_back(0.0);
    w.emplace_back(clusters.size(), 0.0);
    for (std::size_t r = 0; r + 1 < clusters.size(); ++r)
      w[r].back() = w.back()[r] = to_new[r];
  }
  tree.root = clusters.front().node;
  return tree;
}

namespace {

// Shared leaf-insertion mechanics over a fixed arena: leaf i occupies slot i,
// the internal node created when inserting leaf k occupies slot n+k-1.
struct InsertionArena {
  explicit InsertionArena(int n_) : n(n_), parent(2 * n - 1, -1), child(2 * n - 1, {-1, -1}) {}

  int n;
  int root = 0;
  std::vector<int> parent;
  std::vector<std::array<int, 2>> child;

  // inserts leaf k above node e; returns the new internal node
  int insert(int k, int e) {
    int m = n + k - 1;
    int p = parent[e];
    child[m] = {e, k};
    parent[e] = m;
    parent[k] = m;
    parent[m] = p;
    if (p < 0) {
      root = m;
    } else {
      child[p][child[p][0] == e ? 0 : 1] = m;
    }
    return m;
  }

  void undo(int k, int e) {
    int m = n + k - 1;
    int p = parent[m];
    parent[e] = p;
    if (p < 0) {
      root = e;
    } else {
      child[p][child[p][0] == m ? 0 : 1] = e;
    }
    parent[m] = -1;
    parent[k] = -1;
  }

  HcTree to_tree() const {
    HcTree t;
    std::vector<int> map(parent.size(), -1);
    // DFS from root building HcTree
    struct Frame {
      int v;
      int out;
    };
    if (n == 1) return HcTree::single_leaf(0);
    std::vector<int> stack{root};
    // create nodes first (pre-order), then children attach on the fly
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      int id = v < n ? t.add_leaf(v) : t.add_node(NodeKind::Internal);
      map[v] = id;
      if (parent[v] >= 0) t.attach(map[parent[v]], id);
      if (v >= n) {
        stack.push_back(child[v][1]);
        stack.push_back(child[v][0]);
      }
    }
    t.root = map[root];
    return t;
  }
};

void enumerate_rec(InsertionArena& arena, std::vector<int>& present, int k,
                   const std::function<void(const HcTree&)>& visit) {
  if (k == arena.n) {
    visit(arena.to_tree());
    return;
  }
  const std::size_t limit = present.size();
  for (std::size_t i = 0; i < limit; ++i) {
    int e = present[i];
    int m = arena.insert(k, e);
    present.push_back(k);
    present.push_back(m);
    enumerate_rec(arena, present, k + 1, visit);
    present.pop_back();
    present.pop_back();
    arena.undo(k, e);
  }
}

// Evaluation tables: row_sum[i][mask] = sum of channel weight between i and
// every point in mask; lets the oracle price a tree in O(n^2) lookups.
struct RowSums {
  int n;
  std::vector<std::vector<double>> sim, dis;

  explicit RowSums(const Instance& inst) : n(inst.n()) {
    const std::uint32_t full = std::uint32_t(1) << n;
    sim.assign(n, std::vector<double>(full, 0.0));
    dis.assign(n, std::vector<double>(full, 0.0));
    for (int i = 0; i < n; ++i) {
      for (std::uint32_t mask = 1; mask < full; ++mask) {
        std::uint32_t low = mask & (~mask + 1);
        int j = std::countr_zero(low);
        sim[i][mask] = sim[i][mask ^ low] + (i == j ? 0.0 : inst.sim(i, j));
        dis[i][mask] = dis[i][mask ^ low] + (i == j ? 0.0 : inst.dis(i, j));
      }
    }
  }

  double cross(const std::vector<std::vector<double>>& rows, std::uint32_t a,
               std::uint32_t b) const {
    double s = 0.0;
    std::uint32_t m = a;
    while (m) {
      std::uint32_t low = m & (~m + 1);
      s += rows[std::countr_zero(low)][b];
      m ^= low;
    }
    return s;
  }
};

}  // namespace

void enumerate_binary_trees(int n, const std::function<void(const HcTree&)>& visit) {
  if (n < 1) throw std::invalid_argument("enumerate_binary_trees requires n >= 1");
  if (n == 1) {
    visit(HcTree::single_leaf(0));
    return;
  }
  InsertionArena arena(n);
  std::vector<int> present{0};
  enumerate_rec(arena, present, 1, visit);
}

HcTree random_binary_tree(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_binary_tree requires n >= 1");
  if (n == 1) return HcTree::single_leaf(0);
  InsertionArena arena(n);
  std::vector<int> present{0};
  for (int k = 1; k < n; ++k) {
    int e = present[rng.next_below(present.size())];
    int m = arena.insert(k, e);
    present.push_back(k);
    present.push_back(m);
  }
  return arena.to_tree();
}

HcTree random_multiway_tree(int n, double contract_prob, Rng& rng) {
  HcTree bin = random_binary_tree(n, rng);
  if (n <= 2) return bin;
  // contract child-into-parent for internal edges, bottom-up
  HcTree out;
  std::vector<int> map(bin.nodes.size(), -1);
  std::vector<bool> merged(bin.nodes.size(), false);
  for (int v : bin.post_order()) {
    const auto& node = bin.nodes[v];
    if (node.kind == NodeKind::Leaf) {
      map[v] = out.add_leaf(node.leaf);
      continue;
    }
    map[v] = out.add_node(NodeKind::Internal);
    for (int c : bin.nodes[v].children) {
      if (bin.nodes[c].kind != NodeKind::Leaf && v != bin.root && rng.next_bool(contract_prob))
        merged[c] = true;
    }
    for (int c : node.children) {
      if (merged[c]) {
        for (int gc : out.nodes[map[c]].children) {
          out.nodes[gc].parent = -1;
          out.attach(map[v], gc);
        }
        out.nodes[map[c]].children.clear();
      } else {
        out.attach(map[v], map[c]);
      }
    }
  }
  out.root = map[bin.root];
  return normalized(out);
}

std::vector<int> random_attachment_parents(int count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("tree needs at least one node");
  std::vector<int> parent(count, -1);
  for (int i = 1; i < count; ++i) parent[i] = int(rng.next_below(std::uint64_t(i)));
  return parent;
}

double eval_objective_value(const Instance& inst, const HcTree& tree, Objective objective) {
  switch (objective) {
    case Objective::Rev:
      return eval_revenue(inst, tree);
    case Objective::Dis:
      return eval_dissimilarity(inst, tree);
    case Objective::Hcc:
      return eval_hcc(inst, tree).hcc;
  }
  return 0.0;
}

std::pair<HcTree, double> brute_force_optimal(const Instance& inst, Objective objective,
                                              int max_n) {
  const int n = inst.n();
  if (n > max_n)
    throw std::domain_error("brute_force_optimal guard: n = " + std::to_string(n) +
                            " exceeds max_n = " + std::to_string(max_n));
  if (n > 25) throw std::domain_error("brute_force_optimal: n > 25 is never tractable");
  if (n == 1) return {HcTree::single_leaf(0), 0.0};

  RowSums rows(inst);
  const bool want_sim = objective != Objective::Dis;
  const bool want_dis = objective != Objective::Rev;

  InsertionArena arena(n);
  std::vector<int> present{0};
  std::vector<std::uint32_t> mask(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) mask[std::size_t(i)] = std::uint32_t(1) << i;

  HcTree best_tree;
  double best_value = -1.0;
  std::string best_canon;

  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      // price the complete tree: walk down from the root so child masks are
      // ready before their parent's cross terms
      double value = 0.0;
      auto walk = [&](auto&& self, int v) -> std::uint32_t {
        if (v < n) return mask[std::size_t(v)];
        std::uint32_t a = self(self, arena.child[std::size_t(v)][0]);
        std::uint32_t b = self(self, arena.child[std::size_t(v)][1]);
        int size = std::popcount(a | b);
        if (want_sim) value += rows.cross(rows.sim, a, b) * double(n - size);
        if (want_dis) value += rows.cross(rows.dis, a, b) * double(size);
        return a | b;
      };
      walk(walk, arena.root);
      if (value > best_value + 1e-12) {
        best_tree = arena.to_tree();
        best_value = value;
        best_canon = canonical_paren(best_tree);
      } else if (value > best_value - 1e-12) {
        HcTree t = arena.to_tree();
        std::string canon = canonical_paren(t);
        if (canon < best_canon) {
          best_tree = std::move(t);
          best_canon = std::move(canon);
        }
      }
      return;
    }
    const std::size_t limit = present.size();
    for (std::size_t i = 0; i < limit; ++i) {
      int e = present[i];
      int m = arena.insert(k, e);
      present.push_back(k);
      present.push_back(m);
      rec(k + 1);
      present.pop_back();
      present.pop_back();
      arena.undo(k, e);
    }
  };
  rec(1);
  return {best_tree, best_value};
}

}  // namespace hcforge
