#pragma once

// Test-side oracles, deliberately independent of the library's accumulation
// paths: LCAs by ancestor marking, subtree sizes by recounting leaves.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/tree.hpp"

namespace oracle {

inline std::vector<int> leaf_node_of(const hcforge::HcTree& t) {
  int n = t.leaf_count();
  std::vector<int> node(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < t.size(); ++v)
    if (t.nodes[v].kind == hcforge::NodeKind::Leaf) node[std::size_t(t.nodes[v].leaf)] = v;
  return node;
}

inline int count_leaves_under(const hcforge::HcTree& t, int v) {
  if (t.nodes[v].kind == hcforge::NodeKind::Leaf) return 1;
  int c = 0;
  for (int k : t.nodes[v].children) c += count_leaves_under(t, k);
  return c;
}

// LCA by marking ancestors of a, then walking up from b.
inline int lca_of(const hcforge::HcTree& t, int node_a, int node_b) {
  std::set<int> anc;
  for (int v = node_a; v >= 0; v = t.nodes[v].parent) anc.insert(v);
  for (int v = node_b; v >= 0; v = t.nodes[v].parent)
    if (anc.count(v)) return v;
  return -1;
}

// child of `lca` on the path down to `node`
inline int branch_child(const hcforge::HcTree& t, int lca, int node) {
  int v = node;
  while (t.nodes[v].parent != lca) v = t.nodes[v].parent;
  return v;
}

inline int pair_lca_size(const hcforge::HcTree& t, const std::vector<int>& leaf_node, int i,
                         int j) {
  return count_leaves_under(t, lca_of(t, leaf_node[std::size_t(i)], leaf_node[std::size_t(j)]));
}

inline double revenue(const hcforge::Instance& inst, const hcforge::HcTree& t) {
  auto leaf_node = leaf_node_of(t);
  const int n = inst.n();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      total += inst.sim(i, j) * (n - pair_lca_size(t, leaf_node, i, j));
  return total;
}

inline double dissimilarity(const hcforge::Instance& inst, const hcforge::HcTree& t) {
  auto leaf_node = leaf_node_of(t);
  const int n = inst.n();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int lca = lca_of(t, leaf_node[std::size_t(i)], leaf_node[std::size_t(j)]);
      int vi = branch_child(t, lca, leaf_node[std::size_t(i)]);
      int vj = branch_child(t, lca, leaf_node[std::size_t(j)]);
      total += inst.dis(i, j) * (count_leaves_under(t, vi) + count_leaves_under(t, vj));
    }
  return total;
}

// sum over pairs of |T_ij| (clique identities)
inline long long sum_pair_lca_sizes(const hcforge::HcTree& t) {
  auto leaf_node = leaf_node_of(t);
  const int n = t.leaf_count();
  long long total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) total += pair_lca_size(t, leaf_node, i, j);
  return total;
}

}  // namespace oracle
