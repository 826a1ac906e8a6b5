#include "hcforge/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace hcforge {

namespace {

// Component machinery: cut edges are keyed by their child endpoint.
struct CutSet {
  std::vector<char> cut;  // indexed by child node id
  explicit CutSet(int nodes) : cut(nodes, 0) {}
  bool is_cut(int child) const { return cut[child] != 0; }
  void add(int child) { cut[child] = 1; }
};

// Leaf counts inside the component rooted at r, indexed by node id (nodes
// outside the component keep 0).
void component_leaf_counts(const HcTree& tree, const CutSet& cuts, int r,
                           std::vector<int>& counts) {
  // post-order within the component
  std::vector<std::pair<int, std::size_t>> stack{{r, 0}};
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    const auto& kids = tree.nodes[v].children;
    while (i < kids.size() && cuts.is_cut(kids[i])) ++i;
    if (i < kids.size()) {
      stack.push_back({kids[i++], 0});
      continue;
    }
    counts[v] = tree.nodes[v].kind == NodeKind::Leaf ? 1 : 0;
    for (int c : kids)
      if (!cuts.is_cut(c)) counts[v] += counts[c];
    stack.pop_back();
  }
}

// The balanced-edge walk inside one component: descend into the heavier
// child, accumulating the lighter sides, and cut once the accumulated
// lighter mass reaches a third of the component.
Edge balanced_edge_in_component(const HcTree& tree, const CutSet& cuts, int r,
                                const std::vector<int>& counts) {
  const int total = counts[r];
  int u = r;
  long long prefix = 0;
  while (true) {
    int a = -1, b = -1;
    for (int c : tree.nodes[u].children) {
      if (cuts.is_cut(c)) continue;
      if (a < 0) {
        a = c;
      } else {
        b = c;
      }
    }
    if (a < 0) throw std::logic_error("balanced-edge walk fell off the tree");
    if (b < 0) {  // unary pass-through created by an earlier cut
      u = a;
      continue;
    }
    if (counts[b] > counts[a]) std::swap(a, b);  // a is the heavier child
    if (counts[a] == counts[b] && b < a) std::swap(a, b);
    if (3 * (prefix + counts[b]) >= total) return Edge{u, a};
    prefix += counts[b];
    u = a;
  }
}

}  // namespace

Edge find_balanced_edge(const HcTree& tree) {
  const int n = tree.leaf_count();
  require_evaluable(tree, n);
  if (!tree.is_binary()) throw std::invalid_argument("find_balanced_edge requires a binary tree");
  if (n < 3) throw std::invalid_argument("find_balanced_edge requires n >= 3");
  CutSet cuts(tree.size());
  std::vector<int> counts(tree.size(), 0);
  component_leaf_counts(tree, cuts, tree.root, counts);
  return balanced_edge_in_component(tree, cuts, tree.root, counts);
}

std::vector<Edge> build_edge_set_F(const HcTree& tree, double eps) {
  const int n = tree.leaf_count();
  require_evaluable(tree, n);
  if (!tree.is_binary()) throw std::invalid_argument("build_edge_set_F requires a binary tree");
  if (!(eps > 0.0) || eps >= 1.0 / 3.0)
    throw std::invalid_argument("build_edge_set_F requires 0 < eps < 1/3");
  if (3.0 * eps * n <= 1.0)
    throw std::invalid_argument("build_edge_set_F: eps too small for n (needs 3*eps*n > 1)");

  const double threshold = 3.0 * eps * n;
  std::vector<Edge> F;
  CutSet cuts(tree.size());
  std::vector<int> counts(tree.size(), 0);

  std::deque<int> pending{tree.root};
  while (!pending.empty()) {
    int r = pending.front();
    pending.pop_front();
    component_leaf_counts(tree, cuts, r, counts);
    if (static_cast<double>(counts[r]) < threshold) continue;
    Edge e = balanced_edge_in_component(tree, cuts, r, counts);
    cuts.add(e.child);
    F.push_back(e);
    pending.push_back(e.child);
    pending.push_back(r);
  }
  return F;
}

std::vector<int> f_component_leaf_counts(const HcTree& tree, const std::vector<Edge>& F) {
  CutSet cuts(tree.size());
  for (const Edge& e : F) cuts.add(e.child);
  std::vector<int> counts(tree.size(), 0);
  std::vector<int> out;
  out.push_back(0);
  component_leaf_counts(tree, cuts, tree.root, counts);
  out[0] = counts[tree.root];
  for (const Edge& e : F) {
    component_leaf_counts(tree, cuts, e.child, counts);
    out.push_back(counts[e.child]);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

NodeColoring color_nodes(const HcTree& tree, const std::vector<Edge>& F) {
  NodeColoring colors;
  colors.blue.assign(tree.size(), 0);
  colors.green.assign(tree.size(), 0);
  for (const Edge& e : F) {
    bool real = e.parent >= 0 && e.parent < tree.size() && e.child >= 0 &&
                e.child < tree.size() && tree.nodes[e.child].parent == e.parent;
    if (!real) throw std::invalid_argument("color_nodes: F contains a non-edge");
    colors.blue[e.parent] = 1;
    colors.blue[e.child] = 1;
  }
  colors.blue[tree.root] = 1;

  std::vector<char> has_blue(tree.size(), 0);
  for (int v : tree.post_order()) {
    has_blue[v] = colors.blue[v];
    for (int c : tree.nodes[v].children) has_blue[v] |= has_blue[c];
  }
  for (int v = 0; v < tree.size(); ++v) {
    if (colors.blue[v] || tree.nodes[v].children.size() != 2) continue;
    if (has_blue[tree.nodes[v].children[0]] && has_blue[tree.nodes[v].children[1]])
      colors.green[v] = 1;
  }
  return colors;
}

ContractedTree contract_with_edges(const HcTree& tree, const std::vector<Edge>& F) {
  NodeColoring colors = color_nodes(tree, F);
  ContractedTree K;
  K.n = tree.leaf_count();

  std::vector<int> rep(tree.size(), -1);
  // pre-order: parents are mapped before their children
  std::vector<int> order;
  order.reserve(tree.size());
  std::vector<int> stack{tree.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& kids = tree.nodes[v].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }

  for (int v : order) {
    const auto& node = tree.nodes[v];
    const bool colored = colors.blue[v] || colors.green[v];
    if (colored) {
      ContractedTree::Node knode;
      knode.kind = colors.blue[v] ? CKind::Blue : CKind::Green;
      knode.orig_nodes = {v};
      if (node.kind == NodeKind::Leaf) knode.leaf = node.leaf;
      K.nodes.push_back(std::move(knode));
      rep[v] = static_cast<int>(K.nodes.size()) - 1;
    } else if (node.parent >= 0 && rep[node.parent] >= 0 &&
               K.nodes[rep[node.parent]].kind == CKind::Contracted &&
               !colors.blue[node.parent] && !colors.green[node.parent]) {
      rep[v] = rep[node.parent];
      K.nodes[rep[v]].orig_nodes.push_back(v);
      if (node.kind == NodeKind::Leaf) K.nodes[rep[v]].bag.push_back(node.leaf);
    } else {
      ContractedTree::Node knode;
      knode.kind = CKind::Contracted;
      knode.orig_nodes = {v};
      if (node.kind == NodeKind::Leaf) knode.bag.push_back(node.leaf);
      K.nodes.push_back(std::move(knode));
      rep[v] = static_cast<int>(K.nodes.size()) - 1;
    }
  }

  for (int v : order) {
    int p = tree.nodes[v].parent;
    if (p < 0 || rep[v] == rep[p]) continue;
    K.nodes[rep[p]].children.push_back(rep[v]);
    K.nodes[rep[v]].parent = rep[p];
  }
  K.root = rep[tree.root];
  for (auto& knode : K.nodes) std::sort(knode.bag.begin(), knode.bag.end());
  return K;
}

ContractedTree contract_to_K(const HcTree& tree, double eps) {
  return contract_with_edges(tree, build_edge_set_F(tree, eps));
}

namespace {

int copy_k_subtree(const ContractedTree& K, int v, HcTree& out, bool star_bags) {
  const auto& knode = K.nodes[v];
  if (knode.leaf >= 0) return out.add_leaf(knode.leaf);
  int id = out.add_node(NodeKind::Internal);
  for (int c : knode.children) out.attach(id, copy_k_subtree(K, c, out, star_bags));
  if (star_bags && !knode.bag.empty()) {
    int aux = out.add_node(NodeKind::Auxiliary);
    out.attach(id, aux);
    for (int leaf : knode.bag) out.attach(aux, out.add_leaf(leaf));
  }
  return id;
}

}  // namespace

HcTree to_rev_tree(const ContractedTree& K) {
  if (K.root < 0) throw std::invalid_argument("empty contracted tree");
  HcTree raw;
  raw.root = copy_k_subtree(K, K.root, raw, /*star_bags=*/true);
  return normalized(raw);
}

HcTree to_dis_tree(const ContractedTree& K, double eps, Rng& rng) {
  if (K.root < 0) throw std::invalid_argument("empty contracted tree");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("to_dis_tree requires eps in (0,1)");
  const int q = static_cast<int>(std::ceil(1.0 / eps));

  HcTree raw;
  // recursive copy; a bag-carrying node is replaced by its comb chain
  auto copy = [&](auto&& self, int v) -> int {
    const auto& knode = K.nodes[v];
    if (knode.leaf >= 0) return raw.add_leaf(knode.leaf);
    int id = raw.add_node(NodeKind::Internal);
    for (int c : knode.children) raw.attach(id, self(self, c));
    if (knode.bag.empty()) return id;
    if (K.nodes[v].parent < 0 && v == K.root)
      throw std::invalid_argument("to_dis_tree: contracted node with data points but no parent");

    std::vector<int> shuffled = knode.bag;
    rng.shuffle(shuffled);
    const int parts = std::min<int>(q, static_cast<int>(shuffled.size()));
    std::vector<std::vector<int>> part(parts);
    for (std::size_t i = 0; i < shuffled.size(); ++i)
      part[i % parts].push_back(shuffled[i]);

    // splice teeth on the edge above v: parent -> l_1 -> ... -> l_parts -> v
    int below = id;
    for (int i = parts - 1; i >= 0; --i) {
      int aux = raw.add_node(NodeKind::Auxiliary);
      for (int leaf : part[i]) raw.attach(aux, raw.add_leaf(leaf));
      int chain = raw.add_node(NodeKind::Internal);
      raw.attach(chain, aux);
      raw.attach(chain, below);
      below = chain;
    }
    return below;
  };
  raw.root = copy(copy, K.root);
  return normalized(raw);
}

HcTree rev_pipeline(const HcTree& tree, double eps) { return to_rev_tree(contract_to_K(tree, eps)); }

HcTree dis_pipeline(const HcTree& tree, double eps, Rng& rng) {
  const int n = tree.leaf_count();
  double granularity = std::max(eps * eps, 1.0000001 / (3.0 * n));
  if (granularity >= 1.0 / 3.0)
    throw std::invalid_argument("dis_pipeline: no feasible contraction granularity for this n");
  return to_dis_tree(contract_to_K(tree, granularity), eps, rng);
}

SketchStats sketch_stats(const HcTree& tree, double eps) {
  SketchStats stats;
  stats.epsilon = eps;
  for (const auto& node : tree.nodes) {
    if (node.kind != NodeKind::Leaf) ++stats.internal_nodes;
    stats.max_children = std::max(stats.max_children, static_cast<int>(node.children.size()));
  }
  return stats;
}

}  // namespace hcforge
