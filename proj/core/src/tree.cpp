#include "hcforge/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace hcforge {

int HcTree::add_leaf(int leaf_id) {
  Node node;
  node.kind = NodeKind::Leaf;
  node.leaf = leaf_id;
  nodes.push_back(std::move(node));
  return size() - 1;
}

int HcTree::add_node(NodeKind kind) {
  Node node;
  node.kind = kind;
  nodes.push_back(std::move(node));
  return size() - 1;
}

void HcTree::attach(int parent, int child) {
  nodes[parent].children.push_back(child);
  nodes[child].parent = parent;
}

int HcTree::leaf_count() const {
  int c = 0;
  for (const auto& node : nodes)
    if (node.kind == NodeKind::Leaf) ++c;
  return c;
}

bool HcTree::is_binary() const {
  for (const auto& node : nodes)
    if (node.kind != NodeKind::Leaf && node.children.size() != 2) return false;
  return true;
}

std::vector<int> HcTree::post_order() const {
  std::vector<int> order;
  order.reserve(nodes.size());
  // iterative DFS; second visit emits the node
  std::vector<std::pair<int, std::size_t>> stack;
  if (root >= 0) stack.push_back({root, 0});
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < nodes[v].children.size()) {
      int c = nodes[v].children[i++];
      stack.push_back({c, 0});
    } else {
      order.push_back(v);
      stack.pop_back();
    }
  }
  return order;
}

std::vector<int> HcTree::leaves_under(int v) const {
  std::vector<int> out;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (nodes[u].kind == NodeKind::Leaf) out.push_back(nodes[u].leaf);
    for (int c : nodes[u].children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> HcTree::leaf_counts() const {
  std::vector<int> counts(nodes.size(), 0);
  for (int v : post_order()) {
    if (nodes[v].kind == NodeKind::Leaf) {
      counts[v] = 1;
    } else {
      for (int c : nodes[v].children) counts[v] += counts[c];
    }
  }
  return counts;
}

HcTree HcTree::single_leaf(int leaf_id) {
  HcTree t;
  t.root = t.add_leaf(leaf_id);
  return t;
}

HcTree HcTree::caterpillar(int n) {
  if (n < 1) throw std::invalid_argument("caterpillar requires n >= 1");
  if (n == 1) return single_leaf(0);
  HcTree t;
  int cur = t.add_leaf(0);
  for (int i = 1; i < n; ++i) {
    int leaf = t.add_leaf(i);
    int join = t.add_node(NodeKind::Internal);
    t.attach(join, cur);
    t.attach(join, leaf);
    cur = join;
  }
  t.root = cur;
  return t;
}

HcTree HcTree::star(int n) {
  if (n < 1) throw std::invalid_argument("star requires n >= 1");
  if (n == 1) return single_leaf(0);
  HcTree t;
  int r = t.add_node(NodeKind::Internal);
  for (int i = 0; i < n; ++i) t.attach(r, t.add_leaf(i));
  t.root = r;
  return t;
}

std::vector<std::string> validate(const HcTree& tree, int n) {
  std::vector<std::string> out;
  const int m = tree.size();
  if (tree.root < 0 || tree.root >= m) {
    out.push_back("missing or out-of-range root");
    return out;
  }
  if (tree.nodes[tree.root].parent != -1) out.push_back("root has a parent");

  for (int v = 0; v < m; ++v) {
    const auto& node = tree.nodes[v];
    for (int c : node.children) {
      if (c < 0 || c >= m) {
        out.push_back("child ref out of range at node " + std::to_string(v));
        continue;
      }
      if (tree.nodes[c].parent != v)
        out.push_back("parent/child mismatch on edge " + std::to_string(v) + "->" + std::to_string(c));
    }
  }

  // reachability from the root; also detects cycles (a node reached twice)
  std::vector<int> seen(m, 0);
  std::vector<int> stack{tree.root};
  seen[tree.root] = 1;
  int reached = 0;
  bool cycle = false;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++reached;
    for (int c : tree.nodes[v].children) {
      if (c < 0 || c >= m) continue;
      if (seen[c]) {
        cycle = true;
        continue;
      }
      seen[c] = 1;
      stack.push_back(c);
    }
  }
  if (cycle) out.push_back("cycle detected");
  if (reached != m) out.push_back("unreachable nodes present");

  std::vector<int> leaf_seen(std::max(n, 0), 0);
  int leaves = 0;
  for (int v = 0; v < m; ++v) {
    const auto& node = tree.nodes[v];
    if (node.kind == NodeKind::Leaf) {
      ++leaves;
      if (!node.children.empty()) out.push_back("leaf with children at node " + std::to_string(v));
      if (node.leaf < 0 || node.leaf >= n) {
        out.push_back("leaf id out of range: " + std::to_string(node.leaf));
      } else if (leaf_seen[node.leaf]++) {
        out.push_back("duplicated leaf id " + std::to_string(node.leaf));
      }
    } else {
      if (node.children.size() < 2)
        out.push_back("non-leaf node with fewer than 2 children at node " + std::to_string(v));
      if (node.kind == NodeKind::Auxiliary) {
        for (int c : node.children)
          if (c >= 0 && c < m && tree.nodes[c].kind != NodeKind::Leaf)
            out.push_back("auxiliary node with non-leaf child at node " + std::to_string(v));
      }
    }
  }
  if (leaves != n)
    out.push_back("leaf count " + std::to_string(leaves) + " != n = " + std::to_string(n));
  return out;
}

void require_evaluable(const HcTree& tree, int n) {
  auto violations = validate(tree, n);
  if (!violations.empty()) throw std::invalid_argument("invalid tree: " + violations.front());
}

namespace {

int copy_binarized(const HcTree& in, int v, HcTree& out) {
  const auto& node = in.nodes[v];
  if (node.kind == NodeKind::Leaf) return out.add_leaf(node.leaf);
  std::vector<int> kids;
  kids.reserve(node.children.size());
  for (int c : node.children) kids.push_back(copy_binarized(in, c, out));
  if (kids.empty()) throw std::invalid_argument("binarize: childless internal node");
  int cur = kids[0];
  for (std::size_t i = 1; i < kids.size(); ++i) {
    int join = out.add_node(NodeKind::Internal);
    out.attach(join, cur);
    out.attach(join, kids[i]);
    cur = join;
  }
  return cur;
}

// Returns the surviving replacement of v, or -1 when v's subtree holds no
// leaves at all.
int copy_normalized(const HcTree& in, int v, HcTree& out) {
  const auto& node = in.nodes[v];
  if (node.kind == NodeKind::Leaf) return out.add_leaf(node.leaf);
  std::vector<int> kids;
  for (int c : node.children) {
    int k = copy_normalized(in, c, out);
    if (k >= 0) kids.push_back(k);
  }
  if (kids.empty()) return -1;
  if (kids.size() == 1) return kids[0];
  int id = out.add_node(node.kind);
  for (int k : kids) out.attach(id, k);
  return id;
}

int copy_exact(const HcTree& in, int v, HcTree& out) {
  const auto& node = in.nodes[v];
  if (node.kind == NodeKind::Leaf) return out.add_leaf(node.leaf);
  int id = out.add_node(node.kind);
  for (int c : node.children) out.attach(id, copy_exact(in, c, out));
  return id;
}

}  // namespace

HcTree binarize(const HcTree& tree) {
  HcTree out;
  out.root = copy_binarized(tree, tree.root, out);
  return out;
}

HcTree normalized(const HcTree& tree) {
  HcTree out;
  out.root = copy_normalized(tree, tree.root, out);
  if (out.root < 0) throw std::invalid_argument("tree has no leaves");
  return out;
}

HcTree compacted(const HcTree& tree) {
  HcTree out;
  out.root = copy_exact(tree, tree.root, out);
  return out;
}

}  // namespace hcforge
