#pragma once

#include <string>
#include <vector>

namespace hcforge {

enum class NodeKind { Internal, Leaf, Auxiliary };

// Rooted HC tree over an index arena. Leaves biject with data-point ids;
// internal arity is arbitrary. Auxiliary nodes are star structures holding
// data points directly as leaf children. Child order is semantically
// irrelevant to the objectives but fixed, so serialization and binarization
// are deterministic.
struct HcTree {
  struct Node {
    int parent = -1;
    std::vector<int> children;
    NodeKind kind = NodeKind::Internal;
    int leaf = -1;  // data-point id for Leaf nodes
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_leaf(int leaf_id);
  int add_node(NodeKind kind);
  void attach(int parent, int child);

  int size() const { return static_cast<int>(nodes.size()); }
  bool is_leaf(int v) const { return nodes[v].kind == NodeKind::Leaf; }
  int leaf_count() const;
  bool is_binary() const;  // every non-leaf node has exactly 2 children

  // Leaf ids under v, ascending.
  std::vector<int> leaves_under(int v) const;
  // Per-node leaf counts, indexed by node id.
  std::vector<int> leaf_counts() const;
  // Nodes in post order (children before parents).
  std::vector<int> post_order() const;

  static HcTree single_leaf(int leaf_id = 0);
  // Binary tree shaped as a left-leaning chain over leaves 0..n-1.
  static HcTree caterpillar(int n);
  // One root with all n leaves attached directly.
  static HcTree star(int n);
};

// Empty result iff the tree is evaluable with exactly n leaves: parent/child
// refs consistent, single root, acyclic, leaves biject with 0..n-1, every
// non-leaf node has >= 2 children, auxiliary nodes have only leaf children.
std::vector<std::string> validate(const HcTree& tree, int n);

// Throws std::invalid_argument when validate() is non-empty.
void require_evaluable(const HcTree& tree, int n);

// Expands every multiway node into a left-leaning chain of binary nodes over
// its children. Deterministic; never decreases either objective.
HcTree binarize(const HcTree& tree);

// Splices out non-leaf nodes with a single child and drops childless
// non-leaf nodes; objectives are invariant to this. The root may be
// replaced by its sole surviving descendant.
HcTree normalized(const HcTree& tree);

// Deep copy with node ids renumbered in DFS order; ordered-children text of
// the result equals to_paren of the input.
HcTree compacted(const HcTree& tree);

}  // namespace hcforge
