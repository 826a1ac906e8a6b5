#pragma once

#include <utility>
#include <vector>

#include "hcforge/rng.hpp"
#include "hcforge/tree.hpp"

namespace hcforge {

struct Edge {
  int parent = -1;
  int child = -1;
  bool operator==(const Edge&) const = default;
};

// Removing the returned edge splits the leaves into parts of sizes s and
// n - s with n/3 <= s <= 2n/3. Walks down from the root into the heavier
// child (ties to the smaller node index), cutting once the lighter-side
// prefix reaches n/3. Requires a binary tree with n >= 3.
Edge find_balanced_edge(const HcTree& tree);

// Recursively cuts balanced edges until every component of T - F holds
// fewer than 3*eps*n leaves; every component then has between eps*n and
// 3*eps*n leaves and |F| <= 1/eps. Valid for 1/(3n) < eps < 1/3.
std::vector<Edge> build_edge_set_F(const HcTree& tree, double eps);

// Leaf counts of the components of T - F, largest component first.
std::vector<int> f_component_leaf_counts(const HcTree& tree, const std::vector<Edge>& F);

struct NodeColoring {
  std::vector<char> blue;   // endpoints of F plus the root
  std::vector<char> green;  // binary non-blue nodes whose both child
                            // subtrees contain a blue descendant
};

NodeColoring color_nodes(const HcTree& tree, const std::vector<Edge>& F);

enum class CKind { Blue, Green, Contracted };

// K(T): colored nodes survive, every connected component of T - (B u G)
// becomes one Contracted node carrying its bag of data points.
struct ContractedTree {
  struct Node {
    int parent = -1;
    std::vector<int> children;
    CKind kind = CKind::Contracted;
    std::vector<int> bag;         // data points swallowed by the component
    int leaf = -1;                // set when a colored original leaf survives
    std::vector<int> orig_nodes;  // provenance in the input tree
  };
  std::vector<Node> nodes;
  int root = -1;
  int n = 0;

  int internal_count() const { return static_cast<int>(nodes.size()); }
};

ContractedTree contract_to_K(const HcTree& tree, double eps);
// Same contraction driven by an explicit edge set (F may be empty).
ContractedTree contract_with_edges(const HcTree& tree, const std::vector<Edge>& F);

// Star conversion: each bag becomes an auxiliary star child of its node.
// Deterministic; satisfies |T_hat_ij| <= |T_ij| + 6*eps*n pairwise.
HcTree to_rev_tree(const ContractedTree& K);

// Comb conversion: each bag splits into ceil(1/eps) random near-equal parts,
// one star tooth per part, spliced on the edge to the node's parent.
HcTree to_dis_tree(const ContractedTree& K, double eps, Rng& rng);

// End-to-end conversions from a binary tree.
HcTree rev_pipeline(const HcTree& tree, double eps);
// Contraction granularity eps^2 per the two-level reduction, clamped up to
// the smallest feasible granularity when eps^2 * 3n <= 1.
HcTree dis_pipeline(const HcTree& tree, double eps, Rng& rng);

struct SketchStats {
  int internal_nodes = 0;
  int max_children = 0;
  double epsilon = 0.0;
};

SketchStats sketch_stats(const HcTree& tree, double eps = 0.0);

}  // namespace hcforge
