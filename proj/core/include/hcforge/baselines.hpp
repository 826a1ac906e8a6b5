#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/rng.hpp"
#include "hcforge/tree.hpp"

namespace hcforge {

// Agglomerative average linkage. The sim channel merges the pair of clusters
// with maximum average inter-cluster similarity, the dis channel the pair
// with minimum average dissimilarity; ties broken lexicographically on the
// clusters' sorted id lists.
HcTree average_linkage(const Instance& inst, Channel channel);

// Uniform over the (2n-3)!! leaf-labeled binary shapes, by sequential leaf
// insertion at a uniformly random edge (counting the edge above the root).
HcTree random_binary_tree(int n, Rng& rng);

// Random binary tree with each internal-to-internal edge contracted with
// probability contract_prob, yielding multiway HC trees for tests.
HcTree random_multiway_tree(int n, double contract_prob, Rng& rng);

// Arbitrary rooted tree as a parent array (parent[0] = -1): node i attaches
// to a uniform random predecessor. Not an HC tree; used for degree bounds.
std::vector<int> random_attachment_parents(int count, Rng& rng);

enum class Objective { Rev, Dis, Hcc };

// Visits every leaf-labeled binary tree shape on n leaves exactly once.
void enumerate_binary_trees(int n, const std::function<void(const HcTree&)>& visit);

// Exhaustive optimum over binary trees. Guarded at max_n because the count
// is (2n-3)!!; ties resolved by smallest canonical serialization.
std::pair<HcTree, double> brute_force_optimal(const Instance& inst, Objective objective,
                                              int max_n = 10);

double eval_objective_value(const Instance& inst, const HcTree& tree, Objective objective);

}  // namespace hcforge
