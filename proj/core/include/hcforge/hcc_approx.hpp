#pragma once

#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/rng.hpp"
#include "hcforge/tree.hpp"

namespace hcforge {

// Per-round bookkeeping of the greedy algorithm, exposed for the score-rule
// assertions: m is the surviving vertex count, score_sum the sum of all
// scores (equals 2 * total surviving dissimilarity weight), removed_score
// the score of the vertex taken.
struct GreedyRound {
  int m = 0;
  double score_sum = 0.0;
  double surviving_dis_weight = 0.0;
  double removed_score = 0.0;
};

// Score-and-remove greedy: per round on the m survivors, each similarity
// edge (i,j) charges s(i), s(j) -= (m-2)/2 * w and s(k) += w elsewhere, each
// dissimilarity edge charges s(i), s(j) += m/2 * w and s(k) -= w; the
// max-score vertex (ties to the smallest id) is removed and nested on top of
// the recursion, producing a caterpillar. Guarantees
// hcc >= (n-2)/3 * W_s + (2n/3) * W_d.
HcTree greedy_caterpillar(const Instance& inst, std::vector<GreedyRound>* rounds = nullptr);

struct Bisection {
  std::vector<int> left;
  std::vector<int> right;
  double uncut_weight = 0.0;  // similarity weight inside left plus inside right
};

enum class MubBackend { Exact, LocalSearch };

// Balanced bipartition maximizing uncut similarity weight. Exact enumerates
// all balanced splits (guarded); local search runs seeded restarts of pair
// swaps. Odd n allows sizes differing by one.
Bisection max_uncut_bisection(const Instance& inst, MubBackend backend, Rng& rng,
                              int exact_max_n = 20);

// Root split by the bisection, then greedy on each side.
HcTree mub_then_greedy(const Instance& inst, MubBackend backend, Rng& rng);

enum class CombineMode { Randomized, BestOfBoth };

// p defaults to 1 - (1/3)/0.585. Randomized flips a seeded coin between the
// two algorithms; BestOfBoth runs both and keeps the higher-hcc tree.
inline constexpr double kDefaultGreedyProbability = 1.0 - (1.0 / 3.0) / 0.585;

HcTree combined_hcc(const Instance& inst, double p, CombineMode mode, Rng& rng,
                    MubBackend backend);

}  // namespace hcforge
