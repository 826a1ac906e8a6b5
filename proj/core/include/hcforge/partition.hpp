#pragma once

#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/rng.hpp"

namespace hcforge {

// Target for the partition oracle PT({alpha_i}, {beta_ij}, eps_err, delta):
// bucket sizes alpha, pairwise crossing weights beta (diagonal = weight
// inside the bucket), tolerances eps_err * n for sizes and eps_err * n^2 for
// weights, and failure budget delta consumed as a restart count by the
// heuristic backends.
struct PartitionTarget {
  int bucket_count = 0;
  std::vector<double> alpha;            // bucket_count entries
  std::vector<double> beta;             // bucket_count x bucket_count, symmetric
  double eps_err = 0.0;
  double delta = 0.1;
  Channel channel = Channel::Sim;

  double beta_at(int i, int j) const { return beta[std::size_t(i) * bucket_count + j]; }
  void set_beta(int i, int j, double w) {
    beta[std::size_t(i) * bucket_count + j] = beta[std::size_t(j) * bucket_count + i] = w;
  }
  static PartitionTarget make(int k, double eps_err, double delta, Channel channel);
  void check(int n) const;  // throws on malformed targets
};

struct PartitionDeviations {
  std::vector<double> size_dev;    // |actual size - alpha_i|
  std::vector<double> weight_dev;  // k x k, |actual W_ij - beta_ij|
  double max_size_dev() const;
  double max_weight_dev() const;
  bool within(double eps_err, int n) const;
};

struct PartitionResult {
  bool found = false;
  std::vector<int> assignment;  // data point -> bucket, present when found
  PartitionDeviations deviations;
};

enum class PartitionBackend { Exact, LocalSearch, SampleExtend };

// Exact: complete search over assignments (budget-guarded), returning the
// satisfying assignment of minimum total raw deviation. LocalSearch: seeded
// restarts of single-point moves and swaps over a penalty that is zero
// exactly on contract-satisfying assignments; one-sided (may miss feasible
// instances). SampleExtend: exhausts bucket choices on a small sample and
// extends greedily by marginal penalty.
PartitionResult solve_partition(const Instance& inst, const PartitionTarget& target,
                                PartitionBackend backend, Rng& rng,
                                double exact_budget = 5e8);

// Independent checker: direct recomputation of sizes and crossing weights.
PartitionDeviations verify_partition(const Instance& inst, const std::vector<int>& assignment,
                                     const PartitionTarget& target);

// Penalty used by the heuristic backends; zero iff the assignment satisfies
// the target within tolerance.
double partition_penalty(const Instance& inst, const std::vector<int>& assignment,
                         const PartitionTarget& target);

}  // namespace hcforge
