#include "hcforge/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hcforge {

PartitionTarget PartitionTarget::make(int k, double eps_err, double delta, Channel channel) {
  PartitionTarget t;
  t.bucket_count = k;
  t.alpha.assign(std::size_t(k), 0.0);
  t.beta.assign(std::size_t(k) * k, 0.0);
  t.eps_err = eps_err;
  t.delta = delta;
  t.channel = channel;
  return t;
}

void PartitionTarget::check(int n) const {
  if (bucket_count < 1) throw std::invalid_argument("partition target needs k >= 1");
  if (alpha.size() != std::size_t(bucket_count) ||
      beta.size() != std::size_t(bucket_count) * bucket_count)
    throw std::invalid_argument("partition target dimension mismatch");
  if (!(eps_err >= 0.0 && eps_err < 1.0)) throw std::invalid_argument("eps_err must lie in [0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  for (double a : alpha)
    if (a < 0.0 || a > double(n)) throw std::invalid_argument("alpha entry outside [0,n]");
  for (int i = 0; i < bucket_count; ++i)
    for (int j = 0; j < bucket_count; ++j) {
      if (beta_at(i, j) < 0.0) throw std::invalid_argument("beta entry negative");
      if (beta_at(i, j) != beta_at(j, i)) throw std::invalid_argument("beta not symmetric");
    }
}

double PartitionDeviations::max_size_dev() const {
  double m = 0.0;
  for (double d : size_dev) m = std::max(m, d);
  return m;
}

double PartitionDeviations::max_weight_dev() const {
  double m = 0.0;
  for (double d : weight_dev) m = std::max(m, d);
  return m;
}

bool PartitionDeviations::within(double eps_err, int n) const {
  return max_size_dev() <= eps_err * n && max_weight_dev() <= eps_err * double(n) * double(n);
}

namespace {

double channel_weight(const Instance& inst, Channel channel, int i, int j) {
  return channel == Channel::Sim ? inst.sim(i, j) : inst.dis(i, j);
}

// Running sizes and pairwise weights for an assignment under construction.
struct Tally {
  int k = 0;
  std::vector<long long> size;
  std::vector<double> weight;  // k x k, symmetric storage with both halves

  explicit Tally(int k_) : k(k_), size(std::size_t(k_), 0), weight(std::size_t(k_) * k_, 0.0) {}

  double& w(int a, int b) { return weight[std::size_t(a) * k + b]; }
  double wv(int a, int b) const { return weight[std::size_t(a) * k + b]; }

  void place(const Instance& inst, Channel channel, const std::vector<int>& assignment,
             int point, int bucket, int upto) {
    ++size[bucket];
    for (int q = 0; q < upto; ++q) {
      if (q == point) continue;
      double x = channel_weight(inst, channel, point, q);
      if (x == 0.0) continue;
      int qb = assignment[q];
      w(bucket, qb) += x;
      if (qb != bucket) w(qb, bucket) += x;
    }
  }

  void remove(const Instance& inst, Channel channel, const std::vector<int>& assignment,
              int point, int bucket, int upto) {
    --size[bucket];
    for (int q = 0; q < upto; ++q) {
      if (q == point) continue;
      double x = channel_weight(inst, channel, point, q);
      if (x == 0.0) continue;
      int qb = assignment[q];
      w(bucket, qb) -= x;
      if (qb != bucket) w(qb, bucket) -= x;
    }
  }
};

PartitionDeviations deviations_from_tally(const Tally& tally, const PartitionTarget& target) {
  PartitionDeviations dev;
  const int k = target.bucket_count;
  dev.size_dev.resize(std::size_t(k));
  dev.weight_dev.resize(std::size_t(k) * k);
  for (int i = 0; i < k; ++i) dev.size_dev[std::size_t(i)] = std::abs(double(tally.size[i]) - target.alpha[i]);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      dev.weight_dev[std::size_t(i) * k + j] = std::abs(tally.wv(i, j) - target.beta_at(i, j));
  return dev;
}

double total_raw_deviation(const Tally& tally, const PartitionTarget& target) {
  const int k = target.bucket_count;
  double total = 0.0;
  for (int i = 0; i < k; ++i) total += std::abs(double(tally.size[i]) - target.alpha[i]);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) total += std::abs(tally.wv(i, j) - target.beta_at(i, j));
  return total;
}

double penalty_from_tally(const Tally& tally, const PartitionTarget& target, int n) {
  const int k = target.bucket_count;
  const double size_tol = target.eps_err * n;
  const double weight_tol = target.eps_err * double(n) * double(n);
  double p = 0.0;
  for (int i = 0; i < k; ++i)
    p += std::max(0.0, std::abs(double(tally.size[i]) - target.alpha[i]) - size_tol) / n;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j)
      p += std::max(0.0, std::abs(tally.wv(i, j) - target.beta_at(i, j)) - weight_tol) /
           (double(n) * double(n));
  return p;
}

Tally tally_of(const Instance& inst, const PartitionTarget& target,
               const std::vector<int>& assignment) {
  const int n = inst.n();
  Tally tally(target.bucket_count);
  for (int p = 0; p < n; ++p) tally.place(inst, target.channel, assignment, p, assignment[p], p);
  return tally;
}

// ---- exact backend: DFS with monotone pruning (sizes and weights only grow,
// all weights are nonnegative), keeping the satisfying assignment with the
// smallest total raw deviation.

struct ExactSearch {
  const Instance& inst;
  const PartitionTarget& target;
  const int n;
  const int k;
  const double size_tol;
  const double weight_tol;
  std::vector<int> assignment;
  Tally tally;
  std::vector<int> best;
  double best_deviation = std::numeric_limits<double>::infinity();

  ExactSearch(const Instance& inst_, const PartitionTarget& target_)
      : inst(inst_),
        target(target_),
        n(inst_.n()),
        k(target_.bucket_count),
        size_tol(target_.eps_err * n + 1e-12),
        weight_tol(target_.eps_err * double(n) * double(n) + 1e-12),
        assignment(std::size_t(n), -1),
        tally(k) {}

  bool prune(int placed) const {
    // overshoot is permanent
    for (int b = 0; b < k; ++b)
      if (double(tally.size[b]) > target.alpha[b] + size_tol) return true;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        if (tally.wv(i, j) > target.beta_at(i, j) + weight_tol) return true;
    // remaining points must be able to fill every bucket to alpha - tol
    double deficit = 0.0;
    for (int b = 0; b < k; ++b)
      deficit += std::max(0.0, target.alpha[b] - size_tol - double(tally.size[b]));
    return deficit > double(n - placed) + 1e-9;
  }

  void run(int point) {
    if (point == n) {
      bool ok = true;
      for (int b = 0; b < k && ok; ++b)
        ok = std::abs(double(tally.size[b]) - target.alpha[b]) <= size_tol;
      for (int i = 0; i < k && ok; ++i)
        for (int j = i; j < k && ok; ++j)
          ok = std::abs(tally.wv(i, j) - target.beta_at(i, j)) <= weight_tol;
      if (!ok) return;
      double dev = total_raw_deviation(tally, target);
      if (dev < best_deviation - 1e-15) {
        best_deviation = dev;
        best = assignment;
      }
      return;
    }
    for (int b = 0; b < k; ++b) {
      assignment[point] = b;
      tally.place(inst, target.channel, assignment, point, b, point);
      if (!prune(point + 1)) run(point + 1);
      tally.remove(inst, target.channel, assignment, point, b, point);
      assignment[point] = -1;
    }
  }
};

PartitionResult exact_backend(const Instance& inst, const PartitionTarget& target,
                              double budget) {
  const int n = inst.n();
  double states = 1.0;
  for (int i = 0; i < n; ++i) {
    states *= target.bucket_count;
    if (states > budget)
      throw std::domain_error("exact partition backend over budget: k^n = " +
                              std::to_string(states) + " states");
  }
  ExactSearch search(inst, target);
  search.run(0);
  PartitionResult result;
  if (search.best.empty()) return result;  // infeasible
  result.found = true;
  result.assignment = std::move(search.best);
  result.deviations = verify_partition(inst, result.assignment, target);
  return result;
}

// ---- local-search backend

PartitionResult local_search_backend(const Instance& inst, const PartitionTarget& target,
                                     Rng& rng) {
  const int n = inst.n();
  const int k = target.bucket_count;
  const int restarts = std::max(1, (int)std::ceil(std::log(1.0 / target.delta)));

  std::vector<int> best;
  double best_penalty = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) assignment[p] = int(rng.next_below(std::uint64_t(k)));
    Tally tally = tally_of(inst, target, assignment);
    double penalty = penalty_from_tally(tally, target, n);

    int sideways_left = 2 * n;
    bool progress = true;
    int guard = 200 * std::max(1, n);  // hard cap on accepted moves
    while (progress && penalty > 0.0 && guard-- > 0) {
      progress = false;
      // single-point moves, first improving (scan order fixed by seed-free
      // index order so runs are reproducible)
      for (int p = 0; p < n && !progress; ++p) {
        int from = assignment[p];
        for (int b = 0; b < k && !progress; ++b) {
          if (b == from) continue;
          tally.remove(inst, target.channel, assignment, p, from, n);
          assignment[p] = b;
          tally.place(inst, target.channel, assignment, p, b, n);
          double cand = penalty_from_tally(tally, target, n);
          bool accept = cand < penalty - 1e-15;
          if (!accept && cand <= penalty + 1e-15 && sideways_left > 0) {
            accept = true;
            --sideways_left;
          }
          if (accept) {
            penalty = std::min(penalty, cand);
            progress = true;
          } else {
            tally.remove(inst, target.channel, assignment, p, b, n);
            assignment[p] = from;
            tally.place(inst, target.channel, assignment, p, from, n);
          }
        }
      }
      if (progress) continue;
      // swaps
      for (int p = 0; p < n && !progress; ++p) {
        for (int q = p + 1; q < n && !progress; ++q) {
          if (assignment[p] == assignment[q]) continue;
          int bp = assignment[p], bq = assignment[q];
          tally.remove(inst, target.channel, assignment, p, bp, n);
          assignment[p] = bq;
          tally.place(inst, target.channel, assignment, p, bq, n);
          tally.remove(inst, target.channel, assignment, q, bq, n);
          assignment[q] = bp;
          tally.place(inst, target.channel, assignment, q, bp, n);
          double cand = penalty_from_tally(tally, target, n);
          bool accept = cand < penalty - 1e-15;
          if (!accept && cand <= penalty + 1e-15 && sideways_left > 0) {
            accept = true;
            --sideways_left;
          }
          if (accept) {
            penalty = std::min(penalty, cand);
            progress = true;
          } else {
            tally.remove(inst, target.channel, assignment, q, bp, n);
            assignment[q] = bq;
            tally.place(inst, target.channel, assignment, q, bq, n);
            tally.remove(inst, target.channel, assignment, p, bq, n);
            assignment[p] = bp;
            tally.place(inst, target.channel, assignment, p, bp, n);
          }
        }
      }
    }
    if (penalty < best_penalty) {
      best_penalty = penalty;
      best = assignment;
      if (penalty == 0.0) break;
    }
  }

  PartitionResult result;
  if (best_penalty > 0.0) return result;
  result.found = true;
  result.assignment = std::move(best);
  result.deviations = verify_partition(inst, result.assignment, target);
  return result;
}

// ---- sample-and-extend backend

PartitionResult sample_extend_backend(const Instance& inst, const PartitionTarget& target,
                                      Rng& rng) {
  const int n = inst.n();
  const int k = target.bucket_count;
  // sample size in the tester's O(log(1/delta)/eps_err^2) spirit, capped so
  // the exhaustive phase stays at k^s <= 4096 states
  int s = 1;
  if (target.eps_err > 0.0) {
    double want = std::log(1.0 / target.delta) / (target.eps_err * target.eps_err);
    s = int(std::min<double>(want, double(n)));
  } else {
    s = n;
  }
  s = std::max(1, s);
  while (std::pow(double(k), double(s)) > 4096.0 && s > 1) --s;
  s = std::min(s, n);

  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[std::size_t(i)] = i;
  rng.shuffle(ids);
  std::vector<int> sample(ids.begin(), ids.begin() + s);
  std::vector<int> rest(ids.begin() + s, ids.end());
  std::sort(rest.begin(), rest.end());

  const double size_tol = target.eps_err * n;
  const double weight_tol = target.eps_err * double(n) * double(n);

  std::vector<int> best;
  double best_penalty = std::numeric_limits<double>::infinity();

  std::vector<int> assignment(std::size_t(n), -1);
  long long combos = 1;
  for (int i = 0; i < s; ++i) combos *= k;
  for (long long combo = 0; combo < combos; ++combo) {
    Tally tally(k);
    long long code = combo;
    std::fill(assignment.begin(), assignment.end(), -1);
    for (int i = 0; i < s; ++i) {
      int b = int(code % k);
      code /= k;
      assignment[std::size_t(sample[std::size_t(i)])] = b;
    }
    for (int p = 0; p < n; ++p)
      if (assignment[std::size_t(p)] >= 0)
        tally.place(inst, target.channel, assignment, p, assignment[std::size_t(p)], p);

    // greedy extension by overshoot-only marginal penalty
    for (int p : rest) {
      int best_bucket = 0;
      double best_marginal = std::numeric_limits<double>::infinity();
      for (int b = 0; b < k; ++b) {
        assignment[std::size_t(p)] = b;
        tally.place(inst, target.channel, assignment, p, b, n);
        double marginal = 0.0;
        for (int i = 0; i < k; ++i)
          marginal += std::max(0.0, double(tally.size[i]) - target.alpha[i] - size_tol) / n;
        for (int i = 0; i < k; ++i)
          for (int j = i; j < k; ++j)
            marginal += std::max(0.0, tally.wv(i, j) - target.beta_at(i, j) - weight_tol) /
                        (double(n) * double(n));
        tally.remove(inst, target.channel, assignment, p, b, n);
        assignment[std::size_t(p)] = -1;
        if (marginal < best_marginal - 1e-15) {
          best_marginal = marginal;
          best_bucket = b;
        }
      }
      assignment[std::size_t(p)] = best_bucket;
      tally.place(inst, target.channel, assignment, p, best_bucket, n);
    }

    double penalty = penalty_from_tally(tally, target, n);
    if (penalty < best_penalty) {
      best_penalty = penalty;
      best = assignment;
      if (penalty == 0.0) break;
    }
  }

  PartitionResult result;
  if (best_penalty > 0.0) return result;
  result.found = true;
  result.assignment = std::move(best);
  result.deviations = verify_partition(inst, result.assignment, target);
  return result;
}

}  // namespace

PartitionResult solve_partition(const Instance& inst, const PartitionTarget& target,
                                PartitionBackend backend, Rng& rng, double exact_budget) {
  target.check(inst.n());
  switch (backend) {
    case PartitionBackend::Exact:
      return exact_backend(inst, target, exact_budget);
    case PartitionBackend::LocalSearch:
      return local_search_backend(inst, target, rng);
    case PartitionBackend::SampleExtend:
      return sample_extend_backend(inst, target, rng);
  }
  throw std::logic_error("unknown backend");
}

PartitionDeviations verify_partition(const Instance& inst, const std::vector<int>& assignment,
                                     const PartitionTarget& target) {
  const int n = inst.n();
  if (assignment.size() != std::size_t(n))
    throw std::invalid_argument("verify_partition: assignment must cover all n points");
  for (int b : assignment)
    if (b < 0 || b >= target.bucket_count)
      throw std::invalid_argument("verify_partition: bucket id out of range");
  return deviations_from_tally(tally_of(inst, target, assignment), target);
}

double partition_penalty(const Instance& inst, const std::vector<int>& assignment,
                         const PartitionTarget& target) {
  return penalty_from_tally(tally_of(inst, target, assignment), target, inst.n());
}

}  // namespace hcforge
