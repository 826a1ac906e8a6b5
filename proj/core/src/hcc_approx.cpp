#include "hcforge/hcc_approx.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "hcforge/objectives.hpp"

namespace hcforge {

HcTree greedy_caterpillar(const Instance& inst, std::vector<GreedyRound>* rounds) {
  const int n = inst.n();
  if (n < 2) throw std::invalid_argument("greedy_caterpillar requires n >= 2");
  if (rounds) rounds->clear();

  std::vector<int> alive(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) alive[std::size_t(i)] = i;

  std::vector<int> removal_order;
  removal_order.reserve(std::size_t(n - 2));

  while (alive.size() > 2) {
    const int m = static_cast<int>(alive.size());
    // per-vertex totals on the surviving sub-instance
    double ws_total = 0.0, wd_total = 0.0;
    std::vector<double> ws_v(alive.size(), 0.0), wd_v(alive.size(), 0.0);
    for (std::size_t a = 0; a < alive.size(); ++a) {
      for (std::size_t b = a + 1; b < alive.size(); ++b) {
        double s = inst.sim(alive[a], alive[b]);
        double d = inst.dis(alive[a], alive[b]);
        ws_total += s;
        wd_total += d;
        ws_v[a] += s;
        ws_v[b] += s;
        wd_v[a] += d;
        wd_v[b] += d;
      }
    }

    // s(v) = (W_s - w_s(v)) - (m-2)/2 w_s(v) - (W_d - w_d(v)) + m/2 w_d(v)
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    double score_sum = 0.0;
    for (std::size_t a = 0; a < alive.size(); ++a) {
      double score = (ws_total - ws_v[a]) - 0.5 * (m - 2) * ws_v[a] -
                     (wd_total - wd_v[a]) + 0.5 * m * wd_v[a];
      score_sum += score;
      if (score > best_score) {
        best_score = score;
        best = a;
      }
      // ties fall to the smallest id: alive is kept sorted so the first max wins
    }

    if (rounds) rounds->push_back({m, score_sum, wd_total, best_score});
    removal_order.push_back(alive[best]);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best));
  }

  // assemble the caterpillar: (u1, (u2, (..., (last two))))
  HcTree tree;
  int bottom = tree.add_node(NodeKind::Internal);
  tree.attach(bottom, tree.add_leaf(alive[0]));
  tree.attach(bottom, tree.add_leaf(alive[1]));
  int cur = bottom;
  for (auto it = removal_order.rbegin(); it != removal_order.rend(); ++it) {
    int join = tree.add_node(NodeKind::Internal);
    tree.attach(join, tree.add_leaf(*it));
    tree.attach(join, cur);
    cur = join;
  }
  tree.root = cur;
  return tree;
}

namespace {

double uncut_weight_of(const Instance& inst, const std::vector<int>& side_of) {
  double w = 0.0;
  for (int i = 0; i < inst.n(); ++i)
    for (int j = i + 1; j < inst.n(); ++j)
      if (side_of[std::size_t(i)] == side_of[std::size_t(j)]) w += inst.sim(i, j);
  return w;
}

Bisection bisection_from(const Instance& inst, const std::vector<int>& side_of) {
  Bisection b;
  for (int i = 0; i < inst.n(); ++i)
    (side_of[std::size_t(i)] == 0 ? b.left : b.right).push_back(i);
  b.uncut_weight = uncut_weight_of(inst, side_of);
  return b;
}

}  // namespace

Bisection max_uncut_bisection(const Instance& inst, MubBackend backend, Rng& rng,
                              int exact_max_n) {
  const int n = inst.n();
  if (n < 2) throw std::invalid_argument("max_uncut_bisection requires n >= 2");
  const int left_size = (n + 1) / 2;

  if (backend == MubBackend::Exact) {
    if (n > exact_max_n)
      throw std::domain_error("exact max_uncut_bisection guard: n = " + std::to_string(n) +
                              " exceeds " + std::to_string(exact_max_n));
    // enumerate subsets of size left_size containing point 0 (halves are
    // interchangeable), keeping the first maximizer in subset order
    std::vector<int> side_of(std::size_t(n), 1);
    std::vector<int> pick;
    std::vector<int> best_pick;
    double best = -1.0;
    auto rec = [&](auto&& self, int next, int remaining) -> void {
      if (remaining == 0) {
        std::fill(side_of.begin(), side_of.end(), 1);
        for (int i : pick) side_of[std::size_t(i)] = 0;
        double w = uncut_weight_of(inst, side_of);
        if (w > best) {
          best = w;
          best_pick = pick;
        }
        return;
      }
      for (int i = next; i <= n - remaining; ++i) {
        pick.push_back(i);
        self(self, i + 1, remaining - 1);
        pick.pop_back();
      }
    };
    pick.push_back(0);
    rec(rec, 1, left_size - 1);
    std::fill(side_of.begin(), side_of.end(), 1);
    for (int i : best_pick) side_of[std::size_t(i)] = 0;
    return bisection_from(inst, side_of);
  }

  // local search: seeded balanced starts, pair swaps to a local optimum
  const int restarts = 8;
  std::vector<int> best_side;
  double best = -1.0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[std::size_t(i)] = i;
    rng.shuffle(perm);
    std::vector<int> side_of(std::size_t(n), 1);
    for (int i = 0; i < left_size; ++i) side_of[std::size_t(perm[std::size_t(i)])] = 0;

    // per-vertex weight to each side for O(1) swap deltas
    std::vector<double> to_left(std::size_t(n), 0.0), to_right(std::size_t(n), 0.0);
    auto rebuild = [&] {
      std::fill(to_left.begin(), to_left.end(), 0.0);
      std::fill(to_right.begin(), to_right.end(), 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          (side_of[std::size_t(j)] == 0 ? to_left : to_right)[std::size_t(i)] += inst.sim(i, j);
        }
    };
    rebuild();
    double w = uncut_weight_of(inst, side_of);

    bool progress = true;
    while (progress) {
      progress = false;
      for (int i = 0; i < n && !progress; ++i) {
        if (side_of[std::size_t(i)] != 0) continue;
        for (int j = 0; j < n && !progress; ++j) {
          if (side_of[std::size_t(j)] != 1) continue;
          // swapping i<->j: each vertex picks up its weight to the other
          // side, and the (i,j) pair itself stays cut on both sides
          double delta = (to_right[std::size_t(i)] - to_left[std::size_t(i)]) +
                         (to_left[std::size_t(j)] - to_right[std::size_t(j)]) -
                         2.0 * inst.sim(i, j);
          if (delta > 1e-12) {
            side_of[std::size_t(i)] = 1;
            side_of[std::size_t(j)] = 0;
            rebuild();
            w += delta;
            progress = true;
          }
        }
      }
    }
    w = uncut_weight_of(inst, side_of);
    if (w > best) {
      best = w;
      best_side = side_of;
    }
  }
  return bisection_from(inst, best_side);
}

HcTree mub_then_greedy(const Instance& inst, MubBackend backend, Rng& rng) {
  const int n = inst.n();
  if (n < 2) throw std::invalid_argument("mub_then_greedy requires n >= 2");
  if (n == 2) return greedy_caterpillar(inst);

  Bisection cut = max_uncut_bisection(inst, backend, rng);

  HcTree tree;
  int root = tree.add_node(NodeKind::Internal);
  tree.root = root;
  for (const std::vector<int>& side : {cut.left, cut.right}) {
    if (side.size() == 1) {
      tree.attach(root, tree.add_leaf(side[0]));
      continue;
    }
    Instance sub = inst.restricted(side);
    HcTree sub_tree = greedy_caterpillar(sub);
    // graft with leaf ids mapped back to the global instance
    std::vector<int> map(sub_tree.nodes.size(), -1);
    for (int v : sub_tree.post_order()) {
      const auto& node = sub_tree.nodes[v];
      map[std::size_t(v)] = node.kind == NodeKind::Leaf
                                ? tree.add_leaf(side[std::size_t(node.leaf)])
                                : tree.add_node(node.kind);
      for (int c : node.children) tree.attach(map[std::size_t(v)], map[std::size_t(c)]);
    }
    tree.attach(root, map[std::size_t(sub_tree.root)]);
  }
  return tree;
}

HcTree combined_hcc(const Instance& inst, double p, CombineMode mode, Rng& rng,
                    MubBackend backend) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (mode == CombineMode::Randomized) {
    if (rng.next_bool(p)) return greedy_caterpillar(inst);
    return mub_then_greedy(inst, backend, rng);
  }
  HcTree greedy = greedy_caterpillar(inst);
  HcTree mub = mub_then_greedy(inst, backend, rng);
  return eval_hcc(inst, greedy).hcc >= eval_hcc(inst, mub).hcc ? greedy : mub;
}

}  // namespace hcforge
