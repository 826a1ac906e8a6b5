#include "hcforge/epras.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hcforge/baselines.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/parallel.hpp"
#include "hcforge/tree_io.hpp"

namespace hcforge {

int EprasConfig::k() const { return static_cast<int>(std::ceil(1.0 / eps)); }
double EprasConfig::eps_err() const { return eps * eps * eps; }
int EprasConfig::max_sketch_internal() const {
  return max_internal_override > 0 ? max_internal_override : 20 * k();
}

void EprasConfig::check() const {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0,1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in (0,1]");
}

int SketchShape::internal_count() const {
  int c = 0;
  for (const auto& node : nodes)
    if (node.slot < 0) ++c;
  return c;
}

int SketchShape::max_arity() const {
  int m = 0;
  for (const auto& node : nodes) m = std::max(m, static_cast<int>(node.children.size()));
  return m;
}

namespace {
std::string canon_of(const SketchShape& shape, int v) {
  const auto& node = shape.nodes[v];
  if (node.slot >= 0) return "b";
  std::vector<std::string> parts;
  parts.reserve(node.children.size());
  for (int c : node.children) parts.push_back(canon_of(shape, c));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out + ")";
}
}  // namespace

std::string SketchShape::canon() const { return canon_of(*this, root); }

SketchShape SketchShape::parse(const std::string& text) {
  SketchShape shape;
  std::size_t pos = 0;
  auto rec = [&](auto&& self) -> int {
    if (pos >= text.size()) throw std::invalid_argument("shape parse: truncated");
    if (text[pos] == 'b') {
      ++pos;
      SNode node;
      node.slot = static_cast<int>(shape.slot_nodes.size());
      shape.nodes.push_back(node);
      int id = static_cast<int>(shape.nodes.size()) - 1;
      shape.slot_nodes.push_back(id);
      return id;
    }
    if (text[pos] != '(') throw std::invalid_argument("shape parse: expected '(' or 'b'");
    ++pos;
    shape.nodes.emplace_back();
    int id = static_cast<int>(shape.nodes.size()) - 1;
    while (true) {
      int child = self(self);
      shape.nodes[id].children.push_back(child);
      shape.nodes[child].parent = id;
      if (pos >= text.size()) throw std::invalid_argument("shape parse: unterminated");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      throw std::invalid_argument("shape parse: bad separator");
    }
    return id;
  };
  shape.root = rec(rec);
  if (pos != text.size()) throw std::invalid_argument("shape parse: trailing text");
  return shape;
}

SketchShape SketchShape::lone_slot() { return parse("b"); }

namespace {

// Canonical shape strings with exactly `slots` bucket leaves: either the
// bare slot or an internal root over a non-decreasing multiset of at least
// two sub-shapes. Memoized per slot count.
const std::vector<std::string>& shape_strings(int slots) {
  static std::map<int, std::vector<std::string>> memo;
  auto it = memo.find(slots);
  if (it != memo.end()) return it->second;
  std::vector<std::string> out;
  if (slots == 1) {
    out.push_back("b");
  } else {
    // collect sub-shapes by slot count
    std::vector<std::pair<int, std::string>> pool;  // (slots, canon)
    for (int s = 1; s < slots; ++s)
      for (const auto& str : shape_strings(s)) pool.push_back({s, str});
    std::sort(pool.begin(), pool.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::string> chosen;
    auto rec = [&](auto&& self, std::size_t floor_idx, int remaining, int parts) -> void {
      if (remaining == 0) {
        if (parts >= 2) {
          std::string s = "(";
          for (std::size_t i = 0; i < chosen.size(); ++i) {
            if (i) s += ',';
            s += chosen[i];
          }
          out.push_back(s + ")");
        }
        return;
      }
      for (std::size_t i = floor_idx; i < pool.size(); ++i) {
        if (pool[i].first > remaining) continue;
        chosen.push_back(pool[i].second);
        self(self, i, remaining - pool[i].first, parts + 1);
        chosen.pop_back();
      }
    };
    rec(rec, 0, slots, 0);
    std::sort(out.begin(), out.end());
  }
  return memo.emplace(slots, std::move(out)).first->second;
}

}  // namespace

std::vector<SketchShape> enumerate_sketch_shapes(int max_internal, int max_buckets,
                                                 bool binary_only) {
  if (max_internal < 1) throw std::invalid_argument("enumerate_sketch_shapes: max_internal >= 1");
  if (max_buckets < 1) throw std::invalid_argument("enumerate_sketch_shapes: max_buckets >= 1");
  std::vector<SketchShape> shapes;
  for (int b = 2; b <= max_buckets; ++b) {
    for (const auto& str : shape_strings(b)) {
      SketchShape shape = SketchShape::parse(str);
      if (shape.internal_count() > max_internal) continue;
      if (binary_only && shape.max_arity() > 2) continue;
      shapes.push_back(std::move(shape));
    }
  }
  return shapes;
}

namespace {

// Per-slot-pair LCA masses: mass[i*k+j] = sum of alpha over slots inside the
// subtree rooted at the LCA of slots i and j.
std::vector<double> lca_masses(const SketchShape& shape, std::span<const double> alpha) {
  const int k = shape.slot_count();
  // slot sets per node in post order
  std::vector<std::vector<int>> slots_under(shape.nodes.size());
  std::vector<double> mass_under(shape.nodes.size(), 0.0);
  std::vector<double> out(std::size_t(k) * k, 0.0);
  // post-order via recursion (shapes are tiny)
  auto rec = [&](auto&& self, int v) -> void {
    const auto& node = shape.nodes[v];
    if (node.slot >= 0) {
      slots_under[v] = {node.slot};
      mass_under[v] = alpha[std::size_t(node.slot)];
      return;
    }
    for (int c : node.children) self(self, c);
    double m = 0.0;
    for (int c : node.children) m += mass_under[std::size_t(c)];
    mass_under[v] = m;
    const auto& kids = node.children;
    for (std::size_t a = 0; a < kids.size(); ++a)
      for (std::size_t b = a + 1; b < kids.size(); ++b)
        for (int i : slots_under[std::size_t(kids[a])])
          for (int j : slots_under[std::size_t(kids[b])])
            out[std::size_t(i) * k + j] = out[std::size_t(j) * k + i] = m;
    auto& mine = slots_under[v];
    for (int c : node.children)
      mine.insert(mine.end(), slots_under[std::size_t(c)].begin(), slots_under[std::size_t(c)].end());
  };
  rec(rec, shape.root);
  return out;
}

void check_dims(const SketchShape& shape, std::span<const double> alpha,
                std::span<const double> beta) {
  const std::size_t k = std::size_t(shape.slot_count());
  if (alpha.size() != k || beta.size() != k * k)
    throw std::invalid_argument("sketch evaluation: alpha/beta dimension mismatch");
}

}  // namespace

double eval_sketch_revenue(const SketchShape& shape, std::span<const double> alpha,
                           std::span<const double> beta) {
  check_dims(shape, alpha, beta);
  const int k = shape.slot_count();
  double n_mass = 0.0;
  for (double a : alpha) n_mass += a;
  std::vector<double> mass = lca_masses(shape, alpha);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    total += beta[std::size_t(i) * k + i] * (n_mass - alpha[std::size_t(i)]);
    for (int j = i + 1; j < k; ++j)
      total += beta[std::size_t(i) * k + j] * (n_mass - mass[std::size_t(i) * k + j]);
  }
  return total;
}

double eval_sketch_dissimilarity(const SketchShape& shape, std::span<const double> alpha,
                                 std::span<const double> beta) {
  check_dims(shape, alpha, beta);
  const int k = shape.slot_count();
  std::vector<double> mass = lca_masses(shape, alpha);
  double total = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      total += beta[std::size_t(i) * k + j] * mass[std::size_t(i) * k + j];
  return total;
}

namespace {

enum class Scheme { Revenue, Dissimilarity };

struct GridSpec {
  std::vector<double> alpha_values;
  std::vector<double> beta_values;
};

GridSpec make_grid(int n, const EprasConfig& cfg) {
  GridSpec g;
  const double a_step = cfg.eps * cfg.eps * n;
  const double b_step = cfg.eps * cfg.eps * cfg.eps * double(n) * double(n);
  const int a_max = static_cast<int>(std::floor(3.0 / cfg.eps + 1e-9));
  const int b_max = static_cast<int>(std::floor(9.0 / cfg.eps + 1e-9));
  for (int i = 0; i <= a_max; ++i) g.alpha_values.push_back(i * a_step);
  for (int i = 0; i <= b_max; ++i) g.beta_values.push_back(i * b_step);
  return g;
}

// Random-access candidate space: index -> (shape, alpha choices, beta choices).
struct CandidateSpace {
  const std::vector<SketchShape>& shapes;
  const GridSpec& grid;
  int n;
  std::vector<double> shape_sizes;  // candidates per shape
  double total = 0.0;

  CandidateSpace(const std::vector<SketchShape>& shapes_, const GridSpec& grid_, int n_)
      : shapes(shapes_), grid(grid_), n(n_) {
    for (const auto& shape : shapes) {
      int b = shape.slot_count();
      double size = std::pow(double(grid.alpha_values.size()), double(b - 1)) *
                    std::pow(double(grid.beta_values.size()), double(b) * (b + 1) / 2.0);
      shape_sizes.push_back(size);
      total += size;
    }
  }

  // Decodes idx into targets; returns false when the alpha residual is out
  // of range (candidate skipped).
  bool decode(double idx, const EprasConfig& cfg, int& shape_idx, std::vector<double>& alpha,
              std::vector<double>& beta) const {
    std::size_t s = 0;
    while (s < shape_sizes.size() && idx >= shape_sizes[s]) {
      idx -= shape_sizes[s];
      ++s;
    }
    if (s >= shape_sizes.size()) throw std::logic_error("candidate index out of range");
    shape_idx = static_cast<int>(s);
    const int b = shapes[s].slot_count();
    long long code = static_cast<long long>(idx);
    const long long abase = static_cast<long long>(grid.alpha_values.size());
    const long long bbase = static_cast<long long>(grid.beta_values.size());

    alpha.assign(std::size_t(b), 0.0);
    double used = 0.0;
    for (int i = 0; i < b - 1; ++i) {
      alpha[std::size_t(i)] = grid.alpha_values[std::size_t(code % abase)];
      used += alpha[std::size_t(i)];
      code /= abase;
    }
    const double residual = double(n) - used;
    const double residual_cap = 3.0 * cfg.eps * n + cfg.eps * cfg.eps * n;
    alpha[std::size_t(b - 1)] = residual;
    bool alpha_ok = residual >= -1e-9 && residual <= residual_cap + 1e-9;

    beta.assign(std::size_t(b) * b, 0.0);
    for (int i = 0; i < b; ++i)
      for (int j = i; j < b; ++j) {
        double v = grid.beta_values[std::size_t(code % bbase)];
        code /= bbase;
        beta[std::size_t(i) * b + j] = beta[std::size_t(j) * b + i] = v;
      }
    return alpha_ok;
  }
};

// Star (revenue) or comb (dissimilarity) materialization of a found
// partition on the shape.
HcTree materialize(const SketchShape& shape, const std::vector<std::vector<int>>& buckets,
                   Scheme scheme, int comb_parts, Rng& rng) {
  HcTree raw;
  auto build = [&](auto&& self, int v) -> int {
    const auto& node = shape.nodes[v];
    if (node.slot >= 0) {
      const auto& bucket = buckets[std::size_t(node.slot)];
      if (bucket.empty()) return -1;
      if (scheme == Scheme::Revenue) {
        int aux = raw.add_node(NodeKind::Auxiliary);
        for (int leaf : bucket) raw.attach(aux, raw.add_leaf(leaf));
        return aux;
      }
      std::vector<int> shuffled = bucket;
      rng.shuffle(shuffled);
      const int parts = std::min<int>(comb_parts, static_cast<int>(shuffled.size()));
      std::vector<std::vector<int>> part(static_cast<std::size_t>(parts));
      for (std::size_t i = 0; i < shuffled.size(); ++i)
        part[i % std::size_t(parts)].push_back(shuffled[i]);
      int below = -1;
      for (int i = parts - 1; i >= 0; --i) {
        int aux = raw.add_node(NodeKind::Auxiliary);
        for (int leaf : part[std::size_t(i)]) raw.attach(aux, raw.add_leaf(leaf));
        if (below < 0) {
          below = aux;
        } else {
          int chain = raw.add_node(NodeKind::Internal);
          raw.attach(chain, aux);
          raw.attach(chain, below);
          below = chain;
        }
      }
      return below;
    }
    int id = raw.add_node(NodeKind::Internal);
    bool any = false;
    for (int c : node.children) {
      int k = self(self, c);
      if (k >= 0) {
        raw.attach(id, k);
        any = true;
      }
    }
    return any ? id : -1;
  };
  raw.root = build(build, shape.root);
  if (raw.root < 0) throw std::logic_error("materialize: no data points");
  return normalized(raw);
}

struct FoldEntry {
  bool tried = false;
  bool found = false;
  double value = 0.0;
  std::string canon;
};

EprasResult run_scheme(const Instance& inst, const EprasConfig& cfg, Rng& rng, Scheme scheme,
                       const CandidateObserver& observer) {
  cfg.check();
  const int n = inst.n();
  const Channel channel = scheme == Scheme::Revenue ? Channel::Sim : Channel::Dis;
  auto true_value = [&](const HcTree& t) {
    return scheme == Scheme::Revenue ? eval_revenue(inst, t) : eval_dissimilarity(inst, t);
  };

  EprasResult result;
  result.not_all_small_ok = not_all_small(inst, cfg.rho, cfg.tau, channel);

  // the average-linkage tree always competes
  HcTree al = average_linkage(inst, channel);
  result.baseline_value = true_value(al);
  HcTree best_tree = al;
  double best_value = result.baseline_value;
  std::string best_canon = canonical_paren(al);

  if (n == 1) {
    result.tree = std::move(best_tree);
    result.value = best_value;
    return result;
  }

  const std::vector<SketchShape> shapes = enumerate_sketch_shapes(
      cfg.max_sketch_internal(), cfg.k(), /*binary_only=*/scheme == Scheme::Dissimilarity);
  const GridSpec grid = make_grid(n, cfg);
  CandidateSpace space(shapes, grid, n);
  if (space.total > cfg.candidate_budget)
    throw std::domain_error("epras candidate budget exceeded: " + std::to_string(space.total) +
                            " candidates (budget " + std::to_string(cfg.candidate_budget) +
                            "); increase eps or the budget");

  const long long count = static_cast<long long>(space.total);
  const std::uint64_t master_seed = rng.next_u64();
  const int comb_parts = cfg.k();

  auto eval_candidate = [&](std::size_t idx, FoldEntry& entry) {
    entry = FoldEntry{};
    int shape_idx = 0;
    std::vector<double> alpha, beta;
    if (!space.decode(double(idx), cfg, shape_idx, alpha, beta)) return;
    entry.tried = true;
    const SketchShape& shape = shapes[std::size_t(shape_idx)];
    const int b = shape.slot_count();

    PartitionTarget target = PartitionTarget::make(b, cfg.eps_err(), cfg.delta, channel);
    target.alpha = alpha;
    target.beta = beta;

    Rng child(Rng::derive(master_seed, idx));
    PartitionResult part = solve_partition(inst, target, cfg.backend, child, cfg.exact_budget);
    if (!part.found) return;

    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(b));
    for (int p = 0; p < n; ++p) buckets[std::size_t(part.assignment[std::size_t(p)])].push_back(p);

    Rng comb_rng(Rng::derive(master_seed ^ 0x5bf03635ULL, idx));
    HcTree raw = materialize(shape, buckets, scheme, comb_parts, comb_rng);
    HcTree scored = binarize(raw);
    double value = true_value(scored);

    entry.found = true;
    entry.value = value;
    entry.canon = canonical_paren(scored);

    if (observer) {
      CandidateRecord rec;
      rec.shape = shape.canon();
      rec.alpha = alpha;
      rec.beta = beta;
      rec.actual_sizes.assign(std::size_t(b), 0.0);
      for (int i = 0; i < b; ++i) rec.actual_sizes[std::size_t(i)] = double(buckets[std::size_t(i)].size());
      rec.actual_weights.assign(std::size_t(b) * b, 0.0);
      for (int i = 0; i < b; ++i)
        for (int j = i; j < b; ++j) {
          double w = 0.0;
          for (int pi : buckets[std::size_t(i)])
            for (int pj : buckets[std::size_t(j)]) {
              if (i == j && pi >= pj) continue;
              w += channel == Channel::Sim ? inst.sim(pi, pj) : inst.dis(pi, pj);
            }
          rec.actual_weights[std::size_t(i) * b + j] = rec.actual_weights[std::size_t(j) * b + i] = w;
        }
      auto eval_sketch = scheme == Scheme::Revenue ? eval_sketch_revenue : eval_sketch_dissimilarity;
      rec.estimate_target = eval_sketch(shape, alpha, beta);
      rec.estimate_actual = eval_sketch(shape, rec.actual_sizes, rec.actual_weights);
      rec.raw_value = true_value(raw);
      rec.scored_value = value;
      observer(rec);
    }
  };

  // evaluate in blocks: parallel within a block, folded in index order so the
  // outcome is independent of the worker count
  const std::size_t block = 8192;
  std::vector<FoldEntry> entries(std::min<std::size_t>(block, std::size_t(count)));
  for (std::size_t base = 0; base < std::size_t(count); base += block) {
    const std::size_t len = std::min(block, std::size_t(count) - base);
    if (observer) {
      for (std::size_t i = 0; i < len; ++i) eval_candidate(base + i, entries[i]);
    } else {
      parallel_for(len, [&](std::size_t i) { eval_candidate(base + i, entries[i]); });
    }
    for (std::size_t i = 0; i < len; ++i) {
      const FoldEntry& entry = entries[i];
      if (entry.tried) ++result.candidates_tried;
      if (!entry.found) continue;
      ++result.candidates_found;
      bool better = entry.value > best_value + 1e-12 ||
                    (entry.value > best_value - 1e-12 && entry.canon < best_canon);
      if (!better) continue;
      best_value = entry.value;
      best_canon = entry.canon;
      // rebuild the winner deterministically from its index
      const std::size_t idx = base + i;
      int shape_idx = 0;
      std::vector<double> alpha, beta;
      space.decode(double(idx), cfg, shape_idx, alpha, beta);
      PartitionTarget target =
          PartitionTarget::make(shapes[std::size_t(shape_idx)].slot_count(), cfg.eps_err(),
                                cfg.delta, channel);
      target.alpha = alpha;
      target.beta = beta;
      Rng child(Rng::derive(master_seed, idx));
      PartitionResult part = solve_partition(inst, target, cfg.backend, child, cfg.exact_budget);
      std::vector<std::vector<int>> buckets(static_cast<std::size_t>(target.bucket_count));
      for (int p = 0; p < n; ++p)
        buckets[std::size_t(part.assignment[std::size_t(p)])].push_back(p);
      Rng comb_rng(Rng::derive(master_seed ^ 0x5bf03635ULL, idx));
      best_tree = binarize(materialize(shapes[std::size_t(shape_idx)], buckets, scheme,
                                       comb_parts, comb_rng));
    }
  }

  result.tree = std::move(best_tree);
  result.value = best_value;
  return result;
}

}  // namespace

EprasResult revenue_epras(const Instance& inst, const EprasConfig& cfg, Rng& rng,
                          const CandidateObserver& observer) {
  return run_scheme(inst, cfg, rng, Scheme::Revenue, observer);
}

EprasResult dissimilarity_epras(const Instance& inst, const EprasConfig& cfg, Rng& rng,
                                const CandidateObserver& observer) {
  return run_scheme(inst, cfg, rng, Scheme::Dissimilarity, observer);
}

EprasResult hcc_pm(const Instance& inst, const EprasConfig& cfg, Rng& rng) {
  const int n = inst.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(inst.sim(i, j) + inst.dis(i, j) - 1.0) > 1e-9)
        throw std::invalid_argument("hcc_pm requires complementary weights w^s = 1 - w^d");

  EprasResult rev = revenue_epras(inst, cfg, rng);
  EprasResult dis = dissimilarity_epras(inst, cfg, rng);
  double rev_hcc = eval_hcc(inst, rev.tree).hcc;
  double dis_hcc = eval_hcc(inst, dis.tree).hcc;

  EprasResult result;
  result.case_applied = inst.total_dis() >= inst.total_sim() ? "dis" : "sim";
  result.candidates_tried = rev.candidates_tried + dis.candidates_tried;
  result.candidates_found = rev.candidates_found + dis.candidates_found;
  result.baseline_value = std::max(eval_hcc(inst, average_linkage(inst, Channel::Sim)).hcc,
                                   eval_hcc(inst, average_linkage(inst, Channel::Dis)).hcc);
  if (dis_hcc > rev_hcc || (dis_hcc == rev_hcc && result.case_applied == "dis")) {
    result.tree = std::move(dis.tree);
    result.value = dis_hcc;
  } else {
    result.tree = std::move(rev.tree);
    result.value = rev_hcc;
  }
  return result;
}

EprasResult metric_shift(const Instance& inst, double shift_eps, const EprasConfig& cfg,
                         Rng& rng) {
  if (!(shift_eps > 0.0 && shift_eps < 1.0))
    throw std::invalid_argument("metric_shift requires shift_eps in (0,1)");
  const int n = inst.n();
  Instance shifted(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      shifted.set_sim(i, j, std::min(1.0, inst.sim(i, j) + shift_eps));

  EprasConfig shifted_cfg = cfg;
  shifted_cfg.rho = 1.0;  // after the shift every weight is >= shift_eps
  shifted_cfg.tau = shift_eps;

  EprasResult run = revenue_epras(shifted, shifted_cfg, rng);
  EprasResult result;
  result.shifted_value = run.value;
  result.value = eval_revenue(inst, run.tree);
  result.tree = std::move(run.tree);
  result.baseline_value = eval_revenue(inst, average_linkage(inst, Channel::Sim));
  result.candidates_tried = run.candidates_tried;
  result.candidates_found = run.candidates_found;
  result.case_applied = "shift";
  return result;
}

double epras_candidate_count(int n, const EprasConfig& cfg, bool binary_only) {
  const std::vector<SketchShape> shapes =
      enumerate_sketch_shapes(cfg.max_sketch_internal(), cfg.k(), binary_only);
  const GridSpec grid = make_grid(n, cfg);
  return CandidateSpace(shapes, grid, n).total;
}

}  // namespace hcforge
