#include "hcforge/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hcforge/baselines.hpp"
#include "hcforge/bench_suites.hpp"
#include "hcforge/epras.hpp"
#include "hcforge/generators.hpp"
#include "hcforge/hcc_approx.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/partition.hpp"
#include "hcforge/sketch.hpp"
#include "hcforge/tree_io.hpp"

namespace hcforge {

namespace {

using json = nlohmann::ordered_json;

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    std::cout << text << "\n";
  } else {
    save_text(output, text);
  }
}

json tree_report(const HcTree& tree) { return json(to_paren(tree)); }

PartitionBackend parse_backend(const std::string& name) {
  if (name == "exact") return PartitionBackend::Exact;
  if (name == "local-search") return PartitionBackend::LocalSearch;
  if (name == "sample-extend") return PartitionBackend::SampleExtend;
  throw CLI::ValidationError("--backend", "expected exact|local-search|sample-extend");
}

int cmd_eval(const std::string& instance_path, const std::string& tree_path,
             const std::string& output) {
  Instance inst = load_instance(instance_path);
  HcTree tree = load_tree(tree_path);
  ObjectiveReport rep = eval_hcc(inst, tree);
  json out;
  out["schema"] = "hcforge/eval/1";
  out["config"] = {{"instance", instance_path}, {"tree", tree_path}};
  out["n"] = inst.n();
  out["rev"] = rep.rev;
  out["dis"] = rep.dis;
  out["hcc"] = rep.hcc;
  out["total_sim_weight"] = rep.total_sim_weight;
  out["total_dis_weight"] = rep.total_dis_weight;
  emit(output, out.dump(2));
  return 0;
}

int cmd_sketch(const std::string& tree_path, double eps, const std::string& objective,
               std::uint64_t seed, const std::string& output) {
  HcTree tree = load_tree(tree_path);
  require_evaluable(tree, tree.leaf_count());
  ContractedTree K = contract_to_K(tree, eps);
  HcTree converted;
  if (objective == "rev") {
    converted = to_rev_tree(K);
  } else if (objective == "dis") {
    Rng rng(seed);
    converted = to_dis_tree(K, eps, rng);
  } else {
    throw CLI::ValidationError("--objective", "expected rev|dis");
  }
  SketchStats stats = sketch_stats(converted, eps);
  json out;
  out["schema"] = "hcforge/sketch/1";
  out["config"] = {{"tree", tree_path}, {"eps", eps}, {"objective", objective}};
  out["seed"] = seed;
  out["internal_nodes"] = stats.internal_nodes;
  out["max_children"] = stats.max_children;
  json bags = json::array();
  for (const auto& knode : K.nodes)
    if (!knode.bag.empty()) bags.push_back(knode.bag);
  out["bags"] = bags;
  out["tree"] = to_paren(converted);
  emit(output, out.dump(2));
  return 0;
}

int cmd_epras(const std::string& instance_path, const std::string& objective, double eps,
              double delta, double rho, double tau, const std::string& backend,
              std::uint64_t seed, double budget, double shift, const std::string& output) {
  Instance inst = load_instance(instance_path);
  EprasConfig cfg;
  cfg.eps = eps;
  cfg.delta = delta;
  cfg.rho = rho;
  cfg.tau = tau;
  cfg.backend = parse_backend(backend);
  cfg.candidate_budget = budget;
  Rng rng(seed);

  EprasResult result;
  if (shift > 0.0) {
    if (objective != "rev")
      throw CLI::ValidationError("--shift", "metric shift applies to the rev objective only");
    result = metric_shift(inst, shift, cfg, rng);
  } else if (objective == "rev") {
    result = revenue_epras(inst, cfg, rng);
  } else if (objective == "dis") {
    result = dissimilarity_epras(inst, cfg, rng);
  } else if (objective == "hccpm") {
    result = hcc_pm(inst, cfg, rng);
  } else {
    throw CLI::ValidationError("--objective", "expected rev|dis|hccpm");
  }

  json out;
  out["schema"] = "hcforge/epras/1";
  out["config"] = {{"instance", instance_path}, {"objective", objective}, {"eps", eps},
                   {"delta", delta},            {"rho", rho},             {"tau", tau},
                   {"backend", backend},        {"budget", budget},       {"shift", shift}};
  out["seed"] = seed;
  out["tree"] = tree_report(result.tree);
  out["value"] = result.value;
  out["baselineValue"] = result.baseline_value;
  out["candidatesTried"] = result.candidates_tried;
  out["candidatesFound"] = result.candidates_found;
  out["notAllSmall"] = result.not_all_small_ok;
  if (!result.case_applied.empty()) out["caseApplied"] = result.case_applied;
  if (shift > 0.0) out["shiftedValue"] = result.shifted_value;
  emit(output, out.dump(2));
  return 0;
}

int cmd_hcc(const std::string& instance_path, double p, const std::string& mode,
            const std::string& mub_backend, std::uint64_t seed, const std::string& output) {
  Instance inst = load_instance(instance_path);
  CombineMode cmode;
  if (mode == "randomized") {
    cmode = CombineMode::Randomized;
  } else if (mode == "best-of-both") {
    cmode = CombineMode::BestOfBoth;
  } else {
    throw CLI::ValidationError("--mode", "expected randomized|best-of-both");
  }
  MubBackend backend;
  if (mub_backend == "exact") {
    backend = MubBackend::Exact;
  } else if (mub_backend == "local-search") {
    backend = MubBackend::LocalSearch;
  } else {
    throw CLI::ValidationError("--mub-backend", "expected exact|local-search");
  }
  Rng rng(seed);
  HcTree tree = combined_hcc(inst, p, cmode, rng, backend);
  ObjectiveReport rep = eval_hcc(inst, tree);
  json out;
  out["schema"] = "hcforge/hcc/1";
  out["config"] = {{"instance", instance_path}, {"p", p}, {"mode", mode},
                   {"mub_backend", mub_backend}};
  out["seed"] = seed;
  out["tree"] = tree_report(tree);
  out["value"] = rep.hcc;
  out["rev"] = rep.rev;
  out["dis"] = rep.dis;
  emit(output, out.dump(2));
  return 0;
}

int cmd_oracle(const std::string& instance_path, const std::string& objective, int max_n,
               bool yes_i_know, const std::string& output) {
  if (max_n > 10 && !yes_i_know)
    throw CLI::ValidationError("--max-n", "raising the guard needs --yes-i-know");
  Instance inst = load_instance(instance_path);
  Objective obj;
  if (objective == "rev") {
    obj = Objective::Rev;
  } else if (objective == "dis") {
    obj = Objective::Dis;
  } else if (objective == "hcc") {
    obj = Objective::Hcc;
  } else {
    throw CLI::ValidationError("--objective", "expected rev|dis|hcc");
  }
  auto [tree, value] = brute_force_optimal(inst, obj, max_n);
  json out;
  out["schema"] = "hcforge/oracle/1";
  out["config"] = {{"instance", instance_path}, {"objective", objective}, {"max_n", max_n}};
  out["tree"] = tree_report(tree);
  out["value"] = value;
  emit(output, out.dump(2));
  return 0;
}

PartitionTarget target_from_json(const std::string& text) {
  json j = json::parse(text);
  int k = j.at("k").get<int>();
  PartitionTarget t = PartitionTarget::make(
      k, j.at("eps_err").get<double>(), j.value("delta", 0.1),
      j.value("channel", std::string("sim")) == "dis" ? Channel::Dis : Channel::Sim);
  auto alpha = j.at("alpha");
  if (int(alpha.size()) != k) throw std::invalid_argument("target alpha must have k entries");
  for (int i = 0; i < k; ++i) t.alpha[std::size_t(i)] = alpha[std::size_t(i)].get<double>();
  auto beta = j.at("beta");
  if (int(beta.size()) != k) throw std::invalid_argument("target beta must be k x k");
  for (int i = 0; i < k; ++i) {
    if (int(beta[std::size_t(i)].size()) != k)
      throw std::invalid_argument("target beta must be k x k");
    for (int jj = 0; jj < k; ++jj)
      t.beta[std::size_t(i) * k + jj] = beta[std::size_t(i)][std::size_t(jj)].get<double>();
  }
  return t;
}

int cmd_partition(const std::string& instance_path, const std::string& target_path,
                  const std::string& backend, std::uint64_t seed, const std::string& output) {
  Instance inst = load_instance(instance_path);
  std::ifstream in(target_path);
  if (!in) throw std::invalid_argument("cannot open target file: " + target_path);
  std::stringstream ss;
  ss << in.rdbuf();
  PartitionTarget target = target_from_json(ss.str());
  Rng rng(seed);
  PartitionResult result = solve_partition(inst, target, parse_backend(backend), rng);
  json out;
  out["schema"] = "hcforge/partition/1";
  out["config"] = {{"instance", instance_path}, {"target", target_path}, {"backend", backend}};
  out["seed"] = seed;
  out["verdict"] = result.found ? "found" : "infeasible";
  if (result.found) {
    out["assignment"] = result.assignment;
    out["size_dev"] = result.deviations.size_dev;
    out["weight_dev"] = result.deviations.weight_dev;
  }
  emit(output, out.dump(2));
  return 0;
}

int cmd_gen(const std::string& kind, int n, double density, std::uint64_t seed,
            const std::string& input, const std::string& points_file,
            const std::string& similarity, double sigma, bool normalize, long long path_len,
            const std::string& output) {
  Rng rng(seed);
  Instance inst(1);
  if (kind == "random" || kind == "hccpm") {
    inst = random_instance(n, density, kind == "hccpm", rng);
  } else if (kind == "metric") {
    if (points_file.empty())
      throw CLI::ValidationError("--points-file", "metric generation needs a points file");
    std::ifstream in(points_file);
    if (!in) throw std::invalid_argument("cannot open points file: " + points_file);
    std::stringstream ss;
    ss << in.rdbuf();
    json pts = json::parse(ss.str());
    MetricConfig cfg;
    if (pts.is_object() && pts.contains("distances")) {
      for (const auto& row : pts["distances"])
        cfg.distances.push_back(row.get<std::vector<double>>());
    } else {
      const json& arr = pts.is_object() ? pts.at("points") : pts;
      for (const auto& row : arr) cfg.points.push_back(row.get<std::vector<double>>());
    }
    if (similarity == "gaussian") {
      cfg.similarity = SimilarityFn::Gaussian;
    } else if (similarity == "linear-ramp") {
      cfg.similarity = SimilarityFn::LinearRamp;
    } else if (similarity == "inverse") {
      cfg.similarity = SimilarityFn::Inverse;
    } else {
      throw CLI::ValidationError("--similarity", "expected gaussian|linear-ramp|inverse");
    }
    cfg.sigma = sigma;
    cfg.diameter_normalize = normalize;
    std::vector<std::string> warnings;
    inst = metric_instance(cfg, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  } else if (kind == "clique-augment" || kind == "path-augment" || kind == "complement") {
    if (input.empty())
      throw CLI::ValidationError("--input", "augmentations need a base instance");
    Instance base = load_instance(input);
    if (kind == "clique-augment") {
      inst = clique_augment(base);
    } else if (kind == "path-augment") {
      inst = path_augment(base, path_len);
    } else {
      inst = complement_instance(base);
    }
  } else {
    throw CLI::ValidationError(
        "--kind", "expected random|metric|clique-augment|path-augment|complement|hccpm");
  }
  emit(output, instance_to_json(inst));
  return 0;
}

int cmd_bench(const std::string& suite, std::uint64_t seed, const std::string& output) {
  BenchReport report = run_bench_suite(suite, seed);
  emit(output, report.csv);
  if (report.violations > 0) {
    std::cerr << "bench: " << report.violations << " violation(s) in suite " << suite << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"hierarchical clustering objectives, sketches and approximation schemes"};
  app.require_subcommand(1);

  std::string instance_path, tree_path, output, objective, backend = "exact";
  std::string mode = "best-of-both", mub_backend = "exact", suite, kind, input, points_file;
  std::string similarity = "linear-ramp";
  std::uint64_t seed = 0;
  double eps = 0.5, delta = 0.1, rho = 0.5, tau = 0.5, budget = 1e7, shift = 0.0;
  double p = kDefaultGreedyProbability, density = 0.5, sigma = 1.0;
  int n = 8, max_n = 10;
  long long path_len = 0;
  bool yes_i_know = false, normalize = false;

  auto* eval = app.add_subcommand("eval", "evaluate rev/dis/hcc of a tree on an instance");
  eval->add_option("--instance", instance_path)->required();
  eval->add_option("--tree", tree_path)->required();
  eval->add_option("--output", output);

  auto* sketch = app.add_subcommand("sketch", "contract a tree and emit the converted sketch");
  sketch->add_option("--tree", tree_path)->required();
  sketch->add_option("--eps", eps)->required();
  sketch->add_option("--objective", objective)->default_val("rev");
  sketch->add_option("--seed", seed);
  sketch->add_option("--output", output);

  auto* epras = app.add_subcommand("epras", "partition-oracle approximation schemes");
  epras->add_option("--instance", instance_path)->required();
  epras->add_option("--objective", objective)->default_val("rev");
  epras->add_option("--eps", eps);
  epras->add_option("--delta", delta);
  epras->add_option("--rho", rho);
  epras->add_option("--tau", tau);
  epras->add_option("--backend", backend);
  epras->add_option("--seed", seed);
  epras->add_option("--budget", budget);
  epras->add_option("--shift", shift);
  epras->add_option("--output", output);

  auto* hcc = app.add_subcommand("hcc", "greedy / max-uncut-bisection worst-case algorithms");
  hcc->add_option("--instance", instance_path)->required();
  hcc->add_option("--p", p);
  hcc->add_option("--mode", mode);
  hcc->add_option("--mub-backend", mub_backend);
  hcc->add_option("--seed", seed);
  hcc->add_option("--output", output);

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimal tree search (guarded)");
  oracle->add_option("--instance", instance_path)->required();
  oracle->add_option("--objective", objective)->default_val("hcc");
  oracle->add_option("--max-n", max_n);
  oracle->add_flag("--yes-i-know", yes_i_know);
  oracle->add_option("--output", output);

  auto* partition = app.add_subcommand("partition", "run the partition oracle on a target");
  partition->add_option("--instance", instance_path)->required();
  partition->add_option("--target", tree_path)->required();
  partition->add_option("--backend", backend);
  partition->add_option("--seed", seed);
  partition->add_option("--output", output);

  auto* gen = app.add_subcommand("gen", "instance generators");
  gen->add_option("--kind", kind)->required();
  gen->add_option("--n", n);
  gen->add_option("--density", density);
  gen->add_option("--seed", seed);
  gen->add_option("--input", input);
  gen->add_option("--points-file", points_file);
  gen->add_option("--similarity", similarity);
  gen->add_option("--sigma", sigma);
  gen->add_flag("--normalize", normalize);
  gen->add_option("--path-len", path_len);
  gen->add_option("--output", output);

  auto* bench = app.add_subcommand("bench", "property batteries emitting CSV");
  bench->add_option("--suite", suite)->required();
  bench->add_option("--seed", seed);
  bench->add_option("--output", output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(eval)) return cmd_eval(instance_path, tree_path, output);
    if (app.got_subcommand(sketch)) return cmd_sketch(tree_path, eps, objective, seed, output);
    if (app.got_subcommand(epras))
      return cmd_epras(instance_path, objective, eps, delta, rho, tau, backend, seed, budget,
                       shift, output);
    if (app.got_subcommand(hcc))
      return cmd_hcc(instance_path, p, mode, mub_backend, seed, output);
    if (app.got_subcommand(oracle))
      return cmd_oracle(instance_path, objective, max_n, yes_i_know, output);
    if (app.got_subcommand(partition))
      return cmd_partition(instance_path, tree_path, backend, seed, output);
    if (app.got_subcommand(gen))
      return cmd_gen(kind, n, density, seed, input, points_file, similarity, sigma, normalize,
                     path_len, output);
    if (app.got_subcommand(bench)) return cmd_bench(suite, seed, output);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hcforge
