#include <doctest.h>

#include <stdexcept>

#include "helpers.hpp"
#include "hcforge/baselines.hpp"
#include "hcforge/generators.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/rng.hpp"
#include "hcforge/tree.hpp"
#include "hcforge/tree_io.hpp"

using namespace hcforge;

namespace {
Instance single_sim_edge(int n, int a, int b, double w = 1.0) {
  Instance inst(n);
  inst.set_sim(a, b, w);
  return inst;
}
Instance single_dis_edge(int n, int a, int b, double w = 1.0) {
  Instance inst(n);
  inst.set_dis(a, b, w);
  return inst;
}
}  // namespace

TEST_CASE("revenue: hand examples") {
  HcTree t = parse_paren("((0,1),2)");
  CHECK(eval_revenue(single_sim_edge(3, 0, 1), t) == doctest::Approx(1.0));

  HcTree star = HcTree::star(5);
  Rng rng(7);
  Instance inst = random_instance(5, 1.0, false, rng);
  CHECK(eval_revenue(inst, star) == doctest::Approx(0.0));  // every |T_ij| = n
}

TEST_CASE("revenue matches the pairwise leaf-set oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Instance inst = random_instance(6, 0.8, false, rng);
    HcTree t = random_binary_tree(6, rng);
    CHECK(eval_revenue(inst, t) == doctest::Approx(oracle::revenue(inst, t)).epsilon(1e-12));
  }
}

TEST_CASE("dissimilarity: binary and extended hand examples") {
  CHECK(eval_dissimilarity(single_dis_edge(3, 0, 1), parse_paren("((0,1),2)")) ==
        doctest::Approx(2.0));
  // star root: |T_va| + |T_vb| = 1 + 1
  CHECK(eval_dissimilarity(single_dis_edge(3, 0, 1), HcTree::star(3)) == doctest::Approx(2.0));
}

TEST_CASE("dissimilarity matches the oracle on multiway trees") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    Instance inst = random_instance(6, 0.8, false, rng);
    HcTree t = random_multiway_tree(6, 0.5, rng);
    CHECK(eval_dissimilarity(inst, t) ==
          doctest::Approx(oracle::dissimilarity(inst, t)).epsilon(1e-12));
  }
}

TEST_CASE("hcc degenerates to each objective and sums components") {
  Rng rng(17);
  Instance sim_only = random_instance(6, 0.9, false, rng);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) sim_only.set_dis(i, j, 0.0);
  HcTree t = random_binary_tree(6, rng);
  CHECK(eval_hcc(sim_only, t).hcc == doctest::Approx(eval_revenue(sim_only, t)));

  Instance dis_only(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) dis_only.set_dis(i, j, rng.next_double());
  CHECK(eval_hcc(dis_only, t).hcc == doctest::Approx(eval_dissimilarity(dis_only, t)));

  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = random_instance(5, 1.0, true, rng);
    HcTree tree = random_binary_tree(5, rng);
    ObjectiveReport rep = eval_hcc(inst, tree);
    CHECK(rep.hcc ==
          doctest::Approx(oracle::revenue(inst, tree) + oracle::dissimilarity(inst, tree)));
    CHECK(rep.rev + rep.dis == doctest::Approx(rep.hcc));
  }
}

TEST_CASE("objective errors: size mismatch and malformed trees") {
  Instance inst(4);
  CHECK_THROWS_AS(eval_revenue(inst, parse_paren("((0,1),2)")), std::invalid_argument);
  HcTree bad = parse_paren("((0,1),(2,3))");
  bad.nodes[bad.root].children.pop_back();  // unary root
  CHECK_THROWS_AS(eval_revenue(inst, bad), std::invalid_argument);
}

TEST_CASE("lca_size_table hand cases and oracle") {
  LcaSizeTable t3 = lca_size_table(parse_paren("((0,1),2)"));
  CHECK(t3.sizes(0, 1) == 2);
  CHECK(t3.sizes(0, 2) == 3);
  CHECK(t3.sizes(1, 2) == 3);
  CHECK(t3.child_sizes(0, 1) == std::pair(1, 1));
  CHECK(t3.child_sizes(0, 2) == std::pair(2, 1));

  LcaSizeTable t4 = lca_size_table(parse_paren("((0,1),(2,3))"));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      bool sibling = (i / 2) == (j / 2);
      CHECK(t4.sizes(i, j) == (sibling ? 2 : 4));
    }

  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    HcTree t = random_multiway_tree(12, 0.3, rng);
    LcaSizeTable table = lca_size_table(t);
    auto leaf_node = oracle::leaf_node_of(t);
    for (int i = 0; i < 12; ++i)
      for (int j = i + 1; j < 12; ++j) {
        CHECK(table.sizes(i, j) == oracle::pair_lca_size(t, leaf_node, i, j));
        CHECK(table.sizes(i, j) == table.sizes(j, i));
        int lca = oracle::lca_of(t, leaf_node[std::size_t(i)], leaf_node[std::size_t(j)]);
        auto [ci, cj] = table.child_sizes(i, j);
        CHECK(ci == oracle::count_leaves_under(t, oracle::branch_child(t, lca, leaf_node[std::size_t(i)])));
        CHECK(cj == oracle::count_leaves_under(t, oracle::branch_child(t, lca, leaf_node[std::size_t(j)])));
      }
  }
}

TEST_CASE("binarize: identity on binary trees, never decreases objectives") {
  Rng rng(29);
  HcTree already = random_binary_tree(7, rng);
  CHECK(to_paren(binarize(already)) == to_paren(already));

  // smallest star case: extended dis 2, binarized dis >= 2
  HcTree star3 = HcTree::star(3);
  Instance inst3 = single_dis_edge(3, 0, 1);
  HcTree bin3 = binarize(star3);
  CHECK(bin3.is_binary());
  CHECK(eval_dissimilarity(inst3, bin3) >= 2.0);

  for (int trial = 0; trial < 150; ++trial) {
    int n = rng.next_int(3, 12);
    Instance inst = random_instance(n, 0.7, false, rng);
    HcTree t = random_multiway_tree(n, 0.6, rng);
    HcTree b = binarize(t);
    CHECK(b.is_binary());
    CHECK(validate(b, n).empty());
    CHECK(eval_revenue(inst, b) >= oracle::revenue(inst, t) - 1e-9);
    CHECK(eval_dissimilarity(inst, b) >= oracle::dissimilarity(inst, t) - 1e-9);
  }
}

TEST_CASE("validate catches the named violations") {
  CHECK(validate(parse_paren("((0,1),(2,(3,4)))"), 5).empty());

  HcTree dup = parse_paren("((0,1),(2,0))");
  auto v1 = validate(dup, 4);
  bool saw_dup = false;
  for (const auto& s : v1) saw_dup |= s.find("duplicated leaf") != std::string::npos;
  CHECK(saw_dup);

  HcTree unary;
  int root = unary.add_node(NodeKind::Internal);
  int mid = unary.add_node(NodeKind::Internal);
  unary.root = root;
  unary.attach(root, mid);
  unary.attach(root, unary.add_leaf(0));
  unary.attach(mid, unary.add_leaf(1));
  auto v2 = validate(unary, 2);
  bool saw_arity = false;
  for (const auto& s : v2) saw_arity |= s.find("fewer than 2 children") != std::string::npos;
  CHECK(saw_arity);
}

TEST_CASE("not_all_small") {
  Instance clique(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) clique.set_sim(i, j, 1.0);
  CHECK(not_all_small(clique, 1.0, 1.0, Channel::Sim));

  Instance zero(6);
  CHECK_FALSE(not_all_small(zero, 0.5, 0.5, Channel::Sim));

  // n=10: 14 of 45 pairs at 0.8, the rest zero; small fraction = 31/45
  Instance mixed(10);
  int placed = 0;
  for (int i = 0; i < 10 && placed < 14; ++i)
    for (int j = i + 1; j < 10 && placed < 14; ++j) {
      mixed.set_sim(i, j, 0.8);
      ++placed;
    }
  long long small = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j)
      if (mixed.sim(i, j) < 0.5) ++small;
  CHECK(small == 31);
  CHECK(not_all_small(mixed, 0.31, 0.5, Channel::Sim));
  CHECK_FALSE(not_all_small(mixed, 0.32, 0.5, Channel::Sim));

  CHECK_THROWS_AS(not_all_small(zero, 0.0, 0.5, Channel::Sim), std::invalid_argument);
  CHECK_THROWS_AS(not_all_small(zero, 0.5, 1.5, Channel::Sim), std::invalid_argument);
}

TEST_CASE("clique identities and complementary pairing on binary trees") {
  for (int n = 3; n <= 6; ++n) {
    long long clique_sum = static_cast<long long>(n) * n * n - n;
    clique_sum /= 3;
    enumerate_binary_trees(n, [&](const HcTree& t) {
      long long s = oracle::sum_pair_lca_sizes(t);
      CHECK(s == clique_sum);
    });
  }

  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    int n = rng.next_int(3, 10);
    Instance inst = random_instance(n, 0.8, false, rng);
    // copy sim onto dis channel
    Instance paired(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        paired.set_sim(i, j, inst.sim(i, j));
        paired.set_dis(i, j, inst.sim(i, j));
      }
    HcTree t = random_binary_tree(n, rng);
    CHECK(eval_revenue(paired, t) + eval_dissimilarity(paired, t) ==
          doctest::Approx(n * paired.total_sim()).epsilon(1e-12));
  }
}

TEST_CASE("degenerate sizes: n = 1 scores zero, n = 0 rejected at parse") {
  Instance one(1);
  HcTree leaf = HcTree::single_leaf(0);
  CHECK(eval_revenue(one, leaf) == 0.0);
  CHECK(eval_dissimilarity(one, leaf) == 0.0);
  CHECK_THROWS_AS(instance_from_json("{\"n\": 0, \"edges\": []}"), std::invalid_argument);
  CHECK_THROWS_AS(Instance(0), std::invalid_argument);
}

TEST_CASE("paren serialization round trip, auxiliary prefix, parse errors") {
  const std::string text = "((0,1),(2,(3,4)))";
  CHECK(to_paren(parse_paren(text)) == text);

  HcTree with_aux;
  int root = with_aux.add_node(NodeKind::Internal);
  with_aux.root = root;
  with_aux.attach(root, with_aux.add_leaf(0));
  int aux = with_aux.add_node(NodeKind::Auxiliary);
  with_aux.attach(root, aux);
  for (int i = 1; i < 4; ++i) with_aux.attach(aux, with_aux.add_leaf(i));
  const std::string aux_text = to_paren(with_aux);
  CHECK(aux_text == "(0,*(1,2,3))");
  HcTree back = parse_paren(aux_text);
  CHECK(back.nodes[back.nodes[back.root].children[1]].kind == NodeKind::Auxiliary);
  CHECK(to_paren(back) == aux_text);

  CHECK_THROWS_AS(parse_paren("((0,1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_paren("(0,1)x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_paren("*0"), std::invalid_argument);

  // canonical form ignores child order
  CHECK(canonical_paren(parse_paren("((2,1),0)")) == canonical_paren(parse_paren("(0,(1,2))")));
}

TEST_CASE("instance JSON round trip and rejection") {
  Rng rng(37);
  Instance inst = random_instance(6, 0.5, true, rng);
  Instance back = instance_from_json(instance_to_json(inst));
  REQUIRE(back.n() == 6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      CHECK(back.sim(i, j) == inst.sim(i, j));
      CHECK(back.dis(i, j) == inst.dis(i, j));
    }

  CHECK_THROWS_AS(instance_from_json("{\"n\": 3, \"edges\": [[0, 0, 0.5, 0]]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(instance_from_json("{\"n\": 3, \"edges\": [[0, 7, 0.5, 0]]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(instance_from_json("{\"n\": 3, \"edges\": [[0, 1, 1.5, 0]]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(instance_from_json("not json"), std::invalid_argument);
}
