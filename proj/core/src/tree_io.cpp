#include "hcforge/tree_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hcforge {

namespace {

void write_node(const HcTree& tree, int v, std::string& out) {
  const auto& node = tree.nodes[v];
  if (node.kind == NodeKind::Leaf) {
    out += std::to_string(node.leaf);
    return;
  }
  if (node.kind == NodeKind::Auxiliary) out += '*';
  out += '(';
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) out += ',';
    write_node(tree, node.children[i], out);
  }
  out += ')';
}

std::string canon_node(const HcTree& tree, int v) {
  const auto& node = tree.nodes[v];
  if (node.kind == NodeKind::Leaf) return std::to_string(node.leaf);
  std::vector<std::string> parts;
  parts.reserve(node.children.size());
  for (int c : node.children) parts.push_back(canon_node(tree, c));
  std::sort(parts.begin(), parts.end());
  std::string out = node.kind == NodeKind::Auxiliary ? "*(" : "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

class ParenParser {
 public:
  explicit ParenParser(const std::string& text) : text_(text) {}

  HcTree parse() {
    HcTree tree;
    tree.root = parse_node(tree);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return tree;
  }

 private:
  int parse_node(HcTree& tree) {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '*' || c == '(') {
      NodeKind kind = NodeKind::Internal;
      if (c == '*') {
        kind = NodeKind::Auxiliary;
        ++pos_;
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '(' after '*'");
      }
      ++pos_;  // consume '('
      int id = tree.add_node(kind);
      while (true) {
        int child = parse_node(tree);
        tree.attach(id, child);
        skip_ws();
        if (pos_ >= text_.size()) fail("unterminated group");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      return id;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return tree.add_leaf(std::stoi(text_.substr(start, pos_ - start)));
    }
    fail("unexpected character");
    return -1;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("tree parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

std::string to_paren(const HcTree& tree) {
  std::string out;
  write_node(tree, tree.root, out);
  return out;
}

std::string canonical_paren(const HcTree& tree) { return canon_node(tree, tree.root); }

HcTree parse_paren(const std::string& text) { return ParenParser(text).parse(); }

std::string instance_to_json(const Instance& inst) {
  // Hand-rolled emission keeps weights at full precision and edge order fixed.
  std::string out = "{\"n\": " + std::to_string(inst.n()) + ", \"edges\": [";
  bool first = true;
  for (int i = 0; i < inst.n(); ++i) {
    for (int j = i + 1; j < inst.n(); ++j) {
      double s = inst.sim(i, j), d = inst.dis(i, j);
      if (s == 0.0 && d == 0.0) continue;
      if (!first) out += ", ";
      first = false;
      out += "[" + std::to_string(i) + ", " + std::to_string(j) + ", " + format_weight(s) + ", " +
             format_weight(d) + "]";
    }
  }
  out += "]}";
  return out;
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("instance JSON needs an integer field \"n\"");
  int n = j["n"].get<int>();
  if (n < 1) throw std::invalid_argument("instance requires n >= 1");
  Instance inst(n);
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw std::invalid_argument("\"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 4)
        throw std::invalid_argument("each edge must be [i, j, w_s, w_d]");
      int i = e[0].get<int>(), k = e[1].get<int>();
      inst.set_sim(i, k, e[2].get<double>());
      inst.set_dis(i, k, e[3].get<double>());
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

HcTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tree file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_paren(ss.str());
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

}  // namespace hcforge
