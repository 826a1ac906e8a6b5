#pragma once

#include <string>

#include "hcforge/instance.hpp"
#include "hcforge/tree.hpp"

namespace hcforge {

// Parenthesized leaf-id text, e.g. ((0,1),(2,(3,4))). Auxiliary star nodes
// carry a '*' prefix: (0,*(1,2,3)). Child order is preserved.
std::string to_paren(const HcTree& tree);
HcTree parse_paren(const std::string& text);

// Order-independent form: children serialized recursively and sorted.
// Used for deterministic tie-breaking, not for files.
std::string canonical_paren(const HcTree& tree);

// Instance JSON: {"n": int, "edges": [[i, j, w_s, w_d], ...]}. Omitted pairs
// default to (0,0). Rejects i == j, out-of-range indices, weights outside
// [0,1], and n < 1.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

Instance load_instance(const std::string& path);
HcTree load_tree(const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace hcforge
