#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rvnli/atomizer/atomizer.hpp"
#include "rvnli/llm/client.hpp"
#include "rvnli/llm/parsers.hpp"
#include "rvnli/logic/formula.hpp"

namespace rvnli::tree {

enum class Origin { Premise, Intermediate, Hypothesis };
std::string_view to_string(Origin o) noexcept;

struct TreeNode {
  std::string id;
  std::string statement;
  Origin origin = Origin::Premise;
  // 1-based index into the instance's premises; 0 for other nodes.
  int premise_index = 0;
  std::vector<std::string> children;
  std::optional<atomizer::AtomicDecomposition> decomposition;
  // Φ of each kept atom, in order.
  std::vector<logic::Formula> formal_atoms;
  // Why formalisation of this node failed, if it did.
  std::string formalisation_error;
  bool verified = false;

  bool formalised() const;
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct EntailmentTree {
  std::map<std::string, TreeNode> nodes;
  std::string root;
  std::set<int> premise_subset;

  const TreeNode& node(const std::string& id) const;
  TreeNode& node(const std::string& id);
  bool contains(const std::string& id) const { return nodes.count(id) != 0; }
  // Nodes with children, in no particular order.
  std::vector<std::string> internal_nodes() const;
  // Longest path to a leaf.
  int height(const std::string& id) const;

  // Throws InvalidTree (or CycleDetected) when an invariant fails.
  void validate() const;

  friend bool operator==(const EntailmentTree&, const EntailmentTree&) = default;
};

nlohmann::json to_json(const EntailmentTree& t);
EntailmentTree tree_from_json(const nlohmann::json& j);

// Builds the tree from a parsed tree answer. Support lines are resolved against the premises and
// earlier conclusions (exact text first, then lexical containment); intermediates the root never reaches
// are dropped like redundant premises.
EntailmentTree build_tree(const std::vector<std::string>& premises, const std::string& hypothesis,
                          const llm::TreeResponse& response);

EntailmentTree construct_tree(const std::vector<std::string>& premises, const std::string& hypothesis,
                              llm::LlmClient& llm);

enum class Role { Explanation, Hypothesis };

struct RoleAssignment {
  std::string subtree_root;
  std::map<std::string, Role> roles;

  std::vector<std::string> explanations() const;
};

// The subtree under verification is a node and its immediate children.
RoleAssignment assign_roles(const EntailmentTree& t, const std::string& subtree_root);

// Internal nodes by height, ties by natural id order.
std::vector<std::string> bottom_up_frontier(const EntailmentTree& t);

// "i2" < "i10".
bool natural_less(const std::string& a, const std::string& b);

}  // namespace rvnli::tree
