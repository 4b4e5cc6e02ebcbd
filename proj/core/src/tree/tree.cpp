#include "rvnli/tree/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "rvnli/error.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/text/tokenize.hpp"

namespace rvnli::tree {

namespace {

std::string comparable(std::string_view s) {
  std::string t = text::lower(text::normalize_space(s));
  while (!t.empty() && (t.back() == '.' || t.back() == ' ')) t.pop_back();
  if (t.rfind("therefore, ", 0) == 0) t = t.substr(11);
  return t;
}

std::optional<Origin> origin_from_string(std::string_view s) {
  if (s == "premise") return Origin::Premise;
  if (s == "intermediate") return Origin::Intermediate;
  if (s == "hypothesis") return Origin::Hypothesis;
  return std::nullopt;
}

struct Known {
  std::string id;
  std::string key;
  std::set<std::string> tokens;
};

// Best known statement for a paraphrased support line.
const Known* resolve_lexically(const std::string& line, const std::vector<Known>& known, const std::vector<std::string>& taken) {
  auto toks = text::content_tokens(line);
  std::set<std::string> have(toks.begin(), toks.end());
  const Known* best = nullptr;
  std::size_t best_size = 0;
  for (const auto& k : known) {
    if (k.tokens.empty() || std::find(taken.begin(), taken.end(), k.id) != taken.end()) continue;
    std::size_t hit = 0;
    for (const auto& t : k.tokens) hit += have.count(t);
    if (static_cast<double>(hit) / static_cast<double>(k.tokens.size()) < 0.9) continue;
    if (!best || k.tokens.size() > best_size) {
      best = &k;
      best_size = k.tokens.size();
    }
  }
  return best;
}

Known make_known(std::string id, const std::string& statement) {
  auto toks = text::content_tokens(statement);
  return {std::move(id), comparable(statement), std::set<std::string>(toks.begin(), toks.end())};
}

}  // namespace

std::string_view to_string(Origin o) noexcept {
  switch (o) {
    case Origin::Premise: return "premise";
    case Origin::Intermediate: return "intermediate";
    case Origin::Hypothesis: return "hypothesis";
  }
  return "?";
}

bool TreeNode::formalised() const {
  return decomposition && formalisation_error.empty() && formal_atoms.size() == decomposition->kept_count();
}

const TreeNode& EntailmentTree::node(const std::string& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw UnknownNode("no node '" + id + "'");
  return it->second;
}

TreeNode& EntailmentTree::node(const std::string& id) {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw UnknownNode("no node '" + id + "'");
  return it->second;
}

std::vector<std::string> EntailmentTree::internal_nodes() const {
  std::vector<std::string> out;
  for (const auto& [id, n] : nodes)
    if (!n.children.empty()) out.push_back(id);
  return out;
}

int EntailmentTree::height(const std::string& id) const {
  const auto& n = node(id);
  int h = 0;
  for (const auto& c : n.children) h = std::max(h, 1 + height(c));
  return h;
}

void EntailmentTree::validate() const {
  if (!contains(root)) throw InvalidTree("root '" + root + "' is not a node");
  if (node(root).origin != Origin::Hypothesis) throw InvalidTree("root must have hypothesis origin");
  std::map<std::string, int> state;  // 1 = on stack, 2 = done
  std::function<void(const std::string&)> dfs = [&](const std::string& id) {
    state[id] = 1;
    for (const auto& c : node(id).children) {
      if (!contains(c)) throw InvalidTree("edge to unknown node '" + c + "'");
      if (state[c] == 1) throw CycleDetected("cycle through '" + c + "'");
      if (state[c] == 0) dfs(c);
    }
    state[id] = 2;
  };
  dfs(root);
  for (const auto& [id, n] : nodes) {
    if (!state.count(id)) throw InvalidTree("node '" + id + "' is unreachable from the root");
    if (n.id != id) throw InvalidTree("node key '" + id + "' disagrees with its id");
    if (n.origin == Origin::Hypothesis && id != root) throw InvalidTree("second hypothesis node '" + id + "'");
    if (n.origin == Origin::Intermediate && n.children.empty()) throw InvalidTree("intermediate '" + id + "' has no children");
    if (n.origin == Origin::Premise && !n.children.empty()) throw InvalidTree("premise '" + id + "' has children");
    if (n.origin == Origin::Premise && !premise_subset.count(n.premise_index))
      throw InvalidTree("premise '" + id + "' is not in the premise subset");
  }
  if (node(root).children.empty()) throw InvalidTree("root has no children");
}

nlohmann::json to_json(const EntailmentTree& t) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  std::vector<std::string> ids;
  for (const auto& kv : t.nodes) ids.push_back(kv.first);
  std::sort(ids.begin(), ids.end(), natural_less);
  for (const auto& id : ids) {
    const auto& n = t.nodes.at(id);
    nlohmann::json j{{"id", n.id}, {"statement", n.statement}, {"origin", to_string(n.origin)}};
    if (n.premise_index) j["premise_index"] = n.premise_index;
    if (n.decomposition) j["decomposition"] = *n.decomposition;
    if (!n.formal_atoms.empty()) {
      j["formal_atoms"] = nlohmann::json::array();
      for (const auto& f : n.formal_atoms) j["formal_atoms"].push_back(logic::render_formula(f));
    }
    if (!n.formalisation_error.empty()) j["formalisation_error"] = n.formalisation_error;
    if (n.verified) j["verified"] = true;
    nodes.push_back(std::move(j));
    for (const auto& c : n.children) edges.push_back({id, c});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"root", t.root}, {"premise_subset", t.premise_subset}};
}

EntailmentTree tree_from_json(const nlohmann::json& j) {
  EntailmentTree t;
  for (const auto& jn : j.at("nodes")) {
    TreeNode n;
    n.id = jn.at("id").get<std::string>();
    n.statement = jn.at("statement").get<std::string>();
    auto origin = origin_from_string(jn.at("origin").get<std::string>());
    if (!origin) throw InvalidTree("unknown origin for node '" + n.id + "'");
    n.origin = *origin;
    n.premise_index = jn.value("premise_index", 0);
    if (jn.contains("decomposition")) n.decomposition = jn["decomposition"].get<atomizer::AtomicDecomposition>();
    for (const auto& f : jn.value("formal_atoms", nlohmann::json::array()))
      n.formal_atoms.push_back(logic::parse_formula(f.get<std::string>()));
    n.formalisation_error = jn.value("formalisation_error", "");
    n.verified = jn.value("verified", false);
    if (!t.nodes.emplace(n.id, n).second) throw InvalidTree("duplicate node id '" + n.id + "'");
  }
  for (const auto& e : j.at("edges")) {
    auto parent = e.at(0).get<std::string>();
    t.node(parent).children.push_back(e.at(1).get<std::string>());
  }
  t.root = j.at("root").get<std::string>();
  t.premise_subset = j.at("premise_subset").get<std::set<int>>();
  t.validate();
  return t;
}

EntailmentTree build_tree(const std::vector<std::string>& premises, const std::string& hypothesis,
                          const llm::TreeResponse& response) {
  if (premises.empty()) throw MalformedTreeResponse("an entailment tree needs at least one premise");
  if (text::trim(hypothesis).empty()) throw MalformedTreeResponse("empty hypothesis");
  EntailmentTree t;
  t.root = "h";
  std::vector<Known> known;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    std::string id = "p" + std::to_string(i + 1);
    t.nodes[id] = TreeNode{id, premises[i], Origin::Premise, static_cast<int>(i + 1), {}, {}, {}, {}, false};
    known.push_back(make_known(id, premises[i]));
  }
  TreeNode root{"h", hypothesis, Origin::Hypothesis, 0, {}, {}, {}, {}, false};

  if (response.steps.empty()) {
    for (std::size_t i = 0; i < premises.size(); ++i) root.children.push_back("p" + std::to_string(i + 1));
  }
  for (std::size_t s = 0; s < response.steps.size(); ++s) {
    const auto& step = response.steps[s];
    const bool last = s + 1 == response.steps.size();
    const std::string own = comparable(step.conclusion);
    std::vector<std::string> children;
    for (const auto& line : step.supports) {
      std::string key = comparable(line);
      if (key == own && !last) throw CycleDetected("step " + std::to_string(s + 1) + " cites its own conclusion");
      for (std::size_t later = s + 1; later < response.steps.size(); ++later)
        if (key == comparable(response.steps[later].conclusion))
          throw CycleDetected("step " + std::to_string(s + 1) + " cites the later conclusion \"" + line + "\"");
      const Known* hit = nullptr;
      for (const auto& k : known)
        if (k.key == key) hit = &k;
      if (!hit) hit = resolve_lexically(line, known, children);
      if (hit && std::find(children.begin(), children.end(), hit->id) == children.end()) children.push_back(hit->id);
    }
    if (children.empty())
      throw MalformedTreeResponse("no support of the step concluding \"" + step.conclusion + "\" names a known statement");
    if (last) {
      root.children = std::move(children);
    } else {
      std::string id = "i" + std::to_string(s + 1);
      t.nodes[id] = TreeNode{id, step.conclusion, Origin::Intermediate, 0, std::move(children), {}, {}, {}, false};
      known.push_back(make_known(id, step.conclusion));
    }
  }
  t.nodes["h"] = std::move(root);

  // Keep what the root reaches.
  std::set<std::string> reach;
  std::function<void(const std::string&)> walk = [&](const std::string& id) {
    if (!reach.insert(id).second) return;
    for (const auto& c : t.nodes.at(id).children) walk(c);
  };
  walk("h");
  for (auto it = t.nodes.begin(); it != t.nodes.end();) {
    if (!reach.count(it->first)) {
      it = t.nodes.erase(it);
    } else {
      if (it->second.origin == Origin::Premise) t.premise_subset.insert(it->second.premise_index);
      ++it;
    }
  }
  t.validate();
  return t;
}

EntailmentTree construct_tree(const std::vector<std::string>& premises, const std::string& hypothesis,
                              llm::LlmClient& llm) {
  std::string listed;
  for (std::size_t i = 0; i < premises.size(); ++i)
    listed += (i ? "\n" : "") + std::to_string(i + 1) + ". " + premises[i];
  auto prompt = llm::render(llm::TemplateId::Tree, {{"premises", listed}, {"conclusion", hypothesis}});
  llm::TreeResponse response;
  try {
    response = llm::parse_tree_response(llm.complete(prompt));
  } catch (const UnparseableResponse& e) {
    throw MalformedTreeResponse(e.what());
  }
  return build_tree(premises, hypothesis, response);
}

std::vector<std::string> RoleAssignment::explanations() const {
  std::vector<std::string> out;
  for (const auto& [id, r] : roles)
    if (r == Role::Explanation) out.push_back(id);
  std::sort(out.begin(), out.end(), natural_less);
  return out;
}

RoleAssignment assign_roles(const EntailmentTree& t, const std::string& subtree_root) {
  const auto& n = t.node(subtree_root);
  RoleAssignment ra{subtree_root, {{subtree_root, Role::Hypothesis}}};
  for (const auto& c : n.children) ra.roles.emplace(c, Role::Explanation);
  return ra;
}

std::vector<std::string> bottom_up_frontier(const EntailmentTree& t) {
  auto ids = t.internal_nodes();
  std::map<std::string, int> h;
  for (const auto& id : ids) h[id] = t.height(id);
  std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
    if (h[a] != h[b]) return h[a] < h[b];
    return natural_less(a, b);
  });
  return ids;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      auto na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
      while (na.size() > 1 && na[0] == '0') na.erase(0, 1);
      while (nb.size() > 1 && nb[0] == '0') nb.erase(0, 1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

}  // namespace rvnli::tree
