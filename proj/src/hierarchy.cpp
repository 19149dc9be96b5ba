#include "hseg/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hseg/error.hpp"

namespace hseg {

namespace {

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

constexpr std::string_view kSemanticKittiDoc = R"(# SemanticKITTI 4-level label hierarchy.
# One node per line: "name > parent" for non-root nodes, bare "name" for the
# root. Leaves are the nodes without children. Keep leaves in the dataset's
# canonical training order so dense leaf ids match learning-map output.
car > vehicle
bicycle > vehicle
motorcycle > vehicle
truck > vehicle
other-vehicle > vehicle
person > human
bicyclist > human
motorcyclist > human
road > ground
parking > ground
sidewalk > ground
other-ground > ground
building > structure
fence > structure
vegetation > nature
trunk > nature
terrain > nature
pole > object
traffic-sign > object
vehicle > dynamic
human > dynamic
ground > static
structure > static
nature > static
object > static
dynamic > any
static > any
any
)";

}  // namespace

std::string_view builtin_semantickitti_text() { return kSemanticKittiDoc; }

LabelHierarchy LabelHierarchy::parse(std::string_view text) {
  struct RawNode {
    std::string name;
    std::string parent;  // empty for root
  };
  std::vector<RawNode> raw;
  std::unordered_map<std::string, int> by_name;  // name -> raw index

  size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    size_t gt = line.find('>');
    RawNode n;
    if (gt == std::string_view::npos) {
      n.name = std::string(trim(line));
    } else {
      n.name = std::string(trim(line.substr(0, gt)));
      n.parent = std::string(trim(line.substr(gt + 1)));
      if (n.parent.empty())
        throw Error("hierarchy: line " + std::to_string(lineno) + ": empty parent name");
    }
    if (n.name.empty())
      throw Error("hierarchy: line " + std::to_string(lineno) + ": empty node name");
    if (by_name.count(n.name))
      throw Error("hierarchy: duplicate node name '" + n.name + "'");
    by_name.emplace(n.name, static_cast<int>(raw.size()));
    raw.push_back(std::move(n));
  }
  if (raw.empty()) throw Error("hierarchy: document defines no nodes");

  const int count = static_cast<int>(raw.size());
  std::vector<int> parent(count, -1);
  std::vector<bool> has_child(count, false);
  int root = -1;
  for (int i = 0; i < count; ++i) {
    if (raw[i].parent.empty()) {
      if (root >= 0)
        throw Error("hierarchy: multiple roots ('" + raw[root].name + "' and '" +
                    raw[i].name + "')");
      root = i;
      continue;
    }
    auto it = by_name.find(raw[i].parent);
    if (it == by_name.end())
      throw Error("hierarchy: unknown parent '" + raw[i].parent + "' of '" + raw[i].name +
                  "'");
    if (it->second == i)
      throw Error("hierarchy: node '" + raw[i].name + "' is its own parent");
    parent[i] = it->second;
    has_child[it->second] = true;
  }
  if (root < 0) throw Error("hierarchy: no root node (every line names a parent)");

  // Depth via parent walk; a walk longer than the node count is a cycle.
  std::vector<int> depth(count, -1);
  for (int i = 0; i < count; ++i) {
    int steps = 0;
    int v = i;
    while (v != root) {
      if (++steps > count)
        throw Error("hierarchy: cycle through node '" + raw[i].name + "'");
      v = parent[v];
    }
    depth[i] = steps;
  }

  int max_depth = *std::max_element(depth.begin(), depth.end());
  const int height = max_depth + 1;
  for (int i = 0; i < count; ++i) {
    if (!has_child[i] && depth[i] != max_depth)
      throw Error("hierarchy: leaf '" + raw[i].name + "' sits at level " +
                  std::to_string(max_depth - depth[i]) +
                  "; every root-to-leaf path must have length " + std::to_string(height));
  }

  // Dense ids, leaves first, each group in document order.
  std::vector<int> id_of(count, -1);
  int next = 0;
  for (int i = 0; i < count; ++i)
    if (!has_child[i]) id_of[i] = next++;
  const int leaf_count = next;
  for (int i = 0; i < count; ++i)
    if (has_child[i]) id_of[i] = next++;

  LabelHierarchy h;
  h.nodes_.resize(count);
  h.height_ = height;
  h.leaf_count_ = leaf_count;
  h.root_ = id_of[root];
  for (int i = 0; i < count; ++i) {
    ClassNode& n = h.nodes_[id_of[i]];
    n.id = id_of[i];
    n.name = raw[i].name;
    n.parent = parent[i] < 0 ? -1 : id_of[parent[i]];
    n.level = height - 1 - depth[i];
  }
  return h;
}

LabelHierarchy LabelHierarchy::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("hierarchy: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const LabelHierarchy& LabelHierarchy::builtin_semantickitti() {
  static const LabelHierarchy h = parse(kSemanticKittiDoc);
  return h;
}

const ClassNode& LabelHierarchy::node(int id) const {
  if (id < 0 || id >= size())
    throw Error("hierarchy: unknown class id " + std::to_string(id));
  return nodes_[id];
}

int LabelHierarchy::find(std::string_view name) const {
  for (const ClassNode& n : nodes_)
    if (n.name == name) return n.id;
  return -1;
}

int LabelHierarchy::require(std::string_view name) const {
  int id = find(name);
  if (id < 0) throw Error("hierarchy: unknown class name '" + std::string(name) + "'");
  return id;
}

std::vector<int> LabelHierarchy::superclasses(int c) const {
  std::vector<int> out;
  out.reserve(height_ - 1);
  for (int v = node(c).parent; v >= 0; v = nodes_[v].parent) out.push_back(v);
  return out;
}

int LabelHierarchy::ancestor_at_level(int c, int lvl) const {
  const ClassNode* n = &node(c);
  if (lvl < n->level || lvl >= height_)
    throw Error("hierarchy: no ancestor of '" + n->name + "' (level " +
                std::to_string(n->level) + ") at level " + std::to_string(lvl));
  while (n->level < lvl) n = &nodes_[n->parent];
  return n->id;
}

std::vector<int> LabelHierarchy::leaves_under(int c) const {
  node(c);  // validates
  std::vector<int> out;
  for (int s = 0; s < leaf_count_; ++s) {
    int v = s;
    while (v >= 0 && v != c) v = nodes_[v].parent;
    if (v == c) out.push_back(s);
  }
  return out;
}

std::string LabelHierarchy::serialize() const {
  std::ostringstream out;
  for (const ClassNode& n : nodes_) {
    if (n.parent < 0)
      out << n.name << '\n';
    else
      out << n.name << " > " << nodes_[n.parent].name << '\n';
  }
  return out.str();
}

}  // namespace hseg
