#ifndef HSEG_HIERARCHY_HPP
#define HSEG_HIERARCHY_HPP

#include <string>
#include <string_view>
#include <vector>

namespace hseg {

struct ClassNode {
  int id = -1;
  std::string name;
  int parent = -1;  // -1 for the root
  int level = 0;    // 0 = leaf tier, height-1 = root
};

// Rooted label tree with one class per level on every root-to-leaf path.
// Node ids are dense; leaves occupy 0..leaf_count()-1 so leaf-restricted
// vectors are contiguous prefixes of full-tree vectors.
// Immutable after construction; all queries are safe for concurrent readers.
class LabelHierarchy {
 public:
  // Parses the line-based format: "name > parent" per non-root node, a bare
  // "name" for the root, '#' comments. Levels are inferred from depth.
  // Throws Error on duplicate names, missing/multiple roots, unknown parents,
  // cycles, or leaves above level 0 (paths shorter than the tree height).
  static LabelHierarchy parse(std::string_view text);

  static LabelHierarchy parse_file(const std::string& path);

  // Default 4-level taxonomy over the 19 SemanticKITTI training classes.
  static const LabelHierarchy& builtin_semantickitti();

  int height() const { return height_; }
  int leaf_count() const { return leaf_count_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }

  const ClassNode& node(int id) const;
  const std::vector<ClassNode>& nodes() const { return nodes_; }
  int level(int id) const { return node(id).level; }
  int parent(int id) const { return node(id).parent; }
  const std::string& name(int id) const { return node(id).name; }
  bool is_leaf(int id) const { return id >= 0 && id < leaf_count_; }

  // -1 when the name is absent.
  int find(std::string_view name) const;
  // Throws Error when the name is absent.
  int require(std::string_view name) const;

  // Ancestors of c from parent to root, exclusive of c. Empty for the root.
  std::vector<int> superclasses(int c) const;

  // The unique node on c's root path at level lvl; c itself when
  // level(c) == lvl. Requires level(c) <= lvl <= height()-1.
  int ancestor_at_level(int c, int lvl) const;

  // Leaf ids (ascending) below node c; {c} when c is a leaf.
  std::vector<int> leaves_under(int c) const;

  // Emits the definition document back; parse(serialize()) reproduces
  // names, parents, levels, and ids exactly.
  std::string serialize() const;

 private:
  std::vector<ClassNode> nodes_;
  int height_ = 0;
  int leaf_count_ = 0;
  int root_ = -1;
};

// Text of the built-in taxonomy document (same content as
// data/semantickitti.hier).
std::string_view builtin_semantickitti_text();

}  // namespace hseg

#endif
