#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ordq {

// One named, contiguous column range ("subgroup") inside a feature matrix.
struct BlockInfo {
  std::string group;
  std::string name;
  int offset = 0;
  int width = 0;
};

// Immutable description of a feature matrix layout: groups of subgroup blocks
// covering columns [0, total_columns) without gaps or overlap. Subgroup names
// are unique across the whole schema.
class FeatureSchema {
 public:
  FeatureSchema() = default;

  // groups: (group name, [(subgroup name, width), ...]) in declaration order.
  static FeatureSchema from_groups(
      const std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>>& groups);

  int total_columns() const { return total_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<BlockInfo>& blocks() const { return blocks_; }

  bool has_block(const std::string& name) const { return index_.count(name) != 0; }
  const BlockInfo& block(const std::string& name) const;

  std::vector<std::string> block_names() const;
  std::vector<std::string> group_names() const { return group_order_; }
  std::vector<std::string> blocks_of_group(const std::string& group) const;

  bool operator==(const FeatureSchema& o) const;
  bool operator!=(const FeatureSchema& o) const { return !(*this == o); }

 private:
  std::vector<BlockInfo> blocks_;
  std::map<std::string, int> index_;
  std::vector<std::string> group_order_;
  int total_ = 0;
};

// A set of subgroup names. Schema-agnostic; names are resolved (and validated)
// when the selection is applied to a dataset.
class BlockSelection {
 public:
  BlockSelection() = default;

  static BlockSelection of(const std::vector<std::string>& names);
  static BlockSelection all(const FeatureSchema& schema);

  bool contains(const std::string& name) const { return names_.count(name) != 0; }
  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }

  BlockSelection with(const std::string& name) const;
  BlockSelection without(const std::string& name) const;

  // Sorted, which doubles as the canonical order for output and memo keys.
  const std::set<std::string>& names() const { return names_; }
  std::string key() const;

  bool operator==(const BlockSelection& o) const { return names_ == o.names_; }
  bool operator!=(const BlockSelection& o) const { return !(*this == o); }

 private:
  std::set<std::string> names_;
};

// Sub-schema induced by a selection plus the source column indices to gather,
// in schema declaration order. Errors: "invalid-selection" when empty,
// "schema-mismatch" when a name is not in the schema.
std::pair<FeatureSchema, std::vector<int>> project_columns(const FeatureSchema& schema,
                                                           const BlockSelection& selection);

}  // namespace ordq
