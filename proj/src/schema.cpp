#include "ordq/schema.hpp"

#include <sstream>

#include "ordq/error.hpp"

namespace ordq {

FeatureSchema FeatureSchema::from_groups(
    const std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>>& groups) {
  FeatureSchema s;
  if (groups.empty()) fail("schema-invalid", "schema needs at least one group");
  std::set<std::string> seen_groups;
  int offset = 0;
  for (const auto& [group, subs] : groups) {
    if (group.empty()) fail("schema-invalid", "empty group name");
    if (!seen_groups.insert(group).second) fail("schema-invalid", "duplicate group name: " + group);
    if (subs.empty()) fail("schema-invalid", "group has no subgroups: " + group);
    s.group_order_.push_back(group);
    for (const auto& [name, width] : subs) {
      if (name.empty()) fail("schema-invalid", "empty subgroup name in group " + group);
      if (width <= 0)
        fail("schema-invalid", "subgroup " + name + " has non-positive width " + std::to_string(width));
      if (s.index_.count(name)) fail("schema-invalid", "duplicate subgroup name: " + name);
      s.index_[name] = static_cast<int>(s.blocks_.size());
      s.blocks_.push_back(BlockInfo{group, name, offset, width});
      offset += width;
    }
  }
  s.total_ = offset;
  return s;
}

const BlockInfo& FeatureSchema::block(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) fail("schema-mismatch", "unknown subgroup: " + name);
  return blocks_[static_cast<std::size_t>(it->second)];
}

std::vector<std::string> FeatureSchema::block_names() const {
  std::vector<std::string> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.name);
  return out;
}

std::vector<std::string> FeatureSchema::blocks_of_group(const std::string& group) const {
  std::vector<std::string> out;
  for (const auto& b : blocks_)
    if (b.group == group) out.push_back(b.name);
  if (out.empty()) fail("schema-mismatch", "unknown group: " + group);
  return out;
}

bool FeatureSchema::operator==(const FeatureSchema& o) const {
  if (blocks_.size() != o.blocks_.size() || total_ != o.total_) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& a = blocks_[i];
    const auto& b = o.blocks_[i];
    if (a.group != b.group || a.name != b.name || a.offset != b.offset || a.width != b.width)
      return false;
  }
  return true;
}

BlockSelection BlockSelection::of(const std::vector<std::string>& names) {
  BlockSelection s;
  for (const auto& n : names) {
    if (n.empty()) fail("invalid-selection", "empty subgroup name");
    s.names_.insert(n);
  }
  return s;
}

BlockSelection BlockSelection::all(const FeatureSchema& schema) {
  BlockSelection s;
  for (const auto& b : schema.blocks()) s.names_.insert(b.name);
  return s;
}

BlockSelection BlockSelection::with(const std::string& name) const {
  BlockSelection s = *this;
  s.names_.insert(name);
  return s;
}

BlockSelection BlockSelection::without(const std::string& name) const {
  BlockSelection s = *this;
  s.names_.erase(name);
  return s;
}

std::string BlockSelection::key() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& n : names_) {
    if (!first) os << '|';
    os << n;
    first = false;
  }
  return os.str();
}

std::pair<FeatureSchema, std::vector<int>> project_columns(const FeatureSchema& schema,
                                                           const BlockSelection& selection) {
  if (selection.empty()) fail("invalid-selection", "selection is empty");
  for (const auto& n : selection.names())
    if (!schema.has_block(n)) fail("schema-mismatch", "unknown subgroup: " + n);

  std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>> groups;
  std::vector<int> cols;
  for (const auto& g : schema.group_names()) {
    std::vector<std::pair<std::string, int>> subs;
    for (const auto& b : schema.blocks()) {
      if (b.group != g || !selection.contains(b.name)) continue;
      subs.emplace_back(b.name, b.width);
      for (int c = b.offset; c < b.offset + b.width; ++c) cols.push_back(c);
    }
    if (!subs.empty()) groups.emplace_back(g, std::move(subs));
  }
  return {FeatureSchema::from_groups(groups), std::move(cols)};
}

}  // namespace ordq
