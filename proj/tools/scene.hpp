#pragma once

// Scenes: named cubical sets, maps and structures over one truncated site,
// read from JSON. See docs/scene-format.md for the grammar.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "cubical/cube_site.hpp"
#include "cubical/homotopy.hpp"
#include "cubical/lifting.hpp"
#include "cubical/nerve.hpp"
#include "cubical/report.hpp"

namespace cubical::cli {

using Json = nlohmann::ordered_json;

struct SceneOptions {
  unsigned dim_cap = 2;
  std::uint64_t budget_cells = 1u << 24;
  std::uint64_t budget_search = 1ull << 28;
  bool validate = true;
};

class Scene {
 public:
  /// Throws ParseError on malformed input or unresolved names,
  /// TruncationError / BudgetExceeded at resource boundaries.
  static Scene load(const Json& doc, const SceneOptions& opts);

  unsigned dim() const { return dim_; }
  const SitePtr& site() const { return site_; }
  const Json& source() const { return source_; }
  const SceneOptions& options() const { return opts_; }

  const CubSet& object(const std::string& name) const;
  const PshMap& map(const std::string& name) const;
  const UniformFib& fibration(const std::string& name) const;
  const UniformTrivFib& trivial_fibration(const std::string& name) const;
  const SheData& she(const std::string& name) const;
  bool has_map(const std::string& name) const { return maps_.count(name) > 0; }

  /// Validators for every declared map, explicit object and structure.
  Report validate_all() const;

 private:
  void load_object(const std::string& name, const Json& def);
  void load_map(const std::string& name, const Json& def);
  void load_structure(const std::string& name, const Json& def);
  void add_object(const std::string& name, CubSet x);
  void add_map(const std::string& name, PshMap f, bool declared = false);
  const Nerve& nerve_of(const std::string& name) const;
  SearchBudget budget() const { return SearchBudget(opts_.budget_search); }

  SceneOptions opts_;
  Json source_;
  unsigned dim_ = 0;
  SitePtr site_;
  std::uint64_t cells_ = 0;
  std::map<std::string, CubSet> objects_;
  std::map<std::string, Nerve> nerves_;
  std::map<std::string, PshMap> maps_;
  std::map<std::string, bool> declared_;  // maps given by tables, checked for naturality
  std::map<std::string, bool> explicit_objects_;
  std::map<std::string, UniformFib> fibs_;
  std::map<std::string, UniformTrivFib> trivfibs_;
  std::map<std::string, SheData> shes_;
};

/// Explicit encodings used in certificates.
Json object_tables(const CubSet& x);
Json map_tables(const PshMap& f);

}  // namespace cubical::cli
