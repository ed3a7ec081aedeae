#pragma once

// Validation reports: named groups of equations with counts and the first
// counterexample found in each group.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cubical {

struct CheckGroup {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_failure;
};

class Report {
 public:
  explicit Report(std::string subject = {}) : subject_(std::move(subject)) {}

  /// Opens a group; subsequent record() calls go to it.
  void group(std::string name);
  void record(bool ok, const std::string& what_if_failed = {});
  /// Records a failure message directly (counts as one checked equation).
  void fail(const std::string& what) { record(false, what); }
  void merge(const Report& other, const std::string& prefix = {});

  bool ok() const;
  const std::string& subject() const { return subject_; }
  const std::vector<CheckGroup>& groups() const { return groups_; }
  std::size_t checked() const;
  /// First failure over all groups, in group order.
  std::optional<std::string> first_failure() const;

  /// One line per group, then the failures.
  std::string to_text() const;

 private:
  std::string subject_;
  std::vector<CheckGroup> groups_;
};

}  // namespace cubical
