#include "cubical/report.hpp"

#include <sstream>

namespace cubical {

void Report::group(std::string name) { groups_.push_back({std::move(name), 0, 0, std::nullopt}); }

void Report::record(bool ok, const std::string& what_if_failed) {
  if (groups_.empty()) group("checks");
  CheckGroup& g = groups_.back();
  ++g.checked;
  if (!ok) {
    ++g.failed;
    if (!g.first_failure) g.first_failure = what_if_failed.empty() ? g.name : what_if_failed;
  }
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (CheckGroup g : other.groups_) {
    g.name = prefix + g.name;
    groups_.push_back(std::move(g));
  }
}

bool Report::ok() const {
  for (const auto& g : groups_)
    if (g.failed) return false;
  return true;
}

std::size_t Report::checked() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.checked;
  return n;
}

std::optional<std::string> Report::first_failure() const {
  for (const auto& g : groups_)
    if (g.first_failure) return g.first_failure;
  return std::nullopt;
}

std::string Report::to_text() const {
  std::ostringstream os;
  if (!subject_.empty()) os << "report " << subject_ << "\n";
  for (const auto& g : groups_)
    os << "  " << (g.failed ? "FAIL " : "ok   ") << g.name << ": " << g.checked - g.failed << "/" << g.checked << "\n";
  for (const auto& g : groups_)
    if (g.first_failure) os << "  counterexample [" << g.name << "]: " << *g.first_failure << "\n";
  return os.str();
}

}  // namespace cubical
