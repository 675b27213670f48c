#pragma once

#include <initializer_list>
#include <optional>
#include <string>

#include "cube/reduction.hpp"

namespace cube {

// One of the eight rule sets: the sort pairs <s1,s2> allowed to form products.
// <Prop,Prop> is always a member.
class SystemSpec {
 public:
  SystemSpec();

  static SystemSpec named(const std::string& name);
  // Explicit pair list, e.g. "PP,PT,TP,TT" (P = Prop, T = Type).
  static SystemSpec from_rules(const std::string& rules);
  static SystemSpec from_pairs(std::initializer_list<std::pair<SortKind, SortKind>> pairs,
                               std::string label = {});

  bool allows(SortKind s1, SortKind s2) const;
  bool subsumes(const SystemSpec& other) const;
  std::string canonical_rules() const;  // "PP,PT,..."
  const std::string& label() const { return label_; }
  std::string display() const;  // label if known, else canonical rules

  friend bool operator==(const SystemSpec& a, const SystemSpec& b);

 private:
  bool allow_[2][2] = {{false, false}, {false, false}};
  std::string label_;
};

SystemSpec named_system(const std::string& name);
const std::vector<SystemSpec>& all_systems();

struct Judgement {
  Context ctx;
  TermPtr subject;
  TermPtr type;
  SystemSpec system;
};

// Every entry type must have a sort type under the preceding entries.
void wf_context(const Context& ctx, const SystemSpec& sys, std::uint64_t fuel = kDefaultFuel);

// Syntax-directed inference. The returned type is structural (unnormalized);
// callers normalize as needed.
TermPtr infer(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
              std::uint64_t fuel = kDefaultFuel);

void check(const Context& ctx, const TermPtr& t, const TermPtr& type, const SystemSpec& sys,
           std::uint64_t fuel = kDefaultFuel);

Judgement infer_judgement(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                          std::uint64_t fuel = kDefaultFuel);

// Sort of the inferred type of a type-term, if it normalizes to a sort.
std::optional<SortKind> sort_of_type(const Context& ctx, const TermPtr& type,
                                     const SystemSpec& sys, std::uint64_t fuel = kDefaultFuel);

}  // namespace cube
