#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cube/error.hpp"

namespace cube {

enum class TermTag : unsigned char { Sort, Var, App, Abs, Prod };

// Immutable de Bruijn term. Binder hints are display-only: equality and
// ordering ignore them, so structural equality is alpha-equivalence.
class Term {
 public:
  TermTag tag = TermTag::Sort;
  SortKind sort = SortKind::Prop;  // Sort
  std::size_t index = 0;           // Var
  std::string hint;                // Abs / Prod binder name
  TermPtr left;                    // App function, Abs/Prod domain
  TermPtr right;                   // App argument, Abs body, Prod codomain
};

TermPtr sort_term(SortKind s);
TermPtr prop_term();
TermPtr type_term();
TermPtr var_term(std::size_t index);
TermPtr app_term(TermPtr fn, TermPtr arg);
TermPtr abs_term(std::string hint, TermPtr dom, TermPtr body);
TermPtr prod_term(std::string hint, TermPtr dom, TermPtr cod);
// Non-dependent product dom -> cod; cod is shifted under the unused binder.
TermPtr arrow_term(const TermPtr& dom, const TermPtr& cod);

int compare(const Term& a, const Term& b);
bool term_eq(const TermPtr& a, const TermPtr& b);
std::size_t term_size(const TermPtr& t);

// Adjusts free indices >= cutoff by `by`. Throws std::logic_error if a free
// index would become negative.
TermPtr shift(const TermPtr& t, std::int64_t by, std::size_t cutoff = 0);

// Replaces index `target` by `value` (shifted under binders) and decrements
// the indices above `target`.
TermPtr subst(const TermPtr& t, std::size_t target, const TermPtr& value);

bool occurs_free(const TermPtr& t, std::size_t index);
bool well_scoped(const TermPtr& t, std::size_t depth);
std::vector<std::size_t> free_indices(const TermPtr& t);

// Ordered sequence of declarations, outermost first; de Bruijn index 0 is the
// innermost entry. Each entry's type is scoped over the preceding entries.
class Context {
 public:
  Context() = default;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Declared type of index i, shifted so it is scoped over the whole context.
  TermPtr lookup(std::size_t index) const;
  const std::pair<std::string, TermPtr>& entry(std::size_t pos) const;

  void push(std::string hint, TermPtr type);
  Context extended(std::string hint, TermPtr type) const;
  Context prefix(std::size_t len) const;
  std::vector<std::string> names() const;

 private:
  std::vector<std::pair<std::string, TermPtr>> entries_;
};

int compare(const Context& a, const Context& b);

// A beta-normal term labeled by the context that types it. Equality is
// entry-wise context equality plus term equality.
struct LabeledTerm {
  Context ctx;
  TermPtr term;
};

int compare(const LabeledTerm& a, const LabeledTerm& b);
bool operator<(const LabeledTerm& a, const LabeledTerm& b);
bool operator==(const LabeledTerm& a, const LabeledTerm& b);

// Sub(t_ctx): sorts and variables have none; applications contribute both
// children in the same context; abstractions and products contribute the
// domain in ctx and the body in the extended context.
std::set<LabeledTerm> strict_subterms(const LabeledTerm& t);

}  // namespace cube
