#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cube {

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class SortKind : unsigned char { Prop, Type };

// Path from the root of a term to a subterm: 0 = left child (function /
// domain), 1 = right child (argument / body / codomain), 2 = mark.
using TermPath = std::vector<int>;

std::string path_to_string(const TermPath& path);

struct FuelExhausted : std::runtime_error {
  FuelExhausted() : std::runtime_error("fuel exhausted") {}
};

enum class TypeErrorKind {
  UnboundVariable,
  TypeHasNoType,
  RuleNotInSystem,
  NotAFunction,
  DomainMismatch,
  IllFormedContext,
  MarkMismatch,
  NotAType,
  NotNormal,
  UnknownSystem,
};

const char* to_string(TypeErrorKind kind);

class TypeError : public std::runtime_error {
 public:
  TypeErrorKind kind;
  TermPath path;
  std::string detail;
  // RuleNotInSystem carries the offending sort pair.
  std::optional<std::pair<SortKind, SortKind>> sorts;
  // DomainMismatch carries the two types (contents for marked checks).
  TermPtr expected;
  TermPtr got;
  // IllFormedContext wraps the failure of the offending entry.
  std::shared_ptr<TypeError> inner;

  TypeError(TypeErrorKind k, TermPath p, std::string d);
  TypeError with_sorts(SortKind s1, SortKind s2) &&;
  TypeError with_terms(TermPtr want, TermPtr have) &&;
  TypeError with_inner(const TypeError& e) &&;
};

}  // namespace cube
