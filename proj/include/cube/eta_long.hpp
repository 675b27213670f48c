#pragma once

#include "cube/marked.hpp"

namespace cube {

// Every measure clause yields a value >= 1.
using Measure = std::uint64_t;

Measure measure_marked(const MTermPtr& t);

// Requires a beta-normal, well-typed subject; the recursion through normal
// types terminates because the order generated by subterms and normal types
// is well-founded (fuel-guarded nonetheless).
Measure measure_unmarked(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                         std::uint64_t fuel = kDefaultFuel);

// Immediate generators of the order <: non-sort strict subterms, plus the
// normal form of the subject's type unless the subject or that normal form is
// a sort.
std::set<LabeledTerm> predecessors(const LabeledTerm& t, const SystemSpec& sys,
                                   std::uint64_t fuel = kDefaultFuel);

// Variant for <': the type contribution is the eta-long form of the normal
// form of the type.
std::set<LabeledTerm> predecessors_prime(const LabeledTerm& t, const SystemSpec& sys,
                                         std::uint64_t fuel = kDefaultFuel);

struct DescendResult {
  std::set<LabeledTerm> down_set;
  std::size_t max_depth = 0;
};

DescendResult descend(const LabeledTerm& t, const SystemSpec& sys,
                      std::uint64_t fuel = kDefaultFuel);
DescendResult descend_prime(const LabeledTerm& t, const SystemSpec& sys,
                            std::uint64_t fuel = kDefaultFuel);

// Maximal eta-expansion of a beta-normal well-typed term. With certify set,
// asserts the measure decrease mu(x_i) < mu(t) at every atomic-clause
// recursion.
TermPtr eta_long(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                 std::uint64_t fuel = kDefaultFuel, bool certify = false);

MTermPtr eta_long_marked(const MarkedContext& ctx, const MTermPtr& t, const SystemSpec& sys,
                         std::uint64_t fuel = kDefaultFuel);

// t+ : the eta-long form of the * translation.
MTermPtr plus_translate(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                        std::uint64_t fuel = kDefaultFuel);

}  // namespace cube
