#pragma once

#include <functional>
#include <iosfwd>

#include "cube/eta_long.hpp"
#include "cube/generator.hpp"

namespace cube {

// One generated test case: a well-typed subject (redexes allowed) plus its
// beta-eta-normal form over the same context.
struct FuzzCase {
  Context ctx;
  TermPtr term;
  TermPtr type;
  TermPtr normal_term;
  TermPtr normal_type;
};

FuzzCase make_case(const TermGen::Sample& raw, const SystemSpec& sys, std::uint64_t fuel);

// A checker returns a failure description, or nothing on success.
using Checker =
    std::function<std::optional<std::string>(const FuzzCase&, const SystemSpec&, std::uint64_t)>;

struct NamedChecker {
  std::string name;
  Checker run;
};

// Typing is preserved along every one-step reduct and along a full leftmost
// reduction sequence.
std::optional<std::string> check_subject_reduction(const FuzzCase&, const SystemSpec&,
                                                   std::uint64_t fuel);
// All inferred types along reduction are pairwise convertible.
std::optional<std::string> check_type_uniqueness(const FuzzCase&, const SystemSpec&,
                                                 std::uint64_t fuel);
// Every one-step-divergent pair joins at the common normal form.
std::optional<std::string> check_confluence(const FuzzCase&, const SystemSpec&,
                                            std::uint64_t fuel);
// Marked typing is preserved by marked beta and eta steps.
std::optional<std::string> check_marked_subject_reduction(const FuzzCase&, const SystemSpec&,
                                                          std::uint64_t fuel);
// A marked step either preserves contents or maps to one unmarked step.
std::optional<std::string> check_contents_morphism(const FuzzCase&, const SystemSpec&,
                                                   std::uint64_t fuel);
// Every beta step of the contents lifts to a marked beta step.
std::optional<std::string> check_beta_lifting(const FuzzCase&, const SystemSpec&,
                                              std::uint64_t fuel);
// Normal marked terms with equal contents in one context are equal.
std::optional<std::string> check_toto_injectivity(const FuzzCase&, const SystemSpec&,
                                                  std::uint64_t fuel);
// contents(t*) = t for normal t; t* re-checks; t* is marked-normal.
std::optional<std::string> check_star_round_trip(const FuzzCase&, const SystemSpec&,
                                                 std::uint64_t fuel);
// eta_long laws: beta-normal, normalizes back, idempotent, re-checks,
// and the measure certificate holds at every expansion.
std::optional<std::string> check_eta_long_laws(const FuzzCase&, const SystemSpec&,
                                               std::uint64_t fuel);
// descend terminates, mu strictly decreases along predecessor edges, and the
// <' variant terminates.
std::optional<std::string> check_mu_descent(const FuzzCase&, const SystemSpec&,
                                            std::uint64_t fuel);
// one-step pairs t < u embed into strict marked subterms of the stars.
std::optional<std::string> check_star_embedding(const FuzzCase&, const SystemSpec&,
                                                std::uint64_t fuel);
// one-step pairs t <' u embed into strict marked subterms of the pluses.
std::optional<std::string> check_plus_embedding(const FuzzCase&, const SystemSpec&,
                                                std::uint64_t fuel);
// contents . eta_long_marked = eta_long . contents on star images.
std::optional<std::string> check_eta_long_commutes(const FuzzCase&, const SystemSpec&,
                                                   std::uint64_t fuel);
// circle-encoding lemmas: free variables, substitution commutation,
// one-step simulation within a bounded search, typability in cc.
std::optional<std::string> check_encoding_lemmas(const FuzzCase&, const SystemSpec&,
                                                 std::uint64_t fuel);

// Everything the fuzz runner executes, in report order.
const std::vector<NamedChecker>& registered_checkers();

// Simulation helper: search the reduction graph of `from` for `to`,
// expanding at most `bound` states breadth-first.
bool reachable_by_reduction(const TermPtr& from, const TermPtr& to, std::size_t bound);

struct PropertyFailure {
  std::string property;
  std::size_t case_index = 0;
  std::string detail;
  std::string shrunk;
};

struct PropertyReport {
  std::string system;
  std::size_t cases = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::size_t>> passes;  // per property
  std::vector<PropertyFailure> failures;
  bool ok() const { return failures.empty(); }
};

PropertyReport run_property_suite(const SystemSpec& sys, std::size_t count, std::uint64_t seed,
                                  std::uint64_t fuel, int budget = 6);

void write_report(std::ostream& out, const PropertyReport& report);

}  // namespace cube
