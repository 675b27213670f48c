#pragma once

#include "cube/typing.hpp"

namespace cube {

enum class MTag : unsigned char { Sort, Var, App, Abs, Prod };

class MTerm;
using MTermPtr = std::shared_ptr<const MTerm>;

// Marked term: every variable, application and abstraction carries a type
// mark; sorts and products do not. Free indices may occur inside marks.
class MTerm {
 public:
  MTag tag = MTag::Sort;
  SortKind sort = SortKind::Prop;  // Sort
  std::size_t index = 0;           // Var
  std::string hint;                // Abs / Prod
  MTermPtr left;                   // App function, Abs/Prod domain
  MTermPtr right;                  // App argument, Abs body, Prod codomain
  MTermPtr mark;                   // Var / App / Abs
};

MTermPtr msort_term(SortKind s);
MTermPtr mprop_term();
MTermPtr mtype_term();
MTermPtr mvar_term(std::size_t index, MTermPtr mark);
MTermPtr mapp_term(MTermPtr fn, MTermPtr arg, MTermPtr mark);
MTermPtr mabs_term(std::string hint, MTermPtr dom, MTermPtr body, MTermPtr mark);
MTermPtr mprod_term(std::string hint, MTermPtr dom, MTermPtr cod);
MTermPtr marrow_term(const MTermPtr& dom, const MTermPtr& cod);

int compare(const MTerm& a, const MTerm& b);
bool mterm_eq(const MTermPtr& a, const MTermPtr& b);
std::size_t mterm_size(const MTermPtr& t);

// Substitution and occurrence traverse marks as well as the term skeleton.
MTermPtr shift_marked(const MTermPtr& t, std::int64_t by, std::size_t cutoff = 0);
MTermPtr subst_marked(const MTermPtr& t, std::size_t target, const MTermPtr& value);
bool occurs_free_marked(const MTermPtr& t, std::size_t index);
bool well_scoped_marked(const MTermPtr& t, std::size_t depth);

class MarkedContext {
 public:
  MarkedContext() = default;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  MTermPtr lookup(std::size_t index) const;
  const std::pair<std::string, MTermPtr>& entry(std::size_t pos) const;
  void push(std::string hint, MTermPtr type);
  MarkedContext extended(std::string hint, MTermPtr type) const;
  MarkedContext prefix(std::size_t len) const;
  std::vector<std::string> names() const;

 private:
  std::vector<std::pair<std::string, MTermPtr>> entries_;
};

int compare(const MarkedContext& a, const MarkedContext& b);

// Mark erasure t#.
TermPtr contents(const MTermPtr& t);
Context contents_context(const MarkedContext& ctx);

struct MStepResult {
  MTermPtr term;
  TermPath redex;
};

// Leftmost-outermost over term positions before mark positions at each node.
// The contracted redex may be either in the term or in the marks.
std::optional<MStepResult> marked_step(const MTermPtr& t, RedexKind kind = RedexKind::Any);
std::vector<MStepResult> marked_reducts(const MTermPtr& t, RedexKind kind = RedexKind::Any);
bool marked_is_normal(const MTermPtr& t, RedexKind kind = RedexKind::Any);

MTermPtr marked_normalize(MTermPtr t, std::uint64_t fuel = kDefaultFuel);

// Conversion on marked terms compares contents only.
bool marked_convertible(const MTermPtr& a, const MTermPtr& b, std::uint64_t fuel = kDefaultFuel);

std::optional<std::pair<MTermPtr, MTermPtr>> marked_whnf_product(MTermPtr t,
                                                                 std::uint64_t fuel = kDefaultFuel);

void marked_wf_context(const MarkedContext& ctx, const SystemSpec& sys,
                       std::uint64_t fuel = kDefaultFuel);

// Syntax-directed marked inference; returns the subject's outermost mark for
// variables, applications and abstractions.
MTermPtr marked_infer(const MarkedContext& ctx, const MTermPtr& t, const SystemSpec& sys,
                      std::uint64_t fuel = kDefaultFuel);

// The circle encoding into unmarked terms over a fresh variable o of type
// Prop; o_index is the de Bruijn index of o at the call site (the context
// length, since o is the outermost slot of the circ context).
TermPtr encode_circ(const MTermPtr& t, std::size_t o_index);
// Replaces a Prop-headed telescope's head by o; otherwise equals circ.
TermPtr encode_bar(const MTermPtr& t, std::size_t o_index);
Context circ_context(const MarkedContext& ctx);

struct StarResult {
  MarkedContext ctx;
  MTermPtr term;
  MTermPtr type;
};

MarkedContext star_context(const Context& ctx, const SystemSpec& sys,
                           std::uint64_t fuel = kDefaultFuel);

// Derivation-directed translation to a normal marked term; the application
// clause normalizes the built node and its mark.
StarResult star_translate(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                          std::uint64_t fuel = kDefaultFuel);

// Same construction without any normalization: a well-typed marked term whose
// contents is exactly t, generally carrying redexes inside its marks.
StarResult annotate_term(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                         std::uint64_t fuel = kDefaultFuel);

// Strict subterm test on marked terms; marks count as subterms.
bool is_strict_marked_subterm(const MTermPtr& sub, const MTermPtr& whole);

}  // namespace cube
