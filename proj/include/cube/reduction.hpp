#pragma once

#include <optional>

#include "cube/term.hpp"

namespace cube {

enum class RedexKind : unsigned char { Beta, Eta, Any };

inline constexpr std::uint64_t kDefaultFuel = 100000;

struct StepResult {
  TermPtr term;
  TermPath redex;
};

// Contracts the leftmost-outermost redex of the requested kind, if any.
// Beta redex: App(Abs(_,U,b), a) -> b[0 <- a].
// Eta redex: Abs(_,U, App(u, Var 0)) with 0 not free in u -> shift(u, -1).
std::optional<StepResult> step(const TermPtr& t, RedexKind kind = RedexKind::Any);

// Every one-step reduct, one per redex position, leftmost-outermost order.
std::vector<StepResult> reducts(const TermPtr& t, RedexKind kind = RedexKind::Any);

bool is_normal(const TermPtr& t, RedexKind kind = RedexKind::Any);

TermPtr beta_normalize(TermPtr t, std::uint64_t fuel = kDefaultFuel);

// Unique beta-eta-normal form of a well-typed term: exhausts beta steps, then
// eta steps (which cannot create beta redexes on beta-normal terms).
TermPtr normalize(TermPtr t, std::uint64_t fuel = kDefaultFuel);

// Head beta-reduction only; engages iff t beta-reduces to a product.
std::optional<std::pair<TermPtr, TermPtr>> whnf_product(TermPtr t,
                                                        std::uint64_t fuel = kDefaultFuel);

bool convertible(const TermPtr& a, const TermPtr& b, std::uint64_t fuel = kDefaultFuel);

// (h c1 ... cn) with h a variable, or h a sort with n = 0.
bool is_atomic(const TermPtr& t);

// Unique decomposition (x1:P1)...(xn:Pn)P of a beta-normal type, P atomic.
struct Telescope {
  std::vector<std::pair<std::string, TermPtr>> domains;
  TermPtr head;
};

Telescope split_telescope(const TermPtr& type);
TermPtr unsplit_telescope(const Telescope& tele);

// Spine view (h c1 ... cn) of any term.
struct Spine {
  TermPtr head;
  std::vector<TermPtr> args;
};
Spine split_spine(const TermPtr& t);

}  // namespace cube
