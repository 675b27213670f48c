#include "cube/reduction.hpp"

#include <algorithm>

namespace cube {

namespace {

std::optional<TermPtr> contract_beta(const Term& t) {
  if (t.tag == TermTag::App && t.left->tag == TermTag::Abs)
    return subst(t.left->right, 0, t.right);
  return std::nullopt;
}

std::optional<TermPtr> contract_eta(const Term& t) {
  if (t.tag == TermTag::Abs && t.right->tag == TermTag::App &&
      t.right->right->tag == TermTag::Var && t.right->right->index == 0 &&
      !occurs_free(t.right->left, 0))
    return shift(t.right->left, -1, 0);
  return std::nullopt;
}

std::optional<TermPtr> contract(const Term& t, RedexKind kind) {
  if (kind != RedexKind::Eta)
    if (auto r = contract_beta(t)) return r;
  if (kind != RedexKind::Beta)
    if (auto r = contract_eta(t)) return r;
  return std::nullopt;
}

std::optional<StepResult> wrap_child(const TermPtr& t, int child,
                                     std::optional<StepResult> sub) {
  if (!sub) return std::nullopt;
  sub->redex.insert(sub->redex.begin(), child);
  switch (t->tag) {
    case TermTag::App:
      sub->term = child == 0 ? app_term(sub->term, t->right) : app_term(t->left, sub->term);
      break;
    case TermTag::Abs:
      sub->term = child == 0 ? abs_term(t->hint, sub->term, t->right)
                             : abs_term(t->hint, t->left, sub->term);
      break;
    case TermTag::Prod:
      sub->term = child == 0 ? prod_term(t->hint, sub->term, t->right)
                             : prod_term(t->hint, t->left, sub->term);
      break;
    default:
      break;
  }
  return sub;
}

}  // namespace

std::optional<StepResult> step(const TermPtr& t, RedexKind kind) {
  if (auto r = contract(*t, kind)) return StepResult{*r, {}};
  switch (t->tag) {
    case TermTag::Sort:
    case TermTag::Var:
      return std::nullopt;
    default:
      if (auto s = wrap_child(t, 0, step(t->left, kind))) return s;
      return wrap_child(t, 1, step(t->right, kind));
  }
}

std::vector<StepResult> reducts(const TermPtr& t, RedexKind kind) {
  std::vector<StepResult> out;
  if (auto r = contract(*t, kind)) out.push_back({*r, {}});
  switch (t->tag) {
    case TermTag::Sort:
    case TermTag::Var:
      return out;
    default:
      for (auto& s : reducts(t->left, kind)) out.push_back(*wrap_child(t, 0, s));
      for (auto& s : reducts(t->right, kind)) out.push_back(*wrap_child(t, 1, s));
      return out;
  }
}

bool is_normal(const TermPtr& t, RedexKind kind) { return !step(t, kind).has_value(); }

TermPtr beta_normalize(TermPtr t, std::uint64_t fuel) {
  while (auto s = step(t, RedexKind::Beta)) {
    if (fuel-- == 0) throw FuelExhausted{};
    t = s->term;
  }
  return t;
}

TermPtr normalize(TermPtr t, std::uint64_t fuel) {
  t = beta_normalize(t, fuel);
  while (auto s = step(t, RedexKind::Eta)) {
    if (fuel-- == 0) throw FuelExhausted{};
    t = s->term;
    // invariant: eta contraction keeps a beta-normal term beta-normal
    if (!is_normal(t, RedexKind::Beta))
      throw std::logic_error("eta step produced a beta redex on a beta-normal term");
  }
  return t;
}

namespace {
TermPtr whnf(TermPtr t, std::uint64_t& fuel) {
  for (;;) {
    if (t->tag != TermTag::App) return t;
    TermPtr fn = whnf(t->left, fuel);
    if (fn->tag == TermTag::Abs) {
      if (fuel-- == 0) throw FuelExhausted{};
      t = subst(fn->right, 0, t->right);
    } else {
      return fn.get() == t->left.get() ? t : app_term(fn, t->right);
    }
  }
}
}  // namespace

std::optional<std::pair<TermPtr, TermPtr>> whnf_product(TermPtr t, std::uint64_t fuel) {
  TermPtr head = whnf(std::move(t), fuel);
  if (head->tag == TermTag::Prod) return std::make_pair(head->left, head->right);
  return std::nullopt;
}

bool convertible(const TermPtr& a, const TermPtr& b, std::uint64_t fuel) {
  if (term_eq(a, b)) return true;
  return term_eq(normalize(a, fuel), normalize(b, fuel));
}

bool is_atomic(const TermPtr& t) {
  const Term* h = t.get();
  std::size_t args = 0;
  while (h->tag == TermTag::App) {
    h = h->left.get();
    ++args;
  }
  if (h->tag == TermTag::Var) return true;
  return h->tag == TermTag::Sort && args == 0;
}

Telescope split_telescope(const TermPtr& type) {
  Telescope out;
  TermPtr cur = type;
  while (cur->tag == TermTag::Prod) {
    out.domains.emplace_back(cur->hint, cur->left);
    cur = cur->right;
  }
  if (!is_atomic(cur))
    throw TypeError(TypeErrorKind::NotAType, {},
                    "telescope head is neither atomic nor a product");
  out.head = cur;
  return out;
}

TermPtr unsplit_telescope(const Telescope& tele) {
  TermPtr cur = tele.head;
  for (auto it = tele.domains.rbegin(); it != tele.domains.rend(); ++it)
    cur = prod_term(it->first, it->second, cur);
  return cur;
}

Spine split_spine(const TermPtr& t) {
  Spine out;
  TermPtr cur = t;
  std::vector<TermPtr> rev;
  while (cur->tag == TermTag::App) {
    rev.push_back(cur->right);
    cur = cur->left;
  }
  out.head = cur;
  out.args.assign(rev.rbegin(), rev.rend());
  return out;
}

}  // namespace cube
