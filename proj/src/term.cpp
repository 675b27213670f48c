#include "cube/term.hpp"

#include <cassert>
#include <sstream>

namespace cube {

std::string path_to_string(const TermPath& path) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out << '.';
    out << path[i];
  }
  out << ']';
  return out.str();
}

const char* to_string(TypeErrorKind kind) {
  switch (kind) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::TypeHasNoType: return "TypeHasNoType";
    case TypeErrorKind::RuleNotInSystem: return "RuleNotInSystem";
    case TypeErrorKind::NotAFunction: return "NotAFunction";
    case TypeErrorKind::DomainMismatch: return "DomainMismatch";
    case TypeErrorKind::IllFormedContext: return "IllFormedContext";
    case TypeErrorKind::MarkMismatch: return "MarkMismatch";
    case TypeErrorKind::NotAType: return "NotAType";
    case TypeErrorKind::NotNormal: return "NotNormal";
    case TypeErrorKind::UnknownSystem: return "UnknownSystem";
  }
  return "TypeError";
}

namespace {
std::string format_error(TypeErrorKind k, const TermPath& p, const std::string& d) {
  std::string msg = to_string(k);
  if (!d.empty()) {
    msg += ": ";
    msg += d;
  }
  if (!p.empty()) {
    msg += " at ";
    msg += path_to_string(p);
  }
  return msg;
}
}  // namespace

TypeError::TypeError(TypeErrorKind k, TermPath p, std::string d)
    : std::runtime_error(format_error(k, p, d)),
      kind(k),
      path(std::move(p)),
      detail(std::move(d)) {}

TypeError TypeError::with_sorts(SortKind s1, SortKind s2) && {
  sorts = {s1, s2};
  return std::move(*this);
}

TypeError TypeError::with_terms(TermPtr want, TermPtr have) && {
  expected = std::move(want);
  got = std::move(have);
  return std::move(*this);
}

TypeError TypeError::with_inner(const TypeError& e) && {
  inner = std::make_shared<TypeError>(e);
  return std::move(*this);
}

TermPtr sort_term(SortKind s) {
  static const TermPtr prop = std::make_shared<Term>(Term{TermTag::Sort, SortKind::Prop, 0, {}, nullptr, nullptr});
  static const TermPtr type = std::make_shared<Term>(Term{TermTag::Sort, SortKind::Type, 0, {}, nullptr, nullptr});
  return s == SortKind::Prop ? prop : type;
}

TermPtr prop_term() { return sort_term(SortKind::Prop); }
TermPtr type_term() { return sort_term(SortKind::Type); }

TermPtr var_term(std::size_t index) {
  return std::make_shared<Term>(Term{TermTag::Var, SortKind::Prop, index, {}, nullptr, nullptr});
}

TermPtr app_term(TermPtr fn, TermPtr arg) {
  assert(fn && arg);
  return std::make_shared<Term>(
      Term{TermTag::App, SortKind::Prop, 0, {}, std::move(fn), std::move(arg)});
}

TermPtr abs_term(std::string hint, TermPtr dom, TermPtr body) {
  assert(dom && body);
  return std::make_shared<Term>(
      Term{TermTag::Abs, SortKind::Prop, 0, std::move(hint), std::move(dom), std::move(body)});
}

TermPtr prod_term(std::string hint, TermPtr dom, TermPtr cod) {
  assert(dom && cod);
  return std::make_shared<Term>(
      Term{TermTag::Prod, SortKind::Prop, 0, std::move(hint), std::move(dom), std::move(cod)});
}

TermPtr arrow_term(const TermPtr& dom, const TermPtr& cod) {
  return prod_term("_", dom, shift(cod, 1, 0));
}

int compare(const Term& a, const Term& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  switch (a.tag) {
    case TermTag::Sort:
      if (a.sort != b.sort) return a.sort < b.sort ? -1 : 1;
      return 0;
    case TermTag::Var:
      if (a.index != b.index) return a.index < b.index ? -1 : 1;
      return 0;
    case TermTag::App:
    case TermTag::Abs:
    case TermTag::Prod: {
      if (int c = compare(*a.left, *b.left)) return c;
      return compare(*a.right, *b.right);
    }
  }
  return 0;
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  return a.get() == b.get() || compare(*a, *b) == 0;
}

std::size_t term_size(const TermPtr& t) {
  switch (t->tag) {
    case TermTag::Sort:
    case TermTag::Var: return 1;
    default: return 1 + term_size(t->left) + term_size(t->right);
  }
}

TermPtr shift(const TermPtr& t, std::int64_t by, std::size_t cutoff) {
  switch (t->tag) {
    case TermTag::Sort: return t;
    case TermTag::Var: {
      if (t->index < cutoff) return t;
      std::int64_t moved = static_cast<std::int64_t>(t->index) + by;
      if (moved < 0) throw std::logic_error("shift: de Bruijn index underflow");
      if (moved == static_cast<std::int64_t>(t->index)) return t;
      return var_term(static_cast<std::size_t>(moved));
    }
    case TermTag::App:
      return app_term(shift(t->left, by, cutoff), shift(t->right, by, cutoff));
    case TermTag::Abs:
      return abs_term(t->hint, shift(t->left, by, cutoff), shift(t->right, by, cutoff + 1));
    case TermTag::Prod:
      return prod_term(t->hint, shift(t->left, by, cutoff), shift(t->right, by, cutoff + 1));
  }
  return t;
}

TermPtr subst(const TermPtr& t, std::size_t target, const TermPtr& value) {
  switch (t->tag) {
    case TermTag::Sort: return t;
    case TermTag::Var: {
      if (t->index == target) return shift(value, static_cast<std::int64_t>(target), 0);
      if (t->index > target) return var_term(t->index - 1);
      return t;
    }
    case TermTag::App:
      return app_term(subst(t->left, target, value), subst(t->right, target, value));
    case TermTag::Abs:
      return abs_term(t->hint, subst(t->left, target, value), subst(t->right, target + 1, value));
    case TermTag::Prod:
      return prod_term(t->hint, subst(t->left, target, value), subst(t->right, target + 1, value));
  }
  return t;
}

bool occurs_free(const TermPtr& t, std::size_t index) {
  switch (t->tag) {
    case TermTag::Sort: return false;
    case TermTag::Var: return t->index == index;
    case TermTag::App:
      return occurs_free(t->left, index) || occurs_free(t->right, index);
    case TermTag::Abs:
    case TermTag::Prod:
      return occurs_free(t->left, index) || occurs_free(t->right, index + 1);
  }
  return false;
}

bool well_scoped(const TermPtr& t, std::size_t depth) {
  switch (t->tag) {
    case TermTag::Sort: return true;
    case TermTag::Var: return t->index < depth;
    case TermTag::App:
      return well_scoped(t->left, depth) && well_scoped(t->right, depth);
    case TermTag::Abs:
    case TermTag::Prod:
      return well_scoped(t->left, depth) && well_scoped(t->right, depth + 1);
  }
  return false;
}

namespace {
void collect_free(const TermPtr& t, std::size_t depth, std::set<std::size_t>& out) {
  switch (t->tag) {
    case TermTag::Sort: return;
    case TermTag::Var:
      if (t->index >= depth) out.insert(t->index - depth);
      return;
    case TermTag::App:
      collect_free(t->left, depth, out);
      collect_free(t->right, depth, out);
      return;
    case TermTag::Abs:
    case TermTag::Prod:
      collect_free(t->left, depth, out);
      collect_free(t->right, depth + 1, out);
      return;
  }
}
}  // namespace

std::vector<std::size_t> free_indices(const TermPtr& t) {
  std::set<std::size_t> acc;
  collect_free(t, 0, acc);
  return {acc.begin(), acc.end()};
}

TermPtr Context::lookup(std::size_t index) const {
  if (index >= entries_.size())
    throw TypeError(TypeErrorKind::UnboundVariable, {}, "index " + std::to_string(index));
  const auto& ty = entries_[entries_.size() - 1 - index].second;
  return shift(ty, static_cast<std::int64_t>(index) + 1, 0);
}

const std::pair<std::string, TermPtr>& Context::entry(std::size_t pos) const {
  return entries_.at(pos);
}

void Context::push(std::string hint, TermPtr type) {
  entries_.emplace_back(std::move(hint), std::move(type));
}

Context Context::extended(std::string hint, TermPtr type) const {
  Context out = *this;
  out.push(std::move(hint), std::move(type));
  return out;
}

Context Context::prefix(std::size_t len) const {
  Context out;
  for (std::size_t i = 0; i < len && i < entries_.size(); ++i) out.entries_.push_back(entries_[i]);
  return out;
}

std::vector<std::string> Context::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

int compare(const Context& a, const Context& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = compare(*a.entry(i).second, *b.entry(i).second)) return c;
  return 0;
}

int compare(const LabeledTerm& a, const LabeledTerm& b) {
  if (int c = compare(*a.term, *b.term)) return c;
  return compare(a.ctx, b.ctx);
}

bool operator<(const LabeledTerm& a, const LabeledTerm& b) { return compare(a, b) < 0; }
bool operator==(const LabeledTerm& a, const LabeledTerm& b) { return compare(a, b) == 0; }

namespace {
void collect_subterms(const LabeledTerm& t, std::set<LabeledTerm>& out) {
  const Term& node = *t.term;
  switch (node.tag) {
    case TermTag::Sort:
    case TermTag::Var:
      return;
    case TermTag::App: {
      LabeledTerm fn{t.ctx, node.left};
      LabeledTerm arg{t.ctx, node.right};
      out.insert(fn);
      out.insert(arg);
      collect_subterms(fn, out);
      collect_subterms(arg, out);
      return;
    }
    case TermTag::Abs:
    case TermTag::Prod: {
      LabeledTerm dom{t.ctx, node.left};
      LabeledTerm body{t.ctx.extended(node.hint, node.left), node.right};
      out.insert(dom);
      out.insert(body);
      collect_subterms(dom, out);
      collect_subterms(body, out);
      return;
    }
  }
}
}  // namespace

std::set<LabeledTerm> strict_subterms(const LabeledTerm& t) {
  assert(well_scoped(t.term, t.ctx.size()));
  std::set<LabeledTerm> out;
  collect_subterms(t, out);
  return out;
}

}  // namespace cube
