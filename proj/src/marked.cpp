#include "cube/marked.hpp"

#include <cassert>

namespace cube {

namespace {
MTermPtr make_msort(SortKind s) {
  MTerm t;
  t.tag = MTag::Sort;
  t.sort = s;
  return std::make_shared<MTerm>(std::move(t));
}
}  // namespace

MTermPtr msort_term(SortKind s) {
  static const MTermPtr prop = make_msort(SortKind::Prop);
  static const MTermPtr type = make_msort(SortKind::Type);
  return s == SortKind::Prop ? prop : type;
}

MTermPtr mprop_term() { return msort_term(SortKind::Prop); }
MTermPtr mtype_term() { return msort_term(SortKind::Type); }

MTermPtr mvar_term(std::size_t index, MTermPtr mark) {
  assert(mark);
  MTerm t;
  t.tag = MTag::Var;
  t.index = index;
  t.mark = std::move(mark);
  return std::make_shared<MTerm>(std::move(t));
}

MTermPtr mapp_term(MTermPtr fn, MTermPtr arg, MTermPtr mark) {
  assert(fn && arg && mark);
  MTerm t;
  t.tag = MTag::App;
  t.left = std::move(fn);
  t.right = std::move(arg);
  t.mark = std::move(mark);
  return std::make_shared<MTerm>(std::move(t));
}

MTermPtr mabs_term(std::string hint, MTermPtr dom, MTermPtr body, MTermPtr mark) {
  assert(dom && body && mark);
  MTerm t;
  t.tag = MTag::Abs;
  t.hint = std::move(hint);
  t.left = std::move(dom);
  t.right = std::move(body);
  t.mark = std::move(mark);
  return std::make_shared<MTerm>(std::move(t));
}

MTermPtr mprod_term(std::string hint, MTermPtr dom, MTermPtr cod) {
  assert(dom && cod);
  MTerm t;
  t.tag = MTag::Prod;
  t.hint = std::move(hint);
  t.left = std::move(dom);
  t.right = std::move(cod);
  return std::make_shared<MTerm>(std::move(t));
}

MTermPtr marrow_term(const MTermPtr& dom, const MTermPtr& cod) {
  return mprod_term("_", dom, shift_marked(cod, 1, 0));
}

int compare(const MTerm& a, const MTerm& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  switch (a.tag) {
    case MTag::Sort:
      if (a.sort != b.sort) return a.sort < b.sort ? -1 : 1;
      return 0;
    case MTag::Var:
      if (a.index != b.index) return a.index < b.index ? -1 : 1;
      return compare(*a.mark, *b.mark);
    case MTag::App:
    case MTag::Abs: {
      if (int c = compare(*a.left, *b.left)) return c;
      if (int c = compare(*a.right, *b.right)) return c;
      return compare(*a.mark, *b.mark);
    }
    case MTag::Prod: {
      if (int c = compare(*a.left, *b.left)) return c;
      return compare(*a.right, *b.right);
    }
  }
  return 0;
}

bool mterm_eq(const MTermPtr& a, const MTermPtr& b) {
  return a.get() == b.get() || compare(*a, *b) == 0;
}

std::size_t mterm_size(const MTermPtr& t) {
  switch (t->tag) {
    case MTag::Sort: return 1;
    case MTag::Var: return 1 + mterm_size(t->mark);
    case MTag::App:
    case MTag::Abs:
      return 1 + mterm_size(t->left) + mterm_size(t->right) + mterm_size(t->mark);
    case MTag::Prod: return 1 + mterm_size(t->left) + mterm_size(t->right);
  }
  return 1;
}

MTermPtr shift_marked(const MTermPtr& t, std::int64_t by, std::size_t cutoff) {
  switch (t->tag) {
    case MTag::Sort: return t;
    case MTag::Var: {
      MTermPtr mark = shift_marked(t->mark, by, cutoff);
      std::size_t index = t->index;
      if (index >= cutoff) {
        std::int64_t moved = static_cast<std::int64_t>(index) + by;
        if (moved < 0) throw std::logic_error("shift_marked: de Bruijn index underflow");
        index = static_cast<std::size_t>(moved);
      }
      return mvar_term(index, std::move(mark));
    }
    case MTag::App:
      return mapp_term(shift_marked(t->left, by, cutoff), shift_marked(t->right, by, cutoff),
                       shift_marked(t->mark, by, cutoff));
    case MTag::Abs:
      return mabs_term(t->hint, shift_marked(t->left, by, cutoff),
                       shift_marked(t->right, by, cutoff + 1), shift_marked(t->mark, by, cutoff));
    case MTag::Prod:
      return mprod_term(t->hint, shift_marked(t->left, by, cutoff),
                        shift_marked(t->right, by, cutoff + 1));
  }
  return t;
}

MTermPtr subst_marked(const MTermPtr& t, std::size_t target, const MTermPtr& value) {
  switch (t->tag) {
    case MTag::Sort: return t;
    case MTag::Var: {
      if (t->index == target)
        return shift_marked(value, static_cast<std::int64_t>(target), 0);
      MTermPtr mark = subst_marked(t->mark, target, value);
      std::size_t index = t->index > target ? t->index - 1 : t->index;
      return mvar_term(index, std::move(mark));
    }
    case MTag::App:
      return mapp_term(subst_marked(t->left, target, value),
                       subst_marked(t->right, target, value),
                       subst_marked(t->mark, target, value));
    case MTag::Abs:
      return mabs_term(t->hint, subst_marked(t->left, target, value),
                       subst_marked(t->right, target + 1, value),
                       subst_marked(t->mark, target, value));
    case MTag::Prod:
      return mprod_term(t->hint, subst_marked(t->left, target, value),
                        subst_marked(t->right, target + 1, value));
  }
  return t;
}

bool occurs_free_marked(const MTermPtr& t, std::size_t index) {
  switch (t->tag) {
    case MTag::Sort: return false;
    case MTag::Var: return t->index == index || occurs_free_marked(t->mark, index);
    case MTag::App:
      return occurs_free_marked(t->left, index) || occurs_free_marked(t->right, index) ||
             occurs_free_marked(t->mark, index);
    case MTag::Abs:
      return occurs_free_marked(t->left, index) || occurs_free_marked(t->right, index + 1) ||
             occurs_free_marked(t->mark, index);
    case MTag::Prod:
      return occurs_free_marked(t->left, index) || occurs_free_marked(t->right, index + 1);
  }
  return false;
}

bool well_scoped_marked(const MTermPtr& t, std::size_t depth) {
  switch (t->tag) {
    case MTag::Sort: return true;
    case MTag::Var: return t->index < depth && well_scoped_marked(t->mark, depth);
    case MTag::App:
      return well_scoped_marked(t->left, depth) && well_scoped_marked(t->right, depth) &&
             well_scoped_marked(t->mark, depth);
    case MTag::Abs:
      return well_scoped_marked(t->left, depth) && well_scoped_marked(t->right, depth + 1) &&
             well_scoped_marked(t->mark, depth);
    case MTag::Prod:
      return well_scoped_marked(t->left, depth) && well_scoped_marked(t->right, depth + 1);
  }
  return false;
}

MTermPtr MarkedContext::lookup(std::size_t index) const {
  if (index >= entries_.size())
    throw TypeError(TypeErrorKind::UnboundVariable, {}, "index " + std::to_string(index));
  const auto& ty = entries_[entries_.size() - 1 - index].second;
  return shift_marked(ty, static_cast<std::int64_t>(index) + 1, 0);
}

const std::pair<std::string, MTermPtr>& MarkedContext::entry(std::size_t pos) const {
  return entries_.at(pos);
}

void MarkedContext::push(std::string hint, MTermPtr type) {
  entries_.emplace_back(std::move(hint), std::move(type));
}

MarkedContext MarkedContext::extended(std::string hint, MTermPtr type) const {
  MarkedContext out = *this;
  out.push(std::move(hint), std::move(type));
  return out;
}

MarkedContext MarkedContext::prefix(std::size_t len) const {
  MarkedContext out;
  for (std::size_t i = 0; i < len && i < entries_.size(); ++i)
    out.entries_.push_back(entries_[i]);
  return out;
}

std::vector<std::string> MarkedContext::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

int compare(const MarkedContext& a, const MarkedContext& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = compare(*a.entry(i).second, *b.entry(i).second)) return c;
  return 0;
}

TermPtr contents(const MTermPtr& t) {
  switch (t->tag) {
    case MTag::Sort: return sort_term(t->sort);
    case MTag::Var: return var_term(t->index);
    case MTag::App: return app_term(contents(t->left), contents(t->right));
    case MTag::Abs: return abs_term(t->hint, contents(t->left), contents(t->right));
    case MTag::Prod: return prod_term(t->hint, contents(t->left), contents(t->right));
  }
  return nullptr;
}

Context contents_context(const MarkedContext& ctx) {
  Context out;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    out.push(ctx.entry(i).first, contents(ctx.entry(i).second));
  return out;
}

namespace {

std::optional<MTermPtr> mcontract_beta(const MTerm& t) {
  if (t.tag == MTag::App && t.left->tag == MTag::Abs)
    return subst_marked(t.left->right, 0, t.right);
  return std::nullopt;
}

// ([x:U](u x^V)^W)^X with 0 not free in u, marks included; any marks match.
std::optional<MTermPtr> mcontract_eta(const MTerm& t) {
  if (t.tag == MTag::Abs && t.right->tag == MTag::App &&
      t.right->right->tag == MTag::Var && t.right->right->index == 0 &&
      !occurs_free_marked(t.right->left, 0))
    return shift_marked(t.right->left, -1, 0);
  return std::nullopt;
}

std::optional<MTermPtr> mcontract(const MTerm& t, RedexKind kind) {
  if (kind != RedexKind::Eta)
    if (auto r = mcontract_beta(t)) return r;
  if (kind != RedexKind::Beta)
    if (auto r = mcontract_eta(t)) return r;
  return std::nullopt;
}

MTermPtr replace_child(const MTermPtr& t, int child, const MTermPtr& sub) {
  switch (t->tag) {
    case MTag::Var:
      return mvar_term(t->index, sub);
    case MTag::App:
      if (child == 0) return mapp_term(sub, t->right, t->mark);
      if (child == 1) return mapp_term(t->left, sub, t->mark);
      return mapp_term(t->left, t->right, sub);
    case MTag::Abs:
      if (child == 0) return mabs_term(t->hint, sub, t->right, t->mark);
      if (child == 1) return mabs_term(t->hint, t->left, sub, t->mark);
      return mabs_term(t->hint, t->left, t->right, sub);
    case MTag::Prod:
      if (child == 0) return mprod_term(t->hint, sub, t->right);
      return mprod_term(t->hint, t->left, sub);
    default:
      return t;
  }
}

std::optional<MStepResult> mwrap(const MTermPtr& t, int child, std::optional<MStepResult> sub) {
  if (!sub) return std::nullopt;
  sub->redex.insert(sub->redex.begin(), child);
  sub->term = replace_child(t, child, sub->term);
  return sub;
}

// children to visit, term positions before mark positions
std::vector<int> mchildren(const MTerm& t) {
  switch (t.tag) {
    case MTag::Sort: return {};
    case MTag::Var: return {2};
    case MTag::App:
    case MTag::Abs: return {0, 1, 2};
    case MTag::Prod: return {0, 1};
  }
  return {};
}

const MTermPtr& mchild(const MTermPtr& t, int child) {
  return child == 0 ? t->left : child == 1 ? t->right : t->mark;
}

}  // namespace

std::optional<MStepResult> marked_step(const MTermPtr& t, RedexKind kind) {
  if (auto r = mcontract(*t, kind)) return MStepResult{*r, {}};
  for (int c : mchildren(*t))
    if (auto s = mwrap(t, c, marked_step(mchild(t, c), kind))) return s;
  return std::nullopt;
}

std::vector<MStepResult> marked_reducts(const MTermPtr& t, RedexKind kind) {
  std::vector<MStepResult> out;
  if (auto r = mcontract(*t, kind)) out.push_back({*r, {}});
  for (int c : mchildren(*t))
    for (auto& s : marked_reducts(mchild(t, c), kind)) out.push_back(*mwrap(t, c, s));
  return out;
}

bool marked_is_normal(const MTermPtr& t, RedexKind kind) {
  return !marked_step(t, kind).has_value();
}

MTermPtr marked_normalize(MTermPtr t, std::uint64_t fuel) {
  while (auto s = marked_step(t, RedexKind::Beta)) {
    if (fuel-- == 0) throw FuelExhausted{};
    t = s->term;
  }
  while (auto s = marked_step(t, RedexKind::Eta)) {
    if (fuel-- == 0) throw FuelExhausted{};
    t = s->term;
    if (!marked_is_normal(t, RedexKind::Beta))
      throw std::logic_error("marked eta step produced a beta redex on a beta-normal term");
  }
  return t;
}

bool marked_convertible(const MTermPtr& a, const MTermPtr& b, std::uint64_t fuel) {
  if (mterm_eq(a, b)) return true;
  return convertible(contents(a), contents(b), fuel);
}

namespace {
MTermPtr marked_whnf(MTermPtr t, std::uint64_t& fuel) {
  for (;;) {
    if (t->tag != MTag::App) return t;
    MTermPtr fn = marked_whnf(t->left, fuel);
    if (fn->tag == MTag::Abs) {
      if (fuel-- == 0) throw FuelExhausted{};
      t = subst_marked(fn->right, 0, t->right);
    } else {
      return fn.get() == t->left.get() ? t : mapp_term(fn, t->right, t->mark);
    }
  }
}
}  // namespace

std::optional<std::pair<MTermPtr, MTermPtr>> marked_whnf_product(MTermPtr t, std::uint64_t fuel) {
  MTermPtr head = marked_whnf(std::move(t), fuel);
  if (head->tag == MTag::Prod) return std::make_pair(head->left, head->right);
  return std::nullopt;
}

namespace {

// The sort of a marked type: the contents of its inferred type must
// normalize to a sort.
SortKind marked_expect_sort(const MarkedContext& ctx, const MTermPtr& t, const SystemSpec& sys,
                            std::uint64_t fuel, TermPath& path) {
  MTermPtr ty = marked_infer(ctx, t, sys, fuel);
  TermPtr n = normalize(contents(ty), fuel);
  if (n->tag != TermTag::Sort)
    throw TypeError(TypeErrorKind::NotAType, path, "marked term is not a type");
  return n->sort;
}

}  // namespace

void marked_wf_context(const MarkedContext& ctx, const SystemSpec& sys, std::uint64_t fuel) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& [name, ty] = ctx.entry(i);
    MarkedContext pre = ctx.prefix(i);
    try {
      TermPath path;
      marked_expect_sort(pre, ty, sys, fuel, path);
    } catch (const TypeError& e) {
      throw TypeError(TypeErrorKind::IllFormedContext, {},
                      "entry " + std::to_string(i) + " (" + name + "): " + e.what())
          .with_inner(e);
    }
  }
}

MTermPtr marked_infer(const MarkedContext& ctx, const MTermPtr& t, const SystemSpec& sys,
                      std::uint64_t fuel) {
  TermPath path;
  switch (t->tag) {
    case MTag::Sort:
      if (t->sort == SortKind::Prop) return mtype_term();
      throw TypeError(TypeErrorKind::TypeHasNoType, path, "Type has no type");
    case MTag::Var: {
      if (t->index >= ctx.size())
        throw TypeError(TypeErrorKind::UnboundVariable, path,
                        "index " + std::to_string(t->index));
      MTermPtr declared = ctx.lookup(t->index);
      if (!marked_convertible(t->mark, declared, fuel))
        throw TypeError(TypeErrorKind::MarkMismatch, path,
                        "variable mark not convertible to its declared type")
            .with_terms(contents(declared), contents(t->mark));
      marked_expect_sort(ctx, t->mark, sys, fuel, path);
      return t->mark;
    }
    case MTag::Prod: {
      SortKind s1 = marked_expect_sort(ctx, t->left, sys, fuel, path);
      SortKind s2 =
          marked_expect_sort(ctx.extended(t->hint, t->left), t->right, sys, fuel, path);
      if (!sys.allows(s1, s2))
        throw TypeError(TypeErrorKind::RuleNotInSystem, path, "product rule not in system")
            .with_sorts(s1, s2);
      return msort_term(s2);
    }
    case MTag::Abs: {
      MTermPtr body_ty = marked_infer(ctx.extended(t->hint, t->left), t->right, sys, fuel);
      MTermPtr formed = mprod_term(t->hint, t->left, body_ty);
      marked_expect_sort(ctx, formed, sys, fuel, path);
      if (!marked_convertible(t->mark, formed, fuel))
        throw TypeError(TypeErrorKind::MarkMismatch, path,
                        "abstraction mark not convertible to its product type")
            .with_terms(contents(formed), contents(t->mark));
      marked_expect_sort(ctx, t->mark, sys, fuel, path);
      return t->mark;
    }
    case MTag::App: {
      MTermPtr fn_ty = marked_infer(ctx, t->left, sys, fuel);
      auto prod = marked_whnf_product(fn_ty, fuel);
      if (!prod)
        throw TypeError(TypeErrorKind::NotAFunction, path,
                        "application head is not of product type");
      MTermPtr arg_ty = marked_infer(ctx, t->right, sys, fuel);
      if (!marked_convertible(arg_ty, prod->first, fuel))
        throw TypeError(TypeErrorKind::DomainMismatch, path, "argument type mismatch")
            .with_terms(contents(prod->first), contents(arg_ty));
      MTermPtr inst = subst_marked(prod->second, 0, t->right);
      if (!marked_convertible(t->mark, inst, fuel))
        throw TypeError(TypeErrorKind::MarkMismatch, path,
                        "application mark not convertible to the instantiated codomain")
            .with_terms(contents(inst), contents(t->mark));
      marked_expect_sort(ctx, t->mark, sys, fuel, path);
      return t->mark;
    }
  }
  throw std::logic_error("marked_infer: unreachable");
}

TermPtr encode_circ(const MTermPtr& t, std::size_t o_index) {
  switch (t->tag) {
    case MTag::Sort:
      return sort_term(t->sort);
    case MTag::Var:
      return app_term(abs_term("z", prop_term(), var_term(t->index + 1)),
                      encode_bar(t->mark, o_index));
    case MTag::App: {
      TermPtr inner = app_term(encode_circ(t->left, o_index), encode_circ(t->right, o_index));
      return app_term(abs_term("z", prop_term(), shift(inner, 1, 0)),
                      encode_bar(t->mark, o_index));
    }
    case MTag::Abs: {
      TermPtr inner = abs_term(t->hint, encode_circ(t->left, o_index),
                               encode_circ(t->right, o_index + 1));
      return app_term(abs_term("z", prop_term(), shift(inner, 1, 0)),
                      encode_bar(t->mark, o_index));
    }
    case MTag::Prod:
      return prod_term(t->hint, encode_circ(t->left, o_index),
                       encode_circ(t->right, o_index + 1));
  }
  return nullptr;
}

TermPtr encode_bar(const MTermPtr& t, std::size_t o_index) {
  // syntactic telescope (x1:A1)...(xn:An)Prop, n >= 0
  std::vector<const MTerm*> prods;
  const MTerm* cur = t.get();
  while (cur->tag == MTag::Prod) {
    prods.push_back(cur);
    cur = cur->right.get();
  }
  if (!(cur->tag == MTag::Sort && cur->sort == SortKind::Prop)) return encode_circ(t, o_index);
  TermPtr out = var_term(o_index + prods.size());
  for (std::size_t i = prods.size(); i-- > 0;) {
    const MTerm* node = prods[i];
    out = prod_term(node->hint, encode_circ(node->left, o_index + i), out);
  }
  return out;
}

Context circ_context(const MarkedContext& ctx) {
  Context out;
  out.push("o", prop_term());
  for (std::size_t i = 0; i < ctx.size(); ++i)
    out.push(ctx.entry(i).first, encode_circ(ctx.entry(i).second, i));
  return out;
}

namespace {

StarResult star_impl(const Context& ctx, const MarkedContext& mctx, const TermPtr& t,
                     const SystemSpec& sys, std::uint64_t fuel, bool normalize_apps) {
  switch (t->tag) {
    case TermTag::Sort:
      if (t->sort == SortKind::Type)
        throw TypeError(TypeErrorKind::TypeHasNoType, {}, "Type has no type");
      return {mctx, mprop_term(), mtype_term()};
    case TermTag::Var: {
      MTermPtr declared = mctx.lookup(t->index);
      return {mctx, mvar_term(t->index, declared), declared};
    }
    case TermTag::Prod: {
      StarResult dom = star_impl(ctx, mctx, t->left, sys, fuel, normalize_apps);
      StarResult cod = star_impl(ctx.extended(t->hint, t->left),
                                 mctx.extended(t->hint, dom.term), t->right, sys, fuel,
                                 normalize_apps);
      TermPtr s2 = normalize(contents(cod.type), fuel);
      if (s2->tag != TermTag::Sort)
        throw TypeError(TypeErrorKind::NotAType, {}, "product codomain is not a type");
      return {mctx, mprod_term(t->hint, dom.term, cod.term), msort_term(s2->sort)};
    }
    case TermTag::Abs: {
      StarResult dom = star_impl(ctx, mctx, t->left, sys, fuel, normalize_apps);
      StarResult body = star_impl(ctx.extended(t->hint, t->left),
                                  mctx.extended(t->hint, dom.term), t->right, sys, fuel,
                                  normalize_apps);
      MTermPtr prod = mprod_term(t->hint, dom.term, body.type);
      return {mctx, mabs_term(t->hint, dom.term, body.term, prod), prod};
    }
    case TermTag::App: {
      StarResult fn = star_impl(ctx, mctx, t->left, sys, fuel, normalize_apps);
      StarResult arg = star_impl(ctx, mctx, t->right, sys, fuel, normalize_apps);
      auto prod = marked_whnf_product(fn.type, fuel);
      if (!prod)
        throw TypeError(TypeErrorKind::NotAFunction, {},
                        "application head is not of product type");
      MTermPtr inst = subst_marked(prod->second, 0, arg.term);
      MTermPtr built = mapp_term(fn.term, arg.term, inst);
      if (normalize_apps) {
        built = marked_normalize(built, fuel);
        inst = marked_normalize(inst, fuel);
      }
      return {mctx, built, inst};
    }
  }
  throw std::logic_error("star_impl: unreachable");
}

MarkedContext star_context_impl(const Context& ctx, const SystemSpec& sys, std::uint64_t fuel,
                                bool normalize_apps) {
  MarkedContext out;
  Context pre;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& [name, ty] = ctx.entry(i);
    StarResult st = star_impl(pre, out, ty, sys, fuel, normalize_apps);
    out.push(name, st.term);
    pre.push(name, ty);
  }
  return out;
}

}  // namespace

MarkedContext star_context(const Context& ctx, const SystemSpec& sys, std::uint64_t fuel) {
  return star_context_impl(ctx, sys, fuel, true);
}

StarResult star_translate(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                          std::uint64_t fuel) {
  MarkedContext mctx = star_context_impl(ctx, sys, fuel, true);
  return star_impl(ctx, mctx, t, sys, fuel, true);
}

StarResult annotate_term(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                         std::uint64_t fuel) {
  MarkedContext mctx = star_context_impl(ctx, sys, fuel, true);
  return star_impl(ctx, mctx, t, sys, fuel, false);
}

namespace {
bool marked_contains(const MTermPtr& whole, const MTermPtr& sub) {
  if (mterm_eq(whole, sub)) return true;
  switch (whole->tag) {
    case MTag::Sort: return false;
    case MTag::Var: return marked_contains(whole->mark, sub);
    case MTag::App:
    case MTag::Abs:
      return marked_contains(whole->left, sub) || marked_contains(whole->right, sub) ||
             marked_contains(whole->mark, sub);
    case MTag::Prod:
      return marked_contains(whole->left, sub) || marked_contains(whole->right, sub);
  }
  return false;
}
}  // namespace

bool is_strict_marked_subterm(const MTermPtr& sub, const MTermPtr& whole) {
  if (mterm_eq(sub, whole)) return false;
  return marked_contains(whole, sub);
}

}  // namespace cube
