#include "cube/typing.hpp"

#include <algorithm>
#include <cctype>

namespace cube {

SystemSpec::SystemSpec() { allow_[0][0] = true; }

namespace {
int idx(SortKind s) { return s == SortKind::Prop ? 0 : 1; }
}  // namespace

SystemSpec SystemSpec::from_pairs(std::initializer_list<std::pair<SortKind, SortKind>> pairs,
                                  std::string label) {
  SystemSpec out;
  out.label_ = std::move(label);
  for (const auto& p : pairs) out.allow_[idx(p.first)][idx(p.second)] = true;
  if (!out.allow_[0][0])
    throw TypeError(TypeErrorKind::UnknownSystem, {}, "rule set must contain <Prop,Prop>");
  return out;
}

SystemSpec SystemSpec::named(const std::string& name) {
  using S = SortKind;
  if (name == "stlc") return from_pairs({{S::Prop, S::Prop}}, "stlc");
  if (name == "lambda-p") return from_pairs({{S::Prop, S::Prop}, {S::Prop, S::Type}}, "lambda-p");
  if (name == "f") return from_pairs({{S::Prop, S::Prop}, {S::Type, S::Prop}}, "f");
  if (name == "f-omega-weak")
    return from_pairs({{S::Prop, S::Prop}, {S::Type, S::Type}}, "f-omega-weak");
  if (name == "f-omega")
    return from_pairs({{S::Prop, S::Prop}, {S::Type, S::Prop}, {S::Type, S::Type}}, "f-omega");
  if (name == "lambda-p2")
    return from_pairs({{S::Prop, S::Prop}, {S::Prop, S::Type}, {S::Type, S::Prop}}, "lambda-p2");
  if (name == "lambda-p-omega-weak")
    return from_pairs({{S::Prop, S::Prop}, {S::Prop, S::Type}, {S::Type, S::Type}},
                      "lambda-p-omega-weak");
  if (name == "cc")
    return from_pairs(
        {{S::Prop, S::Prop}, {S::Prop, S::Type}, {S::Type, S::Prop}, {S::Type, S::Type}}, "cc");
  // fall back to an explicit pair list
  if (name.find_first_of("PT") != std::string::npos) return from_rules(name);
  throw TypeError(TypeErrorKind::UnknownSystem, {}, "unknown system '" + name + "'");
}

SystemSpec SystemSpec::from_rules(const std::string& rules) {
  SystemSpec out;
  out.allow_[0][0] = false;
  std::string token;
  auto take = [&](const std::string& tok) {
    if (tok.empty()) return;
    if (tok.size() != 2 || (tok[0] != 'P' && tok[0] != 'T') || (tok[1] != 'P' && tok[1] != 'T'))
      throw TypeError(TypeErrorKind::UnknownSystem, {}, "bad rule pair '" + tok + "'");
    out.allow_[tok[0] == 'P' ? 0 : 1][tok[1] == 'P' ? 0 : 1] = true;
  };
  for (char c : rules) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      take(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  take(token);
  if (!out.allow_[0][0])
    throw TypeError(TypeErrorKind::UnknownSystem, {}, "rule set must contain PP");
  return out;
}

bool SystemSpec::allows(SortKind s1, SortKind s2) const { return allow_[idx(s1)][idx(s2)]; }

bool SystemSpec::subsumes(const SystemSpec& other) const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (other.allow_[i][j] && !allow_[i][j]) return false;
  return true;
}

std::string SystemSpec::canonical_rules() const {
  std::string out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (allow_[i][j]) {
        if (!out.empty()) out += ',';
        out += (i == 0 ? 'P' : 'T');
        out += (j == 0 ? 'P' : 'T');
      }
  return out;
}

std::string SystemSpec::display() const { return label_.empty() ? canonical_rules() : label_; }

bool operator==(const SystemSpec& a, const SystemSpec& b) {
  return a.subsumes(b) && b.subsumes(a);
}

SystemSpec named_system(const std::string& name) { return SystemSpec::named(name); }

const std::vector<SystemSpec>& all_systems() {
  static const std::vector<SystemSpec> systems = {
      SystemSpec::named("stlc"),         SystemSpec::named("lambda-p"),
      SystemSpec::named("f"),            SystemSpec::named("f-omega-weak"),
      SystemSpec::named("f-omega"),      SystemSpec::named("lambda-p2"),
      SystemSpec::named("lambda-p-omega-weak"), SystemSpec::named("cc")};
  return systems;
}

namespace {

TermPtr infer_at(const Context& ctx, const TermPtr& t, const SystemSpec& sys, std::uint64_t fuel,
                 TermPath& path);

// The sort of a term whose inferred type must normalize to a sort.
SortKind expect_sort(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                     std::uint64_t fuel, TermPath& path) {
  TermPtr ty = infer_at(ctx, t, sys, fuel, path);
  TermPtr n = normalize(ty, fuel);
  if (n->tag != TermTag::Sort)
    throw TypeError(TypeErrorKind::NotAType, path, "term is not a type");
  return n->sort;
}

TermPtr infer_at(const Context& ctx, const TermPtr& t, const SystemSpec& sys, std::uint64_t fuel,
                 TermPath& path) {
  switch (t->tag) {
    case TermTag::Sort:
      if (t->sort == SortKind::Prop) return type_term();
      throw TypeError(TypeErrorKind::TypeHasNoType, path, "Type has no type");
    case TermTag::Var:
      if (t->index >= ctx.size())
        throw TypeError(TypeErrorKind::UnboundVariable, path,
                        "index " + std::to_string(t->index));
      return ctx.lookup(t->index);
    case TermTag::Prod: {
      path.push_back(0);
      SortKind s1 = expect_sort(ctx, t->left, sys, fuel, path);
      path.back() = 1;
      SortKind s2 = expect_sort(ctx.extended(t->hint, t->left), t->right, sys, fuel, path);
      path.pop_back();
      if (!sys.allows(s1, s2))
        throw TypeError(TypeErrorKind::RuleNotInSystem, path,
                        "product needs <" + std::string(s1 == SortKind::Prop ? "Prop" : "Type") +
                            "," + (s2 == SortKind::Prop ? "Prop" : "Type") + ">")
            .with_sorts(s1, s2);
      return sort_term(s2);
    }
    case TermTag::Abs: {
      path.push_back(1);
      TermPtr body_ty = infer_at(ctx.extended(t->hint, t->left), t->right, sys, fuel, path);
      path.pop_back();
      TermPtr prod = prod_term(t->hint, t->left, body_ty);
      // the abstraction rule requires the product itself to have a sort
      infer_at(ctx, prod, sys, fuel, path);
      return prod;
    }
    case TermTag::App: {
      path.push_back(0);
      TermPtr fn_ty = infer_at(ctx, t->left, sys, fuel, path);
      path.pop_back();
      auto prod = whnf_product(fn_ty, fuel);
      if (!prod)
        throw TypeError(TypeErrorKind::NotAFunction, path,
                        "application head is not of product type");
      path.push_back(1);
      TermPtr arg_ty = infer_at(ctx, t->right, sys, fuel, path);
      if (!convertible(arg_ty, prod->first, fuel))
        throw TypeError(TypeErrorKind::DomainMismatch, path, "argument type mismatch")
            .with_terms(prod->first, arg_ty);
      path.pop_back();
      return subst(prod->second, 0, t->right);
    }
  }
  throw std::logic_error("infer: unreachable");
}

}  // namespace

void wf_context(const Context& ctx, const SystemSpec& sys, std::uint64_t fuel) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& [name, ty] = ctx.entry(i);
    Context pre = ctx.prefix(i);
    try {
      TermPath path;
      expect_sort(pre, ty, sys, fuel, path);
    } catch (const TypeError& e) {
      throw TypeError(TypeErrorKind::IllFormedContext, {},
                      "entry " + std::to_string(i) + " (" + name + "): " + e.what())
          .with_inner(e);
    }
  }
}

TermPtr infer(const Context& ctx, const TermPtr& t, const SystemSpec& sys, std::uint64_t fuel) {
  TermPath path;
  return infer_at(ctx, t, sys, fuel, path);
}

void check(const Context& ctx, const TermPtr& t, const TermPtr& type, const SystemSpec& sys,
           std::uint64_t fuel) {
  TermPtr got = infer(ctx, t, sys, fuel);
  if (type->tag == TermTag::Sort && type->sort == SortKind::Type) {
    if (!term_eq(got, type))
      throw TypeError(TypeErrorKind::DomainMismatch, {}, "expected the sort Type")
          .with_terms(type, got);
    return;
  }
  if (!convertible(got, type, fuel))
    throw TypeError(TypeErrorKind::DomainMismatch, {}, "type mismatch").with_terms(type, got);
}

Judgement infer_judgement(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                          std::uint64_t fuel) {
  return Judgement{ctx, t, infer(ctx, t, sys, fuel), sys};
}

std::optional<SortKind> sort_of_type(const Context& ctx, const TermPtr& type,
                                     const SystemSpec& sys, std::uint64_t fuel) {
  if (type->tag == TermTag::Sort && type->sort == SortKind::Type) return std::nullopt;
  TermPtr n = normalize(infer(ctx, type, sys, fuel), fuel);
  if (n->tag == TermTag::Sort) return n->sort;
  return std::nullopt;
}

}  // namespace cube
