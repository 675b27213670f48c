#include "cube/generator.hpp"

#include <algorithm>
#include <cassert>

namespace cube {

TermGen::TermGen(SystemSpec sys, std::uint64_t seed, std::uint64_t fuel)
    : sys_(std::move(sys)), rng_(seed), fuel_(fuel) {}

std::size_t TermGen::pick(std::size_t n) { return n == 0 ? 0 : rng_() % n; }

bool TermGen::chance(unsigned percent) { return rng_() % 100 < percent; }

namespace {
const char* kPropNames[] = {"P", "Q", "T", "A", "B", "C"};
const char* kFunNames[] = {"f", "g", "h", "Pr", "k", "m"};
const char* kElemNames[] = {"a", "b", "u", "v", "w", "c"};
}  // namespace

Context TermGen::gen_context(int max_entries, int budget) {
  Context ctx;
  int entries = 1 + static_cast<int>(pick(static_cast<std::size_t>(max_entries)));
  for (int i = 0; i < entries; ++i) {
    // bias toward Prop-sorted entry types (plain inhabitants) with a mix of
    // Type-sorted ones (type and constructor variables)
    SortKind target = chance(55) ? SortKind::Prop : SortKind::Type;
    auto ty = gen_type(ctx, target, budget);
    if (!ty && target == SortKind::Prop) {
      ty = gen_type(ctx, SortKind::Type, budget);
      target = SortKind::Type;
    }
    if (!ty) {
      ty = prop_term();
      target = SortKind::Type;
    }
    TermPtr norm = normalize(*ty, fuel_);
    const char* base;
    if (norm->tag == TermTag::Sort) {
      base = kPropNames[pick(std::size(kPropNames))];
    } else if (norm->tag == TermTag::Prod) {
      base = kFunNames[pick(std::size(kFunNames))];
    } else {
      base = kElemNames[pick(std::size(kElemNames))];
    }
    std::string name = base;
    auto names = ctx.names();
    while (std::find(names.begin(), names.end(), name) != names.end()) name += "0";
    ctx.push(std::move(name), norm);
  }
  return ctx;
}

std::optional<TermPtr> TermGen::gen_type(const Context& ctx, SortKind s, int budget) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    unsigned roll = static_cast<unsigned>(pick(100));
    if (s == SortKind::Type) {
      // kinds: Prop, or products ending in a kind
      if (budget <= 0 || roll < 45) return prop_term();
      SortKind s1 = sys_.allows(SortKind::Prop, SortKind::Type) &&
                            (!sys_.allows(SortKind::Type, SortKind::Type) || chance(50))
                        ? SortKind::Prop
                        : SortKind::Type;
      if (!sys_.allows(s1, SortKind::Type)) continue;
      auto dom = gen_type(ctx, s1, budget - 1);
      if (!dom) continue;
      auto cod = gen_type(ctx.extended("_", *dom), SortKind::Type, budget - 1);
      if (!cod) continue;
      return prod_term("_", *dom, *cod);
    }
    // s == Prop: atomic types from the context, or products ending in Prop
    if (budget > 0 && roll >= 55) {
      SortKind s1 = sys_.allows(SortKind::Type, SortKind::Prop) &&
                            (!sys_.allows(SortKind::Prop, SortKind::Prop) || chance(35))
                        ? SortKind::Type
                        : SortKind::Prop;
      if (sys_.allows(s1, SortKind::Prop)) {
        auto dom = gen_type(ctx, s1, budget - 1);
        if (dom) {
          auto cod = gen_type(ctx.extended("x", *dom), SortKind::Prop, budget - 1);
          if (cod) return prod_term(occurs_free(*cod, 0) ? "x" : "_", *dom, *cod);
        }
      }
    }
    // var-headed spine whose telescope ends in the sort Prop; applied spines
    // need budget for their arguments
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      TermPtr ty = normalize(ctx.lookup(i), fuel_);
      Telescope tele = split_telescope(ty);
      if (tele.head->tag == TermTag::Sort && tele.head->sort == SortKind::Prop &&
          tele.domains.size() <= 2 && (budget > 0 || tele.domains.empty()))
        candidates.push_back(i);
    }
    if (candidates.empty()) continue;
    std::size_t v = candidates[pick(candidates.size())];
    TermPtr cur = normalize(ctx.lookup(v), fuel_);
    TermPtr out = var_term(v);
    bool ok = true;
    while (cur->tag == TermTag::Prod) {
      if (budget <= 0) {
        ok = false;
        break;
      }
      auto arg = gen_of_type(ctx, normalize(cur->left, fuel_), budget - 1);
      if (!arg) {
        ok = false;
        break;
      }
      out = app_term(out, *arg);
      cur = normalize(subst(cur->right, 0, *arg), fuel_);
    }
    if (ok) return out;
  }
  return std::nullopt;
}

std::optional<TermPtr> TermGen::gen_spine_of_type(const Context& ctx, const TermPtr& type,
                                                  int budget) {
  // exact variables first, then short spines checked by conversion
  std::vector<std::size_t> order(ctx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng_);
  for (std::size_t v : order) {
    TermPtr ty = normalize(ctx.lookup(v), fuel_);
    if (term_eq(ty, type)) return var_term(v);
  }
  if (budget <= 0) return std::nullopt;
  for (std::size_t v : order) {
    TermPtr cur = normalize(ctx.lookup(v), fuel_);
    TermPtr out = var_term(v);
    for (int steps = 0; steps < 3 && cur->tag == TermTag::Prod; ++steps) {
      auto arg = gen_of_type(ctx, normalize(cur->left, fuel_), budget - 1);
      if (!arg) break;
      out = app_term(out, *arg);
      cur = normalize(subst(cur->right, 0, *arg), fuel_);
      if (term_eq(cur, type)) return out;
    }
  }
  return std::nullopt;
}

std::optional<TermPtr> TermGen::gen_of_type(const Context& ctx, const TermPtr& type, int budget) {
  TermPtr target = normalize(type, fuel_);
  if (target->tag == TermTag::Sort) {
    // an inhabitant of a sort is a type of that sort
    return gen_type(ctx, target->sort, budget);
  }
  if (target->tag == TermTag::Prod) {
    if (budget > 0 && chance(75)) {
      auto body = gen_of_type(ctx.extended(target->hint, target->left),
                              normalize(target->right, fuel_), budget - 1);
      if (body) {
        std::string hint = target->hint.empty() || target->hint == "_"
                               ? (occurs_free(*body, 0) ? "x" : "_")
                               : target->hint;
        return abs_term(hint, target->left, *body);
      }
    }
    return gen_spine_of_type(ctx, target, budget);
  }
  return gen_spine_of_type(ctx, target, budget);
}

std::optional<std::pair<TermPtr, TermPtr>> TermGen::gen_any(const Context& ctx, int budget) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    unsigned roll = static_cast<unsigned>(pick(100));
    try {
      if (roll < 10) {
        return std::make_pair(prop_term(), type_term());
      }
      if (roll < 35 && !ctx.empty()) {
        std::size_t v = pick(ctx.size());
        return std::make_pair(var_term(v), ctx.lookup(v));
      }
      if (roll < 50) {
        SortKind s = chance(70) ? SortKind::Prop : SortKind::Type;
        auto ty = gen_type(ctx, s, budget);
        if (!ty) continue;
        return std::make_pair(*ty, sort_term(s));
      }
      if (roll < 80 && budget > 0) {
        // abstraction over a generated domain
        SortKind s1 = chance(60) ? SortKind::Prop : SortKind::Type;
        auto dom = gen_type(ctx, s1, budget - 1);
        if (!dom) continue;
        auto body = gen_any(ctx.extended("x", *dom), budget - 1);
        if (!body) continue;
        TermPtr prod = prod_term("x", *dom, body->second);
        // the formed product must carry a sort in this system
        try {
          infer(ctx, prod, sys_, fuel_);
        } catch (const TypeError&) {
          continue;
        }
        TermPtr abs = abs_term(occurs_free(body->first, 0) ? "x" : "_", *dom, body->first);
        return std::make_pair(abs, prod);
      }
      if (budget > 0) {
        // application, sometimes as a deliberate beta or eta redex
        auto fn = gen_any(ctx, budget - 1);
        if (!fn) continue;
        auto prod = whnf_product(fn->second, fuel_);
        if (prod) {
          if (chance(25)) {
            // eta-expand the function instead of applying it
            TermPtr expanded =
                abs_term("e", prod->first, app_term(shift(fn->first, 1, 0), var_term(0)));
            return std::make_pair(expanded, fn->second);
          }
          auto arg = gen_of_type(ctx, prod->first, budget - 1);
          if (!arg) continue;
          return std::make_pair(app_term(fn->first, *arg), subst(prod->second, 0, *arg));
        }
        // beta redex wrapper: ((\x:T. t) a) for t not mentioning x
        if (chance(40) && !ctx.empty()) {
          std::size_t v = pick(ctx.size());
          TermPtr vty = ctx.lookup(v);
          auto inner = gen_any(ctx, budget - 1);
          if (!inner) continue;
          TermPtr redex =
              app_term(abs_term("_", vty, shift(inner->first, 1, 0)), var_term(v));
          return std::make_pair(redex, inner->second);
        }
        continue;
      }
    } catch (const TypeError&) {
      continue;
    } catch (const FuelExhausted&) {
      continue;
    }
  }
  return std::nullopt;
}

TermGen::Sample TermGen::well_typed(int budget) {
  for (;;) {
    Context ctx = gen_context(4, std::max(1, budget - 2));
    auto got = gen_any(ctx, budget);
    if (!got) continue;
    try {
      TermPtr ty = infer(ctx, got->first, sys_, fuel_);
      return Sample{std::move(ctx), got->first, ty};
    } catch (const TypeError&) {
      continue;
    } catch (const FuelExhausted&) {
      continue;
    }
  }
}

TermGen::Sample TermGen::normal(int budget) {
  Sample s = well_typed(budget);
  TermPtr norm = normalize(s.term, fuel_);
  return Sample{s.ctx, norm, infer(s.ctx, norm, sys_, fuel_)};
}

}  // namespace cube
