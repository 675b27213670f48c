#include "cube/eta_long.hpp"

#include <cassert>
#include <deque>
#include <map>

namespace cube {

Measure measure_marked(const MTermPtr& t) {
  switch (t->tag) {
    case MTag::Sort: return 1;
    case MTag::Var: return measure_marked(t->mark) + 1;
    case MTag::App:
    case MTag::Abs:
      return measure_marked(t->left) + measure_marked(t->right) + measure_marked(t->mark);
    case MTag::Prod: return measure_marked(t->left) + measure_marked(t->right);
  }
  return 1;
}

namespace {

struct MeasureEnv {
  const SystemSpec& sys;
  std::uint64_t fuel;
  std::map<LabeledTerm, Measure> memo;
};

Measure measure_rec(MeasureEnv& env, const Context& ctx, const TermPtr& t) {
  if (env.fuel-- == 0) throw FuelExhausted{};
  if (t->tag == TermTag::Sort) return 1;
  LabeledTerm key{ctx, t};
  if (auto it = env.memo.find(key); it != env.memo.end()) return it->second;
  Measure result = 0;
  switch (t->tag) {
    case TermTag::Var: {
      TermPtr ty = normalize(ctx.lookup(t->index), env.fuel);
      result = measure_rec(env, ctx, ty) + 1;
      break;
    }
    case TermTag::App: {
      TermPtr ty = normalize(infer(ctx, t, env.sys, env.fuel), env.fuel);
      result = measure_rec(env, ctx, t->left) + measure_rec(env, ctx, t->right) +
               measure_rec(env, ctx, ty);
      break;
    }
    case TermTag::Abs: {
      TermPtr ty = normalize(infer(ctx, t, env.sys, env.fuel), env.fuel);
      result = measure_rec(env, ctx, t->left) +
               measure_rec(env, ctx.extended(t->hint, t->left), t->right) +
               measure_rec(env, ctx, ty);
      break;
    }
    case TermTag::Prod:
      result = measure_rec(env, ctx, t->left) +
               measure_rec(env, ctx.extended(t->hint, t->left), t->right);
      break;
    default:
      break;
  }
  env.memo.emplace(std::move(key), result);
  return result;
}

void require_beta_normal(const TermPtr& t) {
  if (!is_normal(t, RedexKind::Beta))
    throw TypeError(TypeErrorKind::NotNormal, {}, "term is not beta-normal");
}

}  // namespace

Measure measure_unmarked(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                         std::uint64_t fuel) {
  require_beta_normal(t);
  MeasureEnv env{sys, fuel, {}};
  return measure_rec(env, ctx, t);
}

namespace {

std::set<LabeledTerm> predecessors_impl(const LabeledTerm& t, const SystemSpec& sys,
                                        std::uint64_t fuel, bool eta_long_types) {
  // members of the <' closure are eta-long, hence beta-normal but not
  // eta-normal
  if (eta_long_types ? !is_normal(t.term, RedexKind::Beta) : !is_normal(t.term))
    throw TypeError(TypeErrorKind::NotNormal, {},
                    eta_long_types ? "term is not beta-normal" : "term is not beta-eta-normal");
  std::set<LabeledTerm> out;
  if (t.term->tag == TermTag::Sort) return out;
  for (const LabeledTerm& sub : strict_subterms(t)) {
    if (sub.term->tag == TermTag::Sort) continue;
    out.insert(sub);
  }
  TermPtr ty = normalize(infer(t.ctx, t.term, sys, fuel), fuel);
  if (ty->tag != TermTag::Sort) {
    if (eta_long_types) ty = eta_long(t.ctx, ty, sys, fuel);
    out.insert(LabeledTerm{t.ctx, ty});
  }
  return out;
}

DescendResult descend_impl(const LabeledTerm& t, const SystemSpec& sys, std::uint64_t fuel,
                           bool eta_long_types) {
  DescendResult out;
  std::map<LabeledTerm, std::set<LabeledTerm>> edges;
  std::deque<LabeledTerm> work{t};
  std::uint64_t budget = fuel;
  while (!work.empty()) {
    if (budget-- == 0) throw FuelExhausted{};
    LabeledTerm cur = work.front();
    work.pop_front();
    if (edges.count(cur)) continue;
    auto preds = predecessors_impl(cur, sys, fuel, eta_long_types);
    edges.emplace(cur, preds);
    for (const auto& p : preds) {
      if (!(p == t)) out.down_set.insert(p);
      if (!edges.count(p)) work.push_back(p);
    }
  }
  // longest chain by memoized depth over the (finite, acyclic) edge map
  std::map<LabeledTerm, std::size_t> depth;
  auto depth_of = [&](auto&& self, const LabeledTerm& u) -> std::size_t {
    if (auto it = depth.find(u); it != depth.end()) return it->second;
    std::size_t best = 0;
    for (const auto& p : edges.at(u)) best = std::max(best, self(self, p) + 1);
    depth.emplace(u, best);
    return best;
  };
  out.max_depth = depth_of(depth_of, t);
  return out;
}

}  // namespace

std::set<LabeledTerm> predecessors(const LabeledTerm& t, const SystemSpec& sys,
                                   std::uint64_t fuel) {
  return predecessors_impl(t, sys, fuel, false);
}

std::set<LabeledTerm> predecessors_prime(const LabeledTerm& t, const SystemSpec& sys,
                                         std::uint64_t fuel) {
  return predecessors_impl(t, sys, fuel, true);
}

DescendResult descend(const LabeledTerm& t, const SystemSpec& sys, std::uint64_t fuel) {
  return descend_impl(t, sys, fuel, false);
}

DescendResult descend_prime(const LabeledTerm& t, const SystemSpec& sys, std::uint64_t fuel) {
  return descend_impl(t, sys, fuel, true);
}

namespace {

struct EtaEnv {
  const SystemSpec& sys;
  std::uint64_t fuel;
  bool certify;
  std::map<LabeledTerm, Measure> mu_memo;
};

Measure mu_of(EtaEnv& env, const Context& ctx, const TermPtr& t) {
  MeasureEnv menv{env.sys, env.fuel, std::move(env.mu_memo)};
  Measure m = measure_rec(menv, ctx, t);
  env.mu_memo = std::move(menv.memo);
  return m;
}

TermPtr eta_long_rec(EtaEnv& env, const Context& ctx, const TermPtr& t) {
  if (env.fuel-- == 0) throw FuelExhausted{};
  switch (t->tag) {
    case TermTag::Abs: {
      TermPtr dom = eta_long_rec(env, ctx, t->left);
      TermPtr body = eta_long_rec(env, ctx.extended(t->hint, t->left), t->right);
      return abs_term(t->hint, dom, body);
    }
    case TermTag::Prod: {
      TermPtr dom = eta_long_rec(env, ctx, t->left);
      TermPtr cod = eta_long_rec(env, ctx.extended(t->hint, t->left), t->right);
      return prod_term(t->hint, dom, cod);
    }
    default:
      break;
  }

  // atomic clause: t = (w c1 ... cp) with normal type (x1:P1)...(xn:Pn)P
  TermPtr ty = normalize(infer(ctx, t, env.sys, env.fuel), env.fuel);
  Telescope tele = split_telescope(ty);
  std::size_t n = tele.domains.size();
  if (t->tag == TermTag::Sort) {
    // a sort's type is a sort, so the telescope is empty and the spine is t
    assert(n == 0);
    return t;
  }

  Spine spine = split_spine(t);
  std::vector<TermPtr> args;
  args.reserve(spine.args.size());
  for (const auto& c : spine.args) args.push_back(eta_long_rec(env, ctx, c));

  Measure mu_t = 0;
  if (env.certify && n > 0) mu_t = mu_of(env, ctx, t);

  std::vector<Context> inner;  // inner[i] = ctx extended by x1..xi
  inner.reserve(n + 1);
  inner.push_back(ctx);
  std::vector<std::string> hints(n);
  std::vector<TermPtr> doms_primed(n);
  std::vector<TermPtr> vars_primed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [hint, dom] = tele.domains[i];
    hints[i] = (hint.empty() || hint == "_") ? "y" : hint;
    doms_primed[i] = eta_long_rec(env, inner[i], dom);
    inner.push_back(inner[i].extended(hints[i], dom));
    if (env.certify) {
      Measure mu_xi = mu_of(env, inner[i + 1], var_term(0));
      if (mu_xi >= mu_t)
        throw std::logic_error("eta_long: measure certificate violated at expansion variable");
    }
    vars_primed[i] = eta_long_rec(env, inner[i + 1], var_term(0));
  }

  TermPtr core = spine.head->tag == TermTag::Var
                     ? var_term(spine.head->index + n)
                     : spine.head;
  for (const auto& c : args) core = app_term(core, shift(c, static_cast<std::int64_t>(n), 0));
  for (std::size_t i = 0; i < n; ++i)
    core = app_term(core, shift(vars_primed[i], static_cast<std::int64_t>(n - i - 1), 0));
  for (std::size_t i = n; i-- > 0;) core = abs_term(hints[i], doms_primed[i], core);
  return core;
}

}  // namespace

TermPtr eta_long(const Context& ctx, const TermPtr& t, const SystemSpec& sys, std::uint64_t fuel,
                 bool certify) {
  require_beta_normal(t);
  EtaEnv env{sys, fuel, certify, {}};
  return eta_long_rec(env, ctx, t);
}

namespace {

struct MEtaEnv {
  const SystemSpec& sys;
  std::uint64_t fuel;
};

struct MSpine {
  MTermPtr head;                // marked variable or sort
  std::vector<MTermPtr> args;   // c1 ... cp
  std::vector<MTermPtr> marks;  // T1 ... Tp (application marks, outermost last)
};

MSpine msplit_spine(const MTermPtr& t) {
  MSpine out;
  std::vector<MTermPtr> args, marks;
  MTermPtr cur = t;
  while (cur->tag == MTag::App) {
    args.push_back(cur->right);
    marks.push_back(cur->mark);
    cur = cur->left;
  }
  out.head = cur;
  out.args.assign(args.rbegin(), args.rend());
  out.marks.assign(marks.rbegin(), marks.rend());
  return out;
}

MTermPtr eta_long_marked_rec(MEtaEnv& env, const MarkedContext& ctx, const MTermPtr& t) {
  if (env.fuel-- == 0) throw FuelExhausted{};
  switch (t->tag) {
    case MTag::Sort:
      return t;
    case MTag::Abs: {
      MTermPtr dom = eta_long_marked_rec(env, ctx, t->left);
      MTermPtr mark = eta_long_marked_rec(env, ctx, t->mark);
      MTermPtr body = eta_long_marked_rec(env, ctx.extended(t->hint, t->left), t->right);
      return mabs_term(t->hint, dom, body, mark);
    }
    case MTag::Prod: {
      MTermPtr dom = eta_long_marked_rec(env, ctx, t->left);
      MTermPtr cod = eta_long_marked_rec(env, ctx.extended(t->hint, t->left), t->right);
      return mprod_term(t->hint, dom, cod);
    }
    default:
      break;
  }

  // atomic clause; the type of a normal marked variable/application is its
  // outermost mark
  MTermPtr ty = t->mark;
  std::vector<std::pair<std::string, MTermPtr>> tele;
  MTermPtr head_ty = ty;
  while (head_ty->tag == MTag::Prod) {
    tele.emplace_back(head_ty->hint, head_ty->left);
    head_ty = head_ty->right;
  }
  std::size_t n = tele.size();

  MSpine spine = msplit_spine(t);

  std::vector<MTermPtr> args_primed, marks_primed;
  for (const auto& c : spine.args) args_primed.push_back(eta_long_marked_rec(env, ctx, c));
  for (const auto& m : spine.marks) marks_primed.push_back(eta_long_marked_rec(env, ctx, m));
  MTermPtr head_mark_primed = eta_long_marked_rec(env, ctx, spine.head->mark);

  std::vector<MarkedContext> inner;
  inner.reserve(n + 1);
  inner.push_back(ctx);
  std::vector<std::string> hints(n);
  std::vector<MTermPtr> doms_primed(n);
  std::vector<MTermPtr> vars_primed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [hint, dom] = tele[i];
    hints[i] = (hint.empty() || hint == "_") ? "y" : hint;
    doms_primed[i] = eta_long_marked_rec(env, inner[i], dom);
    inner.push_back(inner[i].extended(hints[i], dom));
    vars_primed[i] =
        eta_long_marked_rec(env, inner[i + 1], mvar_term(0, shift_marked(dom, 1, 0)));
  }
  MTermPtr head_primed = eta_long_marked_rec(env, inner[n], head_ty);

  // suffix[i] = (x_{i+1}:P'_{i+1})...(x_n:P'_n)P', scoped under x_1..x_i
  std::vector<MTermPtr> suffix(n + 1);
  suffix[n] = head_primed;
  for (std::size_t i = n; i-- > 0;) suffix[i] = mprod_term(hints[i], doms_primed[i], suffix[i + 1]);

  auto up = [&](const MTermPtr& m, std::size_t by) {
    return by == 0 ? m : shift_marked(m, static_cast<std::int64_t>(by), 0);
  };

  MTermPtr core = spine.head->tag == MTag::Var
                      ? mvar_term(spine.head->index + n, up(head_mark_primed, n))
                      : spine.head;
  for (std::size_t i = 0; i < spine.args.size(); ++i)
    core = mapp_term(core, up(args_primed[i], n), up(marks_primed[i], n));
  for (std::size_t i = 0; i < n; ++i)
    core = mapp_term(core, up(vars_primed[i], n - i - 1), up(suffix[i + 1], n - i - 1));
  for (std::size_t i = n; i-- > 0;) core = mabs_term(hints[i], doms_primed[i], core, suffix[i]);
  return core;
}

}  // namespace

MTermPtr eta_long_marked(const MarkedContext& ctx, const MTermPtr& t, const SystemSpec& sys,
                         std::uint64_t fuel) {
  if (!marked_is_normal(t, RedexKind::Beta))
    throw TypeError(TypeErrorKind::NotNormal, {}, "marked term is not beta-normal");
  MEtaEnv env{sys, fuel};
  return eta_long_marked_rec(env, ctx, t);
}

MTermPtr plus_translate(const Context& ctx, const TermPtr& t, const SystemSpec& sys,
                        std::uint64_t fuel) {
  StarResult st = star_translate(ctx, t, sys, fuel);
  return eta_long_marked(st.ctx, st.term, sys, fuel);
}

}  // namespace cube
