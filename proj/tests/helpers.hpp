#pragma once

#include <deque>
#include <random>
#include <set>

#include "cube/eta_long.hpp"
#include "cube/surface.hpp"

namespace cube::testing {

inline Context g0() { return parse_context("P : Prop; f : P -> P; a : P"); }

inline TermPtr pt(const std::string& src, const Context& ctx = {}) {
  return parse_term(src, ctx.names());
}

// The running counterexample: a marked term that is eta-normal although its
// contents is an eta-redex; one beta step inside the mark of y exposes the
// eta-redex, which then contracts to y with the arrow mark.
struct MarkedCounterexample {
  Context ctx;               // [T:Prop; y:T->T]
  MarkedContext mctx;
  MTermPtr term;             // ([x:T^Prop](y^M x^(T^Prop))^(T^Prop))^(T^Prop -> T^Prop)
  MTermPtr after_beta;       // mark M reduced to T^Prop -> T^Prop
  MTermPtr after_eta;        // y^(T^Prop -> T^Prop)
};

inline MarkedCounterexample marked_counterexample() {
  MarkedCounterexample out;
  out.ctx = parse_context("T : Prop; y : T -> T");
  out.mctx = star_context(out.ctx, named_system("cc"));

  auto tp = [](std::size_t i) { return mvar_term(i, mprop_term()); };  // T^Prop at index i

  // at depth 1 under [x:...]: x = 0, y = 1, T = 2
  MTermPtr inner_abs = mabs_term(
      "z", tp(2),
      mprod_term("_", tp(3), tp(4)),          // T^Prop -> T^Prop at depth 2
      mprod_term("_", tp(2), mprop_term()));  // mark: T^Prop -> Prop at depth 1
  MTermPtr big_mark = mapp_term(inner_abs, mvar_term(0, tp(2)), mprop_term());
  MTermPtr body = mapp_term(mvar_term(1, big_mark), mvar_term(0, tp(2)), tp(2));
  out.term = mabs_term("x", tp(1), body, mprod_term("_", tp(1), tp(2)));

  MTermPtr reduced_mark = mprod_term("_", tp(2), tp(3));
  MTermPtr body2 = mapp_term(mvar_term(1, reduced_mark), mvar_term(0, tp(2)), tp(2));
  out.after_beta = mabs_term("x", tp(1), body2, mprod_term("_", tp(1), tp(2)));

  out.after_eta = mvar_term(0, mprod_term("_", tp(1), tp(2)));
  return out;
}

// --- deterministic raw-term generator (scoped but not necessarily typed) ---

class RawGen {
 public:
  explicit RawGen(std::uint64_t seed) : rng_(seed) {}

  TermPtr term(std::size_t depth, int budget) {
    switch (rng_() % (budget <= 0 ? 2u : 5u)) {
      case 0:
        return rng_() % 4 == 0 ? type_term() : prop_term();
      case 1:
        return depth == 0 ? prop_term() : var_term(rng_() % depth);
      case 2:
        return app_term(term(depth, budget - 1), term(depth, budget - 1));
      case 3:
        return abs_term("v", term(depth, budget - 1), term(depth + 1, budget - 1));
      default:
        return prod_term("v", term(depth, budget - 1), term(depth + 1, budget - 1));
    }
  }

 private:
  std::mt19937_64 rng_;
};

// --- independent oracle: substitution on named terms with explicit renaming ---

struct NTerm;
using NPtr = std::shared_ptr<const NTerm>;

struct NTerm {
  TermTag tag = TermTag::Sort;
  SortKind sort = SortKind::Prop;
  std::string name;  // Var reference or binder name
  NPtr left, right;
};

inline NPtr nsort(SortKind s) { return std::make_shared<NTerm>(NTerm{TermTag::Sort, s, {}, nullptr, nullptr}); }
inline NPtr nvar(std::string n) { return std::make_shared<NTerm>(NTerm{TermTag::Var, SortKind::Prop, std::move(n), nullptr, nullptr}); }
inline NPtr napp(NPtr f, NPtr a) { return std::make_shared<NTerm>(NTerm{TermTag::App, SortKind::Prop, {}, std::move(f), std::move(a)}); }
inline NPtr nbind(TermTag tag, std::string n, NPtr d, NPtr b) {
  return std::make_shared<NTerm>(NTerm{tag, SortKind::Prop, std::move(n), std::move(d), std::move(b)});
}

inline NPtr to_named(const TermPtr& t, std::vector<std::string> env, int& fresh) {
  switch (t->tag) {
    case TermTag::Sort: return nsort(t->sort);
    case TermTag::Var: return nvar(env[env.size() - 1 - t->index]);
    case TermTag::App: return napp(to_named(t->left, env, fresh), to_named(t->right, env, fresh));
    case TermTag::Abs:
    case TermTag::Prod: {
      std::string name = "n" + std::to_string(fresh++);
      NPtr dom = to_named(t->left, env, fresh);
      env.push_back(name);
      NPtr body = to_named(t->right, env, fresh);
      return nbind(t->tag, name, dom, body);
    }
  }
  return nullptr;
}

inline void nfree(const NPtr& t, std::set<std::string>& out) {
  switch (t->tag) {
    case TermTag::Sort: return;
    case TermTag::Var: out.insert(t->name); return;
    case TermTag::App:
      nfree(t->left, out);
      nfree(t->right, out);
      return;
    case TermTag::Abs:
    case TermTag::Prod: {
      nfree(t->left, out);
      std::set<std::string> body;
      nfree(t->right, body);
      body.erase(t->name);
      out.insert(body.begin(), body.end());
      return;
    }
  }
}

inline NPtr nrename(const NPtr& t, const std::string& from, const std::string& to) {
  switch (t->tag) {
    case TermTag::Sort: return t;
    case TermTag::Var: return t->name == from ? nvar(to) : t;
    case TermTag::App: return napp(nrename(t->left, from, to), nrename(t->right, from, to));
    case TermTag::Abs:
    case TermTag::Prod: {
      NPtr dom = nrename(t->left, from, to);
      if (t->name == from) return nbind(t->tag, t->name, dom, t->right);
      return nbind(t->tag, t->name, dom, nrename(t->right, from, to));
    }
  }
  return t;
}

inline NPtr nsubst(const NPtr& t, const std::string& x, const NPtr& u, int& fresh) {
  switch (t->tag) {
    case TermTag::Sort: return t;
    case TermTag::Var: return t->name == x ? u : t;
    case TermTag::App:
      return napp(nsubst(t->left, x, u, fresh), nsubst(t->right, x, u, fresh));
    case TermTag::Abs:
    case TermTag::Prod: {
      NPtr dom = nsubst(t->left, x, u, fresh);
      if (t->name == x) return nbind(t->tag, t->name, dom, t->right);
      std::set<std::string> fv;
      nfree(u, fv);
      if (fv.count(t->name)) {
        std::string renamed = "r" + std::to_string(fresh++);
        NPtr body = nrename(t->right, t->name, renamed);
        return nbind(t->tag, renamed, dom, nsubst(body, x, u, fresh));
      }
      return nbind(t->tag, t->name, dom, nsubst(t->right, x, u, fresh));
    }
  }
  return t;
}

inline TermPtr from_named(const NPtr& t, std::vector<std::string> env) {
  switch (t->tag) {
    case TermTag::Sort: return sort_term(t->sort);
    case TermTag::Var: {
      for (std::size_t i = env.size(); i-- > 0;)
        if (env[i] == t->name) return var_term(env.size() - 1 - i);
      throw std::logic_error("from_named: unbound " + t->name);
    }
    case TermTag::App:
      return app_term(from_named(t->left, env), from_named(t->right, env));
    case TermTag::Abs:
    case TermTag::Prod: {
      TermPtr dom = from_named(t->left, env);
      env.push_back(t->name);
      return t->tag == TermTag::Abs ? abs_term(t->name, dom, from_named(t->right, env))
                                    : prod_term(t->name, dom, from_named(t->right, env));
    }
  }
  return nullptr;
}

// --- exhaustive reduction graph (small terms only) ---

struct ReductionGraph {
  std::set<std::string> normal_forms;  // printed, for set semantics
  TermPtr some_normal;
  bool exhausted = true;
};

inline ReductionGraph explore_reduction_graph(const TermPtr& root, std::size_t max_states = 4000) {
  ReductionGraph out;
  std::deque<TermPtr> work{root};
  std::set<std::string> seen{print_term(root)};
  std::size_t states = 0;
  while (!work.empty()) {
    if (++states > max_states) {
      out.exhausted = false;
      break;
    }
    TermPtr cur = work.front();
    work.pop_front();
    auto rs = reducts(cur);
    if (rs.empty()) {
      out.normal_forms.insert(print_term(cur));
      out.some_normal = cur;
      continue;
    }
    for (const auto& r : rs)
      if (seen.insert(print_term(r.term)).second) work.push_back(r.term);
  }
  return out;
}

}  // namespace cube::testing
