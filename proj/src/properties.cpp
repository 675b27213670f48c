#include "cube/properties.hpp"

#include <deque>
#include <ostream>
#include <sstream>

#include "cube/surface.hpp"

namespace cube {

FuzzCase make_case(const TermGen::Sample& raw, const SystemSpec& sys, std::uint64_t fuel) {
  FuzzCase out{raw.ctx, raw.term, raw.type, nullptr, nullptr};
  out.normal_term = normalize(raw.term, fuel);
  out.normal_type = infer(raw.ctx, out.normal_term, sys, fuel);
  return out;
}

namespace {

std::string show(const FuzzCase& c, const TermPtr& t) { return print_term(t, c.ctx); }

std::string show_case(const FuzzCase& c) {
  return print_context(c.ctx) + " |- " + print_term(c.term, c.ctx);
}

}  // namespace

std::optional<std::string> check_subject_reduction(const FuzzCase& c, const SystemSpec& sys,
                                                   std::uint64_t fuel) {
  TermPtr ty = c.type;
  for (const auto& r : reducts(c.term)) {
    try {
      check(c.ctx, r.term, ty, sys, fuel);
    } catch (const TypeError& e) {
      return "one-step reduct " + show(c, r.term) + " lost its type: " + e.what();
    }
  }
  TermPtr cur = c.term;
  std::uint64_t steps = fuel;
  while (auto s = step(cur)) {
    if (steps-- == 0) throw FuelExhausted{};
    cur = s->term;
    try {
      check(c.ctx, cur, ty, sys, fuel);
    } catch (const TypeError& e) {
      return "reduct " + show(c, cur) + " lost its type: " + e.what();
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_type_uniqueness(const FuzzCase& c, const SystemSpec& sys,
                                                 std::uint64_t fuel) {
  for (const auto& r : reducts(c.term)) {
    TermPtr other = infer(c.ctx, r.term, sys, fuel);
    if (!convertible(other, c.type, fuel))
      return "reduct type " + show(c, other) + " not convertible to " + show(c, c.type);
  }
  return std::nullopt;
}

std::optional<std::string> check_confluence(const FuzzCase& c, const SystemSpec& sys,
                                            std::uint64_t fuel) {
  (void)sys;
  auto rs = reducts(c.term);
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      TermPtr a = normalize(rs[i].term, fuel);
      TermPtr b = normalize(rs[j].term, fuel);
      if (!term_eq(a, b))
        return "divergent reducts do not join: " + show(c, rs[i].term) + " vs " +
               show(c, rs[j].term);
    }
  return std::nullopt;
}

std::optional<std::string> check_marked_subject_reduction(const FuzzCase& c,
                                                          const SystemSpec& sys,
                                                          std::uint64_t fuel) {
  StarResult an = annotate_term(c.ctx, c.term, sys, fuel);
  MTermPtr ty = marked_infer(an.ctx, an.term, sys, fuel);
  for (RedexKind kind : {RedexKind::Beta, RedexKind::Eta}) {
    for (const auto& r : marked_reducts(an.term, kind)) {
      try {
        MTermPtr ty2 = marked_infer(an.ctx, r.term, sys, fuel);
        if (!marked_convertible(ty2, ty, fuel))
          return "marked reduct changed type: " + print_marked(r.term, an.ctx);
      } catch (const TypeError& e) {
        return std::string("marked reduct lost its type (") +
               (kind == RedexKind::Beta ? "beta" : "eta") + "): " + e.what();
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_contents_morphism(const FuzzCase& c, const SystemSpec& sys,
                                                   std::uint64_t fuel) {
  StarResult an = annotate_term(c.ctx, c.term, sys, fuel);
  TermPtr base = contents(an.term);
  auto unmarked = reducts(base);
  for (const auto& r : marked_reducts(an.term)) {
    TermPtr after = contents(r.term);
    if (term_eq(after, base)) continue;
    bool one_step = false;
    for (const auto& u : unmarked)
      if (term_eq(u.term, after)) {
        one_step = true;
        break;
      }
    if (!one_step)
      return "contents of a marked step is neither equal nor one step: " + show(c, after);
  }
  return std::nullopt;
}

std::optional<std::string> check_beta_lifting(const FuzzCase& c, const SystemSpec& sys,
                                              std::uint64_t fuel) {
  StarResult an = annotate_term(c.ctx, c.term, sys, fuel);
  TermPtr base = contents(an.term);
  auto marked = marked_reducts(an.term, RedexKind::Beta);
  for (const auto& u : reducts(base, RedexKind::Beta)) {
    bool lifted = false;
    for (const auto& m : marked)
      if (term_eq(contents(m.term), u.term)) {
        lifted = true;
        break;
      }
    if (!lifted)
      return "contents beta step to " + show(c, u.term) + " has no marked beta lift";
  }
  return std::nullopt;
}

std::optional<std::string> check_toto_injectivity(const FuzzCase& c, const SystemSpec& sys,
                                                  std::uint64_t fuel) {
  // two normal marked terms with the same contents, built along different
  // routes: the star of the normal subject, and the marked normal form of the
  // unnormalized annotation of the raw subject
  StarResult st = star_translate(c.ctx, c.normal_term, sys, fuel);
  StarResult an = annotate_term(c.ctx, c.term, sys, fuel);
  MTermPtr other = marked_normalize(an.term, fuel);
  if (!mterm_eq(st.term, other))
    return "two normal marked forms with equal contents differ:\n  " +
           print_marked(st.term, st.ctx) + "\n  " + print_marked(other, an.ctx);
  return std::nullopt;
}

std::optional<std::string> check_star_round_trip(const FuzzCase& c, const SystemSpec& sys,
                                                 std::uint64_t fuel) {
  StarResult st = star_translate(c.ctx, c.normal_term, sys, fuel);
  if (!term_eq(contents(st.term), c.normal_term))
    return "contents of the star image is not the subject: " + show(c, contents(st.term));
  if (!marked_is_normal(st.term))
    return "star image is not marked-normal: " + print_marked(st.term, st.ctx);
  if (!marked_is_normal(st.type))
    return "star type is not marked-normal: " + print_marked(st.type, st.ctx);
  MTermPtr ty = marked_infer(st.ctx, st.term, sys, fuel);
  if (!marked_convertible(ty, st.type, fuel))
    return "star image re-checks at a different type";
  return std::nullopt;
}

std::optional<std::string> check_eta_long_laws(const FuzzCase& c, const SystemSpec& sys,
                                               std::uint64_t fuel) {
  TermPtr e;
  try {
    e = eta_long(c.ctx, c.normal_term, sys, fuel, /*certify=*/true);
  } catch (const std::logic_error& err) {
    return std::string("eta_long certificate: ") + err.what();
  }
  if (!is_normal(e, RedexKind::Beta)) return "eta-long form has a beta redex: " + show(c, e);
  if (!term_eq(normalize(e, fuel), c.normal_term))
    return "eta-long form does not normalize back: " + show(c, e);
  TermPtr again = eta_long(c.ctx, e, sys, fuel);
  if (!term_eq(again, e)) return "eta_long is not idempotent on " + show(c, e);
  try {
    check(c.ctx, e, normalize(c.normal_type, fuel), sys, fuel);
  } catch (const TypeError& err) {
    return std::string("eta-long form does not re-check: ") + err.what();
  }
  return std::nullopt;
}

std::optional<std::string> check_mu_descent(const FuzzCase& c, const SystemSpec& sys,
                                            std::uint64_t fuel) {
  LabeledTerm root{c.ctx, c.normal_term};
  DescendResult d = descend(root, sys, fuel);
  std::vector<LabeledTerm> nodes{root};
  nodes.insert(nodes.end(), d.down_set.begin(), d.down_set.end());
  for (const auto& node : nodes) {
    Measure mu_node = measure_unmarked(node.ctx, node.term, sys, fuel);
    for (const auto& p : predecessors(node, sys, fuel)) {
      Measure mu_p = measure_unmarked(p.ctx, p.term, sys, fuel);
      if (mu_p >= mu_node)
        return "mu does not decrease: mu(" + print_term(p.term, p.ctx) +
               ") = " + std::to_string(mu_p) + " >= mu(" + print_term(node.term, node.ctx) +
               ") = " + std::to_string(mu_node);
    }
  }
  descend_prime(root, sys, fuel);  // termination of the <' variant
  return std::nullopt;
}

std::optional<std::string> check_star_embedding(const FuzzCase& c, const SystemSpec& sys,
                                                std::uint64_t fuel) {
  LabeledTerm root{c.ctx, c.normal_term};
  StarResult whole = star_translate(c.ctx, c.normal_term, sys, fuel);
  for (const auto& p : predecessors(root, sys, fuel)) {
    StarResult part = star_translate(p.ctx, p.term, sys, fuel);
    if (!is_strict_marked_subterm(part.term, whole.term))
      return "star image of " + print_term(p.term, p.ctx) + " is not a strict subterm of " +
             print_marked(whole.term, whole.ctx);
  }
  return std::nullopt;
}

std::optional<std::string> check_plus_embedding(const FuzzCase& c, const SystemSpec& sys,
                                                std::uint64_t fuel) {
  LabeledTerm root{c.ctx, c.normal_term};
  MTermPtr whole = plus_translate(c.ctx, c.normal_term, sys, fuel);
  for (const auto& p : predecessors_prime(root, sys, fuel)) {
    MTermPtr part = plus_translate(p.ctx, p.term, sys, fuel);
    if (!is_strict_marked_subterm(part, whole))
      return "plus image of " + print_term(p.term, p.ctx) + " is not a strict subterm";
  }
  return std::nullopt;
}

std::optional<std::string> check_eta_long_commutes(const FuzzCase& c, const SystemSpec& sys,
                                                   std::uint64_t fuel) {
  StarResult st = star_translate(c.ctx, c.normal_term, sys, fuel);
  MTermPtr marked_long = eta_long_marked(st.ctx, st.term, sys, fuel);
  TermPtr via_marked = contents(marked_long);
  TermPtr via_unmarked = eta_long(contents_context(st.ctx), contents(st.term), sys, fuel);
  if (!term_eq(via_marked, via_unmarked))
    return "contents . eta_long_marked != eta_long . contents:\n  " + show(c, via_marked) +
           "\n  " + show(c, via_unmarked);
  return std::nullopt;
}

bool reachable_by_reduction(const TermPtr& from, const TermPtr& to, std::size_t bound) {
  if (term_eq(from, to)) return false;  // at least one step required
  std::deque<TermPtr> queue{from};
  std::set<std::string> seen;
  std::size_t limit = std::max(term_size(from), term_size(to)) + 16;
  std::size_t expanded = 0;
  while (!queue.empty() && expanded < bound) {
    TermPtr cur = queue.front();
    queue.pop_front();
    ++expanded;
    for (const auto& r : reducts(cur)) {
      if (term_eq(r.term, to)) return true;
      if (term_size(r.term) > limit) continue;
      std::string key = print_term(r.term);
      if (seen.insert(std::move(key)).second) queue.push_back(r.term);
    }
  }
  return false;
}

std::optional<std::string> check_encoding_lemmas(const FuzzCase& c, const SystemSpec& sys,
                                                 std::uint64_t fuel) {
  StarResult an = annotate_term(c.ctx, c.term, sys, fuel);
  std::size_t o = an.ctx.size();
  TermPtr enc = encode_circ(an.term, o);

  // FV(t o) is contained in FV(t) + {o}
  {
    std::set<std::size_t> allowed;
    for (std::size_t i = 0; i < an.ctx.size(); ++i)
      if (occurs_free_marked(an.term, i)) allowed.insert(i);
    allowed.insert(o);
    for (std::size_t idx : free_indices(enc))
      if (!allowed.count(idx))
        return "encoding freed a variable: index " + std::to_string(idx);
  }

  // substitution commutation, with the innermost context entry substituted by
  // a generated inhabitant when one exists
  if (!c.ctx.empty() && occurs_free_marked(an.term, 0)) {
    TermPtr ety = c.ctx.lookup(0);
    TermGen gen(sys, 17, fuel);
    Context outer = c.ctx.prefix(c.ctx.size() - 1);
    // cheap search: an exact variable of the entry's type in the outer prefix
    TermPtr inhabitant;
    TermPtr target = normalize(shift(ety, -1, 0), fuel);
    for (std::size_t i = 0; i < outer.size() && !inhabitant; ++i)
      if (term_eq(normalize(outer.lookup(i), fuel), target)) inhabitant = var_term(i);
    if (inhabitant) {
      StarResult bst = annotate_term(outer, inhabitant, sys, fuel);
      TermPtr lhs = subst(enc, 0, encode_circ(bst.term, outer.size()));
      TermPtr rhs = encode_circ(subst_marked(an.term, 0, bst.term), outer.size());
      if (!term_eq(normalize(lhs, fuel), normalize(rhs, fuel)))
        return "encoding does not commute with substitution";
    }
  }

  // one-step simulation within a bounded search
  for (const auto& r : marked_reducts(an.term)) {
    TermPtr enc_after = encode_circ(r.term, o);
    if (!reachable_by_reduction(enc, enc_after, 500))
      return "no encoded reduction path found within 500 expansions for step to " +
             print_marked(r.term, an.ctx);
  }

  // circ-encoded judgement holds in the Calculus of Constructions
  {
    SystemSpec cc = named_system("cc");
    Context cctx = circ_context(an.ctx);
    MTermPtr mty = marked_infer(an.ctx, an.term, sys, fuel);
    TermPtr want = encode_circ(mty, o);
    try {
      TermPtr got = infer(cctx, enc, cc, fuel);
      if (!convertible(got, want, fuel))
        return "encoded judgement types differently: " + print_term(got, cctx) + " vs " +
               print_term(want, cctx);
    } catch (const TypeError& e) {
      return std::string("encoded term does not typecheck in cc: ") + e.what();
    }
  }
  return std::nullopt;
}

const std::vector<NamedChecker>& registered_checkers() {
  static const std::vector<NamedChecker> checkers = {
      {"subject-reduction", check_subject_reduction},
      {"type-uniqueness", check_type_uniqueness},
      {"confluence-join", check_confluence},
      {"marked-subject-reduction", check_marked_subject_reduction},
      {"contents-morphism", check_contents_morphism},
      {"beta-lifting", check_beta_lifting},
      {"toto-injectivity", check_toto_injectivity},
      {"star-round-trip", check_star_round_trip},
      {"eta-long-laws", check_eta_long_laws},
      {"mu-descent", check_mu_descent},
      {"star-embedding", check_star_embedding},
  };
  return checkers;
}

namespace {

// smallest well-typed strict
// subterm on which the checker still fails, if any
std::string shrink(const FuzzCase& failing, const NamedChecker& checker, const SystemSpec& sys,
                   std::uint64_t fuel) {
  std::vector<LabeledTerm> candidates;
  for (const auto& sub : strict_subterms(LabeledTerm{failing.ctx, failing.term}))
    candidates.push_back(sub);
  std::sort(candidates.begin(), candidates.end(),
            [](const LabeledTerm& a, const LabeledTerm& b) {
              return term_size(a.term) < term_size(b.term);
            });
  std::size_t checked = 0;
  for (const auto& cand : candidates) {
    if (checked++ > 50) break;
    try {
      TermPtr ty = infer(cand.ctx, cand.term, sys, fuel);
      FuzzCase sub{cand.ctx, cand.term, ty, nullptr, nullptr};
      sub.normal_term = normalize(cand.term, fuel);
      sub.normal_type = infer(cand.ctx, sub.normal_term, sys, fuel);
      if (checker.run(sub, sys, fuel))
        return print_context(cand.ctx) + " |- " + print_term(cand.term, cand.ctx);
    } catch (...) {
      continue;
    }
  }
  return {};
}

}  // namespace

PropertyReport run_property_suite(const SystemSpec& sys, std::size_t count, std::uint64_t seed,
                                  std::uint64_t fuel, int budget) {
  PropertyReport report;
  report.system = sys.display();
  report.cases = count;
  report.seed = seed;
  TermGen gen(sys, seed, fuel);
  std::vector<FuzzCase> cases;
  cases.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    cases.push_back(make_case(gen.well_typed(budget), sys, fuel));
  for (const auto& checker : registered_checkers()) {
    std::size_t passed = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      std::optional<std::string> failure;
      try {
        failure = checker.run(cases[i], sys, fuel);
      } catch (const std::exception& e) {
        failure = std::string("exception: ") + e.what();
      }
      if (!failure) {
        ++passed;
        continue;
      }
      PropertyFailure f;
      f.property = checker.name;
      f.case_index = i;
      f.detail = *failure + "\n      case: " + show_case(cases[i]);
      f.shrunk = shrink(cases[i], checker, sys, fuel);
      report.failures.push_back(std::move(f));
    }
    report.passes.emplace_back(checker.name, passed);
  }
  return report;
}

void write_report(std::ostream& out, const PropertyReport& report) {
  out << "fuzz: system=" << report.system << " cases=" << report.cases
      << " seed=" << report.seed << "\n";
  for (const auto& [name, passed] : report.passes) {
    out << "  " << name;
    for (std::size_t i = name.size(); i < 28; ++i) out << ' ';
    out << passed << "/" << report.cases << "\n";
  }
  for (const auto& f : report.failures) {
    out << "  FAIL " << f.property << " case " << f.case_index << ": " << f.detail << "\n";
    if (!f.shrunk.empty()) out << "      shrunk: " << f.shrunk << "\n";
  }
  out << "result: " << (report.ok() ? "PASS" : "FAIL") << " (" << report.passes.size()
      << " properties, " << report.cases << " cases)\n";
}

}  // namespace cube
