#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cube/eta_long.hpp"
#include "cube/properties.hpp"
#include "cube/surface.hpp"

namespace {

using json = nlohmann::json;
using namespace cube;

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitParse = 2;
constexpr int kExitFuel = 3;

struct CommonOpts {
  std::string system = "cc";
  std::string rules;
  std::string context_path;
  std::string term;
  std::string term_file;
  std::uint64_t fuel = kDefaultFuel;
  std::string format = "text";
};

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("CUBE_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return v;
  }
  return kDefaultFuel;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_term = true) {
  opts.fuel = default_fuel();
  cmd->add_option("--system", opts.system, "one of the eight systems, default cc");
  cmd->add_option("--rules", opts.rules, "explicit sort pairs, e.g. PP,PT,TP,TT");
  cmd->add_option("--context", opts.context_path, "context file");
  cmd->add_option("--fuel", opts.fuel, "reduction step budget");
  cmd->add_option("--format", opts.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  if (with_term) {
    cmd->add_option("term", opts.term, "term source text");
    cmd->add_option("--file", opts.term_file, "read the term from a file");
  }
}

SystemSpec system_of(const CommonOpts& opts) {
  if (!opts.rules.empty()) return SystemSpec::from_rules(opts.rules);
  return named_system(opts.system);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Inputs {
  SystemSpec sys;
  Context ctx;
  TermPtr term;
  std::string term_src;
  std::string ctx_src;
};

Inputs load(const CommonOpts& opts, bool need_term = true) {
  Inputs in{system_of(opts), {}, nullptr, {}, {}};
  if (!opts.context_path.empty()) {
    in.ctx_src = slurp(opts.context_path);
    in.ctx = parse_context(in.ctx_src);
  }
  wf_context(in.ctx, in.sys, opts.fuel);
  if (need_term) {
    in.term_src = !opts.term_file.empty() ? slurp(opts.term_file) : opts.term;
    if (in.term_src.empty()) throw std::runtime_error("no term given");
    in.term = parse_term(in.term_src, in.ctx.names());
  }
  return in;
}

json diag_of(const TypeError& e) {
  json d{{"severity", "error"}, {"kind", to_string(e.kind)}, {"message", e.what()}};
  if (!e.path.empty()) d["path"] = e.path;
  if (e.sorts)
    d["sorts"] = {e.sorts->first == SortKind::Prop ? "Prop" : "Type",
                  e.sorts->second == SortKind::Prop ? "Prop" : "Type"};
  return d;
}

void emit(const CommonOpts& opts, const std::string& command, const Inputs* in, json result,
          const json& diagnostics, std::ostream& out) {
  if (opts.format != "structured") return;
  json record{{"command", command},
              {"system", in ? in->sys.display() : opts.system},
              {"input",
               {{"context", in ? json(in->ctx_src) : json(nullptr)},
                {"term", in && !in->term_src.empty() ? json(in->term_src) : json(nullptr)}}},
              {"result", std::move(result)},
              {"diagnostics", diagnostics}};
  out << record.dump() << "\n";
}

int dispatch(const std::string& command, const CommonOpts& opts, bool marked_out, bool plus,
             std::size_t count, std::uint64_t seed) {
  std::ostream& out = std::cout;
  bool structured = opts.format == "structured";
  Inputs in;
  try {
    if (command == "fuzz") {
      SystemSpec sys = system_of(opts);
      PropertyReport report = run_property_suite(sys, count, seed, opts.fuel);
      if (structured) {
        json props = json::array();
        for (const auto& [name, passed] : report.passes)
          props.push_back({{"property", name}, {"passed", passed}, {"cases", report.cases}});
        json fails = json::array();
        for (const auto& f : report.failures)
          fails.push_back({{"property", f.property},
                           {"case", f.case_index},
                           {"detail", f.detail},
                           {"shrunk", f.shrunk}});
        json record{{"command", "fuzz"},
                    {"system", sys.display()},
                    {"input", {{"count", count}, {"seed", seed}}},
                    {"result",
                     {{"cases", report.cases},
                      {"seed", report.seed},
                      {"properties", props},
                      {"failures", fails},
                      {"ok", report.ok()}}},
                    {"diagnostics", json::array()}};
        out << record.dump() << "\n";
      } else {
        write_report(out, report);
      }
      return report.ok() ? kExitOk : kExitSemantic;
    }

    in = load(opts);

    if (command == "check") {
      TermPtr ty = infer(in.ctx, in.term, in.sys, opts.fuel);
      TermPtr norm = normalize(ty, opts.fuel);
      if (structured)
        emit(opts, command, &in,
             json{{"type", print_term(ty, in.ctx)}, {"type_normal", print_term(norm, in.ctx)}},
             json::array(), out);
      else
        out << "type: " << print_term(ty, in.ctx) << "\n"
            << "normal: " << print_term(norm, in.ctx) << "\n";
      return kExitOk;
    }
    if (command == "nf") {
      infer(in.ctx, in.term, in.sys, opts.fuel);
      TermPtr norm = normalize(in.term, opts.fuel);
      if (structured)
        emit(opts, command, &in, json{{"normal", print_term(norm, in.ctx)}}, json::array(), out);
      else
        out << print_term(norm, in.ctx) << "\n";
      return kExitOk;
    }
    if (command == "eta-long") {
      infer(in.ctx, in.term, in.sys, opts.fuel);
      TermPtr norm = normalize(in.term, opts.fuel);
      std::string text;
      if (marked_out) {
        MTermPtr expanded = plus_translate(in.ctx, norm, in.sys, opts.fuel);
        text = print_marked(expanded, star_context(in.ctx, in.sys, opts.fuel));
      } else {
        text = print_term(eta_long(in.ctx, norm, in.sys, opts.fuel), in.ctx);
      }
      if (structured)
        emit(opts, command, &in, json{{"term", text}, {"marked", marked_out}}, json::array(),
             out);
      else
        out << text << "\n";
      return kExitOk;
    }
    if (command == "measure") {
      infer(in.ctx, in.term, in.sys, opts.fuel);
      TermPtr norm = normalize(in.term, opts.fuel);
      Measure mu = measure_unmarked(in.ctx, norm, in.sys, opts.fuel);
      if (structured)
        emit(opts, command, &in, json{{"mu", mu}}, json::array(), out);
      else
        out << mu << "\n";
      return kExitOk;
    }
    if (command == "mark" || command == "contents") {
      infer(in.ctx, in.term, in.sys, opts.fuel);
      MTermPtr image;
      MarkedContext mctx = star_context(in.ctx, in.sys, opts.fuel);
      if (plus)
        image = plus_translate(in.ctx, normalize(in.term, opts.fuel), in.sys, opts.fuel);
      else
        image = star_translate(in.ctx, in.term, in.sys, opts.fuel).term;
      std::string text = command == "mark" ? print_marked(image, mctx)
                                           : print_term(contents(image), in.ctx);
      if (structured)
        emit(opts, command, &in, json{{"term", text}, {"plus", plus}}, json::array(), out);
      else
        out << text << "\n";
      return kExitOk;
    }
    if (command == "descend") {
      infer(in.ctx, in.term, in.sys, opts.fuel);
      TermPtr norm = normalize(in.term, opts.fuel);
      LabeledTerm root{in.ctx, norm};
      DescendResult d = descend(root, in.sys, opts.fuel);
      // verify the measure decreases along every edge of the closure
      std::size_t edges = 0;
      std::vector<LabeledTerm> nodes{root};
      nodes.insert(nodes.end(), d.down_set.begin(), d.down_set.end());
      for (const auto& node : nodes) {
        Measure mu_node = measure_unmarked(node.ctx, node.term, in.sys, opts.fuel);
        for (const auto& p : predecessors(node, in.sys, opts.fuel)) {
          ++edges;
          Measure mu_p = measure_unmarked(p.ctx, p.term, in.sys, opts.fuel);
          if (mu_p >= mu_node)
            throw std::runtime_error("mu-descent violated at " + print_term(p.term, p.ctx));
        }
      }
      if (structured) {
        json members = json::array();
        for (const auto& m : d.down_set) members.push_back(print_term(m.term, m.ctx));
        emit(opts, command, &in,
             json{{"down_set", members},
                  {"size", d.down_set.size()},
                  {"depth", d.max_depth},
                  {"mu_descent", true},
                  {"edges", edges}},
             json::array(), out);
      } else {
        out << "down-set (" << d.down_set.size() << "):\n";
        for (const auto& m : d.down_set) out << "  " << print_term(m.term, m.ctx) << "\n";
        out << "depth: " << d.max_depth << "\n";
        out << "mu-descent: ok (" << edges << " edges)\n";
      }
      return kExitOk;
    }
    throw std::runtime_error("unknown command " + command);
  } catch (const ParseError& e) {
    if (structured)
      emit(opts, command, nullptr, nullptr,
           json::array({{{"severity", "error"}, {"kind", "ParseError"}, {"message", e.what()}}}),
           out);
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FuelExhausted& e) {
    if (structured)
      emit(opts, command, nullptr, nullptr,
           json::array(
               {{{"severity", "error"}, {"kind", "FuelExhausted"}, {"message", e.what()}}}),
           out);
    std::cerr << "fuel exhausted\n";
    return kExitFuel;
  } catch (const TypeError& e) {
    if (structured) emit(opts, command, nullptr, nullptr, json::array({diag_of(e)}), out);
    std::cerr << "type error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const std::exception& e) {
    if (structured)
      emit(opts, command, nullptr, nullptr,
           json::array({{{"severity", "error"}, {"kind", "Error"}, {"message", e.what()}}}),
           out);
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lambda-cube kernel: eight type systems, beta-eta reduction, marked terms, eta-long "
      "forms"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd = nullptr;
    CommonOpts opts;
    bool marked = false;
    bool plus = false;
    std::size_t count = 100;
    std::uint64_t seed = 1;
  };
  std::vector<std::unique_ptr<Sub>> subs;

  auto add = [&](const std::string& name, const std::string& help, bool with_term) -> Sub& {
    auto sub = std::make_unique<Sub>();
    sub->cmd = app.add_subcommand(name, help);
    add_common(sub->cmd, sub->opts, with_term);
    subs.push_back(std::move(sub));
    return *subs.back();
  };

  add("check", "infer the type of a term", true);
  add("nf", "beta-eta-normal form", true);
  {
    Sub& s = add("eta-long", "eta-long form of the normal form", true);
    s.cmd->add_flag("--marked", s.marked, "print the marked eta-long translation t+");
  }
  {
    Sub& s = add("mark", "the marked translation t*", true);
    s.cmd->add_flag("--plus", s.plus, "print t+ instead of t*");
  }
  {
    Sub& s = add("contents", "contents of the marked translation", true);
    s.cmd->add_flag("--plus", s.plus, "use t+ instead of t*");
  }
  add("measure", "the measure mu of the normal form", true);
  add("descend", "down-set of the order generated by subterms and normal types", true);
  {
    Sub& s = add("fuzz", "generate well-typed terms and run the property suite", false);
    s.cmd->add_option("--count", s.count, "number of generated cases");
    s.cmd->add_option("--seed", s.seed, "generator seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  for (const auto& sub : subs)
    if (sub->cmd->parsed())
      return dispatch(sub->cmd->get_name(), sub->opts, sub->marked, sub->plus, sub->count,
                      sub->seed);
  return kExitParse;
}
