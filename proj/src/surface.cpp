#include "cube/surface.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace cube {

ParseError::ParseError(SourceSpan s, const std::string& message, std::string expect)
    : std::runtime_error(message + " at line " + std::to_string(s.line) + ", column " +
                         std::to_string(s.column)),
      span(s),
      expected(std::move(expect)) {}

namespace {

enum class Tok { LBrack, RBrack, LParen, RParen, Colon, Arrow, Ident, Prop, Type, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceSpan span = here();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", span});
        return out;
      }
      char c = src_[pos_];
      if (c == '[') { out.push_back(take(Tok::LBrack, 1)); continue; }
      if (c == ']') { out.push_back(take(Tok::RBrack, 1)); continue; }
      if (c == '(') { out.push_back(take(Tok::LParen, 1)); continue; }
      if (c == ')') { out.push_back(take(Tok::RParen, 1)); continue; }
      if (c == ':') { out.push_back(take(Tok::Colon, 1)); continue; }
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        out.push_back(take(Tok::Arrow, 2));
        continue;
      }
      if (is_ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        std::string text(src_.substr(start, pos_ - start));
        span.end = pos_;
        Tok kind = text == "Prop" ? Tok::Prop : text == "Type" ? Tok::Type : Tok::Ident;
        out.push_back({kind, std::move(text), span});
        continue;
      }
      throw ParseError(span, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  SourceSpan here() const { return {pos_, pos_, line_, col_}; }

  Token take(Tok kind, std::size_t len) {
    SourceSpan span = here();
    std::string text(src_.substr(pos_, len));
    for (std::size_t i = 0; i < len; ++i) advance();
    span.end = pos_;
    return {kind, std::move(text), span};
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<std::string> scope)
      : toks_(std::move(tokens)), scope_(std::move(scope)) {}

  TermPtr parse() {
    TermPtr t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) throw ParseError(peek().span, "expected " + what, what);
    return next();
  }

  TermPtr term() {
    if (at(Tok::LBrack)) {
      next();
      std::string name = expect(Tok::Ident, "binder name").text;
      expect(Tok::Colon, "':'");
      TermPtr dom = term();
      expect(Tok::RBrack, "']'");
      scope_.push_back(name);
      TermPtr body = term();
      scope_.pop_back();
      return abs_term(std::move(name), std::move(dom), std::move(body));
    }
    if (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      next();
      std::string name = next().text;
      next();  // colon
      TermPtr dom = term();
      expect(Tok::RParen, "')'");
      scope_.push_back(name);
      TermPtr cod = term();
      scope_.pop_back();
      return prod_term(std::move(name), std::move(dom), std::move(cod));
    }
    TermPtr lhs = app();
    if (at(Tok::Arrow)) {
      next();
      TermPtr rhs = term();
      return prod_term("_", lhs, shift(rhs, 1, 0));
    }
    return lhs;
  }

  bool at_atom() const {
    switch (peek().kind) {
      case Tok::Prop:
      case Tok::Type:
      case Tok::Ident:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  TermPtr app() {
    TermPtr t = atom();
    while (at_atom()) {
      // '(' name ':' starts a product, not an argument
      if (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) break;
      t = app_term(std::move(t), atom());
    }
    return t;
  }

  TermPtr atom() {
    switch (peek().kind) {
      case Tok::Prop:
        next();
        return prop_term();
      case Tok::Type:
        next();
        return type_term();
      case Tok::Ident: {
        Token tok = next();
        for (std::size_t i = scope_.size(); i-- > 0;)
          if (scope_[i] == tok.text) return var_term(scope_.size() - 1 - i);
        throw ParseError(tok.span, "unbound identifier '" + tok.text + "'");
      }
      case Tok::LParen: {
        next();
        TermPtr t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      default:
        throw ParseError(peek().span, "expected a term", "term");
    }
  }

  std::vector<Token> toks_;
  std::vector<std::string> scope_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_term(std::string_view src, const std::vector<std::string>& context_names) {
  Parser parser(Lexer(src).run(), context_names);
  return parser.parse();
}

Context parse_context(std::string_view src) {
  Context ctx;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view entry = src.substr(start, end - start);
    std::size_t a = entry.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return;
    std::size_t b = entry.find_last_not_of(" \t\r");
    entry = entry.substr(a, b - a + 1);
    std::size_t colon = entry.find(':');
    if (colon == std::string_view::npos)
      throw ParseError({start, end, 1, start + 1}, "context entry needs 'name : type'");
    std::string name(entry.substr(0, colon));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    if (name.empty()) throw ParseError({start, end, 1, start + 1}, "empty context entry name");
    TermPtr type = parse_term(entry.substr(colon + 1), ctx.names());
    ctx.push(std::move(name), std::move(type));
  };
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == ';' || src[i] == '\n') {
      flush(i);
      start = i + 1;
    }
  }
  flush(src.size());
  return ctx;
}

namespace {

// Binder names never shadow a name some free variable of the subterm prints
// as; sorts are reserved words.
std::string pick_name(const std::string& hint, bool used, const TermPtr& under,
                      const std::vector<std::string>& names) {
  std::string base = (!hint.empty() && hint != "_") ? hint : (used ? "x" : "_");
  if (base == "_") return base;
  std::vector<std::string> forbidden = {"Prop", "Type"};
  for (std::size_t idx : free_indices(under)) {
    if (idx == 0) continue;  // the binder itself
    std::size_t outer = idx - 1;
    if (outer < names.size()) forbidden.push_back(names[names.size() - 1 - outer]);
  }
  std::string candidate = base;
  while (std::find(forbidden.begin(), forbidden.end(), candidate) != forbidden.end())
    candidate += '\'';
  return candidate;
}

std::string var_name(std::size_t index, const std::vector<std::string>& names) {
  if (index < names.size()) return names[names.size() - 1 - index];
  return "#" + std::to_string(index);  // unbound; display only
}

void print_rec(const TermPtr& t, std::vector<std::string>& names, std::string& out);

// arguments and arrow left-hand sides: wrap anything that is not already
// self-delimiting
void print_closed(const TermPtr& t, std::vector<std::string>& names, std::string& out) {
  switch (t->tag) {
    case TermTag::Sort:
    case TermTag::Var:
    case TermTag::App:
      print_rec(t, names, out);
      return;
    default:
      out += '(';
      print_rec(t, names, out);
      out += ')';
      return;
  }
}

void print_rec(const TermPtr& t, std::vector<std::string>& names, std::string& out) {
  switch (t->tag) {
    case TermTag::Sort:
      out += t->sort == SortKind::Prop ? "Prop" : "Type";
      return;
    case TermTag::Var:
      out += var_name(t->index, names);
      return;
    case TermTag::App: {
      Spine spine = split_spine(t);
      out += '(';
      print_closed(spine.head, names, out);
      for (const auto& a : spine.args) {
        out += ' ';
        print_closed(a, names, out);
      }
      out += ')';
      return;
    }
    case TermTag::Abs: {
      std::string name = pick_name(t->hint, occurs_free(t->right, 0), t->right, names);
      out += '[';
      out += name;
      out += ':';
      print_rec(t->left, names, out);
      out += "] ";
      names.push_back(name);
      print_rec(t->right, names, out);
      names.pop_back();
      return;
    }
    case TermTag::Prod: {
      if (!occurs_free(t->right, 0)) {
        print_closed(t->left, names, out);
        out += " -> ";
        names.push_back("_");
        print_rec(t->right, names, out);
        names.pop_back();
        return;
      }
      std::string name = pick_name(t->hint, true, t->right, names);
      out += '(';
      out += name;
      out += ':';
      print_rec(t->left, names, out);
      out += ") ";
      names.push_back(name);
      print_rec(t->right, names, out);
      names.pop_back();
      return;
    }
  }
}

std::vector<std::size_t> mfree_indices(const MTermPtr& t) {
  // display scope only; marks traversed like children
  std::vector<std::size_t> out;
  std::function<void(const MTermPtr&, std::size_t)> go = [&](const MTermPtr& u,
                                                             std::size_t depth) {
    switch (u->tag) {
      case MTag::Sort: return;
      case MTag::Var:
        if (u->index >= depth) out.push_back(u->index - depth);
        go(u->mark, depth);
        return;
      case MTag::App:
      case MTag::Abs:
        go(u->left, depth);
        go(u->right, depth + (u->tag == MTag::Abs ? 1 : 0));
        go(u->mark, depth);
        return;
      case MTag::Prod:
        go(u->left, depth);
        go(u->right, depth + 1);
        return;
    }
  };
  go(t, 0);
  return out;
}

std::string mpick_name(const std::string& hint, bool used, const MTermPtr& under,
                       const std::vector<std::string>& names) {
  std::string base = (!hint.empty() && hint != "_") ? hint : (used ? "x" : "_");
  if (base == "_") return base;
  std::vector<std::string> forbidden = {"Prop", "Type"};
  for (std::size_t idx : mfree_indices(under)) {
    if (idx == 0) continue;
    std::size_t outer = idx - 1;
    if (outer < names.size()) forbidden.push_back(names[names.size() - 1 - outer]);
  }
  std::string candidate = base;
  while (std::find(forbidden.begin(), forbidden.end(), candidate) != forbidden.end())
    candidate += '\'';
  return candidate;
}

void mprint_rec(const MTermPtr& t, std::vector<std::string>& names, std::string& out);

void mprint_mark(const MTermPtr& mark, std::vector<std::string>& names, std::string& out) {
  out += "^(";
  mprint_rec(mark, names, out);
  out += ')';
}

void mprint_closed(const MTermPtr& t, std::vector<std::string>& names, std::string& out) {
  switch (t->tag) {
    case MTag::Sort:
    case MTag::Var:
    case MTag::App:
    case MTag::Abs:  // marked abstractions print parenthesized already
      mprint_rec(t, names, out);
      return;
    default:
      out += '(';
      mprint_rec(t, names, out);
      out += ')';
      return;
  }
}

void mprint_rec(const MTermPtr& t, std::vector<std::string>& names, std::string& out) {
  switch (t->tag) {
    case MTag::Sort:
      out += t->sort == SortKind::Prop ? "Prop" : "Type";
      return;
    case MTag::Var:
      out += var_name(t->index, names);
      mprint_mark(t->mark, names, out);
      return;
    case MTag::App:
      out += '(';
      mprint_closed(t->left, names, out);
      out += ' ';
      mprint_closed(t->right, names, out);
      out += ')';
      mprint_mark(t->mark, names, out);
      return;
    case MTag::Abs: {
      std::string name = mpick_name(t->hint, occurs_free_marked(t->right, 0), t->right, names);
      out += "([";
      out += name;
      out += ':';
      mprint_rec(t->left, names, out);
      out += "] ";
      names.push_back(name);
      mprint_rec(t->right, names, out);
      names.pop_back();
      out += ')';
      mprint_mark(t->mark, names, out);
      return;
    }
    case MTag::Prod: {
      if (!occurs_free_marked(t->right, 0)) {
        mprint_closed(t->left, names, out);
        out += " -> ";
        names.push_back("_");
        mprint_rec(t->right, names, out);
        names.pop_back();
        return;
      }
      std::string name = mpick_name(t->hint, true, t->right, names);
      out += '(';
      out += name;
      out += ':';
      mprint_rec(t->left, names, out);
      out += ") ";
      names.push_back(name);
      mprint_rec(t->right, names, out);
      names.pop_back();
      return;
    }
  }
}

}  // namespace

std::string print_term(const TermPtr& t, const std::vector<std::string>& context_names) {
  std::vector<std::string> names = context_names;
  std::string out;
  print_rec(t, names, out);
  return out;
}

std::string print_term(const TermPtr& t, const Context& ctx) {
  return print_term(t, ctx.names());
}

std::string print_marked(const MTermPtr& t, const std::vector<std::string>& context_names) {
  std::vector<std::string> names = context_names;
  std::string out;
  mprint_rec(t, names, out);
  return out;
}

std::string print_marked(const MTermPtr& t, const MarkedContext& ctx) {
  return print_marked(t, ctx.names());
}

std::string print_context(const Context& ctx) {
  std::string out;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += "; ";
    out += ctx.entry(i).first;
    out += " : ";
    std::string ty;
    print_rec(ctx.entry(i).second, names, ty);
    out += ty;
    names.push_back(ctx.entry(i).first);
  }
  return out;
}

std::string print_marked_context(const MarkedContext& ctx) {
  std::string out;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += "; ";
    out += ctx.entry(i).first;
    out += " : ";
    std::string ty;
    mprint_rec(ctx.entry(i).second, names, ty);
    out += ty;
    names.push_back(ctx.entry(i).first);
  }
  return out;
}

}  // namespace cube
