#pragma once

#include <string_view>

#include "cube/marked.hpp"

namespace cube {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  SourceSpan span;
  std::string expected;

  ParseError(SourceSpan s, const std::string& message, std::string expect = {});
};

// Grammar:
//   term  := '[' name ':' term ']' term     abstraction
//          | '(' name ':' term ')' term     product
//          | app ('->' term)?               arrow, right-associative
//   app   := atom+                          left-associative application
//   atom  := 'Prop' | 'Type' | name | '(' term ')'
// Identifiers resolve to de Bruijn indices against binders, then against the
// declared context (innermost first).
TermPtr parse_term(std::string_view src, const std::vector<std::string>& context_names = {});

// Newline- or semicolon-separated `name : term` entries, earlier entries
// outer.
Context parse_context(std::string_view src);

std::string print_term(const TermPtr& t, const std::vector<std::string>& context_names = {});
std::string print_term(const TermPtr& t, const Context& ctx);

// Marks print as ^ followed by a parenthesized mark: x^(Prop).
std::string print_marked(const MTermPtr& t, const std::vector<std::string>& context_names = {});
std::string print_marked(const MTermPtr& t, const MarkedContext& ctx);

std::string print_context(const Context& ctx);
std::string print_marked_context(const MarkedContext& ctx);

}  // namespace cube
