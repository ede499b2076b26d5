#include "idc/lang/parse.hpp"

#include <algorithm>
#include <cstdint>

namespace idc::lang {

namespace {

constexpr std::size_t kMaxExprDepth = 256;

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool valid_capability(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ident_char(c) && c != '.') return false;
  return true;
}

struct Token {
  enum class Kind { int_lit, str_lit, ident, punct, end };
  Kind kind = Kind::end;
  std::string text;       // ident name or punct spelling
  std::string str_value;  // decoded string literal
  std::int64_t int_value = 0;
  std::size_t line = 0;
  std::size_t col = 0;
};

// Thrown internally to unwind to parse(); never escapes this TU.
struct ParseAbort {};

struct LineRec {
  std::size_t line_no = 0;  // 1-based
  std::size_t indent = 0;
  std::string_view text;  // content after indentation
};

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  ParseResult run() {
    ParseResult result;
    try {
      result.ast = parse_program();
    } catch (const ParseAbort&) {
      result.error = error_;
    }
    return result;
  }

  ParseResult run_expression(Expr& out, const std::vector<std::string>& bound) {
    ParseResult result;
    try {
      scan_lines();
      scopes_.push_back({"context"});
      for (const std::string& name : bound) scopes_.back().push_back(name);
      std::vector<Token> tokens;
      for (const LineRec& rec : lines_) tokenize_line(rec, tokens);
      if (tokens.empty()) fail_syntax(1, 1, "expected an expression");
      push_end(tokens);
      std::size_t pos = 0;
      out = parse_expr(tokens, pos, 0);
      expect_end(tokens, pos);
      result.ast = ProgramAst{};  // marker for ok()
    } catch (const ParseAbort&) {
      result.error = error_;
    }
    return result;
  }

 private:
  // ---- error helpers ----
  [[noreturn]] void fail(ParseErrorKind kind, std::size_t line, std::size_t col,
                         std::string message) {
    error_ = ParseError{line, col, std::move(message), kind};
    throw ParseAbort{};
  }
  [[noreturn]] void fail_syntax(std::size_t line, std::size_t col, std::string message) {
    fail(ParseErrorKind::syntax, line, col, std::move(message));
  }
  [[noreturn]] void fail_at(const Token& t, std::string message) {
    fail(ParseErrorKind::syntax, t.line, t.col, std::move(message));
  }

  // ---- line scanning ----
  void scan_lines() {
    if (!utf8_valid(source_)) fail_syntax(1, 1, "source is not valid UTF-8");
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= source_.size()) {
      if (start == source_.size() && line_no > 0) break;
      std::size_t end = source_.find('\n', start);
      if (end == std::string_view::npos) end = source_.size();
      std::string_view raw = source_.substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

      std::size_t indent = 0;
      while (indent < raw.size() && raw[indent] == ' ') ++indent;
      if (indent < raw.size() && raw[indent] == '\t')
        fail(ParseErrorKind::indentation, line_no, indent + 1, "tabs are not allowed");
      std::string_view text = raw.substr(indent);
      if (text.empty()) continue;  // blank line
      lines_.push_back(LineRec{line_no, indent, text});
    }
  }

  // ---- expression tokenizer ----
  void tokenize_line(const LineRec& rec, std::vector<Token>& out) {
    tokenize_fragment(rec.text, rec.line_no, rec.indent, out);
  }

  void tokenize_fragment(std::string_view text, std::size_t line_no, std::size_t col0,
                         std::vector<Token>& out) {
    std::size_t i = 0;
    auto col = [&](std::size_t at) { return col0 + at + 1; };
    while (i < text.size()) {
      const char c = text[i];
      if (c == ' ') {
        ++i;
        continue;
      }
      if (c == '\t') fail_syntax(line_no, col(i), "tabs are not allowed");
      Token t;
      t.line = line_no;
      t.col = col(i);
      if (is_digit(c)) {
        std::size_t j = i;
        while (j < text.size() && is_digit(text[j])) ++j;
        t.kind = Token::Kind::int_lit;
        t.int_value = parse_int(text.substr(i, j - i), false, line_no, col(i));
        i = j;
      } else if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < text.size() && is_ident_char(text[j])) ++j;
        t.kind = Token::Kind::ident;
        t.text = std::string(text.substr(i, j - i));
        i = j;
      } else if (c == '"') {
        t.kind = Token::Kind::str_lit;
        t.str_value = lex_string(text, i, line_no, col0);
      } else {
        static constexpr std::string_view two_char[] = {"++", "->", "==", "!=", "<=", ">="};
        std::string_view rest = text.substr(i);
        std::string_view matched;
        for (std::string_view p : two_char) {
          if (rest.rfind(p, 0) == 0) {
            matched = p;
            break;
          }
        }
        if (matched.empty()) {
          static constexpr std::string_view one_char = "()[]{},:.+-*/<>=";
          if (one_char.find(c) == std::string_view::npos)
            fail_syntax(line_no, col(i), std::string("unexpected character '") + c + "'");
          matched = rest.substr(0, 1);
        }
        t.kind = Token::Kind::punct;
        t.text = std::string(matched);
        i += matched.size();
      }
      out.push_back(std::move(t));
    }
  }

  std::int64_t parse_int(std::string_view digits, bool negative, std::size_t line_no,
                         std::size_t col) {
    const std::uint64_t limit =
        negative ? 9223372036854775808ULL : 9223372036854775807ULL;
    std::uint64_t acc = 0;
    for (char c : digits) {
      const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
      if (acc > (limit - d) / 10) fail_syntax(line_no, col, "integer literal out of range");
      acc = acc * 10 + d;
    }
    if (negative) return acc == limit ? INT64_MIN : -static_cast<std::int64_t>(acc);
    return static_cast<std::int64_t>(acc);
  }

  std::string lex_string(std::string_view text, std::size_t& i, std::size_t line_no,
                         std::size_t col0) {
    std::string out;
    std::size_t j = i + 1;
    while (true) {
      if (j >= text.size())
        fail_syntax(line_no, col0 + i + 1, "unterminated string literal");
      const char c = text[j];
      if (c == '"') {
        ++j;
        break;
      }
      if (c == '\\') {
        if (j + 1 >= text.size())
          fail_syntax(line_no, col0 + j + 1, "unterminated escape sequence");
        const char e = text[j + 1];
        switch (e) {
          case '"':
            out += '"';
            break;
          case '\\':
            out += '\\';
            break;
          case 'n':
            out += '\n';
            break;
          case 't':
            out += '\t';
            break;
          default:
            fail_syntax(line_no, col0 + j + 2,
                        std::string("unsupported escape '\\") + e + "' (use \\\" \\\\ \\n \\t)");
        }
        j += 2;
        continue;
      }
      out += c;
      ++j;
    }
    i = j;
    return out;
  }

  void push_end(std::vector<Token>& tokens) {
    Token t;
    t.kind = Token::Kind::end;
    if (!tokens.empty()) {
      t.line = tokens.back().line;
      t.col = tokens.back().col + std::max<std::size_t>(tokens.back().text.size(), 1);
    } else {
      t.line = 1;
      t.col = 1;
    }
    tokens.push_back(std::move(t));
  }

  // ---- scope handling ----
  bool is_bound(std::string_view name) const {
    for (const auto& scope : scopes_)
      for (const std::string& n : scope)
        if (n == name) return true;
    return false;
  }

  // ---- expression parser (precedence climbing) ----
  const Token& peek(const std::vector<Token>& ts, std::size_t pos) const { return ts[pos]; }

  bool at_punct(const std::vector<Token>& ts, std::size_t pos, std::string_view p) const {
    return ts[pos].kind == Token::Kind::punct && ts[pos].text == p;
  }
  bool at_ident(const std::vector<Token>& ts, std::size_t pos, std::string_view word) const {
    return ts[pos].kind == Token::Kind::ident && ts[pos].text == word;
  }

  void expect_punct(const std::vector<Token>& ts, std::size_t& pos, std::string_view p) {
    if (!at_punct(ts, pos, p)) fail_at(ts[pos], "expected '" + std::string(p) + "'");
    ++pos;
  }
  void expect_keyword(const std::vector<Token>& ts, std::size_t& pos, std::string_view word) {
    if (!at_ident(ts, pos, word)) fail_at(ts[pos], "expected '" + std::string(word) + "'");
    ++pos;
  }
  void expect_end(const std::vector<Token>& ts, std::size_t pos) {
    if (ts[pos].kind != Token::Kind::end) fail_at(ts[pos], "unexpected token after expression");
  }

  Expr parse_expr(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    return parse_or(ts, pos, depth);
  }

  Expr parse_or(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    guard_depth(ts, pos, depth);
    Expr lhs = parse_and(ts, pos, depth + 1);
    while (at_ident(ts, pos, "or")) {
      ++pos;
      lhs = make_binop(BinOp::logical_or, std::move(lhs), parse_and(ts, pos, depth + 1));
    }
    return lhs;
  }

  Expr parse_and(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    Expr lhs = parse_cmp(ts, pos, depth + 1);
    while (at_ident(ts, pos, "and")) {
      ++pos;
      lhs = make_binop(BinOp::logical_and, std::move(lhs), parse_cmp(ts, pos, depth + 1));
    }
    return lhs;
  }

  Expr parse_cmp(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    Expr lhs = parse_concat(ts, pos, depth + 1);
    struct CmpTok {
      std::string_view text;
      BinOp op;
    };
    static constexpr CmpTok cmps[] = {{"==", BinOp::eq}, {"!=", BinOp::ne}, {"<", BinOp::lt},
                                      {"<=", BinOp::le}, {">", BinOp::gt},  {">=", BinOp::ge}};
    for (const CmpTok& c : cmps) {
      if (at_punct(ts, pos, c.text)) {
        ++pos;
        // comparisons do not chain
        return make_binop(c.op, std::move(lhs), parse_concat(ts, pos, depth + 1));
      }
    }
    return lhs;
  }

  Expr parse_concat(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    Expr lhs = parse_additive(ts, pos, depth + 1);
    while (at_punct(ts, pos, "++")) {
      ++pos;
      lhs = make_binop(BinOp::concat, std::move(lhs), parse_additive(ts, pos, depth + 1));
    }
    return lhs;
  }

  Expr parse_additive(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    Expr lhs = parse_multiplicative(ts, pos, depth + 1);
    while (at_punct(ts, pos, "+") || at_punct(ts, pos, "-")) {
      const BinOp op = ts[pos].text == "+" ? BinOp::add : BinOp::sub;
      ++pos;
      lhs = make_binop(op, std::move(lhs), parse_multiplicative(ts, pos, depth + 1));
    }
    return lhs;
  }

  Expr parse_multiplicative(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    Expr lhs = parse_postfix(ts, pos, depth + 1);
    while (at_punct(ts, pos, "*") || at_punct(ts, pos, "/")) {
      const BinOp op = ts[pos].text == "*" ? BinOp::mul : BinOp::div;
      ++pos;
      lhs = make_binop(op, std::move(lhs), parse_postfix(ts, pos, depth + 1));
    }
    return lhs;
  }

  Expr parse_postfix(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    guard_depth(ts, pos, depth);
    Expr base = parse_primary(ts, pos, depth + 1);
    while (true) {
      if (at_punct(ts, pos, ".")) {
        ++pos;
        const Token& t = ts[pos];
        // field names live in their own namespace; keywords are fine here
        if (t.kind != Token::Kind::ident) fail_at(t, "expected field name after '.'");
        ++pos;
        base = make_field_access(std::move(base), t.text);
      } else if (at_punct(ts, pos, "(")) {
        const Token& open = ts[pos];
        ++pos;
        std::vector<Expr> args;
        if (!at_punct(ts, pos, ")")) {
          args.push_back(parse_expr(ts, pos, depth + 1));
          while (at_punct(ts, pos, ",")) {
            ++pos;
            args.push_back(parse_expr(ts, pos, depth + 1));
          }
        }
        expect_punct(ts, pos, ")");
        if (args.empty()) fail_at(open, "application requires an argument");
        // application is unary; multi-arg calls curry left to right
        for (Expr& arg : args) base = make_apply(std::move(base), std::move(arg));
      } else {
        break;
      }
    }
    return base;
  }

  Expr parse_primary(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    guard_depth(ts, pos, depth);
    const Token& t = ts[pos];
    switch (t.kind) {
      case Token::Kind::int_lit:
        ++pos;
        return make_literal(Value::integer(t.int_value));
      case Token::Kind::str_lit:
        ++pos;
        return make_literal(Value::string(t.str_value));
      case Token::Kind::ident:
        return parse_ident_primary(ts, pos, depth);
      case Token::Kind::punct:
        if (t.text == "(") {
          ++pos;
          Expr inner = parse_expr(ts, pos, depth + 1);
          expect_punct(ts, pos, ")");
          return inner;
        }
        if (t.text == "-") {
          ++pos;
          const Token& n = ts[pos];
          if (n.kind != Token::Kind::int_lit)
            fail_at(n, "'-' is only allowed before an integer literal");
          ++pos;
          return make_literal(Value::integer(n.int_value == 0 ? 0 : -n.int_value));
        }
        if (t.text == "[") return parse_list_literal(ts, pos, depth);
        if (t.text == "{") return parse_map_literal(ts, pos, depth);
        fail_at(t, "expected an expression");
      case Token::Kind::end:
        fail_at(t, "unexpected end of expression");
    }
    fail_at(t, "expected an expression");
  }

  Expr parse_ident_primary(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    const Token& t = ts[pos];
    const std::string& word = t.text;
    if (word == "true" || word == "false") {
      ++pos;
      return make_literal(Value::boolean(word == "true"));
    }
    if (word == "null") {
      ++pos;
      return make_literal(Value::unit());
    }
    if (word == "let") {
      ++pos;
      const std::string name = expect_binder(ts, pos);
      expect_punct(ts, pos, "=");
      Expr bound = parse_expr(ts, pos, depth + 1);
      expect_keyword(ts, pos, "in");
      scopes_.back().push_back(name);
      Expr body = parse_expr(ts, pos, depth + 1);
      scopes_.back().pop_back();
      return make_let(name, std::move(bound), std::move(body));
    }
    if (word == "if") {
      ++pos;
      Expr cond = parse_expr(ts, pos, depth + 1);
      expect_keyword(ts, pos, "then");
      Expr then_branch = parse_expr(ts, pos, depth + 1);
      expect_keyword(ts, pos, "else");
      Expr else_branch = parse_expr(ts, pos, depth + 1);
      return make_if(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    if (word == "fn") {
      ++pos;
      const std::string param = expect_binder(ts, pos);
      expect_punct(ts, pos, "->");
      scopes_.back().push_back(param);
      Expr body = parse_expr(ts, pos, depth + 1);
      scopes_.back().pop_back();
      return make_lambda(param, std::move(body));
    }
    if (const BuiltinSpec* builtin = find_builtin(word)) {
      ++pos;
      if (!at_punct(ts, pos, "("))
        fail_at(ts[pos], "builtin '" + word + "' must be called");
      ++pos;
      std::vector<Expr> args;
      if (!at_punct(ts, pos, ")")) {
        args.push_back(parse_expr(ts, pos, depth + 1));
        while (at_punct(ts, pos, ",")) {
          ++pos;
          args.push_back(parse_expr(ts, pos, depth + 1));
        }
      }
      expect_punct(ts, pos, ")");
      if (args.size() != builtin->arity)
        fail_at(t, "builtin '" + word + "' takes " + std::to_string(builtin->arity) +
                       " argument(s), got " + std::to_string(args.size()));
      return make_builtin_call(word, std::move(args));
    }
    if (is_keyword(word)) fail_at(t, "unexpected keyword '" + word + "'");
    if (!is_bound(word))
      fail(ParseErrorKind::unbound_identifier, t.line, t.col,
           "identifier '" + word + "' is not bound");
    ++pos;
    return make_var(word);
  }

  std::string expect_binder(const std::vector<Token>& ts, std::size_t& pos) {
    const Token& t = ts[pos];
    if (t.kind != Token::Kind::ident) fail_at(t, "expected an identifier");
    if (is_reserved_word(t.text)) fail_at(t, "'" + t.text + "' is a reserved word");
    if (t.text == "context") fail_at(t, "'context' is predefined and cannot be rebound");
    ++pos;
    return t.text;
  }

  Expr parse_list_literal(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    const Token& open = ts[pos];
    expect_punct(ts, pos, "[");
    Value::List elems;
    if (!at_punct(ts, pos, "]")) {
      while (true) {
        Expr e = parse_expr(ts, pos, depth + 1);
        if (e.kind != ExprKind::literal)
          fail_at(open, "list literal elements must be constants (build dynamic lists with push)");
        elems.push_back(e.literal);
        if (at_punct(ts, pos, ",")) {
          ++pos;
          continue;
        }
        break;
      }
    }
    expect_punct(ts, pos, "]");
    return make_literal(Value::list(std::move(elems)));
  }

  Expr parse_map_literal(const std::vector<Token>& ts, std::size_t& pos, std::size_t depth) {
    const Token& open = ts[pos];
    expect_punct(ts, pos, "{");
    Value::Map entries;
    if (!at_punct(ts, pos, "}")) {
      while (true) {
        const Token& k = ts[pos];
        std::string key;
        if (k.kind == Token::Kind::ident && !is_keyword(k.text)) {
          key = k.text;
          ++pos;
        } else if (k.kind == Token::Kind::str_lit) {
          key = k.str_value;
          ++pos;
        } else {
          fail_at(k, "expected a map key");
        }
        expect_punct(ts, pos, ":");
        Expr e = parse_expr(ts, pos, depth + 1);
        if (e.kind != ExprKind::literal)
          fail_at(open, "map literal values must be constants (build dynamic maps with put)");
        entries.emplace_back(std::move(key), e.literal);
        if (at_punct(ts, pos, ",")) {
          ++pos;
          continue;
        }
        break;
      }
    }
    expect_punct(ts, pos, "}");
    try {
      return make_literal(Value::map(std::move(entries)));
    } catch (const ValueError& e) {
      fail_at(open, e.what());
    }
  }

  void guard_depth(const std::vector<Token>& ts, std::size_t pos, std::size_t depth) {
    if (depth > kMaxExprDepth) fail_at(ts[pos], "expression is nested too deeply");
  }

  // ---- program-level parsing ----
  ProgramAst parse_program() {
    scan_lines();
    if (lines_.empty()) fail_syntax(1, 1, "expected program header");

    std::size_t li = 0;
    const LineRec& header = lines_[li];
    if (header.indent != 0)
      fail(ParseErrorKind::indentation, header.line_no, header.indent + 1,
           "program header must start at column 1");
    std::vector<Token> tokens;
    tokenize_line(header, tokens);
    push_end(tokens);
    std::size_t pos = 0;
    if (!at_ident(tokens, pos, "program"))
      fail_syntax(header.line_no, 1, "expected program header");
    ++pos;
    ProgramAst ast;
    ast.name = expect_binder(tokens, pos);
    expect_end(tokens, pos);
    ++li;

    scopes_.push_back({"context"});
    bool seen_step = false;

    while (li < lines_.size()) {
      const LineRec& rec = lines_[li];
      if (rec.indent != 2)
        fail(ParseErrorKind::indentation, rec.line_no, rec.indent + 1,
             "expected a 'capabilities:' or 'step' line indented by 2 spaces");
      tokens.clear();
      tokenize_line(rec, tokens);
      push_end(tokens);
      pos = 0;

      if (at_ident(tokens, pos, "capabilities")) {
        ++pos;
        expect_punct(tokens, pos, ":");
        expect_end(tokens, pos);
        if (seen_step || !ast.capabilities.empty())
          fail_syntax(rec.line_no, rec.indent + 1,
                      "capabilities block must appear once, before the first step");
        ++li;
        while (li < lines_.size() && lines_[li].indent >= 4) {
          const LineRec& cap = lines_[li];
          if (cap.indent != 4)
            fail(ParseErrorKind::indentation, cap.line_no, cap.indent + 1,
                 "capability entries are indented by 4 spaces");
          std::string entry(cap.text);
          while (!entry.empty() && entry.back() == ' ') entry.pop_back();
          if (!valid_capability(entry))
            fail_syntax(cap.line_no, cap.indent + 1, "invalid capability '" + entry + "'");
          ast.capabilities.push_back(entry);
          ++li;
        }
        continue;
      }

      if (at_ident(tokens, pos, "step")) {
        seen_step = true;
        li = parse_step(ast, li, tokens);
        continue;
      }

      fail_syntax(rec.line_no, rec.indent + 1, "expected 'capabilities:' or 'step'");
    }
    return ast;
  }

  // Parses one step starting at lines_[li] (already tokenized into `ts`);
  // returns the index of the first line past the step.
  std::size_t parse_step(ProgramAst& ast, std::size_t li, std::vector<Token>& ts) {
    const LineRec& rec = lines_[li];
    std::size_t pos = 0;
    expect_keyword(ts, pos, "step");
    const Token name_tok = ts[pos];
    const std::string name = expect_binder(ts, pos);
    for (const Step& s : ast.steps) {
      if (step_name(s) == name)
        fail(ParseErrorKind::duplicate_name, name_tok.line, name_tok.col,
             "step '" + name + "' is already defined");
    }
    expect_punct(ts, pos, ":");

    if (at_ident(ts, pos, "compute")) {
      ++pos;
      std::vector<Token> expr_tokens(ts.begin() + static_cast<std::ptrdiff_t>(pos),
                                     ts.end() - 1);
      ++li;
      while (li < lines_.size() && lines_[li].indent >= 6) {
        tokenize_line(lines_[li], expr_tokens);
        ++li;
      }
      if (expr_tokens.empty())
        fail_syntax(rec.line_no, rec.indent + 1, "compute requires an expression");
      push_end(expr_tokens);
      std::size_t epos = 0;
      Expr expr = parse_expr(expr_tokens, epos, 0);
      expect_end(expr_tokens, epos);
      ast.steps.push_back(ComputeStep{name, name, std::move(expr)});
      scopes_.back().push_back(name);
      return li;
    }

    if (at_ident(ts, pos, "ask")) {
      ++pos;
      expect_punct(ts, pos, "{");
      expect_end(ts, pos);
      AskStep step;
      step.name = name;
      step.binding = name;
      li = parse_ask_body(step, li + 1, rec.line_no);
      ast.steps.push_back(std::move(step));
      scopes_.back().push_back(name);
      return li;
    }

    fail_at(ts[pos], "expected 'compute' or 'ask' after step name");
  }

  std::size_t parse_ask_body(AskStep& step, std::size_t li, std::size_t ask_line) {
    // machine "<id>"
    if (li >= lines_.size())
      fail_syntax(ask_line, 1, "unterminated ask block (expected machine line)");
    {
      const LineRec& rec = lines_[li];
      if (rec.indent != 4)
        fail(ParseErrorKind::indentation, rec.line_no, rec.indent + 1,
             "machine line is indented by 4 spaces");
      std::vector<Token> ts;
      tokenize_line(rec, ts);
      push_end(ts);
      std::size_t pos = 0;
      expect_keyword(ts, pos, "machine");
      if (ts[pos].kind != Token::Kind::str_lit) fail_at(ts[pos], "expected a machine id string");
      step.machine = ts[pos].str_value;
      if (step.machine.empty()) fail_at(ts[pos], "machine id must be non-empty");
      ++pos;
      expect_end(ts, pos);
      ++li;
    }

    // input { ... }
    if (li >= lines_.size())
      fail_syntax(ask_line, 1, "unterminated ask block (expected input block)");
    {
      const LineRec& rec = lines_[li];
      if (rec.indent != 4)
        fail(ParseErrorKind::indentation, rec.line_no, rec.indent + 1,
             "input line is indented by 4 spaces");
      std::vector<Token> ts;
      tokenize_line(rec, ts);
      push_end(ts);
      std::size_t pos = 0;
      expect_keyword(ts, pos, "input");
      expect_punct(ts, pos, "{");
      expect_end(ts, pos);
      ++li;
    }

    while (true) {
      if (li >= lines_.size())
        fail_syntax(ask_line, 1, "unterminated input block");
      const LineRec& rec = lines_[li];
      if (rec.indent == 4 && rec.text == "}") {
        ++li;
        break;
      }
      if (rec.indent != 6)
        fail(ParseErrorKind::indentation, rec.line_no, rec.indent + 1,
             "input fields are indented by 6 spaces");
      std::vector<Token> ts;
      tokenize_line(rec, ts);
      push_end(ts);
      std::size_t pos = 0;
      const Token& key_tok = ts[pos];
      if (key_tok.kind != Token::Kind::ident || is_reserved_word(key_tok.text))
        fail_at(key_tok, "expected an input field name");
      ++pos;
      expect_punct(ts, pos, ":");
      Expr expr = parse_expr(ts, pos, 0);
      expect_end(ts, pos);
      for (const auto& [existing, _] : step.input_fields) {
        if (existing == key_tok.text)
          fail(ParseErrorKind::duplicate_name, key_tok.line, key_tok.col,
               "input field '" + key_tok.text + "' is already defined");
      }
      step.input_fields.emplace_back(key_tok.text, std::move(expr));
      ++li;
    }

    if (li >= lines_.size())
      fail_syntax(ask_line, 1, "unterminated ask block (expected closing '}')");
    const LineRec& rec = lines_[li];
    if (!(rec.indent == 2 && rec.text == "}"))
      fail_syntax(rec.line_no, rec.indent + 1, "expected '}' closing the ask block");
    return li + 1;
  }

  std::string_view source_;
  std::vector<LineRec> lines_;
  std::vector<std::vector<std::string>> scopes_;
  ParseError error_;
};

}  // namespace

ParseResult parse(std::string_view source) { return Parser(source).run(); }

ParseResult parse_expression_source(std::string_view source, Expr& out,
                                    const std::vector<std::string>& bound) {
  return Parser(source).run_expression(out, bound);
}

}  // namespace idc::lang
