#include "jscity/js_parser.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "js_lexer.hpp"

namespace jscity {
namespace {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

constexpr int kMaxNesting = 1000;

constexpr std::array<std::string_view, 37> kReservedWords = {
    "break",  "case",     "catch",  "class",      "const",  "continue", "debugger",
    "default", "delete",  "do",     "else",       "export", "extends",  "false",
    "finally", "for",     "function", "if",       "import", "in",       "instanceof",
    "new",    "null",     "return", "super",      "switch", "this",     "throw",
    "true",   "try",      "typeof", "var",        "void",   "while",    "with",
    "enum",   "implements"};

bool is_reserved(std::string_view word) {
  // "implements" is only reserved in strict code; treat it as an identifier.
  if (word == "implements") return false;
  return std::find(kReservedWords.begin(), kReservedWords.end(), word) != kReservedWords.end();
}

int binary_precedence(const Token& tok, bool no_in) {
  if (tok.kind == TokenKind::name && !tok.escaped) {
    if (tok.value == "instanceof") return 7;
    if (tok.value == "in") return no_in ? -1 : 7;
    return -1;
  }
  if (tok.kind != TokenKind::punct) return -1;
  const std::string& v = tok.value;
  if (v == "??" || v == "||") return 1;
  if (v == "&&") return 2;
  if (v == "|") return 3;
  if (v == "^") return 4;
  if (v == "&") return 5;
  if (v == "==" || v == "!=" || v == "===" || v == "!==") return 6;
  if (v == "<" || v == ">" || v == "<=" || v == ">=") return 7;
  if (v == "<<" || v == ">>" || v == ">>>") return 8;
  if (v == "+" || v == "-") return 9;
  if (v == "*" || v == "/" || v == "%") return 10;
  if (v == "**") return 11;
  return -1;
}

bool is_assignment_operator(const Token& tok) {
  if (tok.kind != TokenKind::punct) return false;
  static constexpr std::array<std::string_view, 16> ops = {
      "=",  "+=", "-=",  "*=",   "/=",  "%=",  "**=", "<<=",
      ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "?\?="};
  return std::find(ops.begin(), ops.end(), tok.value) != ops.end();
}

class Parser {
 public:
  explicit Parser(std::string_view source) : lex_(source) { tok_ = lex_.next(); }

  SyntaxTree parse() {
    auto program = make("Program", 0);
    NodeList body;
    while (tok_.kind != TokenKind::eof) body.push_back(parse_statement());
    program->set("body", std::move(body));
    program->set("sourceType", std::string("module"));
    program->offset_end = lex_.source().size();
    program->span = {lex_.position(0), lex_.position(lex_.source().size())};
    program->has_loc = true;
    SyntaxTree tree;
    tree.program = std::move(program);
    tree.line_count = lex_.line_count();
    return tree;
  }

 private:
  struct FunctionContext {
    bool is_async = false;
    bool is_generator = false;
  };

  class DepthGuard {
   public:
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxNesting) p_.fail_here("Nesting too deep");
    }
    ~DepthGuard() { --p_.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;

   private:
    Parser& p_;
  };

  // ---- token helpers -----------------------------------------------------

  void next() {
    prev_end_ = tok_.end;
    tok_ = lex_.next();
  }

  Token peek() {
    const std::size_t saved = lex_.offset();
    Token t = lex_.next();
    lex_.reset(saved);
    return t;
  }

  Token peek2() {
    const std::size_t saved = lex_.offset();
    lex_.next();
    Token t = lex_.next();
    lex_.reset(saved);
    return t;
  }

  static bool punct_is(const Token& t, std::string_view p) {
    return t.kind == TokenKind::punct && t.value == p;
  }
  static bool name_is(const Token& t, std::string_view n) {
    return t.kind == TokenKind::name && !t.escaped && t.value == n;
  }
  bool is(std::string_view p) const { return punct_is(tok_, p); }
  bool is_name(std::string_view n) const { return name_is(tok_, n); }

  bool eat(std::string_view p) {
    if (!is(p)) return false;
    next();
    return true;
  }

  void expect(std::string_view p) {
    if (!eat(p)) unexpected();
  }

  [[noreturn]] void fail_here(const std::string& message) const {
    lex_.fail(message, tok_.start);
  }

  [[noreturn]] void unexpected() const {
    if (tok_.kind == TokenKind::eof) lex_.fail("Unexpected end of input", tok_.start);
    lex_.fail("Unexpected token", tok_.start);
  }

  bool can_insert_semicolon() const {
    return tok_.kind == TokenKind::eof || is("}") || tok_.newline_before;
  }

  void semicolon() {
    if (!eat(";") && !can_insert_semicolon()) unexpected();
  }

  bool is_identifier_token(const Token& t) const {
    return t.kind == TokenKind::name && (t.escaped || !is_reserved(t.value));
  }

  bool in_async() const { return fn_stack_.empty() ? true : fn_stack_.back().is_async; }
  bool in_generator() const { return !fn_stack_.empty() && fn_stack_.back().is_generator; }

  // ---- node helpers ------------------------------------------------------

  NodePtr make(std::string type, std::size_t start) {
    auto node = std::make_unique<SyntaxNode>(std::move(type));
    node->offset_begin = start;
    return node;
  }

  NodePtr finish(NodePtr node) {
    node->offset_end = prev_end_;
    node->span = {lex_.position(node->offset_begin), lex_.position(prev_end_)};
    node->has_loc = true;
    return node;
  }

  NodePtr finish_at(NodePtr node, std::size_t end) {
    node->offset_end = end;
    node->span = {lex_.position(node->offset_begin), lex_.position(end)};
    node->has_loc = true;
    return node;
  }

  NodePtr parse_identifier(bool allow_reserved) {
    if (tok_.kind != TokenKind::name) unexpected();
    if (!allow_reserved && !is_identifier_token(tok_)) unexpected();
    auto node = make("Identifier", tok_.start);
    node->set("name", tok_.value);
    next();
    return finish(std::move(node));
  }

  NodePtr parse_private_identifier() {
    auto node = make("PrivateIdentifier", tok_.start);
    node->set("name", tok_.value);
    next();
    return finish(std::move(node));
  }

  NodePtr literal_from_token() {
    auto node = make("Literal", tok_.start);
    if (tok_.kind == TokenKind::string) {
      node->set("value", tok_.value);
    } else if (tok_.kind == TokenKind::number) {
      if (!tok_.value.empty() && tok_.value.back() == 'n') {
        node->set("bigint", tok_.value.substr(0, tok_.value.size() - 1));
      } else {
        node->set("value", tok_.number);
      }
    }
    node->set("raw", std::string(lex_.source().substr(tok_.start, tok_.end - tok_.start)));
    next();
    return finish(std::move(node));
  }

  // ---- statements --------------------------------------------------------

  NodePtr parse_statement() {
    DepthGuard guard(*this);
    const std::size_t start = tok_.start;
    if (tok_.kind == TokenKind::punct) {
      if (is("{")) return parse_block();
      if (is(";")) {
        auto node = make("EmptyStatement", start);
        next();
        return finish(std::move(node));
      }
    }
    if (tok_.kind == TokenKind::name && !tok_.escaped) {
      const std::string& w = tok_.value;
      if (w == "var" || w == "const") {
        auto decl = parse_var(start, w, false);
        semicolon();
        return finish(std::move(decl));
      }
      if (w == "let" && let_starts_declaration()) {
        auto decl = parse_var(start, "let", false);
        semicolon();
        return finish(std::move(decl));
      }
      if (w == "function") {
        next();
        return parse_function(start, true, false, false);
      }
      if (w == "async") {
        Token p = peek();
        if (name_is(p, "function") && !p.newline_before) {
          next();
          next();
          return parse_function(start, true, true, false);
        }
      }
      if (w == "class") return parse_class(start, true, false);
      if (w == "if") return parse_if(start);
      if (w == "for") return parse_for(start);
      if (w == "while") {
        next();
        auto node = make("WhileStatement", start);
        node->set("test", parse_paren_expression());
        node->set("body", parse_statement());
        return finish(std::move(node));
      }
      if (w == "do") {
        next();
        auto node = make("DoWhileStatement", start);
        node->set("body", parse_statement());
        if (!is_name("while")) unexpected();
        next();
        node->set("test", parse_paren_expression());
        eat(";");
        return finish(std::move(node));
      }
      if (w == "return") {
        next();
        auto node = make("ReturnStatement", start);
        if (is(";") || can_insert_semicolon()) {
          node->set("argument", std::monostate{});
        } else {
          node->set("argument", parse_expression(false));
        }
        semicolon();
        return finish(std::move(node));
      }
      if (w == "break" || w == "continue") {
        auto node = make(w == "break" ? "BreakStatement" : "ContinueStatement", start);
        next();
        if (is_identifier_token(tok_) && !tok_.newline_before) {
          node->set("label", parse_identifier(false));
        } else {
          node->set("label", std::monostate{});
        }
        semicolon();
        return finish(std::move(node));
      }
      if (w == "throw") {
        next();
        if (tok_.newline_before) lex_.fail("Illegal newline after throw", prev_end_);
        auto node = make("ThrowStatement", start);
        node->set("argument", parse_expression(false));
        semicolon();
        return finish(std::move(node));
      }
      if (w == "try") return parse_try(start);
      if (w == "switch") return parse_switch(start);
      if (w == "debugger") {
        next();
        auto node = make("DebuggerStatement", start);
        semicolon();
        return finish(std::move(node));
      }
      if (w == "with") {
        next();
        auto node = make("WithStatement", start);
        node->set("object", parse_paren_expression());
        node->set("body", parse_statement());
        return finish(std::move(node));
      }
      if (w == "import") {
        Token p = peek();
        if (!punct_is(p, "(") && !punct_is(p, ".")) return parse_import(start);
      }
      if (w == "export") return parse_export(start);
    }

    auto expr = parse_expression(false);
    if (expr->type == "Identifier" && is(":")) {
      next();
      auto node = make("LabeledStatement", start);
      node->set("body", parse_statement());
      node->set("label", std::move(expr));
      return finish(std::move(node));
    }
    auto node = make("ExpressionStatement", start);
    node->set("expression", std::move(expr));
    semicolon();
    return finish(std::move(node));
  }

  bool let_starts_declaration() {
    Token p = peek();
    if (punct_is(p, "[") || punct_is(p, "{")) return true;
    if (p.kind == TokenKind::name) {
      if (p.escaped) return true;
      if (p.value == "in" || p.value == "instanceof" || p.value == "of") return false;
      return !is_reserved(p.value) || p.value == "yield" || p.value == "await";
    }
    return false;
  }

  NodePtr parse_block() {
    auto node = make("BlockStatement", tok_.start);
    expect("{");
    NodeList body;
    while (!is("}")) {
      if (tok_.kind == TokenKind::eof) unexpected();
      body.push_back(parse_statement());
    }
    next();
    node->set("body", std::move(body));
    return finish(std::move(node));
  }

  NodePtr parse_paren_expression() {
    expect("(");
    auto expr = parse_expression(false);
    expect(")");
    return expr;
  }

  NodePtr parse_var(std::size_t start, std::string kind, bool no_in) {
    next();
    auto node = make("VariableDeclaration", start);
    NodeList declarations;
    for (;;) {
      auto decl = make("VariableDeclarator", tok_.start);
      decl->set("id", parse_binding_target());
      if (eat("=")) {
        decl->set("init", parse_assignment(no_in));
      } else {
        decl->set("init", std::monostate{});
      }
      declarations.push_back(finish(std::move(decl)));
      if (!eat(",")) break;
    }
    node->set("declarations", std::move(declarations));
    node->set("kind", kind);
    return node;
  }

  NodePtr parse_if(std::size_t start) {
    next();
    auto node = make("IfStatement", start);
    node->set("test", parse_paren_expression());
    node->set("consequent", parse_statement());
    if (is_name("else")) {
      next();
      node->set("alternate", parse_statement());
    } else {
      node->set("alternate", std::monostate{});
    }
    return finish(std::move(node));
  }

  NodePtr parse_for(std::size_t start) {
    next();
    bool is_await = false;
    if (is_name("await") && in_async()) {
      is_await = true;
      next();
    }
    expect("(");
    NodePtr init;
    if (is(";")) {
      // no init
    } else if (is_name("var") || is_name("const") || (is_name("let") && let_starts_declaration())) {
      const std::size_t decl_start = tok_.start;
      const std::string kind = tok_.value;
      init = finish(parse_var(decl_start, kind, true));
      const auto* decls = init->list("declarations");
      if ((is_name("of") || is_name("in")) && decls != nullptr && decls->size() == 1) {
        return parse_for_in_of(start, std::move(init), is_await);
      }
    } else {
      auto expr = parse_expression(true);
      if (is_name("of") || is_name("in")) {
        return parse_for_in_of(start, to_pattern(std::move(expr)), is_await);
      }
      init = std::move(expr);
    }
    auto node = make("ForStatement", start);
    node->set("init", init ? FieldValue(std::move(init)) : FieldValue(std::monostate{}));
    expect(";");
    node->set("test", is(";") ? FieldValue(std::monostate{}) : FieldValue(parse_expression(false)));
    expect(";");
    node->set("update",
              is(")") ? FieldValue(std::monostate{}) : FieldValue(parse_expression(false)));
    expect(")");
    node->set("body", parse_statement());
    return finish(std::move(node));
  }

  NodePtr parse_for_in_of(std::size_t start, NodePtr left, bool is_await) {
    const bool of = is_name("of");
    next();
    auto node = make(of ? "ForOfStatement" : "ForInStatement", start);
    if (of) node->set("await", is_await);
    node->set("left", std::move(left));
    node->set("right", of ? parse_assignment(false) : parse_expression(false));
    expect(")");
    node->set("body", parse_statement());
    return finish(std::move(node));
  }

  NodePtr parse_try(std::size_t start) {
    next();
    auto node = make("TryStatement", start);
    node->set("block", parse_block());
    if (is_name("catch")) {
      auto clause = make("CatchClause", tok_.start);
      next();
      if (eat("(")) {
        clause->set("param", parse_binding_target());
        expect(")");
      } else {
        clause->set("param", std::monostate{});
      }
      clause->set("body", parse_block());
      node->set("handler", finish(std::move(clause)));
    } else {
      node->set("handler", std::monostate{});
    }
    if (is_name("finally")) {
      next();
      node->set("finalizer", parse_block());
    } else {
      node->set("finalizer", std::monostate{});
    }
    if (node->child("handler") == nullptr && node->child("finalizer") == nullptr) {
      lex_.fail("Missing catch or finally clause", start);
    }
    return finish(std::move(node));
  }

  NodePtr parse_switch(std::size_t start) {
    next();
    auto node = make("SwitchStatement", start);
    node->set("discriminant", parse_paren_expression());
    expect("{");
    NodeList cases;
    bool seen_default = false;
    while (!is("}")) {
      auto c = make("SwitchCase", tok_.start);
      if (is_name("case")) {
        next();
        c->set("test", parse_expression(false));
      } else if (is_name("default")) {
        if (seen_default) fail_here("Multiple default clauses");
        seen_default = true;
        next();
        c->set("test", std::monostate{});
      } else {
        unexpected();
      }
      expect(":");
      NodeList consequent;
      while (!is("}") && !is_name("case") && !is_name("default")) {
        if (tok_.kind == TokenKind::eof) unexpected();
        consequent.push_back(parse_statement());
      }
      c->set("consequent", std::move(consequent));
      cases.push_back(finish(std::move(c)));
    }
    next();
    node->set("cases", std::move(cases));
    return finish(std::move(node));
  }

  NodePtr parse_module_name() {
    if (tok_.kind == TokenKind::string) return literal_from_token();
    return parse_identifier(true);
  }

  NodePtr parse_import(std::size_t start) {
    next();
    auto node = make("ImportDeclaration", start);
    NodeList specifiers;
    if (tok_.kind != TokenKind::string) {
      bool more = true;
      if (tok_.kind == TokenKind::name) {
        auto spec = make("ImportDefaultSpecifier", tok_.start);
        spec->set("local", parse_identifier(false));
        specifiers.push_back(finish(std::move(spec)));
        more = eat(",");
      }
      if (more) {
        if (is("*")) {
          auto spec = make("ImportNamespaceSpecifier", tok_.start);
          next();
          if (!is_name("as")) unexpected();
          next();
          spec->set("local", parse_identifier(false));
          specifiers.push_back(finish(std::move(spec)));
        } else if (is("{")) {
          next();
          while (!is("}")) {
            auto spec = make("ImportSpecifier", tok_.start);
            auto imported = parse_module_name();
            if (is_name("as")) {
              next();
              spec->set("imported", std::move(imported));
              spec->set("local", parse_identifier(false));
            } else {
              if (imported->type != "Identifier") unexpected();
              auto local = clone_node(*imported);
              spec->set("imported", std::move(imported));
              spec->set("local", std::move(local));
            }
            specifiers.push_back(finish(std::move(spec)));
            if (!eat(",")) break;
          }
          expect("}");
        } else {
          unexpected();
        }
      }
      if (!is_name("from")) unexpected();
      next();
    }
    if (tok_.kind != TokenKind::string) unexpected();
    node->set("specifiers", std::move(specifiers));
    node->set("source", literal_from_token());
    node->set("attributes", parse_import_attributes());
    semicolon();
    return finish(std::move(node));
  }

  NodeList parse_import_attributes() {
    NodeList attributes;
    if ((is_name("with") || is_name("assert")) && !tok_.newline_before) {
      next();
      expect("{");
      while (!is("}")) {
        auto attr = make("ImportAttribute", tok_.start);
        attr->set("key", parse_module_name());
        expect(":");
        if (tok_.kind != TokenKind::string) unexpected();
        attr->set("value", literal_from_token());
        attributes.push_back(finish(std::move(attr)));
        if (!eat(",")) break;
      }
      expect("}");
    }
    return attributes;
  }

  NodePtr parse_export(std::size_t start) {
    next();
    if (is("*")) {
      next();
      auto node = make("ExportAllDeclaration", start);
      if (is_name("as")) {
        next();
        node->set("exported", parse_module_name());
      } else {
        node->set("exported", std::monostate{});
      }
      if (!is_name("from")) unexpected();
      next();
      if (tok_.kind != TokenKind::string) unexpected();
      node->set("source", literal_from_token());
      node->set("attributes", parse_import_attributes());
      semicolon();
      return finish(std::move(node));
    }
    if (is_name("default")) {
      next();
      auto node = make("ExportDefaultDeclaration", start);
      const std::size_t decl_start = tok_.start;
      if (is_name("function")) {
        next();
        node->set("declaration", parse_function(decl_start, true, false, true));
      } else if (is_name("async") && name_is(peek(), "function") && !peek().newline_before) {
        next();
        next();
        node->set("declaration", parse_function(decl_start, true, true, true));
      } else if (is_name("class")) {
        node->set("declaration", parse_class(decl_start, true, true));
      } else {
        node->set("declaration", parse_assignment(false));
        semicolon();
      }
      return finish(std::move(node));
    }
    auto node = make("ExportNamedDeclaration", start);
    if (is("{")) {
      next();
      NodeList specifiers;
      while (!is("}")) {
        auto spec = make("ExportSpecifier", tok_.start);
        auto local = parse_module_name();
        if (is_name("as")) {
          next();
          spec->set("local", std::move(local));
          spec->set("exported", parse_module_name());
        } else {
          auto exported = clone_node(*local);
          spec->set("local", std::move(local));
          spec->set("exported", std::move(exported));
        }
        specifiers.push_back(finish(std::move(spec)));
        if (!eat(",")) break;
      }
      expect("}");
      node->set("declaration", std::monostate{});
      node->set("specifiers", std::move(specifiers));
      if (is_name("from")) {
        next();
        if (tok_.kind != TokenKind::string) unexpected();
        node->set("source", literal_from_token());
        node->set("attributes", parse_import_attributes());
      } else {
        node->set("source", std::monostate{});
      }
      semicolon();
      return finish(std::move(node));
    }
    const std::size_t decl_start = tok_.start;
    NodePtr decl;
    if (is_name("var") || is_name("const") || is_name("let")) {
      const std::string kind = tok_.value;
      decl = parse_var(decl_start, kind, false);
      semicolon();
      decl = finish(std::move(decl));
    } else if (is_name("function")) {
      next();
      decl = parse_function(decl_start, true, false, false);
    } else if (is_name("async")) {
      next();
      if (!is_name("function")) unexpected();
      next();
      decl = parse_function(decl_start, true, true, false);
    } else if (is_name("class")) {
      decl = parse_class(decl_start, true, false);
    } else {
      unexpected();
    }
    node->set("declaration", std::move(decl));
    node->set("specifiers", NodeList{});
    node->set("source", std::monostate{});
    return finish(std::move(node));
  }

  // ---- functions and classes ---------------------------------------------

  // Called with `function` (and `async`) already consumed.
  NodePtr parse_function(std::size_t start, bool statement, bool is_async, bool anonymous_ok) {
    auto node = make(statement ? "FunctionDeclaration" : "FunctionExpression", start);
    const bool generator = eat("*");
    if (tok_.kind == TokenKind::name && !is("(")) {
      node->set("id", parse_identifier(false));
    } else {
      if (statement && !anonymous_ok) unexpected();
      node->set("id", std::monostate{});
    }
    node->set("expression", false);
    node->set("generator", generator);
    node->set("async", is_async);
    fn_stack_.push_back({is_async, generator});
    node->set("params", parse_params());
    node->set("body", parse_function_body());
    fn_stack_.pop_back();
    return finish(std::move(node));
  }

  NodeList parse_params() {
    expect("(");
    NodeList params;
    while (!is(")")) {
      if (is("...")) {
        auto rest = make("RestElement", tok_.start);
        next();
        rest->set("argument", parse_binding_target());
        params.push_back(finish(std::move(rest)));
        if (!is(")")) unexpected();
        break;
      }
      params.push_back(parse_binding_element());
      if (!eat(",")) break;
    }
    expect(")");
    return params;
  }

  NodePtr parse_function_body() { return parse_block(); }

  // Object/class method value: a FunctionExpression starting at '('.
  NodePtr parse_method(bool is_async, bool generator) {
    auto node = make("FunctionExpression", tok_.start);
    node->set("id", std::monostate{});
    node->set("expression", false);
    node->set("generator", generator);
    node->set("async", is_async);
    fn_stack_.push_back({is_async, generator});
    node->set("params", parse_params());
    node->set("body", parse_function_body());
    fn_stack_.pop_back();
    return finish(std::move(node));
  }

  NodePtr parse_arrow(std::size_t start, NodeList params, bool is_async) {
    if (tok_.newline_before) fail_here("Line break before arrow");
    expect("=>");
    auto node = make("ArrowFunctionExpression", start);
    node->set("id", std::monostate{});
    node->set("generator", false);
    node->set("async", is_async);
    node->set("params", std::move(params));
    fn_stack_.push_back({is_async, false});
    if (is("{")) {
      node->set("expression", false);
      node->set("body", parse_function_body());
    } else {
      node->set("expression", true);
      node->set("body", parse_assignment(false));
    }
    fn_stack_.pop_back();
    return finish(std::move(node));
  }

  NodePtr parse_class(std::size_t start, bool statement, bool anonymous_ok) {
    next();  // class
    auto node = make(statement ? "ClassDeclaration" : "ClassExpression", start);
    if (is_identifier_token(tok_) && !is_name("extends")) {
      node->set("id", parse_identifier(false));
    } else {
      if (statement && !anonymous_ok) unexpected();
      node->set("id", std::monostate{});
    }
    if (is_name("extends")) {
      next();
      const std::size_t s = tok_.start;
      node->set("superClass", parse_subscripts(parse_primary(), s, false));
    } else {
      node->set("superClass", std::monostate{});
    }
    auto body = make("ClassBody", tok_.start);
    expect("{");
    NodeList members;
    while (!is("}")) {
      if (eat(";")) continue;
      if (tok_.kind == TokenKind::eof) unexpected();
      members.push_back(parse_class_member());
    }
    next();
    body->set("body", std::move(members));
    node->set("body", finish(std::move(body)));
    return finish(std::move(node));
  }

  static bool ends_member_name(const Token& t) {
    return punct_is(t, "(") || punct_is(t, "=") || punct_is(t, ";") || punct_is(t, "}") ||
           t.kind == TokenKind::eof;
  }

  struct PropertyKey {
    NodePtr key;
    bool computed = false;
  };

  PropertyKey parse_property_key(bool allow_private) {
    PropertyKey k;
    if (is("[")) {
      next();
      k.key = parse_assignment(false);
      k.computed = true;
      expect("]");
    } else if (tok_.kind == TokenKind::name) {
      k.key = parse_identifier(true);
    } else if (tok_.kind == TokenKind::string || tok_.kind == TokenKind::number) {
      k.key = literal_from_token();
    } else if (allow_private && tok_.kind == TokenKind::private_name) {
      k.key = parse_private_identifier();
    } else {
      unexpected();
    }
    return k;
  }

  NodePtr parse_class_member() {
    const std::size_t start = tok_.start;
    bool is_static = false;
    if (is_name("static") && !ends_member_name(peek())) {
      if (punct_is(peek(), "{")) {
        next();
        auto block = make("StaticBlock", start);
        next();
        NodeList body;
        fn_stack_.push_back({false, false});
        while (!is("}")) {
          if (tok_.kind == TokenKind::eof) unexpected();
          body.push_back(parse_statement());
        }
        fn_stack_.pop_back();
        next();
        block->set("body", std::move(body));
        return finish(std::move(block));
      }
      is_static = true;
      next();
    }
    bool is_async = false;
    bool generator = false;
    std::string kind = "method";
    if (is_name("async") && !ends_member_name(peek()) && !peek().newline_before) {
      is_async = true;
      next();
    }
    if (eat("*")) generator = true;
    if (!is_async && !generator && (is_name("get") || is_name("set")) &&
        !ends_member_name(peek())) {
      kind = tok_.value;
      next();
    }
    PropertyKey k = parse_property_key(true);
    if (is("(")) {
      auto node = make("MethodDefinition", start);
      const bool named_constructor =
          !k.computed && ((k.key->type == "Identifier" && k.key->text("name") == "constructor") ||
                          (k.key->type == "Literal" && k.key->text("value") == "constructor"));
      if (!is_static && named_constructor && kind == "method") kind = "constructor";
      node->set("static", is_static);
      node->set("computed", k.computed);
      node->set("key", std::move(k.key));
      node->set("kind", kind);
      node->set("value", parse_method(is_async, generator));
      return finish(std::move(node));
    }
    if (is_async || generator || kind != "method") unexpected();
    auto node = make("PropertyDefinition", start);
    node->set("static", is_static);
    node->set("computed", k.computed);
    node->set("key", std::move(k.key));
    if (eat("=")) {
      fn_stack_.push_back({false, false});
      node->set("value", parse_assignment(false));
      fn_stack_.pop_back();
    } else {
      node->set("value", std::monostate{});
    }
    semicolon();
    return finish(std::move(node));
  }

  // ---- patterns ----------------------------------------------------------

  NodePtr parse_binding_target() {
    if (is("[")) {
      auto node = make("ArrayPattern", tok_.start);
      next();
      NodeList elements;
      while (!is("]")) {
        if (is(",")) {
          next();
          elements.push_back(nullptr);
          continue;
        }
        if (is("...")) {
          auto rest = make("RestElement", tok_.start);
          next();
          rest->set("argument", parse_binding_target());
          elements.push_back(finish(std::move(rest)));
          if (!is("]")) unexpected();
          break;
        }
        elements.push_back(parse_binding_element());
        if (!is("]")) expect(",");
      }
      next();
      node->set("elements", std::move(elements));
      return finish(std::move(node));
    }
    if (is("{")) {
      auto node = make("ObjectPattern", tok_.start);
      next();
      NodeList properties;
      while (!is("}")) {
        if (is("...")) {
          auto rest = make("RestElement", tok_.start);
          next();
          rest->set("argument", parse_identifier(false));
          properties.push_back(finish(std::move(rest)));
          if (!is("}")) unexpected();
          break;
        }
        auto prop = make("Property", tok_.start);
        PropertyKey k = parse_property_key(false);
        prop->set("method", false);
        prop->set("computed", k.computed);
        if (eat(":")) {
          prop->set("shorthand", false);
          prop->set("key", std::move(k.key));
          prop->set("value", parse_binding_element());
        } else {
          if (k.computed || k.key->type != "Identifier" ||
              (is_reserved(std::string(*k.key->text("name"))))) {
            unexpected();
          }
          prop->set("shorthand", true);
          auto value = clone_node(*k.key);
          if (is("=")) {
            next();
            auto assign = make("AssignmentPattern", value->offset_begin);
            assign->set("left", std::move(value));
            assign->set("right", parse_assignment(false));
            value = finish(std::move(assign));
          }
          prop->set("key", std::move(k.key));
          prop->set("value", std::move(value));
        }
        prop->set("kind", std::string("init"));
        properties.push_back(finish(std::move(prop)));
        if (!is("}")) expect(",");
      }
      next();
      node->set("properties", std::move(properties));
      return finish(std::move(node));
    }
    return parse_identifier(false);
  }

  NodePtr parse_binding_element() {
    const std::size_t start = tok_.start;
    auto target = parse_binding_target();
    if (!is("=")) return target;
    next();
    auto node = make("AssignmentPattern", start);
    node->set("left", std::move(target));
    node->set("right", parse_assignment(false));
    return finish(std::move(node));
  }

  // Reinterprets an expression parsed with the cover grammar as a pattern.
  NodePtr to_pattern(NodePtr expr) {
    if (!expr) return expr;
    const std::string& t = expr->type;
    if (t == "Identifier" || t == "MemberExpression" || t.ends_with("Pattern") ||
        t == "RestElement") {
      return expr;
    }
    if (t == "ObjectExpression") {
      expr->type = "ObjectPattern";
      if (auto* props = std::get_if<NodeList>(expr->field("properties"))) {
        for (auto& p : *props) {
          if (p->type == "SpreadElement") {
            p->type = "RestElement";
            p->set("argument", to_pattern(std::get<NodePtr>(p->take("argument"))));
          } else if (p->type == "Property") {
            if (p->flag("method") || p->text("kind") != "init") {
              lex_.fail("Object pattern can't contain getter, setter or method", p->offset_begin);
            }
            if (auto* v = std::get_if<NodePtr>(p->field("value"))) *v = to_pattern(std::move(*v));
          }
        }
      }
      return expr;
    }
    if (t == "ArrayExpression") {
      expr->type = "ArrayPattern";
      if (auto* elements = std::get_if<NodeList>(expr->field("elements"))) {
        for (auto& e : *elements) {
          if (!e) continue;
          if (e->type == "SpreadElement") {
            e->type = "RestElement";
            e->set("argument", to_pattern(std::get<NodePtr>(e->take("argument"))));
          } else {
            e = to_pattern(std::move(e));
          }
        }
      }
      return expr;
    }
    if (t == "SpreadElement") {
      expr->type = "RestElement";
      expr->set("argument", to_pattern(std::get<NodePtr>(expr->take("argument"))));
      return expr;
    }
    if (t == "AssignmentExpression" && expr->text("operator") == "=") {
      expr->type = "AssignmentPattern";
      expr->take("operator");
      if (auto* left = std::get_if<NodePtr>(expr->field("left"))) *left = to_pattern(std::move(*left));
      return expr;
    }
    if (t == "ChainExpression") lex_.fail("Optional chaining cannot appear in left-hand side", expr->offset_begin);
    lex_.fail("Assigning to rvalue", expr->offset_begin);
  }

  // ---- expressions -------------------------------------------------------

  NodePtr parse_expression(bool no_in) {
    const std::size_t start = tok_.start;
    auto first = parse_assignment(no_in);
    if (!is(",")) return first;
    NodeList expressions;
    expressions.push_back(std::move(first));
    while (eat(",")) expressions.push_back(parse_assignment(no_in));
    auto node = make("SequenceExpression", start);
    node->set("expressions", std::move(expressions));
    return finish(std::move(node));
  }

  NodePtr parse_assignment(bool no_in) {
    DepthGuard guard(*this);
    if (is_name("yield") && in_generator()) return parse_yield(no_in);
    const std::size_t start = tok_.start;
    auto left = parse_conditional(no_in);
    if (is_assignment_operator(tok_)) {
      const std::string op = tok_.value;
      if (op == "=") {
        left = to_pattern(std::move(left));
      } else if (left->type != "Identifier" && left->type != "MemberExpression") {
        lex_.fail("Assigning to rvalue", left->offset_begin);
      }
      next();
      auto node = make("AssignmentExpression", start);
      node->set("operator", op);
      node->set("left", std::move(left));
      node->set("right", parse_assignment(no_in));
      return finish(std::move(node));
    }
    return left;
  }

  static bool starts_expression(const Token& t) {
    switch (t.kind) {
      case TokenKind::name:
        return t.escaped || (t.value != "in" && t.value != "instanceof" && t.value != "of");
      case TokenKind::punct:
        return t.value == "(" || t.value == "[" || t.value == "{" || t.value == "+" ||
               t.value == "-" || t.value == "!" || t.value == "~" || t.value == "++" ||
               t.value == "--" || t.value == "/" || t.value == "/=";
      case TokenKind::eof:
        return false;
      default:
        return true;
    }
  }

  NodePtr parse_yield(bool no_in) {
    auto node = make("YieldExpression", tok_.start);
    next();
    if (is(";") || can_insert_semicolon() || (!is("*") && !starts_expression(tok_))) {
      node->set("delegate", false);
      node->set("argument", std::monostate{});
    } else {
      const bool delegate = eat("*");
      node->set("delegate", delegate);
      node->set("argument", parse_assignment(no_in));
    }
    return finish(std::move(node));
  }

  NodePtr parse_conditional(bool no_in) {
    const std::size_t start = tok_.start;
    auto expr = parse_binary_start(no_in);
    if (!is("?")) return expr;
    if (expr->type == "ArrowFunctionExpression" && expr->offset_begin == start) return expr;
    next();
    auto node = make("ConditionalExpression", start);
    node->set("test", std::move(expr));
    node->set("consequent", parse_assignment(false));
    expect(":");
    node->set("alternate", parse_assignment(no_in));
    return finish(std::move(node));
  }

  NodePtr parse_binary_start(bool no_in) {
    const std::size_t start = tok_.start;
    auto left = parse_unary();
    if (left->type == "ArrowFunctionExpression" && left->offset_begin == start) return left;
    return parse_binary_rhs(std::move(left), start, -1, no_in);
  }

  NodePtr parse_binary_rhs(NodePtr left, std::size_t left_start, int min_prec, bool no_in) {
    for (;;) {
      const int prec = binary_precedence(tok_, no_in);
      if (prec < 0 || prec <= min_prec) return left;
      const std::string op = tok_.value;
      const bool logical = op == "||" || op == "&&" || op == "??";
      next();
      const std::size_t right_start = tok_.start;
      auto right =
          parse_binary_rhs(parse_unary(), right_start, op == "**" ? prec - 1 : prec, no_in);
      auto node = make(logical ? "LogicalExpression" : "BinaryExpression", left_start);
      node->set("left", std::move(left));
      node->set("operator", op);
      node->set("right", std::move(right));
      left = finish(std::move(node));
    }
  }

  NodePtr parse_unary() {
    DepthGuard guard(*this);
    const std::size_t start = tok_.start;
    if (is_name("await") && in_async() && await_is_operator()) {
      next();
      auto node = make("AwaitExpression", start);
      node->set("argument", parse_unary());
      return finish(std::move(node));
    }
    const bool word_op = tok_.kind == TokenKind::name && !tok_.escaped &&
                         (tok_.value == "typeof" || tok_.value == "void" || tok_.value == "delete");
    if (word_op || is("!") || is("~") || is("+") || is("-")) {
      auto node = make("UnaryExpression", start);
      node->set("operator", tok_.value);
      node->set("prefix", true);
      next();
      node->set("argument", parse_unary());
      return finish(std::move(node));
    }
    if (is("++") || is("--")) {
      auto node = make("UpdateExpression", start);
      node->set("operator", tok_.value);
      node->set("prefix", true);
      next();
      auto arg = parse_unary();
      if (arg->type != "Identifier" && arg->type != "MemberExpression") {
        lex_.fail("Invalid update target", arg->offset_begin);
      }
      node->set("argument", std::move(arg));
      return finish(std::move(node));
    }
    auto expr = parse_primary();
    if (expr->type == "ArrowFunctionExpression" && expr->offset_begin == start) return expr;
    expr = parse_subscripts(std::move(expr), start, false);
    while ((is("++") || is("--")) && !tok_.newline_before) {
      if (expr->type != "Identifier" && expr->type != "MemberExpression") {
        lex_.fail("Invalid update target", expr->offset_begin);
      }
      auto node = make("UpdateExpression", start);
      node->set("operator", tok_.value);
      node->set("prefix", false);
      next();
      node->set("argument", std::move(expr));
      expr = finish(std::move(node));
    }
    return expr;
  }

  // Outside async functions `await` is an identifier; at module top level it
  // is an operator when an operand follows on the same line.
  bool await_is_operator() {
    if (!fn_stack_.empty()) return true;
    Token p = peek();
    if (p.newline_before || p.kind == TokenKind::eof) return false;
    if (p.kind == TokenKind::punct) {
      return p.value == "(" || p.value == "[" || p.value == "{" || p.value == "!" ||
             p.value == "~" || p.value == "+" || p.value == "-" || p.value == "++" ||
             p.value == "--" || p.value == "/" || p.value == "/=";
    }
    if (p.kind == TokenKind::name && !p.escaped) {
      return p.value != "in" && p.value != "instanceof" && p.value != "of";
    }
    return true;
  }

  NodeList parse_arguments() {
    expect("(");
    NodeList args;
    while (!is(")")) {
      if (is("...")) {
        auto spread = make("SpreadElement", tok_.start);
        next();
        spread->set("argument", parse_assignment(false));
        args.push_back(finish(std::move(spread)));
      } else {
        args.push_back(parse_assignment(false));
      }
      if (!eat(",")) break;
    }
    expect(")");
    return args;
  }

  NodePtr parse_subscripts(NodePtr base, std::size_t start, bool no_calls) {
    bool chained = false;
    for (;;) {
      bool optional = false;
      if (is("?.")) {
        if (no_calls) lex_.fail("Optional chaining cannot appear in the callee of new", tok_.start);
        optional = true;
        chained = true;
        next();
      }
      if (is(".") || (optional && !is("(") && !is("["))) {
        if (!optional) next();
        auto node = make("MemberExpression", start);
        node->set("object", std::move(base));
        if (tok_.kind == TokenKind::private_name) {
          node->set("property", parse_private_identifier());
        } else {
          node->set("property", parse_identifier(true));
        }
        node->set("computed", false);
        node->set("optional", optional);
        base = finish(std::move(node));
      } else if (is("[")) {
        next();
        auto node = make("MemberExpression", start);
        node->set("object", std::move(base));
        node->set("property", parse_expression(false));
        node->set("computed", true);
        node->set("optional", optional);
        expect("]");
        base = finish(std::move(node));
      } else if (!no_calls && is("(")) {
        auto node = make("CallExpression", start);
        node->set("callee", std::move(base));
        node->set("arguments", parse_arguments());
        node->set("optional", optional);
        base = finish(std::move(node));
      } else if (tok_.kind == TokenKind::template_chunk) {
        if (chained) lex_.fail("Optional chaining cannot appear in the tag of tagged template", tok_.start);
        auto node = make("TaggedTemplateExpression", start);
        node->set("tag", std::move(base));
        node->set("quasi", parse_template());
        base = finish(std::move(node));
      } else {
        break;
      }
    }
    if (chained) {
      auto node = make("ChainExpression", start);
      node->set("expression", std::move(base));
      return finish(std::move(node));
    }
    return base;
  }

  NodePtr parse_template() {
    auto node = make("TemplateLiteral", tok_.start);
    NodeList quasis;
    NodeList expressions;
    for (;;) {
      if (tok_.kind != TokenKind::template_chunk) unexpected();
      auto element = make("TemplateElement", tok_.raw_start);
      element->set("tail", tok_.template_tail);
      element->set("raw", std::string(lex_.source().substr(tok_.raw_start, tok_.raw_end - tok_.raw_start)));
      if (tok_.cooked_valid) element->set("cooked", tok_.value);
      const std::size_t raw_end = tok_.raw_end;
      const bool tail = tok_.template_tail;
      next();
      quasis.push_back(finish_at(std::move(element), raw_end));
      if (tail) break;
      expressions.push_back(parse_expression(false));
      if (!is("}")) unexpected();
      const bool nl = tok_.newline_before;
      tok_ = lex_.rescan_template(tok_.start);
      tok_.newline_before = nl;
    }
    node->set("expressions", std::move(expressions));
    node->set("quasis", std::move(quasis));
    return finish(std::move(node));
  }

  NodePtr parse_new() {
    const std::size_t start = tok_.start;
    auto new_ident = parse_identifier(true);
    if (is(".")) {
      next();
      auto node = make("MetaProperty", start);
      node->set("meta", std::move(new_ident));
      if (!is_name("target")) unexpected();
      node->set("property", parse_identifier(true));
      return finish(std::move(node));
    }
    auto node = make("NewExpression", start);
    const std::size_t callee_start = tok_.start;
    if (is_name("import")) unexpected();
    NodePtr callee = is_name("new") ? parse_new() : parse_primary();
    node->set("callee", parse_subscripts(std::move(callee), callee_start, true));
    node->set("arguments", is("(") ? parse_arguments() : NodeList{});
    return finish(std::move(node));
  }

  NodePtr parse_primary() {
    const std::size_t start = tok_.start;
    switch (tok_.kind) {
      case TokenKind::number:
      case TokenKind::string:
        return literal_from_token();
      case TokenKind::template_chunk:
        return parse_template();
      case TokenKind::private_name: {
        auto id = parse_private_identifier();
        if (!is_name("in")) lex_.fail("Unexpected private name", start);
        return id;
      }
      case TokenKind::regex:
      case TokenKind::eof:
        unexpected();
      case TokenKind::punct:
        if (is("/") || is("/=")) {
          const bool nl = tok_.newline_before;
          tok_ = lex_.rescan_regex(tok_.start);
          tok_.newline_before = nl;
          auto node = make("Literal", start);
          node->set("raw", std::string(lex_.source().substr(tok_.start, tok_.end - tok_.start)));
          node->set("pattern", tok_.value);
          node->set("flags", tok_.regex_flags);
          next();
          return finish(std::move(node));
        }
        if (is("(")) return parse_paren_or_arrow();
        if (is("[")) return parse_array();
        if (is("{")) return parse_object();
        unexpected();
      case TokenKind::name:
        break;
    }

    if (!tok_.escaped) {
      const std::string& w = tok_.value;
      if (w == "this" || w == "super") {
        auto node = make(w == "this" ? "ThisExpression" : "Super", start);
        next();
        return finish(std::move(node));
      }
      if (w == "null" || w == "true" || w == "false") {
        auto node = make("Literal", start);
        if (w == "null") {
          node->set("value", std::monostate{});
        } else {
          node->set("value", w == "true");
        }
        node->set("raw", w);
        next();
        return finish(std::move(node));
      }
      if (w == "function") {
        next();
        return parse_function(start, false, false, true);
      }
      if (w == "class") return parse_class(start, false, true);
      if (w == "new") return parse_new();
      if (w == "import") {
        auto meta = parse_identifier(true);
        if (is(".")) {
          next();
          auto node = make("MetaProperty", start);
          node->set("meta", std::move(meta));
          node->set("property", parse_identifier(true));
          return finish(std::move(node));
        }
        if (!is("(")) unexpected();
        next();
        auto node = make("ImportExpression", start);
        node->set("source", parse_assignment(false));
        if (eat(",") && !is(")")) {
          node->set("options", parse_assignment(false));
          eat(",");
        } else {
          node->set("options", std::monostate{});
        }
        expect(")");
        return finish(std::move(node));
      }
      if (w == "async") {
        Token p = peek();
        if (name_is(p, "function") && !p.newline_before) {
          next();
          next();
          return parse_function(start, false, true, true);
        }
        if (is_identifier_token(p) && !p.newline_before && punct_is(peek2(), "=>")) {
          next();
          NodeList params;
          fn_stack_.push_back({true, false});
          params.push_back(parse_identifier(false));
          fn_stack_.pop_back();
          return parse_arrow(start, std::move(params), true);
        }
        if (punct_is(p, "(") && !p.newline_before) {
          auto callee = parse_identifier(false);
          NodeList args = parse_arguments();
          if (is("=>") && !tok_.newline_before) {
            for (auto& a : args) a = to_pattern(std::move(a));
            return parse_arrow(start, std::move(args), true);
          }
          auto call = make("CallExpression", start);
          call->set("callee", std::move(callee));
          call->set("arguments", std::move(args));
          call->set("optional", false);
          return finish(std::move(call));
        }
      }
    }

    auto id = parse_identifier(false);
    if (is("=>") && !tok_.newline_before) {
      NodeList params;
      params.push_back(std::move(id));
      return parse_arrow(start, std::move(params), false);
    }
    return id;
  }

  NodePtr parse_paren_or_arrow() {
    const std::size_t start = tok_.start;
    next();
    const std::size_t inner_start = tok_.start;
    NodeList items;
    bool trailing_comma = false;
    bool has_rest = false;
    bool first = true;
    while (!is(")")) {
      if (!first) {
        expect(",");
        if (is(")")) {
          trailing_comma = true;
          break;
        }
      }
      first = false;
      if (is("...")) {
        auto rest = make("RestElement", tok_.start);
        next();
        rest->set("argument", parse_binding_target());
        items.push_back(finish(std::move(rest)));
        has_rest = true;
        if (!is(")")) unexpected();
        break;
      }
      items.push_back(parse_assignment(false));
    }
    const std::size_t inner_end = prev_end_;
    expect(")");
    if (is("=>") && !tok_.newline_before) {
      for (auto& item : items) item = to_pattern(std::move(item));
      return parse_arrow(start, std::move(items), false);
    }
    if (items.empty() || has_rest || trailing_comma) lex_.fail("Unexpected token", prev_end_);
    if (items.size() == 1) return std::move(items.front());
    auto seq = make("SequenceExpression", inner_start);
    seq->set("expressions", std::move(items));
    return finish_at(std::move(seq), inner_end);
  }

  NodePtr parse_array() {
    auto node = make("ArrayExpression", tok_.start);
    next();
    NodeList elements;
    while (!is("]")) {
      if (is(",")) {
        next();
        elements.push_back(nullptr);
        continue;
      }
      if (is("...")) {
        auto spread = make("SpreadElement", tok_.start);
        next();
        spread->set("argument", parse_assignment(false));
        elements.push_back(finish(std::move(spread)));
      } else {
        elements.push_back(parse_assignment(false));
      }
      if (!is("]")) expect(",");
    }
    next();
    node->set("elements", std::move(elements));
    return finish(std::move(node));
  }

  static bool ends_object_key(const Token& t) {
    return punct_is(t, ",") || punct_is(t, ":") || punct_is(t, "(") || punct_is(t, "}") ||
           punct_is(t, "=") || t.kind == TokenKind::eof;
  }

  NodePtr parse_object() {
    auto node = make("ObjectExpression", tok_.start);
    next();
    NodeList properties;
    while (!is("}")) {
      if (is("...")) {
        auto spread = make("SpreadElement", tok_.start);
        next();
        spread->set("argument", parse_assignment(false));
        properties.push_back(finish(std::move(spread)));
        if (!is("}")) expect(",");
        continue;
      }
      const std::size_t start = tok_.start;
      bool is_async = false;
      bool generator = false;
      std::string kind = "init";
      if (is_name("async") && !ends_object_key(peek()) && !peek().newline_before) {
        is_async = true;
        next();
      }
      if (eat("*")) generator = true;
      if (!is_async && !generator && (is_name("get") || is_name("set")) &&
          !ends_object_key(peek())) {
        kind = tok_.value;
        next();
      }
      auto prop = make("Property", start);
      PropertyKey k = parse_property_key(false);
      if (kind != "init") {
        prop->set("method", false);
        prop->set("shorthand", false);
        prop->set("computed", k.computed);
        prop->set("key", std::move(k.key));
        prop->set("kind", kind);
        prop->set("value", parse_method(false, false));
      } else if (is("(")) {
        prop->set("method", true);
        prop->set("shorthand", false);
        prop->set("computed", k.computed);
        prop->set("key", std::move(k.key));
        prop->set("kind", kind);
        prop->set("value", parse_method(is_async, generator));
      } else {
        if (is_async || generator) unexpected();
        prop->set("method", false);
        prop->set("computed", k.computed);
        if (eat(":")) {
          prop->set("shorthand", false);
          prop->set("key", std::move(k.key));
          prop->set("value", parse_assignment(false));
        } else {
          if (k.computed || k.key->type != "Identifier") unexpected();
          prop->set("shorthand", true);
          auto value = clone_node(*k.key);
          if (is("=")) {
            next();
            auto assign = make("AssignmentPattern", value->offset_begin);
            assign->set("left", std::move(value));
            assign->set("right", parse_assignment(false));
            value = finish(std::move(assign));
          }
          prop->set("key", std::move(k.key));
          prop->set("value", std::move(value));
        }
        prop->set("kind", kind);
      }
      properties.push_back(finish(std::move(prop)));
      if (!is("}")) expect(",");
    }
    next();
    node->set("properties", std::move(properties));
    return finish(std::move(node));
  }

  Lexer lex_;
  Token tok_;
  std::size_t prev_end_ = 0;
  std::vector<FunctionContext> fn_stack_;
  int depth_ = 0;
};

}  // namespace

SyntaxTree parse_javascript(std::string_view source) { return Parser(source).parse(); }

}  // namespace jscity
