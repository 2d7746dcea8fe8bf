#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "permute/scenario/ast.hpp"
#include "permute/scenario/lexer.hpp"

namespace permute::scenario {

struct OpSignature {
  std::vector<std::vector<std::string_view>> operands;  // accepted object kinds per operand
};

// Visible-operation statements and the object kinds they accept.
inline const std::map<std::string, OpSignature, std::less<>>& op_table() {
  static const std::map<std::string, OpSignature, std::less<>> table = {
      {"lock", {{{"mutex"}}}},
      {"unlock", {{{"mutex"}}}},
      {"sem_wait", {{{"sem"}}}},
      {"sem_post", {{{"sem"}}}},
      {"cond_wait", {{{"cond"}, {"mutex"}}}},
      {"cond_signal", {{{"cond"}}}},
      {"cond_broadcast", {{{"cond"}}}},
      {"rdlock", {{{"rwlock", "rwwlock"}}}},
      {"wrlock", {{{"rwlock"}}}},
      {"wrlock1", {{{"rwwlock"}}}},
      {"wrlock2", {{{"rwwlock"}}}},
      {"rwunlock", {{{"rwlock", "rwwlock"}}}},
      {"barrier_wait", {{{"barrier"}}}},
  };
  return table;
}

// Options a scenario file may set; the flag says whether it takes a value.
inline const std::map<std::string, bool, std::less<>>& option_table() {
  static const std::map<std::string, bool, std::less<>> table = {
      {"nojoin", false},         {"max_thread_depth", true}, {"max_spurious_wakeups", true},
      {"first_deadlock", false}, {"stop_at_first_failure", false}, {"no_sleep_sets", false},
  };
  return table;
}

inline bool is_reserved(std::string_view w) {
  static const std::set<std::string, std::less<>> words = {
      "mutex", "sem", "cond", "rwlock", "rwwlock", "barrier", "var", "option", "thread", "policy", "spurious",
      "assert", "if", "else", "while", "repeat", "read", "write", "sem_getvalue"};
  return words.contains(w) || op_table().contains(w);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  ScenarioProgram parse() {
    ScenarioProgram p;
    while (peek().type != Tok::End) {
      const Token& t = peek();
      if (t.type != Tok::Name) throw ScenarioError(t.pos, "expected a declaration, option or thread");
      if (t.text == "thread")
        p.threads.push_back(thread());
      else if (t.text == "option")
        p.options.push_back(option());
      else
        p.decls.push_back(decl());
    }
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_punct(std::string_view p) const { return peek().type == Tok::Punct && peek().text == p; }
  bool at_word(std::string_view w) const { return peek().type == Tok::Name && peek().text == w; }

  static std::string show(const Token& t) {
    switch (t.type) {
      case Tok::End: return "end of input";
      case Tok::String: return "string \"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p)) throw ScenarioError(peek().pos, "expected '" + std::string(p) + "', found " + show(peek()));
    next();
  }
  // The last simple statement of a block may drop its semicolon.
  void end_statement() {
    if (!at_punct("}")) expect_punct(";");
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) throw ScenarioError(peek().pos, "expected '" + std::string(w) + "', found " + show(peek()));
    next();
  }
  std::string name(std::string_view what) {
    const Token& t = peek();
    if (t.type != Tok::Name) throw ScenarioError(t.pos, "expected " + std::string(what) + ", found " + show(t));
    if (is_reserved(t.text)) throw ScenarioError(t.pos, "'" + t.text + "' is a reserved word");
    return next().text;
  }
  std::int64_t integer() {
    const Token& t = peek();
    if (t.type != Tok::Int) throw ScenarioError(t.pos, "expected an integer, found " + show(t));
    return next().value;
  }

  Decl decl() {
    Decl d;
    d.pos = peek().pos;
    d.kind = next().text;
    if (d.kind == "mutex") {
      d.name = name("a mutex name");
      policy_attr(d);
    } else if (d.kind == "sem") {
      d.name = name("a semaphore name");
      expect_punct("=");
      d.value = integer();
      policy_attr(d);
    } else if (d.kind == "cond") {
      d.name = name("a condition variable name");
      policy_attr(d);
      if (at_word("spurious")) {
        next();
        d.spurious = static_cast<std::uint32_t>(integer());
      }
    } else if (d.kind == "rwlock") {
      d.name = name("an rwlock name");
      const Token& t = peek();
      if (t.type == Tok::Name && t.text == "reader_pref")
        d.preference = RwPreference::Reader;
      else if (t.type == Tok::Name && t.text == "writer_pref")
        d.preference = RwPreference::Writer;
      else if (t.type == Tok::Name && t.text == "no_pref")
        d.preference = RwPreference::None;
      else
        throw ScenarioError(t.pos, "expected reader_pref, writer_pref or no_pref, found " + show(t));
      next();
    } else if (d.kind == "rwwlock") {
      d.name = name("an rwwlock name");
    } else if (d.kind == "barrier") {
      d.name = name("a barrier name");
      expect_punct("(");
      d.value = integer();
      if (d.value < 1) throw ScenarioError(d.pos, "barrier " + d.name + " needs at least one party");
      expect_punct(")");
    } else if (d.kind == "var") {
      d.name = name("a variable name");
      expect_punct("=");
      const bool negative = at_punct("-");
      if (negative) next();
      d.value = negative ? -integer() : integer();
    } else {
      throw ScenarioError(d.pos, "unknown declaration '" + d.kind + "'");
    }
    return d;
  }

  void policy_attr(Decl& d) {
    if (!at_word("policy")) return;
    next();
    const Token& t = peek();
    auto p = t.type == Tok::Name ? parse_policy(t.text) : std::nullopt;
    if (!p) throw ScenarioError(t.pos, "unknown wakeup policy " + show(t));
    next();
    d.policy = p;
  }

  OptionSetting option() {
    OptionSetting o;
    o.pos = next().pos;
    const Token& t = peek();
    if (t.type != Tok::Name) throw ScenarioError(t.pos, "expected an option name, found " + show(t));
    o.name = next().text;
    auto it = option_table().find(o.name);
    if (it == option_table().end()) throw ScenarioError(t.pos, "unknown option '" + o.name + "'");
    if (it->second) o.value = integer();
    return o;
  }

  ThreadDef thread() {
    ThreadDef th;
    th.pos = next().pos;
    th.name = name("a thread name");
    th.body = block();
    return th;
  }

  std::vector<Stmt> block() {
    expect_punct("{");
    std::vector<Stmt> out;
    while (!at_punct("}")) {
      if (peek().type == Tok::End) throw ScenarioError(peek().pos, "unterminated block");
      out.push_back(statement());
    }
    next();
    return out;
  }

  Stmt statement() {
    Stmt s;
    s.pos = peek().pos;
    const Token& t = peek();
    if (t.type != Tok::Name) throw ScenarioError(t.pos, "expected a statement, found " + show(t));

    if (t.text == "if") {
      next();
      s.kind = StmtKind::If;
      s.expr = condition();
      s.body = block();
      if (at_word("else")) {
        next();
        s.else_body = block();
      }
      return s;
    }
    if (t.text == "while") {
      next();
      s.kind = StmtKind::While;
      s.expr = condition();
      s.body = block();
      return s;
    }
    if (t.text == "repeat") {
      next();
      s.kind = StmtKind::Repeat;
      s.count = integer();
      s.body = block();
      return s;
    }
    if (t.text == "assert") {
      next();
      s.kind = StmtKind::Assert;
      expect_punct("(");
      s.expr = expr();
      if (at_punct(",")) {
        next();
        if (peek().type != Tok::String) throw ScenarioError(peek().pos, "expected a message string, found " + show(peek()));
        s.message = next().text;
      }
      expect_punct(")");
      end_statement();
      return s;
    }
    if (t.text == "write") {
      next();
      s.kind = StmtKind::Op;
      s.op = "write";
      s.args.push_back(name("a variable name"));
      s.expr = expr();
      end_statement();
      return s;
    }
    if (auto it = op_table().find(t.text); it != op_table().end()) {
      next();
      s.kind = StmtKind::Op;
      s.op = it->first;
      for (std::size_t i = 0; i < it->second.operands.size(); ++i) {
        if (peek().type != Tok::Name)
          throw ScenarioError(peek().pos, s.op + " takes " + std::to_string(it->second.operands.size()) +
                                              " operand(s), found " + show(peek()));
        s.args.push_back(name("an object name"));
      }
      if (peek().type == Tok::Name && !at_punct(";"))
        throw ScenarioError(peek().pos, s.op + " takes " + std::to_string(it->second.operands.size()) + " operand(s)");
      end_statement();
      return s;
    }

    s.target = name("a statement");
    expect_punct("=");
    if (at_word("read") || at_word("sem_getvalue")) {
      s.kind = StmtKind::Op;
      s.op = next().text;
      s.args.push_back(name("an operand name"));
    } else {
      s.kind = StmtKind::Assign;
      s.expr = expr();
    }
    end_statement();
    return s;
  }

  Expr condition() {
    expect_punct("(");
    Expr e = expr();
    expect_punct(")");
    return e;
  }

  static Expr node(ExprOp op, SourcePos pos, std::vector<Expr> args) {
    Expr e;
    e.op = op;
    e.pos = pos;
    e.args = std::move(args);
    return e;
  }

  // Precedence climbing over: || && (== !=) (< <= > >=) (+ -) (*)
  Expr expr(int level = 0) {
    static const std::vector<std::vector<std::pair<std::string_view, ExprOp>>> levels = {
        {{"||", ExprOp::Or}},
        {{"&&", ExprOp::And}},
        {{"==", ExprOp::Eq}, {"!=", ExprOp::Ne}},
        {{"<", ExprOp::Lt}, {"<=", ExprOp::Le}, {">", ExprOp::Gt}, {">=", ExprOp::Ge}},
        {{"+", ExprOp::Add}, {"-", ExprOp::Sub}},
        {{"*", ExprOp::Mul}},
    };
    if (level == static_cast<int>(levels.size())) return unary();
    Expr lhs = expr(level + 1);
    for (;;) {
      const auto& ops = levels[level];
      auto it = std::find_if(ops.begin(), ops.end(), [&](const auto& o) { return at_punct(o.first); });
      if (it == ops.end()) return lhs;
      const SourcePos pos = next().pos;
      Expr rhs = expr(level + 1);
      lhs = node(it->second, pos, {std::move(lhs), std::move(rhs)});
    }
  }

  Expr unary() {
    const SourcePos pos = peek().pos;
    if (at_punct("-")) {
      next();
      return node(ExprOp::Neg, pos, {unary()});
    }
    if (at_punct("!")) {
      next();
      return node(ExprOp::Not, pos, {unary()});
    }
    if (at_punct("(")) {
      next();
      Expr e = expr();
      expect_punct(")");
      return e;
    }
    if (peek().type == Tok::Int) {
      Expr e;
      e.op = ExprOp::Int;
      e.value = next().value;
      e.pos = pos;
      return e;
    }
    if (peek().type == Tok::Name) {
      Expr e;
      e.op = ExprOp::Name;
      e.name = name("an expression");
      e.pos = pos;
      return e;
    }
    throw ScenarioError(pos, "expected an expression, found " + show(peek()));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

namespace detail {

inline void collect_locals(const std::vector<Stmt>& block, const ScenarioProgram& p, std::set<std::string>& out) {
  for (const auto& s : block) {
    if (!s.target.empty() && !p.decl(s.target)) out.insert(s.target);
    collect_locals(s.body, p, out);
    collect_locals(s.else_body, p, out);
  }
}

inline void check_expr(const Expr& e, const ScenarioProgram& p, const std::set<std::string>& locals) {
  if (e.op == ExprOp::Name) {
    const Decl* d = p.decl(e.name);
    if (d && d->kind != "var") throw ScenarioError(e.pos, "'" + e.name + "' is a " + d->kind + ", not a variable");
    if (!d && !locals.contains(e.name)) throw ScenarioError(e.pos, "undeclared identifier '" + e.name + "'");
  }
  for (const auto& a : e.args) check_expr(a, p, locals);
}

inline void check_block(const std::vector<Stmt>& block, const ScenarioProgram& p, const std::set<std::string>& locals) {
  for (const auto& s : block) {
    if (!s.target.empty()) {
      if (const Decl* d = p.decl(s.target); d && d->kind != "var")
        throw ScenarioError(s.pos, "cannot assign to " + d->kind + " '" + s.target + "'");
    }
    switch (s.kind) {
      case StmtKind::Op: {
        if (s.op == "read" || s.op == "write") {
          const Decl* d = p.decl(s.args[0]);
          if (!d) throw ScenarioError(s.pos, "undeclared identifier '" + s.args[0] + "'");
          if (d->kind != "var") throw ScenarioError(s.pos, s.op + " needs a shared variable, '" + s.args[0] + "' is a " + d->kind);
          if (s.op == "write") check_expr(s.expr, p, locals);
          break;
        }
        const std::vector<std::vector<std::string_view>> sem_kinds = {{"sem"}};
        const auto& kinds = s.op == "sem_getvalue" ? sem_kinds : op_table().at(s.op).operands;
        if (kinds.size() != s.args.size())
          throw ScenarioError(s.pos, s.op + " takes " + std::to_string(kinds.size()) + " operand(s)");
        for (std::size_t i = 0; i < kinds.size(); ++i) {
          const Decl* d = p.decl(s.args[i]);
          if (!d) throw ScenarioError(s.pos, "undeclared identifier '" + s.args[i] + "'");
          if (std::find(kinds[i].begin(), kinds[i].end(), d->kind) == kinds[i].end())
            throw ScenarioError(s.pos, s.op + " cannot act on " + d->kind + " '" + s.args[i] + "'");
        }
        break;
      }
      case StmtKind::Repeat:
        if (s.count < 0) throw ScenarioError(s.pos, "repeat count must be non-negative");
        break;
      default: check_expr(s.expr, p, locals);
    }
    check_block(s.body, p, locals);
    check_block(s.else_body, p, locals);
  }
}

}  // namespace detail

// Name resolution and operand kinds. Assignment targets that are not declared
// variables become thread-local variables.
inline void validate(const ScenarioProgram& p) {
  std::set<std::string> names;
  for (const auto& d : p.decls)
    if (!names.insert(d.name).second) throw ScenarioError(d.pos, "duplicate name '" + d.name + "'");
  for (const auto& t : p.threads)
    if (!names.insert(t.name).second) throw ScenarioError(t.pos, "duplicate name '" + t.name + "'");
  std::set<std::string> options;
  for (const auto& o : p.options)
    if (!options.insert(o.name).second) throw ScenarioError(o.pos, "option '" + o.name + "' set twice");
  for (const auto& t : p.threads) {
    std::set<std::string> locals;
    detail::collect_locals(t.body, p, locals);
    detail::check_block(t.body, p, locals);
  }
}

inline ScenarioProgram parse_scenario(std::string_view text) {
  ScenarioProgram p = Parser(text).parse();
  validate(p);
  return p;
}

}  // namespace permute::scenario
