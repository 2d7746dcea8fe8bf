#pragma once

#include <string>

#include "permute/scenario/ast.hpp"

namespace permute::scenario {

namespace detail {

inline int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Or: return 1;
    case ExprOp::And: return 2;
    case ExprOp::Eq:
    case ExprOp::Ne: return 3;
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: return 4;
    case ExprOp::Add:
    case ExprOp::Sub: return 5;
    case ExprOp::Mul: return 6;
    default: return 7;
  }
}

inline const char* symbol(ExprOp op) {
  switch (op) {
    case ExprOp::Or: return "||";
    case ExprOp::And: return "&&";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Neg: return "-";
    case ExprOp::Not: return "!";
    default: return "";
  }
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

}  // namespace detail

// Binary operators are left-associative, so a right operand of equal
// precedence keeps its parentheses.
inline std::string print_expr(const Expr& e, int min_prec = 0) {
  using detail::precedence;
  std::string out;
  switch (e.op) {
    case ExprOp::Int: return std::to_string(e.value);
    case ExprOp::Name: return e.name;
    case ExprOp::Neg:
    case ExprOp::Not: return std::string(detail::symbol(e.op)) + print_expr(e.args[0], 7);
    default: {
      const int p = precedence(e.op);
      out = print_expr(e.args[0], p) + " " + detail::symbol(e.op) + " " + print_expr(e.args[1], p + 1);
      return p < min_prec ? "(" + out + ")" : out;
    }
  }
}

inline void print_block(std::string& out, const std::vector<Stmt>& block, int depth);

inline void print_stmt(std::string& out, const Stmt& s, int depth) {
  detail::indent(out, depth);
  switch (s.kind) {
    case StmtKind::Op:
      if (!s.target.empty()) {
        out += s.target + " = " + s.op + " " + s.args[0] + ";\n";
      } else if (s.op == "write") {
        out += "write " + s.args[0] + " " + print_expr(s.expr) + ";\n";
      } else {
        out += s.op;
        for (const auto& a : s.args) out += " " + a;
        out += ";\n";
      }
      return;
    case StmtKind::Assign: out += s.target + " = " + print_expr(s.expr) + ";\n"; return;
    case StmtKind::Assert:
      out += "assert(" + print_expr(s.expr);
      if (s.message) out += ", " + detail::quote(*s.message);
      out += ");\n";
      return;
    case StmtKind::If:
      out += "if (" + print_expr(s.expr) + ") {\n";
      print_block(out, s.body, depth + 1);
      detail::indent(out, depth);
      out += "}";
      if (!s.else_body.empty()) {
        out += " else {\n";
        print_block(out, s.else_body, depth + 1);
        detail::indent(out, depth);
        out += "}";
      }
      out += "\n";
      return;
    case StmtKind::While:
      out += "while (" + print_expr(s.expr) + ") {\n";
      print_block(out, s.body, depth + 1);
      detail::indent(out, depth);
      out += "}\n";
      return;
    case StmtKind::Repeat:
      out += "repeat " + std::to_string(s.count) + " {\n";
      print_block(out, s.body, depth + 1);
      detail::indent(out, depth);
      out += "}\n";
      return;
  }
}

inline void print_block(std::string& out, const std::vector<Stmt>& block, int depth) {
  for (const auto& s : block) print_stmt(out, s, depth);
}

inline std::string print_decl(const Decl& d) {
  std::string out = d.kind + " " + d.name;
  if (d.kind == "sem" || d.kind == "var") out += " = " + std::to_string(d.value);
  if (d.kind == "barrier") out += "(" + std::to_string(d.value) + ")";
  if (d.kind == "rwlock") out += " " + std::string(to_string(d.preference));
  if (d.policy) out += " policy " + std::string(to_string(*d.policy));
  if (d.spurious) out += " spurious " + std::to_string(*d.spurious);
  return out;
}

inline std::string print_scenario(const ScenarioProgram& p) {
  std::string out;
  for (const auto& d : p.decls) out += print_decl(d) + "\n";
  for (const auto& o : p.options) {
    out += "option " + o.name;
    if (o.value) out += " " + std::to_string(*o.value);
    out += "\n";
  }
  for (const auto& t : p.threads) {
    out += "\nthread " + t.name + " {\n";
    print_block(out, t.body, 1);
    out += "}\n";
  }
  return out;
}

}  // namespace permute::scenario
