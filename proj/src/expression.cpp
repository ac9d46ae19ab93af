#include "visang/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "visang/errors.hpp"

namespace visang {

struct Expression::Node {
  enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Func };
  Kind kind;
  double value = 0.0;
  std::string func;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr constant(double v) { return std::make_shared<const Node>(Node{Kind::Const, v, {}, nullptr, nullptr}); }
NodePtr variable() { return std::make_shared<const Node>(Node{Kind::Var, 0.0, {}, nullptr, nullptr}); }

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::Const && n->value == v; }

NodePtr unary(Kind k, NodePtr a) {
  if (k == Kind::Neg && a->kind == Kind::Const) return constant(-a->value);
  return std::make_shared<const Node>(Node{k, 0.0, {}, std::move(a), nullptr});
}

NodePtr call(std::string f, NodePtr a) {
  return std::make_shared<const Node>(Node{Kind::Func, 0.0, std::move(f), std::move(a), nullptr});
}

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
  switch (k) {
    case Kind::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case Kind::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return unary(Kind::Neg, b);
      break;
    case Kind::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case Kind::Div:
      if (is_const(a, 0.0)) return constant(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case Kind::Pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return constant(1.0);
      break;
    default: break;
  }
  if (a->kind == Kind::Const && b->kind == Kind::Const) {
    const double x = a->value, y = b->value;
    switch (k) {
      case Kind::Add: return constant(x + y);
      case Kind::Sub: return constant(x - y);
      case Kind::Mul: return constant(x * y);
      case Kind::Div: return constant(x / y);
      case Kind::Pow: return constant(std::pow(x, y));
      default: break;
    }
  }
  return std::make_shared<const Node>(Node{k, 0.0, {}, std::move(a), std::move(b)});
}

double apply(const std::string& f, double x) {
  if (f == "sin") return std::sin(x);
  if (f == "cos") return std::cos(x);
  if (f == "tan") return std::tan(x);
  if (f == "sqrt") return std::sqrt(x);
  if (f == "exp") return std::exp(x);
  if (f == "log") return std::log(x);
  if (f == "abs") return std::abs(x);
  if (f == "sign") return (x > 0.0) - (x < 0.0);
  throw GeometryError(ErrorKind::InvalidArgument, "unknown function " + f);
}

double evaluate(const Node& n, double w) {
  switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::Var: return w;
    case Kind::Neg: return -evaluate(*n.a, w);
    case Kind::Add: return evaluate(*n.a, w) + evaluate(*n.b, w);
    case Kind::Sub: return evaluate(*n.a, w) - evaluate(*n.b, w);
    case Kind::Mul: return evaluate(*n.a, w) * evaluate(*n.b, w);
    case Kind::Div: return evaluate(*n.a, w) / evaluate(*n.b, w);
    case Kind::Pow: {
      const double base = evaluate(*n.a, w);
      if (n.b->kind == Kind::Const) {
        const double e = n.b->value;
        if (e == std::round(e) && std::abs(e) <= 16) {
          double r = 1.0;
          for (int i = 0; i < std::abs(static_cast<int>(e)); ++i) r *= base;
          return e < 0 ? 1.0 / r : r;
        }
      }
      return std::pow(base, evaluate(*n.b, w));
    }
    case Kind::Func: return apply(n.func, evaluate(*n.a, w));
  }
  return 0.0;
}

NodePtr differentiate(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Const: return constant(0.0);
    case Kind::Var: return constant(1.0);
    case Kind::Neg: return unary(Kind::Neg, differentiate(n->a));
    case Kind::Add: return binary(Kind::Add, differentiate(n->a), differentiate(n->b));
    case Kind::Sub: return binary(Kind::Sub, differentiate(n->a), differentiate(n->b));
    case Kind::Mul:
      return binary(Kind::Add, binary(Kind::Mul, differentiate(n->a), n->b),
                    binary(Kind::Mul, n->a, differentiate(n->b)));
    case Kind::Div:
      return binary(Kind::Div,
                    binary(Kind::Sub, binary(Kind::Mul, differentiate(n->a), n->b),
                           binary(Kind::Mul, n->a, differentiate(n->b))),
                    binary(Kind::Pow, n->b, constant(2.0)));
    case Kind::Pow: {
      if (n->b->kind == Kind::Const) {
        const double e = n->b->value;
        return binary(Kind::Mul, binary(Kind::Mul, constant(e), binary(Kind::Pow, n->a, constant(e - 1.0))),
                      differentiate(n->a));
      }
      // d(a^b) = a^b (b' log a + b a' / a)
      return binary(Kind::Mul, n,
                    binary(Kind::Add, binary(Kind::Mul, differentiate(n->b), call("log", n->a)),
                           binary(Kind::Div, binary(Kind::Mul, n->b, differentiate(n->a)), n->a)));
    }
    case Kind::Func: {
      const NodePtr& a = n->a;
      const NodePtr da = differentiate(a);
      NodePtr outer;
      if (n->func == "sin") outer = call("cos", a);
      else if (n->func == "cos") outer = unary(Kind::Neg, call("sin", a));
      else if (n->func == "tan") outer = binary(Kind::Div, constant(1.0), binary(Kind::Pow, call("cos", a), constant(2.0)));
      else if (n->func == "sqrt") outer = binary(Kind::Div, constant(0.5), call("sqrt", a));
      else if (n->func == "exp") outer = call("exp", a);
      else if (n->func == "log") outer = binary(Kind::Div, constant(1.0), a);
      else if (n->func == "abs") outer = call("sign", a);
      else outer = constant(0.0);  // sign
      return binary(Kind::Mul, outer, da);
    }
  }
  return constant(0.0);
}

void print(const Node& n, std::ostringstream& os) {
  switch (n.kind) {
    case Kind::Const: os << n.value; return;
    case Kind::Var: os << 'w'; return;
    case Kind::Neg: os << "(-"; print(*n.a, os); os << ')'; return;
    case Kind::Func: os << n.func << '('; print(*n.a, os); os << ')'; return;
    default: break;
  }
  const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*'
                : n.kind == Kind::Div ? '/' : '^';
  os << '(';
  print(*n.a, os);
  os << ' ' << op << ' ';
  print(*n.b, os);
  os << ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at position " << pos_ << " in \"" << s_ << '"';
    throw GeometryError(ErrorKind::InvalidArgument, os.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = binary(Kind::Add, lhs, term());
      else if (accept('-')) lhs = binary(Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = signed_factor();
    for (;;) {
      if (accept('*')) lhs = binary(Kind::Mul, lhs, signed_factor());
      else if (accept('/')) lhs = binary(Kind::Div, lhs, signed_factor());
      else return lhs;
    }
  }

  NodePtr signed_factor() {
    if (accept('-')) return unary(Kind::Neg, signed_factor());
    if (accept('+')) return signed_factor();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Kind::Pow, base, signed_factor());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(rest, &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (name == "w") return variable();
      if (name == "pi") return constant(std::numbers::pi);
      static constexpr std::string_view funcs[] = {"sin", "cos", "tan", "sqrt", "exp", "log", "abs"};
      for (auto f : funcs) {
        if (name == f) {
          if (!accept('(')) fail("expected '(' after " + name);
          NodePtr arg = expr();
          if (!accept(')')) fail("expected ')'");
          return call(name, arg);
        }
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

double Expression::operator()(double w) const { return evaluate(*root_, w); }

Expression Expression::derivative() const { return Expression(differentiate(root_)); }

std::string Expression::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

}  // namespace visang
