#include "lorentz/expression.hpp"

#include "lorentz/error.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace lorentz {

enum class Op {
  Number, VarT, VarX1, VarX2, VarX3, ConstPi, ConstPeriod,
  Neg, Add, Sub, Mul, Div, Pow,
  Sin, Cos, Exp, Log, Sqrt, Abs,
};

struct Expression::Node {
  Op op = Op::Number;
  double value = 0.0;
  int lhs = -1;
  int rhs = -1;
};

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Expression::Node> nodes;

  int parse() {
    const int root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ConfigError, "expression \"" + std::string(text_) + "\": " + what +
                                            " at column " + std::to_string(pos_ + 1));
  }

  int add(Op op, int lhs = -1, int rhs = -1, double value = 0.0) {
    nodes.push_back({op, value, lhs, rhs});
    return static_cast<int>(nodes.size()) - 1;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // Returns the canonical ASCII operator at the cursor, folding the unicode spellings.
  char peek_op(std::size_t* width = nullptr) {
    skip_space();
    if (pos_ >= text_.size()) return '\0';
    auto starts = [&](std::string_view s) { return text_.substr(pos_, s.size()) == s; };
    std::size_t w = 1;
    char c = text_[pos_];
    if (starts("\xC3\x97")) { c = '*'; w = 2; }
    else if (starts("\xC3\xB7")) { c = '/'; w = 2; }
    else if (starts("\xE2\x88\x92")) { c = '-'; w = 3; }
    if (width) *width = w;
    return c;
  }

  bool accept(char op) {
    std::size_t w = 1;
    if (peek_op(&w) != op) return false;
    pos_ += w;
    return true;
  }

  int expression() {
    int lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(Op::Add, lhs, term());
      else if (accept('-')) lhs = add(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (accept('*')) lhs = add(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = add(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  int unary() {
    if (accept('-')) return add(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    const int base = primary();
    if (accept('^')) return add(Op::Pow, base, unary());
    return base;
  }

  int primary() {
    const char c = peek_op();
    if (c == '\0') fail("unexpected end of input");
    if (accept('(')) {
      const int inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (accept('|')) {
      const int inner = expression();
      if (!accept('|')) fail("expected closing '|'");
      return add(Op::Abs, inner);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  int number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return add(Op::Number, -1, -1, v);
  }

  int identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return add(Op::VarT);
    if (name == "x1") return add(Op::VarX1);
    if (name == "x2") return add(Op::VarX2);
    if (name == "x3") return add(Op::VarX3);
    if (name == "pi") return add(Op::ConstPi);
    if (name == "T") return add(Op::ConstPeriod);

    Op fn;
    if (name == "sin") fn = Op::Sin;
    else if (name == "cos") fn = Op::Cos;
    else if (name == "exp") fn = Op::Exp;
    else if (name == "log") fn = Op::Log;
    else if (name == "sqrt") fn = Op::Sqrt;
    else if (name == "abs") fn = Op::Abs;
    else if (name == "pow") fn = Op::Pow;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!accept('(')) fail("expected '(' after " + std::string(name));
    const int first = expression();
    int second = -1;
    if (fn == Op::Pow) {
      if (!accept(',')) fail("pow takes two arguments");
      second = expression();
    }
    if (!accept(')')) fail("expected ')'");
    return add(fn, first, second);
  }
};

double eval(const std::vector<Expression::Node>& nodes, int i, double t, const Vec3& x, double period) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  auto L = [&] { return eval(nodes, n.lhs, t, x, period); };
  auto R = [&] { return eval(nodes, n.rhs, t, x, period); };
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::VarT: return t;
    case Op::VarX1: return x.x();
    case Op::VarX2: return x.y();
    case Op::VarX3: return x.z();
    case Op::ConstPi: return std::numbers::pi;
    case Op::ConstPeriod: return period;
    case Op::Neg: return -L();
    case Op::Add: return L() + R();
    case Op::Sub: return L() - R();
    case Op::Mul: return L() * R();
    case Op::Div: return L() / R();
    case Op::Pow: return std::pow(L(), R());
    case Op::Sin: return std::sin(L());
    case Op::Cos: return std::cos(L());
    case Op::Exp: return std::exp(L());
    case Op::Log: return std::log(L());
    case Op::Sqrt: return std::sqrt(L());
    case Op::Abs: return std::abs(L());
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  Expression e;
  e.root_ = parser.parse();
  e.source_ = std::string(text);
  e.nodes_ = std::make_shared<const std::vector<Node>>(std::move(parser.nodes));
  return e;
}

double Expression::evaluate(double t, const Vec3& x, double period) const {
  return eval(*nodes_, root_, t, x, period);
}

}  // namespace lorentz
