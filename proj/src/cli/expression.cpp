#include "xsect/cli/expression.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <numbers>

namespace xsect::cli {

ExpressionError::ExpressionError(const std::string& message, int column)
    : Error(message + " at column " + std::to_string(column)), column_(column) {}

struct Expression::Node {
  enum class Kind { Number, Coordinate, Negate, Add, Sub, Mul, Div, Sin, Cos } kind;
  double value = 0.0;
  int axis = 0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(const forms::Point& p) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Coordinate: return p[axis];
      case Kind::Negate: return -lhs->eval(p);
      case Kind::Add: return lhs->eval(p) + rhs->eval(p);
      case Kind::Sub: return lhs->eval(p) - rhs->eval(p);
      case Kind::Mul: return lhs->eval(p) * rhs->eval(p);
      case Kind::Div: return lhs->eval(p) / rhs->eval(p);
      case Kind::Sin: return std::sin(lhs->eval(p));
      case Kind::Cos: return std::cos(lhs->eval(p));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    NodePtr e = sum();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExpressionError(msg, static_cast<int>(pos_) + 1); }

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

  NodePtr sum() {
    NodePtr e = product();
    for (;;) {
      if (accept('+')) e = make(Node::Kind::Add, e, product());
      else if (accept('-')) e = make(Node::Kind::Sub, e, product());
      else return e;
    }
  }

  NodePtr product() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*')) e = make(Node::Kind::Mul, e, unary());
      else if (accept('/')) e = make(Node::Kind::Div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Negate, unary());
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ == s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    if (id == "pi") {
      n->kind = Node::Kind::Number;
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "x" || id == "y" || id == "z") {
      n->kind = Node::Kind::Coordinate;
      n->axis = id[0] - 'x';
      return n;
    }
    if (id == "sin" || id == "cos") {
      if (!accept('(')) fail("expected '(' after " + id);
      NodePtr arg = sum();
      if (!accept(')')) fail("expected ')'");
      return make(id == "sin" ? Node::Kind::Sin : Node::Kind::Cos, arg);
    }
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string text, std::shared_ptr<const Node> root)
    : text_(std::move(text)), root_(std::move(root)) {}

Expression Expression::parse(const std::string& text) {
  NodePtr root = Parser(text).parse();
  return Expression(text, std::move(root));
}

double Expression::operator()(const forms::Point& p) const { return root_->eval(p); }

}  // namespace xsect::cli
