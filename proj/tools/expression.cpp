#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include "warpgeo/errors.hpp"

namespace warpgeo::cli {

struct Expression::Node {
  enum Kind { Number, Coordinate, Add, Sub, Mul, Div, Neg, Pow, Call } kind = Number;
  double value = 0.0;
  int index = 0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

const std::set<std::string> kUnary = {"exp", "log", "sin", "cos", "sinh", "cosh", "sqrt"};
const std::set<std::string> kRejected = {"abs", "sign", "sgn", "floor", "ceil", "round", "min", "max",
                                          "step", "heaviside", "mod", "fmod", "trunc"};

NodePtr make(Node::Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& coords, const std::map<std::string, double>& consts)
      : s_(text), coords_(coords), consts_(consts) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "column " + std::to_string(pos_ + 1) + ": " + what + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Node::Add, {n, term()});
      else if (eat('-'))
        n = make(Node::Sub, {n, term()});
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Node::Mul, {n, unary()});
      else if (eat('/'))
        n = make(Node::Div, {n, unary()});
      else
        return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (eat('(')) {
      if (kRejected.count(id)) {
        pos_ = start;
        throw Error(ErrorCode::ExpressionNotDifferentiable,
                    "column " + std::to_string(start + 1) + ": '" + id + "' is not smooth in \"" + s_ + "\"");
      }
      if (!kUnary.count(id) && id != "pow") {
        pos_ = start;
        fail("unknown function '" + id + "'");
      }
      std::vector<NodePtr> args{expr()};
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail("expected ')'");
      const std::size_t want = id == "pow" ? 2 : 1;
      if (args.size() != want) fail(id + " takes " + std::to_string(want) + " argument(s)");
      if (id == "pow") return make(Node::Pow, std::move(args));
      auto n = std::make_shared<Node>();
      n->kind = Node::Call;
      n->function = id;
      n->args = std::move(args);
      return n;
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == id) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Coordinate;
        n->index = static_cast<int>(i);
        return n;
      }
    auto n = std::make_shared<Node>();
    if (auto it = consts_.find(id); it != consts_.end()) {
      n->value = it->second;
      return n;
    }
    if (id == "pi") {
      n->value = M_PI;
      return n;
    }
    if (kRejected.count(id)) {
      pos_ = start;
      throw Error(ErrorCode::ExpressionNotDifferentiable,
                  "column " + std::to_string(start + 1) + ": '" + id + "' is not smooth in \"" + s_ + "\"");
    }
    pos_ = start;
    fail("unknown symbol '" + id + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& coords_;
  const std::map<std::string, double>& consts_;
  std::size_t pos_ = 0;
};

Jet eval(const Node& n, std::span<const Jet> x) {
  switch (n.kind) {
    case Node::Number:
      return Jet(n.value);
    case Node::Coordinate:
      if (static_cast<std::size_t>(n.index) >= x.size()) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
      return x[static_cast<std::size_t>(n.index)];
    case Node::Add:
      return eval(*n.args[0], x) + eval(*n.args[1], x);
    case Node::Sub:
      return eval(*n.args[0], x) - eval(*n.args[1], x);
    case Node::Mul:
      return eval(*n.args[0], x) * eval(*n.args[1], x);
    case Node::Div:
      return eval(*n.args[0], x) / eval(*n.args[1], x);
    case Node::Neg:
      return -eval(*n.args[0], x);
    case Node::Pow: {
      const Node& e = *n.args[1];
      if (e.kind == Node::Number) {
        if (e.value == 2.0) return square(eval(*n.args[0], x));
        return pow(eval(*n.args[0], x), e.value);
      }
      return pow(eval(*n.args[0], x), eval(e, x));
    }
    case Node::Call: {
      const Jet a = eval(*n.args[0], x);
      const std::string& f = n.function;
      if (f == "exp") return exp(a);
      if (f == "log") return log(a);
      if (f == "sin") return sin(a);
      if (f == "cos") return cos(a);
      if (f == "sinh") return sinh(a);
      if (f == "cosh") return cosh(a);
      return sqrt(a);
    }
  }
  return Jet(0.0);
}

}  // namespace

Expression Expression::compile(const std::string& text, const std::vector<std::string>& coordinates,
                               const std::map<std::string, double>& constants) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, coordinates, constants).parse();
  return e;
}

Jet Expression::operator()(std::span<const Jet> x) const { return eval(*root_, x); }

double Expression::operator()(const Vec& x) const {
  std::vector<Jet> j(x.data(), x.data() + x.size());
  return eval(*root_, j).value();
}

ScalarField Expression::field() const {
  auto root = root_;
  return [root](std::span<const Jet> x) { return eval(*root, x); };
}

}  // namespace warpgeo::cli
