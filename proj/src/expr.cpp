#include "finsler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string_view>

namespace finsler::expr {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : InvalidArgument("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

UnknownVariable::UnknownVariable(std::size_t offset, std::string name)
    : ParseError(offset, "unknown variable '" + name + "'"), name_(std::move(name)) {}

EvalError::EvalError(Kind kind, std::string function, double argument, const std::string& message)
    : NumericError(message), kind_(kind), function_(std::move(function)), argument_(argument) {}

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Min, Max };

struct Node {
    enum class Kind { Number, Variable, Negate, Binary, Call };
    Kind kind = Kind::Number;
    double value = 0;       // Number
    std::size_t slot = 0;   // Variable
    char op = 0;            // Binary: + - * / ^
    Func func = Func::Sin;  // Call
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

constexpr int kMaxDepth = 200;

struct FuncInfo {
    std::string_view name;
    Func func;
    std::size_t arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1},   {"tan", Func::Tan, 1},
    {"exp", Func::Exp, 1},   {"log", Func::Log, 1},   {"sqrt", Func::Sqrt, 1},
    {"abs", Func::Abs, 1},   {"min", Func::Min, 2},   {"max", Func::Max, 2},
};

const FuncInfo* find_func(std::string_view name) {
    for (const auto& f : kFuncs)
        if (f.name == name) return &f;
    return nullptr;
}

std::string_view func_name(Func f) {
    for (const auto& info : kFuncs)
        if (info.func == f) return info.name;
    return "?";
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    NodePtr parse_all() {
        NodePtr n = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail_unexpected();
        return n;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    [[noreturn]] void fail_unexpected() {
        if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
        throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    }

    void expect(char c) {
        if (!peek(c)) {
            if (pos_ >= text_.size())
                throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
            throw ParseError(pos_, std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) throw ParseError(p_.pos_, "expression nested too deeply");
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    static NodePtr binary(char op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Binary;
        n->op = op;
        n->args = {std::move(l), std::move(r)};
        return n;
    }

    NodePtr parse_expr() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_term();
        while (peek('+') || peek('-')) {
            const char op = text_[pos_++];
            lhs = binary(op, lhs, parse_term());
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (peek('*') || peek('/')) {
            const char op = text_[pos_++];
            lhs = binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        DepthGuard guard(*this);
        if (peek('-')) {
            ++pos_;
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Negate;
            n->args = {parse_unary()};
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (peek('^')) {
            ++pos_;
            return binary('^', base, parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail_unexpected();
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        fail_unexpected();
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        std::size_t i = pos_;
        auto digits = [&] {
            const std::size_t s = i;
            while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
            return i - s;
        };
        std::size_t mantissa = digits();
        if (i < text_.size() && text_[i] == '.') {
            ++i;
            mantissa += digits();
        }
        if (mantissa == 0) throw ParseError(start, "malformed number");
        if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
            if (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) {
                i = j;
                digits();
            }
        }
        double value = 0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + i;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value))
            throw ParseError(start, "number out of range");
        pos_ = i;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Number;
        n->value = value;
        return n;
    }

    NodePtr parse_name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);

        if (peek('(')) {
            const FuncInfo* info = find_func(name);
            if (!info) throw ParseError(start, "unknown function '" + name + "'");
            ++pos_;
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Call;
            n->func = info->func;
            n->args.push_back(parse_expr());
            while (peek(',')) {
                ++pos_;
                n->args.push_back(parse_expr());
            }
            expect(')');
            if (n->args.size() != info->arity)
                throw ParseError(start, name + " expects " + std::to_string(info->arity) +
                                            " argument(s)");
            return n;
        }

        if (name == "pi") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Number;
            n->value = std::numbers::pi;
            return n;
        }
        const auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) throw UnknownVariable(start, name);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        n->slot = static_cast<std::size_t>(it - vars_.begin());
        return n;
    }

    const std::string& text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

[[noreturn]] void domain_error(Func f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    throw EvalError(EvalError::Kind::Domain, std::string(func_name(f)), x,
                    "domain error: " + std::string(func_name(f)) + "(" + buf + ")");
}

double eval_node(const Node& n, std::span<const double> slots) {
    switch (n.kind) {
        case Node::Kind::Number:
            return n.value;
        case Node::Kind::Variable:
            return slots[n.slot];
        case Node::Kind::Negate:
            return -eval_node(*n.args[0], slots);
        case Node::Kind::Binary: {
            const double a = eval_node(*n.args[0], slots);
            const double b = eval_node(*n.args[1], slots);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^':
                    if (a < 0.0 && b != std::trunc(b)) {
                        char buf[96];
                        std::snprintf(buf, sizeof buf, "domain error: (%.17g)^(%.17g)", a, b);
                        throw EvalError(EvalError::Kind::Domain, "^", a, buf);
                    }
                    return std::pow(a, b);
            }
            return 0.0;
        }
        case Node::Kind::Call: {
            const double x = eval_node(*n.args[0], slots);
            switch (n.func) {
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Tan: return std::tan(x);
                case Func::Exp: return std::exp(x);
                case Func::Log:
                    if (!(x > 0.0)) domain_error(n.func, x);
                    return std::log(x);
                case Func::Sqrt:
                    if (x < 0.0 || std::isnan(x)) domain_error(n.func, x);
                    return std::sqrt(x);
                case Func::Abs: return std::abs(x);
                case Func::Min: return std::min(x, eval_node(*n.args[1], slots));
                case Func::Max: return std::max(x, eval_node(*n.args[1], slots));
            }
            return 0.0;
        }
    }
    return 0.0;
}

bool node_uses(const Node& n, std::size_t slot) {
    if (n.kind == Node::Kind::Variable) return n.slot == slot;
    return std::any_of(n.args.begin(), n.args.end(),
                       [slot](const NodePtr& a) { return node_uses(*a, slot); });
}

void print_node(const Node& n, const std::vector<std::string>& vars, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            return;
        }
        case Node::Kind::Variable:
            out += vars[n.slot];
            return;
        case Node::Kind::Negate:
            out += "(-";
            print_node(*n.args[0], vars, out);
            out += ')';
            return;
        case Node::Kind::Binary:
            out += '(';
            print_node(*n.args[0], vars, out);
            out += ' ';
            out += n.op;
            out += ' ';
            print_node(*n.args[1], vars, out);
            out += ')';
            return;
        case Node::Kind::Call:
            out += func_name(n.func);
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ", ";
                print_node(*n.args[i], vars, out);
            }
            out += ')';
            return;
    }
}

}  // namespace

Expr parse(const std::string& text, const std::vector<std::string>& allowed_vars) {
    Parser p(text, allowed_vars);
    Expr e;
    e.root_ = p.parse_all();
    e.vars_ = allowed_vars;
    e.source_ = text;
    return e;
}

double Expr::evaluate(std::span<const double> slots) const {
    if (!root_) throw InvalidArgument("evaluating an empty expression");
    if (slots.size() < vars_.size())
        throw InvalidArgument("expression expects " + std::to_string(vars_.size()) + " slot(s)");
    return eval_node(*root_, slots);
}

bool Expr::uses(std::size_t slot) const { return root_ && node_uses(*root_, slot); }

std::string Expr::to_string() const {
    std::string out;
    if (root_) print_node(*root_, vars_, out);
    return out;
}

double eval(const Expr& e, const Bindings& bindings) {
    const auto& vars = e.variables();
    std::vector<double> slots(vars.size(), 0.0);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto it = bindings.find(vars[i]);
        if (it != bindings.end()) {
            slots[i] = it->second;
        } else if (e.uses(i)) {
            throw EvalError(EvalError::Kind::MissingBinding, vars[i], 0.0,
                            "missing binding for variable '" + vars[i] + "'");
        }
    }
    return e.evaluate(slots);
}

}  // namespace finsler::expr
