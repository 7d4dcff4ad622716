#pragma once

// A small arithmetic language for profile functions supplied as text.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'pi' | name | func '(' expr (',' expr)* ')' | '(' expr ')'
//   func    := sin cos tan exp log sqrt abs min max
//
// Variables must belong to the allowed set passed to parse(); their position
// in that set is the slot used by the fast evaluate() overload.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "finsler/error.hpp"

namespace finsler::expr {

class ParseError : public InvalidArgument {
public:
    ParseError(std::size_t offset, const std::string& message);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownVariable : public ParseError {
public:
    UnknownVariable(std::size_t offset, std::string name);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Evaluation failures. A domain error names the function and the argument.
class EvalError : public NumericError {
public:
    enum class Kind { MissingBinding, Domain };
    EvalError(Kind kind, std::string function, double argument, const std::string& message);
    Kind kind() const noexcept { return kind_; }
    const std::string& function() const noexcept { return function_; }
    double argument() const noexcept { return argument_; }

private:
    Kind kind_;
    std::string function_;
    double argument_;
};

struct Node;

class Expr {
public:
    Expr() = default;

    // Values in the order of the allowed-variable list given to parse().
    double evaluate(std::span<const double> slots) const;
    double operator()(std::span<const double> slots) const { return evaluate(slots); }

    const std::vector<std::string>& variables() const noexcept { return vars_; }
    // Whether the tree references the given slot.
    bool uses(std::size_t slot) const;

    // Fully parenthesized text; numbers printed with 17 significant digits.
    std::string to_string() const;
    // The text this expression was parsed from.
    const std::string& source() const noexcept { return source_; }

    bool empty() const noexcept { return root_ == nullptr; }

private:
    friend Expr parse(const std::string&, const std::vector<std::string>&);

    std::shared_ptr<const Node> root_;
    std::vector<std::string> vars_;
    std::string source_;
};

Expr parse(const std::string& text, const std::vector<std::string>& allowed_vars);

using Bindings = std::map<std::string, double>;

// Throws EvalError{MissingBinding} when a referenced variable is unbound.
double eval(const Expr& e, const Bindings& bindings);

}  // namespace finsler::expr
