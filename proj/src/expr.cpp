#include "thetaforge/expr.hpp"

#include <cctype>
#include <sstream>

namespace thetaforge {

namespace {

struct Token {
    enum class Kind { Integer, Name, Symbol, End };
    Kind kind;
    std::string text;
    std::size_t offset;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) return {Token::Kind::End, "", start};
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            return {Token::Kind::Integer, text_.substr(start, pos_ - start), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::Name, text_.substr(start, pos_ - start), start};
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            ++pos_;
            return {Token::Kind::Symbol, std::string(1, c), start};
        }
        throw ParseError(start, "a token (found '" + std::string(1, c) + "')");
    }

  private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

class Parser {
  public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    ExprPtr parse() {
        ExprPtr e = expr();
        expect_end();
        return e;
    }

  private:
    Lexer lexer_;
    Token current_{Token::Kind::End, "", 0};

    void advance() { current_ = lexer_.next(); }

    bool is_symbol(const char* s) const {
        return current_.kind == Token::Kind::Symbol && current_.text == s;
    }

    void expect_symbol(const char* s) {
        if (!is_symbol(s)) throw ParseError(current_.offset, std::string("'") + s + "'");
        advance();
    }

    void expect_end() {
        if (current_.kind != Token::Kind::End)
            throw ParseError(current_.offset, "end of input");
    }

    // RATIONAL := INT ('/' POSINT)? with an optional leading '-'
    Rational rational() {
        bool negative = false;
        if (is_symbol("-")) {
            negative = true;
            advance();
        }
        if (current_.kind != Token::Kind::Integer)
            throw ParseError(current_.offset, "an integer");
        mpz_class num(current_.text, 10);  // explicit base: no octal surprises
        advance();
        mpz_class den(1);
        if (is_symbol("/")) {
            advance();
            if (current_.kind != Token::Kind::Integer)
                throw ParseError(current_.offset, "a positive denominator");
            den = mpz_class(current_.text, 10);
            if (den == 0) throw ParseError(current_.offset, "a nonzero denominator");
            advance();
        }
        Rational r(negative ? mpz_class(-num) : num, den);
        r.canonicalize();
        return r;
    }

    long integer() {
        bool negative = false;
        if (is_symbol("-")) {
            negative = true;
            advance();
        }
        if (current_.kind != Token::Kind::Integer)
            throw ParseError(current_.offset, "an integer exponent");
        long v = 0;
        try {
            v = std::stol(current_.text);
        } catch (const std::out_of_range&) {
            throw ParseError(current_.offset, "an integer exponent in range");
        }
        advance();
        return negative ? -v : v;
    }

    ExprPtr expr() {
        ExprPtr left = term();
        while (is_symbol("+") || is_symbol("-")) {
            const char op = current_.text[0];
            advance();
            ExprPtr right = term();
            auto node = std::make_shared<ExprAst>();
            node->kind = ExprAst::Kind::BinOp;
            node->op = op;
            node->lhs = std::move(left);
            node->rhs = std::move(right);
            left = std::move(node);
        }
        return left;
    }

    ExprPtr term() {
        ExprPtr left = factor();
        while (is_symbol("*")) {
            advance();
            ExprPtr right = factor();
            auto node = std::make_shared<ExprAst>();
            node->kind = ExprAst::Kind::BinOp;
            node->op = '*';
            node->lhs = std::move(left);
            node->rhs = std::move(right);
            left = std::move(node);
        }
        return left;
    }

    ExprPtr factor() {
        ExprPtr base = atom();
        if (is_symbol("^")) {
            advance();
            auto node = std::make_shared<ExprAst>();
            node->kind = ExprAst::Kind::Pow;
            node->base = std::move(base);
            node->exponent = integer();
            return node;
        }
        return base;
    }

    ExprPtr atom() {
        if (is_symbol("(")) {
            advance();
            ExprPtr inner = expr();
            expect_symbol(")");
            return inner;
        }
        if (current_.kind == Token::Kind::Integer || is_symbol("-")) {
            auto node = std::make_shared<ExprAst>();
            node->kind = ExprAst::Kind::RationalLiteral;
            node->value = rational();
            return node;
        }
        if (current_.kind == Token::Kind::Name) {
            if (current_.text == "q") {
                advance();
                expect_symbol("^");
                expect_symbol("(");
                auto node = std::make_shared<ExprAst>();
                node->kind = ExprAst::Kind::QPower;
                node->value = rational();
                expect_symbol(")");
                return node;
            }
            auto node = std::make_shared<ExprAst>();
            node->kind = ExprAst::Kind::Call;
            node->name = current_.text;
            advance();
            // bare zero-argument calls (e.g. fifth_pentagonal) are accepted;
            // the canonical form prints the parentheses
            if (is_symbol("(")) {
                advance();
                if (!is_symbol(")")) {
                    node->args.push_back(rational());
                    while (is_symbol(",")) {
                        advance();
                        node->args.push_back(rational());
                    }
                }
                expect_symbol(")");
            }
            return node;
        }
        throw ParseError(current_.offset,
                         "a rational, 'q^(...)', a call, or a parenthesized expression");
    }
};

int precedence(const ExprAst& node) {
    switch (node.kind) {
        case ExprAst::Kind::BinOp: return node.op == '*' ? 1 : 0;
        case ExprAst::Kind::Pow: return 2;
        default: return 3;
    }
}

void print_node(const ExprAst& node, std::ostream& out) {
    const auto child = [&](const ExprPtr& c, int min_prec) {
        if (precedence(*c) < min_prec) {
            out << '(';
            print_node(*c, out);
            out << ')';
        } else {
            print_node(*c, out);
        }
    };
    switch (node.kind) {
        case ExprAst::Kind::RationalLiteral:
            if (node.value < 0) out << '(' << node.value.get_str() << ')';
            else out << node.value.get_str();
            break;
        case ExprAst::Kind::QPower:
            out << "q^(" << node.value.get_str() << ")";
            break;
        case ExprAst::Kind::Call: {
            out << node.name << '(';
            for (std::size_t i = 0; i < node.args.size(); ++i) {
                if (i) out << ',';
                out << node.args[i].get_str();
            }
            out << ')';
            break;
        }
        case ExprAst::Kind::BinOp:
            child(node.lhs, node.op == '*' ? 1 : 0);
            out << ' ' << node.op << ' ';
            child(node.rhs, node.op == '*' ? 2 : 1);
            break;
        case ExprAst::Kind::Pow:
            child(node.base, 3);
            out << '^' << node.exponent;
            break;
    }
}

PuiseuxSeries eval_call(const ExprAst& node, const Rational& cutoff) {
    const auto arity = [&](std::size_t lo, std::size_t hi) {
        if (node.args.size() < lo || node.args.size() > hi)
            throw std::invalid_argument(node.name + ": expected " + std::to_string(lo) +
                                        (hi != lo ? ".." + std::to_string(hi) : "") +
                                        " arguments, got " + std::to_string(node.args.size()));
    };
    if (node.name == "fsum") {
        arity(2, 3);
        QuadraticForm form{node.args[0], node.args[1],
                           node.args.size() == 3 ? node.args[2] : Rational(0)};
        return theta_sum(form, cutoff);
    }
    if (node.name == "poch") {
        arity(3, 3);
        return pochhammer_q(node.args[0], node.args[1], node.args[2], cutoff);
    }
    if (node.name == "triple") {
        arity(4, 4);
        return triple_product_q(QMonomial{node.args[0], node.args[1]},
                                QMonomial{node.args[2], node.args[3]}, cutoff);
    }
    if (node.name == "polygonal") {
        arity(1, 1);
        if (node.args[0].get_den() != 1 || node.args[0] < 3 ||
            !node.args[0].get_num().fits_slong_p())
            throw std::invalid_argument("polygonal: r must be an integer >= 3");
        return polygonal_gf(PolygonalSpec{node.args[0].get_num().get_si()},
                            PolygonalSide::LHS, cutoff);
    }
    if (node.name == "fifth_pentagonal") {
        arity(0, 0);
        return pentagonal_fifth_power(cutoff);
    }
    throw std::invalid_argument("unknown function '" + node.name +
                                "' (expected fsum, poch, triple, polygonal, "
                                "fifth_pentagonal)");
}

}  // namespace

ExprPtr parse_expr(const std::string& text) {
    if (text.empty()) throw ParseError(0, "a nonempty expression");
    return Parser(text).parse();
}

std::string print_expr(const ExprPtr& ast) {
    std::ostringstream out;
    print_node(*ast, out);
    return out.str();
}

PuiseuxSeries eval_expr(const ExprPtr& ast, const Rational& cutoff) {
    switch (ast->kind) {
        case ExprAst::Kind::RationalLiteral:
            return PuiseuxSeries::monomial(ast->value, Rational(0), cutoff);
        case ExprAst::Kind::QPower:
            return PuiseuxSeries::monomial(Rational(1), ast->value, cutoff);
        case ExprAst::Kind::Call:
            return eval_call(*ast, cutoff);
        case ExprAst::Kind::BinOp: {
            const PuiseuxSeries lhs = eval_expr(ast->lhs, cutoff);
            const PuiseuxSeries rhs = eval_expr(ast->rhs, cutoff);
            switch (ast->op) {
                case '+': return add(lhs, rhs);
                case '-': return sub(lhs, rhs);
                case '*': return mul(lhs, rhs);
            }
            throw std::logic_error("unknown operator");
        }
        case ExprAst::Kind::Pow: {
            if (ast->exponent < 0)
                throw std::invalid_argument("series powers must be nonnegative");
            return pow(eval_expr(ast->base, cutoff),
                       static_cast<unsigned long>(ast->exponent));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace thetaforge
