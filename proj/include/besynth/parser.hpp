#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "besynth/errors.hpp"
#include "besynth/formula.hpp"

namespace besynth {

/// Recursive-descent parser for the formula grammar:
///
///   form := "true" | "false" | ident | "!" form | form bin form
///         | un form | "(" form ")"
///   bin  := "&&" | "||" | "->" | "U" | "R"
///   un   := "X" | "WX" | "F" | "G"
///
/// Precedence, weakest to strongest: ->, ||, &&, U/R, unary. "->", "U" and
/// "R" associate to the right; "&&" and "||" to the left. Every atom must be
/// declared in the store's partition.
class FormulaParser {
public:
    FormulaParser(FormulaStore& store, std::string_view text)
        : store_(store), text_(text) {}

    FormulaId parse() {
        next_token();
        FormulaId f = parse_implies();
        if (token_ != Token::End)
            throw ParseError("unexpected input after formula", token_pos_);
        return f;
    }

private:
    enum class Token {
        End, Ident, True, False, And, Or, Implies, Not, LParen, RParen,
        Until, Release, Next, WeakNext, Eventually, Always,
    };

    FormulaId parse_implies() {
        FormulaId left = parse_or();
        if (token_ == Token::Implies) {
            next_token();
            return store_.implication(left, parse_implies());
        }
        return left;
    }

    FormulaId parse_or() {
        FormulaId f = parse_and();
        while (token_ == Token::Or) {
            next_token();
            f = store_.disjunction(f, parse_and());
        }
        return f;
    }

    FormulaId parse_and() {
        FormulaId f = parse_until();
        while (token_ == Token::And) {
            next_token();
            f = store_.conjunction(f, parse_until());
        }
        return f;
    }

    FormulaId parse_until() {
        FormulaId left = parse_unary();
        if (token_ == Token::Until) {
            next_token();
            return store_.until(left, parse_until());
        }
        if (token_ == Token::Release) {
            next_token();
            return store_.release(left, parse_until());
        }
        return left;
    }

    FormulaId parse_unary() {
        switch (token_) {
            case Token::Not:
                next_token();
                return store_.negation(parse_unary());
            case Token::Next:
                next_token();
                return store_.next(parse_unary());
            case Token::WeakNext:
                next_token();
                return store_.weak_next(parse_unary());
            case Token::Eventually:
                next_token();
                return store_.eventually(parse_unary());
            case Token::Always:
                next_token();
                return store_.always(parse_unary());
            default:
                return parse_primary();
        }
    }

    FormulaId parse_primary() {
        switch (token_) {
            case Token::True:
                next_token();
                return store_.tt();
            case Token::False:
                next_token();
                return store_.ff();
            case Token::Ident: {
                auto index = store_.partition().find(ident_);
                if (!index) throw UndeclaredAtomError(ident_, token_pos_);
                next_token();
                return store_.atom(*index);
            }
            case Token::LParen: {
                next_token();
                FormulaId f = parse_implies();
                if (token_ != Token::RParen)
                    throw ParseError("expected ')'", token_pos_);
                next_token();
                return f;
            }
            case Token::End:
                throw ParseError("unexpected end of input", token_pos_);
            default:
                throw ParseError("unexpected token", token_pos_);
        }
    }

    void next_token() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        token_pos_ = pos_;
        if (pos_ >= text_.size()) {
            token_ = Token::End;
            return;
        }
        char c = text_[pos_];
        if (c == '(') { token_ = Token::LParen; ++pos_; return; }
        if (c == ')') { token_ = Token::RParen; ++pos_; return; }
        if (c == '!') { token_ = Token::Not; ++pos_; return; }
        if (c == '&') {
            if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '&')
                throw ParseError("expected '&&'", pos_);
            token_ = Token::And;
            pos_ += 2;
            return;
        }
        if (c == '|') {
            if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '|')
                throw ParseError("expected '||'", pos_);
            token_ = Token::Or;
            pos_ += 2;
            return;
        }
        if (c == '-') {
            if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '>')
                throw ParseError("expected '->'", pos_);
            token_ = Token::Implies;
            pos_ += 2;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            ident_.assign(text_.substr(start, pos_ - start));
            if (ident_ == "true") token_ = Token::True;
            else if (ident_ == "false") token_ = Token::False;
            else if (ident_ == "U") token_ = Token::Until;
            else if (ident_ == "R") token_ = Token::Release;
            else if (ident_ == "X") token_ = Token::Next;
            else if (ident_ == "WX") token_ = Token::WeakNext;
            else if (ident_ == "F") token_ = Token::Eventually;
            else if (ident_ == "G") token_ = Token::Always;
            else token_ = Token::Ident;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    FormulaStore& store_;
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t token_pos_ = 0;
    Token token_ = Token::End;
    std::string ident_;
};

inline FormulaId parse_formula(FormulaStore& store, std::string_view text) {
    return FormulaParser(store, text).parse();
}

}  // namespace besynth
