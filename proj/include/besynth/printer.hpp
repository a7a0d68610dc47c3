#pragma once

#include <string>

#include "besynth/formula.hpp"

namespace besynth {

/// Pretty-printer emitting the parser's concrete syntax with minimal
/// parentheses. parse(print(f)) reproduces f node-for-node: parentheses are
/// inserted exactly where the grammar's precedence and associativity would
/// otherwise regroup the tree.
class FormulaPrinter {
public:
    explicit FormulaPrinter(const FormulaStore& store) : store_(store) {}

    std::string print(FormulaId f) const {
        std::string out;
        emit(f, 0, out);
        return out;
    }

private:
    // Precedence levels: -> (1), || (2), && (3), U/R (4), unary (5), leaf (6).
    static int level(FormulaOp op) {
        switch (op) {
            case FormulaOp::Implies: return 1;
            case FormulaOp::Or: return 2;
            case FormulaOp::And: return 3;
            case FormulaOp::Until:
            case FormulaOp::Release: return 4;
            case FormulaOp::Not:
            case FormulaOp::Next:
            case FormulaOp::WeakNext:
            case FormulaOp::Eventually:
            case FormulaOp::Always: return 5;
            default: return 6;
        }
    }

    void emit(FormulaId f, int parent_min, std::string& out) const {
        const FormulaNode& n = store_.node(f);
        int my_level = level(n.op);
        bool parens = my_level < parent_min;
        if (parens) out += '(';
        switch (n.op) {
            case FormulaOp::True: out += "true"; break;
            case FormulaOp::False: out += "false"; break;
            case FormulaOp::Atom: out += store_.partition().name(n.atom); break;
            case FormulaOp::Not:
                out += '!';
                emit(n.left, 5, out);
                break;
            case FormulaOp::Next:
                out += "X ";
                emit(n.left, 5, out);
                break;
            case FormulaOp::WeakNext:
                out += "WX ";
                emit(n.left, 5, out);
                break;
            case FormulaOp::Eventually:
                out += "F ";
                emit(n.left, 5, out);
                break;
            case FormulaOp::Always:
                out += "G ";
                emit(n.left, 5, out);
                break;
            case FormulaOp::And:
                // Left-associative: a left And child needs no parens, a
                // right one does.
                emit(n.left, 3, out);
                out += " && ";
                emit(n.right, 4, out);
                break;
            case FormulaOp::Or:
                emit(n.left, 2, out);
                out += " || ";
                emit(n.right, 3, out);
                break;
            case FormulaOp::Implies:
                // Right-associative.
                emit(n.left, 2, out);
                out += " -> ";
                emit(n.right, 1, out);
                break;
            case FormulaOp::Until:
                emit(n.left, 5, out);
                out += " U ";
                emit(n.right, 4, out);
                break;
            case FormulaOp::Release:
                emit(n.left, 5, out);
                out += " R ";
                emit(n.right, 4, out);
                break;
        }
        if (parens) out += ')';
    }

    const FormulaStore& store_;
};

inline std::string print_formula(const FormulaStore& store, FormulaId f) {
    return FormulaPrinter(store).print(f);
}

}  // namespace besynth
