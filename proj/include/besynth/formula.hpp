#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "besynth/partition.hpp"

namespace besynth {

enum class FormulaOp : std::uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,
    WeakNext,
    Until,
    Release,
    Eventually,
    Always,
};

using FormulaId = std::uint32_t;
inline constexpr FormulaId kNoFormula = std::numeric_limits<FormulaId>::max();

struct FormulaNode {
    FormulaOp op;
    std::uint32_t atom;  // proposition index, Atom nodes only
    FormulaId left;      // first child, kNoFormula for leaves
    FormulaId right;     // second child, kNoFormula for unary/leaves
};

/// Interned formula DAG over a fixed partition. Two structurally identical
/// formulas share one id, so id equality is structural equality. Conjunction,
/// disjunction and negation fold constants, duplicate operands and
/// complementary literals; this keeps the Boolean closure built during DFA
/// translation small. All other constructors are purely structural.
///
/// Formula values are immutable once created; creating new formulas appends
/// to the store. The store is not thread-safe for concurrent creation, but
/// read access to existing nodes is.
class FormulaStore {
public:
    explicit FormulaStore(Partition partition) : partition_(std::move(partition)) {
        true_ = append({FormulaOp::True, 0, kNoFormula, kNoFormula});
        false_ = append({FormulaOp::False, 0, kNoFormula, kNoFormula});
    }

    const Partition& partition() const { return partition_; }

    FormulaId tt() const { return true_; }
    FormulaId ff() const { return false_; }

    FormulaId atom(std::uint32_t prop_index) {
        if (prop_index >= partition_.prop_count())
            throw std::out_of_range("atom index outside partition");
        return intern({FormulaOp::Atom, prop_index, kNoFormula, kNoFormula});
    }

    FormulaId negation(FormulaId f) {
        const FormulaNode& n = node(f);
        if (n.op == FormulaOp::True) return false_;
        if (n.op == FormulaOp::False) return true_;
        if (n.op == FormulaOp::Not) return n.left;
        return intern({FormulaOp::Not, 0, f, kNoFormula});
    }

    FormulaId conjunction(FormulaId a, FormulaId b) {
        if (a == false_ || b == false_) return false_;
        if (a == true_) return b;
        if (b == true_) return a;
        if (a == b) return a;
        if (complementary(a, b)) return false_;
        return intern({FormulaOp::And, 0, a, b});
    }

    FormulaId disjunction(FormulaId a, FormulaId b) {
        if (a == true_ || b == true_) return true_;
        if (a == false_) return b;
        if (b == false_) return a;
        if (a == b) return a;
        if (complementary(a, b)) return true_;
        return intern({FormulaOp::Or, 0, a, b});
    }

    FormulaId implication(FormulaId a, FormulaId b) {
        return intern({FormulaOp::Implies, 0, a, b});
    }

    FormulaId next(FormulaId f) { return intern({FormulaOp::Next, 0, f, kNoFormula}); }
    FormulaId weak_next(FormulaId f) { return intern({FormulaOp::WeakNext, 0, f, kNoFormula}); }

    FormulaId until(FormulaId a, FormulaId b) {
        return intern({FormulaOp::Until, 0, a, b});
    }
    FormulaId release(FormulaId a, FormulaId b) {
        return intern({FormulaOp::Release, 0, a, b});
    }
    FormulaId eventually(FormulaId f) {
        return intern({FormulaOp::Eventually, 0, f, kNoFormula});
    }
    FormulaId always(FormulaId f) { return intern({FormulaOp::Always, 0, f, kNoFormula}); }

    const FormulaNode& node(FormulaId f) const { return nodes_[f]; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Number of operators in the formula; atoms and constants count zero.
    int operator_count(FormulaId f) const {
        const FormulaNode& n = node(f);
        switch (n.op) {
            case FormulaOp::True:
            case FormulaOp::False:
            case FormulaOp::Atom:
                return 0;
            case FormulaOp::Not:
            case FormulaOp::Next:
            case FormulaOp::WeakNext:
            case FormulaOp::Eventually:
            case FormulaOp::Always:
                return 1 + operator_count(n.left);
            default:
                return 1 + operator_count(n.left) + operator_count(n.right);
        }
    }

private:
    struct Key {
        FormulaOp op;
        std::uint32_t atom;
        FormulaId left;
        FormulaId right;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = static_cast<std::uint64_t>(k.op);
            h = h * 0x9e3779b97f4a7c15ULL + k.atom;
            h = h * 0x9e3779b97f4a7c15ULL + k.left;
            h = h * 0x9e3779b97f4a7c15ULL + k.right;
            return static_cast<std::size_t>(h ^ (h >> 32));
        }
    };

    bool complementary(FormulaId a, FormulaId b) const {
        const FormulaNode& na = node(a);
        const FormulaNode& nb = node(b);
        return (na.op == FormulaOp::Not && na.left == b) ||
               (nb.op == FormulaOp::Not && nb.left == a);
    }

    FormulaId append(const FormulaNode& n) {
        nodes_.push_back(n);
        return static_cast<FormulaId>(nodes_.size() - 1);
    }

    FormulaId intern(const FormulaNode& n) {
        Key key{n.op, n.atom, n.left, n.right};
        auto it = intern_.find(key);
        if (it != intern_.end()) return it->second;
        FormulaId id = append(n);
        intern_.emplace(key, id);
        return id;
    }

    Partition partition_;
    std::vector<FormulaNode> nodes_;
    std::unordered_map<Key, FormulaId, KeyHash> intern_;
    FormulaId true_;
    FormulaId false_;
};

}  // namespace besynth
