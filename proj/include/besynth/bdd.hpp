#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "besynth/errors.hpp"

namespace besynth {

class DdManager;

/// Handle to a node of a DdManager. Handles are reference-counted; a node
/// stays alive across garbage collections while at least one handle (or a
/// live descendant's parent chain) refers to it. Handles are only meaningful
/// within their owning manager.
class Bdd {
public:
    Bdd() = default;
    Bdd(DdManager* manager, std::uint32_t id);
    Bdd(const Bdd& other);
    Bdd(Bdd&& other) noexcept;
    Bdd& operator=(const Bdd& other);
    Bdd& operator=(Bdd&& other) noexcept;
    ~Bdd();

    bool valid() const { return manager_ != nullptr; }
    DdManager* manager() const { return manager_; }
    std::uint32_t id() const { return id_; }

    bool is_true() const;
    bool is_false() const;

    /// Canonicity makes handle equality function equality.
    bool operator==(const Bdd& other) const {
        return manager_ == other.manager_ && id_ == other.id_;
    }
    bool operator!=(const Bdd& other) const { return !(*this == other); }

    Bdd operator&(const Bdd& other) const;
    Bdd operator|(const Bdd& other) const;
    Bdd operator^(const Bdd& other) const;
    Bdd operator!() const;
    Bdd implies(const Bdd& other) const;
    Bdd iff(const Bdd& other) const;

private:
    DdManager* manager_ = nullptr;
    std::uint32_t id_ = 0;
};

/// Reduced ordered BDD manager: hash-consed unique table, operation cache,
/// reference-counted handles with explicit mark-and-sweep garbage
/// collection. The variable order is the creation order; there is no
/// dynamic reordering.
class DdManager {
public:
    explicit DdManager(std::size_t node_limit = node_limit_from_env(),
                       bool enable_cache = true)
        : node_limit_(node_limit), cache_enabled_(enable_cache) {
        nodes_.push_back({kLeafVar, 0, 0});  // false
        nodes_.push_back({kLeafVar, 1, 1});  // true
        ext_refs_.assign(2, 1);              // terminals are immortal
    }

    DdManager(const DdManager&) = delete;
    DdManager& operator=(const DdManager&) = delete;

    static std::size_t node_limit_from_env() {
        if (const char* text = std::getenv("BESYNTH_NODE_LIMIT")) {
            char* end = nullptr;
            unsigned long long parsed = std::strtoull(text, &end, 10);
            if (end != text && parsed > 2) return static_cast<std::size_t>(parsed);
        }
        return std::size_t{1} << 22;
    }

    std::uint32_t new_var() { return static_cast<std::uint32_t>(var_count_++); }
    std::size_t var_count() const { return var_count_; }

    Bdd bdd_false() { return Bdd(this, 0); }
    Bdd bdd_true() { return Bdd(this, 1); }

    Bdd var(std::uint32_t v) {
        check_var(v);
        return Bdd(this, make_node(v, 1, 0));
    }
    Bdd nvar(std::uint32_t v) {
        check_var(v);
        return Bdd(this, make_node(v, 0, 1));
    }

    Bdd apply_and(const Bdd& f, const Bdd& g) {
        return Bdd(this, and_rec(operand(f), operand(g)));
    }
    Bdd apply_or(const Bdd& f, const Bdd& g) {
        // f | g = !(!f & !g) would churn; direct recursion instead.
        return Bdd(this, or_rec(operand(f), operand(g)));
    }
    Bdd apply_xor(const Bdd& f, const Bdd& g) {
        return Bdd(this, xor_rec(operand(f), operand(g)));
    }
    Bdd negate(const Bdd& f) { return Bdd(this, not_rec(operand(f))); }
    Bdd apply_implies(const Bdd& f, const Bdd& g) {
        return Bdd(this, or_rec(not_rec(operand(f)), operand(g)));
    }
    Bdd apply_iff(const Bdd& f, const Bdd& g) {
        return Bdd(this, not_rec(xor_rec(operand(f), operand(g))));
    }
    Bdd ite(const Bdd& c, const Bdd& t, const Bdd& e) {
        return Bdd(this, ite_rec(operand(c), operand(t), operand(e)));
    }

    /// Positive conjunction of variables, used as a quantification prefix.
    Bdd cube(const std::vector<std::uint32_t>& vars) {
        std::vector<std::uint32_t> sorted = vars;
        std::sort(sorted.begin(), sorted.end());
        std::uint32_t result = 1;
        for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
            check_var(*it);
            result = make_node(*it, result, 0);
        }
        return Bdd(this, result);
    }

    Bdd exists(const Bdd& vars, const Bdd& f) {
        return Bdd(this, quant_rec(operand(f), operand(vars), /*universal=*/false));
    }
    Bdd forall(const Bdd& vars, const Bdd& f) {
        return Bdd(this, quant_rec(operand(f), operand(vars), /*universal=*/true));
    }

    Bdd cofactor(const Bdd& f, std::uint32_t v, bool value) {
        check_var(v);
        return Bdd(this, cofactor_rec(operand(f), v, value));
    }

    /// Simultaneous substitution: every occurrence of a key variable is
    /// replaced by its image, all replacements reading the original
    /// argument.
    Bdd compose(const Bdd& f, const std::vector<std::pair<std::uint32_t, Bdd>>& map) {
        std::unordered_map<std::uint32_t, std::uint32_t> subst;
        for (const auto& [v, g] : map) {
            check_var(v);
            subst[v] = operand(g);
        }
        std::unordered_map<std::uint32_t, std::uint32_t> cache;
        return Bdd(this, compose_rec(operand(f), subst, cache));
    }

    /// One assignment to `outputs` consistent with satisfiable f: each
    /// variable takes false unless only true keeps the rest satisfiable.
    std::vector<std::pair<std::uint32_t, bool>> pick_witness(
        const Bdd& f, const std::vector<std::uint32_t>& outputs) {
        std::uint32_t cur = operand(f);
        if (cur == 0) throw std::invalid_argument("pick_witness: unsatisfiable input");
        std::vector<std::uint32_t> sorted = outputs;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::pair<std::uint32_t, bool>> choice;
        choice.reserve(sorted.size());
        for (std::uint32_t v : sorted) {
            std::uint32_t low = cofactor_rec(cur, v, false);
            if (low != 0) {
                choice.emplace_back(v, false);
                cur = low;
            } else {
                choice.emplace_back(v, true);
                cur = cofactor_rec(cur, v, true);
            }
        }
        return choice;
    }

    template <typename AssignmentFn>
        requires std::invocable<AssignmentFn&, std::uint32_t>
    bool eval(const Bdd& f, AssignmentFn&& value_of_var) const {
        std::uint32_t id = f.id();
        while (id > 1) {
            const Node& n = nodes_[id];
            id = value_of_var(n.var) ? n.hi : n.lo;
        }
        return id == 1;
    }

    bool eval(const Bdd& f, const std::vector<bool>& assignment) const {
        return eval(f, [&](std::uint32_t v) { return assignment[v]; });
    }

    std::size_t live_node_count() const { return nodes_.size() - free_list_.size(); }
    std::size_t peak_node_count() const { return nodes_.size(); }

    /// Mark-and-sweep over externally referenced roots. Clears the
    /// operation cache; meant for fixpoint-iteration boundaries.
    void collect_garbage() {
        std::vector<bool> marked(nodes_.size(), false);
        marked[0] = marked[1] = true;
        std::vector<std::uint32_t> stack;
        for (std::uint32_t id = 2; id < nodes_.size(); ++id)
            if (id < ext_refs_.size() && ext_refs_[id] > 0 && !dead(id)) stack.push_back(id);
        while (!stack.empty()) {
            std::uint32_t id = stack.back();
            stack.pop_back();
            if (marked[id]) continue;
            marked[id] = true;
            const Node& n = nodes_[id];
            if (!marked[n.hi]) stack.push_back(n.hi);
            if (!marked[n.lo]) stack.push_back(n.lo);
        }
        for (std::uint32_t id = 2; id < nodes_.size(); ++id) {
            if (marked[id] || dead(id)) continue;
            unique_.erase(Key{nodes_[id].var, nodes_[id].hi, nodes_[id].lo});
            nodes_[id].var = kDeadVar;
            free_list_.push_back(id);
        }
        cache_.clear();
    }

    void ref(std::uint32_t id) {
        if (ext_refs_.size() <= id) ext_refs_.resize(id + 1, 0);
        ++ext_refs_[id];
    }
    void deref(std::uint32_t id) { --ext_refs_[id]; }

    std::uint32_t top_var(const Bdd& f) const { return nodes_[f.id()].var; }
    Bdd high(const Bdd& f) { return Bdd(this, nodes_[f.id()].hi); }
    Bdd low(const Bdd& f) { return Bdd(this, nodes_[f.id()].lo); }
    bool is_leaf(const Bdd& f) const { return f.id() <= 1; }

    /// DOT dump of the DAG rooted at f, for debugging.
    std::string to_dot(const Bdd& f, const std::vector<std::string>& var_names = {}) {
        std::ostringstream out;
        out << "digraph bdd {\n";
        std::unordered_set<std::uint32_t> seen;
        std::vector<std::uint32_t> stack{f.id()};
        while (!stack.empty()) {
            std::uint32_t id = stack.back();
            stack.pop_back();
            if (!seen.insert(id).second) continue;
            if (id <= 1) {
                out << "  n" << id << " [shape=box,label=\"" << id << "\"];\n";
                continue;
            }
            const Node& n = nodes_[id];
            std::string label = n.var < var_names.size() ? var_names[n.var]
                                                         : "v" + std::to_string(n.var);
            out << "  n" << id << " [label=\"" << label << "\"];\n";
            out << "  n" << id << " -> n" << n.hi << ";\n";
            out << "  n" << id << " -> n" << n.lo << " [style=dashed];\n";
            stack.push_back(n.hi);
            stack.push_back(n.lo);
        }
        out << "}\n";
        return out.str();
    }

private:
    friend class Bdd;

    static constexpr std::uint32_t kLeafVar = UINT32_MAX;
    static constexpr std::uint32_t kDeadVar = UINT32_MAX - 1;

    struct Node {
        std::uint32_t var;
        std::uint32_t hi;
        std::uint32_t lo;
    };

    struct Key {
        std::uint32_t var, hi, lo;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = k.var;
            h = h * 0x9e3779b97f4a7c15ULL + k.hi;
            h = h * 0x9e3779b97f4a7c15ULL + k.lo;
            return static_cast<std::size_t>(h ^ (h >> 29));
        }
    };

    // Operation-cache key: op tag plus up to three operands.
    struct OpKey {
        std::uint32_t op, a, b, c;
        bool operator==(const OpKey&) const = default;
    };
    struct OpKeyHash {
        std::size_t operator()(const OpKey& k) const {
            std::uint64_t h = k.op;
            h = h * 0x9e3779b97f4a7c15ULL + k.a;
            h = h * 0x9e3779b97f4a7c15ULL + k.b;
            h = h * 0x9e3779b97f4a7c15ULL + k.c;
            return static_cast<std::size_t>(h ^ (h >> 29));
        }
    };
    enum Op : std::uint32_t { kAnd, kOr, kXor, kNot, kIte, kExists, kForall, kCofactor };

    bool dead(std::uint32_t id) const { return nodes_[id].var == kDeadVar; }

    void check_var(std::uint32_t v) const {
        if (v >= var_count_) throw std::invalid_argument("bdd: undeclared variable");
    }

    std::uint32_t operand(const Bdd& f) const {
        if (f.manager() != this)
            throw std::invalid_argument("bdd: node used with a foreign manager");
        return f.id();
    }

    std::uint32_t make_node(std::uint32_t var, std::uint32_t hi, std::uint32_t lo) {
        if (hi == lo) return hi;
        Key key{var, hi, lo};
        auto it = unique_.find(key);
        if (it != unique_.end()) return it->second;
        if (live_node_count() >= node_limit_)
            throw ResourceLimitError("bdd: node limit exceeded");
        std::uint32_t id;
        if (!free_list_.empty()) {
            id = free_list_.back();
            free_list_.pop_back();
            nodes_[id] = {var, hi, lo};
        } else {
            id = static_cast<std::uint32_t>(nodes_.size());
            nodes_.push_back({var, hi, lo});
        }
        unique_.emplace(key, id);
        return id;
    }

    bool cache_get(const OpKey& key, std::uint32_t& out) const {
        if (!cache_enabled_) return false;
        auto it = cache_.find(key);
        if (it == cache_.end()) return false;
        out = it->second;
        return true;
    }
    void cache_put(const OpKey& key, std::uint32_t value) {
        if (cache_enabled_) cache_.emplace(key, value);
    }

    std::uint32_t and_rec(std::uint32_t f, std::uint32_t g) {
        if (f == 0 || g == 0) return 0;
        if (f == 1) return g;
        if (g == 1) return f;
        if (f == g) return f;
        if (f > g) std::swap(f, g);
        OpKey key{kAnd, f, g, 0};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        auto [var, f1, f0, g1, g0] = split(f, g);
        std::uint32_t result = make_node(var, and_rec(f1, g1), and_rec(f0, g0));
        cache_put(key, result);
        return result;
    }

    std::uint32_t or_rec(std::uint32_t f, std::uint32_t g) {
        if (f == 1 || g == 1) return 1;
        if (f == 0) return g;
        if (g == 0) return f;
        if (f == g) return f;
        if (f > g) std::swap(f, g);
        OpKey key{kOr, f, g, 0};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        auto [var, f1, f0, g1, g0] = split(f, g);
        std::uint32_t result = make_node(var, or_rec(f1, g1), or_rec(f0, g0));
        cache_put(key, result);
        return result;
    }

    std::uint32_t xor_rec(std::uint32_t f, std::uint32_t g) {
        if (f == g) return 0;
        if (f == 0) return g;
        if (g == 0) return f;
        if (f == 1) return not_rec(g);
        if (g == 1) return not_rec(f);
        if (f > g) std::swap(f, g);
        OpKey key{kXor, f, g, 0};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        auto [var, f1, f0, g1, g0] = split(f, g);
        std::uint32_t result = make_node(var, xor_rec(f1, g1), xor_rec(f0, g0));
        cache_put(key, result);
        return result;
    }

    std::uint32_t not_rec(std::uint32_t f) {
        if (f <= 1) return f ^ 1u;
        OpKey key{kNot, f, 0, 0};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        const Node n = nodes_[f];
        std::uint32_t result = make_node(n.var, not_rec(n.hi), not_rec(n.lo));
        cache_put(key, result);
        return result;
    }

    std::uint32_t ite_rec(std::uint32_t c, std::uint32_t t, std::uint32_t e) {
        if (c == 1) return t;
        if (c == 0) return e;
        if (t == e) return t;
        if (t == 1 && e == 0) return c;
        if (t == 0 && e == 1) return not_rec(c);
        OpKey key{kIte, c, t, e};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        std::uint32_t var = kLeafVar;
        for (std::uint32_t id : {c, t, e})
            if (id > 1) var = std::min(var, nodes_[id].var);
        auto branch = [&](std::uint32_t id, bool high) {
            if (id <= 1 || nodes_[id].var != var) return id;
            return high ? nodes_[id].hi : nodes_[id].lo;
        };
        std::uint32_t result =
            make_node(var, ite_rec(branch(c, true), branch(t, true), branch(e, true)),
                      ite_rec(branch(c, false), branch(t, false), branch(e, false)));
        cache_put(key, result);
        return result;
    }

    // Recursions copy Node values: make_node may grow the node vector and
    // invalidate references.
    std::uint32_t quant_rec(std::uint32_t f, std::uint32_t vars, bool universal) {
        if (f <= 1 || vars == 1) return f;
        const std::uint32_t fvar = nodes_[f].var;
        // Skip cube variables that sit above f's top variable.
        while (vars > 1 && nodes_[vars].var < fvar) vars = nodes_[vars].hi;
        if (vars == 1) return f;
        OpKey key{universal ? kForall : kExists, f, vars, 0};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        const Node fn = nodes_[f];
        const Node cn = nodes_[vars];
        std::uint32_t result;
        if (fn.var == cn.var) {
            std::uint32_t hi = quant_rec(fn.hi, cn.hi, universal);
            std::uint32_t lo = quant_rec(fn.lo, cn.hi, universal);
            result = universal ? and_rec(hi, lo) : or_rec(hi, lo);
        } else {
            result = make_node(fn.var, quant_rec(fn.hi, vars, universal),
                               quant_rec(fn.lo, vars, universal));
        }
        cache_put(key, result);
        return result;
    }

    std::uint32_t cofactor_rec(std::uint32_t f, std::uint32_t v, bool value) {
        if (f <= 1) return f;
        const Node n = nodes_[f];
        if (n.var > v) return f;
        if (n.var == v) return value ? n.hi : n.lo;
        OpKey key{kCofactor, f, v, value ? 1u : 0u};
        std::uint32_t hit;
        if (cache_get(key, hit)) return hit;
        std::uint32_t result = make_node(n.var, cofactor_rec(n.hi, v, value),
                                         cofactor_rec(n.lo, v, value));
        cache_put(key, result);
        return result;
    }

    std::uint32_t compose_rec(std::uint32_t f,
                              const std::unordered_map<std::uint32_t, std::uint32_t>& subst,
                              std::unordered_map<std::uint32_t, std::uint32_t>& cache) {
        if (f <= 1) return f;
        auto it = cache.find(f);
        if (it != cache.end()) return it->second;
        const Node n = nodes_[f];
        std::uint32_t hi = compose_rec(n.hi, subst, cache);
        std::uint32_t lo = compose_rec(n.lo, subst, cache);
        auto sub = subst.find(n.var);
        std::uint32_t guard = sub != subst.end() ? sub->second : make_node(n.var, 1, 0);
        std::uint32_t result = ite_rec(guard, hi, lo);
        cache.emplace(f, result);
        return result;
    }

    struct Split {
        std::uint32_t var, f1, f0, g1, g0;
    };
    Split split(std::uint32_t f, std::uint32_t g) const {
        std::uint32_t fv = f > 1 ? nodes_[f].var : kLeafVar;
        std::uint32_t gv = g > 1 ? nodes_[g].var : kLeafVar;
        std::uint32_t var = std::min(fv, gv);
        Split s{var, f, f, g, g};
        if (fv == var) {
            s.f1 = nodes_[f].hi;
            s.f0 = nodes_[f].lo;
        }
        if (gv == var) {
            s.g1 = nodes_[g].hi;
            s.g0 = nodes_[g].lo;
        }
        return s;
    }

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> ext_refs_;
    std::vector<std::uint32_t> free_list_;
    std::unordered_map<Key, std::uint32_t, KeyHash> unique_;
    std::unordered_map<OpKey, std::uint32_t, OpKeyHash> cache_;
    std::size_t var_count_ = 0;
    std::size_t node_limit_;
    bool cache_enabled_;
};

inline Bdd::Bdd(DdManager* manager, std::uint32_t id) : manager_(manager), id_(id) {
    if (manager_) manager_->ref(id_);
}
inline Bdd::Bdd(const Bdd& other) : manager_(other.manager_), id_(other.id_) {
    if (manager_) manager_->ref(id_);
}
inline Bdd::Bdd(Bdd&& other) noexcept : manager_(other.manager_), id_(other.id_) {
    other.manager_ = nullptr;
    other.id_ = 0;
}
inline Bdd& Bdd::operator=(const Bdd& other) {
    if (this == &other) return *this;
    if (other.manager_) other.manager_->ref(other.id_);
    if (manager_) manager_->deref(id_);
    manager_ = other.manager_;
    id_ = other.id_;
    return *this;
}
inline Bdd& Bdd::operator=(Bdd&& other) noexcept {
    if (this == &other) return *this;
    if (manager_) manager_->deref(id_);
    manager_ = other.manager_;
    id_ = other.id_;
    other.manager_ = nullptr;
    other.id_ = 0;
    return *this;
}
inline Bdd::~Bdd() {
    if (manager_) manager_->deref(id_);
}

inline bool Bdd::is_true() const { return manager_ && id_ == 1; }
inline bool Bdd::is_false() const { return manager_ && id_ == 0; }

inline Bdd Bdd::operator&(const Bdd& other) const { return manager_->apply_and(*this, other); }
inline Bdd Bdd::operator|(const Bdd& other) const { return manager_->apply_or(*this, other); }
inline Bdd Bdd::operator^(const Bdd& other) const { return manager_->apply_xor(*this, other); }
inline Bdd Bdd::operator!() const { return manager_->negate(*this); }
inline Bdd Bdd::implies(const Bdd& other) const {
    return manager_->apply_implies(*this, other);
}
inline Bdd Bdd::iff(const Bdd& other) const { return manager_->apply_iff(*this, other); }

}  // namespace besynth
