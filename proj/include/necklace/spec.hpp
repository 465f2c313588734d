#pragma once

// The symbolic necklace model: glue table, identification closure, axiom
// validation, main nodes and goodness.

#include "necklace/address.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace necklace {

inline constexpr int kDefaultClassDepth = 12;
inline constexpr std::size_t kDefaultClassCap = 4096;

/// z_k = f_k(point at u) = f_{k+1}(point at v), i.e. k·u ~ (k+1)·v.
struct GlueRule {
    Symbol k = 1;
    Address u;
    Address v;

    bool operator==(const GlueRule&) const = default;
};

class NecklaceSpec {
public:
    /// Checks n >= 3, one rule per k in 1..n, and symbol ranges. Rules are
    /// stored ordered by k. Throws MalformedInput.
    NecklaceSpec(int n, std::vector<GlueRule> glue, std::string label = {});

    int n() const { return n_; }
    const std::string& label() const { return label_; }
    const std::vector<GlueRule>& glue() const { return glue_; }
    const GlueRule& rule(Symbol k) const { return glue_[k - 1]; }

    /// k·u_k
    const Address& left_side(Symbol k) const { return left_[k - 1]; }
    /// (k+1)·v_k
    const Address& right_side(Symbol k) const { return right_[k - 1]; }
    /// Longest defining length among the rule sides.
    std::size_t max_side_length() const;

    /// Same n and identical glue tables (labels ignored).
    bool operator==(const NecklaceSpec& other) const { return n_ == other.n_ && glue_ == other.glue_; }

private:
    int n_;
    std::vector<GlueRule> glue_;
    std::string label_;
    std::vector<Address> left_;
    std::vector<Address> right_;
};

/// All addresses identified with one point, canonical first.
struct PointClass {
    /// Sorted by sequence order; representatives.front() is canonical.
    std::vector<Address> representatives;

    const Address& canonical() const { return representatives.front(); }
    bool contains(const Address& a) const;
    /// Sorted distinct first symbols (the 1-level copies holding the point).
    std::vector<Symbol> first_symbols() const;
    /// Sorted distinct second symbols of representatives starting with `k`.
    std::vector<Symbol> symbols_after(Symbol k) const;
    /// True when some representative starts with `w`.
    bool in_copy(const Word& w) const;
    /// Smallest level at which the point joins two cylinders (longest common
    /// prefix of the representatives, plus one). Zero for a single-address
    /// point, which is never a junction.
    std::size_t junction_level() const;

    bool operator==(const PointClass& other) const { return canonical() == other.canonical(); }
};

/// Breadth-first closure of k·u_k ~ (k+1)·v_k under prefixing, truncated at
/// rule positions <= depth.
class Identifier {
public:
    explicit Identifier(const NecklaceSpec& spec, std::size_t class_cap = kDefaultClassCap);

    /// Throws CapExceeded when the class outgrows the cap.
    PointClass point_class(const Address& a, int depth = kDefaultClassDepth) const;
    const NecklaceSpec& spec() const { return spec_; }

private:
    NecklaceSpec spec_;
    std::size_t class_cap_;
    // For each first symbol s, rule sides beginning with s and their partners.
    std::vector<std::vector<std::pair<Address, Address>>> sides_by_symbol_;
};

PointClass point_class(const NecklaceSpec& spec, const Address& a, int depth = kDefaultClassDepth);

/// w·k·u_k
Address main_node_address(const NecklaceSpec& spec, const Word& w, Symbol k);

/// Classes of w·k·u_k for k = 1..n.
std::vector<PointClass> main_nodes(const NecklaceSpec& spec, const Word& w, int depth = kDefaultClassDepth);

struct PairContacts {
    Symbol i = 0;
    Symbol j = 0;
    bool adjacent = false;
    /// Canonical addresses of the classes meeting both copies.
    std::vector<Address> contacts;
    bool ok = false;
};

struct ValidationReport {
    int depth = 0;
    bool pass = false;
    std::vector<PairContacts> pairs;
    /// Offending copy pairs (i < j).
    std::vector<std::pair<Symbol, Symbol>> witnesses;
    std::vector<std::string> problems;
};

/// Checks the singleton/empty intersection pattern of the 1-level copies.
ValidationReport validate_spec(const NecklaceSpec& spec, int depth);

/// Longest w such that every point has a representative starting with w.
/// Ties (a single point sits in several same-level copies) go to the
/// lexicographically least word. Result length is at most `cap`.
Word smallest_copy_containing(const NecklaceSpec& spec, const std::vector<PointClass>& pts, std::size_t cap = 32);

struct GoodnessEntry {
    Symbol k = 0;
    /// Sub-copies F_kj holding z_{k-1}, resp. z_k.
    std::vector<Symbol> left_node_children;
    std::vector<Symbol> right_node_children;
};

struct GoodnessReport {
    bool good = false;
    std::vector<GoodnessEntry> entries;
    /// (k, j) such that F_kj holds both boundary nodes of F_k.
    std::vector<std::pair<Symbol, Symbol>> witnesses;
};

GoodnessReport check_goodness(const NecklaceSpec& spec, int depth = kDefaultClassDepth);

} // namespace necklace
