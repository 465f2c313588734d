#pragma once

// Level-m models of the attractor: cylinders (copies of level m) joined
// through contact points, plus component and cut-point analysis with level
// escalation.

#include "necklace/spec.hpp"

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace necklace {

/// Library-wide cap on n^m cylinders; NECKLACE_MAX_CELLS overrides it.
std::size_t default_max_cells();

struct GraphOptions {
    int class_depth = kDefaultClassDepth;
    /// Consecutive levels that must agree before a result is accepted.
    int window = 2;
    int max_level = 10;
    /// Starting level; 0 picks (deepest junction level among removed points) + 2.
    int m0 = 0;
    std::size_t max_cells = default_max_cells();
    std::size_t class_cap = kDefaultClassCap;
};

struct ContactPoint {
    PointClass point;
    /// Cylinder indices, ascending.
    std::vector<std::uint32_t> incident;
};

class ContactGraph {
public:
    ContactGraph(int n, int level, std::vector<ContactPoint> contacts);

    int n() const { return n_; }
    int level() const { return level_; }
    std::size_t cylinder_count() const { return cylinder_count_; }
    const std::vector<ContactPoint>& contacts() const { return contacts_; }
    /// Contact ids touching cylinder `c`, ascending.
    std::span<const std::uint32_t> contacts_of(std::uint32_t c) const;

    /// Cylinders are numbered in lexicographic order of their words.
    Word cylinder_word(std::uint32_t index) const;
    std::uint32_t cylinder_index(const Word& w) const;
    /// Index range [first, last) of the level-m cylinders inside copy `w`.
    std::pair<std::uint32_t, std::uint32_t> cylinders_in(const Word& w) const;
    /// Contact id whose class shares a representative with `p`.
    std::optional<std::uint32_t> find_contact(const PointClass& p) const;

private:
    int n_;
    int level_;
    std::size_t cylinder_count_;
    std::vector<ContactPoint> contacts_;
    std::vector<std::uint32_t> adjacency_offsets_;
    std::vector<std::uint32_t> adjacency_;
    std::unordered_map<Address, std::uint32_t> by_representative_;
};

/// Throws CapExceeded when n^m exceeds the cylinder cap.
ContactGraph build_contact_graph(const NecklaceSpec& spec, int m, const GraphOptions& options = {});

/// Contact ids among `candidates`-restricted vertices whose removal
/// disconnects the subgraph induced by the cylinders with in_set[c] != 0.
/// Only contacts meeting at least two such cylinders are considered.
std::vector<std::uint32_t> articulation_contacts(const ContactGraph& g, const std::vector<char>& in_set);

struct Component {
    /// Cylinder indices at the reported level, ascending.
    std::vector<std::uint32_t> cylinders;
    /// Indices into ComponentSet::removed of the points in the closure.
    std::vector<std::size_t> boundary;
    /// Cut points of the closure, when requested.
    std::optional<std::size_t> ncp;
};

struct ComponentSet {
    int n = 0;
    std::vector<PointClass> removed;
    /// Copies deleted wholesale (empty for plain point removal).
    std::vector<Word> excluded;
    /// Ordered by least cylinder.
    std::vector<Component> components;
    int start_level = 0;
    /// Level the reported components were computed at.
    int stable_at = 0;
    std::vector<std::size_t> counts_per_level;
    bool with_ncp = false;

    Word cylinder_word(std::uint32_t index) const;
    /// Minimal list of copies whose union is component i, in lexicographic order.
    std::vector<Word> covering_words(std::size_t i) const;
    std::vector<std::size_t> ncp_list() const;
};

struct SubsetEvidence {
    std::vector<std::size_t> subset;
    std::size_t components = 0;
};

struct CutVerdict {
    bool cut = false;
    ComponentSet full;
    /// One entry per proper nonempty subset.
    std::vector<SubsetEvidence> evidence;
};

/// Shared, thread-safe access to contact graphs of one spec. Graphs are built
/// once per level and cached.
class TopologyEngine {
public:
    explicit TopologyEngine(const NecklaceSpec& spec, GraphOptions options = {});

    const NecklaceSpec& spec() const { return identifier_.spec(); }
    const GraphOptions& options() const { return options_; }

    PointClass point(const Address& a) const;
    std::shared_ptr<const ContactGraph> graph(int m) const;

    /// Components of F minus S, escalating the level until the component
    /// signature agrees over `window` consecutive levels and no cylinder
    /// meets two removed points.
    ComponentSet components_minus(const std::vector<PointClass>& S, bool with_ncp = false) const;
    /// Components of F minus the copy w.
    ComponentSet components_without_copy(const Word& w, bool with_ncp = false) const;
    /// Recomputes `set` with cut-point counts and returns that of component i.
    std::size_t ncp_closure(const ComponentSet& set, std::size_t i) const;
    CutVerdict is_cut(const std::vector<PointClass>& S) const;

private:
    ComponentSet escalate(const std::vector<PointClass>& S, const std::vector<Word>& excluded, bool with_ncp) const;

    Identifier identifier_;
    GraphOptions options_;
    mutable std::mutex mutex_;
    mutable std::map<int, std::shared_future<std::shared_ptr<const ContactGraph>>> graphs_;
};

ComponentSet components_minus(const NecklaceSpec& spec, const std::vector<PointClass>& S, int m0 = 0, int window = 2);
std::size_t ncp_closure(const NecklaceSpec& spec, const ComponentSet& set, std::size_t i);
CutVerdict is_cut(const NecklaceSpec& spec, const std::vector<PointClass>& S);

} // namespace necklace
