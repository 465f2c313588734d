#pragma once

// Dihedral relabelings of a NIFS, spec isomorphism, and rigid homeomorphisms
// between necklaces described as per-copy dihedral choices.

#include "necklace/spec.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace necklace {

/// s^reflected ∘ τ^rotation, where τ(k) = k+1 cyclically and s(k) = n-k+1.
struct DihedralElement {
    int n = 3;
    int rotation = 0;
    bool reflected = false;

    Symbol operator()(Symbol k) const;
    /// Position in the order id, τ, ..., τ^{n-1}, s, sτ, ..., sτ^{n-1}.
    int index() const { return (reflected ? n : 0) + rotation; }
    bool orientation_preserving() const { return !reflected; }
    DihedralElement inverse() const;
    std::string to_string() const;

    static DihedralElement identity(int n) { return {n, 0, false}; }
    static DihedralElement from_index(int n, int index);
    /// The element acting as `images` (images[k-1] = σ(k)), if dihedral.
    static std::optional<DihedralElement> from_images(int n, const std::vector<Symbol>& images);

    auto operator<=>(const DihedralElement&) const = default;
    bool operator==(const DihedralElement&) const = default;
};

/// (a ∘ b)(k) = a(b(k)).
DihedralElement compose(const DihedralElement& a, const DihedralElement& b);
/// All 2n elements in canonical order.
std::vector<DihedralElement> dihedral_group(int n);

/// Symbolwise image of an address.
Address map_symbols(const Address& a, const DihedralElement& sigma);

/// The spec of the NIFS g_k = f_{σ(k)}.
NecklaceSpec apply_sigma(const NecklaceSpec& spec, const DihedralElement& sigma);

/// True when every glue rule of `a` holds in the identification closure of
/// `b` and vice versa.
bool same_identifications(const NecklaceSpec& a, const NecklaceSpec& b, int depth = kDefaultClassDepth);

struct IsomorphismResult {
    std::optional<DihedralElement> sigma;
    std::string reason;
};

/// Least σ (canonical order) with apply_sigma(a, σ) identifying exactly like b.
IsomorphismResult spec_isomorphic(const NecklaceSpec& a, const NecklaceSpec& b, int depth = kDefaultClassDepth);

/// A pinned point: the map at the current copy must send `from` (canonical
/// address in F) to `to` (canonical address in G).
struct Pin {
    Address from;
    Address to;
    auto operator<=>(const Pin&) const = default;
    bool operator==(const Pin&) const = default;
};

struct ClosureState {
    std::vector<Pin> context;
    /// Canonical group indices of the choices allowed by the pins, with one
    /// child state per symbol k = 1..n.
    std::vector<std::pair<int, std::vector<std::size_t>>> choices;
    /// Discovery depth.
    int depth = 0;
    bool expanded = false;
    bool live = false;
};

enum class Cardinality { empty, finite, uncountable, unknown };

std::string to_string(Cardinality c);

struct RigidMapClosure {
    int n = 0;
    bool n_mismatch = false;
    int depth = 0;
    /// All reachable states were expanded before the depth limit.
    bool closed = false;
    std::vector<ClosureState> states;
    Cardinality cardinality = Cardinality::unknown;
    /// Number of maps when the cardinality is finite.
    std::optional<std::uint64_t> count;
    /// Live choices at the root.
    std::vector<int> root_choices;
    /// Live states with two or more live choices.
    std::vector<std::size_t> branching_states;

    /// Valid choices (indices into states[s].choices) after pruning dead states.
    std::vector<std::size_t> live_choices(std::size_t s) const;
};

/// Breadth-first expansion of pin contexts up to `depth`, followed by the
/// greatest fixed point of live states.
RigidMapClosure rigid_maps(const NecklaceSpec& F, const NecklaceSpec& G, int depth = 6);

/// σ table of one map: the element chosen at every copy of level < depth.
using SigmaTable = std::map<Word, DihedralElement>;

/// All σ tables of admitted maps truncated to copies of level < depth. Throws
/// CapExceeded past `cap` tables.
std::vector<SigmaTable> map_tables(const RigidMapClosure& closure, int depth, std::size_t cap = 20000);

/// True when following the table's choices from the root only uses live
/// transitions, i.e. the table is the truncation of an admitted map.
bool admits(const RigidMapClosure& closure, const SigmaTable& table);

/// Image of a copy word under a σ table (length must be <= table depth).
Word image_word(const SigmaTable& table, const Word& w);
SigmaTable compose_tables(const SigmaTable& outer, const SigmaTable& inner, int depth);
SigmaTable inverse_table(const SigmaTable& table, int depth);

struct GroupCheck {
    bool contains_identity = false;
    bool closed_under_composition = false;
    bool closed_under_inverse = false;
    std::size_t tables = 0;
    int depth = 0;
};

/// Group property of rigid_maps(F, F) at the level of truncated σ tables.
GroupCheck check_group_property(const RigidMapClosure& closure, int depth = 2);

/// Image of a point under the map selected by `root_choice`; the map must be
/// deterministic below the root. Returns nullopt when the map is not
/// determined along the address.
std::optional<Address> map_address(const RigidMapClosure& closure, int root_choice, const Address& a);

struct UniquenessEntry {
    DihedralElement sigma;
    bool isomorphic = false;
    bool good = false;
    bool survey_matches = false;
};

struct UniquenessReport {
    bool skipped = false;
    std::string warning;
    std::vector<UniquenessEntry> entries;
    bool pass = false;
};

/// For every σ: apply_sigma(spec, σ) is isomorphic to spec, good, and has the
/// σ-relabeled extremal survey.
UniquenessReport verify_nifs_uniqueness(const NecklaceSpec& spec, int level_cap = 2, int threads = 1);

struct EmbeddingCheck {
    bool pass = false;
    int depth = 0;
    std::vector<std::string> mismatches;
};

/// Checks that f_w ∘ h carries the level-j cylinders onto the level-(|w|+j)
/// cylinders of copy w for j <= depth.
EmbeddingCheck embedding_image_copy_check(const NecklaceSpec& F, const Word& w, const SigmaTable& map, int depth);

} // namespace necklace
