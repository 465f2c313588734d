#pragma once

// Symbolic coding of points: finite words name copies, eventually periodic
// sequences name points.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace necklace {

/// A map index in 1..n. Arithmetic on symbols is cyclic (see cyclic_next).
using Symbol = std::uint8_t;

inline constexpr int kMaxSymbols = 255;

/// k+1 with n+1 wrapping to 1.
constexpr Symbol cyclic_next(Symbol k, int n) { return static_cast<Symbol>(k % n + 1); }
/// k-1 with 0 wrapping to n.
constexpr Symbol cyclic_prev(Symbol k, int n) { return static_cast<Symbol>((k + n - 2) % n + 1); }
/// True when the 1-level copies k and m meet (|k-m| = 1 or n-1).
constexpr bool cyclically_adjacent(int k, int m, int n)
{
    const int d = k > m ? k - m : m - k;
    return d == 1 || d == n - 1;
}

/// Finite word over {1..n}; the empty word names the whole attractor.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) { }
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) { }

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    Symbol back() const { return symbols_.back(); }
    std::span<const Symbol> symbols() const { return symbols_; }

    void push_back(Symbol s) { symbols_.push_back(s); }
    void pop_back() { symbols_.pop_back(); }

    Word prefix(std::size_t len) const;
    Word drop_front(std::size_t count) const;
    bool starts_with(const Word& other) const;
    Word operator+(const Word& other) const;
    Word operator+(Symbol s) const;

    auto operator<=>(const Word&) const = default;
    bool operator==(const Word&) const = default;

    /// Digits for n <= 9, dot-separated decimals otherwise. The empty word
    /// renders as "" (callers print "ε" where they need something visible).
    std::string to_string(int n) const;

private:
    std::vector<Symbol> symbols_;
};

/// Eventually periodic sequence pre · per^ω in normal form: the period is
/// primitive and the preperiod does not end with the period's last symbol.
/// Two addresses are equal as sequences iff their normal forms are equal.
class Address {
public:
    /// Normalizes. Throws MalformedInput for an empty period.
    Address(Word preperiod, Word period);

    const Word& preperiod() const { return pre_; }
    const Word& period() const { return per_; }

    Symbol at(std::size_t i) const
    {
        return i < pre_.size() ? pre_[i] : per_[(i - pre_.size()) % per_.size()];
    }

    /// First `len` symbols.
    Word prefix(std::size_t len) const;
    /// The sequence with its first `p` symbols dropped.
    Address suffix(std::size_t p) const;
    /// w · this.
    Address prepend(const Word& w) const;
    /// Compares this sequence shifted by `p` with `other`, without allocating.
    bool suffix_equals(std::size_t p, const Address& other) const;
    /// Length of the shortest prefix after which the sequence is periodic.
    std::size_t defining_length() const { return pre_.size() + per_.size(); }

    /// Structural order on normal forms (usable as a map key, not the
    /// sequence order).
    auto operator<=>(const Address&) const = default;
    bool operator==(const Address&) const = default;

    /// Renders as "pre(per)"; parse_address accepts the same form.
    std::string to_string(int n) const;

private:
    Word pre_;
    Word per_;
};

/// Lexicographic order of the infinite sequences.
bool sequence_less(const Address& a, const Address& b);
/// Length of the longest common prefix (capped at `cap`).
std::size_t common_prefix_length(const Address& a, const Address& b, std::size_t cap = 1u << 20);

Address normalize_address(const Word& pre, const Word& per);

/// Parses "12(3)", "(2)", or the dotted form "1.12.(3)". Symbols are checked
/// against 1..n. Throws MalformedInput.
Address parse_address(std::string_view text, int n);
/// Parses "123", "1.12.3" or "" / "ε" for the empty word.
Word parse_word(std::string_view text, int n);

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};
struct AddressHash {
    std::size_t operator()(const Address& a) const noexcept;
};

} // namespace necklace

template <>
struct std::hash<necklace::Word> : necklace::WordHash { };
template <>
struct std::hash<necklace::Address> : necklace::AddressHash { };
