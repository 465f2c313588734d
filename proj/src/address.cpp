#include "necklace/address.hpp"

#include "necklace/errors.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace necklace {

Word Word::prefix(std::size_t len) const
{
    len = std::min(len, symbols_.size());
    return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(len)));
}

Word Word::drop_front(std::size_t count) const
{
    count = std::min(count, symbols_.size());
    return Word(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(count), symbols_.end()));
}

bool Word::starts_with(const Word& other) const
{
    return other.size() <= size() && std::equal(other.symbols_.begin(), other.symbols_.end(), symbols_.begin());
}

Word Word::operator+(const Word& other) const
{
    std::vector<Symbol> out;
    out.reserve(size() + other.size());
    out.insert(out.end(), symbols_.begin(), symbols_.end());
    out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
    return Word(std::move(out));
}

Word Word::operator+(Symbol s) const
{
    Word out = *this;
    out.push_back(s);
    return out;
}

std::string Word::to_string(int n) const
{
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (n > 9 && i > 0) {
            out += '.';
        }
        out += std::to_string(static_cast<int>(symbols_[i]));
    }
    return out;
}

namespace {

Word primitive_root(const Word& w)
{
    const std::size_t len = w.size();
    for (std::size_t d = 1; d < len; ++d) {
        if (len % d != 0) {
            continue;
        }
        bool repeats = true;
        for (std::size_t i = d; i < len && repeats; ++i) {
            repeats = w[i] == w[i - d];
        }
        if (repeats) {
            return w.prefix(d);
        }
    }
    return w;
}

Word rotate_right(const Word& w)
{
    std::vector<Symbol> out;
    out.reserve(w.size());
    out.push_back(w.back());
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        out.push_back(w[i]);
    }
    return Word(std::move(out));
}

} // namespace

Address::Address(Word preperiod, Word period) : pre_(std::move(preperiod)), per_(std::move(period))
{
    if (per_.empty()) {
        throw MalformedInput("malformed address: empty period");
    }
    per_ = primitive_root(per_);
    while (!pre_.empty() && pre_.back() == per_.back()) {
        pre_.pop_back();
        per_ = rotate_right(per_);
    }
}

Word Address::prefix(std::size_t len) const
{
    std::vector<Symbol> out(len);
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = at(i);
    }
    return Word(std::move(out));
}

Address Address::suffix(std::size_t p) const
{
    if (p < pre_.size()) {
        return Address(pre_.drop_front(p), per_);
    }
    const std::size_t shift = (p - pre_.size()) % per_.size();
    std::vector<Symbol> rotated(per_.size());
    for (std::size_t i = 0; i < per_.size(); ++i) {
        rotated[i] = per_[(i + shift) % per_.size()];
    }
    return Address(Word(), Word(std::move(rotated)));
}

Address Address::prepend(const Word& w) const { return Address(w + pre_, per_); }

bool Address::suffix_equals(std::size_t p, const Address& other) const
{
    const std::size_t own_pre = pre_.size() > p ? pre_.size() - p : 0;
    const std::size_t bound = std::max(own_pre, other.pre_.size()) + per_.size() * other.per_.size();
    for (std::size_t i = 0; i < bound; ++i) {
        if (at(p + i) != other.at(i)) {
            return false;
        }
    }
    return true;
}

std::string Address::to_string(int n) const
{
    std::string out = pre_.to_string(n);
    if (n > 9 && !pre_.empty()) {
        out += '.';
    }
    out += '(';
    out += per_.to_string(n);
    out += ')';
    return out;
}

bool sequence_less(const Address& a, const Address& b)
{
    const std::size_t bound = std::max(a.preperiod().size(), b.preperiod().size()) + a.period().size() * b.period().size();
    for (std::size_t i = 0; i < bound; ++i) {
        if (a.at(i) != b.at(i)) {
            return a.at(i) < b.at(i);
        }
    }
    return false;
}

std::size_t common_prefix_length(const Address& a, const Address& b, std::size_t cap)
{
    const std::size_t bound = std::max(a.preperiod().size(), b.preperiod().size()) + a.period().size() * b.period().size();
    for (std::size_t i = 0; i < bound && i < cap; ++i) {
        if (a.at(i) != b.at(i)) {
            return i;
        }
    }
    // Equal sequences.
    return cap;
}

Address normalize_address(const Word& pre, const Word& per) { return Address(pre, per); }

Word parse_word(std::string_view text, int n)
{
    std::vector<Symbol> out;
    if (text.empty() || text == "ε" || text == "e") {
        return Word();
    }
    auto push = [&](std::string_view token) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw MalformedInput("malformed word: bad symbol '" + std::string(token) + "'");
        }
        if (value < 1 || value > n) {
            throw MalformedInput("malformed word: symbol " + std::to_string(value) + " outside 1.." + std::to_string(n));
        }
        out.push_back(static_cast<Symbol>(value));
    };
    if (text.find('.') != std::string_view::npos || n > 9) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t dot = text.find('.', start);
            const std::size_t end = dot == std::string_view::npos ? text.size() : dot;
            if (end > start) {
                push(text.substr(start, end - start));
            }
            if (dot == std::string_view::npos) {
                break;
            }
            start = dot + 1;
        }
    } else {
        for (std::size_t i = 0; i < text.size(); ++i) {
            push(text.substr(i, 1));
        }
    }
    return Word(std::move(out));
}

Address parse_address(std::string_view text, int n)
{
    const std::size_t open = text.find('(');
    const std::size_t close = text.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open || close + 1 != text.size()) {
        throw MalformedInput("malformed address '" + std::string(text) + "': expected pre(per)");
    }
    Word per = parse_word(text.substr(open + 1, close - open - 1), n);
    if (per.empty()) {
        throw MalformedInput("malformed address '" + std::string(text) + "': empty period");
    }
    return Address(parse_word(text.substr(0, open), n), std::move(per));
}

std::size_t WordHash::operator()(const Word& w) const noexcept
{
    std::size_t h = 1469598103934665603ULL;
    for (Symbol s : w.symbols()) {
        h = (h ^ s) * 1099511628211ULL;
    }
    return h ^ w.size();
}

std::size_t AddressHash::operator()(const Address& a) const noexcept
{
    const WordHash wh;
    return wh(a.preperiod()) * 31 + wh(a.period()) + 0x9e3779b97f4a7c15ULL;
}

} // namespace necklace
