#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace finsite {

// Fixed-width bitset sized at runtime.  Used for sieve membership masks,
// poset relation rows and subset bookkeeping.  All binary ops require equal
// sizes; callers own that invariant (checked in debug via the size test in
// each op's loop bound).
class Bits {
public:
    Bits() = default;
    explicit Bits(int n) : words_((static_cast<size_t>(n) + 63) / 64, 0), n_(n) {}

    static Bits full(int n) {
        Bits b(n);
        for (int i = 0; i < n; ++i) b.set(i);
        return b;
    }

    int size() const { return n_; }

    bool get(int i) const {
        return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    }
    void set(int i) { words_[static_cast<size_t>(i) >> 6] |= uint64_t{1} << (i & 63); }
    void reset(int i) { words_[static_cast<size_t>(i) >> 6] &= ~(uint64_t{1} << (i & 63)); }
    void assign(int i, bool v) { v ? set(i) : reset(i); }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    bool operator==(const Bits& o) const = default;

    Bits& operator|=(const Bits& o) {
        for (size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        for (size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    // this := this & ~o
    Bits& subtract(const Bits& o) {
        for (size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

    bool subset_of(const Bits& o) const {
        for (size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }
    bool intersects(const Bits& o) const {
        for (size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & o.words_[k]) return true;
        return false;
    }
    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    // Lowest set bit index, or -1.
    int first() const {
        for (size_t k = 0; k < words_.size(); ++k)
            if (words_[k]) return static_cast<int>(k * 64) + std::countr_zero(words_[k]);
        return -1;
    }

    template <class F>
    void for_each(F&& f) const {
        for (size_t k = 0; k < words_.size(); ++k) {
            uint64_t w = words_[k];
            while (w) {
                int i = static_cast<int>(k * 64) + std::countr_zero(w);
                f(i);
                w &= w - 1;
            }
        }
    }

    size_t hash() const {
        uint64_t h = 1469598103934665603ull;  // FNV-1a over words
        for (auto w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }

    // Numeric order of the mask (bit i has weight 2^i), matching ascending
    // uint64 enumeration; total order used for deterministic canonical choices.
    std::strong_ordering operator<=>(const Bits& o) const {
        for (size_t k = words_.size(); k-- > 0;) {
            if (words_[k] != o.words_[k])
                return words_[k] < o.words_[k] ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }

private:
    std::vector<uint64_t> words_;
    int n_ = 0;
};

struct BitsHash {
    size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace finsite
