#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainrec/errors.hpp"

namespace chainrec {

/// Subset of a finite state space, stored as a bit mask.  All binary
/// operations require both operands to live on a space of the same size.
class SupportSet {
  public:
    explicit SupportSet(int n) : n_(n), w_((n + 63) / 64, 0) {
        if (n < 0) throw Error("set size must be nonnegative");
    }

    static SupportSet full(int n) {
        SupportSet s(n);
        for (int i = 0; i < n; ++i) s.set(i);
        return s;
    }

    static SupportSet singleton(int n, int i) {
        SupportSet s(n);
        s.set(i);
        return s;
    }

    static SupportSet from_indices(int n, const std::vector<int>& idx) {
        SupportSet s(n);
        for (int i : idx) s.set(i);
        return s;
    }

    /// Low 64 states from a mask, used by exhaustive subset enumeration.
    static SupportSet from_bits(int n, std::uint64_t bits) {
        SupportSet s(n);
        for (int i = 0; i < n && i < 64; ++i)
            if (bits >> i & 1) s.set(i);
        return s;
    }

    int space_size() const { return n_; }

    bool test(int i) const {
        check_index(i);
        return w_[i >> 6] >> (i & 63) & 1;
    }

    void set(int i, bool value = true) {
        check_index(i);
        if (value)
            w_[i >> 6] |= 1ULL << (i & 63);
        else
            w_[i >> 6] &= ~(1ULL << (i & 63));
    }

    bool none() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    int count() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }

    bool intersects(const SupportSet& o) const {
        check_size(o);
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & o.w_[k]) return true;
        return false;
    }

    /// True when this set contains o.
    bool contains(const SupportSet& o) const {
        check_size(o);
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (o.w_[k] & ~w_[k]) return false;
        return true;
    }

    SupportSet& operator|=(const SupportSet& o) {
        check_size(o);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    SupportSet& operator&=(const SupportSet& o) {
        check_size(o);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }

    friend SupportSet operator|(SupportSet a, const SupportSet& b) { return a |= b; }
    friend SupportSet operator&(SupportSet a, const SupportSet& b) { return a &= b; }

    SupportSet set_minus(const SupportSet& o) const {
        check_size(o);
        SupportSet r(*this);
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= ~o.w_[k];
        return r;
    }

    SupportSet complement() const {
        SupportSet r(n_);
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = ~w_[k];
        r.trim();
        return r;
    }

    bool operator==(const SupportSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const SupportSet& o) const { return !(*this == o); }

    std::vector<int> indices() const {
        std::vector<int> idx;
        idx.reserve(count());
        for (int i = 0; i < n_; ++i)
            if (test(i)) idx.push_back(i);
        return idx;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(n_);
        for (auto w : w_) {
            h ^= w;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (int i : indices()) {
            if (!first) out += ",";
            out += std::to_string(i);
            first = false;
        }
        return out + "}";
    }

  private:
    void check_index(int i) const {
        if (i < 0 || i >= n_)
            throw Error("state index " + std::to_string(i) + " out of range [0, " +
                        std::to_string(n_) + ")");
    }
    void check_size(const SupportSet& o) const {
        if (n_ != o.n_)
            throw DimensionMismatch("sets live on spaces of size " + std::to_string(n_) +
                                    " and " + std::to_string(o.n_));
    }
    void trim() {
        if (n_ & 63) w_.back() &= (1ULL << (n_ & 63)) - 1;
    }

    int n_;
    std::vector<std::uint64_t> w_;
};

struct SupportSetHash {
    std::size_t operator()(const SupportSet& s) const { return s.hash(); }
};

} // namespace chainrec
