#ifndef ORDAUTO_STATESET_HPP
#define ORDAUTO_STATESET_HPP

#include <cstdint>
#include <vector>

namespace ordauto {

// Fixed-capacity bit set over a dense state space [0, size).
class StateSet {
  public:
    StateSet() = default;
    explicit StateSet(int size) : size_(size), words_((size + 63) / 64, 0) {}

    int capacity() const { return size_; }

    void set(int i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    bool empty() const {
        for (uint64_t w : words_)
            if (w)
                return false;
        return true;
    }

    int count() const {
        int n = 0;
        for (uint64_t w : words_)
            n += __builtin_popcountll(w);
        return n;
    }

    StateSet& operator|=(const StateSet& o) {
        for (size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }

    StateSet& operator&=(const StateSet& o) {
        for (size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }

    bool operator==(const StateSet& o) const { return size_ == o.size_ && words_ == o.words_; }
    bool operator!=(const StateSet& o) const { return !(*this == o); }
    bool operator<(const StateSet& o) const {
        if (size_ != o.size_)
            return size_ < o.size_;
        return words_ < o.words_;
    }

    bool subset_of(const StateSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i])
                return false;
        return true;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (size_t wi = 0; wi < words_.size(); ++wi) {
            uint64_t w = words_[wi];
            while (w) {
                int b = __builtin_ctzll(w);
                f(static_cast<int>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

  private:
    int size_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace ordauto

#endif
