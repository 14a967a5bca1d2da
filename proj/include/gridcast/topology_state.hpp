#ifndef GRIDCAST_TOPOLOGY_STATE_HPP_
#define GRIDCAST_TOPOLOGY_STATE_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gridcast/errors.hpp"

namespace gridcast {

/// Branch-connection word: bit l (1-based) is 1 while branch l carries power
/// and drops to 0 permanently once the branch is severed. Branch n is the
/// most significant bit.
class TopologyState {
 public:
    TopologyState() = default;

    TopologyState(int branch_count, bool all_on)
        : n_(branch_count), words_((branch_count + 63) / 64, 0) {
        if (all_on) {
            for (int l = 1; l <= n_; ++l) set_bit(l, true);
        }
    }

    static TopologyState all_on(int branch_count) { return TopologyState(branch_count, true); }
    static TopologyState all_off(int branch_count) { return TopologyState(branch_count, false); }

    int branch_count() const { return n_; }

    bool is_on(int branch) const {
        check_branch(branch);
        return (words_[word(branch)] >> shift(branch)) & 1u;
    }

    void set_bit(int branch, bool on) {
        check_branch(branch);
        std::uint64_t mask = std::uint64_t(1) << shift(branch);
        if (on)
            words_[word(branch)] |= mask;
        else
            words_[word(branch)] &= ~mask;
    }

    /// Copy with the listed branches (1-based) severed.
    TopologyState with_outaged(const std::vector<int>& branches) const {
        TopologyState s = *this;
        for (int l : branches) s.set_bit(l, false);
        return s;
    }

    /// True when j is reachable from *this without reconnection: i | j == i.
    bool can_transition_to(const TopologyState& j) const {
        if (j.n_ != n_) return false;
        for (std::size_t w = 0; w < words_.size(); ++w)
            if ((words_[w] | j.words_[w]) != words_[w]) return false;
        return true;
    }

    std::vector<int> connected_branches() const {
        std::vector<int> out;
        for (int l = 1; l <= n_; ++l)
            if (is_on(l)) out.push_back(l);
        return out;
    }

    std::vector<int> outaged_branches() const {
        std::vector<int> out;
        for (int l = 1; l <= n_; ++l)
            if (!is_on(l)) out.push_back(l);
        return out;
    }

    int on_count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }

    /// 1-based decimal rank of the state: binary value of the word plus one.
    /// Only defined up to 63 branches.
    std::uint64_t state_index() const {
        if (n_ > 63) throw GridError(ErrorCode::dimension_mismatch, "state_index limited to 63 branches");
        return (words_.empty() ? 0 : words_[0]) + 1;
    }

    static TopologyState from_state_index(int branch_count, std::uint64_t index) {
        if (branch_count > 63)
            throw GridError(ErrorCode::dimension_mismatch, "state_index limited to 63 branches");
        TopologyState s(branch_count, false);
        if (!s.words_.empty()) s.words_[0] = index - 1;
        return s;
    }

    /// Hex encoding, most significant nibble first (branch n leads).
    std::string hex() const {
        static const char digits[] = "0123456789abcdef";
        int nibbles = (n_ + 3) / 4;
        if (nibbles == 0) nibbles = 1;
        std::string out(nibbles, '0');
        for (int i = 0; i < nibbles; ++i) {
            int lo = 4 * (nibbles - 1 - i);
            unsigned v = 0;
            for (int b = 0; b < 4; ++b) {
                int branch = lo + b + 1;
                if (branch <= n_ && is_on(branch)) v |= 1u << b;
            }
            out[i] = digits[v];
        }
        return out;
    }

    /// Numeric order on the binary word (branch n most significant).
    std::strong_ordering operator<=>(const TopologyState& o) const {
        if (auto c = n_ <=> o.n_; c != 0) return c;
        for (std::size_t w = words_.size(); w-- > 0;) {
            if (auto c = words_[w] <=> o.words_[w]; c != 0) return c;
        }
        return std::strong_ordering::equal;
    }

    bool operator==(const TopologyState& o) const = default;

    std::size_t hash() const {
        std::size_t h = std::hash<int>()(n_);
        for (std::uint64_t w : words_) h ^= std::hash<std::uint64_t>()(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

 private:
    static std::size_t word(int branch) { return std::size_t(branch - 1) / 64; }
    static unsigned shift(int branch) { return unsigned(branch - 1) % 64; }

    void check_branch(int branch) const {
        if (branch < 1 || branch > n_)
            throw GridError(ErrorCode::dimension_mismatch, "branch index out of range");
    }

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace gridcast

template <>
struct std::hash<gridcast::TopologyState> {
    std::size_t operator()(const gridcast::TopologyState& s) const { return s.hash(); }
};

#endif
