#ifndef ORDAUTO_WORD_HPP
#define ORDAUTO_WORD_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ordauto/ordinal.hpp"

namespace ordauto {

using Symbol = std::string;

// Reserved tokens that may never be alphabet members.
inline const Symbol kLambda = "lambda";
inline const Symbol kLeftMark = "lh";
inline const Symbol kRightMark = "rh";

// A finite set of printable tokens. lambda/lh/rh are excluded; words over
// Sigma+lambda carry an alphabet extended explicitly via with_lambda().
class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Symbol> symbols, bool allow_lambda = false);

    bool contains(const Symbol& s) const;
    const std::vector<Symbol>& symbols() const { return symbols_; }
    size_t size() const { return symbols_.size(); }
    int index_of(const Symbol& s) const;  // -1 when absent

    Alphabet with_lambda() const;     // Sigma + lambda
    Alphabet without_lambda() const;  // drops lambda if present
    bool has_lambda() const;

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }
    bool subset_of(const Alphabet& o) const;
    static Alphabet unite(const Alphabet& a, const Alphabet& b);

  private:
    std::vector<Symbol> symbols_;  // sorted, unique
};

// One maximal constant-symbol run.
struct Block {
    Symbol symbol;
    Ordinal run;  // > 0 in normal form
};

bool operator==(const Block& a, const Block& b);

// An ordinal-length word presented as finitely many blocks s1^a1 ... sk^ak.
// Normal form: no zero runs, adjacent blocks carry distinct symbols.
class BlockWord {
  public:
    BlockWord() = default;  // empty word over the empty (inferred) alphabet
    explicit BlockWord(Alphabet alphabet) : alphabet_(std::move(alphabet)), declared_(true) {}
    // Normalizes: drops zero runs, merges adjacent equal-symbol blocks with
    // ordinal addition left to right. Symbols must belong to the alphabet.
    // A word built this way has a *declared* alphabet: concat insists on
    // agreement with other declared alphabets.
    BlockWord(Alphabet alphabet, std::vector<Block> blocks);

    // Alphabet inferred from the blocks; concat unites inferred alphabets.
    static BlockWord of(std::vector<Block> blocks);

    const Alphabet& alphabet() const { return alphabet_; }
    bool alphabet_declared() const { return declared_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    bool empty() const { return blocks_.empty(); }

    std::string str() const;

  private:
    friend BlockWord concat(const BlockWord&, const BlockWord&);
    friend BlockWord slice(const BlockWord&, const Ordinal&, const Ordinal&);
    Alphabet alphabet_;
    std::vector<Block> blocks_;
    bool declared_ = false;
};

bool operator==(const BlockWord& a, const BlockWord& b);  // same block content
inline bool operator!=(const BlockWord& a, const BlockWord& b) { return !(a == b); }
// Content ordering for use as a map key.
bool operator<(const BlockWord& a, const BlockWord& b);

// Ordinal sum of the runs, left to right.
Ordinal length(const BlockWord& w);

// Concatenation. Alphabets must agree or nest; the result takes the union.
BlockWord concat(const BlockWord& a, const BlockWord& b);

// The sub-word at positions [from, to); requires from <= to <= |w|.
BlockWord slice(const BlockWord& w, const Ordinal& from, const Ordinal& to);

// Prefix w_(a) = w|[0,a) and tail w^(a) = w|[a,|w|).
BlockWord prefix(const BlockWord& w, const Ordinal& a);
BlockWord tail(const BlockWord& w, const Ordinal& a);

// Symbol of the block containing position i; requires i < |w|.
const Symbol& symbol_at(const BlockWord& w, const Ordinal& i);

// Order type of the positions carrying s, and its cardinality.
struct ProjectionStats {
    Ordinal otp;
    Cardinality card;
};
ProjectionStats projection_stats(const BlockWord& w, const Symbol& s);

// Word literal grammar: whitespace-separated blocks `sym^(ordinal)`, with
// `^n` for finite runs and `^1` omitted; `eps` is the empty word.
// e.g. "0^(w) 1^(w*2) 0^3".
BlockWord parse_word(std::string_view text);
BlockWord parse_word(std::string_view text, const Alphabet& alphabet);
std::string format(const BlockWord& w);

}  // namespace ordauto

#endif
