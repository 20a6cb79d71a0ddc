#include "ordauto/sampling.hpp"

#include <algorithm>

namespace ordauto {

const std::vector<Ordinal>& default_run_pool() {
    static const std::vector<Ordinal> pool = [] {
        Ordinal w = Ordinal::omega();
        Ordinal w2 = multiply(w, w);
        return std::vector<Ordinal>{Ordinal(1),          Ordinal(2),
                                    Ordinal(3),          w,
                                    add(w, Ordinal(1)),  multiply(w, Ordinal(2)),
                                    w2,                  add(w2, w)};
    }();
    return pool;
}

Ordinal sample_ordinal_below_omega_omega(std::mt19937_64& rng, int max_terms, int max_exponent,
                                         uint64_t max_coeff) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> expd(0, max_exponent);
    std::uniform_int_distribution<uint64_t> coeffd(1, max_coeff);
    int k = nterms(rng);
    std::vector<Ordinal::Term> terms;
    for (int i = 0; i < k; ++i)
        terms.push_back(Ordinal::Term{Ordinal(static_cast<uint64_t>(expd(rng))), coeffd(rng)});
    return Ordinal::from_terms(terms);
}

BlockWord WordSampler::sample(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> nblocks(0, max_blocks);
    std::uniform_int_distribution<size_t> symd(0, alphabet.size() - 1);
    std::uniform_int_distribution<size_t> rund(0, runs.size() - 1);
    int k = nblocks(rng);
    std::vector<Block> blocks;
    for (int i = 0; i < k; ++i) {
        Symbol s = alphabet.symbols()[symd(rng)];
        if (!blocks.empty() && blocks.back().symbol == s && alphabet.size() > 1) {
            size_t shift = 1 + symd(rng) % (alphabet.size() - 1);
            s = alphabet.symbols()[(alphabet.index_of(s) + shift) % alphabet.size()];
        }
        blocks.push_back(Block{s, runs[rund(rng)]});
    }
    return BlockWord(alphabet, std::move(blocks));
}

std::vector<Ordinal> split_positions(const BlockWord& w) {
    std::vector<Ordinal> out;
    Ordinal len = length(w);
    auto push = [&](const Ordinal& p) {
        if (p <= len && std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    };
    push(Ordinal());
    Ordinal pos;
    for (const Block& b : w.blocks()) {
        Ordinal end = add(pos, b.run);
        push(pos);
        for (const Ordinal& d :
             {Ordinal(1), Ordinal(2), Ordinal::omega(), multiply(Ordinal::omega(), Ordinal(2))}) {
            Ordinal p = add(pos, d);
            if (p < end)
                push(p);
        }
        pos = end;
    }
    push(len);
    return out;
}

}  // namespace ordauto
