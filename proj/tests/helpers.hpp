#pragma once

// Shared test utilities: deterministic RNG handles, random valid
// embeddings, and the dense decomposition oracle used to validate the
// combinatorial composition calculus.

#include <random>
#include <vector>

#include "calim/embedding.hpp"
#include "calim/matrix.hpp"
#include "calim/nest.hpp"

namespace testutil {

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x7e57ULL ^ salt); }

/// Random valid compression embedding out of T_n: an identity block plus a
/// few random intervals, shuffled, with the distinguished index tracking
/// one identity block.
inline calim::CompressionEmbedding random_embedding(int n, std::mt19937_64& gen,
                                                    int extra_blocks = 3) {
    const std::vector<calim::Interval> pool = calim::intervals_of(n);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> count(1, extra_blocks);
    std::vector<calim::Interval> blocks{calim::full_interval(n)};
    const int extras = count(gen);
    for (int i = 0; i < extras; ++i) blocks.push_back(pool[pick(gen)]);
    std::shuffle(blocks.begin(), blocks.end(), gen);
    calim::CompressionEmbedding emb;
    emb.source_dim = n;
    emb.blocks = blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].is_identity()) emb.distinguished = i;
    calim::validate_embedding(emb);
    return emb;
}

/// Dense verification that psi_q o phi decomposes as the claimed interval
/// list: for every matrix unit, compress(phi(u), q) must equal the block
/// diagonal of the claimed compressions.
inline bool decomposition_matches_dense(const calim::Interval& q,
                                        const calim::CompressionEmbedding& emb,
                                        const std::vector<calim::Interval>& claimed) {
    const int n = emb.source_dim;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const calim::CMatrix u = calim::matrix_unit(n, i, j);
            std::vector<calim::CMatrix> pieces;
            for (const calim::Interval& r : claimed) pieces.push_back(calim::compress(u, r));
            const calim::CMatrix lhs = calim::compress(calim::apply_embedding(emb, u), q);
            if (lhs != calim::block_diag(pieces)) return false;
        }
    return true;
}

}  // namespace testutil
