#ifndef SRFLOW_RANK_HPP
#define SRFLOW_RANK_HPP

#include <cstdint>

#include "srflow/sparse_matrix.hpp"

namespace srflow::linalg {

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(std::uint64_t n);

/// Rank of M over GF(p), p a prime below 2^62. Sparse elimination with a
/// minimum-fill pivot heuristic; deterministic for fixed input.
std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint64_t p);

/// Rank of M over Q via integer-preserving (fraction-free) elimination with
/// content stripping. rank_exact(M) >= rank_mod_p(M, p) for every prime p.
std::size_t rank_exact(const SparseIntMatrix& m);

/// Rows brought to primitive normal form (divided by their content, first
/// nonzero entry positive); proportional duplicates and empty rows removed.
/// The rank is unchanged.
SparseIntMatrix dedupe_rows(const SparseIntMatrix& m);

/// Residue form of a row, entries reduced into [0, p).
using ResidueRow = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

/// Rank over GF(p) of rows already in residue form (shared engine used by
/// the obstruction pipeline). Rows are consumed.
std::size_t rank_residue_rows(std::vector<ResidueRow> rows, std::size_t num_cols,
                              std::uint64_t p);

/// Exact rank of integer rows (consumed); shared engine.
using IntRow = SparseIntMatrix::Row;
std::size_t rank_integer_rows(std::vector<IntRow> rows, std::size_t num_cols);

std::uint64_t mod_reduce(const BigInt& v, std::uint64_t p);

} // namespace srflow::linalg

#endif
