#ifndef SRFLOW_SPARSE_MATRIX_HPP
#define SRFLOW_SPARSE_MATRIX_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "srflow/rational.hpp"

namespace srflow::linalg {

/// Sparse integer matrix stored by rows. Within a row the column indices are
/// strictly increasing and no zero coefficient is stored. Rows may be empty.
class SparseIntMatrix {
  public:
    using Entry = std::pair<std::uint32_t, BigInt>;
    using Row = std::vector<Entry>;

    SparseIntMatrix() = default;
    SparseIntMatrix(std::size_t num_rows, std::size_t num_cols)
        : m_rows(num_rows), m_cols(num_cols) {}

    std::size_t num_rows() const { return m_rows.size(); }
    std::size_t num_cols() const { return m_cols; }

    /// Installs a row; entries are sorted, merged and stripped of zeros.
    void set_row(std::size_t i, Row entries);
    void append_row(Row entries);
    const Row& row(std::size_t i) const { return m_rows[i]; }

    std::size_t nnz() const;

    /// Exact matrix-vector product; v indexed by column.
    std::vector<BigInt> apply(const std::vector<BigInt>& v) const;

    /// Debug dump: one line per row, `row i: (col,coeff) ...`.
    void dump(std::ostream& os) const;
    /// Triplet interop format: header `rows cols`, then lines `i j value`.
    void write_triplets(std::ostream& os) const;
    static SparseIntMatrix read_triplets(std::istream& is);

  private:
    std::vector<Row> m_rows;
    std::size_t m_cols = 0;
};

} // namespace srflow::linalg

#endif
