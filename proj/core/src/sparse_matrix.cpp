#include "srflow/sparse_matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "srflow/errors.hpp"

namespace srflow::linalg {

namespace {

void canonicalize(SparseIntMatrix::Row& entries, std::size_t num_cols) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseIntMatrix::Row out;
    out.reserve(entries.size());
    for (auto& [c, v] : entries) {
        if (c >= num_cols) throw input_error("sparse row entry beyond column count");
        if (!out.empty() && out.back().first == c) out.back().second += v;
        else out.emplace_back(c, std::move(v));
        if (!out.empty() && out.back().second == 0) out.pop_back();
    }
    entries = std::move(out);
}

} // namespace

void SparseIntMatrix::set_row(std::size_t i, Row entries) {
    canonicalize(entries, m_cols);
    m_rows.at(i) = std::move(entries);
}

void SparseIntMatrix::append_row(Row entries) {
    canonicalize(entries, m_cols);
    m_rows.push_back(std::move(entries));
}

std::size_t SparseIntMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& r : m_rows) n += r.size();
    return n;
}

std::vector<BigInt> SparseIntMatrix::apply(const std::vector<BigInt>& v) const {
    if (v.size() != m_cols) throw dimension_error("matrix-vector size mismatch");
    std::vector<BigInt> out(m_rows.size(), BigInt(0));
    for (std::size_t i = 0; i < m_rows.size(); ++i)
        for (const auto& [c, val] : m_rows[i]) out[i] += val * v[c];
    return out;
}

void SparseIntMatrix::dump(std::ostream& os) const {
    for (std::size_t i = 0; i < m_rows.size(); ++i) {
        os << "row " << i << ":";
        for (const auto& [c, v] : m_rows[i]) os << " (" << c << "," << v.get_str() << ")";
        os << "\n";
    }
}

void SparseIntMatrix::write_triplets(std::ostream& os) const {
    os << m_rows.size() << " " << m_cols << "\n";
    for (std::size_t i = 0; i < m_rows.size(); ++i)
        for (const auto& [c, v] : m_rows[i])
            os << i << " " << c << " " << v.get_str() << "\n";
}

SparseIntMatrix SparseIntMatrix::read_triplets(std::istream& is) {
    std::size_t rows, cols;
    if (!(is >> rows >> cols)) throw input_error("triplet stream: missing header");
    std::vector<SparseIntMatrix::Row> acc(rows);
    std::size_t i, j;
    std::string val;
    while (is >> i >> j >> val) {
        if (i >= rows || j >= cols) throw input_error("triplet stream: index out of range");
        acc[i].emplace_back(static_cast<std::uint32_t>(j), BigInt(val));
    }
    SparseIntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.set_row(r, std::move(acc[r]));
    return m;
}

} // namespace srflow::linalg
