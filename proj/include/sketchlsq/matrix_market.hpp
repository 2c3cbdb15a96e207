#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "sketchlsq/csc_matrix.hpp"
#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/errors.hpp"

namespace sketchlsq::mm {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct Header {
    bool coordinate = false;  // else array
};

inline Header read_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw UnsupportedFormat(path + ": empty file");
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix") {
        throw UnsupportedFormat(path + ": missing MatrixMarket matrix banner");
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array") {
        throw UnsupportedFormat(path + ": format '" + format + "' not supported");
    }
    if (field != "real") {
        throw UnsupportedFormat(path + ": field '" + field + "' not supported (real only)");
    }
    if (symmetry != "general") {
        throw UnsupportedFormat(path + ": symmetry '" + symmetry + "' not supported");
    }
    return Header{format == "coordinate"};
}

inline void skip_comments(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') return;
    }
    line.clear();
}

}  // namespace detail

/// Reads a coordinate-format file into CSC. Indices are 1-based on disk and
/// 0-based in memory; duplicate entries are summed.
inline CscMatrix read_csc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    detail::Header h = detail::read_header(in, path);
    if (!h.coordinate) throw UnsupportedFormat(path + ": expected coordinate format");

    std::string line;
    detail::skip_comments(in, line);
    std::istringstream sz(line);
    index_t rows = 0, cols = 0, nnz = 0;
    sz >> rows >> cols >> nnz;
    if (rows <= 0 || cols <= 0 || nnz < 0) throw UnsupportedFormat(path + ": bad size line");

    std::vector<std::tuple<index_t, index_t, double>> trip;
    trip.reserve(static_cast<std::size_t>(nnz));
    for (index_t k = 0; k < nnz; ++k) {
        index_t i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) throw UnsupportedFormat(path + ": truncated entries");
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw UnsupportedFormat(path + ": entry index out of range");
        }
        trip.emplace_back(j - 1, i - 1, v);  // (col, row, value) for the sort below
    }
    std::sort(trip.begin(), trip.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });

    CscMatrix A(rows, cols);
    index_t prev_col = -1, prev_row = -1;
    for (const auto& [j, i, v] : trip) {
        if (j == prev_col && i == prev_row) {
            A.values.back() += v;  // duplicates sum
            continue;
        }
        A.row_indices.push_back(i);
        A.values.push_back(v);
        A.col_pointers[static_cast<std::size_t>(j) + 1] = static_cast<index_t>(A.values.size());
        prev_col = j;
        prev_row = i;
    }
    for (index_t c = 1; c <= cols; ++c) {
        auto& ptr = A.col_pointers[static_cast<std::size_t>(c)];
        ptr = std::max(ptr, A.col_pointers[static_cast<std::size_t>(c) - 1]);
    }
    A.validate();
    return A;
}

/// Reads an array-format file into a dense column-major matrix.
inline DenseMatrix read_dense(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    detail::Header h = detail::read_header(in, path);
    if (h.coordinate) throw UnsupportedFormat(path + ": expected array format");

    std::string line;
    detail::skip_comments(in, line);
    std::istringstream sz(line);
    index_t rows = 0, cols = 0;
    sz >> rows >> cols;
    if (rows <= 0 || cols <= 0) throw UnsupportedFormat(path + ": bad size line");

    DenseMatrix A(rows, cols);
    for (index_t j = 0; j < cols; ++j)
        for (index_t i = 0; i < rows; ++i)
            if (!(in >> A(i, j))) throw UnsupportedFormat(path + ": truncated entries");
    return A;
}

/// Sniffs the header and reads either format.
inline std::variant<DenseMatrix, CscMatrix> load_matrix(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw Error("cannot open " + path);
    detail::Header h = detail::read_header(probe, path);
    probe.close();
    if (h.coordinate) return read_csc(path);
    return read_dense(path);
}

inline void write_csc(const std::string& path, const CscMatrix& A) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows << " " << A.cols << " " << A.nnz() << "\n";
    out.precision(17);
    for (index_t j = 0; j < A.cols; ++j)
        for (index_t k = A.col_pointers[j]; k < A.col_pointers[j + 1]; ++k)
            out << (A.row_indices[static_cast<std::size_t>(k)] + 1) << " " << (j + 1) << " "
                << A.values[static_cast<std::size_t>(k)] << "\n";
}

inline void write_dense(const std::string& path, const DenseMatrix& A) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix array real general\n";
    out << A.rows() << " " << A.cols() << "\n";
    out.precision(17);
    for (index_t j = 0; j < A.cols(); ++j)
        for (index_t i = 0; i < A.rows(); ++i) out << A(i, j) << "\n";
}

inline void write_vector(const std::string& path, const Vector& v) {
    DenseMatrix col(static_cast<index_t>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) col(static_cast<index_t>(i), 0) = v[i];
    write_dense(path, col);
}

}  // namespace sketchlsq::mm
