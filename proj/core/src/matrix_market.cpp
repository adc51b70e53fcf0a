#include "dashsvd/matrix_market.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dashsvd/errors.hpp"

namespace dashsvd {

namespace {

static_assert(std::endian::native == std::endian::little,
              "cache serialization assumes a little-endian host");

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric, skew };

struct Header {
    bool coordinate = true;
    Field field = Field::real;
    Symmetry symmetry = Symmetry::general;
};

Header parse_header(const std::string& line) {
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError(1, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") throw UnsupportedFormat("unsupported object: " + object);
    Header h;
    const std::string fmt = lower(format);
    if (fmt == "coordinate")
        h.coordinate = true;
    else if (fmt == "array")
        h.coordinate = false;
    else
        throw UnsupportedFormat("unsupported format: " + format);
    const std::string fld = lower(field);
    if (fld == "real")
        h.field = Field::real;
    else if (fld == "integer")
        h.field = Field::integer;
    else if (fld == "pattern")
        h.field = Field::pattern;
    else
        throw UnsupportedFormat("unsupported field: " + field);
    const std::string sym = lower(symmetry);
    if (sym == "general")
        h.symmetry = Symmetry::general;
    else if (sym == "symmetric")
        h.symmetry = Symmetry::symmetric;
    else if (sym == "skew-symmetric")
        h.symmetry = Symmetry::skew;
    else
        throw UnsupportedFormat("unsupported symmetry: " + symmetry);
    return h;
}

// Advances to the next line that is neither blank nor a comment.
bool next_data_line(std::istream& in, std::string& line, std::int64_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '%') continue;
        return true;
    }
    return false;
}

struct Triplet {
    index_t r, c;
    double v;
};

SparseMatrix assemble(index_t rows, index_t cols, std::vector<Triplet>& trip) {
    std::sort(trip.begin(), trip.end(), [](const Triplet& a, const Triplet& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    SparseMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.offsets.assign(rows + 1, 0);
    std::size_t w = 0;
    for (std::size_t p = 0; p < trip.size();) {
        Triplet t = trip[p++];
        while (p < trip.size() && trip[p].r == t.r && trip[p].c == t.c) t.v += trip[p++].v;
        if (t.v == 0.0) continue;  // dropped: duplicates may cancel exactly
        trip[w++] = t;
    }
    trip.resize(w);
    for (const Triplet& t : trip) ++m.offsets[t.r + 1];
    for (index_t i = 0; i < rows; ++i) m.offsets[i + 1] += m.offsets[i];
    m.col_indices.reserve(w);
    m.values.reserve(w);
    for (const Triplet& t : trip) {
        m.col_indices.push_back(t.c);
        m.values.push_back(t.v);
    }
    return m;
}

}  // namespace

SparseMatrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    const Header h = parse_header(line);
    if (!h.coordinate)
        throw UnsupportedFormat("array format holds a dense matrix; use load_dense_array");

    std::int64_t lineno = 1;
    if (!next_data_line(in, line, lineno)) throw ParseError(lineno + 1, "missing size line");
    index_t rows, cols, nnz;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
            throw ParseError(lineno, "size line must be 'rows cols nnz'");
        std::string extra;
        if (ss >> extra) throw ParseError(lineno, "trailing token on size line");
    }

    std::vector<Triplet> trip;
    trip.reserve(h.symmetry == Symmetry::general ? nnz : 2 * nnz);
    for (index_t e = 0; e < nnz; ++e) {
        if (!next_data_line(in, line, lineno))
            throw ParseError(lineno + 1, "expected " + std::to_string(nnz) +
                                             " entries, file ended after " + std::to_string(e));
        std::istringstream ss(line);
        index_t i, j;
        if (!(ss >> i >> j)) throw ParseError(lineno, "entry must start with two indices");
        double v = 1.0;
        if (h.field != Field::pattern && !(ss >> v))
            throw ParseError(lineno, "entry is missing its value");
        std::string extra;
        if (ss >> extra) throw ParseError(lineno, "trailing token on entry line");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError(lineno, "index out of declared bounds");
        if (!std::isfinite(v)) throw ParseError(lineno, "non-finite value");
        --i, --j;
        if (h.symmetry == Symmetry::skew && i == j && v != 0.0)
            throw ParseError(lineno, "nonzero diagonal in skew-symmetric matrix");
        if (v != 0.0) trip.push_back({i, j, v});
        if (i != j) {
            if (h.symmetry == Symmetry::symmetric) trip.push_back({j, i, v});
            if (h.symmetry == Symmetry::skew && v != 0.0) trip.push_back({j, i, -v});
        }
    }
    return assemble(rows, cols, trip);
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot open " + path + " for writing");
    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(f, "%" PRId64 " %" PRId64 " %" PRId64 "\n", a.rows, a.cols, a.nnz());
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t p = a.offsets[i]; p < a.offsets[i + 1]; ++p)
            std::fprintf(f, "%" PRId64 " %" PRId64 " %.17g\n", i + 1, a.col_indices[p] + 1,
                         a.values[p]);
    if (std::fclose(f) != 0) throw Error("failed writing " + path);
}

DenseMatrix load_dense_array(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    const Header h = parse_header(line);
    if (h.coordinate) throw UnsupportedFormat("coordinate file; use load_matrix_market");
    if (h.field == Field::pattern) throw UnsupportedFormat("pattern array is not a matrix");

    std::int64_t lineno = 1;
    if (!next_data_line(in, line, lineno)) throw ParseError(lineno + 1, "missing size line");
    index_t rows, cols;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols) || rows < 0 || cols < 0)
            throw ParseError(lineno, "size line must be 'rows cols'");
    }
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(rows) * cols);
    while (static_cast<index_t>(entries.size()) < rows * cols) {
        if (!next_data_line(in, line, lineno))
            throw ParseError(lineno + 1, "file ended before all entries were read");
        std::istringstream ss(line);
        double v;
        while (ss >> v) entries.push_back(v);
        if (!ss.eof()) throw ParseError(lineno, "malformed value");
    }
    if (static_cast<index_t>(entries.size()) != rows * cols)
        throw ParseError(lineno, "more entries than rows*cols");
    try {
        return DenseMatrix::from_data(rows, cols, std::move(entries));
    } catch (const NumericalError&) {
        throw ParseError(lineno, "non-finite value in array");
    }
}

void write_dense_array(const std::string& path, const DenseMatrix& a) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot open " + path + " for writing");
    std::fprintf(f, "%%%%MatrixMarket matrix array real general\n");
    std::fprintf(f, "%" PRId64 " %" PRId64 "\n", a.rows(), a.cols());
    const double* d = a.data();
    for (index_t e = 0; e < a.size(); ++e) std::fprintf(f, "%.17g\n", d[e]);
    if (std::fclose(f) != 0) throw Error("failed writing " + path);
}

namespace {
constexpr char kCacheMagic[4] = {'D', 'S', 'H', '1'};

template <typename T>
void write_raw(std::ofstream& out, const T* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_raw(std::ifstream& in, T* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
    if (!in) throw UnsupportedFormat("truncated cache file");
}
}  // namespace

void save_cache(const std::string& path, const SparseMatrix& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(kCacheMagic, 4);
    const std::uint64_t dims[3] = {static_cast<std::uint64_t>(a.rows),
                                   static_cast<std::uint64_t>(a.cols),
                                   static_cast<std::uint64_t>(a.nnz())};
    write_raw(out, dims, 3);
    write_raw(out, a.offsets.data(), a.offsets.size());
    write_raw(out, a.col_indices.data(), a.col_indices.size());
    write_raw(out, a.values.data(), a.values.size());
    if (!out) throw Error("failed writing " + path);
}

SparseMatrix load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char magic[4];
    read_raw(in, magic, 4);
    if (std::memcmp(magic, kCacheMagic, 4) != 0)
        throw UnsupportedFormat("not a DSH1 cache file");
    std::uint64_t dims[3];
    read_raw(in, dims, 3);
    SparseMatrix a;
    a.rows = static_cast<index_t>(dims[0]);
    a.cols = static_cast<index_t>(dims[1]);
    a.offsets.resize(dims[0] + 1);
    a.col_indices.resize(dims[2]);
    a.values.resize(dims[2]);
    read_raw(in, a.offsets.data(), a.offsets.size());
    read_raw(in, a.col_indices.data(), a.col_indices.size());
    read_raw(in, a.values.data(), a.values.size());
    a.validate();
    return a;
}

}  // namespace dashsvd
