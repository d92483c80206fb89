#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/preprocess.hpp"

namespace treelike {

enum class FileFormat { csv, raw_f64 };

inline std::string_view to_string(FileFormat f) { return f == FileFormat::csv ? "csv" : "raw_f64"; }

inline FileFormat file_format_from_string(std::string_view s)
{
    if (s == "csv") return FileFormat::csv;
    if (s == "raw_f64") return FileFormat::raw_f64;
    throw ParseError("unknown format '" + std::string(s) + "' (expected csv or raw_f64)");
}

struct CsvOptions {
    bool header = false;
    bool id_column = false;    // first field is an identifier
    bool label_column = false; // next field (after the id, if any) is a class label
    bool pad = false;          // right-pad short rows instead of rejecting them
    double pad_value = 0.0;
};

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline bool parse_real(std::string_view field, double& out)
{
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end && !field.empty();
}

struct CsvLine {
    std::size_t number; // 1-based
    std::vector<std::string_view> fields;
};

inline std::vector<CsvLine> csv_lines(const std::string& text)
{
    std::vector<CsvLine> lines;
    std::size_t start = 0;
    std::size_t number = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        ++number;
        const std::string_view line = trim(std::string_view(text).substr(start, nl - start));
        if (!line.empty()) lines.push_back({number, split_fields(line)});
        start = nl + 1;
    }
    return lines;
}

[[noreturn]] inline void malformed(const std::string& path, std::size_t line, std::size_t column,
                                   std::string_view field, bool first_line)
{
    std::string msg = path + ": line " + std::to_string(line) + " column " + std::to_string(column) +
                      ": malformed number '" + std::string(field) + "'";
    if (first_line) msg += " (pass --header if the file has a header row)";
    throw ParseError(msg);
}

inline std::uint64_t swap_bytes(std::uint64_t v) noexcept
{
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xffu);
    return r;
}

inline std::uint64_t read_u64_le(const char* p)
{
    std::uint64_t v;
    std::memcpy(&v, p, sizeof v);
    if constexpr (std::endian::native == std::endian::big) v = swap_bytes(v);
    return v;
}

inline double read_f64_le(const char* p) { return std::bit_cast<double>(read_u64_le(p)); }

inline void append_u64_le(std::string& out, std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::big) v = swap_bytes(v);
    char buf[8];
    std::memcpy(buf, &v, sizeof buf);
    out.append(buf, sizeof buf);
}

/// 16-byte header (n, dim as little-endian u64) then n*dim little-endian doubles.
inline std::vector<double> read_raw_f64(const std::string& path, std::uint64_t& n, std::uint64_t& dim)
{
    const std::string bytes = read_file(path);
    if (bytes.size() < 16) throw ParseError(path + ": raw_f64 file shorter than its 16-byte header");
    n = read_u64_le(bytes.data());
    dim = read_u64_le(bytes.data() + 8);
    if (dim != 0 && n > (bytes.size() - 16) / 8 / dim + 1)
        throw ParseError(path + ": raw_f64 header counts exceed the payload");
    const std::uint64_t count = n * dim;
    if (bytes.size() != 16 + 8 * count)
        throw ParseError(path + ": raw_f64 payload is " + std::to_string(bytes.size() - 16) +
                         " bytes, header implies " + std::to_string(8 * count));
    std::vector<double> values(count);
    for (std::uint64_t i = 0; i < count; ++i) values[i] = read_f64_le(bytes.data() + 16 + 8 * i);
    return values;
}

inline void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw Error("failed writing '" + path + "'");
}

inline std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Reads one embedding per row. CSV rows may carry an id and/or label column
/// before the values; raw_f64 is the binary layout described in read_raw_f64.
inline EmbeddingSet load_embeddings(const std::string& path, FileFormat format,
                                    const CsvOptions& options = {})
{
    if (format == FileFormat::raw_f64) {
        std::uint64_t n = 0, dim = 0;
        std::vector<double> values = detail::read_raw_f64(path, n, dim);
        return EmbeddingSet(n, dim, std::move(values));
    }

    const std::string text = detail::read_file(path);
    auto lines = detail::csv_lines(text);
    if (options.header) {
        if (lines.empty()) throw ParseError(path + ": --header given but the file is empty");
        lines.erase(lines.begin());
    }
    if (lines.empty()) throw ParseError(path + ": no data rows");

    const std::size_t skip = (options.id_column ? 1 : 0) + (options.label_column ? 1 : 0);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> ids, labels;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const auto& line = lines[r];
        if (line.fields.size() <= skip)
            throw ParseError(path + ": line " + std::to_string(line.number) +
                             ": no numeric fields after the id/label columns");
        std::size_t f = 0;
        if (options.id_column) ids.emplace_back(line.fields[f++]);
        if (options.label_column) labels.emplace_back(line.fields[f++]);
        std::vector<double> row;
        row.reserve(line.fields.size() - skip);
        for (; f < line.fields.size(); ++f) {
            double v = 0.0;
            if (!detail::parse_real(line.fields[f], v))
                detail::malformed(path, line.number, f + 1, line.fields[f], r == 0 && !options.header);
            if (!std::isfinite(v))
                throw ValidationError(path + ": line " + std::to_string(line.number) +
                                      ": non-finite value in row " + std::to_string(r));
            row.push_back(v);
        }
        if (!options.pad && !rows.empty() && row.size() != rows.front().size())
            throw ParseError(path + ": line " + std::to_string(line.number) + " has " +
                             std::to_string(row.size()) + " values, expected " +
                             std::to_string(rows.front().size()) + " (pass --pad for ragged rows)");
        rows.push_back(std::move(row));
    }

    EmbeddingSet flat = pad_and_flatten(rows, options.pad_value);
    std::optional<std::vector<std::string>> id_opt, label_opt;
    if (options.id_column) id_opt = std::move(ids);
    if (options.label_column) label_opt = std::move(labels);
    return EmbeddingSet(flat.size(), flat.dim(), flat.values(), std::move(id_opt), std::move(label_opt));
}

struct LoadedMatrix {
    DistanceMatrix matrix;
    // Human-readable record of every coercion applied under `force`.
    std::vector<std::string> coercions;
};

/// Loads an external distance matrix (tag `external`) and validates it at 1e-9.
/// With `force`, asymmetry is resolved by (D + D^T)/2, the diagonal is zeroed
/// and negative entries are clamped to 0; each fix is recorded.
inline LoadedMatrix load_distance_matrix(const std::string& path, FileFormat format, bool force = false)
{
    std::size_t n = 0;
    std::vector<double> values;
    if (format == FileFormat::raw_f64) {
        std::uint64_t rows = 0, cols = 0;
        values = detail::read_raw_f64(path, rows, cols);
        if (rows != cols)
            throw ShapeError(path + ": distance matrix is " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", not square");
        n = rows;
    } else {
        const std::string text = detail::read_file(path);
        const auto lines = detail::csv_lines(text);
        n = lines.size();
        for (std::size_t r = 0; r < lines.size(); ++r) {
            const auto& line = lines[r];
            if (line.fields.size() != n)
                throw ShapeError(path + ": distance matrix is not square: line " +
                                 std::to_string(line.number) + " has " +
                                 std::to_string(line.fields.size()) + " entries, expected " +
                                 std::to_string(n));
            for (std::size_t f = 0; f < line.fields.size(); ++f) {
                double v = 0.0;
                if (!detail::parse_real(line.fields[f], v))
                    detail::malformed(path, line.number, f + 1, line.fields[f], false);
                values.push_back(v);
            }
        }
    }
    if (n == 0) throw ParseError(path + ": empty distance matrix");

    LoadedMatrix out{DistanceMatrix(n, values, MetricTag::external), {}};
    const auto violations = validate_distance_matrix(out.matrix, 1e-9);
    if (violations.empty()) return out;

    for (const auto& v : violations) {
        if (v.kind == ViolationKind::non_finite || !force)
            throw ValidationError(path + ": " + describe(v) +
                                  (violations.size() > 1
                                       ? " (+" + std::to_string(violations.size() - 1) + " more)"
                                       : std::string()));
    }

    std::size_t asym = 0, diag = 0, neg = 0;
    for (const auto& v : violations) {
        asym += v.kind == ViolationKind::asymmetry;
        diag += v.kind == ViolationKind::nonzero_diagonal;
        neg += v.kind == ViolationKind::negative;
    }
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = (values[i * n + j] + values[j * n + i]) / 2.0;
            if (s < 0.0) s = 0.0;
            values[i * n + j] = values[j * n + i] = s;
        }
    }
    if (asym) out.coercions.push_back("symmetrized (D+D^T)/2: " + std::to_string(asym) + " asymmetric pairs");
    if (diag) out.coercions.push_back("zeroed diagonal: " + std::to_string(diag) + " entries");
    if (neg) out.coercions.push_back("clamped negatives to 0: " + std::to_string(neg) + " entries");
    out.matrix = DistanceMatrix(n, std::move(values), MetricTag::external);
    return out;
}

inline void write_embeddings_csv(const EmbeddingSet& set, const std::string& path)
{
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto row = set.row(i);
        for (std::size_t d = 0; d < row.size(); ++d) {
            if (d) out += ',';
            out += detail::format_real(row[d]);
        }
        out += '\n';
    }
    detail::write_file(path, out);
}

inline void write_matrix_csv(const DistanceMatrix& m, const std::string& path)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out += ',';
            out += detail::format_real(m(i, j));
        }
        out += '\n';
    }
    detail::write_file(path, out);
}

inline void write_raw_f64(const std::string& path, std::uint64_t rows, std::uint64_t cols,
                          const std::vector<double>& values)
{
    std::string out;
    out.reserve(16 + 8 * values.size());
    detail::append_u64_le(out, rows);
    detail::append_u64_le(out, cols);
    for (double v : values) detail::append_u64_le(out, std::bit_cast<std::uint64_t>(v));
    detail::write_file(path, out);
}

} // namespace treelike
