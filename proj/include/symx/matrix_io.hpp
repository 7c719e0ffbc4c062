#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symx/matrix.hpp"

namespace symx {

enum class MatrixFormat { MatrixMarket, Csv };

using MatrixVariant = std::variant<RationalMatrix, RealMatrix>;

namespace io_detail {

struct Token {
    std::string text;
    int line;
    int column;
};

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Whitespace-separated tokens over all lines, skipping '%' comment lines.
inline std::vector<Token> whitespace_tokens(const std::vector<std::string_view>& lines, int first_line) {
    std::vector<Token> out;
    for (std::size_t li = first_line; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (!strip(line).empty() && strip(line)[0] == '%') continue;
        std::size_t p = 0;
        while (p < line.size()) {
            while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
            if (p >= line.size()) break;
            std::size_t start = p;
            while (p < line.size() && !std::isspace(static_cast<unsigned char>(line[p]))) ++p;
            out.push_back({std::string(line.substr(start, p - start)), int(li) + 1, int(start) + 1});
        }
    }
    return out;
}

inline long parse_index_token(const Token& t, const char* what) {
    try {
        std::size_t used = 0;
        long v = std::stol(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + t.text + "'", t.line, t.column);
    }
}

} // namespace io_detail

/// Matrix Market: array/coordinate, field "real", symmetry general or
/// symmetric (symmetric input is expanded to full storage on read).
template <class T>
Matrix<T> parse_matrix_market(std::string_view text) {
    using namespace io_detail;
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty Matrix Market input", 1, 1);

    std::string header(strip(lines[0]));
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", 1, 1);
    if (object != "matrix") throw ParseError("unsupported object '" + object + "'", 1, 1);
    if (format != "array" && format != "coordinate")
        throw ParseError("unsupported format '" + format + "'", 1, 1);
    if (field != "real") throw ParseError("unsupported field '" + field + "'", 1, 1);
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError("unsupported symmetry '" + symmetry + "'", 1, 1);
    const bool coordinate = format == "coordinate";
    const bool symmetric = symmetry == "symmetric";

    auto tokens = whitespace_tokens(lines, 1);
    std::size_t pos = 0;
    auto next = [&](const char* what) -> const Token& {
        if (pos >= tokens.size()) throw ParseError(std::string("unexpected end of input, wanted ") + what,
                                                   int(lines.size()), 1);
        return tokens[pos++];
    };

    const long ml = parse_index_token(next("row count"), "row count");
    const long nl = parse_index_token(next("column count"), "column count");
    if (ml < 1 || nl < 1) throw ParseError("matrix dimensions must be positive");
    if (ml != nl) throw NonSquareError("matrix is " + std::to_string(ml) + "x" + std::to_string(nl));
    const int m = int(ml), n = int(nl);

    Matrix<T> a(m, n);

    if (coordinate) {
        const long nnz = parse_index_token(next("entry count"), "entry count");
        for (long e = 0; e < nnz; ++e) {
            const Token& ti = next("row index");
            const Token& tj = next("column index");
            const Token& tv = next("value");
            const long i = parse_index_token(ti, "row index");
            const long j = parse_index_token(tj, "column index");
            if (i < 1 || i > m) throw ParseError("row index out of range", ti.line, ti.column);
            if (j < 1 || j > n) throw ParseError("column index out of range", tj.line, tj.column);
            if (symmetric && j > i)
                throw ParseError("upper-triangle entry in symmetric file", ti.line, ti.column);
            const T v = parse_scalar_token<T>(tv.text, tv.line, tv.column);
            a(int(i) - 1, int(j) - 1) = v;
            if (symmetric) a(int(j) - 1, int(i) - 1) = v;
        }
    } else if (!symmetric) {
        // Array values run down columns.
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < m; ++i) {
                const Token& tv = next("value");
                a(int(i), int(j)) = parse_scalar_token<T>(tv.text, tv.line, tv.column);
            }
    } else {
        // Symmetric array stores the lower triangle, column by column.
        for (long j = 0; j < n; ++j)
            for (long i = j; i < m; ++i) {
                const Token& tv = next("value");
                const T v = parse_scalar_token<T>(tv.text, tv.line, tv.column);
                a(int(i), int(j)) = v;
                a(int(j), int(i)) = v;
            }
    }
    if (pos != tokens.size())
        throw ParseError("trailing data '" + tokens[pos].text + "'", tokens[pos].line, tokens[pos].column);
    return a;
}

/// CSV: one row per line, comma-separated scalar literals.
template <class T>
Matrix<T> parse_csv(std::string_view text) {
    using namespace io_detail;
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty CSV input", 1, 1);

    std::vector<std::vector<T>> rows;
    std::size_t width = 0;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::vector<T> row;
        std::size_t p = 0;
        while (true) {
            std::size_t comma = line.find(',', p);
            std::string_view field = line.substr(p, comma == std::string_view::npos ? comma : comma - p);
            const int col = int(p) + 1;
            row.push_back(parse_scalar_token<T>(strip(field), int(li) + 1, col));
            if (comma == std::string_view::npos) break;
            p = comma + 1;
        }
        if (li == 0) width = row.size();
        else if (row.size() != width)
            throw ParseError("row has " + std::to_string(row.size()) + " fields, expected " +
                             std::to_string(width), int(li) + 1, 1);
        rows.push_back(std::move(row));
    }
    if (rows.size() != width)
        throw NonSquareError("matrix is " + std::to_string(rows.size()) + "x" + std::to_string(width));
    Matrix<T> a(int(rows.size()), int(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) a(int(i), int(j)) = rows[i][j];
    return a;
}

template <class T>
Matrix<T> parse_matrix(std::string_view text, MatrixFormat format) {
    Matrix<T> a = format == MatrixFormat::MatrixMarket ? parse_matrix_market<T>(text)
                                                       : parse_csv<T>(text);
    require_finite(a);
    return a;
}

inline MatrixVariant parse_matrix(std::string_view text, MatrixFormat format, ScalarRegime regime) {
    if (regime == ScalarRegime::ExactRational) return parse_matrix<Rational>(text, format);
    return parse_matrix<double>(text, format);
}

template <class T>
std::string serialize_csv(const Matrix<T>& a) {
    std::string out;
    for (int i = 0; i < a.rows(); ++i) {
        if (i > 0) out += '\n';
        for (int j = 0; j < a.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_scalar(a(i, j));
        }
    }
    return out;
}

template <class T>
std::string serialize_matrix_market(const Matrix<T>& a) {
    std::string out = "%%MatrixMarket matrix array real general\n";
    out += std::to_string(a.rows()) + " " + std::to_string(a.cols()) + "\n";
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) out += format_scalar(a(i, j)) + "\n";
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

template <class T>
std::string serialize_matrix(const Matrix<T>& a, MatrixFormat format) {
    return format == MatrixFormat::MatrixMarket ? serialize_matrix_market(a) : serialize_csv(a);
}

inline std::string serialize_matrix(const MatrixVariant& a, MatrixFormat format) {
    return std::visit([&](const auto& m) { return serialize_matrix(m, format); }, a);
}

/// Banner sniff first, then filename extension; comma-bearing text is CSV.
inline MatrixFormat detect_format(std::string_view filename, std::string_view content) {
    if (content.substr(0, 15) == "%%MatrixMarket ") return MatrixFormat::MatrixMarket;
    auto ends_with = [&](std::string_view suf) {
        return filename.size() >= suf.size() &&
               filename.substr(filename.size() - suf.size()) == suf;
    };
    if (ends_with(".mtx") || ends_with(".mm")) return MatrixFormat::MatrixMarket;
    if (ends_with(".csv")) return MatrixFormat::Csv;
    if (content.find(',') != std::string_view::npos) return MatrixFormat::Csv;
    return MatrixFormat::MatrixMarket;
}

} // namespace symx
