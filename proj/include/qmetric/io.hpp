#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qmetric/error.hpp"
#include "qmetric/matrix.hpp"
#include "qmetric/scalar.hpp"

namespace qmetric {

// a parsed comma-separated matrix; the whole file is exact when every token
// is an integer or a ratio p/q, and float as soon as one decimal appears
struct parsed_matrix {
    bool float_mode = false;
    std::vector<std::vector<rational>> exact;     // filled when !float_mode
    std::vector<std::vector<double>> floating;    // filled when float_mode
    int rows() const {
        return static_cast<int>(float_mode ? floating.size() : exact.size());
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

enum class token_kind { integer, ratio, decimal };

// integer: [sign] digits; ratio: [sign] digits / digits; decimal: whatever
// else from_chars fully consumes to a finite double
inline token_kind classify_token(std::string_view tok, int row, int col) {
    std::string_view body = tok;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
    if (all_digits(body)) return token_kind::integer;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        if (all_digits(body.substr(0, slash)) && all_digits(body.substr(slash + 1)))
            return token_kind::ratio;
    }
    double v = 0.0;
    const char* first = body.data();
    const char* last = body.data() + body.size();
    auto r = std::from_chars(first, last, v);
    if (r.ec == std::errc() && r.ptr == last && std::isfinite(v)) return token_kind::decimal;
    throw error(errc::parse_error, "bad value '" + std::string(tok) + "' at row " + std::to_string(row) +
                                       ", column " + std::to_string(col));
}

inline rational token_to_rational(std::string_view tok, int row, int col) {
    bool neg = false;
    std::string_view body = tok;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    bigint num, den = 1;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        num = bigint(std::string(body.substr(0, slash)));
        den = bigint(std::string(body.substr(slash + 1)));
        if (den == 0)
            throw error(errc::parse_error, "zero denominator at row " + std::to_string(row) + ", column " +
                                               std::to_string(col));
    } else {
        num = bigint(std::string(body));
    }
    rational q(num, den);
    return neg ? -q : q;
}

inline double token_to_double(std::string_view tok, token_kind kind, int row, int col) {
    if (kind != token_kind::decimal) return to_double(token_to_rational(tok, row, col));
    std::string_view body = tok;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double v = 0.0;
    std::from_chars(body.data(), body.data() + body.size(), v);
    return v;
}

} // namespace detail

inline parsed_matrix parse_matrix_text(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = detail::trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            row.emplace_back(detail::trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw error(errc::parse_error, "no matrix rows found");

    parsed_matrix out;
    std::vector<std::vector<detail::token_kind>> kinds(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        kinds[i].reserve(rows[i].size());
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            const auto k = detail::classify_token(rows[i][j], static_cast<int>(i), static_cast<int>(j));
            kinds[i].push_back(k);
            if (k == detail::token_kind::decimal) out.float_mode = true;
        }
    }
    if (out.float_mode) {
        out.floating.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                out.floating[i].push_back(
                    detail::token_to_double(rows[i][j], kinds[i][j], static_cast<int>(i), static_cast<int>(j)));
    } else {
        out.exact.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                out.exact[i].push_back(detail::token_to_rational(rows[i][j], static_cast<int>(i), static_cast<int>(j)));
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io_error, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw error(errc::io_error, "read failed on '" + path + "'");
    return std::move(buf).str();
}

inline parsed_matrix read_matrix_file(const std::string& path) { return parse_matrix_text(read_file(path)); }

// write-then-rename, so a crash can leave a stray temp file but never a
// half-written target
inline void atomic_write_file(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw error(errc::io_error, "cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw error(errc::io_error, "write failed on '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw error(errc::io_error, "cannot move '" + tmp + "' into place");
}

template <class S>
std::string format_matrix(const square_matrix<S>& m) {
    std::string out;
    for (int i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.size(); ++j) {
            if (j > 0) out += ',';
            out += to_string(m(i, j));
        }
        out += '\n';
    }
    return out;
}

template <class S>
void write_matrix_file(const std::string& path, const square_matrix<S>& m) {
    atomic_write_file(path, format_matrix(m));
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest_hex(std::string_view bytes) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return s;
}

} // namespace qmetric
