#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppmchart::detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Shortest representation that parses back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Fixed-point with trailing zeros stripped; locale independent.
inline std::string format_fixed(double v, int precision = 3) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    std::string s(buf, ptr);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

struct CsvField {
    std::string text;
    bool quoted = false;
};

struct CsvRecord {
    std::size_t line = 0;
    std::vector<CsvField> fields;
};

struct CsvError : std::runtime_error {
    CsvError(std::size_t l, const std::string& what) : std::runtime_error(what), line(l) {}
    std::size_t line;
};

/// RFC 4180 reader: quoted fields with "" escapes, LF or CRLF line ends.
/// Blank lines are skipped. Records remember their starting line.
inline std::vector<CsvRecord> parse_csv(std::string_view in) {
    std::vector<CsvRecord> records;
    std::size_t line = 1;
    std::size_t i = 0;
    if (in.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

    while (i < in.size()) {
        if (in[i] == '\n' || (in[i] == '\r' && i + 1 < in.size() && in[i + 1] == '\n')) {
            i += in[i] == '\r' ? 2 : 1;
            ++line;
            continue;
        }
        CsvRecord rec;
        rec.line = line;
        while (true) {
            CsvField field;
            if (i < in.size() && in[i] == '"') {
                field.quoted = true;
                ++i;
                while (true) {
                    if (i >= in.size()) throw CsvError(rec.line, "unterminated quoted field");
                    if (in[i] == '"') {
                        if (i + 1 < in.size() && in[i + 1] == '"') {
                            field.text += '"';
                            i += 2;
                            continue;
                        }
                        ++i;
                        break;
                    }
                    if (in[i] == '\n') ++line;
                    field.text += in[i++];
                }
                if (i < in.size() && in[i] != ',' && in[i] != '\n' && in[i] != '\r')
                    throw CsvError(line, "unexpected character after closing quote");
            } else {
                while (i < in.size() && in[i] != ',' && in[i] != '\n' && in[i] != '\r') field.text += in[i++];
            }
            rec.fields.push_back(std::move(field));
            if (i < in.size() && in[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        if (i < in.size() && in[i] == '\r') ++i;
        if (i < in.size() && in[i] == '\n') ++i;
        ++line;
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::string csv_field(std::string_view s) {
    const bool needs_quotes = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                              (!s.empty() && (s.front() == ' ' || s.back() == ' '));
    if (!needs_quotes) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace ppmchart::detail
