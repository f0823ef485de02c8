#include "textcomp/csv.hpp"

#include <charconv>
#include <cstdio>

namespace textcomp {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    i++;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string format_double_exact(double value) {
    // try increasing precision until the text parses back bit-identically
    for (int digits = 15; digits <= 17; ++digits) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
        double parsed = 0.0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), parsed);
        if (parsed == value) return buf;
    }
    return {};  // unreachable: 17 digits always round-trips
}

std::string format_double(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

}  // namespace textcomp
