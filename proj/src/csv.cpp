// CSV formatting helpers.

#include "helix/csv.hpp"

#include <cstdio>

namespace helix {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_num(long long v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%lld", v);
    return buf;
}

std::string csv_num(unsigned long long v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", v);
    return buf;
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        const std::string& f = fields[i];
        bool needs_quote = f.find_first_of(",\"\r\n") != std::string::npos;
        if (!needs_quote) {
            out_ << f;
            continue;
        }
        out_ << '"';
        for (char c : f) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    }
    out_ << '\n';
}

}  // namespace helix
