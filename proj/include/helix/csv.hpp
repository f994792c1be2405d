// Deterministic CSV emission (RFC 4180 quoting, LF line ends).
//
// Floating-point fields use %.17g so every double round-trips exactly and
// repeated runs produce byte-identical files.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace helix {

std::string csv_num(double v);
std::string csv_num(long long v);
std::string csv_num(unsigned long long v);
inline std::string csv_num(int v) { return csv_num(static_cast<long long>(v)); }
inline std::string csv_num(uint64_t v) {
    return csv_num(static_cast<unsigned long long>(v));
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    // '#'-prefixed metadata line (not part of the tabular data).
    void comment(const std::string& text);

    // One record; fields containing comma, quote, CR, or LF are quoted and
    // embedded quotes doubled per RFC 4180.
    void row(const std::vector<std::string>& fields);

  private:
    std::ostream& out_;
};

}  // namespace helix
