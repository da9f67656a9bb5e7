#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

// Locale-independent CSV emission: '.' decimal separator, '\n' newlines,
// shortest round-trip double formatting via std::to_chars.

namespace coexsim {

inline std::string fmt_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& columns) { write_strings(columns); }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ",";
            out_ << fmt_double(values[i]);
        }
        out_ << "\n";
    }

    void row_strings(const std::vector<std::string>& values) { write_strings(values); }

  private:
    void write_strings(const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ",";
            out_ << values[i];
        }
        out_ << "\n";
    }

    std::ostream& out_;
};

}  // namespace coexsim
