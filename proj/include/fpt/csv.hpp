#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace fpt {

/// Shortest 17-significant-digit decimal form; round-trips a double exactly.
std::string g17(double v);

/// Minimal CSV emitter.  Lines starting with '#' are comments; reproducibility
/// comparisons ignore them so the timestamp can live there.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

    bool good() const { return out_.good(); }

private:
    std::ofstream out_;
};

/// The payload of a CSV file: every line except '#' comments, joined by '\n'.
std::string csv_payload(const std::string& path);

}  // namespace fpt
