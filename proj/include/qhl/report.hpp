#ifndef QHL_REPORT_HPP
#define QHL_REPORT_HPP

#include <fstream>
#include <string>
#include <vector>

namespace qhl {

/// One verified invariant: {operation, parameters, residual, tolerance, pass}.
struct CheckRecord {
    std::string operation;
    std::string parameters;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

CheckRecord make_check(const std::string& operation, const std::string& parameters,
                       double residual, double tolerance);

struct SuiteReport {
    std::string name;
    std::vector<CheckRecord> checks;
    std::vector<std::string> artifacts;

    bool all_pass() const;
    void add(const CheckRecord& c) { checks.push_back(c); }
};

/// %.17g: shortest exact round-trip for doubles, byte-stable between runs.
std::string format_double(double v);

/// CSV with a fixed header; numeric cells go through format_double.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& cells);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    size_t columns_ = 0;
};

/// summary.json with per-suite pass/fail and every check record.
void write_summary(const std::string& path, const std::vector<SuiteReport>& suites,
                   const std::string& config_echo);

} // namespace qhl

#endif
