#include "qhl/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>

namespace qhl {

CheckRecord make_check(const std::string& operation, const std::string& parameters,
                       double residual, double tolerance) {
    CheckRecord c;
    c.operation = operation;
    c.parameters = parameters;
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = residual <= tolerance;
    return c;
}

bool SuiteReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path), columns_(columns.size()) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    for (size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("CsvWriter: column count mismatch in " + path_);
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

void CsvWriter::numeric_row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_double(v));
    row(s);
}

void write_summary(const std::string& path, const std::vector<SuiteReport>& suites,
                   const std::string& config_echo) {
    nlohmann::ordered_json j;
    j["config"] = config_echo;
    bool all = true;
    nlohmann::ordered_json suites_json = nlohmann::ordered_json::array();
    for (const auto& s : suites) {
        nlohmann::ordered_json sj;
        sj["suite"] = s.name;
        sj["pass"] = s.all_pass();
        all = all && s.all_pass();
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : s.checks) {
            nlohmann::ordered_json cj;
            cj["operation"] = c.operation;
            cj["parameters"] = c.parameters;
            cj["residual"] = format_double(c.residual);
            cj["tolerance"] = format_double(c.tolerance);
            cj["pass"] = c.pass;
            checks.push_back(cj);
        }
        sj["checks"] = checks;
        sj["artifacts"] = s.artifacts;
        suites_json.push_back(sj);
    }
    j["suites"] = suites_json;
    j["pass"] = all;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_summary: cannot open " + path);
    out << j.dump(2) << "\n";
}

} // namespace qhl
