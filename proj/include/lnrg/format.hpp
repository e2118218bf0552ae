#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lnrg
{

/// Shortest decimal text that parses back to exactly x.
std::string fmt_double(double x);

/// Strict full-string parse of a double; throws DomainError on junk.
double parse_double(std::string_view s);

std::vector<double> parse_double_list(std::string_view s, char sep = ',');

/// CSV table: a `# ...` config comment line, a header row, then data rows.
class CsvWriter
{
public:
    CsvWriter(std::ostream &out, const std::string &config_comment, std::vector<std::string> columns);

    void row(const std::vector<double> &values);
    /// Mixed row; cells already formatted.
    void row_text(const std::vector<std::string> &cells);

private:
    std::ostream &m_out;
    std::size_t m_columns;
};

} // namespace lnrg
