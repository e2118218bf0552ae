#include "lnrg/format.hpp"

#include "lnrg/error.hpp"

#include <charconv>
#include <cmath>

namespace lnrg
{

std::string fmt_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<double> parse_double_list(std::string_view s, char sep)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto next = s.find(sep, pos);
        if (next == std::string_view::npos)
            next = s.size();
        out.push_back(parse_double(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

CsvWriter::CsvWriter(std::ostream &out, const std::string &config_comment, std::vector<std::string> columns)
    : m_out(out), m_columns(columns.size())
{
    m_out << "# " << config_comment << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        m_out << (i ? "," : "") << columns[i];
    m_out << '\n';
}

void CsvWriter::row(const std::vector<double> &values)
{
    if (values.size() != m_columns)
        throw Error("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        m_out << (i ? "," : "") << fmt_double(values[i]);
    m_out << '\n';
}

void CsvWriter::row_text(const std::vector<std::string> &cells)
{
    if (cells.size() != m_columns)
        throw Error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        m_out << (i ? "," : "") << cells[i];
    m_out << '\n';
}

} // namespace lnrg
