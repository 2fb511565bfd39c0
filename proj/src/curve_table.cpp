#include "v2vlos/curve_table.hpp"

#include "v2vlos/errors.hpp"
#include "v2vlos/probability.hpp"
#include "v2vlos/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace v2vlos {

std::vector<Point> CurveTable::series(std::string_view column) const
{
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end())
        throw ParseError("no column named '" + std::string(column) + "'");
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<Point> out;
    out.reserve(rows.size());
    for (const auto& row : rows)
        out.push_back({row[0], row[idx]});
    return out;
}

CurveTable sample_curves(const ScenarioModel& model, double d_lo, double d_hi, double step)
{
    if (!(d_lo > 0.0) || !(d_hi >= d_lo) || !(step > 0.0) || !std::isfinite(d_hi))
        throw DomainError("curve sampling needs 0 < d_lo <= d_hi and step > 0");

    CurveTable table;
    table.columns.emplace_back("d");
    for (LosState s : kAllStates)
        table.columns.push_back("P_" + std::string(to_string(s)));
    for (LosState a : kAllStates)
        for (LosState b : kAllStates)
            table.columns.push_back("T_" + std::string(to_string(a)) + "_" + std::string(to_string(b)));

    const auto n = static_cast<std::size_t>(std::floor((d_hi - d_lo) / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) {
        const double d = d_lo + static_cast<double>(k) * step;
        const auto p = state_probabilities(model, d);
        const auto t = transition_matrix(model, d);
        std::vector<double> row{d};
        row.insert(row.end(), p.p.begin(), p.p.end());
        for (const auto& r : t.m)
            row.insert(row.end(), r.begin(), r.end());
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_curve_table(const CurveTable& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

} // namespace

CurveTable parse_curve_table(std::string_view text)
{
    CurveTable table;
    bool have_header = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty() || line.front() == '#')
            continue;

        const auto fields = split_commas(line);
        if (!have_header) {
            if (fields.empty() || fields[0] != "d")
                throw ParseError("curve table header must start with 'd'", line_no);
            for (auto f : fields)
                table.columns.emplace_back(f);
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size())
            throw ParseError("expected " + std::to_string(table.columns.size()) + " fields", line_no);
        std::vector<double> row;
        for (auto f : fields) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw ParseError("not a number: '" + std::string(f) + "'", line_no);
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw ParseError("curve table has no header");
    return table;
}

} // namespace v2vlos
