#include "v2vlos/trace_io.hpp"

#include "v2vlos/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

namespace v2vlos {

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        throw Error("cannot format number");
    return std::string(buf, end);
}

namespace {

enum class Layout { Distance, Labeled, MultiLink };

struct Row {
    std::size_t line = 0;
    std::string link;
    double t = 0.0;
    double d = 0.0;
    LosState state = LosState::LOS;
};

struct ParsedFile {
    Layout layout = Layout::Distance;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::vector<Row> rows;
};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            return out;
        start = comma + 1;
    }
}

double parse_number(std::string_view field, std::size_t line, const char* what)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw ParseError(std::string("invalid ") + what + " '" + std::string(field) + "'", line);
    return v;
}

void read_comment(std::string_view comment, ParsedFile& out, std::size_t line)
{
    comment = trim(comment);
    if (comment.rfind("scenario=", 0) == 0) {
        out.scenario = std::string(comment.substr(9));
    } else if (comment.rfind("seed=", 0) == 0) {
        std::uint64_t seed = 0;
        const std::string_view v = comment.substr(5);
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
        if (ec != std::errc() || ptr != v.data() + v.size())
            throw ParseError("invalid seed comment", line);
        out.seed = seed;
    }
}

ParsedFile parse(std::string_view text)
{
    ParsedFile out;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            read_comment(line.substr(1), out, line_no);
            continue;
        }

        const auto fields = split(line);
        if (!have_header) {
            std::vector<std::string> names(fields.begin(), fields.end());
            if (names == std::vector<std::string>{"t", "d"})
                out.layout = Layout::Distance;
            else if (names == std::vector<std::string>{"t", "d", "state"})
                out.layout = Layout::Labeled;
            else if (names == std::vector<std::string>{"link", "t", "d", "state"})
                out.layout = Layout::MultiLink;
            else
                throw ParseError("expected header 't,d', 't,d,state' or 'link,t,d,state'", line_no);
            have_header = true;
            continue;
        }

        const std::size_t expected = out.layout == Layout::Distance ? 2 : out.layout == Layout::Labeled ? 3 : 4;
        if (fields.size() != expected)
            throw ParseError("expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()),
                             line_no);

        Row row;
        row.line = line_no;
        std::size_t f = 0;
        if (out.layout == Layout::MultiLink) {
            if (fields[0].empty())
                throw ParseError("empty link id", line_no);
            row.link = std::string(fields[f++]);
        }
        row.t = parse_number(fields[f++], line_no, "time");
        row.d = parse_number(fields[f++], line_no, "distance");
        if (out.layout != Layout::Distance) {
            auto st = parse_state(fields[f]);
            if (!st)
                throw ParseError("unknown state '" + std::string(fields[f]) + "'", line_no);
            row.state = *st;
        }
        if (!std::isfinite(row.t) || !std::isfinite(row.d))
            throw ParseError("non-finite value", line_no);
        if (row.d < 0.0)
            throw RangeError("line " + std::to_string(line_no) + ": negative distance");
        out.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw ParseError("missing header row");
    return out;
}

void check_spacing(const std::vector<const Row*>& rows)
{
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i]->t - rows[i - 1]->t - kTimeStep) > 1e-9)
            throw ParseError("time must advance by exactly 1 s", rows[i]->line);
}

StateTrace to_state_trace(const std::vector<const Row*>& rows, const ParsedFile& file)
{
    check_spacing(rows);
    StateTrace trace;
    trace.scenario = file.scenario;
    trace.seed = RngSeed{file.seed.value_or(0)};
    trace.steps.reserve(rows.size());
    for (const Row* r : rows)
        trace.steps.push_back({r->t, r->d, r->state});
    return trace;
}

void append_provenance(std::string& out, const StateTrace& trace)
{
    if (!trace.scenario.empty())
        out += "# scenario=" + trace.scenario + "\n";
    out += "# seed=" + std::to_string(trace.seed.value) + "\n";
}

} // namespace

DistanceTrace parse_distance_trace(std::string_view text)
{
    const ParsedFile file = parse(text);
    if (file.layout == Layout::MultiLink)
        throw ParseError("a distance trace cannot hold several links; expected header 't,d' or 't,d,state'");
    std::vector<const Row*> rows;
    for (const auto& r : file.rows)
        rows.push_back(&r);
    check_spacing(rows);
    std::vector<DistanceStep> steps;
    steps.reserve(rows.size());
    for (const Row* r : rows)
        steps.push_back({r->t, r->d});
    return DistanceTrace(std::move(steps));
}

std::vector<StateTrace> parse_labeled_traces(std::string_view text)
{
    const ParsedFile file = parse(text);
    if (file.layout == Layout::Distance)
        throw ParseError("labeled traces need a state column");

    if (file.layout == Layout::Labeled) {
        std::vector<const Row*> rows;
        for (const auto& r : file.rows)
            rows.push_back(&r);
        return {to_state_trace(rows, file)};
    }

    std::vector<std::string> order;
    std::map<std::string, std::vector<const Row*>> groups;
    for (const auto& r : file.rows) {
        auto [it, inserted] = groups.try_emplace(r.link);
        if (inserted)
            order.push_back(r.link);
        it->second.push_back(&r);
    }
    std::vector<StateTrace> out;
    out.reserve(order.size());
    for (const auto& link : order)
        out.push_back(to_state_trace(groups.at(link), file));
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DistanceTrace read_distance_trace(const std::filesystem::path& path)
{
    return parse_distance_trace(read_file(path));
}

std::vector<StateTrace> read_labeled_traces(const std::filesystem::path& path)
{
    return parse_labeled_traces(read_file(path));
}

std::string format_distance_trace(const DistanceTrace& trace)
{
    std::string out = "t,d\n";
    for (const auto& s : trace.steps())
        out += format_double(s.t) + "," + format_double(s.d) + "\n";
    return out;
}

std::string format_state_trace(const StateTrace& trace)
{
    std::string out;
    append_provenance(out, trace);
    out += "t,d,state\n";
    for (const auto& s : trace.steps)
        out += format_double(s.t) + "," + format_double(s.d) + "," + std::string(to_string(s.state)) + "\n";
    return out;
}

std::string format_labeled_traces(std::span<const StateTrace> traces)
{
    std::string out;
    if (!traces.empty())
        append_provenance(out, traces.front());
    out += "link,t,d,state\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const std::string link = std::to_string(i);
        for (const auto& s : traces[i].steps)
            out += link + "," + format_double(s.t) + "," + format_double(s.d) + "," +
                   std::string(to_string(s.state)) + "\n";
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename into " + path.string() + ": " + ec.message());
    }
}

void write_state_trace(const StateTrace& trace, const std::filesystem::path& path)
{
    write_file_atomic(path, format_state_trace(trace));
}

void write_labeled_traces(std::span<const StateTrace> traces, const std::filesystem::path& path)
{
    write_file_atomic(path, format_labeled_traces(traces));
}

void write_distance_trace(const DistanceTrace& trace, const std::filesystem::path& path)
{
    write_file_atomic(path, format_distance_trace(trace));
}

} // namespace v2vlos
