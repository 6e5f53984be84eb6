#include "grouprand/record.hpp"

#include <stdexcept>

namespace grouprand {

namespace {

using nlohmann::ordered_json;

ordered_json entry_json(const Entry& e)
{
    return std::visit([](auto v) { return ordered_json(v); }, e);
}

Entry entry_from_json(const ordered_json& j)
{
    if (j.is_number_integer())
        return j.get<std::int64_t>();
    if (j.is_number_float())
        return j.get<double>();
    throw std::invalid_argument("record: matrix entries must be numbers");
}

ordered_json parse_json(std::string_view text)
{
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("record: ") + e.what());
    }
}

std::string csv_quote(std::string_view field)
{
    if (field.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    if (quoted)
        throw std::invalid_argument("csv: unterminated quote");
    return fields;
}

std::int64_t parse_int(const std::string& s)
{
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size())
        throw std::invalid_argument("csv: bad integer '" + s + "'");
    return v;
}

} // namespace

RecordFormat parse_record_format(std::string_view name)
{
    if (name == "jsonl")
        return RecordFormat::jsonl;
    if (name == "csv")
        return RecordFormat::csv;
    throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

std::string to_jsonl(const Record& r)
{
    ordered_json j;
    j["group"] = r.group;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.matrix) {
        ordered_json out = ordered_json::array();
        for (const auto& e : row)
            out.push_back(entry_json(e));
        rows.push_back(std::move(out));
    }
    j["matrix"] = std::move(rows);
    j["meta"] = r.meta;
    return j.dump();
}

Record record_from_jsonl(std::string_view line)
{
    const ordered_json j = parse_json(line);
    if (!j.is_object() || !j.contains("group") || !j.contains("matrix"))
        throw std::invalid_argument("record: expected an object with \"group\" and \"matrix\"");
    Record r;
    r.group = j.at("group").get<std::string>();
    for (const auto& row : j.at("matrix")) {
        if (!row.is_array())
            throw std::invalid_argument("record: matrix rows must be arrays");
        auto& out = r.matrix.emplace_back();
        for (const auto& e : row)
            out.push_back(entry_from_json(e));
    }
    if (j.contains("meta"))
        r.meta = j.at("meta");
    return r;
}

std::string record_csv_header() { return "group,rows,cols,entries,meta"; }

std::string to_csv(const Record& r)
{
    const std::size_t rows = r.matrix.size();
    const std::size_t cols = rows ? r.matrix.front().size() : 0;
    std::string entries;
    for (const auto& row : r.matrix) {
        if (row.size() != cols)
            throw std::invalid_argument("record: ragged matrix");
        for (const auto& e : row) {
            if (!entries.empty())
                entries += ';';
            entries += entry_json(e).dump();
        }
    }
    return csv_quote(r.group) + ',' + std::to_string(rows) + ',' + std::to_string(cols) + ',' + entries + ',' +
           csv_quote(r.meta.dump());
}

Record record_from_csv(std::string_view line)
{
    const auto fields = csv_split(line);
    if (fields.size() != 5)
        throw std::invalid_argument("csv: expected 5 fields");
    Record r;
    r.group = fields[0];
    const auto rows = parse_int(fields[1]);
    const auto cols = parse_int(fields[2]);
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("csv: negative shape");
    std::vector<Entry> flat;
    std::string_view rest = fields[3];
    while (!rest.empty()) {
        const auto cut = rest.find(';');
        flat.push_back(entry_from_json(parse_json(rest.substr(0, cut))));
        rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 1);
    }
    if (flat.size() != static_cast<std::size_t>(rows * cols))
        throw std::invalid_argument("csv: entry count does not match shape");
    for (std::int64_t i = 0; i < rows; ++i)
        r.matrix.emplace_back(flat.begin() + i * cols, flat.begin() + (i + 1) * cols);
    r.meta = parse_json(fields[4]);
    return r;
}

std::string serialize(const Record& r, RecordFormat format)
{
    return format == RecordFormat::jsonl ? to_jsonl(r) : to_csv(r);
}

Record parse_record(std::string_view line, RecordFormat format)
{
    return format == RecordFormat::jsonl ? record_from_jsonl(line) : record_from_csv(line);
}

std::string to_jsonl(const ordered_json& row) { return row.dump(); }

std::string csv_header(const ordered_json& row)
{
    std::string out;
    for (const auto& [key, value] : row.items()) {
        if (!out.empty())
            out += ',';
        out += csv_quote(key);
    }
    return out;
}

std::string to_csv(const ordered_json& row)
{
    std::string out;
    bool first = true;
    for (const auto& [key, value] : row.items()) {
        if (!first)
            out += ',';
        first = false;
        if (value.is_structured())
            throw std::invalid_argument("csv: values must be scalars");
        out += csv_quote(value.is_string() ? value.get<std::string>() : value.dump());
    }
    return out;
}

ordered_json row_from_csv(std::string_view header, std::string_view line)
{
    const auto keys = csv_split(header);
    const auto values = csv_split(line);
    if (keys.size() != values.size())
        throw std::invalid_argument("csv: header and row lengths differ");
    ordered_json row = ordered_json::object();
    for (std::size_t k = 0; k < keys.size(); ++k) {
        // numbers and literals keep their JSON type; anything else is a string
        ordered_json value = ordered_json::parse(values[k], nullptr, false);
        if (value.is_discarded() || value.is_structured() || value.is_string())
            value = values[k];
        row[keys[k]] = std::move(value);
    }
    return row;
}

ordered_json to_row(const SampleReport& report)
{
    ordered_json row;
    row["group_id"] = report.group_id;
    row["support_size"] = report.support_size;
    row["draws"] = report.draws;
    row["chi_square"] = report.chi_square;
    row["dof"] = report.dof;
    row["p_value"] = report.p_value;
    row["tv_estimate"] = report.tv_estimate;
    return row;
}

SampleReport report_from_row(const ordered_json& row)
{
    SampleReport r;
    r.group_id = row.at("group_id").get<std::string>();
    r.support_size = row.at("support_size").get<std::uint64_t>();
    r.draws = row.at("draws").get<std::uint64_t>();
    r.chi_square = row.at("chi_square").get<double>();
    r.dof = row.at("dof").get<std::uint64_t>();
    r.p_value = row.at("p_value").get<double>();
    r.tv_estimate = row.at("tv_estimate").get<double>();
    return r;
}

} // namespace grouprand
