#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "grouprand/stats.hpp"

namespace grouprand {

enum class RecordFormat { jsonl, csv };

RecordFormat parse_record_format(std::string_view name);

using Entry = std::variant<std::int64_t, double>;

/// One sampled group element: {"group": ..., "matrix": [[...]], "meta": {...}}.
struct Record {
    std::string group;
    std::vector<std::vector<Entry>> matrix;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();

    friend bool operator==(const Record&, const Record&) = default;
};

std::string to_jsonl(const Record& r);
Record record_from_jsonl(std::string_view line);

/// CSV layout: group,rows,cols,entries,meta. Entries are row-major and
/// separated by ';', meta is a quoted JSON object.
std::string record_csv_header();
std::string to_csv(const Record& r);
Record record_from_csv(std::string_view line);

std::string serialize(const Record& r, RecordFormat format);
Record parse_record(std::string_view line, RecordFormat format);

/// Flat key/value rows (counts tables, reports). Values must be scalars.
std::string to_jsonl(const nlohmann::ordered_json& row);
std::string csv_header(const nlohmann::ordered_json& row);
std::string to_csv(const nlohmann::ordered_json& row);
nlohmann::ordered_json row_from_csv(std::string_view header, std::string_view line);

nlohmann::ordered_json to_row(const SampleReport& report);
SampleReport report_from_row(const nlohmann::ordered_json& row);

} // namespace grouprand
