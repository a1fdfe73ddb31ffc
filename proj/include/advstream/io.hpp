#ifndef ADVSTREAM_IO_HPP
#define ADVSTREAM_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "advstream/core.hpp"

namespace advstream {

enum class RecordFormat { Csv, Jsonl };

/// Shortest round-trip decimal rendering, locale-free, so identical runs
/// emit identical bytes.
std::string double_to_string(double v);

/// Writes experiment records with a fixed column set, either as CSV with a
/// header row or as JSON lines. Values are taken from each record by key;
/// missing keys render empty (CSV) or null (JSONL).
class RecordWriter {
public:
    RecordWriter(const std::string& path, RecordFormat format, std::vector<std::string> columns);

    void write(const nlohmann::json& record);
    void close();

private:
    std::ofstream out_;
    RecordFormat format_;
    std::vector<std::string> columns_;
};

std::string format_json_value(const nlohmann::json& v);

}  // namespace advstream

#endif
