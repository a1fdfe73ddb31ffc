#include "advstream/io.hpp"

#include <charconv>

namespace advstream {

std::string double_to_string(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_json_value(const nlohmann::json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_float()) return double_to_string(v.get<double>());
    return v.dump();
}

RecordWriter::RecordWriter(const std::string& path, RecordFormat format, std::vector<std::string> columns)
    : out_(path), format_(format), columns_(std::move(columns)) {
    if (!out_) throw ConfigError("cannot open output file: " + path);
    if (format_ == RecordFormat::Csv) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns_[i];
        }
        out_ << '\n';
    }
}

void RecordWriter::write(const nlohmann::json& record) {
    if (format_ == RecordFormat::Csv) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) out_ << ',';
            if (record.contains(columns_[i])) out_ << format_json_value(record[columns_[i]]);
        }
        out_ << '\n';
        return;
    }
    nlohmann::json line = nlohmann::json::object();
    for (const auto& c : columns_) {
        line[c] = record.contains(c) ? record[c] : nlohmann::json();
    }
    out_ << line.dump() << '\n';
}

void RecordWriter::close() { out_.close(); }

}  // namespace advstream
