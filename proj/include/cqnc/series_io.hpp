#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cqnc/config.hpp"
#include "cqnc/error.hpp"
#include "cqnc/sweep.hpp"

namespace cqnc {

struct IoError : Error {
    using Error::Error;
};

namespace detail {

inline std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_csv_number(std::string_view s, std::size_t line) {
    double v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw IoError("csv line " + std::to_string(line) + ": cannot parse '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

/// CSV: header `<axis label>,<channel>...`, one row per grid point, %.17g
/// numbers. Metadata is not carried.
inline std::string to_csv(const SpectrumSeries& s) {
    std::string out = s.axis_label;
    for (const auto& [name, _] : s.channels) out += "," + name;
    out += '\n';
    for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
        out += detail::format_g17(s.axis_values[i]);
        for (const auto& [_, v] : s.channels) out += "," + detail::format_g17(v.at(i));
        out += '\n';
    }
    return out;
}

inline SpectrumSeries from_csv(std::string_view text) {
    SpectrumSeries s;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos) throw IoError("csv line " + std::to_string(line_no) + ": missing newline");
        const std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl + 1);
        const auto cells = detail::split_commas(line);
        if (header) {
            s.axis_label = std::string(cells[0]);
            for (std::size_t i = 1; i < cells.size(); ++i) s.channels.emplace_back(std::string(cells[i]), std::vector<double>{});
            header = false;
            continue;
        }
        if (cells.size() != s.channels.size() + 1)
            throw IoError("csv line " + std::to_string(line_no) + ": expected " +
                          std::to_string(s.channels.size() + 1) + " columns");
        s.axis_values.push_back(detail::parse_csv_number(cells[0], line_no));
        for (std::size_t i = 0; i < s.channels.size(); ++i)
            s.channels[i].second.push_back(detail::parse_csv_number(cells[i + 1], line_no));
    }
    if (header) throw IoError("csv: empty document");
    return s;
}

/// JSON: {"axis": {"label", "values"}, "channels": {...}, "metadata": {...}}.
/// Non-finite values are written as null.
inline nlohmann::ordered_json to_json(const SpectrumSeries& s) {
    nlohmann::ordered_json j;
    j["axis"] = {{"label", s.axis_label}, {"values", s.axis_values}};
    j["channels"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : s.channels) {
        auto arr = nlohmann::ordered_json::array();
        for (double x : v) arr.push_back(std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json());
        j["channels"][name] = std::move(arr);
    }
    j["metadata"] = s.metadata;
    return j;
}

inline std::string to_json_text(const SpectrumSeries& s) { return to_json(s).dump(2) + "\n"; }

inline SpectrumSeries from_json(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("json: ") + e.what());
    }
    auto number = [](const nlohmann::ordered_json& x) {
        return x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>();
    };
    try {
        SpectrumSeries s;
        s.axis_label = j.at("axis").at("label").get<std::string>();
        for (const auto& x : j.at("axis").at("values")) s.axis_values.push_back(number(x));
        for (const auto& [name, arr] : j.at("channels").items()) {
            std::vector<double> v;
            for (const auto& x : arr) v.push_back(number(x));
            if (v.size() != s.axis_values.size()) throw IoError("json: channel '" + name + "' length mismatch");
            s.channels.emplace_back(name, std::move(v));
        }
        if (j.contains("metadata")) s.metadata = j.at("metadata");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("json: ") + e.what());
    }
}

inline std::string serialize(const SpectrumSeries& s, OutputFormat f) {
    return f == OutputFormat::json ? to_json_text(s) : to_csv(s);
}

inline SpectrumSeries deserialize(std::string_view text, OutputFormat f) {
    return f == OutputFormat::json ? from_json(text) : from_csv(text);
}

/// Writes to `path`, or to stdout when `path` is empty or "-".
inline void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + path + "' failed");
}

inline void write_series(const SpectrumSeries& s, OutputFormat f, const std::string& path) {
    write_text(serialize(s, f), path);
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace cqnc
