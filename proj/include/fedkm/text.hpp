#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace fedkm {

/// Shortest decimal string that round-trips to exactly the same double.
/// Keeps result files byte-stable across runs and platforms.
inline std::string format_double(double value) {
    char buffer[64];
    const std::to_chars_result res = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buffer, res.ptr);
}

inline double parse_double(std::string_view text) {
    double value = 0.0;
    const std::from_chars_result res =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::runtime_error("parse_double: bad number '" + std::string(text) + "'");
    return value;
}

inline std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const std::from_chars_result res =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::runtime_error("parse_int: bad integer '" + std::string(text) + "'");
    return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace fedkm
