#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charp/errors.hpp"

namespace charp {

/// One parsed value from a problem file: integer, quoted string, or list.
struct Value {
    enum class Kind { Int, Str, List };
    Kind kind = Kind::Int;
    long long i = 0;
    std::string s;
    std::vector<Value> list;
    int line = 0;
};

/// Parsed key = value blocks under [section] headers.
struct ProblemFile {
    std::map<std::string, std::map<std::string, Value>> sections;

    bool has(const std::string& section) const { return sections.count(section) > 0; }
    bool has(const std::string& section, const std::string& key) const;

    const Value& get(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key) const;
    long long get_int_or(const std::string& section, const std::string& key, long long fallback) const;
    const std::string& get_str(const std::string& section, const std::string& key) const;
    std::vector<long long> get_int_list(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_str_list(const std::string& section, const std::string& key) const;
    std::vector<std::vector<long long>> get_int_matrix(const std::string& section, const std::string& key) const;
};

/// Parse the key = value block format; positions are 1-based.
/// Throws ParseError with line/column and the expected-token set.
ProblemFile parse_problem(const std::string& text);

}  // namespace charp
