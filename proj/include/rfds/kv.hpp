#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rfds/types.hpp"

namespace rfds::kv {

/// One `key = value` line. Line numbers are kept for diagnostics.
struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

/// A `name { ... }` block of entries. Blocks do not nest.
struct Block {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;
};

/// Parsed document: top-level entries plus named blocks, in file order.
struct Doc {
    std::vector<Entry> entries;
    std::vector<Block> blocks;

    const Entry* find(const std::string& key) const;
};

/// Parse the flat key-value dialect shared by config, scene, mapping and
/// report files. `#` starts a comment. Errors carry `source:line`.
Doc parse(const std::string& text, const std::string& source_name);

Doc parse_file(const std::string& path);

// Value conversions with line-anchored diagnostics.
double to_double(const Entry& e, const std::string& source);
long long to_int(const Entry& e, const std::string& source);
std::size_t to_size(const Entry& e, const std::string& source);
bool to_bool(const Entry& e, const std::string& source);
std::vector<double> to_double_list(const Entry& e, const std::string& source);

/// Format a double so that parsing it back reproduces the exact bits.
std::string format_double(double v);

std::string format_entry(const std::string& key, const std::string& value);

}  // namespace rfds::kv
