#include "rfds/kv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rfds::kv {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw Error::data(source + ":" + std::to_string(line) + ": " + msg);
}

Entry parse_entry(const std::string& line_text, const std::string& source, int line) {
    const std::size_t eq = line_text.find('=');
    if (eq == std::string::npos) fail(source, line, "expected 'key = value'");
    Entry e;
    e.key = strip(line_text.substr(0, eq));
    e.value = strip(line_text.substr(eq + 1));
    e.line = line;
    if (e.key.empty()) fail(source, line, "empty key");
    return e;
}

}  // namespace

const Entry* Doc::find(const std::string& key) const {
    for (const auto& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

Doc parse(const std::string& text, const std::string& source_name) {
    Doc doc;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    Block* open_block = nullptr;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = strip(raw);
        if (s.empty()) continue;

        if (s == "}") {
            if (!open_block) fail(source_name, line, "'}' without an open block");
            open_block = nullptr;
            continue;
        }
        if (s.size() >= 1 && s.back() == '{') {
            if (open_block) fail(source_name, line, "blocks do not nest");
            Block b;
            b.name = strip(s.substr(0, s.size() - 1));
            b.line = line;
            if (b.name.empty()) fail(source_name, line, "block needs a name");
            doc.blocks.push_back(std::move(b));
            open_block = &doc.blocks.back();
            continue;
        }
        Entry e = parse_entry(s, source_name, line);
        if (open_block) {
            open_block->entries.push_back(std::move(e));
        } else {
            doc.entries.push_back(std::move(e));
        }
    }
    if (open_block) fail(source_name, line, "unterminated block '" + open_block->name + "'");
    return doc;
}

Doc parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::data("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

double to_double(const Entry& e, const std::string& source) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || errno == ERANGE)
        fail(source, e.line, "key '" + e.key + "': expected a number, got '" + e.value + "'");
    return v;
}

long long to_int(const Entry& e, const std::string& source) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0' || errno == ERANGE)
        fail(source, e.line, "key '" + e.key + "': expected an integer, got '" + e.value + "'");
    return v;
}

std::size_t to_size(const Entry& e, const std::string& source) {
    const long long v = to_int(e, source);
    if (v < 0) fail(source, e.line, "key '" + e.key + "': expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool to_bool(const Entry& e, const std::string& source) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(source, e.line, "key '" + e.key + "': expected true/false, got '" + e.value + "'");
}

std::vector<double> to_double_list(const Entry& e, const std::string& source) {
    std::vector<double> out;
    std::string piece;
    std::istringstream in(e.value);
    while (std::getline(in, piece, ',')) {
        errno = 0;
        char* end = nullptr;
        const std::string t = strip(piece);
        const double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() || *end != '\0' || errno == ERANGE)
            fail(source, e.line, "key '" + e.key + "': bad list element '" + t + "'");
        out.push_back(v);
    }
    if (out.empty()) fail(source, e.line, "key '" + e.key + "': empty list");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_entry(const std::string& key, const std::string& value) {
    return key + " = " + value + "\n";
}

}  // namespace rfds::kv
