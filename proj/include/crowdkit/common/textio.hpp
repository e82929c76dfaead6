#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace crowdkit {

// Fixed-format double for text outputs. Always produces the same bytes for
// the same value (round-trips doubles exactly is not required; rerun
// stability is).
std::string fmt_double(double v);

std::string trim(const std::string& s);

// Split on whitespace, skipping empty tokens.
std::vector<std::string> split_ws(const std::string& line);

std::vector<std::string> split_char(const std::string& line, char sep);

double parse_double(const std::string& token, const std::string& what = "number");
long parse_long(const std::string& token, const std::string& what = "integer");

// Read all lines of a text file; throws std::runtime_error if unreadable.
std::vector<std::string> read_lines(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

// Flat "key = value" config files. '#' starts a comment, blank lines are
// ignored, later keys override earlier ones. Missing file -> error.
class Config {
  public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_lines(const std::vector<std::string>& lines);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get(const std::string& key, double fallback) const;
    long get(const std::string& key, long fallback) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace crowdkit
