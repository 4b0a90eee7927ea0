#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "wedgefill/types.hpp"

namespace wedgefill {

/// Flat key=value configuration with [section] headers; keys are stored
/// as "section.key". '#' starts a comment, blank lines are ignored.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_stream(std::istream& in, const std::string& origin = "<stream>");

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    /// Comma-separated list of numbers.
    std::vector<double> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace wedgefill
