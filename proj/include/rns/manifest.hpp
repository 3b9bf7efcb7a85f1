#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rns {

/// Ordered key = value record describing one run. Setting an existing key
/// overwrites it in place.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

    const std::string* find(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    void write(std::ostream& out) const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal form that round-trips.
std::string format_double(double value);

}  // namespace rns
