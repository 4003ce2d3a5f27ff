#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcodr::report {

/// Bumped whenever a column is added, removed or renamed.
inline constexpr int kOutputSchemaVersion = 1;

std::string sha256_hex(std::string_view bytes);
/// Throws DataError(Io) when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

std::string cell(double v);
std::string cell(const std::optional<double>& v);

/// Buffers a CSV table and writes it in one go. Fields containing commas or
/// quotes are quoted.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> fields);
    std::size_t rows() const noexcept { return rows_; }
    const std::string& text() const noexcept { return text_; }

    /// Throws DataError(Io) on failure.
    void write(const std::filesystem::path& path) const;

private:
    void append(const std::vector<std::string>& fields);

    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

}  // namespace lcodr::report
