#include "lcodr/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "lcodr/errors.hpp"
#include "lcodr/format.hpp"

namespace lcodr::report {

namespace {

using MdContext = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

std::string to_hex(const unsigned char* bytes, unsigned len) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += kDigits[bytes[i] >> 4];
        out += kDigits[bytes[i] & 0xF];
    }
    return out;
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("SHA-256 initialisation failed");
        }
    }
    void update(const void* data, std::size_t len) {
        if (EVP_DigestUpdate(ctx_.get(), data, len) != 1) throw std::runtime_error("SHA-256 update failed");
    }
    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
            throw std::runtime_error("SHA-256 finalisation failed");
        }
        return to_hex(md.data(), len);
    }

private:
    MdContext ctx_;
};

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataError::Kind::Io, "cannot open '" + path.string() + "'");
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

std::string cell(double v) { return format_number(v); }

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) { append(header); }

void CsvTable::add_row(std::vector<std::string> fields) {
    if (fields.size() != columns_) {
        throw std::logic_error("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(columns_));
    }
    append(fields);
    ++rows_;
}

void CsvTable::append(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) text_ += ',';
        text_ += quote_if_needed(fields[i]);
    }
    text_ += '\n';
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text_;
    out.flush();
    if (!out) throw DataError(DataError::Kind::Io, "cannot write '" + path.string() + "'");
}

}  // namespace lcodr::report
