#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "ringgesn/errors.hpp"

namespace ringgesn {

struct ZipEntry {
    std::string name;
    std::string data;
};

namespace detail {

inline std::uint32_t read_le(std::string_view buf, std::size_t at, int bytes) {
    if (at + static_cast<std::size_t>(bytes) > buf.size()) throw ExtractionError("zip: truncated archive");
    std::uint32_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(buf[at + static_cast<std::size_t>(i)]);
    return v;
}

inline std::string inflate_raw(std::string_view compressed, std::size_t expected_size) {
    std::string out(expected_size, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ExtractionError("zip: inflateInit failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const auto produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size)
        throw ExtractionError("zip: corrupt deflate stream");
    return out;
}

}  // namespace detail

/// Reads every file entry of a (non-zip64) archive held in memory. Supports
/// stored and deflated entries and verifies their CRC-32.
inline std::vector<ZipEntry> read_zip(std::string_view archive) {
    constexpr std::uint32_t kEnd = 0x06054b50, kCentral = 0x02014b50, kLocal = 0x04034b50;
    if (archive.size() < 22) throw ExtractionError("zip: archive too small");
    std::size_t end = std::string_view::npos;
    const std::size_t lowest = archive.size() > 22 + 65535 ? archive.size() - 22 - 65535 : 0;
    for (std::size_t p = archive.size() - 22 + 1; p-- > lowest;)
        if (detail::read_le(archive, p, 4) == kEnd) {
            end = p;
            break;
        }
    if (end == std::string_view::npos) throw ExtractionError("zip: end of central directory not found");

    const std::uint32_t count = detail::read_le(archive, end + 10, 2);
    std::size_t at = detail::read_le(archive, end + 16, 4);
    std::vector<ZipEntry> entries;
    for (std::uint32_t e = 0; e < count; ++e) {
        if (detail::read_le(archive, at, 4) != kCentral) throw ExtractionError("zip: bad central directory");
        const auto method = detail::read_le(archive, at + 10, 2);
        const auto crc = detail::read_le(archive, at + 16, 4);
        const auto packed = detail::read_le(archive, at + 20, 4);
        const auto size = detail::read_le(archive, at + 24, 4);
        const auto name_len = detail::read_le(archive, at + 28, 2);
        const auto extra_len = detail::read_le(archive, at + 30, 2);
        const auto comment_len = detail::read_le(archive, at + 32, 2);
        const auto local = detail::read_le(archive, at + 42, 4);
        if (at + 46 + name_len > archive.size()) throw ExtractionError("zip: truncated archive");
        std::string name(archive.substr(at + 46, name_len));
        at += 46 + name_len + extra_len + comment_len;

        if (packed == 0xffffffffu || size == 0xffffffffu) throw ExtractionError("zip: zip64 is not supported");
        if (!name.empty() && name.back() == '/') continue;

        if (detail::read_le(archive, local, 4) != kLocal) throw ExtractionError("zip: bad local header");
        const std::size_t data_at =
            local + 30 + detail::read_le(archive, local + 26, 2) + detail::read_le(archive, local + 28, 2);
        if (data_at + packed > archive.size()) throw ExtractionError("zip: truncated entry " + name);
        const auto raw = archive.substr(data_at, packed);

        std::string data;
        if (method == 0) {
            if (packed != size) throw ExtractionError("zip: stored entry size mismatch");
            data.assign(raw);
        } else if (method == 8) {
            data = detail::inflate_raw(raw, size);
        } else {
            throw ExtractionError("zip: unsupported compression method " + std::to_string(method));
        }
        const auto actual = crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
        if (actual != crc) throw ExtractionError("zip: CRC mismatch in " + name);
        entries.push_back({std::move(name), std::move(data)});
    }
    return entries;
}

}  // namespace ringgesn
