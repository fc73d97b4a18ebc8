#include "pi_forge/checkpoint.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace pi_forge {

namespace detail {

std::uint32_t crc32(const unsigned char* data, std::size_t len) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int bit = 0; bit < 8; ++bit)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i)
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

} // namespace detail

namespace {

constexpr char kMagic[4] = {'P', 'I', 'F', 'G'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<unsigned char>(v >> shift));
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<unsigned char>(v >> shift));
}

std::uint32_t get_u32(const unsigned char* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | p[i];
    return v;
}

} // namespace

void write_checkpoint(const std::string& path, const CheckpointData& data) {
    std::vector<unsigned char> buf;
    buf.insert(buf.end(), kMagic, kMagic + 4);
    put_u32(buf, kVersion);
    buf.push_back(data.algorithm);
    buf.insert(buf.end(), {0, 0, 0});
    put_u64(buf, data.target_n);
    put_u64(buf, data.steps_done);
    put_u32(buf, static_cast<std::uint32_t>(data.mantissas.size()));
    for (const mpz_class& z : data.mantissas) {
        if (z < 0)
            throw CheckpointError("checkpoint: negative mantissa");
        std::size_t count = 0;
        std::vector<unsigned char> bytes;
        if (z != 0) {
            bytes.resize((mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8);
            mpz_export(bytes.data(), &count, 1, 1, 1, 0, z.get_mpz_t());
            bytes.resize(count);
        }
        put_u64(buf, bytes.size());
        buf.insert(buf.end(), bytes.begin(), bytes.end());
    }
    put_u32(buf, detail::crc32(buf.data(), buf.size()));

    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CheckpointError("checkpoint: cannot open " + tmp);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
        out.flush();
        if (!out)
            throw CheckpointError("checkpoint: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw CheckpointError("checkpoint: rename failed for " + path);
}

std::optional<CheckpointData> read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::vector<unsigned char> buf(
        (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const std::size_t kHeader = 4 + 4 + 1 + 3 + 8 + 8 + 4;
    if (buf.size() < kHeader + 4)
        throw CheckpointError("checkpoint: file truncated");
    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw CheckpointError("checkpoint: bad magic");
    if (get_u32(buf.data() + 4) != kVersion)
        throw CheckpointError("checkpoint: unsupported version");

    std::uint32_t stored_crc = get_u32(buf.data() + buf.size() - 4);
    std::uint32_t actual_crc = detail::crc32(buf.data(), buf.size() - 4);
    if (stored_crc != actual_crc)
        throw CheckpointError("checkpoint: checksum mismatch");

    CheckpointData data;
    data.algorithm = buf[8];
    data.target_n = get_u64(buf.data() + 12);
    data.steps_done = get_u64(buf.data() + 20);
    std::uint32_t count = get_u32(buf.data() + 28);
    std::size_t pos = 32;
    const std::size_t end = buf.size() - 4;
    for (std::uint32_t i = 0; i < count; ++i) {
        if (pos + 8 > end)
            throw CheckpointError("checkpoint: file truncated");
        std::uint64_t len = get_u64(buf.data() + pos);
        pos += 8;
        if (len > end - pos)
            throw CheckpointError("checkpoint: file truncated");
        mpz_class z = 0;
        if (len > 0)
            mpz_import(z.get_mpz_t(), static_cast<std::size_t>(len), 1, 1, 1,
                       0, buf.data() + pos);
        pos += static_cast<std::size_t>(len);
        data.mantissas.push_back(z);
    }
    if (pos != end)
        throw CheckpointError("checkpoint: trailing bytes");
    return data;
}

} // namespace pi_forge
