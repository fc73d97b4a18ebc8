#ifndef PI_FORGE_CHECKPOINT_HPP
#define PI_FORGE_CHECKPOINT_HPP

/* Binary checkpoint files for resumable runs.
 *
 * Layout (all integers big-endian):
 *   magic "PIFG" | version u32 | algorithm u8 | 3 reserved zero bytes |
 *   target_n u64 | steps_done u64 | mantissa_count u32 |
 *   mantissa_count x (length u64 | magnitude bytes, most significant first) |
 *   crc32 u32 over everything before it
 *
 * The mantissa list is algorithm-specific but always starts with the working
 * magnifier so a resume can refuse a mismatched configuration.  Any damage
 * (bad magic, truncation, checksum mismatch) is a hard error: a resume never
 * silently starts over on top of a corrupt file. */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pi_forge {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointData {
    std::uint8_t algorithm = 0; /* 0 = borwein, 1 = salamin */
    std::uint64_t target_n = 0;
    std::uint64_t steps_done = 0;
    std::vector<mpz_class> mantissas;
};

/* Atomic: writes path + ".tmp", then renames over path. */
void write_checkpoint(const std::string& path, const CheckpointData& data);

/* nullopt when the file does not exist; CheckpointError on any corruption. */
std::optional<CheckpointData> read_checkpoint(const std::string& path);

namespace detail {
std::uint32_t crc32(const unsigned char* data, std::size_t len);
}

} // namespace pi_forge

#endif
