#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "congestcut/errors.hpp"

namespace congestcut {

/**
 * Append-only bit buffer used as a message payload.  Sizes are tracked in
 * bits, not bytes, so budget accounting is exact even for odd widths.
 */
class BitString {
public:
    void append(std::uint64_t value, int width) {
        if (width < 0 || width > 64)
            throw InvalidParameter("bit field width out of range");
        if (width < 64 && (value >> width) != 0)
            throw InvalidParameter("bit field value does not fit its width");
        std::size_t pos = nbits_;
        nbits_ += static_cast<std::size_t>(width);
        words_.resize((nbits_ + 63) / 64, 0);
        int done = 0;
        while (done < width) {
            std::size_t word = (pos + done) / 64;
            int offset = static_cast<int>((pos + done) % 64);
            int take = std::min(64 - offset, width - done);
            std::uint64_t chunk = (value >> done) & mask(take);
            words_[word] |= chunk << offset;
            done += take;
        }
    }

    std::uint64_t read(std::size_t& pos, int width) const {
        if (width < 0 || width > 64)
            throw InvalidParameter("bit field width out of range");
        if (pos + static_cast<std::size_t>(width) > nbits_)
            throw InvalidParameter("bit read past end of message");
        std::uint64_t out = 0;
        int done = 0;
        while (done < width) {
            std::size_t word = (pos + done) / 64;
            int offset = static_cast<int>((pos + done) % 64);
            int take = std::min(64 - offset, width - done);
            std::uint64_t chunk = (words_[word] >> offset) & mask(take);
            out |= chunk << done;
            done += take;
        }
        pos += static_cast<std::size_t>(width);
        return out;
    }

    std::size_t size_bits() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }
    void clear() {
        words_.clear();
        nbits_ = 0;
    }

    bool operator==(const BitString& other) const {
        return nbits_ == other.nbits_ && words_ == other.words_;
    }

private:
    static std::uint64_t mask(int width) {
        return width >= 64 ? ~0ull : ((1ull << width) - 1);
    }

    std::vector<std::uint64_t> words_;
    std::size_t nbits_ = 0;
};

/** Width in bits of the smallest field that can hold values 0..max_value. */
inline int bit_width_for(std::uint64_t max_value) {
    int w = 1;
    while (w < 64 && (max_value >> w) != 0) ++w;
    return w;
}

}  // namespace congestcut
